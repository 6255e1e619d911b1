//! n-plectic structures on a chart and the Lie n-algebra of Hamiltonian
//! forms.
//!
//! Sign convention: `β` is Hamiltonian with field `u` when `dβ = −ι_u ω`.
//! Nondegeneracy is certified over the rational-function field (generic
//! rank) and at user-supplied points; nothing is claimed elsewhere.

pub mod linalg;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::Rng;
use thiserror::Error;

use crate::arith::{format_rational, Rational, RationalFunction};
use crate::exterior::{Chart, DifferentialForm, ExteriorError, MultivectorField};
use crate::graded::{combinations, koszul_sign, unshuffles, Sign};
use crate::report::{Report, Residual};
use crate::sample::Sampler;

use linalg::{kernel_vector, solve, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlecticError {
    #[error("expected a form of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("an (n+1)-form with n = {n} needs dimension at least {}, chart has {dim}", n + 1)]
    DimensionTooSmall { n: usize, dim: usize },
    #[error("n must be at least 1")]
    InvalidN,
    #[error("form is not closed: d omega = {0}")]
    NotClosed(String),
    #[error("form is degenerate over the function field: kernel vector {0}")]
    GenericallyDegenerate(String),
    #[error("form is degenerate at {point}: kernel vector {kernel}")]
    DegenerateAtPoint { point: String, kernel: String },
    #[error("form is not Hamiltonian: {0}")]
    NotHamiltonian(String),
    #[error("arity {k} outside 1..={max}")]
    ArityOutOfRange { k: usize, max: usize },
    #[error("level {level} outside {min}..=0")]
    LevelMismatch { level: i64, min: i64 },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// `ξ(k) = −(−1)^{k(k+1)/2}`.
pub fn xi(k: usize) -> Sign {
    -Sign::power((k * (k + 1) / 2) as i64)
}

type Memo = Arc<RwLock<HashMap<String, MultivectorField>>>;

/// `(M, ω)` with `ω` a closed, generically nondegenerate `(n+1)`-form.
#[derive(Clone)]
pub struct PlecticManifold {
    chart: Chart,
    n: usize,
    omega: DifferentialForm,
    samples: Vec<Vec<Rational>>,
    /// Row `I` (an `n`-subset), column `j`: component `I` of `ι_{∂j} ω`.
    matrix: Arc<Vec<Vec<RationalFunction>>>,
    rows: Arc<Vec<Vec<usize>>>,
    memo: Memo,
}

impl fmt::Debug for PlecticManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlecticManifold")
            .field("chart", &self.chart)
            .field("n", &self.n)
            .field("omega", &self.omega.to_string())
            .finish()
    }
}

/// Row index tuples and the matrix itself.
type ContractionMatrix = (Vec<Vec<usize>>, Vec<Vec<RationalFunction>>);

/// Matrix of `v ↦ ι_v ω` in coordinates: one row per index tuple of the
/// contraction, one column per coordinate field.
fn contraction_matrix(omega: &DifferentialForm) -> Result<ContractionMatrix, PlecticError> {
    let chart = omega.chart();
    let d = chart.dim();
    let rows = combinations(&(0..d).collect::<Vec<_>>(), omega.degree().saturating_sub(1));
    let contractions: Vec<DifferentialForm> =
        (0..d).map(|j| omega.interior(&MultivectorField::coordinate_field(chart, j))).collect::<Result<_, _>>()?;
    let matrix = rows.iter().map(|r| contractions.iter().map(|c| c.component(r)).collect()).collect();
    Ok((rows, matrix))
}

fn kernel_of(matrix: &[Vec<RationalFunction>], chart: &Chart) -> Result<Option<MultivectorField>, PlecticError> {
    let zero = RationalFunction::zero(chart.vars());
    match kernel_vector(matrix, chart.dim(), &zero) {
        Some(k) => Ok(Some(MultivectorField::vector(chart, k)?)),
        None => Ok(None),
    }
}

/// A nonzero vector field `v` with `ι_v ω = 0` over the field of rational
/// functions, or `None` when `ω` is generically nondegenerate. Closedness is
/// not required.
pub fn generic_kernel(omega: &DifferentialForm) -> Result<Option<MultivectorField>, PlecticError> {
    if omega.degree() == 0 {
        return Err(PlecticError::DegreeMismatch { expected: 1, found: 0 });
    }
    let (_, matrix) = contraction_matrix(omega)?;
    kernel_of(&matrix, omega.chart())
}

fn point_string(chart: &Chart, p: &[Rational]) -> String {
    let parts: Vec<String> =
        chart.vars().names().iter().zip(p).map(|(v, c)| format!("{v}:{}", format_rational(c))).collect();
    format!("{{{}}}", parts.join(", "))
}

impl PlecticManifold {
    /// Checks closedness, generic nondegeneracy and full rank at each sample
    /// point (coordinates in chart order).
    pub fn new(
        chart: &Chart,
        n: usize,
        omega: DifferentialForm,
        samples: Vec<Vec<Rational>>,
    ) -> Result<Self, PlecticError> {
        if n == 0 {
            return Err(PlecticError::InvalidN);
        }
        if omega.chart() != chart {
            return Err(ExteriorError::ChartMismatch(chart.name().to_string(), omega.chart().name().to_string()).into());
        }
        if omega.degree() != n + 1 {
            return Err(PlecticError::DegreeMismatch { expected: n + 1, found: omega.degree() });
        }
        let d = chart.dim();
        if n + 1 > d {
            return Err(PlecticError::DimensionTooSmall { n, dim: d });
        }
        let domega = omega.exterior_derivative();
        if !domega.is_zero() {
            return Err(PlecticError::NotClosed(domega.to_string()));
        }
        let (rows, matrix) = contraction_matrix(&omega)?;
        if let Some(k) = kernel_of(&matrix, chart)? {
            return Err(PlecticError::GenericallyDegenerate(k.to_string()));
        }
        for p in &samples {
            if p.len() != d {
                return Err(ExteriorError::DegreeMismatch(d, p.len()).into());
            }
            let evaluated: Result<Vec<Vec<Rational>>, _> =
                matrix.iter().map(|row| row.iter().map(|e| e.evaluate_at(p)).collect()).collect();
            let degenerate = match evaluated {
                Err(_) => Some("undefined".to_string()),
                Ok(m) => kernel_vector(&m, d, &Rational::from_integer(0.into())).map(|k| {
                    let comps = k.into_iter().map(|c| RationalFunction::constant(chart.vars(), c)).collect();
                    MultivectorField::vector(chart, comps).expect("dimension matches").to_string()
                }),
            };
            if let Some(kernel) = degenerate {
                return Err(PlecticError::DegenerateAtPoint { point: point_string(chart, p), kernel });
            }
        }
        Ok(PlecticManifold {
            chart: chart.clone(),
            n,
            omega,
            samples,
            matrix: Arc::new(matrix),
            rows: Arc::new(rows),
            memo: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn samples(&self) -> &[Vec<Rational>] {
        &self.samples
    }

    fn check_form(&self, alpha: &DifferentialForm, degree: usize) -> Result<(), PlecticError> {
        if alpha.chart() != &self.chart {
            return Err(
                ExteriorError::ChartMismatch(self.chart.name().to_string(), alpha.chart().name().to_string()).into()
            );
        }
        if alpha.degree() != degree {
            return Err(PlecticError::DegreeMismatch { expected: degree, found: alpha.degree() });
        }
        Ok(())
    }

    /// The unique `u` with `ι_u ω = −dα`.
    pub fn hamiltonian_vf(&self, alpha: &DifferentialForm) -> Result<MultivectorField, PlecticError> {
        self.check_form(alpha, self.n - 1)?;
        let key = alpha.to_string();
        if let Some(u) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(u.clone());
        }
        let rhs: Vec<RationalFunction> = {
            let da = alpha.exterior_derivative();
            self.rows.iter().map(|r| -&da.component(r)).collect()
        };
        let zero = RationalFunction::zero(self.chart.vars());
        let u = match solve(&self.matrix, &rhs, self.chart.dim(), &zero) {
            Solution::Unique(v) => MultivectorField::vector(&self.chart, v)?,
            Solution::Inconsistent => return Err(PlecticError::NotHamiltonian(key)),
            Solution::Underdetermined { kernel, .. } => {
                return Err(PlecticError::GenericallyDegenerate(
                    MultivectorField::vector(&self.chart, kernel)?.to_string(),
                ))
            }
        };
        self.memo.write().expect("memo lock").insert(key, u.clone());
        Ok(u)
    }

    pub fn is_hamiltonian(&self, alpha: &DifferentialForm) -> bool {
        self.hamiltonian_vf(alpha).is_ok()
    }

    pub fn hamiltonian_pair(&self, alpha: &DifferentialForm) -> Result<HamiltonianPair, PlecticError> {
        let u = self.hamiltonian_vf(alpha)?;
        Ok(HamiltonianPair { alpha: alpha.clone(), u })
    }

    /// `d ι_v ω = 0`.
    pub fn is_locally_hamiltonian(&self, v: &MultivectorField) -> Result<bool, PlecticError> {
        Ok(self.omega.interior(v)?.exterior_derivative().is_zero())
    }

    /// `{α, β} = ι_{u_β} ι_{u_α} ω`.
    pub fn bracket2(
        &self,
        alpha: &DifferentialForm,
        beta: &DifferentialForm,
    ) -> Result<DifferentialForm, PlecticError> {
        let ua = self.hamiltonian_vf(alpha)?;
        let ub = self.hamiltonian_vf(beta)?;
        Ok(self.omega.interior(&ua)?.interior(&ub)?)
    }

    /// `ι(v₁∧⋯∧v_k) ω`.
    pub fn contract_fields(&self, vs: &[MultivectorField]) -> Result<DifferentialForm, PlecticError> {
        let mut w = MultivectorField::constant(&self.chart, Rational::from_integer(1.into()));
        for v in vs {
            w = w.try_wedge(v)?;
        }
        Ok(self.omega.interior(&w)?)
    }

    /// Element of `L(M,ω)` at `level`, a form of degree `n−1+level`; level-0
    /// elements must be Hamiltonian.
    pub fn element(&self, level: i64, form: DifferentialForm) -> Result<LElement, PlecticError> {
        let min = 1 - self.n as i64;
        if !(min..=0).contains(&level) {
            return Err(PlecticError::LevelMismatch { level, min });
        }
        self.check_form(&form, (self.n as i64 - 1 + level) as usize)?;
        if level == 0 {
            self.hamiltonian_vf(&form)?;
        }
        Ok(LElement { level, form })
    }

    fn zero_at(&self, level: i64) -> LElement {
        let degree = (self.n as i64 - 1 + level).max(0) as usize;
        LElement { level, form: DifferentialForm::zero(&self.chart, degree) }
    }

    /// `π(e)`, the Hamiltonian field of a level-0 element.
    pub fn field_of(&self, e: &LElement) -> Result<MultivectorField, PlecticError> {
        if e.level != 0 {
            return Err(PlecticError::LevelMismatch { level: e.level, min: 0 });
        }
        self.hamiltonian_vf(&e.form)
    }

    /// The multibracket `l_k` of `L(M,ω)`: `l₁ = d` below level 0;
    /// `ξ(k) ι(u₁∧⋯∧u_k) ω` on level-0 arguments; zero otherwise.
    pub fn lk_bracket(&self, elements: &[LElement]) -> Result<LElement, PlecticError> {
        let k = elements.len();
        if k == 0 || k > self.n + 1 {
            return Err(PlecticError::ArityOutOfRange { k, max: self.n + 1 });
        }
        let total: i64 = elements.iter().map(|e| e.level).sum();
        let out = 2 - k as i64 + total;
        if elements.iter().any(|e| e.is_zero()) {
            return Ok(self.zero_at(out));
        }
        if k == 1 {
            let e = &elements[0];
            return Ok(if e.level < 0 {
                LElement { level: out, form: e.form.exterior_derivative() }
            } else {
                self.zero_at(out)
            });
        }
        if total < 0 {
            return Ok(self.zero_at(out));
        }
        let fields = elements.iter().map(|e| self.field_of(e)).collect::<Result<Vec<_>, _>>()?;
        let form = self.contract_fields(&fields)?.scale_sign(xi(k));
        Ok(LElement { level: out, form })
    }

    /// `{α₁,{α₂,α₃}} − {{α₁,α₂},α₃} − {α₂,{α₁,α₃}}` against
    /// `−d ι(v₁∧v₂∧v₃) ω`.
    pub fn jacobiator_check(
        &self,
        a1: &DifferentialForm,
        a2: &DifferentialForm,
        a3: &DifferentialForm,
    ) -> Result<JacobiatorCheck, PlecticError> {
        let b = |x: &DifferentialForm, y: &DifferentialForm| self.bracket2(x, y);
        let lhs = &(&b(a1, &b(a2, a3)?)? - &b(&b(a1, a2)?, a3)?) - &b(a2, &b(a1, a3)?)?;
        let vs = [self.hamiltonian_vf(a1)?, self.hamiltonian_vf(a2)?, self.hamiltonian_vf(a3)?];
        let rhs = -&self.contract_fields(&vs)?.exterior_derivative();
        Ok(JacobiatorCheck { lhs, rhs })
    }

    /// `d ι_{u₁∧u₂} ω + ι_{[u₁,u₂]} ω` and `π({α,β}) − [π(α), π(β)]`; both
    /// vanish for Hamiltonian inputs.
    pub fn commutator_compat(
        &self,
        alpha: &DifferentialForm,
        beta: &DifferentialForm,
    ) -> Result<CommutatorCheck, PlecticError> {
        let (u1, u2) = (self.hamiltonian_vf(alpha)?, self.hamiltonian_vf(beta)?);
        let br = u1.vf_bracket(&u2)?;
        let form_defect =
            &self.contract_fields(&[u1.clone(), u2.clone()])?.exterior_derivative() + &self.omega.interior(&br)?;
        let field_defect = &self.hamiltonian_vf(&self.bracket2(alpha, beta)?)? - &br;
        Ok(CommutatorCheck { form_defect, field_defect })
    }

    /// `d ι(v₁∧⋯∧v_k) ω − (−1)^k Σ_{i<j} (−1)^{i+j} ι([v_i,v_j]∧v₁⋯v̂_i⋯v̂_j⋯v_k) ω`,
    /// which vanishes when every `v_i` preserves `ω`.
    pub fn wedge_bracket_defect(&self, vs: &[MultivectorField]) -> Result<DifferentialForm, PlecticError> {
        let k = vs.len();
        let mut acc = self.contract_fields(vs)?.exterior_derivative();
        for i in 0..k {
            for j in i + 1..k {
                let mut args = vec![vs[i].vf_bracket(&vs[j])?];
                args.extend(vs.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, v)| v.clone()));
                let term = self.contract_fields(&args)?;
                // 1-indexed: (−1)^{k + (i+1) + (j+1)}
                let sign = Sign::power((k + i + j + 2) as i64);
                acc = acc.try_add(&term.scale_sign(-sign))?;
            }
        }
        Ok(acc)
    }

    /// Residual of the generalized Jacobi identity with the brackets of
    /// `L(M,ω)`, levels as degrees.
    pub fn lie_n_residual(&self, xs: &[LElement]) -> Result<LElement, PlecticError> {
        let m = xs.len();
        let levels: Vec<i64> = xs.iter().map(|x| x.level).collect();
        let out_level = 3 - m as i64 + levels.iter().sum::<i64>();
        let mut acc: Option<DifferentialForm> = None;
        for i in 1..=m {
            let j = m + 1 - i;
            if i > self.n + 1 || j > self.n + 1 {
                continue;
            }
            for sigma in unshuffles(i, m - i) {
                let perm = sigma.permute(xs);
                let inner = self.lk_bracket(&perm[..i])?;
                if inner.is_zero() {
                    continue;
                }
                let mut args = vec![inner];
                args.extend(perm[i..].iter().cloned());
                let outer = self.lk_bracket(&args)?;
                if outer.is_zero() {
                    continue;
                }
                let sign = sigma.parity()
                    * koszul_sign(&sigma, &levels).expect("lengths agree")
                    * Sign::power((i * (j - 1)) as i64);
                let term = outer.form.scale_sign(sign);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.try_add(&term)?,
                });
            }
        }
        Ok(match acc {
            Some(form) if !form.is_zero() => LElement { level: out_level, form },
            _ => self.zero_at(out_level),
        })
    }

    /// Generalized Jacobi residuals on the supplied tuples (arity = tuple
    /// length, at most `m_max`).
    pub fn verify_lie_n_algebra(&self, m_max: usize, tuples: &[Vec<LElement>]) -> Result<Report, PlecticError> {
        let mut report = Report::new();
        for t in tuples.iter().filter(|t| t.len() <= m_max) {
            let r = self.lie_n_residual(t)?;
            report.push(Residual::new(
                "lie-n-algebra",
                t.len(),
                t.iter().map(|e| e.form.to_string()).collect(),
                format!("m={}", t.len()),
                r.form.to_string(),
                !r.is_zero(),
            ));
        }
        Ok(report)
    }

    /// A random Hamiltonian `(n−1)`-form: random forms are tried first and,
    /// failing that, an exact form is used.
    pub fn random_hamiltonian(&self, sampler: &mut Sampler) -> DifferentialForm {
        for _ in 0..20 {
            let a = sampler.form(&self.chart, self.n - 1);
            if self.is_hamiltonian(&a) {
                return a;
            }
        }
        if self.n >= 2 {
            sampler.form(&self.chart, self.n - 2).exterior_derivative()
        } else {
            DifferentialForm::zero(&self.chart, 0)
        }
    }

    /// Random element at `level`.
    pub fn random_element(&self, sampler: &mut Sampler, level: i64) -> LElement {
        let form = if level == 0 {
            self.random_hamiltonian(sampler)
        } else {
            sampler.form(&self.chart, (self.n as i64 - 1 + level) as usize)
        };
        LElement { level, form }
    }

    /// `count` random tuples for each arity `1..=m_max`; level 0 with
    /// probability ½, otherwise a uniformly chosen negative level.
    pub fn random_tuples(&self, sampler: &mut Sampler, m_max: usize, count: usize) -> Vec<Vec<LElement>> {
        let min = 1 - self.n as i64;
        let mut out = Vec::new();
        for m in 1..=m_max {
            for _ in 0..count {
                let t = (0..m)
                    .map(|_| {
                        let level =
                            if min == 0 || sampler.rng().gen_bool(0.5) { 0 } else { sampler.rng().gen_range(min..0) };
                        self.random_element(sampler, level)
                    })
                    .collect();
                out.push(t);
            }
        }
        out
    }
}

/// `(α, u)` with `dα = −ι_u ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPair {
    pub alpha: DifferentialForm,
    pub u: MultivectorField,
}

/// Homogeneous element of `L(M,ω)`. Levels outside `1−n..=0` only occur as
/// zero bracket outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LElement {
    level: i64,
    form: DifferentialForm,
}

impl LElement {
    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiatorCheck {
    pub lhs: DifferentialForm,
    pub rhs: DifferentialForm,
}

impl JacobiatorCheck {
    pub fn holds(&self) -> bool {
        (&self.lhs - &self.rhs).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorCheck {
    pub form_defect: DifferentialForm,
    pub field_defect: MultivectorField,
}

impl CommutatorCheck {
    pub fn holds(&self) -> bool {
        self.form_defect.is_zero() && self.field_defect.is_zero()
    }
}
