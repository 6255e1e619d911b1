//! Products `M_a × M_b` with `ω = pr_a*ω_a ∧ pr_b*ω_b`, the maps `h_Ω` and
//! `h_𝔛`, the symplectic-factor morphism `H₁, H₂, H₃`, the product moment
//! map and its restriction to the diagonal.
//!
//! Product variables are the factor variables prefixed with `a.` and `b.`;
//! product algebra labels are prefixed the same way.

use num_traits::Zero;

use crate::arith::{rat, Polynomial, PowStyle, Rational, RationalFunction};
use crate::exterior::{Chart, ChartMap, DifferentialForm, ExteriorError, MultivectorField};
use crate::graded::{combinations, Sign};
use crate::plectic::{xi, HamiltonianPair, LElement, PlecticError, PlecticManifold};
use crate::report::{Report, Residual};

use super::{
    audit, bracket_sum, check_action, ActionConvention, AuditedReport, LieAlgebra, MomentCandidate, MomentError,
    PlecticAction, SignChoice,
};

#[derive(Debug, Clone)]
pub struct ProductPlectic {
    a: PlecticManifold,
    b: PlecticManifold,
    manifold: PlecticManifold,
    pr_a: ChartMap,
    pr_b: ChartMap,
}

impl ProductPlectic {
    /// Builds the product and certifies the product form as
    /// `(n_a + n_b + 1)`-plectic.
    pub fn new(a: &PlecticManifold, b: &PlecticManifold) -> Result<Self, MomentError> {
        let (ca, cb) = (a.chart(), b.chart());
        let (da, db) = (ca.dim(), cb.dim());
        let names: Vec<String> = ca
            .vars()
            .names()
            .iter()
            .map(|v| format!("a.{v}"))
            .chain(cb.vars().names().iter().map(|v| format!("b.{v}")))
            .collect();
        let chart = Chart::new(&format!("{}x{}", ca.name(), cb.name()), names)?;
        let pr_a = ChartMap::coordinate(&chart, ca, &(0..da).collect::<Vec<_>>())?;
        let pr_b = ChartMap::coordinate(&chart, cb, &(da..da + db).collect::<Vec<_>>())?;
        let omega = a.omega().pullback(&pr_a)?.try_wedge(&b.omega().pullback(&pr_b)?)?;
        let mut samples = Vec::new();
        for pa in a.samples() {
            for pb in b.samples() {
                samples.push(pa.iter().chain(pb).cloned().collect());
            }
        }
        let manifold = PlecticManifold::new(&chart, a.n() + b.n() + 1, omega, samples)?;
        Ok(ProductPlectic { a: a.clone(), b: b.clone(), manifold, pr_a, pr_b })
    }

    pub fn manifold(&self) -> &PlecticManifold {
        &self.manifold
    }

    pub fn factor_a(&self) -> &PlecticManifold {
        &self.a
    }

    pub fn factor_b(&self) -> &PlecticManifold {
        &self.b
    }

    pub fn pull_a(&self, form: &DifferentialForm) -> Result<DifferentialForm, MomentError> {
        Ok(form.pullback(&self.pr_a)?)
    }

    pub fn pull_b(&self, form: &DifferentialForm) -> Result<DifferentialForm, MomentError> {
        Ok(form.pullback(&self.pr_b)?)
    }

    pub fn lift_a(&self, v: &MultivectorField) -> Result<MultivectorField, MomentError> {
        Ok(v.lift_along(&self.pr_a)?)
    }

    pub fn lift_b(&self, v: &MultivectorField) -> Result<MultivectorField, MomentError> {
        Ok(v.lift_along(&self.pr_b)?)
    }

    /// `h_Ω(α_a ⊕ α_b) = pr_a*α_a ∧ pr_b*ω_b + pr_a*ω_a ∧ pr_b*α_b`.
    pub fn h_omega(
        &self,
        alpha_a: &DifferentialForm,
        alpha_b: &DifferentialForm,
    ) -> Result<DifferentialForm, MomentError> {
        let first = self.pull_a(alpha_a)?.try_wedge(&self.pull_b(self.b.omega())?)?;
        let second = self.pull_a(self.a.omega())?.try_wedge(&self.pull_b(alpha_b)?)?;
        Ok(first.try_add(&second)?)
    }

    /// `h_𝔛(X_a ⊕ X_b) = pr_a*X_a + pr_b*X_b`.
    pub fn h_x(&self, xa: &MultivectorField, xb: &MultivectorField) -> Result<MultivectorField, MomentError> {
        Ok(self.lift_a(xa)?.try_add(&self.lift_b(xb)?)?)
    }

    /// `(X_α, α)` with `X_α = h_𝔛(X_{α_a}, X_{α_b})` and `α = h_Ω(α_a, α_b)`.
    pub fn lift_hamiltonian(
        &self,
        alpha_a: &DifferentialForm,
        alpha_b: &DifferentialForm,
    ) -> Result<HamiltonianPair, MomentError> {
        let u = self.h_x(&self.a.hamiltonian_vf(alpha_a)?, &self.b.hamiltonian_vf(alpha_b)?)?;
        Ok(HamiltonianPair { alpha: self.h_omega(alpha_a, alpha_b)?, u })
    }

    /// `h_𝔛([X_a,Y_a] ⊕ [X_b,Y_b]) − [h_𝔛(X), h_𝔛(Y)]`.
    pub fn h_x_bracket_defect(
        &self,
        x: (&MultivectorField, &MultivectorField),
        y: (&MultivectorField, &MultivectorField),
    ) -> Result<MultivectorField, MomentError> {
        let lhs = self.h_x(&x.0.vf_bracket(y.0)?, &x.1.vf_bracket(y.1)?)?;
        let rhs = self.h_x(x.0, x.1)?.vf_bracket(&self.h_x(y.0, y.1)?)?;
        Ok(lhs.try_add(&-&rhs)?)
    }

    /// Splits `v = pr_a*v_a + pr_b*v_b` when every `a.` component depends on
    /// `a.` variables only, and likewise for `b.`.
    pub fn lift_decomposition(
        &self,
        v: &MultivectorField,
    ) -> Result<Option<(MultivectorField, MultivectorField)>, MomentError> {
        if v.chart() != self.manifold.chart() || v.degree() != 1 {
            return Err(
                ExteriorError::ChartMismatch(self.manifold.chart().name().into(), v.chart().name().into()).into()
            );
        }
        let da = self.a.chart().dim();
        let d = self.manifold.chart().dim();
        let push = |factor: &Chart, range: std::ops::Range<usize>| -> Result<Option<MultivectorField>, MomentError> {
            let images: Vec<Polynomial> = (0..d)
                .map(|j| {
                    if range.contains(&j) {
                        Polynomial::var_index(factor.vars(), j - range.start)
                    } else {
                        Polynomial::zero(factor.vars())
                    }
                })
                .collect();
            let mut comps = Vec::new();
            for i in range.clone() {
                let c = v.vector_component(i);
                let foreign =
                    (0..d).filter(|j| !range.contains(j)).any(|j| c.numer().involves(j) || c.denom().involves(j));
                if foreign {
                    return Ok(None);
                }
                comps.push(c.compose(factor.vars(), &images).map_err(ExteriorError::from)?);
            }
            Ok(Some(MultivectorField::vector(factor, comps)?))
        };
        let (Some(va), Some(vb)) = (push(self.a.chart(), 0..da)?, push(self.b.chart(), da..d)?) else {
            return Ok(None);
        };
        Ok(Some((va, vb)))
    }

    /// Whether `v` is `pr_a*v_a + pr_b*v_b` with each part locally
    /// Hamiltonian on its factor.
    pub fn is_hamiltonian_lift(&self, v: &MultivectorField) -> Result<bool, MomentError> {
        Ok(match self.lift_decomposition(v)? {
            None => false,
            Some((va, vb)) => self.a.is_locally_hamiltonian(&va)? && self.b.is_locally_hamiltonian(&vb)?,
        })
    }

    /// Both sides of the failure of `h_Ω` to preserve brackets:
    /// `h_Ω({α,β}₀) − {h_Ω α, h_Ω β}` and
    /// `(−1)^{n_a} d[pr_a*α_a ∧ pr_b*dβ_b − pr_a*β_a ∧ pr_b*dα_b]`.
    pub fn h_omega_defect(
        &self,
        alpha: (&DifferentialForm, &DifferentialForm),
        beta: (&DifferentialForm, &DifferentialForm),
    ) -> Result<HOmegaDefect, MomentError> {
        let br0 = self.h_omega(&self.a.bracket2(alpha.0, beta.0)?, &self.b.bracket2(alpha.1, beta.1)?)?;
        let br = self.manifold.bracket2(&self.h_omega(alpha.0, alpha.1)?, &self.h_omega(beta.0, beta.1)?)?;
        let lhs = br0.try_add(&-&br)?;
        let inner = self
            .pull_a(alpha.0)?
            .try_wedge(&self.pull_b(&beta.1.exterior_derivative())?)?
            .try_add(&-&self.pull_a(beta.0)?.try_wedge(&self.pull_b(&alpha.1.exterior_derivative())?)?)?;
        let rhs = inner.exterior_derivative().scale_sign(Sign::power(self.a.n() as i64));
        Ok(HOmegaDefect { lhs, rhs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HOmegaDefect {
    pub lhs: DifferentialForm,
    pub rhs: DifferentialForm,
}

impl HOmegaDefect {
    /// Exact equality with the printed right-hand side.
    pub fn holds(&self) -> bool {
        (&self.lhs - &self.rhs).is_zero()
    }

    /// The global sign `s` with `lhs = s·rhs`, if any (`+` when both vanish).
    pub fn sign_relation(&self) -> Option<Sign> {
        if self.holds() {
            Some(Sign::Plus)
        } else if (&self.lhs + &self.rhs).is_zero() {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// An element `f_a ⊕ f_b` of `C∞(M_a) × C∞(M_b)`, functions on the factor
/// charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionPair {
    pub a: RationalFunction,
    pub b: RationalFunction,
}

impl FunctionPair {
    pub fn new(a: RationalFunction, b: RationalFunction) -> Self {
        FunctionPair { a, b }
    }
}

/// The morphism `H : L(M_a) ⊕ L(M_b) → L(M_a × M_b)` for symplectic factors.
#[derive(Debug, Clone)]
pub struct SymplecticH {
    product: ProductPlectic,
}

pub fn symplectic_h(a: &PlecticManifold, b: &PlecticManifold) -> Result<SymplecticH, MomentError> {
    for p in [a, b] {
        if p.n() != 1 {
            return Err(MomentError::NotSymplectic(p.n()));
        }
    }
    Ok(SymplecticH { product: ProductPlectic::new(a, b)? })
}

impl SymplecticH {
    pub fn product(&self) -> &ProductPlectic {
        &self.product
    }

    fn fa(&self, f: &RationalFunction) -> Result<DifferentialForm, MomentError> {
        self.product.pull_a(&DifferentialForm::scalar(self.product.a.chart(), f.clone()))
    }

    fn fb(&self, f: &RationalFunction) -> Result<DifferentialForm, MomentError> {
        self.product.pull_b(&DifferentialForm::scalar(self.product.b.chart(), f.clone()))
    }

    fn pa(&self, f: &RationalFunction, g: &RationalFunction) -> Result<RationalFunction, MomentError> {
        let c = self.product.a.chart();
        let v = self
            .product
            .a
            .bracket2(&DifferentialForm::scalar(c, f.clone()), &DifferentialForm::scalar(c, g.clone()))?;
        Ok(v.as_scalar().expect("bracket of functions is a function"))
    }

    fn pb(&self, f: &RationalFunction, g: &RationalFunction) -> Result<RationalFunction, MomentError> {
        let c = self.product.b.chart();
        let v = self
            .product
            .b
            .bracket2(&DifferentialForm::scalar(c, f.clone()), &DifferentialForm::scalar(c, g.clone()))?;
        Ok(v.as_scalar().expect("bracket of functions is a function"))
    }

    /// `{·,·}₀`, componentwise.
    pub fn bracket0(&self, x: &FunctionPair, y: &FunctionPair) -> Result<FunctionPair, MomentError> {
        Ok(FunctionPair { a: self.pa(&x.a, &y.a)?, b: self.pb(&x.b, &y.b)? })
    }

    /// `H₁ = h_Ω`.
    pub fn h1(&self, x: &FunctionPair) -> Result<DifferentialForm, MomentError> {
        let (ca, cb) = (self.product.a.chart(), self.product.b.chart());
        self.product.h_omega(&DifferentialForm::scalar(ca, x.a.clone()), &DifferentialForm::scalar(cb, x.b.clone()))
    }

    /// `½(f_a dg_b − df_a g_b − g_a df_b + dg_a f_b)`.
    pub fn h2(&self, f: &FunctionPair, g: &FunctionPair) -> Result<DifferentialForm, MomentError> {
        let (fa, fb, ga, gb) = (self.fa(&f.a)?, self.fb(&f.b)?, self.fa(&g.a)?, self.fb(&g.b)?);
        let d = |x: &DifferentialForm| x.exterior_derivative();
        let sum = fa
            .wedge(&d(&gb))
            .try_add(&-&d(&fa).wedge(&gb))?
            .try_add(&-&ga.wedge(&d(&fb)))?
            .try_add(&d(&ga).wedge(&fb))?;
        Ok(sum.scale_rational(&rat(1, 2)))
    }

    /// `½(f_a{g_b,h_b} + f_b{g_a,h_a} − g_a{f_b,h_b} − g_b{f_a,h_a} + h_a{f_b,g_b} + h_b{f_a,g_a})`.
    pub fn h3(&self, f: &FunctionPair, g: &FunctionPair, h: &FunctionPair) -> Result<DifferentialForm, MomentError> {
        let term = |x_a: &RationalFunction, br_b: RationalFunction| -> Result<DifferentialForm, MomentError> {
            Ok(self.fa(x_a)?.wedge(&self.fb(&br_b)?))
        };
        let term_b = |x_b: &RationalFunction, br_a: RationalFunction| -> Result<DifferentialForm, MomentError> {
            Ok(self.fb(x_b)?.wedge(&self.fa(&br_a)?))
        };
        let sum = term(&f.a, self.pb(&g.b, &h.b)?)?
            .try_add(&term_b(&f.b, self.pa(&g.a, &h.a)?)?)?
            .try_add(&-&term(&g.a, self.pb(&f.b, &h.b)?)?)?
            .try_add(&-&term_b(&g.b, self.pa(&f.a, &h.a)?)?)?
            .try_add(&term(&h.a, self.pb(&f.b, &g.b)?)?)?
            .try_add(&term_b(&h.b, self.pa(&f.a, &g.a)?)?)?;
        Ok(sum.scale_rational(&rat(1, 2)))
    }

    /// `H_k` for `k ≤ 3`; zero for `k ≥ 4`.
    pub fn component(&self, xs: &[FunctionPair]) -> Result<DifferentialForm, MomentError> {
        match xs {
            [x] => self.h1(x),
            [x, y] => self.h2(x, y),
            [x, y, z] => self.h3(x, y, z),
            _ => Ok(DifferentialForm::zero(self.product.manifold.chart(), 0)),
        }
    }

    /// Residual of the Lie-algebra-source morphism condition of arity
    /// `m = xs.len() ∈ 2..=4`, with `H_k` scaled by `signs[k]`:
    /// `Σ_{i<j}(−1)^{i+j+1} H_{m−1}({x_i,x_j}₀,…) − dH_m(x) − l_m(H₁(x₁),…,H₁(x_m))`.
    pub fn residual(&self, xs: &[FunctionPair], signs: &SignChoice) -> Result<DifferentialForm, MomentError> {
        let m = xs.len();
        let p = &self.product.manifold;
        if !(2..=p.n() + 1).contains(&m) {
            return Err(PlecticError::ArityOutOfRange { k: m, max: p.n() + 1 }.into());
        }
        let bracket = |x: &FunctionPair, y: &FunctionPair| self.bracket0(x, y);
        let comp = |args: &[FunctionPair]| -> Result<DifferentialForm, MomentError> {
            Ok(self.component(args)?.scale_sign(signs.get(args.len())))
        };
        let zero = DifferentialForm::zero(p.chart(), p.n() + 1 - m);
        let mut r = bracket_sum(xs, &bracket, &comp, zero)?;
        if m <= p.n() {
            r = r.try_add(&-&comp(xs)?.exterior_derivative())?;
        }
        let h1s = xs.iter().map(|x| Ok(p.element(0, self.h1(x)?)?)).collect::<Result<Vec<LElement>, MomentError>>()?;
        let lm = p.lk_bracket(&h1s)?;
        Ok(r.try_add(&-lm.form())?)
    }

    /// Residual rows for every tuple (arities 2..=4).
    pub fn check_with(&self, tuples: &[Vec<FunctionPair>], signs: &SignChoice) -> Result<Report, MomentError> {
        let mut report = Report::new();
        for t in tuples {
            let r = self.residual(t, signs)?;
            report.push(Residual::new(
                "symplectic-h",
                t.len(),
                t.iter()
                    .map(|x| format!("({}, {})", x.a.format(PowStyle::DoubleStar), x.b.format(PowStyle::DoubleStar)))
                    .collect(),
                format!("m={}", t.len()),
                r.to_string(),
                !r.is_zero(),
            ));
        }
        Ok(report)
    }

    /// Sign audit over global signs of `H₂` and `H₃`.
    pub fn audit(&self, tuples: &[Vec<FunctionPair>]) -> Result<AuditedReport, MomentError> {
        audit(3, |s| self.check_with(tuples, s))
    }
}

/// `c^a_{l,k−l}`: `1` at `(l,k) = (1,1)`, otherwise
/// `½ ξ(k) ξ(l) (−1)^{(n_a+1−l)(k−l)}` for `1 ≤ l ≤ k`, `k > 1`.
pub fn coefficient_a(l: usize, k: usize, n_a: usize) -> Rational {
    if k == 1 {
        return if l == 1 { rat(1, 1) } else { rat(0, 1) };
    }
    if l == 0 || l > k {
        return rat(0, 1);
    }
    let s = xi(k) * xi(l) * Sign::power((n_a as i64 + 1 - l as i64) * (k - l) as i64);
    rat(s.to_i64(), 2)
}

/// `c^b_{l,k−l}`: `1` at `(l,k) = (0,1)`, otherwise
/// `½ ξ(k) ξ(k−l) (−1)^{(n_a+1−l)(k−l−1)}` for `0 ≤ l ≤ k−1`, `k > 1`.
pub fn coefficient_b(l: usize, k: usize, n_a: usize) -> Rational {
    if k == 1 {
        return if l == 0 { rat(1, 1) } else { rat(0, 1) };
    }
    if l >= k {
        return rat(0, 1);
    }
    let s = xi(k) * xi(k - l) * Sign::power((n_a as i64 + 1 - l as i64) * (k - l - 1) as i64);
    rat(s.to_i64(), 2)
}

/// The product candidate together with its factors.
#[derive(Debug, Clone)]
pub struct ProductMoment {
    pub product: ProductPlectic,
    pub factor_a: MomentCandidate,
    pub factor_b: MomentCandidate,
    pub candidate: MomentCandidate,
}

type BracketTable = Vec<((String, String), Vec<(String, Rational)>)>;

fn direct_sum(ga: &LieAlgebra, gb: &LieAlgebra) -> Result<LieAlgebra, MomentError> {
    let labels: Vec<String> = ga
        .space()
        .labels()
        .iter()
        .map(|l| format!("a.{l}"))
        .chain(gb.space().labels().iter().map(|l| format!("b.{l}")))
        .collect();
    let mut table: BracketTable = Vec::new();
    for (g, prefix) in [(ga, "a"), (gb, "b")] {
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let v = g.bracket_basis(i, j);
                if v.is_zero() {
                    continue;
                }
                let label = |t: usize| format!("{prefix}.{}", g.space().label(t));
                table.push(((label(i), label(j)), v.terms().map(|(t, c)| (label(t), c.clone())).collect()));
            }
        }
    }
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Ok(LieAlgebra::new(
        &refs,
        table
            .iter()
            .map(|((x, y), v)| ((x.as_str(), y.as_str()), v.iter().map(|(l, c)| (l.as_str(), c.clone())).collect())),
    )?)
}

/// Builds `F_k`, `1 ≤ k ≤ n_a+n_b+1`, on `g_a ⊕ g_b` from moment candidates
/// on the factors. On a sorted basis tuple with `l` entries from `g_a`
/// (which come first) only the identity unshuffle survives:
/// `F_k = c^a_{l,k−l} f^a_l(x_a) ∧ ι_{l+1..k} ω_b + c^b_{l,k−l} ι_{1..l} ω_a ∧ f^b_{k−l}(x_b)`,
/// where the contractions use the Hamiltonian fields of the `f₁` images.
pub fn product_moment(fa: &MomentCandidate, fb: &MomentCandidate) -> Result<ProductMoment, MomentError> {
    let product = ProductPlectic::new(fa.manifold(), fb.manifold())?;
    let g = direct_sum(fa.algebra(), fb.algebra())?;
    let mut fields = Vec::new();
    for u in fa.action().fields() {
        fields.push(product.lift_a(u)?);
    }
    for u in fb.action().fields() {
        fields.push(product.lift_b(u)?);
    }
    let action = check_action(product.manifold(), &g, fields, ActionConvention::Morphism)?;
    let ham = |f: &MomentCandidate, i: usize| f.manifold().hamiltonian_vf(&f.eval_basis(&[i]));
    let va = (0..fa.algebra().dim()).map(|i| ham(fa, i)).collect::<Result<Vec<_>, _>>()?;
    let vb = (0..fb.algebra().dim()).map(|i| ham(fb, i)).collect::<Result<Vec<_>, _>>()?;
    let (na, nb, dim_a) = (fa.n(), fb.n(), fa.algebra().dim());
    let n = product.manifold().n();
    let mut candidate = MomentCandidate::new(&action);
    let basis: Vec<usize> = (0..g.dim()).collect();
    for k in 1..=n {
        for t in combinations(&basis, k) {
            let l = t.iter().filter(|&&i| i < dim_a).count();
            let a_part = &t[..l];
            let b_part: Vec<usize> = t[l..].iter().map(|i| i - dim_a).collect();
            let mut value: Option<DifferentialForm> = None;
            let mut push = |term: DifferentialForm| -> Result<(), MomentError> {
                if !term.is_zero() {
                    value = Some(match value.take() {
                        None => term,
                        Some(v) => v.try_add(&term)?,
                    });
                }
                Ok(())
            };
            if (1..=na).contains(&l) {
                let c = coefficient_a(l, k, na);
                let fields: Vec<MultivectorField> = b_part.iter().map(|&i| vb[i].clone()).collect();
                let iota = fb.manifold().contract_fields(&fields)?;
                let fa_val = fa.eval_basis(a_part);
                if !c.is_zero() && !iota.is_zero() && !fa_val.is_zero() {
                    push(product.pull_a(&fa_val)?.try_wedge(&product.pull_b(&iota)?)?.scale_rational(&c))?;
                }
            }
            if (1..=nb).contains(&(k - l)) {
                let c = coefficient_b(l, k, na);
                let fields: Vec<MultivectorField> = a_part.iter().map(|&i| va[i].clone()).collect();
                let iota = fa.manifold().contract_fields(&fields)?;
                let fb_val = fb.eval_basis(&b_part);
                if !c.is_zero() && !iota.is_zero() && !fb_val.is_zero() {
                    push(product.pull_a(&iota)?.try_wedge(&product.pull_b(&fb_val)?)?.scale_rational(&c))?;
                }
            }
            if let Some(v) = value {
                candidate.set_indices(&t, v)?;
            }
        }
    }
    Ok(ProductMoment { product, factor_a: fa.clone(), factor_b: fb.clone(), candidate })
}

/// Pulls the product candidate back along `x ↦ (x, x)` and precomposes with
/// `x ↦ x ⊕ x`, giving a candidate for `g` on `(M, i*(ω ∧ ω))`. Requires the
/// two factors to be the same manifold, algebra and action.
pub fn restrict_to_diagonal(pm: &ProductMoment) -> Result<MomentCandidate, MomentError> {
    let (fa, fb) = (&pm.factor_a, &pm.factor_b);
    let (ma, mb) = (fa.manifold(), fb.manifold());
    if ma.chart() != mb.chart() || ma.omega() != mb.omega() {
        return Err(MomentError::FactorMismatch("factor manifolds differ".into()));
    }
    if fa.algebra().space().labels() != fb.algebra().space().labels() || fa.action().fields() != fb.action().fields() {
        return Err(MomentError::FactorMismatch("factor actions differ".into()));
    }
    let chart = ma.chart();
    let d = chart.dim();
    let images: Vec<Polynomial> = (0..2 * d).map(|j| Polynomial::var_index(chart.vars(), j % d)).collect();
    let diag = ChartMap::new(chart, pm.product.manifold().chart(), images)?;
    let omega = pm.product.manifold().omega().pullback(&diag)?;
    let n = pm.product.manifold().n();
    let manifold = PlecticManifold::new(chart, n, omega, ma.samples().to_vec()).map_err(|e| match e {
        PlecticError::GenericallyDegenerate(_)
        | PlecticError::DegenerateAtPoint { .. }
        | PlecticError::DimensionTooSmall { .. } => MomentError::NondegenerateFailure(e.to_string()),
        other => other.into(),
    })?;
    let g = fa.algebra();
    let action = check_action(&manifold, g, fa.action().fields().to_vec(), ActionConvention::Morphism)?;
    let mut out = MomentCandidate::new(&action);
    let dim = g.dim();
    let basis: Vec<usize> = (0..dim).collect();
    for k in 1..=n {
        for t in combinations(&basis, k) {
            let mut acc = DifferentialForm::zero(pm.product.manifold().chart(), n - k);
            for choice in 0..1usize << k {
                let idx: Vec<usize> =
                    t.iter().enumerate().map(|(s, &i)| if choice >> s & 1 == 1 { i + dim } else { i }).collect();
                acc = acc.try_add(&pm.candidate.eval_basis(&idx))?;
            }
            let v = acc.pullback(&diag)?;
            if !v.is_zero() {
                out.set_indices(&t, v)?;
            }
        }
    }
    Ok(out)
}

impl ProductMoment {
    /// The product action built from the two factor actions.
    pub fn action(&self) -> &PlecticAction {
        self.candidate.action()
    }
}
