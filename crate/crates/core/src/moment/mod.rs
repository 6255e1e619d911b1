//! Lie algebra actions on n-plectic charts and homotopy moment maps.
//!
//! Algebra elements are coefficient vectors over the basis of a
//! [`LieAlgebra`]. Components `f_k` are stored on strictly increasing basis
//! tuples and extended antisymmetrically and multilinearly.

mod product;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::Rational;
use crate::exterior::{DifferentialForm, ExteriorError, MultivectorField};
use crate::graded::{combinations, sort_with_koszul, Sign};
use crate::linfty::{GradedElement, LInftyError};
use crate::plectic::{xi, PlecticError, PlecticManifold};
use crate::report::{Report, Residual};

pub use crate::linfty::LieAlgebra;
pub use product::{
    coefficient_a, coefficient_b, product_moment, restrict_to_diagonal, symplectic_h, FunctionPair, HOmegaDefect,
    ProductMoment, ProductPlectic, SymplecticH,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("field of `{label}` does not preserve omega: L_u omega = {lie_derivative}")]
    NotPreserving { label: String, lie_derivative: String },
    #[error("field of `{label}` is not Hamiltonian: {reason}")]
    NotHamiltonianAction { label: String, reason: String },
    #[error("[u_{x}, u_{y}] - {sign}u_[{x},{y}] = {defect}")]
    BracketIncompatible { x: String, y: String, sign: String, defect: String },
    #[error("expected {expected} fundamental fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("component arity {k} outside 1..={max}")]
    ComponentArity { k: usize, max: usize },
    #[error("component f_{k} must have degree {expected}, found {found}")]
    ComponentDegree { k: usize, expected: usize, found: usize },
    #[error("repeated label in component arguments: {0}")]
    RepeatedLabel(String),
    #[error("restricted form is degenerate: {0}")]
    NondegenerateFailure(String),
    #[error("factors do not match: {0}")]
    FactorMismatch(String),
    #[error("factor is not symplectic (n = {0})")]
    NotSymplectic(usize),
    #[error(transparent)]
    Plectic(#[from] PlecticError),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Which relation between `[u_x, u_y]` and `u_[x,y]` the action satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionConvention {
    /// `[u_x, u_y] = u_[x,y]`, the convention the moment conditions assume.
    Morphism,
    /// `[u_x, u_y] = −u_[x,y]`.
    AntiMorphism,
}

/// A validated action `x ↦ u_x` through Hamiltonian fields.
#[derive(Debug, Clone)]
pub struct PlecticAction {
    algebra: LieAlgebra,
    manifold: PlecticManifold,
    fields: Vec<MultivectorField>,
    primitives: Vec<DifferentialForm>,
}

/// A form `α` with `dα = β`, when `β` is closed with polynomial coefficients.
fn primitive_of(beta: &DifferentialForm) -> Option<DifferentialForm> {
    if !beta.is_closed() {
        return None;
    }
    if beta.is_zero() {
        return Some(DifferentialForm::zero(beta.chart(), beta.degree().saturating_sub(1)));
    }
    beta.poincare_primitive()
}

/// Checks that every field preserves `ω`, is Hamiltonian (a primitive of
/// `−ι_u ω` is produced on polynomial data) and that the bracket relation of
/// `convention` holds on every basis pair.
pub fn check_action(
    manifold: &PlecticManifold,
    algebra: &LieAlgebra,
    fields: Vec<MultivectorField>,
    convention: ActionConvention,
) -> Result<PlecticAction, MomentError> {
    if fields.len() != algebra.dim() {
        return Err(MomentError::FieldCount { expected: algebra.dim(), found: fields.len() });
    }
    let omega = manifold.omega();
    let label = |i: usize| algebra.space().label(i).to_string();
    let mut primitives = Vec::new();
    for (i, u) in fields.iter().enumerate() {
        if u.chart() != manifold.chart() || u.degree() != 1 {
            return Err(ExteriorError::ChartMismatch(manifold.chart().name().into(), u.chart().name().into()).into());
        }
        let lie = omega.lie_derivative(u)?;
        if !lie.is_zero() {
            return Err(MomentError::NotPreserving { label: label(i), lie_derivative: lie.to_string() });
        }
        let target = -&omega.interior(u)?;
        let alpha = primitive_of(&target).ok_or_else(|| MomentError::NotHamiltonianAction {
            label: label(i),
            reason: format!("no polynomial primitive of {target}"),
        })?;
        primitives.push(alpha);
    }
    let sign = match convention {
        ActionConvention::Morphism => Sign::Plus,
        ActionConvention::AntiMorphism => Sign::Minus,
    };
    let action = PlecticAction { algebra: algebra.clone(), manifold: manifold.clone(), fields, primitives };
    for i in 0..algebra.dim() {
        for j in i + 1..algebra.dim() {
            let lhs = action.fields[i].vf_bracket(&action.fields[j])?;
            let rhs = action.field_of(&algebra.bracket_basis(i, j)).scale_sign(sign);
            let defect = &lhs - &rhs;
            if !defect.is_zero() {
                return Err(MomentError::BracketIncompatible {
                    x: label(i),
                    y: label(j),
                    sign: if sign.is_plus() { String::new() } else { "-".into() },
                    defect: defect.to_string(),
                });
            }
        }
    }
    Ok(action)
}

impl PlecticAction {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn manifold(&self) -> &PlecticManifold {
        &self.manifold
    }

    pub fn fields(&self) -> &[MultivectorField] {
        &self.fields
    }

    /// A form `α_i` with `dα_i = −ι_{u_i} ω`, found during validation.
    pub fn primitives(&self) -> &[DifferentialForm] {
        &self.primitives
    }

    /// `u_x = Σ c_i u_i`.
    pub fn field_of(&self, x: &GradedElement) -> MultivectorField {
        let mut out = MultivectorField::zero(self.manifold.chart(), 1);
        for (i, c) in x.terms() {
            out = &out + &self.fields[i].scale_rational(c);
        }
        out
    }
}

/// Components `f_k`, `1 ≤ k ≤ n`, of a candidate homotopy moment map; `f_k`
/// takes values in forms of degree `n − k`. Unset entries are zero.
#[derive(Debug, Clone)]
pub struct MomentCandidate {
    action: PlecticAction,
    components: Vec<BTreeMap<Vec<usize>, DifferentialForm>>,
}

impl MomentCandidate {
    pub fn new(action: &PlecticAction) -> Self {
        MomentCandidate { action: action.clone(), components: vec![BTreeMap::new(); action.manifold.n()] }
    }

    pub fn action(&self) -> &PlecticAction {
        &self.action
    }

    pub fn manifold(&self) -> &PlecticManifold {
        &self.action.manifold
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.action.algebra
    }

    pub fn n(&self) -> usize {
        self.action.manifold.n()
    }

    /// Sets `f_k(labels)`; the stored entry is on the sorted tuple.
    pub fn set(&mut self, labels: &[&str], value: DifferentialForm) -> Result<(), MomentError> {
        let idx = labels.iter().map(|l| self.algebra().space().index_of(l)).collect::<Result<Vec<_>, _>>()?;
        self.set_indices(&idx, value)
    }

    pub fn set_indices(&mut self, idx: &[usize], value: DifferentialForm) -> Result<(), MomentError> {
        let (k, n) = (idx.len(), self.n());
        if k == 0 || k > n {
            return Err(MomentError::ComponentArity { k, max: n });
        }
        if value.chart() != self.manifold().chart() {
            return Err(ExteriorError::ChartMismatch(
                self.manifold().chart().name().into(),
                value.chart().name().into(),
            )
            .into());
        }
        if value.degree() != n - k {
            return Err(MomentError::ComponentDegree { k, expected: n - k, found: value.degree() });
        }
        let (sorted, sign) = sort_basis(idx).ok_or_else(|| {
            let names: Vec<&str> = idx.iter().map(|&i| self.algebra().space().label(i)).collect();
            MomentError::RepeatedLabel(names.join(", "))
        })?;
        self.components[k - 1].insert(sorted, value.scale_sign(sign));
        Ok(())
    }

    /// Stored entries of `f_k` on sorted tuples.
    pub fn entries(&self, k: usize) -> impl Iterator<Item = (&Vec<usize>, &DifferentialForm)> {
        self.components.get(k.wrapping_sub(1)).into_iter().flat_map(|m| m.iter())
    }

    /// `f_k` on basis elements; zero outside `1..=n` and on repeated indices.
    pub fn eval_basis(&self, idx: &[usize]) -> DifferentialForm {
        let k = idx.len();
        let degree = self.n().saturating_sub(k);
        let zero = DifferentialForm::zero(self.manifold().chart(), degree);
        if k == 0 || k > self.n() {
            return zero;
        }
        match sort_basis(idx) {
            None => zero,
            Some((sorted, sign)) => self.components[k - 1].get(&sorted).map_or(zero, |f| f.scale_sign(sign)),
        }
    }

    /// `f_k` extended multilinearly.
    pub fn eval(&self, args: &[GradedElement]) -> DifferentialForm {
        let degree = self.n().saturating_sub(args.len());
        let mut out = DifferentialForm::zero(self.manifold().chart(), degree);
        let mut stack: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::from_integer(1.into()))];
        for a in args {
            let mut next = Vec::new();
            for (idx, c) in &stack {
                for (i, ci) in a.terms() {
                    let mut idx2 = idx.clone();
                    idx2.push(i);
                    next.push((idx2, c * ci));
                }
            }
            stack = next;
        }
        for (idx, c) in stack {
            let v = self.eval_basis(&idx);
            if !v.is_zero() {
                out = &out + &v.scale_rational(&c);
            }
        }
        out
    }

    /// `f_k(idx) + γ`, keeping all other entries.
    pub fn with_added(&self, idx: &[usize], gamma: &DifferentialForm) -> Result<Self, MomentError> {
        let mut out = self.clone();
        let current = self.eval_basis(idx);
        out.set_indices(idx, current.try_add(gamma)?)?;
        Ok(out)
    }
}

fn sort_basis(idx: &[usize]) -> Option<(Vec<usize>, Sign)> {
    let (perm, sign) = sort_with_koszul(idx, &vec![1; idx.len()]);
    let sorted = perm.permute(idx);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sign))
}

/// One global sign per component arity, `signs[k−1]` multiplying `f_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignChoice(pub Vec<Sign>);

impl SignChoice {
    pub fn printed(n: usize) -> Self {
        SignChoice(vec![Sign::Plus; n])
    }

    pub fn get(&self, k: usize) -> Sign {
        self.0.get(k.wrapping_sub(1)).copied().unwrap_or(Sign::Plus)
    }

    pub fn is_printed(&self) -> bool {
        self.0.iter().all(|s| s.is_plus())
    }

    /// All choices with `f₁` fixed, printed first.
    fn candidates(n: usize) -> Vec<SignChoice> {
        (0..1u32 << n.saturating_sub(1))
            .map(|bits| {
                let mut v = vec![Sign::Plus];
                v.extend((1..n).map(|k| if bits >> (k - 1) & 1 == 1 { Sign::Minus } else { Sign::Plus }));
                SignChoice(v)
            })
            .collect()
    }

    /// `k=2:+ k=3:−` style summary.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, s)| format!("k={}:{}", i + 1, if s.is_plus() { "printed" } else { "flipped" }))
            .collect();
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(" ")
        }
    }
}

/// `Σ_{1≤i<j≤k} (−1)^{i+j+1} f_{k−1}([x_i,x_j], x₁,…,x̂_i,…,x̂_j,…,x_k)`
/// for a generic source algebra.
pub(crate) fn bracket_sum<E: Clone, Err>(
    xs: &[E],
    bracket: &dyn Fn(&E, &E) -> Result<E, Err>,
    component: &dyn Fn(&[E]) -> Result<DifferentialForm, Err>,
    zero: DifferentialForm,
) -> Result<DifferentialForm, Err>
where
    Err: From<ExteriorError>,
{
    let k = xs.len();
    let mut acc = zero;
    for i in 0..k {
        for j in i + 1..k {
            let mut args = vec![bracket(&xs[i], &xs[j])?];
            args.extend(xs.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, x)| x.clone()));
            let v = component(&args)?;
            if v.is_zero() {
                continue;
            }
            acc = acc.try_add(&v.scale_sign(Sign::power((i + j + 1) as i64)))?;
        }
    }
    Ok(acc)
}

/// Condition label for arity `k` of an `n`-plectic target.
fn condition(k: usize, n: usize) -> String {
    match k {
        1 => "(i) k=1".into(),
        k if k <= n => format!("(ii) k={k}"),
        k => format!("(iii) k={k}"),
    }
}

/// Residuals of the homotopy moment map conditions on every strictly
/// increasing basis tuple of length `1..=n+1`:
/// (i) `−ι_{u_y}ω − d f₁(y)`;
/// (ii) `Σ_{i<j}(−1)^{i+j+1} f_{k−1}([y_i,y_j],…) − d f_k(y) − ξ(k) ι(u₁∧⋯∧u_k)ω`;
/// (iii) the same at `k = n+1` without the `d f_k` term.
pub fn check_moment(f: &MomentCandidate) -> Result<Report, MomentError> {
    check_moment_with(f, &SignChoice::printed(f.n()))
}

/// [`check_moment`] with `f_k` replaced by `signs[k]·f_k`.
pub fn check_moment_with(f: &MomentCandidate, signs: &SignChoice) -> Result<Report, MomentError> {
    let n = f.n();
    let g = f.algebra();
    let p = f.manifold();
    let basis: Vec<usize> = (0..g.dim()).collect();
    let mut report = Report::new();
    for k in 1..=n + 1 {
        for t in combinations(&basis, k) {
            let value = moment_residual(f, signs, &t)?;
            report.push(Residual::new(
                "moment",
                k,
                t.iter().map(|&i| g.space().label(i).to_string()).collect(),
                condition(k, n),
                value.to_string(),
                !value.is_zero(),
            ));
        }
    }
    let _ = p;
    Ok(report)
}

/// Residual of the moment condition of arity `t.len()` on basis tuple `t`.
pub fn moment_residual(f: &MomentCandidate, signs: &SignChoice, t: &[usize]) -> Result<DifferentialForm, MomentError> {
    let (k, n) = (t.len(), f.n());
    let g = f.algebra();
    let p = f.manifold();
    let xs: Vec<GradedElement> = t.iter().map(|&i| g.basis(i)).collect();
    let fields: Vec<MultivectorField> = xs.iter().map(|x| f.action.field_of(x)).collect();
    let eval = |args: &[GradedElement]| -> Result<DifferentialForm, MomentError> {
        Ok(f.eval(args).scale_sign(signs.get(args.len())))
    };
    if k == 1 {
        let lhs = -&p.omega().interior(&fields[0])?;
        return Ok(lhs.try_add(&-&eval(&xs)?.exterior_derivative())?);
    }
    let bracket = |a: &GradedElement, b: &GradedElement| -> Result<GradedElement, MomentError> { Ok(g.bracket(a, b)) };
    let zero = DifferentialForm::zero(p.chart(), n + 1 - k);
    let mut r = bracket_sum(&xs, &bracket, &eval, zero)?;
    if k <= n {
        r = r.try_add(&-&eval(&xs)?.exterior_derivative())?;
    }
    let iota = p.contract_fields(&fields)?.scale_sign(xi(k));
    Ok(r.try_add(&-&iota)?)
}

/// Outcome of the sign audit: the first sign choice (printed first) under
/// which every residual vanishes, or the printed choice with its failures.
#[derive(Debug, Clone)]
pub struct AuditedReport {
    pub report: Report,
    pub signs: SignChoice,
    pub resolved: bool,
}

impl AuditedReport {
    pub fn summary(&self) -> String {
        if !self.resolved {
            return "no global sign choice makes every residual vanish; printed signs reported".into();
        }
        if self.signs.is_printed() {
            "printed signs".into()
        } else {
            format!("sign choice: {}", self.signs.describe())
        }
    }
}

/// Tries every global sign per arity (`f₁` fixed) and keeps the first
/// choice that passes.
pub(crate) fn audit<F>(n: usize, mut run: F) -> Result<AuditedReport, MomentError>
where
    F: FnMut(&SignChoice) -> Result<Report, MomentError>,
{
    let mut printed = None;
    for choice in SignChoice::candidates(n) {
        let report = run(&choice)?;
        if report.passed() {
            let mut report = report;
            let resolved = AuditedReport { signs: choice.clone(), resolved: true, report: Report::new() };
            report.notes.push(resolved.summary());
            return Ok(AuditedReport { report, ..resolved });
        }
        if printed.is_none() {
            printed = Some(report);
        }
    }
    let mut report = printed.expect("at least one choice");
    let out = AuditedReport { report: Report::new(), signs: SignChoice::printed(n), resolved: false };
    report.notes.push(out.summary());
    Ok(AuditedReport { report, ..out })
}

/// Sign audit of [`check_moment_with`].
pub fn audit_moment(f: &MomentCandidate) -> Result<AuditedReport, MomentError> {
    audit(f.n(), |s| check_moment_with(f, s))
}
