//! Strict morphisms, morphisms out of a Lie algebra, and the general
//! L∞[1]-morphism condition in low arity.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::Rational;
use crate::graded::{all_permutations, combinations, koszul_sign, suspension_sign, unshuffles, Sign};
use crate::report::{Report, Residual};

use super::{
    basis_elements, labels, ordered_tuples, FiniteLInfty, FiniteLInftyShifted, GradedElement, GradedSpace, LInftyError,
    MultilinearFamily, Symmetry,
};

/// Degree-preserving linear map given on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    table: MultilinearFamily,
}

impl LinearMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace) -> Self {
        LinearMap { table: MultilinearFamily::new(source, target, Symmetry::Skew, vec![0]) }
    }

    /// Image of a basis element; fails with `DegreeMismatch` if the image
    /// has another degree.
    pub fn with_image(mut self, label: &str, image: GradedElement) -> Result<Self, LInftyError> {
        self.table.set(&[label], image)?;
        Ok(self)
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut f = Self::zero(space, space);
        for i in 0..space.dim() {
            f.table.set_indices(&[i], GradedElement::basis(space, i)).expect("degree preserved");
        }
        f
    }

    pub fn source(&self) -> &GradedSpace {
        self.table.source()
    }

    pub fn target(&self) -> &GradedSpace {
        self.table.target()
    }

    pub fn apply(&self, x: &GradedElement) -> GradedElement {
        self.table.eval(std::slice::from_ref(x))
    }
}

/// Residuals `l²_k(f(x₁),…,f(x_k)) − f(l¹_k(x₁,…,x_k))` for `k ≤ k_max`.
pub fn check_strict_morphism(
    f: &LinearMap,
    a1: &FiniteLInfty,
    a2: &FiniteLInfty,
    k_max: usize,
) -> Result<Report, LInftyError> {
    if f.source() != a1.space() || f.target() != a2.space() {
        return Err(LInftyError::SpaceMismatch);
    }
    let space = a1.space();
    let mut report = Report::new();
    for k in 1..=k_max {
        for idx in ordered_tuples(Symmetry::Skew, space.degrees(), k) {
            let xs = basis_elements(space, &idx);
            let fx: Vec<GradedElement> = xs.iter().map(|x| f.apply(x)).collect();
            let r = &a2.brackets().eval(&fx) - &f.apply(&a1.brackets().eval(&xs));
            report.push(Residual::new(
                "strict-morphism",
                k,
                labels(space, &idx),
                format!("k={k}"),
                r.to_string(),
                !r.is_zero(),
            ));
        }
    }
    Ok(report)
}

/// Lie algebra over ℚ by structure constants, as a graded space in degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    structure: FiniteLInfty,
}

impl LieAlgebra {
    /// `[a,b] = Σ c·e` for each listed pair. Pairs not listed bracket to
    /// zero. Listing both `(a,b)` and `(b,a)` is allowed only with opposite
    /// values; Jacobi is verified on every triple.
    pub fn new<'a>(
        labels: &[&str],
        brackets: impl IntoIterator<Item = ((&'a str, &'a str), Vec<(&'a str, Rational)>)>,
    ) -> Result<Self, LInftyError> {
        let space = GradedSpace::new(labels.iter().map(|l| (*l, 0)))?;
        let mut structure = FiniteLInfty::new(&space, 2);
        let mut seen: Vec<(Vec<usize>, GradedElement)> = Vec::new();
        for ((a, b), terms) in brackets {
            let value = space.element(terms)?;
            let (i, j) = (space.index_of(a)?, space.index_of(b)?);
            if i == j {
                if !value.is_zero() {
                    return Err(LInftyError::NotLieAlgebra(format!("[{a},{a}] = {value} is not zero")));
                }
                continue;
            }
            let stored = if i < j { value.clone() } else { -&value };
            let key = vec![i.min(j), i.max(j)];
            if let Some((_, prev)) = seen.iter().find(|(k, _)| *k == key) {
                if *prev != stored {
                    return Err(LInftyError::NotLieAlgebra(format!("[{a},{b}] and [{b},{a}] are not opposite")));
                }
            }
            seen.push((key, stored));
            structure.set_bracket(&[a, b], value)?;
        }
        let g = LieAlgebra { structure };
        if let Some(t) = combinations(&(0..space.dim()).collect::<Vec<_>>(), 3)
            .into_iter()
            .find(|t| !super::jacobiator(&g.structure, t).is_zero())
        {
            let names: Vec<&str> = t.iter().map(|&i| space.label(i)).collect();
            return Err(LInftyError::NotLieAlgebra(format!("Jacobi fails on ({})", names.join(", "))));
        }
        Ok(g)
    }

    pub fn space(&self) -> &GradedSpace {
        self.structure.space()
    }

    pub fn dim(&self) -> usize {
        self.space().dim()
    }

    pub fn basis(&self, i: usize) -> GradedElement {
        GradedElement::basis(self.space(), i)
    }

    pub fn bracket(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        self.structure.brackets().eval(&[x.clone(), y.clone()])
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> GradedElement {
        self.structure.brackets().eval_basis(&[i, j])
    }

    /// The same algebra viewed as an L∞-algebra with only `l₂`.
    pub fn as_linfty(&self) -> &FiniteLInfty {
        &self.structure
    }
}

/// Empty components `f_m : Λ^m g → L`, `|f_m| = 1 − m`, `1 ≤ m ≤ n`.
pub fn liealg_components(g: &LieAlgebra, target: &GradedSpace, n: usize) -> MultilinearFamily {
    MultilinearFamily::new(g.space(), target, Symmetry::Skew, (1..=n).map(|m| 1 - m as i64).collect())
}

/// Residuals of the conditions making `f₁,…,f_n` the components of an
/// L∞-morphism from `g` to the Lie n-algebra `a`:
/// `Σ_{i<j} (−1)^{i+j+1} f_{m−1}([x_i,x_j], x₁,…,x̂_i,…,x̂_j,…,x_m) − l₁f_m(x) − l_m(f₁(x₁),…,f₁(x_m))`
/// for `2 ≤ m ≤ n+1`, where `f_{n+1} = 0`.
pub fn check_liealg_morphism(
    g: &LieAlgebra,
    components: &MultilinearFamily,
    a: &FiniteLInfty,
) -> Result<Report, LInftyError> {
    if let Some(w) = a.property_violation() {
        return Err(LInftyError::PropertyViolated(w));
    }
    if components.source() != g.space() || components.target() != a.space() {
        return Err(LInftyError::SpaceMismatch);
    }
    let n = components.max_arity();
    for m in 1..=n {
        if components.offset(m) != 1 - m as i64 || components.symmetry() != Symmetry::Skew {
            return Err(LInftyError::DegreeMismatch {
                expected: 1 - m as i64,
                found: components.offset(m).to_string(),
            });
        }
    }
    let gs = g.space();
    let all: Vec<usize> = (0..g.dim()).collect();
    let mut report = Report::new();
    for m in 2..=n + 1 {
        for x in combinations(&all, m) {
            let mut lhs = GradedElement::zero(a.space());
            for i in 0..m {
                for j in i + 1..m {
                    let br = g.bracket_basis(x[i], x[j]);
                    if br.is_zero() {
                        continue;
                    }
                    let mut args = vec![br];
                    args.extend(
                        x.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i && k != j)
                            .map(|(_, &e)| GradedElement::basis(gs, e)),
                    );
                    // 1-indexed exponent (i+1)+(j+1)+1
                    let term = components.eval(&args).scale_sign(Sign::power((i + j + 3) as i64));
                    lhs = &lhs + &term;
                }
            }
            let fm = components.eval_basis(&x);
            let f1: Vec<GradedElement> = x.iter().map(|&e| components.eval_basis(&[e])).collect();
            let rhs = &a.brackets().eval(&[fm]) + &a.brackets().eval(&f1);
            let r = &lhs - &rhs;
            let condition = if m <= n { format!("m={m}") } else { format!("m={m} (top)") };
            report.push(Residual::new("liealg-morphism", m, labels(gs, &x), condition, r.to_string(), !r.is_zero()));
        }
    }
    Ok(report)
}

/// Components `f_k[1] : S^k(M¹) → M²` of degree 0 of an L∞[1]-morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedMorphism {
    components: MultilinearFamily,
}

impl ShiftedMorphism {
    pub fn new(source: &GradedSpace, target: &GradedSpace, max_arity: usize) -> Self {
        ShiftedMorphism { components: MultilinearFamily::new(source, target, Symmetry::Symmetric, vec![0; max_arity]) }
    }

    pub fn with_component(mut self, inputs: &[&str], value: GradedElement) -> Result<Self, LInftyError> {
        self.components.set(inputs, value)?;
        Ok(self)
    }

    pub fn components(&self) -> &MultilinearFamily {
        &self.components
    }

    /// `f_k[1](s⁻¹x₁,…,s⁻¹x_k) = (−1)^{Σ(k−i)|x_i|} s⁻¹ f_k(x₁,…,x_k)` for
    /// skew components `f_k` of degree `1−k`.
    pub fn from_skew_components(f: &MultilinearFamily) -> Self {
        let source = f.source().shifted(-1);
        let target = f.target().shifted(-1);
        let degs = f.source().degrees().to_vec();
        let family = f.map_values(&target, vec![0; f.max_arity()], Symmetry::Symmetric, |k, idx, v| {
            let d: Vec<i64> = idx.iter().map(|&i| degs[i]).collect();
            v.relabel(&target).scale_sign(suspension_sign(k, &d).expect("lengths agree"))
        });
        ShiftedMorphism { components: family.with_source(&source) }
    }
}

fn compositions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in compositions(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Arity bound of [`check_morphism_condition`].
pub const MORPHISM_CONDITION_MAX_ARITY: usize = 3;

/// Residuals of the L∞[1]-morphism condition for `k ≤ k_max ≤ 3`:
/// `Σ_{r+s=k} Σ_{σ∈Sh(r,s)} ε(σ) f_{s+1}(m_r(x_σ(1),…), x_σ(r+1),…)`
/// minus
/// `Σ_l Σ_{j₁+⋯+j_l=k} Σ_{τ∈Σ_k} ε(τ)/(l! j₁!⋯j_l!) n_l(f_{j₁}(x_τ(1),…), …)`.
pub fn check_morphism_condition(
    f: &ShiftedMorphism,
    b1: &FiniteLInftyShifted,
    b2: &FiniteLInftyShifted,
    k_max: usize,
) -> Result<Report, LInftyError> {
    if k_max > MORPHISM_CONDITION_MAX_ARITY {
        return Err(LInftyError::ArityOutOfRange { k: k_max, max: MORPHISM_CONDITION_MAX_ARITY });
    }
    let fc = f.components();
    if fc.source() != b1.space() || fc.target() != b2.space() {
        return Err(LInftyError::SpaceMismatch);
    }
    let space = b1.space();
    let mut report = Report::new();
    for k in 1..=k_max {
        for idx in ordered_tuples(Symmetry::Symmetric, space.degrees(), k) {
            let degs: Vec<i64> = idx.iter().map(|&i| space.degree(i)).collect();
            let mut r = GradedElement::zero(b2.space());
            for rr in 1..=k {
                for sigma in unshuffles(rr, k - rr) {
                    let perm = sigma.permute(&idx);
                    let inner = b1.brackets().eval_basis(&perm[..rr]);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut args = vec![inner];
                    args.extend(basis_elements(space, &perm[rr..]));
                    let eps = koszul_sign(&sigma, &degs).expect("lengths agree");
                    r = &r + &fc.eval(&args).scale_sign(eps);
                }
            }
            for js in compositions(k) {
                let l = js.len();
                let mut denom = factorial(l);
                for &j in &js {
                    denom *= factorial(j);
                }
                let weight = Rational::new(BigInt::one(), denom);
                for tau in all_permutations(k) {
                    let perm = tau.permute(&idx);
                    let mut args = Vec::with_capacity(l);
                    let mut start = 0;
                    for &j in &js {
                        args.push(fc.eval_basis(&perm[start..start + j]));
                        start += j;
                    }
                    if args.iter().any(GradedElement::is_zero) {
                        continue;
                    }
                    let v = b2.brackets().eval(&args);
                    if v.is_zero() {
                        continue;
                    }
                    let eps = koszul_sign(&tau, &degs).expect("lengths agree");
                    r = &r - &v.scale(&weight).scale_sign(eps);
                }
            }
            report.push(Residual::new(
                "linfty-morphism",
                k,
                labels(space, &idx),
                format!("k={k}"),
                r.to_string(),
                !r.is_zero(),
            ));
        }
    }
    Ok(report)
}
