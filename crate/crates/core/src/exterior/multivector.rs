use crate::arith::{int, RationalFunction};
use crate::graded::Sign;

use super::forms::contract_basis;
use super::{ChartMap, DifferentialForm, ExteriorError, MultivectorField};

impl MultivectorField {
    /// `∂/∂x^i`.
    pub fn coordinate_field(chart: &super::Chart, i: usize) -> Self {
        Self::basis(chart, &[i]).expect("index in range")
    }

    /// Vector field from its components `v^i`.
    pub fn vector(chart: &super::Chart, comps: Vec<RationalFunction>) -> Result<Self, ExteriorError> {
        if comps.len() != chart.dim() {
            return Err(ExteriorError::DegreeMismatch(chart.dim(), comps.len()));
        }
        Self::from_terms(chart, 1, comps.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// `v^i` of a vector field.
    pub fn vector_component(&self, i: usize) -> RationalFunction {
        self.component(&[i])
    }

    /// `v(f) = Σ v^i ∂_i f` for a vector field.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        debug_assert_eq!(self.degree(), 1);
        let mut acc = RationalFunction::zero(self.vars());
        for (idx, c) in self.components() {
            let df = f.partial_index(idx[0]);
            if !df.is_zero() {
                acc = &acc + &(c * &df);
            }
        }
        acc
    }

    pub(crate) fn contract(&self, form: &DifferentialForm) -> Result<DifferentialForm, ExteriorError> {
        let degree = form.degree().checked_sub(self.degree());
        let Some(degree) = degree else {
            return Ok(DifferentialForm::zero(form.chart(), 0));
        };
        let mut out = DifferentialForm::zero(form.chart(), degree);
        for (idx, g) in self.components() {
            let mut t = form.clone();
            for &j in idx {
                t = contract_basis(&t, j);
                if t.is_zero() {
                    break;
                }
            }
            if !t.is_zero() {
                out = &out + &t.scale(g);
            }
        }
        Ok(out)
    }

    /// Lie bracket of vector fields: `[u,v]^k = u(v^k) − v(u^k)`.
    pub fn vf_bracket(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_chart(other.chart())?;
        if self.degree() != 1 || other.degree() != 1 {
            return Err(ExteriorError::DegreeMismatch(1, self.degree().max(other.degree())));
        }
        let n = self.chart().dim();
        let comps =
            (0..n).map(|k| &self.apply(&other.vector_component(k)) - &other.apply(&self.vector_component(k))).collect();
        Self::vector(self.chart(), comps)
    }

    /// Schouten bracket, from the decomposable formula
    /// `[u₁∧⋯∧u_m, v₁∧⋯∧v_n] = Σ (−1)^{i+j} [u_i,v_j] ∧ u₁⋯û_i⋯u_m ∧ v₁⋯v̂_j⋯v_n`
    /// with function coefficients absorbed into the first factor. Functions
    /// enter through `[U, f] = Σ_i (−1)^{i+m} u_i(f) u₁⋯û_i⋯u_m`, the value
    /// forced by the derivation rule, and `[f, U] = (−1)^m [U, f]`.
    pub fn schouten(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_chart(other.chart())?;
        let chart = self.chart();
        let (m, n) = (self.degree(), other.degree());
        let out_degree = (m + n).checked_sub(1);
        let Some(out_degree) = out_degree else {
            return Ok(Self::zero(chart, 0));
        };
        let mut out = Self::zero(chart, out_degree);
        if out_degree > chart.dim() {
            return Ok(out);
        }
        for (i_idx, f) in self.components() {
            let us = factors(chart, i_idx, f);
            for (j_idx, g) in other.components() {
                let vs = factors(chart, j_idx, g);
                let term = match (m, n) {
                    (0, 0) => Self::zero(chart, out_degree),
                    (_, 0) => bracket_with_function(&us, g, out_degree)?,
                    (0, _) => bracket_with_function(&vs, f, out_degree)?.scale_sign(Sign::power(n as i64)),
                    _ => decomposable_bracket(&us, &vs, out_degree)?,
                };
                out = out.try_add(&term)?;
            }
        }
        Ok(out)
    }

    /// The `pr`-related field of a vector field on the codomain of a
    /// coordinate projection `pr`: components move to the matching domain
    /// variables and are pulled back.
    pub fn lift_along(&self, pr: &ChartMap) -> Result<Self, ExteriorError> {
        self.same_chart(pr.codomain())?;
        let index = pr.projection_indices().ok_or(ExteriorError::NotAProjection)?;
        let mut terms = Vec::new();
        for (idx, c) in self.components() {
            let new: Vec<usize> = idx.iter().map(|&j| index[j]).collect();
            terms.push((new, pr.pullback_function(c)?));
        }
        Self::from_terms(pr.domain(), self.degree(), terms)
    }
}

/// `f ∂_{i₁}`, `∂_{i₂}`, …; empty for a function.
fn factors(chart: &super::Chart, idx: &[usize], f: &RationalFunction) -> Vec<MultivectorField> {
    idx.iter()
        .enumerate()
        .map(|(k, &i)| {
            let e = MultivectorField::coordinate_field(chart, i);
            if k == 0 {
                e.scale(f)
            } else {
                e
            }
        })
        .collect()
}

fn wedge_all(chart: &super::Chart, fields: impl Iterator<Item = MultivectorField>) -> MultivectorField {
    fields.fold(MultivectorField::constant(chart, int(1)), |acc, v| acc.wedge(&v))
}

fn bracket_with_function(
    us: &[MultivectorField],
    f: &RationalFunction,
    degree: usize,
) -> Result<MultivectorField, ExteriorError> {
    let m = us.len();
    let chart = us[0].chart();
    let mut out = MultivectorField::zero(chart, degree);
    for i in 0..m {
        let uf = us[i].apply(f);
        if uf.is_zero() {
            continue;
        }
        let rest = wedge_all(chart, us.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, u)| u.clone()));
        // 1-indexed i+1
        let sign = Sign::power((i + 1 + m) as i64);
        out = out.try_add(&rest.scale(&uf).scale_sign(sign))?;
    }
    Ok(out)
}

fn decomposable_bracket(
    us: &[MultivectorField],
    vs: &[MultivectorField],
    degree: usize,
) -> Result<MultivectorField, ExteriorError> {
    let chart = us[0].chart();
    let mut out = MultivectorField::zero(chart, degree);
    for i in 0..us.len() {
        for j in 0..vs.len() {
            let b = us[i].vf_bracket(&vs[j])?;
            if b.is_zero() {
                continue;
            }
            let rest_u = us.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, u)| u.clone());
            let rest_v = vs.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone());
            let term = b.wedge(&wedge_all(chart, rest_u.chain(rest_v)));
            out = out.try_add(&term.scale_sign(Sign::power((i + j) as i64)))?;
        }
    }
    Ok(out)
}
