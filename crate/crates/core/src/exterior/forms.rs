use crate::arith::{Polynomial, RationalFunction};

use super::{merge_indices, Chart, ChartMap, DifferentialForm, ExteriorError, MultivectorField};

impl DifferentialForm {
    /// `d(x^i)`.
    pub fn coordinate_differential(chart: &Chart, i: usize) -> Self {
        Self::basis(chart, &[i]).expect("index in range")
    }

    /// Differential of a function.
    pub fn differential(chart: &Chart, f: &RationalFunction) -> Self {
        Self::scalar(chart, f.clone()).exterior_derivative()
    }

    /// `d(Σ f_I dx^I) = Σ ∂_j f_I dx^j ∧ dx^I`.
    pub fn exterior_derivative(&self) -> Self {
        let chart = self.chart();
        let mut out = Self::zero(chart, self.degree() + 1);
        if self.degree() >= chart.dim() {
            return out;
        }
        for (idx, c) in self.components() {
            for j in 0..chart.dim() {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.partial_index(j);
                if dc.is_zero() {
                    continue;
                }
                let (new, sign) = merge_indices(&[j], idx).expect("j not in idx");
                out.add_component(new, if sign.is_plus() { dc } else { -dc });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }

    /// `φ*(f dx^{i₁}∧⋯∧dx^{i_p}) = (f∘φ) dφ^{i₁}∧⋯∧dφ^{i_p}`.
    pub fn pullback(&self, phi: &ChartMap) -> Result<Self, ExteriorError> {
        self.same_chart(phi.codomain())?;
        let dom = phi.domain();
        let dphi: Vec<DifferentialForm> =
            phi.images().iter().map(|p| Self::differential(dom, &RationalFunction::from_poly(p.clone()))).collect();
        let mut out = Self::zero(dom, self.degree());
        'terms: for (idx, c) in self.components() {
            let mut term = Self::scalar(dom, phi.pullback_function(c)?);
            for &i in idx {
                term = term.wedge(&dphi[i]);
                if term.is_zero() {
                    continue 'terms;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// `ι_v self` for a multivector `v`, extended linearly from
    /// `ι(v₁∧⋯∧v_n)β = ι_{v_n}⋯ι_{v₁}β`. Zero when `|v|` exceeds the degree.
    pub fn interior(&self, v: &MultivectorField) -> Result<Self, ExteriorError> {
        self.same_chart(v.chart())?;
        v.contract(self)
    }

    /// Radial homotopy `Kβ = Σ_I Σ_m c_m x^m / (p + |m|) · ι_E dx^I` with
    /// `E = Σ x^i ∂_i`, so that `dK + Kd = id` on polynomial forms of degree
    /// `p ≥ 1`. Returns `None` for functions or non-polynomial coefficients.
    pub fn poincare_primitive(&self) -> Option<Self> {
        let p = self.degree();
        if p == 0 {
            return None;
        }
        let chart = self.chart();
        let euler = MultivectorField::vector(chart, (0..chart.dim()).map(|i| chart.coordinate(i)).collect())
            .expect("dimension");
        let mut out = Self::zero(chart, p - 1);
        for (idx, c) in self.components() {
            if !c.is_polynomial() {
                return None;
            }
            let weighted = Polynomial::from_terms(
                chart.vars(),
                c.numer().terms().map(|(m, r)| (m.clone(), r / crate::arith::int((p as u32 + m.degree()) as i64))),
            )
            .scale(&c.denom().constant_value().expect("polynomial denominator is constant").recip());
            let basis = Self::basis(chart, idx).expect("valid indices").interior(&euler).expect("same chart");
            out = &out + &basis.scale(&RationalFunction::from_poly(weighted));
        }
        Some(out)
    }

    /// `L_v β = d ι_v β − (−1)^{|v|} ι_v dβ`.
    pub fn lie_derivative(&self, v: &MultivectorField) -> Result<Self, ExteriorError> {
        let a = self.interior(v)?.exterior_derivative();
        let b = self.exterior_derivative().interior(v)?;
        let out = if v.degree().is_multiple_of(2) { &a - &b } else { &a + &b };
        // a vanishing result still has degree p + 1 − |v|
        match (self.degree() + 1).checked_sub(v.degree()) {
            Some(d) if out.is_zero() => Ok(Self::zero(self.chart(), d)),
            _ => Ok(out),
        }
    }
}

/// Degree-`p` contraction with a single coordinate field: removes `dx^j` from
/// each component, with sign `(−1)^{position of j}`.
pub(crate) fn contract_basis(form: &DifferentialForm, j: usize) -> DifferentialForm {
    let mut out = DifferentialForm::zero(form.chart(), form.degree().saturating_sub(1));
    if form.degree() == 0 {
        return out;
    }
    for (idx, c) in form.components() {
        if let Some(pos) = idx.iter().position(|&i| i == j) {
            let mut rest = idx.clone();
            rest.remove(pos);
            out.add_component(rest, if pos % 2 == 0 { c.clone() } else { -c });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn r3() -> Chart {
        Chart::new("R3", ["x", "y", "z"]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let m = r3();
        let (x, y) = (m.coordinate(0), m.coordinate(1));
        let dx = DifferentialForm::coordinate_differential(&m, 0);
        let dy = DifferentialForm::coordinate_differential(&m, 1);
        assert_eq!(dy.scale(&x).exterior_derivative(), dx.wedge(&dy));
        let f = &(&x * &x) * &y;
        let df = DifferentialForm::differential(&m, &f);
        let expected = &dx.scale(&(&x * &y).scale(&int(2))) + &dy.scale(&(&x * &x));
        assert_eq!(df, expected);
        assert!(dx.wedge(&dy).exterior_derivative().is_zero());
    }

    #[test]
    fn poincare_primitive_inverts_d() {
        let m = r3();
        let (x, y, z) = (m.coordinate(0), m.coordinate(1), m.coordinate(2));
        let dx = DifferentialForm::coordinate_differential(&m, 0);
        let beta = dx.wedge(&DifferentialForm::coordinate_differential(&m, 1)).scale(&(&z * &z));
        let closed = beta.exterior_derivative();
        let k = closed.poincare_primitive().unwrap();
        assert_eq!(k.exterior_derivative(), closed);
        let exact = DifferentialForm::differential(&m, &(&(&x * &y) + &z));
        assert_eq!(exact.poincare_primitive().unwrap().exterior_derivative(), exact);
        let rational = dx.scale(&x.inverse().unwrap());
        assert!(rational.poincare_primitive().is_none());
    }

    #[test]
    fn interior_examples() {
        let m = r3();
        let dx = DifferentialForm::coordinate_differential(&m, 0);
        let dy = DifferentialForm::coordinate_differential(&m, 1);
        let dz = DifferentialForm::coordinate_differential(&m, 2);
        let ex = MultivectorField::basis(&m, &[0]).unwrap();
        let ey = MultivectorField::basis(&m, &[1]).unwrap();
        let ez = MultivectorField::basis(&m, &[2]).unwrap();
        let dxdy = dx.wedge(&dy);
        assert_eq!(dxdy.interior(&ex.wedge(&ey)).unwrap(), DifferentialForm::constant(&m, int(1)));
        assert_eq!(dxdy.wedge(&dz).interior(&ez).unwrap(), dxdy);
        assert_eq!(dxdy.interior(&ey).unwrap(), -&dx);
        // |v| above the form degree gives zero
        assert!(dx.interior(&ex.wedge(&ey)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let m = r3();
        let x = m.coordinate(0);
        let dx = DifferentialForm::coordinate_differential(&m, 0);
        let dy = DifferentialForm::coordinate_differential(&m, 1);
        let ex = MultivectorField::basis(&m, &[0]).unwrap();
        assert_eq!(dy.scale(&x).lie_derivative(&ex).unwrap(), dy);
        assert_eq!(dx.lie_derivative(&ex.scale(&x)).unwrap(), dx);
    }

    #[test]
    fn pullback_examples() {
        let small = Chart::new("M", ["x", "y"]).unwrap();
        let big = Chart::new("MM", ["x", "y", "u", "v"]).unwrap();
        let pr1 = ChartMap::coordinate(&big, &small, &[0, 1]).unwrap();
        let w = DifferentialForm::basis(&small, &[0, 1]).unwrap();
        assert_eq!(w.pullback(&pr1).unwrap(), DifferentialForm::basis(&big, &[0, 1]).unwrap());
        let diag = ChartMap::coordinate(&small, &big, &[0, 1, 0, 1]).unwrap();
        let du = DifferentialForm::basis(&big, &[2]).unwrap();
        assert_eq!(du.pullback(&diag).unwrap(), DifferentialForm::basis(&small, &[0]).unwrap());
        let dxdu = DifferentialForm::basis(&big, &[0, 2]).unwrap();
        assert!(dxdu.pullback(&diag).unwrap().is_zero());
        assert!(du.pullback(&pr1).is_err());
    }
}
