//! Exterior calculus on one coordinate chart.
//!
//! Differential forms and multivector fields share a representation: a degree
//! and a sparse map from strictly increasing index tuples to rational-function
//! coefficients. A form component at `[i, j]` is the coefficient of
//! `dx^i ∧ dx^j`; a multivector component at `[i, j]` is the coefficient of
//! `∂_i ∧ ∂_j`.

mod chart;
mod forms;
pub mod identities;
mod multivector;

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::arith::{ArithError, PowStyle, Rational, RationalFunction, Vars};
use crate::graded::{sort_with_koszul, Sign};

pub use chart::{Chart, ChartMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("map is not a coordinate projection")]
    NotAProjection,
    #[error("index {0} out of range for chart of dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Distinguishes forms from multivector fields at the type level.
pub trait Kind: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    /// Printed name of the basis element for variable `i`.
    fn basis_name(chart: &Chart, i: usize) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormKind;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorKind;

impl Kind for FormKind {
    fn basis_name(chart: &Chart, i: usize) -> String {
        let name = chart.vars().name(i);
        let short = format!("d{name}");
        if chart.vars().index_of(&short).is_some() {
            format!("d({name})")
        } else {
            short
        }
    }
}

impl Kind for VectorKind {
    fn basis_name(chart: &Chart, i: usize) -> String {
        format!("@{}", chart.vars().name(i))
    }
}

/// Homogeneous element of the exterior algebra over a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct Exterior<K: Kind> {
    chart: Chart,
    degree: usize,
    comps: BTreeMap<Vec<usize>, RationalFunction>,
    kind: PhantomData<K>,
}

pub type DifferentialForm = Exterior<FormKind>;
pub type MultivectorField = Exterior<VectorKind>;

impl<K: Kind> Exterior<K> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        Exterior { chart: chart.clone(), degree, comps: BTreeMap::new(), kind: PhantomData }
    }

    pub fn scalar(chart: &Chart, f: RationalFunction) -> Self {
        let mut e = Self::zero(chart, 0);
        e.insert(Vec::new(), f);
        e
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        Self::scalar(chart, RationalFunction::constant(chart.vars(), c))
    }

    /// Single basis element; `indices` may be in any order and the Koszul
    /// sign of sorting is applied. Repeated indices give zero.
    pub fn basis(chart: &Chart, indices: &[usize]) -> Result<Self, ExteriorError> {
        Self::from_terms(chart, indices.len(), [(indices.to_vec(), RationalFunction::one(chart.vars()))])
    }

    /// Sum of `coefficient * basis(indices)` terms with arbitrary index order.
    pub fn from_terms<I>(chart: &Chart, degree: usize, terms: I) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = (Vec<usize>, RationalFunction)>,
    {
        let mut e = Self::zero(chart, degree);
        let d = chart.dim();
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(ExteriorError::DegreeMismatch(degree, idx.len()));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= d) {
                return Err(ExteriorError::IndexOutOfRange(bad, d));
            }
            chart.vars().ensure_same(c.vars()).map_err(ExteriorError::Arith)?;
            let (sigma, sign) = sort_with_koszul(&idx, &vec![1; idx.len()]);
            let sorted = sigma.permute(&idx);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            e.add_component(sorted, if sign.is_plus() { c } else { -c });
        }
        Ok(e)
    }

    fn insert(&mut self, idx: Vec<usize>, c: RationalFunction) {
        if !c.is_zero() {
            self.comps.insert(idx, c);
        }
    }

    fn add_component(&mut self, idx: Vec<usize>, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.comps.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn vars(&self) -> &Vars {
        self.chart.vars()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, RationalFunction> {
        &self.comps
    }

    /// Coefficient at a strictly increasing index tuple.
    pub fn component(&self, idx: &[usize]) -> RationalFunction {
        self.comps.get(idx).cloned().unwrap_or_else(|| RationalFunction::zero(self.vars()))
    }

    /// The coefficient of a degree-0 element.
    pub fn as_scalar(&self) -> Option<RationalFunction> {
        (self.degree == 0).then(|| self.component(&[]))
    }

    pub(crate) fn same_chart(&self, other_chart: &Chart) -> Result<(), ExteriorError> {
        if &self.chart == other_chart {
            Ok(())
        } else {
            Err(ExteriorError::ChartMismatch(self.chart.name().to_string(), other_chart.name().to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_chart(&other.chart)?;
        // a zero summand of another degree is absorbed; the accumulator keeps
        // its degree when both are zero
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch(self.degree, other.degree));
        }
        let mut e = self.clone();
        for (idx, c) in &other.comps {
            e.add_component(idx.clone(), c.clone());
        }
        Ok(e)
    }

    /// Multiply every coefficient by a function.
    pub fn scale(&self, f: &RationalFunction) -> Self {
        let mut e = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.comps {
            e.insert(idx.clone(), c * f);
        }
        e
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut e = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.comps {
            e.insert(idx.clone(), c.scale(r));
        }
        e
    }

    pub fn scale_sign(&self, s: Sign) -> Self {
        if s.is_plus() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_chart(&other.chart)?;
        let degree = self.degree + other.degree;
        let mut e = Self::zero(&self.chart, degree);
        if degree > self.chart.dim() {
            return Ok(e);
        }
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                if let Some((idx, sign)) = merge_indices(i, j) {
                    let c = a * b;
                    e.add_component(idx, if sign.is_plus() { c } else { -c });
                }
            }
        }
        Ok(e)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Componentwise value at a point given by variable index.
    pub fn evaluate_at(&self, point: &[Rational]) -> Result<Self, ExteriorError> {
        let mut e = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.comps {
            let v = c.evaluate_at(point)?;
            e.insert(idx.clone(), RationalFunction::constant(self.vars(), v));
        }
        Ok(e)
    }

    /// Componentwise value at a named point.
    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Self, ExteriorError> {
        let values = self
            .vars()
            .names()
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| ArithError::UnassignedVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate_at(&values)
    }

    /// Apply `f` to every coefficient, keeping the basis.
    pub(crate) fn map_coefficients(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        let mut e = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.comps {
            e.insert(idx.clone(), f(c));
        }
        e
    }

    pub fn format(&self, style: PowStyle) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.degree == 0 {
            return self.component(&[]).format(style);
        }
        let mut out = String::new();
        for (n, (idx, c)) in self.comps.iter().enumerate() {
            let basis: Vec<String> = idx.iter().map(|&i| K::basis_name(&self.chart, i)).collect();
            let basis = basis.join("^");
            let (neg, mag) = split_sign(c);
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(&basis);
            } else if mag.needs_parens_as_factor() || mag.constant_value().is_some_and(|c| !c.is_integer()) {
                out.push_str(&format!("({})*{basis}", mag.format(style)));
            } else {
                out.push_str(&format!("{}*{basis}", mag.format(style)));
            }
        }
        out
    }
}

/// Pull a leading minus out of single-term polynomial coefficients.
fn split_sign(c: &RationalFunction) -> (bool, RationalFunction) {
    if c.is_polynomial() && c.numer().num_terms() == 1 {
        let lc = c.numer().leading_coefficient().unwrap();
        if lc < &Rational::from_integer(0.into()) {
            return (true, -c);
        }
    }
    (false, c.clone())
}

/// Concatenate two increasing index tuples and sort, returning the sign of the
/// sort or `None` when an index repeats.
pub(crate) fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Sign)> {
    let mut inversions = 0i64;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut idx = a.to_vec();
    idx.extend_from_slice(b);
    idx.sort_unstable();
    Some((idx, Sign::power(inversions)))
}

impl<K: Kind> fmt::Display for Exterior<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(PowStyle::DoubleStar))
    }
}

impl<K: Kind> fmt::Debug for Exterior<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; deg {}] {}", self.chart.name(), self.degree, self)
    }
}

impl<K: Kind> Add for &Exterior<K> {
    type Output = Exterior<K>;
    fn add(self, rhs: &Exterior<K>) -> Exterior<K> {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<K: Kind> Sub for &Exterior<K> {
    type Output = Exterior<K>;
    fn sub(self, rhs: &Exterior<K>) -> Exterior<K> {
        self + &(-rhs)
    }
}

impl<K: Kind> Neg for &Exterior<K> {
    type Output = Exterior<K>;
    fn neg(self) -> Exterior<K> {
        self.map_coefficients(|c| -c)
    }
}

impl<K: Kind> Mul for &Exterior<K> {
    type Output = Exterior<K>;
    /// Wedge product.
    fn mul(self, rhs: &Exterior<K>) -> Exterior<K> {
        self.wedge(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn wedge_examples() {
        let m = Chart::new("M", ["x", "y"]).unwrap();
        let dx = DifferentialForm::basis(&m, &[0]).unwrap();
        let dy = DifferentialForm::basis(&m, &[1]).unwrap();
        assert_eq!(dx.wedge(&dy), DifferentialForm::basis(&m, &[0, 1]).unwrap());
        assert!(dx.wedge(&dx).is_zero());
        let x = m.coordinate(0);
        let y = m.coordinate(1);
        let lhs = dy.scale(&x).wedge(&dx.scale(&y));
        // x*y * dy^dx = -x*y * dx^dy
        let expected = DifferentialForm::basis(&m, &[0, 1]).unwrap().scale(&-(&x * &y));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn unsorted_basis_carries_sign() {
        let m = Chart::new("M", ["x", "y", "z"]).unwrap();
        let a = DifferentialForm::basis(&m, &[2, 0]).unwrap();
        assert_eq!(a, -&DifferentialForm::basis(&m, &[0, 2]).unwrap());
        assert!(DifferentialForm::basis(&m, &[1, 1]).unwrap().is_zero());
    }

    #[test]
    fn printing() {
        let m = Chart::new("M", ["x", "y", "z"]).unwrap();
        let x = m.coordinate(0);
        let dxdy = DifferentialForm::basis(&m, &[0, 1]).unwrap().scale(&x);
        let dydz = DifferentialForm::basis(&m, &[1, 2]).unwrap().scale_rational(&rat(1, 2));
        assert_eq!((&dxdy + &dydz).to_string(), "x*dx^dy + (1/2)*dy^dz");
        assert_eq!((&(-&dxdy) - &dydz).to_string(), "-x*dx^dy - (1/2)*dy^dz");
        assert_eq!(DifferentialForm::zero(&m, 2).to_string(), "0");
        let v = MultivectorField::basis(&m, &[2]).unwrap().scale(&(&x + &x.pow(2).unwrap()));
        assert_eq!(v.to_string(), "(x**2 + x)*@z");
        let clash = Chart::new("N", ["x", "dx"]).unwrap();
        assert_eq!(DifferentialForm::basis(&clash, &[0]).unwrap().to_string(), "d(x)");
    }

    #[test]
    fn evaluation() {
        let m = Chart::new("M", ["x", "y"]).unwrap();
        let a = DifferentialForm::basis(&m, &[1]).unwrap().scale(&m.coordinate(0));
        let at = a.evaluate_at(&[rat(3, 1), rat(0, 1)]).unwrap();
        assert_eq!(at, DifferentialForm::basis(&m, &[1]).unwrap().scale_rational(&rat(3, 1)));
        let inv = DifferentialForm::scalar(&m, m.coordinate(0).inverse().unwrap());
        assert!(inv.evaluate_at(&[rat(0, 1), rat(1, 1)]).is_err());
        let seven = DifferentialForm::constant(&m, rat(7, 1));
        assert_eq!(seven.evaluate_at(&[rat(5, 1), rat(2, 1)]).unwrap(), seven);
    }
}
