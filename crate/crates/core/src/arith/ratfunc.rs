use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{gcd, primitive_scale};
use super::{ArithError, Polynomial, PowStyle, Rational, Vars};

/// Quotient of two polynomials in canonical form.
///
/// Canonical form: numerator and denominator are coprime. When the
/// denominator is constant it is stored as `1` and the numerator carries
/// rational coefficients; otherwise both have integer coefficients with joint
/// content 1 and the denominator's leading coefficient is positive. Two
/// canonical values are equal iff they are equal as functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, ArithError> {
        Polynomial::var(vars, name).map(Self::from_poly)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ArithError> {
        num.vars().ensure_same(den.vars())?;
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        if let Some(c) = den.constant_value() {
            return Self::from_poly(num.scale(&c.recip()));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        if let Some(c) = den.constant_value() {
            return Self::from_poly(num.scale(&c.recip()));
        }
        // joint integer content over num and den
        let mut s = primitive_scale(num.terms().chain(den.terms()).map(|(_, c)| c));
        if den.leading_coefficient().unwrap() * &s < Rational::zero() {
            s = -s;
        }
        RationalFunction { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Number of stored monomials; used to prefer structurally simple pivots.
    pub fn size(&self) -> usize {
        self.num.num_terms() + if self.den.is_constant() { 0 } else { self.den.num_terms() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if self.den.is_constant() {
            Self::from_poly(self.num.scale(c))
        } else if c.is_zero() {
            Self::zero(self.vars())
        } else {
            Self::normalized(self.num.scale(c), self.den.clone())
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        self.vars().ensure_same(rhs.vars())?;
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        RationalFunction::one(self.vars()).checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Self, ArithError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let e = e as u32;
        // canonical form survives powers: coprime stays coprime
        Ok(RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }.renormalize_scale())
    }

    fn renormalize_scale(self) -> Self {
        if self.den.is_constant() {
            let c = self.den.constant_value().unwrap();
            Self::from_poly(self.num.scale(&c.recip()))
        } else {
            Self::normalized(self.num, self.den)
        }
    }

    /// Partial derivative with respect to the variable with the given index.
    pub fn partial_index(&self, var: usize) -> Self {
        if self.den.is_constant() {
            return Self::from_poly(self.num.partial(var));
        }
        let dn = self.num.partial(var);
        let dd = self.den.partial(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(num, &self.den * &self.den)
    }

    pub fn partial(&self, var: &str) -> Result<Self, ArithError> {
        let i = self.vars().index_of(var).ok_or_else(|| ArithError::UnknownVariable(var.to_string()))?;
        Ok(self.partial_index(i))
    }

    /// Value at a point given by variable index.
    pub fn evaluate_at(&self, point: &[Rational]) -> Result<Rational, ArithError> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(ArithError::PoleAtPoint);
        }
        Ok(self.num.evaluate(point) / d)
    }

    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, ArithError> {
        let values = self
            .vars()
            .names()
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| ArithError::UnassignedVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate_at(&values)
    }

    /// Substitute polynomials over `target` for every variable.
    pub fn compose(&self, target: &Vars, images: &[Polynomial]) -> Result<Self, ArithError> {
        RationalFunction::new(self.num.compose(target, images), self.den.compose(target, images))
    }

    pub fn format(&self, style: PowStyle) -> String {
        if self.den.is_constant() {
            return self.num.format(style);
        }
        let num = self.num.format(style);
        let den = self.den.format(style);
        let num = if self.num.num_terms() == 1 { num } else { format!("({num})") };
        let den = if self.den.is_atom() { den } else { format!("({den})") };
        format!("{num}/{den}")
    }

    /// True when printing needs parentheses to act as a factor in a product.
    pub fn needs_parens_as_factor(&self) -> bool {
        !(self.den.is_constant() && self.num.num_terms() <= 1)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(PowStyle::Caret))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`] otherwise.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn setup() -> (Vars, RationalFunction, RationalFunction) {
        let v = Vars::new(["x", "y"]);
        let x = RationalFunction::var(&v, "x").unwrap();
        let y = RationalFunction::var(&v, "y").unwrap();
        (v, x, y)
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let (_, x, y) = setup();
        let a = &x / &y;
        let b = &y / &x;
        assert!((&a * &b).is_one());
    }

    #[test]
    fn cancels_common_factor() {
        let (v, x, _) = setup();
        let one = RationalFunction::one(&v);
        let f = &(&(&x * &x) - &one) / &(&x - &one);
        // oracle: cross-multiplication against x + 1
        let target = &x + &one;
        assert_eq!(f.numer() * target.denom(), target.numer() * f.denom());
        assert_eq!(f, target);
    }

    #[test]
    fn derivatives() {
        let (v, x, y) = setup();
        let f = &(&x * &x) * &y;
        assert_eq!(f.partial("x").unwrap(), &(&x * &y).scale(&int(2)) + &RationalFunction::zero(&v));
        let g = RationalFunction::one(&v).checked_div(&x).unwrap();
        assert_eq!(g.partial("x").unwrap(), -&(&RationalFunction::one(&v) / &(&x * &x)));
        assert!(x.partial("y").unwrap().is_zero());
        assert_eq!(x.partial("z"), Err(ArithError::UnknownVariable("z".into())));
    }

    #[test]
    fn evaluation() {
        let (v, x, y) = setup();
        let mut pt = BTreeMap::new();
        pt.insert("x".to_string(), int(1));
        pt.insert("y".to_string(), int(2));
        assert_eq!((&x / &y).evaluate(&pt).unwrap(), rat(1, 2));
        let one = RationalFunction::one(&v);
        let f = &(&(&x * &x) - &one) / &(&x - &one);
        assert_eq!(f.evaluate(&pt).unwrap(), int(2));
        let pole = &one / &(&x - &one);
        assert_eq!(pole.evaluate(&pt), Err(ArithError::PoleAtPoint));
        assert_eq!(RationalFunction::constant(&v, int(7)).evaluate(&pt).unwrap(), int(7));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let (v, x, _) = setup();
        assert_eq!(x.checked_div(&RationalFunction::zero(&v)), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn printing() {
        let (v, x, y) = setup();
        let one = RationalFunction::one(&v);
        let num = &(&(&x * &x) * &y).scale(&int(2)) - &one;
        let f = &num / &y.scale(&int(3));
        assert_eq!(f.to_string(), "(2*x^2*y - 1)/(3*y)");
        assert_eq!((&one / &x).to_string(), "1/x");
        assert_eq!(x.scale(&rat(-3, 6)).to_string(), "-(1/2)*x");
        assert_eq!(RationalFunction::zero(&v).to_string(), "0");
    }
}
