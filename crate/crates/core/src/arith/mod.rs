//! Exact arithmetic: rationals, multivariate polynomials and rational functions.
//!
//! Every coefficient downstream lives in [`RationalFunction`], a quotient of
//! two [`Polynomial`]s over arbitrary-precision rationals kept in canonical
//! form. Polynomials carry their ordered variable list ([`Vars`]); values over
//! different variable lists never combine.

mod gcd;
mod poly;
mod ratfunc;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

pub use gcd::gcd;
pub use poly::{Monomial, Polynomial};
pub use ratfunc::RationalFunction;

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no value at the evaluation point")]
    UnassignedVariable(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("variable lists differ: ({0}) vs ({1})")]
    VariableMismatch(String, String),
}

/// Ordered list of variable names shared by every polynomial of a chart.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub(crate) fn ensure_same(&self, other: &Vars) -> Result<(), ArithError> {
        if self == other {
            Ok(())
        } else {
            Err(ArithError::VariableMismatch(self.0.join(","), other.0.join(",")))
        }
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl Hash for Vars {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars({})", self.0.join(","))
    }
}

/// Token used between a base and its exponent when printing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowStyle {
    /// `x^2`
    Caret,
    /// `x**2`, the form accepted by the input language
    DoubleStar,
}

impl PowStyle {
    fn token(self) -> &'static str {
        match self {
            PowStyle::Caret => "^",
            PowStyle::DoubleStar => "**",
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `3`, `-1/2`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient prefix for a non-constant term, given a positive magnitude.
fn coefficient_prefix(c: &Rational) -> String {
    debug_assert!(c.is_positive());
    if c.is_one() {
        String::new()
    } else if c.is_integer() {
        format!("{}*", c.numer())
    } else {
        format!("({}/{})*", c.numer(), c.denom())
    }
}
