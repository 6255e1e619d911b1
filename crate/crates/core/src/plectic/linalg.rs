//! Exact Gaussian elimination over ℚ and over the rational-function field.

use num_traits::{One, Zero};

use crate::arith::{Rational, RationalFunction, Vars};

/// Field operations needed by the eliminator.
pub trait Scalar: Clone {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self / other` for nonzero `other`.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Structural size, used to pick the simplest pivot.
    fn size(&self) -> usize;
}

impl Scalar for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn size(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Scalar for RationalFunction {
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        RationalFunction::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        RationalFunction::one(self.vars())
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("pivot is nonzero")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn size(&self) -> usize {
        RationalFunction::size(self)
    }
}

/// Outcome of solving `A v = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// No solution.
    Inconsistent,
    /// A particular solution (free variables set to zero) and a nonzero
    /// kernel vector.
    Underdetermined {
        particular: Vec<T>,
        kernel: Vec<T>,
    },
}

/// Solves `A v = b` with `A` given row by row (`rows × cols`); `zero` fixes
/// the field element used for empty entries.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T], cols: usize, zero: &T) -> Solution<T> {
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let pick = (rank..m.len()).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| m[r][col].size());
        let Some(p) = pick else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].one_like().div(&m[rank][col]);
        m[rank] = m[rank].iter().map(|x| x.mul(&inv)).collect();
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let pivot_row = m[rank].clone();
            for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![zero.zero_like(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    if rank == cols {
        return Solution::Unique(particular);
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("rank < cols");
    let mut kernel = vec![zero.zero_like(); cols];
    kernel[free] = zero.one_like();
    for (i, &c) in pivots.iter().enumerate() {
        kernel[c] = m[i][free].neg();
    }
    Solution::Underdetermined { particular, kernel }
}

/// A nonzero vector with `A v = 0`, if one exists.
pub fn kernel_vector<T: Scalar>(a: &[Vec<T>], cols: usize, zero: &T) -> Option<Vec<T>> {
    let b = vec![zero.zero_like(); a.len()];
    match solve(a, &b, cols, zero) {
        Solution::Underdetermined { kernel, .. } => Some(kernel),
        _ => None,
    }
}

/// Zero of the rational-function field in `vars`.
pub fn rf_zero(vars: &Vars) -> RationalFunction {
    RationalFunction::zero(vars)
}
