//! Sign bookkeeping for graded objects: permutations, unshuffles, Koszul
//! signs, and the signs produced by suspension and décalage.
//!
//! Permutations are 1-indexed. A permutation σ acts on a sequence by
//! `x₁⋯x_k ↦ x_{σ(1)}⋯x_{σ(k)}`, and the Koszul sign is defined by
//! `x₁⋯x_k = ε(σ) x_{σ(1)}⋯x_{σ(k)}` in the free graded commutative algebra.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
}

/// A sign ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn power(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Bijection of `{1..k}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GradedError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i == 0 || i > k || seen[i - 1] {
                return Err(GradedError::NotAPermutation(k));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation { images: (1..=k).collect() }
    }

    /// Transposition of positions `i` and `j` (1-indexed).
    pub fn transposition(k: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(k);
        p.images.swap(i - 1, j - 1);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for 1-indexed `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &s) in self.images.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// The rearrangement obtained by first applying `tau` and then `self` to a
    /// sequence, i.e. `i ↦ τ(σ(i))`.
    pub fn after(&self, tau: &Permutation) -> Permutation {
        assert_eq!(self.len(), tau.len());
        Permutation { images: self.images.iter().map(|&s| tau.apply(s)).collect() }
    }

    /// `(x_{σ(1)}, …, x_{σ(k)})`.
    pub fn permute<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(self.len(), xs.len());
        self.images.iter().map(|&s| xs[s - 1].clone()).collect()
    }

    pub fn inversions(&self) -> usize {
        let mut n = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.images[i] > self.images[j] {
                    n += 1;
                }
            }
        }
        n
    }

    /// `(-1)^σ`.
    pub fn parity(&self) -> Sign {
        Sign::power(self.inversions() as i64)
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 1..=self.len() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut i = self.apply(start);
            while i != start {
                seen[i - 1] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("(1)");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(""))?;
        }
        Ok(())
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), GradedError> {
    if expected == found {
        Ok(())
    } else {
        Err(GradedError::LengthMismatch { expected, found })
    }
}

/// `ε(σ; degs)`: one factor `(-1)^{|x_a||x_b|}` for every pair `a < b` that σ
/// puts out of order.
pub fn koszul_sign(sigma: &Permutation, degs: &[i64]) -> Result<Sign, GradedError> {
    check_len(sigma.len(), degs.len())?;
    let mut exp = 0i64;
    let im = sigma.images();
    for i in 0..im.len() {
        for j in i + 1..im.len() {
            if im[i] > im[j] {
                exp += degs[im[i] - 1] * degs[im[j] - 1];
            }
        }
    }
    Ok(Sign::power(exp))
}

/// `(-1)^σ ε(σ; degs)`, the antisymmetric Koszul sign.
pub fn signed_koszul_sign(sigma: &Permutation, degs: &[i64]) -> Result<Sign, GradedError> {
    Ok(sigma.parity() * koszul_sign(sigma, degs)?)
}

/// `(-1)^{Σ_{i=1}^{k} (k-i)|x_i|}`.
pub fn suspension_sign(k: usize, degs: &[i64]) -> Result<Sign, GradedError> {
    check_len(k, degs.len())?;
    let exp: i64 = degs.iter().enumerate().map(|(i, d)| (k - 1 - i) as i64 * d).sum();
    Ok(Sign::power(exp))
}

/// Koszul sign of σ on the desuspended elements `s⁻¹x_i`, written in terms
/// of the original degrees:
/// `(-1)^{Σ(k-i)(|x_i| + |x_{σ(i)}|)} (-1)^σ ε(σ; degs)`.
pub fn decalage_koszul(sigma: &Permutation, degs: &[i64]) -> Result<Sign, GradedError> {
    let k = sigma.len();
    check_len(k, degs.len())?;
    let permuted = sigma.permute(degs);
    Ok(suspension_sign(k, degs)? * suspension_sign(k, &permuted)? * signed_koszul_sign(sigma, degs)?)
}

/// `(p,q)`-unshuffles in lexicographic order of the first block.
pub fn unshuffles(p: usize, q: usize) -> Vec<Permutation> {
    multi_unshuffles(&[p, q])
}

/// Permutations increasing on each consecutive block of the given sizes,
/// ordered lexicographically by image list.
pub fn multi_unshuffles(blocks: &[usize]) -> Vec<Permutation> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    let available: Vec<usize> = (1..=n).collect();
    fill_blocks(blocks, &available, &mut images, &mut out);
    out
}

fn fill_blocks(blocks: &[usize], available: &[usize], images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    let Some((&first, rest)) = blocks.split_first() else {
        out.push(Permutation { images: images.clone() });
        return;
    };
    for chosen in combinations(available, first) {
        let remaining: Vec<usize> = available.iter().copied().filter(|a| !chosen.contains(a)).collect();
        let mark = images.len();
        images.extend_from_slice(&chosen);
        fill_blocks(rest, &remaining, images, out);
        images.truncate(mark);
    }
}

/// Size-`r` subsets of `items` in lexicographic order, each increasing.
pub fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, r, 0, &mut cur, &mut out);
    out
}

/// All permutations of `1..=k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    multi_unshuffles(&vec![1; k])
}

/// Stable sort of graded items by key, returning the sorting permutation σ
/// (so that the sorted sequence is `x_{σ(1)}⋯x_{σ(k)}`) and `ε(σ; degs)`.
pub fn sort_with_koszul<K: Ord>(keys: &[K], degs: &[i64]) -> (Permutation, Sign) {
    let mut idx: Vec<usize> = (1..=keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a - 1].cmp(&keys[b - 1]));
    let sigma = Permutation { images: idx };
    let sign = koszul_sign(&sigma, degs).expect("lengths agree");
    (sigma, sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sh21_is_identity_23_and_123() {
        let sh = unshuffles(2, 1);
        let printed: Vec<String> = sh.iter().map(|s| s.to_string()).collect();
        assert_eq!(printed, ["(1)", "(23)", "(123)"]);
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(2, 2).len(), 6);
        assert_eq!(unshuffles(1, 0), vec![Permutation::identity(1)]);
        assert_eq!(unshuffles(0, 3), vec![Permutation::identity(3)]);
        assert_eq!(multi_unshuffles(&[1, 2, 1]).len(), 12);
    }

    #[test]
    fn koszul_examples() {
        let t = Permutation::transposition(2, 1, 2);
        assert_eq!(koszul_sign(&t, &[1, 1]).unwrap(), Sign::Minus);
        assert_eq!(koszul_sign(&t, &[1, 2]).unwrap(), Sign::Plus);
        // x1 x2 x3 -> x3 x1 x2 picks up |x3||x2| + |x3||x1|
        let s = perm(&[3, 1, 2]);
        for (a, b, c) in [(1, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 0), (2, 3, 5)] {
            assert_eq!(koszul_sign(&s, &[a, b, c]).unwrap(), Sign::power(c * b + c * a));
        }
        assert_eq!(koszul_sign(&s, &[0, 0, 0]).unwrap(), Sign::Plus);
        assert!(koszul_sign(&s, &[1, 1]).is_err());
    }

    #[test]
    fn suspension_examples() {
        assert_eq!(suspension_sign(2, &[1, 0]).unwrap(), Sign::Minus);
        assert_eq!(suspension_sign(1, &[7]).unwrap(), Sign::Plus);
        assert_eq!(suspension_sign(3, &[1, 1, 1]).unwrap(), Sign::Minus);
    }

    #[test]
    fn decalage_examples() {
        let t = Permutation::transposition(2, 1, 2);
        assert_eq!(decalage_koszul(&Permutation::identity(3), &[1, -2, 0]).unwrap(), Sign::Plus);
        assert_eq!(decalage_koszul(&t, &[1, 1]).unwrap(), Sign::Plus);
        assert_eq!(decalage_koszul(&t, &[0, 0]).unwrap(), Sign::Minus);
    }

    #[test]
    fn sorting_records_the_koszul_sign() {
        let (sigma, sign) = sort_with_koszul(&["c", "a", "b"], &[1, 1, 0]);
        assert_eq!(sigma, perm(&[2, 3, 1]));
        // moving c (odd) past a (odd) and b (even)
        assert_eq!(sign, Sign::Minus);
    }
}
