//! Finite-dimensional L∞ and L∞[1] structures given by structure constants.
//!
//! Multibrackets are stored on sorted basis tuples and extended to arbitrary
//! arguments by multilinearity and Koszul-signed sorting. A tuple may repeat a
//! basis element only when the symmetry allows it: odd elements for the
//! skew-symmetric `l_k`, even (shifted) elements for the symmetric `m_k`.

mod coalgebra;
pub mod fixtures;
mod morphism;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{format_rational, Rational};
use crate::graded::{sort_with_koszul, suspension_sign, unshuffles, Sign};
use crate::report::{Report, Residual};

pub use coalgebra::{
    full_symmetrization, reduced_comultiplication, reduced_diagonal, Coderivation, SymSum, TensorSum, TensorWord,
};
pub use morphism::{
    check_liealg_morphism, check_morphism_condition, check_strict_morphism, liealg_components, LieAlgebra, LinearMap,
    ShiftedMorphism, MORPHISM_CONDITION_MAX_ARITY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LInftyError {
    #[error("arity {k} outside the declared range 1..={max}")]
    ArityOutOfRange { k: usize, max: usize },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("empty graded space")]
    EmptySpace,
    #[error("elements live in different graded spaces")]
    SpaceMismatch,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: String },
    #[error("value for ({0}) must vanish by graded symmetry")]
    ForcedZero(String),
    #[error("word of length {len} exceeds the truncation {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("bracket vanishing property fails: {0}")]
    PropertyViolated(String),
    #[error("not a Lie algebra: {0}")]
    NotLieAlgebra(String),
}

struct SpaceData {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

/// Finite graded vector space with a labelled homogeneous basis.
#[derive(Clone)]
pub struct GradedSpace(Arc<SpaceData>);

impl GradedSpace {
    pub fn new<I, S>(basis: I) -> Result<Self, LInftyError>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (label, d) in basis {
            let label = label.into();
            if index.insert(label.clone(), labels.len()).is_some() {
                return Err(LInftyError::DuplicateLabel(label));
            }
            labels.push(label);
            degrees.push(d);
        }
        if labels.is_empty() {
            return Err(LInftyError::EmptySpace);
        }
        Ok(GradedSpace(Arc::new(SpaceData { labels, degrees, index })))
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.0.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0.degrees
    }

    pub fn index_of(&self, label: &str) -> Result<usize, LInftyError> {
        self.0.index.get(label).copied().ok_or_else(|| LInftyError::UnknownLabel(label.to_string()))
    }

    /// Same labels, every degree moved by `by`.
    pub fn shifted(&self, by: i64) -> GradedSpace {
        GradedSpace::new(self.0.labels.iter().cloned().zip(self.0.degrees.iter().map(|d| d + by)))
            .expect("labels already unique")
    }

    /// Whether the degree `d` occurs in the basis.
    pub fn has_degree(&self, d: i64) -> bool {
        self.0.degrees.contains(&d)
    }

    pub fn basis(&self, label: &str) -> Result<GradedElement, LInftyError> {
        Ok(GradedElement::basis(self, self.index_of(label)?))
    }

    /// Linear combination of labelled basis elements.
    pub fn element<'a, I>(&self, terms: I) -> Result<GradedElement, LInftyError>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut out = GradedElement::zero(self);
        for (label, c) in terms {
            out.add_term(self.index_of(label)?, c);
        }
        Ok(out)
    }

    fn same(&self, other: &GradedSpace) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.labels == other.0.labels && self.0.degrees == other.0.degrees)
    }
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for GradedSpace {}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.labels.iter().zip(&self.0.degrees).map(|(l, d)| format!("{l}:{d}")).collect();
        write!(f, "{{ {} }}", parts.join(", "))
    }
}

/// Element of a [`GradedSpace`], possibly mixed in degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedElement {
    space: GradedSpace,
    coeffs: BTreeMap<usize, Rational>,
}

impl GradedElement {
    pub fn zero(space: &GradedSpace) -> Self {
        GradedElement { space: space.clone(), coeffs: BTreeMap::new() }
    }

    pub fn basis(space: &GradedSpace, i: usize) -> Self {
        let mut e = Self::zero(space);
        e.add_term(i, Rational::one());
        e
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients by basis index.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, label: &str) -> Result<Rational, LInftyError> {
        let i = self.space.index_of(label)?;
        Ok(self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero))
    }

    /// The common degree of all nonzero terms; `None` for zero or mixed
    /// elements.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.coeffs.keys().map(|&i| self.space.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.coeffs.keys().all(|&i| self.space.degree(i) == d)
    }

    /// Parts of fixed degree, in increasing degree.
    pub fn homogeneous_parts(&self) -> Vec<(i64, GradedElement)> {
        let mut parts: BTreeMap<i64, GradedElement> = BTreeMap::new();
        for (&i, c) in &self.coeffs {
            parts
                .entry(self.space.degree(i))
                .or_insert_with(|| GradedElement::zero(&self.space))
                .add_term(i, c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.space);
        }
        let coeffs = self.coeffs.iter().map(|(&i, c)| (i, c * r)).collect();
        GradedElement { space: self.space.clone(), coeffs }
    }

    pub fn scale_sign(&self, s: Sign) -> Self {
        if s.is_plus() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LInftyError> {
        if self.space != other.space {
            return Err(LInftyError::SpaceMismatch);
        }
        let mut out = self.clone();
        for (&i, c) in &other.coeffs {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    /// Same coefficients read in another space with the same labels.
    pub fn relabel(&self, space: &GradedSpace) -> Self {
        debug_assert_eq!(self.space.labels(), space.labels());
        GradedElement { space: space.clone(), coeffs: self.coeffs.clone() }
    }

    pub(crate) fn add_term(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        self.try_add(rhs).expect("same graded space")
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self.try_add(&-rhs).expect("same graded space")
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        let coeffs = self.coeffs.iter().map(|(&i, c)| (i, -c)).collect();
        GradedElement { space: self.space.clone(), coeffs }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, c) in &self.coeffs {
            let label = self.space.label(i);
            let mag = c.abs();
            let body = if mag.is_one() {
                label.to_string()
            } else if mag.is_integer() {
                format!("{}*{label}", format_rational(&mag))
            } else {
                format!("({})*{label}", format_rational(&mag))
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// How a multilinear map behaves under reordering of its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `(−1)^σ ε(σ)`: the `l_k` of an L∞-algebra.
    Skew,
    /// `ε(σ)`: the `m_k` of an L∞[1]-algebra.
    Symmetric,
}

impl Symmetry {
    /// Whether an element of degree `d` may appear twice without forcing
    /// the value to vanish.
    pub fn allows_repeat(self, d: i64) -> bool {
        match self {
            Symmetry::Skew => d.rem_euclid(2) == 1,
            Symmetry::Symmetric => d.rem_euclid(2) == 0,
        }
    }
}

/// Sorts `idx` and returns the sign relating the value on `idx` to the value
/// on the sorted tuple, or `None` when the symmetry forces zero.
pub(crate) fn canonical(symmetry: Symmetry, idx: &[usize], space_degs: &[i64]) -> Option<(Vec<usize>, Sign)> {
    let degs: Vec<i64> = idx.iter().map(|&i| space_degs[i]).collect();
    let (sigma, eps) = sort_with_koszul(idx, &degs);
    let sorted = sigma.permute(idx);
    for w in sorted.windows(2) {
        if w[0] == w[1] && !symmetry.allows_repeat(space_degs[w[0]]) {
            return None;
        }
    }
    let sign = match symmetry {
        Symmetry::Skew => sigma.parity() * eps,
        Symmetry::Symmetric => eps,
    };
    Some((sorted, sign))
}

/// Sorted tuples of length `k` over `0..n` that are not forced to vanish.
pub fn ordered_tuples(symmetry: Symmetry, degs: &[i64], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(sym: Symmetry, degs: &[i64], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..degs.len() {
            let next = if sym.allows_repeat(degs[i]) { i } else { i + 1 };
            cur.push(i);
            go(sym, degs, k, next, cur, out);
            cur.pop();
        }
    }
    go(symmetry, degs, k, 0, &mut cur, &mut out);
    out
}

/// Family of multilinear maps `S^k → T` (or `Λ^k`), one table per arity,
/// with the degree of the arity-`k` map fixed in advance.
#[derive(Clone, PartialEq, Eq)]
pub struct MultilinearFamily {
    source: GradedSpace,
    target: GradedSpace,
    symmetry: Symmetry,
    /// `offsets[k-1]` is the degree of the arity-`k` map.
    offsets: Vec<i64>,
    tables: Vec<BTreeMap<Vec<usize>, GradedElement>>,
}

impl MultilinearFamily {
    pub fn new(source: &GradedSpace, target: &GradedSpace, symmetry: Symmetry, offsets: Vec<i64>) -> Self {
        let tables = vec![BTreeMap::new(); offsets.len()];
        MultilinearFamily { source: source.clone(), target: target.clone(), symmetry, offsets, tables }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn max_arity(&self) -> usize {
        self.offsets.len()
    }

    pub fn offset(&self, k: usize) -> i64 {
        self.offsets[k - 1]
    }

    fn check_arity(&self, k: usize) -> Result<(), LInftyError> {
        if k == 0 || k > self.max_arity() {
            Err(LInftyError::ArityOutOfRange { k, max: self.max_arity() })
        } else {
            Ok(())
        }
    }

    fn labels(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.source.label(i).to_string()).collect()
    }

    /// Sets the value on the given basis indices (any order).
    pub fn set_indices(&mut self, idx: &[usize], value: GradedElement) -> Result<(), LInftyError> {
        let k = idx.len();
        self.check_arity(k)?;
        if value.space != self.target {
            return Err(LInftyError::SpaceMismatch);
        }
        let expected = self.offset(k) + idx.iter().map(|&i| self.source.degree(i)).sum::<i64>();
        if !value.is_homogeneous_of(expected) {
            return Err(LInftyError::DegreeMismatch { expected, found: value.to_string() });
        }
        match canonical(self.symmetry, idx, self.source.degrees()) {
            None if value.is_zero() => Ok(()),
            None => Err(LInftyError::ForcedZero(self.labels(idx).join(", "))),
            Some((sorted, sign)) => {
                if value.is_zero() {
                    self.tables[k - 1].remove(&sorted);
                } else {
                    self.tables[k - 1].insert(sorted, value.scale_sign(sign));
                }
                Ok(())
            }
        }
    }

    pub fn set(&mut self, labels: &[&str], value: GradedElement) -> Result<(), LInftyError> {
        let idx = labels.iter().map(|l| self.source.index_of(l)).collect::<Result<Vec<_>, _>>()?;
        self.set_indices(&idx, value)
    }

    /// Stored nonzero entries of arity `k`, keyed by sorted tuples.
    pub fn entries(&self, k: usize) -> impl Iterator<Item = (&Vec<usize>, &GradedElement)> {
        self.tables.get(k.wrapping_sub(1)).into_iter().flat_map(|t| t.iter())
    }

    /// Value on basis indices; zero beyond the declared arities.
    pub fn eval_basis(&self, idx: &[usize]) -> GradedElement {
        let k = idx.len();
        if k == 0 || k > self.max_arity() {
            return GradedElement::zero(&self.target);
        }
        match canonical(self.symmetry, idx, self.source.degrees()) {
            None => GradedElement::zero(&self.target),
            Some((sorted, sign)) => match self.tables[k - 1].get(&sorted) {
                Some(v) => v.scale_sign(sign),
                None => GradedElement::zero(&self.target),
            },
        }
    }

    /// Multilinear extension; zero beyond the declared arities.
    pub fn eval(&self, args: &[GradedElement]) -> GradedElement {
        let mut acc = GradedElement::zero(&self.target);
        let mut idx = Vec::with_capacity(args.len());
        self.eval_rec(args, &mut idx, Rational::one(), &mut acc);
        acc
    }

    fn eval_rec(&self, args: &[GradedElement], idx: &mut Vec<usize>, coeff: Rational, acc: &mut GradedElement) {
        let Some((first, rest)) = args.split_first() else {
            let v = self.eval_basis(idx);
            if !v.is_zero() {
                *acc = &*acc + &v.scale(&coeff);
            }
            return;
        };
        for (i, c) in first.terms() {
            idx.push(i);
            self.eval_rec(rest, idx, &coeff * c, acc);
            idx.pop();
        }
    }

    /// Applies `f` to every stored value, keeping tables sorted.
    fn map_values(
        &self,
        target: &GradedSpace,
        offsets: Vec<i64>,
        symmetry: Symmetry,
        f: impl Fn(usize, &[usize], &GradedElement) -> GradedElement,
    ) -> Self {
        let mut out = MultilinearFamily::new(&self.source, target, symmetry, offsets);
        for (k, table) in self.tables.iter().enumerate() {
            for (idx, v) in table {
                let w = f(k + 1, idx, v);
                if !w.is_zero() {
                    out.tables[k].insert(idx.clone(), w);
                }
            }
        }
        out
    }

    fn with_source(mut self, source: &GradedSpace) -> Self {
        debug_assert_eq!(self.source.labels(), source.labels());
        self.source = source.clone();
        self
    }
}

impl fmt::Debug for MultilinearFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, table) in self.tables.iter().enumerate() {
            for (idx, v) in table {
                m.entry(&format!("{}({})", k + 1, self.labels(idx).join(",")), &v.to_string());
            }
        }
        m.finish()
    }
}

/// L∞-algebra: brackets `l_k` of degree `2 − k`, graded skew-symmetric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLInfty {
    brackets: MultilinearFamily,
}

impl FiniteLInfty {
    /// All brackets zero up to arity `max_arity`.
    pub fn new(space: &GradedSpace, max_arity: usize) -> Self {
        let offsets = (1..=max_arity).map(|k| 2 - k as i64).collect();
        FiniteLInfty { brackets: MultilinearFamily::new(space, space, Symmetry::Skew, offsets) }
    }

    /// Builder form of [`FiniteLInfty::set_bracket`].
    pub fn with_bracket(mut self, inputs: &[&str], value: GradedElement) -> Result<Self, LInftyError> {
        self.set_bracket(inputs, value)?;
        Ok(self)
    }

    /// `l_k(inputs) = value` with `k = inputs.len()`; the order of the
    /// inputs is arbitrary.
    pub fn set_bracket(&mut self, inputs: &[&str], value: GradedElement) -> Result<(), LInftyError> {
        self.brackets.set(inputs, value)
    }

    pub fn space(&self) -> &GradedSpace {
        self.brackets.source()
    }

    pub fn max_arity(&self) -> usize {
        self.brackets.max_arity()
    }

    pub fn brackets(&self) -> &MultilinearFamily {
        &self.brackets
    }

    /// `l_k(args)`.
    pub fn eval_bracket(&self, k: usize, args: &[GradedElement]) -> Result<GradedElement, LInftyError> {
        self.brackets.check_arity(k)?;
        check_args(self.space(), k, args)?;
        Ok(self.brackets.eval(args))
    }

    /// Whether the space is concentrated in degrees `1−n, …, 0` and every
    /// stored bracket has arity at most `n+1`.
    pub fn is_lie_n_algebra(&self, n: usize) -> bool {
        let lo = 1 - n as i64;
        self.space().degrees().iter().all(|&d| (lo..=0).contains(&d))
            && (n + 2..=self.max_arity()).all(|k| self.brackets.entries(k).next().is_none())
    }

    /// First bracket `l_i`, `i ≥ 2`, with total input degree below zero that
    /// does not vanish.
    pub fn property_violation(&self) -> Option<String> {
        let degs = self.space().degrees();
        for k in 2..=self.max_arity() {
            for (idx, v) in self.brackets.entries(k) {
                let total: i64 = idx.iter().map(|&i| degs[i]).sum();
                if total < 0 {
                    return Some(format!("l{k}({}) = {v}", self.brackets.labels(idx).join(", ")));
                }
            }
        }
        None
    }

    /// The L∞[1]-structure on `s⁻¹L`:
    /// `m_k(s⁻¹x₁, …, s⁻¹x_k) = (−1)^{Σ(k−i)|x_i|} s⁻¹ l_k(x₁, …, x_k)`.
    pub fn decalage(&self) -> FiniteLInftyShifted {
        let shifted = self.space().shifted(-1);
        let degs = self.space().degrees().to_vec();
        let family = self.brackets.map_values(&shifted, vec![1; self.max_arity()], Symmetry::Symmetric, |k, idx, v| {
            let d: Vec<i64> = idx.iter().map(|&i| degs[i]).collect();
            v.relabel(&shifted).scale_sign(suspension_sign(k, &d).expect("lengths agree"))
        });
        FiniteLInftyShifted { brackets: family.with_source(&shifted) }
    }
}

fn check_args(space: &GradedSpace, k: usize, args: &[GradedElement]) -> Result<(), LInftyError> {
    if args.len() != k {
        return Err(LInftyError::ArityOutOfRange { k: args.len(), max: k });
    }
    if args.iter().any(|a| a.space != *space) {
        return Err(LInftyError::SpaceMismatch);
    }
    Ok(())
}

/// L∞[1]-algebra: brackets `m_k` of degree 1, graded symmetric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLInftyShifted {
    brackets: MultilinearFamily,
}

impl FiniteLInftyShifted {
    pub fn new(space: &GradedSpace, max_arity: usize) -> Self {
        FiniteLInftyShifted { brackets: MultilinearFamily::new(space, space, Symmetry::Symmetric, vec![1; max_arity]) }
    }

    pub fn with_bracket(mut self, inputs: &[&str], value: GradedElement) -> Result<Self, LInftyError> {
        self.set_bracket(inputs, value)?;
        Ok(self)
    }

    pub fn set_bracket(&mut self, inputs: &[&str], value: GradedElement) -> Result<(), LInftyError> {
        self.brackets.set(inputs, value)
    }

    pub fn space(&self) -> &GradedSpace {
        self.brackets.source()
    }

    pub fn max_arity(&self) -> usize {
        self.brackets.max_arity()
    }

    pub fn brackets(&self) -> &MultilinearFamily {
        &self.brackets
    }

    pub fn eval_bracket(&self, k: usize, args: &[GradedElement]) -> Result<GradedElement, LInftyError> {
        self.brackets.check_arity(k)?;
        check_args(self.space(), k, args)?;
        Ok(self.brackets.eval(args))
    }

    /// Inverse of [`FiniteLInfty::decalage`]: `L = s M`.
    pub fn undecalage(&self) -> FiniteLInfty {
        let unshifted = self.space().shifted(1);
        let degs = unshifted.degrees().to_vec();
        let offsets = (1..=self.max_arity()).map(|k| 2 - k as i64).collect();
        let family = self.brackets.map_values(&unshifted, offsets, Symmetry::Skew, |k, idx, v| {
            let d: Vec<i64> = idx.iter().map(|&i| degs[i]).collect();
            v.relabel(&unshifted).scale_sign(suspension_sign(k, &d).expect("lengths agree"))
        });
        FiniteLInfty { brackets: family.with_source(&unshifted) }
    }
}

fn basis_elements(space: &GradedSpace, idx: &[usize]) -> Vec<GradedElement> {
    idx.iter().map(|&i| GradedElement::basis(space, i)).collect()
}

fn labels(space: &GradedSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| space.label(i).to_string()).collect()
}

/// `Σ_{i+j=m+1} Σ_{σ∈Sh(i,m−i)} (−1)^σ ε(σ) (−1)^{i(j−1)} l_j(l_i(x_σ(1), …), x_σ(i+1), …)`
/// on basis indices.
pub fn jacobiator(a: &FiniteLInfty, idx: &[usize]) -> GradedElement {
    let space = a.space();
    let m = idx.len();
    let degs: Vec<i64> = idx.iter().map(|&i| space.degree(i)).collect();
    let mut acc = GradedElement::zero(space);
    for i in 1..=m {
        let j = m + 1 - i;
        for sigma in unshuffles(i, m - i) {
            let perm = sigma.permute(idx);
            let inner = a.brackets.eval_basis(&perm[..i]);
            if inner.is_zero() {
                continue;
            }
            let mut args = vec![inner];
            args.extend(basis_elements(space, &perm[i..]));
            let outer = a.brackets.eval(&args);
            if outer.is_zero() {
                continue;
            }
            let sign = sigma.parity()
                * crate::graded::koszul_sign(&sigma, &degs).expect("lengths agree")
                * Sign::power((i * (j - 1)) as i64);
            acc = &acc + &outer.scale_sign(sign);
        }
    }
    acc
}

/// Residuals of the generalized Jacobi identity for `1 ≤ m ≤ m_max` on every
/// sorted basis tuple that skew-symmetry does not force to vanish. Brackets
/// beyond the declared arity count as zero.
pub fn check_generalized_jacobi(a: &FiniteLInfty, m_max: usize) -> Report {
    let mut report = Report::new();
    let space = a.space();
    for m in 1..=m_max {
        for idx in ordered_tuples(Symmetry::Skew, space.degrees(), m) {
            let r = jacobiator(a, &idx);
            report.push(Residual::new(
                "gen-jacobi",
                m,
                labels(space, &idx),
                format!("m={m}"),
                r.to_string(),
                !r.is_zero(),
            ));
        }
    }
    report
}

/// `Σ_{r+s=k} Σ_{σ∈Sh(r,s)} ε(σ) m_{s+1}(m_r(x_σ(1), …), x_σ(r+1), …)` on
/// basis indices.
pub fn l1_residual(b: &FiniteLInftyShifted, idx: &[usize]) -> GradedElement {
    let space = b.space();
    let k = idx.len();
    let degs: Vec<i64> = idx.iter().map(|&i| space.degree(i)).collect();
    let mut acc = GradedElement::zero(space);
    for r in 1..=k {
        for sigma in unshuffles(r, k - r) {
            let perm = sigma.permute(idx);
            let inner = b.brackets.eval_basis(&perm[..r]);
            if inner.is_zero() {
                continue;
            }
            let mut args = vec![inner];
            args.extend(basis_elements(space, &perm[r..]));
            let outer = b.brackets.eval(&args);
            if outer.is_zero() {
                continue;
            }
            let sign = crate::graded::koszul_sign(&sigma, &degs).expect("lengths agree");
            acc = &acc + &outer.scale_sign(sign);
        }
    }
    acc
}

pub fn check_l1_condition(b: &FiniteLInftyShifted, k_max: usize) -> Report {
    let mut report = Report::new();
    let space = b.space();
    for k in 1..=k_max {
        for idx in ordered_tuples(Symmetry::Symmetric, space.degrees(), k) {
            let r = l1_residual(b, &idx);
            report.push(Residual::new(
                "l1-condition",
                k,
                labels(space, &idx),
                format!("k={k}"),
                r.to_string(),
                !r.is_zero(),
            ));
        }
    }
    report
}
