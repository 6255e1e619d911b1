//! The reduced symmetric coalgebra `S̄(M)` truncated at a word length, the
//! coderivation induced by an L∞[1]-structure and the reduced diagonals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, Rational};
use crate::graded::{all_permutations, koszul_sign, unshuffles, Sign};
use crate::report::{Report, Residual};

use super::{canonical, ordered_tuples, FiniteLInftyShifted, GradedSpace, LInftyError, Symmetry};

/// A word `x_{i₁}⋯x_{i_k}` in canonical sorted order together with the
/// Koszul sign picked up while sorting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorWord {
    pub letters: Vec<usize>,
    pub sign: Sign,
}

impl TensorWord {
    /// `None` when the symmetry forces the word to vanish.
    pub fn new(space: &GradedSpace, symmetry: Symmetry, labels: &[&str]) -> Result<Option<Self>, LInftyError> {
        let idx = labels.iter().map(|l| space.index_of(l)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_indices(space, symmetry, &idx))
    }

    pub fn from_indices(space: &GradedSpace, symmetry: Symmetry, idx: &[usize]) -> Option<Self> {
        canonical(symmetry, idx, space.degrees()).map(|(letters, sign)| TensorWord { letters, sign })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self, space: &GradedSpace) -> i64 {
        word_degree(space, &self.letters)
    }
}

fn word_degree(space: &GradedSpace, letters: &[usize]) -> i64 {
    letters.iter().map(|&i| space.degree(i)).sum()
}

fn word_string(space: &GradedSpace, letters: &[usize]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters.iter().map(|&i| space.label(i)).collect::<Vec<_>>().join(" ⊙ ")
}

fn write_sum<'a, K: 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a K, &'a Rational)>,
    show: impl Fn(&K) -> String,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let mag = c.abs();
        let body = if mag.is_one() { show(k) } else { format!("({})*({})", format_rational(&mag), show(k)) };
        match (first, c.is_negative()) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Finite linear combination of symmetric words.
#[derive(Clone, PartialEq, Eq)]
pub struct SymSum {
    space: GradedSpace,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl SymSum {
    pub fn zero(space: &GradedSpace) -> Self {
        SymSum { space: space.clone(), terms: BTreeMap::new() }
    }

    /// The single word on the given letters, in any order.
    pub fn word(space: &GradedSpace, idx: &[usize]) -> Self {
        let mut s = Self::zero(space);
        s.add_word(idx, Rational::one());
        s
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    /// Adds `c · x_{idx₁} ⊙ ⋯`, sorting the letters.
    pub fn add_word(&mut self, idx: &[usize], c: Rational) {
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = canonical(Symmetry::Symmetric, idx, self.space.degrees()) else {
            return;
        };
        let c = if sign.is_plus() { c } else { -c };
        let e = self.terms.entry(sorted.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&sorted);
        }
    }

    pub fn add(&mut self, other: &SymSum, scale: &Rational) {
        for (w, c) in &other.terms {
            self.add_word(w, c * scale);
        }
    }
}

impl fmt::Display for SymSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter(), |w| word_string(&self.space, w))
    }
}

impl fmt::Debug for SymSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite linear combination of tensor products of sorted symmetric words.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorSum {
    space: GradedSpace,
    terms: BTreeMap<Vec<Vec<usize>>, Rational>,
}

impl TensorSum {
    pub fn zero(space: &GradedSpace) -> Self {
        TensorSum { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Vec<usize>>, &Rational)> {
        self.terms.iter()
    }

    /// Adds `c · w₁ ⊗ ⋯ ⊗ w_r`; each factor is sorted with its Koszul sign.
    pub fn add_tensor(&mut self, factors: &[Vec<usize>], c: Rational) {
        if c.is_zero() {
            return;
        }
        let mut key = Vec::with_capacity(factors.len());
        let mut sign = Sign::Plus;
        for w in factors {
            let Some((sorted, s)) = canonical(Symmetry::Symmetric, w, self.space.degrees()) else {
                return;
            };
            sign *= s;
            key.push(sorted);
        }
        let c = if sign.is_plus() { c } else { -c };
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &TensorSum) {
        for (k, c) in &other.terms {
            self.add_tensor(k, c.clone());
        }
    }

    pub fn neg(&self) -> TensorSum {
        TensorSum { space: self.space.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl fmt::Display for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter(), |k| {
            k.iter().map(|w| word_string(&self.space, w)).collect::<Vec<_>>().join(" ⊗ ")
        })
    }
}

impl fmt::Debug for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn degs_of(space: &GradedSpace, letters: &[usize]) -> Vec<i64> {
    letters.iter().map(|&i| space.degree(i)).collect()
}

/// `Δ̄(v₁⋯v_n) = Σ_{1≤p≤n−1} Σ_{σ∈Sh(p,n−p)} ε(σ) (v_σ(1)⋯v_σ(p)) ⊗ (v_σ(p+1)⋯v_σ(n))`.
pub fn reduced_comultiplication(space: &GradedSpace, word: &[usize]) -> TensorSum {
    let mut out = TensorSum::zero(space);
    add_comultiplication(&mut out, space, word, &[], Rational::one());
    out
}

/// Adds `c · Δ̄(word) ⊗ tail`.
fn add_comultiplication(out: &mut TensorSum, space: &GradedSpace, word: &[usize], tail: &[Vec<usize>], c: Rational) {
    let n = word.len();
    let degs = degs_of(space, word);
    for p in 1..n {
        for sigma in unshuffles(p, n - p) {
            let perm = sigma.permute(word);
            let eps = koszul_sign(&sigma, &degs).expect("lengths agree");
            let mut factors = vec![perm[..p].to_vec(), perm[p..].to_vec()];
            factors.extend(tail.iter().cloned());
            out.add_tensor(&factors, if eps.is_plus() { c.clone() } else { -c.clone() });
        }
    }
}

/// `Δ̄^{(n)} = (Δ̄ ⊗ id^{⊗(n−1)}) ∘ Δ̄^{(n−1)}`, with `Δ̄^{(0)} = id`.
pub fn reduced_diagonal(space: &GradedSpace, n: usize, word: &[usize]) -> TensorSum {
    let mut cur = TensorSum::zero(space);
    cur.add_tensor(&[word.to_vec()], Rational::one());
    for _ in 0..n {
        let mut next = TensorSum::zero(space);
        for (factors, c) in cur.terms() {
            add_comultiplication(&mut next, space, &factors[0], &factors[1..], c.clone());
        }
        cur = next;
    }
    cur
}

/// `Σ_{σ∈Σ_n} ε(σ) v_σ(1) ⊗ ⋯ ⊗ v_σ(n)`, the closed form of `Δ̄^{(n−1)}` on
/// a word of length `n`.
pub fn full_symmetrization(space: &GradedSpace, word: &[usize]) -> TensorSum {
    let degs = degs_of(space, word);
    let mut out = TensorSum::zero(space);
    for sigma in all_permutations(word.len()) {
        let perm = sigma.permute(word);
        let eps = koszul_sign(&sigma, &degs).expect("lengths agree");
        let factors: Vec<Vec<usize>> = perm.iter().map(|&i| vec![i]).collect();
        out.add_tensor(&factors, if eps.is_plus() { Rational::one() } else { -Rational::one() });
    }
    out
}

/// The coderivation `Q` of `S̄(M)` with components `Q¹_k = m_k`, acting on
/// words of length at most `word_max`.
pub struct Coderivation<'a> {
    structure: &'a FiniteLInftyShifted,
    word_max: usize,
}

impl FiniteLInftyShifted {
    /// Lifts the brackets to the coderivation `Q` on words of length
    /// `≤ word_max`.
    pub fn lift_coderivation(&self, word_max: usize) -> Coderivation<'_> {
        Coderivation { structure: self, word_max: word_max.max(1) }
    }
}

impl Coderivation<'_> {
    pub fn word_max(&self) -> usize {
        self.word_max
    }

    fn space(&self) -> &GradedSpace {
        self.structure.space()
    }

    /// `Q(x₁⋯x_m) = m_m(x₁,…,x_m) + Σ_{i=1}^{m−1} Σ_{σ∈Sh(i,m−i)} ε(σ) m_i(x_σ(1),…,x_σ(i)) ⊙ x_σ(i+1)⋯x_σ(m)`.
    /// The empty word is the counit and maps to zero.
    pub fn apply_word(&self, word: &[usize]) -> Result<SymSum, LInftyError> {
        let m = word.len();
        if m > self.word_max {
            return Err(LInftyError::WordTooLong { len: m, max: self.word_max });
        }
        let space = self.space();
        let degs = degs_of(space, word);
        let mut out = SymSum::zero(space);
        for i in 1..=m {
            for sigma in unshuffles(i, m - i) {
                let perm = sigma.permute(word);
                let v = self.structure.brackets().eval_basis(&perm[..i]);
                if v.is_zero() {
                    continue;
                }
                let eps = koszul_sign(&sigma, &degs).expect("lengths agree");
                for (b, c) in v.terms() {
                    let mut letters = vec![b];
                    letters.extend_from_slice(&perm[i..]);
                    out.add_word(&letters, if eps.is_plus() { c.clone() } else { -c.clone() });
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &SymSum) -> Result<SymSum, LInftyError> {
        let mut out = SymSum::zero(self.space());
        for (w, c) in x.terms() {
            out.add(&self.apply_word(w)?, c);
        }
        Ok(out)
    }

    /// `Δ̄ ∘ Q − (Q ⊗ id + id ⊗ Q) ∘ Δ̄` on one word, with the Koszul sign
    /// `(−1)^{|a|}` when `Q` passes the left factor `a`.
    pub fn coleibniz_defect(&self, word: &[usize]) -> Result<TensorSum, LInftyError> {
        let space = self.space();
        let mut lhs = TensorSum::zero(space);
        for (w, c) in self.apply_word(word)?.terms() {
            add_comultiplication(&mut lhs, space, w, &[], c.clone());
        }
        let mut rhs = TensorSum::zero(space);
        for (factors, c) in reduced_comultiplication(space, word).terms() {
            let (a, b) = (&factors[0], &factors[1]);
            for (qa, ca) in self.apply_word(a)?.terms() {
                rhs.add_tensor(&[qa.clone(), b.clone()], c * ca);
            }
            let sign = Sign::power(word_degree(space, a));
            for (qb, cb) in self.apply_word(b)?.terms() {
                let v = c * cb;
                rhs.add_tensor(&[a.clone(), qb.clone()], if sign.is_plus() { v } else { -v });
            }
        }
        lhs.add(&rhs.neg());
        Ok(lhs)
    }

    /// Sorted words of length `1..=word_max` that are not forced to vanish.
    pub fn words(&self) -> Vec<Vec<usize>> {
        (1..=self.word_max).flat_map(|k| ordered_tuples(Symmetry::Symmetric, self.space().degrees(), k)).collect()
    }

    fn labels(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&i| self.space().label(i).to_string()).collect()
    }

    /// `Q ∘ Q` on every word up to the truncation.
    pub fn check_square(&self) -> Report {
        let mut report = Report::new();
        for w in self.words() {
            let qq = self.apply(&self.apply_word(&w).expect("within truncation")).expect("length does not grow");
            report.push(Residual::new("coderivation", w.len(), self.labels(&w), "Q∘Q", qq.to_string(), !qq.is_zero()));
        }
        report
    }

    pub fn check_coleibniz(&self) -> Report {
        let mut report = Report::new();
        for w in self.words() {
            let d = self.coleibniz_defect(&w).expect("within truncation");
            report.push(Residual::new("coleibniz", w.len(), self.labels(&w), "coLeibniz", d.to_string(), !d.is_zero()));
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::linfty::fixtures;

    #[test]
    fn comultiplication_small_cases() {
        let s = GradedSpace::new([("x", 0), ("y", 1)]).unwrap();
        assert!(reduced_comultiplication(&s, &[0]).is_zero());
        // Δ̄(x⊙y) = x⊗y + ε(swap)·y⊗x with ε = (−1)^{0·1} = +1
        let d = reduced_comultiplication(&s, &[0, 1]);
        let mut expected = TensorSum::zero(&s);
        expected.add_tensor(&[vec![0], vec![1]], int(1));
        expected.add_tensor(&[vec![1], vec![0]], int(1));
        assert_eq!(d, expected);
        let t = GradedSpace::new([("a", 1), ("b", 1)]).unwrap();
        let d = reduced_comultiplication(&t, &[0, 1]);
        let mut expected = TensorSum::zero(&t);
        expected.add_tensor(&[vec![0], vec![1]], int(1));
        expected.add_tensor(&[vec![1], vec![0]], int(-1));
        assert_eq!(d, expected);
    }

    #[test]
    fn q_on_short_words() {
        let b = fixtures::two_term_complex().decalage();
        let s = b.space().clone();
        let q = b.lift_coderivation(3);
        assert!(q.apply_word(&[]).unwrap().is_zero());
        let m1w = b.eval_bracket(1, &[s.basis("w").unwrap()]).unwrap();
        let mut expected = SymSum::zero(&s);
        for (i, c) in m1w.terms() {
            expected.add_word(&[i], c.clone());
        }
        assert_eq!(q.apply_word(&[1]).unwrap(), expected);
        assert_eq!(q.apply_word(&[0, 0, 1, 1]), Err(LInftyError::WordTooLong { len: 4, max: 3 }));
    }
}
