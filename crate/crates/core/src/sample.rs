//! Seeded generators for randomized identity checks.
//!
//! Polynomials have total degree ≤ 2 and integer coefficients in [−3, 3]
//! unless configured otherwise. The generator is a ChaCha stream so that a
//! seed reproduces the same instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, Monomial, Polynomial, Rational, RationalFunction, Vars};
use crate::exterior::{Chart, DifferentialForm, Exterior, Kind, MultivectorField};
use crate::graded::combinations;

pub struct Sampler {
    rng: ChaCha8Rng,
    max_degree: u32,
    coeff_bound: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_degree: 2, coeff_bound: 3 }
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> i64 {
        self.rng.gen_range(-self.coeff_bound..=self.coeff_bound)
    }

    pub fn nonzero_coefficient(&mut self) -> i64 {
        loop {
            let c = self.coefficient();
            if c != 0 {
                return c;
            }
        }
    }

    /// Each monomial of bounded degree is kept with probability `density`.
    pub fn polynomial_with_density(&mut self, vars: &Vars, density: f64) -> Polynomial {
        let monomials = monomials_up_to(vars.len(), self.max_degree);
        let mut terms = Vec::new();
        for m in monomials {
            if self.rng.gen_bool(density) {
                let c = self.coefficient();
                terms.push((m, int(c)));
            }
        }
        Polynomial::from_terms(vars, terms)
    }

    pub fn polynomial(&mut self, vars: &Vars) -> Polynomial {
        let density = (3.0 / monomials_up_to(vars.len(), self.max_degree).len() as f64).min(0.6);
        self.polynomial_with_density(vars, density)
    }

    pub fn function(&mut self, vars: &Vars) -> RationalFunction {
        RationalFunction::from_poly(self.polynomial(vars))
    }

    /// Quotient with a denominator that is never the zero polynomial.
    pub fn rational_function(&mut self, vars: &Vars) -> RationalFunction {
        let num = self.polynomial(vars);
        let mut den = self.polynomial(vars);
        if den.is_zero() {
            den = Polynomial::one(vars);
        }
        RationalFunction::new(num, den).expect("nonzero denominator")
    }

    pub fn element<K: Kind>(&mut self, chart: &Chart, degree: usize) -> Exterior<K> {
        let idx: Vec<usize> = (0..chart.dim()).collect();
        let tuples = combinations(&idx, degree);
        let p = (2.0 / tuples.len().max(1) as f64).clamp(0.3, 1.0);
        let mut terms = Vec::new();
        for t in tuples {
            if self.rng.gen_bool(p) {
                terms.push((t, self.function(chart.vars())));
            }
        }
        Exterior::from_terms(chart, degree, terms).expect("valid tuples")
    }

    pub fn form(&mut self, chart: &Chart, degree: usize) -> DifferentialForm {
        self.element(chart, degree)
    }

    pub fn multivector(&mut self, chart: &Chart, degree: usize) -> MultivectorField {
        self.element(chart, degree)
    }

    pub fn vector_field(&mut self, chart: &Chart) -> MultivectorField {
        self.multivector(chart, 1)
    }

    /// Small integer point.
    pub fn point(&mut self, vars: &Vars) -> Vec<Rational> {
        (0..vars.len()).map(|_| int(self.rng.gen_range(-4..=4))).collect()
    }
}

/// All exponent vectors in `n` variables of total degree ≤ `d`, in increasing
/// graded order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(n)];
    let mut frontier = vec![Monomial::one(n)];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.0.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in last..n {
                let mut m2 = m.clone();
                m2.0[i] += 1;
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}
