//! Multivariate GCD.
//!
//! The fast path is the heuristic evaluate-and-interpolate method: substitute a
//! large integer for the main variable, recurse, and rebuild a candidate from
//! its balanced base-ξ digits. A candidate is accepted only after trial
//! division. When the heuristic gives up, a subresultant remainder sequence
//! over recursively computed contents settles the answer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Polynomial, Rational};

const HEURISTIC_ATTEMPTS: usize = 6;

/// Greatest common divisor, scaled to integer coefficients with content 1 and
/// a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return integer_primitive(b).0;
    }
    if b.is_zero() {
        return integer_primitive(a).0;
    }
    let (a, _) = integer_primitive(a);
    let (b, _) = integer_primitive(b);
    integer_primitive(&integer_gcd(&a, &b)).0
}

/// GCD of integer polynomials including the integer content, with positive
/// leading coefficient.
fn integer_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return abs_lead(b);
    }
    if b.is_zero() {
        return abs_lead(a);
    }
    let ca = integer_content(a);
    let cb = integer_content(b);
    let c = ca.gcd(&cb);
    let c_poly = Polynomial::constant(a.vars(), Rational::from_integer(c.clone()));
    if a.is_constant() || b.is_constant() {
        return c_poly;
    }
    let a = a.scale(&Rational::new(BigInt::one(), ca));
    let b = b.scale(&Rational::new(BigInt::one(), cb));
    let n = a.vars().len();
    let v = (0..n).find(|&i| a.involves(i) || b.involves(i)).expect("non-constant polynomial involves a variable");
    if let Some(g) = heuristic(&a, &b, v) {
        return &c_poly * &g;
    }
    &c_poly * &integer_primitive(&prs_gcd(&a, &b)).0
}

fn heuristic(a: &Polynomial, b: &Polynomial, v: usize) -> Option<Polynomial> {
    let bound = max_norm(a).min(max_norm(b));
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..HEURISTIC_ATTEMPTS {
        let gamma = integer_gcd(&substitute(a, v, &xi), &substitute(b, v, &xi));
        let candidate = integer_primitive(&interpolate(&gamma, v, &xi)).0;
        if !candidate.is_zero() && a.exact_div(&candidate).is_some() && b.exact_div(&candidate).is_some() {
            return Some(candidate);
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn abs_lead(p: &Polynomial) -> Polynomial {
    match p.leading_coefficient() {
        Some(c) if c.is_negative() => -p,
        _ => p.clone(),
    }
}

/// `p` with variable `v` replaced by the integer `xi`.
fn substitute(p: &Polynomial, v: usize, xi: &BigInt) -> Polynomial {
    Polynomial::from_terms(
        p.vars(),
        p.terms().map(|(m, c)| {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2.0[v], 0);
            (m2, c * Rational::from_integer(num_traits::pow(xi.clone(), e as usize)))
        }),
    )
}

/// Rebuild a polynomial in `v` from the balanced base-`xi` digits of the
/// integer coefficients of `gamma`.
fn interpolate(gamma: &Polynomial, v: usize, xi: &BigInt) -> Polynomial {
    let half = xi / 2;
    let mut terms = Vec::new();
    let mut rest: Vec<(Monomial, BigInt)> = gamma.terms().map(|(m, c)| (m.clone(), c.numer().clone())).collect();
    let mut e = 0u32;
    while !rest.is_empty() {
        let mut next = Vec::new();
        for (m, c) in rest {
            let mut digit = c.mod_floor(xi);
            if digit > half {
                digit -= xi;
            }
            let carry = (&c - &digit) / xi;
            if !digit.is_zero() {
                let mut m2 = m.clone();
                m2.0[v] = e;
                terms.push((m2, Rational::from_integer(digit)));
            }
            if !carry.is_zero() {
                next.push((m, carry));
            }
        }
        rest = next;
        e += 1;
    }
    Polynomial::from_terms(gamma.vars(), terms)
}

/// Content/primitive-part recursion with a subresultant remainder sequence.
fn prs_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return integer_primitive(b).0;
    }
    if b.is_zero() {
        return integer_primitive(a).0;
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.vars());
    }
    let n = a.vars().len();
    let v = (0..n).find(|&i| a.involves(i) || b.involves(i)).expect("non-constant polynomial involves a variable");
    if !a.involves(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut f1 = a.exact_div(&ca).expect("content divides");
    let mut f2 = b.exact_div(&cb).expect("content divides");
    if f1.degree_in(v) < f2.degree_in(v) {
        std::mem::swap(&mut f1, &mut f2);
    }
    let one = Polynomial::one(a.vars());
    let mut g = one.clone();
    let mut h = one;
    loop {
        let delta = f1.degree_in(v) - f2.degree_in(v);
        let r = pseudo_remainder(&f1, &f2, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            f2 = Polynomial::one(a.vars());
            break;
        }
        let divisor = &g * &h.pow(delta);
        f1 = f2;
        f2 = r.exact_div(&divisor).expect("subresultant division is exact");
        g = coefficient_in(&f1, v, f1.degree_in(v));
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
    integer_primitive(&(&c * &primitive_in(&f2, v))).0
}

/// Coefficients of `p` viewed as a polynomial in variable `v`, keyed by power.
pub(crate) fn coefficients_in(p: &Polynomial, v: usize) -> Vec<(u32, Polynomial)> {
    let mut buckets: std::collections::BTreeMap<u32, Vec<(Monomial, Rational)>> = Default::default();
    for (m, c) in p.terms() {
        let mut m2 = m.clone();
        let e = m2.0[v];
        m2.0[v] = 0;
        buckets.entry(e).or_default().push((m2, c.clone()));
    }
    buckets.into_iter().map(|(e, ts)| (e, Polynomial::from_terms(p.vars(), ts))).collect()
}

fn coefficient_in(p: &Polynomial, v: usize, e: u32) -> Polynomial {
    Polynomial::from_terms(
        p.vars(),
        p.terms().filter(|(m, _)| m.0[v] == e).map(|(m, c)| {
            let mut m2 = m.clone();
            m2.0[v] = 0;
            (m2, c.clone())
        }),
    )
}

/// GCD of the coefficients of `p` in variable `v`.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut g = Polynomial::zero(p.vars());
    for (_, c) in coefficients_in(p, v) {
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    integer_primitive(&p.exact_div(&c).expect("content divides")).0
}

/// `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b` in variable `v`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    let lcb = coefficient_in(b, v, db);
    let n = a.vars().len();
    let mut r = a.clone();
    let mut steps = a.degree_in(v) - db + 1;
    while !r.is_zero() && r.degree_in(v) >= db && (db > 0 || r.involves(v)) {
        let dr = r.degree_in(v);
        let lcr = coefficient_in(&r, v, dr);
        let mut shift = Monomial::one(n);
        shift.0[v] = dr - db;
        let t = &lcr * &b.mul_monomial(&shift, &Rational::one());
        r = &(&lcb * &r) - &t;
        steps -= 1;
    }
    &lcb.pow(steps) * &r
}

/// Scale `p` to integer coefficients with gcd 1 and positive leading
/// coefficient. Returns the scaled polynomial and the factor `s` with
/// `result = s * p`.
pub(crate) fn integer_primitive(p: &Polynomial) -> (Polynomial, Rational) {
    if p.is_zero() {
        return (p.clone(), Rational::one());
    }
    let mut factor = primitive_scale(p.terms().map(|(_, c)| c));
    if p.leading_coefficient().unwrap().is_negative() {
        factor = -factor;
    }
    (p.scale(&factor), factor)
}

/// Positive factor turning the given rationals into coprime integers.
pub(crate) fn primitive_scale<'a, I>(coeffs: I) -> Rational
where
    I: Iterator<Item = &'a Rational>,
{
    let coeffs: Vec<&Rational> = coeffs.collect();
    let mut den_lcm = BigInt::one();
    for c in &coeffs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in coeffs {
        g = g.gcd(&(c.numer() * (&den_lcm / c.denom())));
    }
    if g.is_zero() {
        return Rational::one();
    }
    Rational::new(den_lcm, g)
}
