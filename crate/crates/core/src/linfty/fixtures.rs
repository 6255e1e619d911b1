//! Small reference structures.

use crate::arith::{int, Rational};

use super::{FiniteLInfty, GradedSpace};

/// `so(3)` as a Lie 1-algebra: `l₂(e₁,e₂) = e₃` and cyclic, the cross
/// product on ℝ³.
pub fn so3() -> FiniteLInfty {
    so3_with_sign(int(1))
}

/// `so(3)` with only `l₂(e₁,e₂)` flipped to `−e₃`. This is `so(2,1)`, still
/// a Lie algebra: each cyclic Jacobi term is a bracket of a basis vector
/// with a multiple of itself.
pub fn so3_sign_flipped() -> FiniteLInfty {
    so3_with_sign(int(-1))
}

/// `so(3)` with `l₂(e₁,e₂) = e₁ + e₃`; the Jacobiator on `(e₁,e₂,e₃)` is
/// `−e₂`.
pub fn so3_broken() -> FiniteLInfty {
    let s = so3().space().clone();
    so3_table(&s, s.element([("e1", int(1)), ("e3", int(1))]).expect("declared"))
}

fn so3_with_sign(c12: Rational) -> FiniteLInfty {
    let s = GradedSpace::new([("e1", 0), ("e2", 0), ("e3", 0)]).expect("distinct labels");
    let v = s.basis("e3").expect("declared").scale(&c12);
    so3_table(&s, v)
}

fn so3_table(s: &GradedSpace, l12: super::GradedElement) -> FiniteLInfty {
    let e = |l: &str| s.basis(l).expect("declared");
    FiniteLInfty::new(s, 2)
        .with_bracket(&["e1", "e2"], l12)
        .and_then(|a| a.with_bracket(&["e2", "e3"], e("e1")))
        .and_then(|a| a.with_bracket(&["e3", "e1"], e("e2")))
        .expect("degree-consistent table")
}

/// Two-term complex `L₀ ⊕ L₋₁` with `l₁(w) = u` and nothing else.
pub fn two_term_complex() -> FiniteLInfty {
    let s = GradedSpace::new([("u", 0), ("w", -1)]).expect("distinct labels");
    FiniteLInfty::new(&s, 2).with_bracket(&["w"], s.basis("u").expect("declared")).expect("degree-consistent table")
}
