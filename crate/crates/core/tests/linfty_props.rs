use multisym::arith::int;
use multisym::graded::Sign;
use multisym::linfty::{
    check_generalized_jacobi, check_l1_condition, check_liealg_morphism, check_morphism_condition,
    check_strict_morphism, fixtures, full_symmetrization, jacobiator, l1_residual, liealg_components, ordered_tuples,
    reduced_diagonal, FiniteLInfty, FiniteLInftyShifted, GradedElement, GradedSpace, LInftyError, LieAlgebra,
    LinearMap, ShiftedMorphism, SymSum, Symmetry,
};
use multisym::sample::Sampler;

/// Cross-product constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`, tabulated by hand.
fn cross(c12: [i64; 3]) -> [[[i64; 3]; 3]; 3] {
    let mut c = [[[0; 3]; 3]; 3];
    c[0][1] = c12;
    c[1][0] = c12.map(|x| -x);
    c[1][2] = [1, 0, 0];
    c[2][1] = [-1, 0, 0];
    c[2][0] = [0, 1, 0];
    c[0][2] = [0, -1, 0];
    c
}

fn bracket(c: &[[[i64; 3]; 3]; 3], x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
    let mut out = [0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[k] += x[i] * y[j] * c[i][j][k];
            }
        }
    }
    out
}

fn cyclic_jacobi(c: &[[[i64; 3]; 3]; 3]) -> [i64; 3] {
    let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let t1 = bracket(c, e[0], bracket(c, e[1], e[2]));
    let t2 = bracket(c, e[1], bracket(c, e[2], e[0]));
    let t3 = bracket(c, e[2], bracket(c, e[0], e[1]));
    [t1[0] + t2[0] + t3[0], t1[1] + t2[1] + t3[1], t1[2] + t2[2] + t3[2]]
}

fn as_element(space: &GradedSpace, v: [i64; 3]) -> GradedElement {
    space.element([("e1", int(v[0])), ("e2", int(v[1])), ("e3", int(v[2]))]).unwrap()
}

#[test]
fn so3_brackets_match_cross_product() {
    let so3 = fixtures::so3();
    let s = so3.space();
    let c = cross([0, 0, 1]);
    for (i, row) in c.iter().enumerate() {
        for (j, &expected) in row.iter().enumerate() {
            let got = so3.eval_bracket(2, &[GradedElement::basis(s, i), GradedElement::basis(s, j)]).unwrap();
            assert_eq!(got, as_element(s, expected), "[e{}, e{}]", i + 1, j + 1);
        }
    }
}

#[test]
fn generalized_jacobi_on_fixtures() {
    assert!(check_generalized_jacobi(&fixtures::so3(), 3).passed());
    assert!(check_generalized_jacobi(&fixtures::two_term_complex(), 3).passed());

    // For degree-0 inputs the m=3 residual is minus the cyclic Jacobi sum.
    let flipped = fixtures::so3_sign_flipped();
    assert_eq!(cyclic_jacobi(&cross([0, 0, -1])), [0, 0, 0]);
    assert!(check_generalized_jacobi(&flipped, 3).passed());

    let broken = fixtures::so3_broken();
    let report = check_generalized_jacobi(&broken, 3);
    let fail = report.first_failure().expect("broken structure fails");
    assert_eq!(fail.arity, 3);
    assert_eq!(fail.tuple, ["e1", "e2", "e3"]);
    let oracle = cyclic_jacobi(&cross([1, 0, 1]));
    assert_eq!(fail.value, (-&as_element(broken.space(), oracle)).to_string());
    assert_eq!(report.failures().count(), 1);
}

#[test]
fn complex_with_nonzero_square_fails_at_arity_one() {
    let s = GradedSpace::new([("a", -2), ("b", -1), ("c", 0)]).unwrap();
    let l = FiniteLInfty::new(&s, 1)
        .with_bracket(&["a"], s.basis("b").unwrap())
        .unwrap()
        .with_bracket(&["b"], s.basis("c").unwrap())
        .unwrap();
    let report = check_generalized_jacobi(&l, 2);
    let fail = report.first_failure().unwrap();
    assert_eq!((fail.arity, fail.tuple.clone(), fail.value.clone()), (1, vec!["a".to_string()], "c".to_string()));
}

/// Random table of the right degrees on a space with mixed parities.
fn random_linfty(seed: u64, max_arity: usize) -> FiniteLInfty {
    let s = GradedSpace::new([("a", -1), ("b", 0), ("c", 0), ("d", 1)]).unwrap();
    let mut sampler = Sampler::new(seed);
    let mut l = FiniteLInfty::new(&s, max_arity);
    for k in 1..=max_arity {
        for idx in ordered_tuples(Symmetry::Skew, s.degrees(), k) {
            let target = 2 - k as i64 + idx.iter().map(|&i| s.degree(i)).sum::<i64>();
            let mut v = GradedElement::zero(&s);
            for t in 0..s.dim() {
                if s.degree(t) == target && sampler.coefficient() > 0 {
                    v = &v + &GradedElement::basis(&s, t).scale(&int(sampler.nonzero_coefficient()));
                }
            }
            let names: Vec<&str> = idx.iter().map(|&i| s.label(i)).collect();
            l.set_bracket(&names, v).unwrap();
        }
    }
    l
}

#[test]
fn decalage_round_trip() {
    for seed in 0..20 {
        let l = random_linfty(seed, 3);
        let m = l.decalage();
        assert_eq!(m.undecalage(), l);
        assert_eq!(m.undecalage().decalage(), m);
    }
}

#[test]
fn decalage_spot_check_degree_zero_pair() {
    // (−1)^{(2−1)·0 + 0} = +1
    let so3 = fixtures::so3();
    let m = so3.decalage();
    let s = m.space();
    assert_eq!(m.eval_bracket(2, &[s.basis("e1").unwrap(), s.basis("e2").unwrap()]).unwrap(), s.basis("e3").unwrap());
}

#[test]
fn jacobi_and_l1_condition_agree_tuplewise() {
    let mut structures = vec![fixtures::so3(), fixtures::so3_broken(), fixtures::two_term_complex()];
    structures.extend((0..15).map(|seed| random_linfty(100 + seed, 3)));
    let mut saw_failure = false;
    for l in &structures {
        let m = l.decalage();
        let s = l.space();
        for k in 1..=4 {
            for idx in ordered_tuples(Symmetry::Skew, s.degrees(), k) {
                let j = jacobiator(l, &idx).relabel(m.space());
                let r = l1_residual(&m, &idx);
                assert!(r == j || r == -&j, "k={k} {idx:?}: {r} vs {j}");
                saw_failure |= !r.is_zero();
            }
        }
        assert_eq!(check_generalized_jacobi(l, 4).passed(), check_l1_condition(&m, 4).passed());
    }
    assert!(saw_failure);
}

#[test]
fn coderivation_square_matches_l1_condition() {
    let mut structures = vec![fixtures::so3().decalage(), fixtures::so3_broken().decalage()];
    structures.extend((0..6).map(|seed| random_linfty(200 + seed, 3).decalage()));
    let mut outcomes = Vec::new();
    for m in &structures {
        let q = m.lift_coderivation(4);
        let qq = q.check_square();
        let l1 = check_l1_condition(m, 4);
        assert_eq!(qq.passed(), l1.passed());
        let w1 = qq.first_failure().map(|r| r.tuple.clone());
        let w2 = l1.first_failure().map(|r| r.tuple.clone());
        assert_eq!(w1, w2);
        outcomes.push(qq.passed());
    }
    assert_eq!(&outcomes[..2], &[true, false]);
}

#[test]
fn coleibniz_on_short_words() {
    let mut structures = vec![fixtures::so3().decalage(), fixtures::so3_broken().decalage()];
    structures.extend((0..6).map(|seed| random_linfty(300 + seed, 4).decalage()));
    for m in &structures {
        let report = m.lift_coderivation(4).check_coleibniz();
        assert!(report.passed(), "{:?}", report.first_failure());
    }
}

#[test]
fn q_on_two_letter_word_by_hand() {
    for seed in 0..10 {
        let m = random_linfty(400 + seed, 2).decalage();
        let s = m.space().clone();
        let q = m.lift_coderivation(2);
        for x in 0..s.dim() {
            for y in x..s.dim() {
                if x == y && !Symmetry::Symmetric.allows_repeat(s.degree(x)) {
                    continue;
                }
                let (ex, ey) = (GradedElement::basis(&s, x), GradedElement::basis(&s, y));
                let mut expected = SymSum::zero(&s);
                for (b, c) in m.eval_bracket(2, &[ex.clone(), ey.clone()]).unwrap().terms() {
                    expected.add_word(&[b], c.clone());
                }
                for (b, c) in m.eval_bracket(1, std::slice::from_ref(&ex)).unwrap().terms() {
                    expected.add_word(&[b, y], c.clone());
                }
                let eps = Sign::power(s.degree(x) * s.degree(y));
                for (b, c) in m.eval_bracket(1, std::slice::from_ref(&ey)).unwrap().terms() {
                    expected.add_word(&[b, x], c * int(eps.to_i64()));
                }
                assert_eq!(q.apply_word(&[x, y]).unwrap(), expected);
                assert_eq!(q.apply_word(&[x]).unwrap(), {
                    let mut e = SymSum::zero(&s);
                    for (b, c) in m.eval_bracket(1, &[ex]).unwrap().terms() {
                        e.add_word(&[b], c.clone());
                    }
                    e
                });
            }
        }
    }
}

#[test]
fn reduced_diagonal_closed_form_and_kernel() {
    let s = GradedSpace::new([("p", 0), ("q", 1), ("r", -1), ("t", 2)]).unwrap();
    for n in 1..=4 {
        for w in ordered_tuples(Symmetry::Symmetric, s.degrees(), n) {
            assert_eq!(reduced_diagonal(&s, n - 1, &w), full_symmetrization(&s, &w), "{w:?}");
            for k in n..=4 {
                assert!(reduced_diagonal(&s, k, &w).is_zero());
            }
        }
    }
}

#[test]
fn lie_n_algebra_degree_bound_is_structural() {
    // Concentrated in degrees 0 and −1: any l_k with k > 3 lands in degree ≤ −2.
    let s = GradedSpace::new([("x", 0), ("y", 0), ("w", -1)]).unwrap();
    for k in 4..=5 {
        for idx in ordered_tuples(Symmetry::Skew, s.degrees(), k) {
            let names: Vec<&str> = idx.iter().map(|&i| s.label(i)).collect();
            for t in 0..s.dim() {
                let mut l = FiniteLInfty::new(&s, k);
                let r = l.set_bracket(&names, GradedElement::basis(&s, t));
                assert!(matches!(r, Err(LInftyError::DegreeMismatch { .. })));
            }
        }
    }
    let l = random_linfty(7, 2);
    assert!(!l.is_lie_n_algebra(1));
    assert!(fixtures::two_term_complex().is_lie_n_algebra(2));
}

#[test]
fn strict_morphisms() {
    let so3 = fixtures::so3();
    let s = so3.space();
    assert!(check_strict_morphism(&LinearMap::identity(s), &so3, &so3, 3).unwrap().passed());
    assert!(check_strict_morphism(&LinearMap::zero(s, s), &so3, &so3, 3).unwrap().passed());
    let mut double = LinearMap::zero(s, s);
    for l in ["e1", "e2", "e3"] {
        double = double.with_image(l, s.basis(l).unwrap().scale(&int(2))).unwrap();
    }
    let report = check_strict_morphism(&double, &so3, &so3, 2).unwrap();
    assert!(report.rows.iter().filter(|r| r.arity == 1).all(|r| !r.nonzero));
    let fail = report.first_failure().unwrap();
    // l₂(2e₁, 2e₂) − 2·l₂(e₁, e₂) = 4e₃ − 2e₃
    assert_eq!((fail.arity, fail.value.as_str()), (2, "2*e3"));
}

fn so3_lie() -> LieAlgebra {
    LieAlgebra::new(
        &["e1", "e2", "e3"],
        [
            (("e1", "e2"), vec![("e3", int(1))]),
            (("e2", "e3"), vec![("e1", int(1))]),
            (("e3", "e1"), vec![("e2", int(1))]),
        ],
    )
    .unwrap()
}

/// Lie 2-algebra `so(3) ⊕ ℝz` in degree 0, `ℝc` in degree −1, `l₁(c) = z`,
/// `z` central.
fn central_extension() -> FiniteLInfty {
    let s = GradedSpace::new([("e1", 0), ("e2", 0), ("e3", 0), ("z", 0), ("c", -1)]).unwrap();
    let e = |l: &str| s.basis(l).unwrap();
    FiniteLInfty::new(&s, 3)
        .with_bracket(&["c"], e("z"))
        .and_then(|a| a.with_bracket(&["e1", "e2"], e("e3")))
        .and_then(|a| a.with_bracket(&["e2", "e3"], e("e1")))
        .and_then(|a| a.with_bracket(&["e3", "e1"], e("e2")))
        .unwrap()
}

/// `f₁(e_i) = e_i + a_i z`, `f₂(e_i, e_j) = a_k c` for cyclic `(i,j,k)`.
fn twisted_inclusion(
    g: &LieAlgebra,
    target: &FiniteLInfty,
    a: [i64; 3],
    with_f2: bool,
) -> multisym::linfty::MultilinearFamily {
    let s = target.space();
    let mut f = liealg_components(g, s, 2);
    let names = ["e1", "e2", "e3"];
    for i in 0..3 {
        let v = s.element([(names[i], int(1)), ("z", int(a[i]))]).unwrap();
        f.set(&[names[i]], v).unwrap();
        if with_f2 {
            let (p, q) = (names[(i + 1) % 3], names[(i + 2) % 3]);
            f.set(&[p, q], s.element([("c", int(a[i]))]).unwrap()).unwrap();
        }
    }
    f
}

#[test]
fn liealg_morphism_examples() {
    let g = so3_lie();
    let target = central_extension();
    assert!(check_generalized_jacobi(&target, 4).passed());
    let f = twisted_inclusion(&g, &target, [2, -1, 3], true);
    let report = check_liealg_morphism(&g, &f, &target).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure());
    assert_eq!(report.rows.iter().map(|r| r.arity).max(), Some(3));

    // Without f₂ the residual at m=2 is the dropped l₁f₂ term.
    let f = twisted_inclusion(&g, &target, [2, -1, 3], false);
    let report = check_liealg_morphism(&g, &f, &target).unwrap();
    let fail = report.first_failure().unwrap();
    assert_eq!(fail.arity, 2);
    assert_eq!(fail.tuple, ["e1", "e2"]);
    assert_eq!(fail.value, "3*z");
}

#[test]
fn liealg_morphism_abelian_source() {
    let g = LieAlgebra::new(&["y1", "y2", "y3"], std::iter::empty()).unwrap();
    let target = fixtures::two_term_complex();
    let mut f = liealg_components(&g, target.space(), 2);
    for (i, name) in ["y1", "y2", "y3"].iter().enumerate() {
        f.set(&[name], target.space().basis("u").unwrap().scale(&int(i as i64 - 1))).unwrap();
    }
    assert!(check_liealg_morphism(&g, &f, &target).unwrap().passed());
}

#[test]
fn liealg_morphism_requires_vanishing_property() {
    let s = GradedSpace::new([("u", 0), ("w", -1)]).unwrap();
    let bad = FiniteLInfty::new(&s, 2).with_bracket(&["u", "w"], s.basis("w").unwrap()).unwrap();
    let g = LieAlgebra::new(&["y"], std::iter::empty()).unwrap();
    let f = liealg_components(&g, &s, 2);
    assert!(matches!(check_liealg_morphism(&g, &f, &bad), Err(LInftyError::PropertyViolated(_))));
}

#[test]
fn general_morphism_condition_agrees_with_special_cases() {
    let g = so3_lie();
    let target = central_extension();
    let b1 = g.as_linfty().decalage();
    let b2 = target.decalage();
    for (with_f2, expect) in [(true, true), (false, false)] {
        let f = ShiftedMorphism::from_skew_components(&twisted_inclusion(&g, &target, [2, -1, 3], with_f2));
        let report = check_morphism_condition(&f, &b1, &b2, 3).unwrap();
        assert_eq!(report.passed(), expect, "{:?}", report.first_failure());
    }

    // strict case: only f₁
    let so3 = fixtures::so3();
    let m = so3.decalage();
    let s = m.space();
    let mut id = ShiftedMorphism::new(s, s, 1);
    let mut double = ShiftedMorphism::new(s, s, 1);
    for l in ["e1", "e2", "e3"] {
        id = id.with_component(&[l], s.basis(l).unwrap()).unwrap();
        double = double.with_component(&[l], s.basis(l).unwrap().scale(&int(2))).unwrap();
    }
    assert!(check_morphism_condition(&id, &m, &m, 3).unwrap().passed());
    assert!(!check_morphism_condition(&double, &m, &m, 3).unwrap().passed());
    assert!(matches!(check_morphism_condition(&id, &m, &m, 4), Err(LInftyError::ArityOutOfRange { .. })));
}

#[test]
fn shifted_structure_built_directly() {
    // single m₁ with m₁∘m₁ = 0
    let s = GradedSpace::new([("p", -1), ("q", 0)]).unwrap();
    let m = FiniteLInftyShifted::new(&s, 1).with_bracket(&["p"], s.basis("q").unwrap()).unwrap();
    assert!(check_l1_condition(&m, 3).passed());
    assert!(m.lift_coderivation(3).check_square().passed());
}

#[test]
fn tuples_skip_forced_zeros() {
    let degs = [0, 1];
    let skew: Vec<Vec<usize>> = ordered_tuples(Symmetry::Skew, &degs, 2);
    assert_eq!(skew, vec![vec![0, 1], vec![1, 1]]);
    let sym: Vec<Vec<usize>> = ordered_tuples(Symmetry::Symmetric, &degs, 2);
    assert_eq!(sym, vec![vec![0, 0], vec![0, 1]]);
}
