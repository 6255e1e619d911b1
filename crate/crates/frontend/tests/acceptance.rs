//! Acceptance suite: criteria 1–13, each evaluated at exact (zero) tolerance
//! and reported on one line. A criterion that cannot be met as stated is
//! listed in `KNOWN_FAILURES` together with the reason; any other failure,
//! or a known one that starts passing, fails the test.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::SeedableRng;

use multisym::arith::{int, rat, RationalFunction};
use multisym::exterior::identities::cartan_suite;
use multisym::exterior::{Chart, DifferentialForm, MultivectorField};
use multisym::graded::{all_permutations, decalage_koszul, Permutation};
use multisym::linfty::{
    check_generalized_jacobi, check_l1_condition, fixtures, jacobiator, l1_residual, ordered_tuples, Symmetry,
};
use multisym::moment::{
    check_action, check_moment, coefficient_a, coefficient_b, product_moment, symplectic_h, ActionConvention,
    FunctionPair, LieAlgebra, MomentCandidate, ProductPlectic,
};
use multisym::plectic::{generic_kernel, xi, PlecticManifold};
use multisym::sample::Sampler;
use multisym_frontend::runner::{RunOptions, Status};
use multisym_frontend::{check_source, parser, printer};

mod common;

/// `Ok(detail)` for pass, `Err(detail)` for fail.
type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chart(d: usize) -> Chart {
    let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    Chart::new(&format!("R{d}"), names).unwrap()
}

fn volume_manifold(c: &Chart) -> PlecticManifold {
    let vol = DifferentialForm::basis(c, &(0..c.dim()).collect::<Vec<_>>()).unwrap();
    PlecticManifold::new(c, c.dim() - 1, vol, vec![]).unwrap()
}

fn plane(name: &str, vars: [&str; 2]) -> PlecticManifold {
    volume_manifold(&Chart::new(name, vars).unwrap())
}

fn scalar(c: &Chart, f: RationalFunction) -> DifferentialForm {
    DifferentialForm::scalar(c, f)
}

fn field(c: &Chart, i: usize) -> MultivectorField {
    MultivectorField::coordinate_field(c, i)
}

fn c1_cartan() -> Outcome {
    // 20 instances per chart of dimension 1..=5: 100 per identity
    let mut rows = 0;
    for d in 1..=5 {
        let c = chart(d);
        let mut s = Sampler::new(100 + d as u64);
        let report = cartan_suite(&c, &mut s, 20);
        if let Some(f) = report.first_failure() {
            return Err(format!("R{d}: {f}"));
        }
        rows += report.len();
        // L_v = ι_v d + d ι_v, assembled here from the primitives
        for n in 0..20 {
            let v = s.vector_field(&c);
            let a = s.form(&c, n % (d + 1));
            let magic = &a.exterior_derivative().interior(&v).unwrap() + &a.interior(&v).unwrap().exterior_derivative();
            ensure(a.lie_derivative(&v).unwrap() == magic, || format!("R{d}: L_v a for a = {a}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} residuals on R1..R5, all exactly 0"))
}

/// Classical Poisson bracket `f_x g_y − f_y g_x` on the plane.
fn poisson(f: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    &(&f.partial_index(0) * &g.partial_index(1)) - &(&f.partial_index(1) * &g.partial_index(0))
}

fn c2_poisson() -> Outcome {
    let p = plane("P", ["x", "y"]);
    let c = p.chart().clone();
    let sc = |f: &RationalFunction| scalar(&c, f.clone());
    let br = |f: &RationalFunction, g: &RationalFunction| p.bracket2(&sc(f), &sc(g)).unwrap().as_scalar().unwrap();
    let (x, y) = (c.coordinate(0), c.coordinate(1));
    ensure(br(&x, &y) == RationalFunction::one(c.vars()), || format!("{{x,y}} = {}", br(&x, &y)))?;
    let mut s = Sampler::new(2);
    for t in 0..50 {
        let [f, g, h] = [0, 1, 2].map(|_| s.function(c.vars()));
        ensure(br(&f, &g) == poisson(&f, &g), || format!("triple {t}: bracket differs from f_x g_y - f_y g_x"))?;
        let jac = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
        ensure(jac.is_zero(), || format!("triple {t}: Jacobi residual {jac}"))?;
        let leib = &br(&(&f * &g), &h) - &(&(&f * &br(&g, &h)) + &(&g * &br(&f, &h)));
        ensure(leib.is_zero(), || format!("triple {t}: Leibniz residual {leib}"))?;
        // v_f = −f_y ∂x + f_x ∂y solves ι_v ω = −df
        let vf = MultivectorField::from_terms(&c, 1, [(vec![0], -&f.partial_index(1)), (vec![1], f.partial_index(0))])
            .unwrap();
        ensure(p.hamiltonian_vf(&sc(&f)).unwrap() == vf, || format!("triple {t}: v_f"))?;
        let vfg = p.hamiltonian_vf(&sc(&br(&f, &g))).unwrap();
        let comm = p.hamiltonian_vf(&sc(&f)).unwrap().vf_bracket(&p.hamiltonian_vf(&sc(&g)).unwrap()).unwrap();
        ensure(vfg == comm, || format!("triple {t}: v_{{f,g}} - [v_f, v_g] = {}", &vfg - &comm))?;
    }
    Ok("{x,y} = 1; Jacobi, Leibniz and v_{f,g} = [v_f, v_g] on 50 triples".into())
}

fn c3_jacobiator() -> Outcome {
    let mut s = Sampler::new(3);
    for d in [3, 4] {
        let p = volume_manifold(&chart(d));
        for t in 0..50 {
            let [a, b, c] = [0, 1, 2].map(|_| p.random_hamiltonian(&mut s));
            let j = p.jacobiator_check(&a, &b, &c).unwrap();
            ensure(j.holds(), || format!("R{d} triple {t}: {} vs {}", j.lhs, j.rhs))?;
            // right-hand side from the contraction order ι_{v3} ι_{v2} ι_{v1} ω
            let vs = [&a, &b, &c].map(|e| p.hamiltonian_vf(e).unwrap());
            let contracted = vs.iter().fold(p.omega().clone(), |w, v| w.interior(v).unwrap());
            ensure(j.rhs == -&contracted.exterior_derivative(), || format!("R{d} triple {t}: rhs"))?;
        }
    }
    let c = Chart::new("R3", ["x", "y", "z"]).unwrap();
    let p = volume_manifold(&c);
    let (x, y, z) = (c.coordinate(0), c.coordinate(1), c.coordinate(2));
    let dx = |i| DifferentialForm::coordinate_differential(&c, i);
    let a1 = dx(1).scale(&(&x * &x).scale(&rat(1, 2)));
    let a2 = dx(2).scale(&y);
    let a3 = dx(0).scale(&z);
    let j = p.jacobiator_check(&a1, &a2, &a3).unwrap();
    ensure(j.lhs == dx(0) && j.rhs == dx(0), || format!("worked triple: lhs {} rhs {}", j.lhs, j.rhs))?;
    Ok("50 triples each on (R3, vol) and (R4, vol); worked triple gives dx on both sides".into())
}

fn c4_lie_n_algebra() -> Outcome {
    let mut s = Sampler::new(4);
    let mut rows = 0;
    for d in 2..=4 {
        let p = volume_manifold(&chart(d));
        let m_max = p.n() + 1;
        let tuples = p.random_tuples(&mut s, m_max, 20);
        let report = p.verify_lie_n_algebra(m_max, &tuples).unwrap();
        if let Some(f) = report.first_failure() {
            return Err(format!("R{d}: {f}"));
        }
        ensure(report.len() == 20 * m_max, || format!("R{d}: {} residuals", report.len()))?;
        rows += report.len();
    }
    Ok(format!("{rows} residuals (m <= n+1, 20 tuples per m) on R2, R3, R4"))
}

fn c5_xi() -> Outcome {
    let table: Vec<i64> = (1..=5).map(|k| xi(k).to_i64()).collect();
    let formula: Vec<i64> = (1..=5i64).map(|k| if (k * (k + 1) / 2) % 2 == 0 { -1 } else { 1 }).collect();
    ensure(table == [1, 1, -1, -1, 1] && table == formula, || format!("{table:?}"))?;
    Ok(format!("{table:?}"))
}

fn c6_coalgebra() -> Outcome {
    let mut outcomes = Vec::new();
    for (name, l) in [("so3", fixtures::so3()), ("so3-broken", fixtures::so3_broken())] {
        let m = l.decalage();
        let q = m.lift_coderivation(4);
        let square = q.check_square();
        let l1 = check_l1_condition(&m, 4);
        ensure(square.passed() == l1.passed(), || format!("{name}: Q∘Q and l1-condition disagree"))?;
        let w1: Vec<_> = square.failures().map(|r| r.tuple.clone()).collect();
        let w2: Vec<_> = l1.failures().map(|r| r.tuple.clone()).collect();
        ensure(w1 == w2, || format!("{name}: witnesses {w1:?} vs {w2:?}"))?;
        let coleibniz = q.check_coleibniz();
        ensure(coleibniz.passed(), || format!("{name}: coLeibniz {}", coleibniz.first_failure().unwrap()))?;
        outcomes.push(format!("{name} {}", if square.passed() { "pass/pass" } else { "fail/fail" }));
    }
    ensure(outcomes == ["so3 pass/pass", "so3-broken fail/fail"], || outcomes.join(", "))?;
    Ok(format!("{}; coLeibniz holds; words <= 4", outcomes.join(", ")))
}

/// Koszul sign of `σ` on the shifted degrees `d − 1`, by adjacent swaps.
fn shifted_koszul_by_swaps(sigma: &Permutation, degs: &[i64]) -> i64 {
    let mut seq = sigma.images().to_vec();
    let mut sign = 1;
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            if ((degs[seq[j - 1] - 1] - 1) * (degs[seq[j] - 1] - 1)).rem_euclid(2) == 1 {
                sign = -sign;
            }
            seq.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

fn c7_decalage() -> Outcome {
    let mut cases = 0usize;
    for k in 1..=5 {
        let perms = all_permutations(k);
        let mut degs = vec![-2i64; k];
        loop {
            for sigma in &perms {
                let got = decalage_koszul(sigma, &degs).unwrap().to_i64();
                ensure(got == shifted_koszul_by_swaps(sigma, &degs), || format!("{sigma} {degs:?}"))?;
                cases += 1;
            }
            // next degree vector in {−2..2}^k
            let Some(i) = degs.iter().position(|&d| d < 2) else { break };
            degs[i] += 1;
            degs[..i].iter_mut().for_each(|d| *d = -2);
        }
    }
    for (name, l) in [("so3", fixtures::so3()), ("so3-broken", fixtures::so3_broken())] {
        let m = l.decalage();
        ensure(m.undecalage() == l, || format!("{name}: round trip"))?;
        ensure(check_generalized_jacobi(&l, 4).passed() == check_l1_condition(&m, 4).passed(), || {
            format!("{name}: gen-jacobi and l1-condition disagree")
        })?;
        for k in 1..=4 {
            for idx in ordered_tuples(Symmetry::Skew, l.space().degrees(), k) {
                let j = jacobiator(&l, &idx).relabel(m.space());
                let r = l1_residual(&m, &idx);
                ensure(r == j || r == -&j, || format!("{name} {idx:?}: {r} vs {j}"))?;
            }
        }
    }
    Ok(format!("{cases} sign cases agree; gen-jacobi <=> l1-condition on so3 and so3-broken"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn c8_warped_product() -> Outcome {
    let expected = "(-1/(a.x**2*b.x**2 + a.x**2 + b.x**2 + 1))*@a.x";
    let src = std::fs::read_to_string(golden_dir().join("warped_product.pl")).unwrap();
    let report = check_source(&src, &RunOptions::default(), |_| {}).map_err(|e| e.to_string())?;
    let row = report.rows.iter().find(|r| r.check == "hamiltonian").ok_or("no hamiltonian row")?;
    let witness = row.witness.as_deref().unwrap_or("");
    ensure(row.status == Status::Pass && witness == expected, || format!("{:?}: {witness}", row.status))?;

    // the same field from the library, checked against ι_u ω = −dα
    let warped = |name: &str| {
        let c = Chart::new(name, ["x", "y"]).unwrap();
        let x = c.coordinate(0);
        let f = &RationalFunction::one(c.vars()) + &(&x * &x);
        PlecticManifold::new(&c, 1, DifferentialForm::basis(&c, &[0, 1]).unwrap().scale(&f), vec![vec![int(0); 2]])
            .unwrap()
    };
    let prod = ProductPlectic::new(&warped("A"), &warped("B")).unwrap();
    let m = prod.manifold();
    let c = m.chart();
    let alpha = DifferentialForm::basis(c, &[2, 3]).unwrap().scale(&c.coordinate(1));
    let u = m.hamiltonian_vf(&alpha).unwrap();
    let one = RationalFunction::one(c.vars());
    let (ax, bx) = (c.coordinate(0), c.coordinate(2));
    let f1f2 = &(&one + &(&ax * &ax)) * &(&one + &(&bx * &bx));
    let by_hand = field(c, 0).scale(&-&f1f2.inverse().unwrap());
    ensure(u == by_hand && m.omega().interior(&by_hand).unwrap() == -&alpha.exterior_derivative(), || format!("{u}"))?;
    ensure(u.to_string() == expected, || format!("library prints {u}"))?;
    Ok(format!("witness {expected}"))
}

fn c9_product() -> Outcome {
    let prod = ProductPlectic::new(&plane("A", ["x", "y"]), &plane("B", ["u", "v"])).unwrap();
    let m = prod.manifold();
    ensure(m.omega().exterior_derivative().is_zero(), || "omega not closed".into())?;
    ensure(matches!(generic_kernel(m.omega()), Ok(None)), || "omega degenerate".into())?;
    let (ca, cb) = (prod.factor_a().chart().clone(), prod.factor_b().chart().clone());
    let mut s = Sampler::new(9);
    for t in 0..20 {
        let pair = prod.lift_hamiltonian(&s.form(&ca, 0), &s.form(&cb, 0)).unwrap();
        ensure(m.omega().interior(&pair.u).unwrap() == -&pair.alpha.exterior_derivative(), || format!("lift {t}"))?;
    }
    let (a, b) = (prod.factor_a().clone(), prod.factor_b().clone());
    for t in 0..20 {
        let xs: Vec<_> = (0..2).map(|_| a.hamiltonian_vf(&s.form(&ca, 0)).unwrap()).collect();
        let ys: Vec<_> = (0..2).map(|_| b.hamiltonian_vf(&s.form(&cb, 0)).unwrap()).collect();
        let defect = prod.h_x_bracket_defect((&xs[0], &ys[0]), (&xs[1], &ys[1])).unwrap();
        ensure(defect.is_zero(), || format!("h_X tuple {t}: {defect}"))?;
    }
    let (mut printed, mut flipped) = (0, 0);
    for _ in 0..20 {
        let (aa, ab, ba, bb) = (s.form(&ca, 0), s.form(&cb, 0), s.form(&ca, 0), s.form(&cb, 0));
        let d = prod.h_omega_defect((&aa, &ab), (&ba, &bb)).unwrap();
        printed += usize::from(d.lhs == d.rhs);
        flipped += usize::from(d.lhs == -&d.rhs);
    }
    let summary = format!("closed, nondegenerate, 20 lifts and 20 h_X tuples exact; h_Omega defect as printed holds on {printed}/20 tuples, with the opposite global sign on {flipped}/20");
    if printed == 20 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn c10_symplectic_h() -> Outcome {
    let h = symplectic_h(&plane("A", ["x", "y"]), &plane("B", ["u", "v"])).unwrap();
    let (ca, cb) = (h.product().factor_a().chart().clone(), h.product().factor_b().chart().clone());
    let mut s = Sampler::new(10);
    let mut tuples = Vec::new();
    for _ in 0..10 {
        for m in 2..=4 {
            tuples.push(
                (0..m).map(|_| FunctionPair::new(s.function(ca.vars()), s.function(cb.vars()))).collect::<Vec<_>>(),
            );
        }
    }
    let audited = h.audit(&tuples).unwrap();
    ensure(audited.resolved, || audited.summary())?;
    ensure(audited.report.notes.contains(&audited.summary()), || "sign choice not disclosed".into())?;
    let flag = if audited.signs.is_printed() { "" } else { " (flagged: differs from printed)" };
    Ok(format!("30 tuples, m = 2..4; {}{flag}", audited.summary()))
}

/// Heisenberg algebra acting on the plane by ∂x, ∂y, 0 with comoment `(−y, x, 1)`.
fn heisenberg_moment(p: &PlecticManifold) -> MomentCandidate {
    let c = p.chart();
    let g = LieAlgebra::new(&["p", "q", "c"], [(("p", "q"), vec![("c", int(1))])]).unwrap();
    let action =
        check_action(p, &g, vec![field(c, 0), field(c, 1), MultivectorField::zero(c, 1)], ActionConvention::Morphism)
            .unwrap();
    let mut f = MomentCandidate::new(&action);
    f.set(&["p"], scalar(c, -&c.coordinate(1))).unwrap();
    f.set(&["q"], scalar(c, c.coordinate(0))).unwrap();
    f.set(&["c"], DifferentialForm::constant(c, int(1))).unwrap();
    f
}

/// Rotation `x∂y − y∂x` with comoment `½(x² + y²)`.
fn rotation_moment(p: &PlecticManifold) -> MomentCandidate {
    let c = p.chart();
    let (x, y) = (c.coordinate(0), c.coordinate(1));
    let g = LieAlgebra::new(&["r"], []).unwrap();
    let u = &field(c, 1).scale(&x) - &field(c, 0).scale(&y);
    let action = check_action(p, &g, vec![u], ActionConvention::Morphism).unwrap();
    let mut f = MomentCandidate::new(&action);
    f.set(&["r"], scalar(c, (&(&x * &x) + &(&y * &y)).scale(&rat(1, 2)))).unwrap();
    f
}

fn c11_product_moment() -> Outcome {
    let coeffs = [coefficient_a(1, 1, 1), coefficient_b(0, 1, 1), coefficient_a(1, 2, 1), coefficient_b(1, 2, 1)];
    ensure(coeffs == [rat(1, 1), rat(1, 1), rat(-1, 2), rat(1, 2)], || format!("coefficients {coeffs:?}"))?;
    let pm = product_moment(&heisenberg_moment(&plane("A", ["x", "y"])), &rotation_moment(&plane("B", ["u", "v"])))
        .map_err(|e| e.to_string())?;
    let report = check_moment(&pm.candidate).map_err(|e| e.to_string())?;
    if let Some(f) = report.first_failure() {
        return Err(f.to_string());
    }
    let max_arity = report.rows.iter().map(|r| r.arity).max().unwrap_or(0);
    ensure(max_arity == 4 && report.len() == 15, || format!("{} residuals up to k={max_arity}", report.len()))?;
    Ok("Heisenberg x rotation on R2 x R2: 15 residuals, k = 1..4, printed signs; c^a_{1,0} = c^b_{0,1} = 1, c^a_{1,1} = -1/2, c^b_{1,1} = 1/2".into())
}

fn c12_obstruction() -> Outcome {
    let p = plane("T", ["x", "y"]);
    let c = p.chart().clone();
    let g = LieAlgebra::new(&["p", "q"], []).unwrap();
    let action = check_action(&p, &g, vec![field(&c, 0), field(&c, 1)], ActionConvention::Morphism).unwrap();
    let mut f = MomentCandidate::new(&action);
    f.set(&["p"], scalar(&c, c.coordinate(1))).unwrap();
    f.set(&["q"], scalar(&c, -&c.coordinate(0))).unwrap();
    let report = check_moment(&f).map_err(|e| format!("checker error: {e}"))?;
    let top: Vec<_> = report.failures().filter(|r| r.condition.starts_with("(iii)")).collect();
    ensure(top.len() == 1 && (top[0].value == "-1" || top[0].value == "1"), || {
        report.failures().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")
    })?;
    Ok(format!("reported fail: {}", top[0]))
}

fn c13_frontend() -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pl"))
        .collect();
    files.sort();
    ensure(files.len() >= 6, || format!("{} golden files", files.len()))?;
    for path in &files {
        let src = std::fs::read_to_string(path).unwrap();
        let stored = std::fs::read_to_string(path.with_extension("json")).unwrap_or_default();
        for _ in 0..2 {
            let json = check_source(&src, &RunOptions::default(), |_| {}).map_err(|e| e.to_string())?.to_json();
            ensure(json == stored, || format!("{} differs from its stored report", path.display()))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(13);
    for case in 0..200 {
        let program = common::program(&mut rng);
        let printed = printer::print_program(&program);
        let parsed = parser::parse(&printed).map_err(|e| format!("case {case}: {e}"))?;
        ensure(common::shape(&parsed) == common::shape(&program), || format!("case {case}:\n{printed}"))?;
        ensure(printer::print_program(&parsed) == printed, || format!("case {case}: reprint differs"))?;
    }
    Ok(format!("{} golden files byte-stable; 200 random documents round-trip", files.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 13] = [
    (1, "Cartan calculus", c1_cartan),
    (2, "Poisson reproduction", c2_poisson),
    (3, "Jacobiator identity", c3_jacobiator),
    (4, "Hamiltonian L-infinity", c4_lie_n_algebra),
    (5, "xi table", c5_xi),
    (6, "coalgebra equivalence", c6_coalgebra),
    (7, "decalage", c7_decalage),
    (8, "Hamiltonian field on warped product", c8_warped_product),
    (9, "product construction", c9_product),
    (10, "symplectic H morphism", c10_symplectic_h),
    (11, "product moment map", c11_product_moment),
    (12, "classical obstruction", c12_obstruction),
    (13, "frontend corpus and round trip", c13_frontend),
];

/// Criteria that fail as stated, with the start of the expected detail.
/// The h_Omega identity holds only with the opposite global sign on its
/// right-hand side under the bracket convention used throughout.
const KNOWN_FAILURES: [(u32, &str); 1] =
    [(9, "closed, nondegenerate, 20 lifts and 20 h_X tuples exact; h_Omega defect as printed holds on 0/20 tuples, with the opposite global sign on 20/20")];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (n, title, run) in CRITERIA {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        // straight to stderr so the lines survive the test harness capture
        let _ = writeln!(std::io::stderr(), "criterion {n:>2} {status} {title}: {detail}");
        if let Err(d) = outcome {
            failed.push((n, d));
        }
    }
    let unexpected: Vec<_> = failed
        .iter()
        .filter(|(n, d)| !KNOWN_FAILURES.iter().any(|(k, prefix)| k == n && d.starts_with(prefix)))
        .collect();
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    let numbers: Vec<u32> = failed.iter().map(|(n, _)| *n).collect();
    let known: Vec<u32> = KNOWN_FAILURES.iter().map(|(n, _)| *n).collect();
    assert_eq!(numbers, known, "a known failure no longer fails; update KNOWN_FAILURES");
}
