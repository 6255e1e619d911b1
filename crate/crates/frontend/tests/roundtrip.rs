//! Printer and parser agree: random syntax trees survive print → parse, and
//! random exact forms and fields survive Display → parse → elaborate.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use multisym::arith::{Rational, RationalFunction};
use multisym::exterior::{Chart, DifferentialForm, MultivectorField};
use multisym_frontend::elab::{elaborate, Geo, Value};
use multisym_frontend::{parser, printer};

mod common;

#[test]
fn random_programs_round_trip() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let program = common::program(&mut rng);
        let printed = printer::print_program(&program);
        let parsed = parser::parse(&printed).unwrap_or_else(|e| panic!("case {case}: {e}\n{printed}"));
        assert_eq!(common::shape(&parsed), common::shape(&program), "case {case}:\n{printed}");
        assert_eq!(printer::print_program(&parsed), printed, "case {case}");
    }
}

fn random_function(rng: &mut StdRng, chart: &Chart) -> RationalFunction {
    let vars = chart.vars();
    let poly = |rng: &mut StdRng| {
        let mut p = RationalFunction::zero(vars);
        for _ in 0..rng.gen_range(1..=3) {
            let c = Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into());
            let mut t = RationalFunction::constant(vars, c);
            for i in 0..chart.dim() {
                t = &t * &chart.coordinate(i).pow(rng.gen_range(0..=2)).unwrap();
            }
            p = &p + &t;
        }
        p
    };
    let num = poly(rng);
    if rng.gen_bool(0.5) {
        return num;
    }
    let den = poly(rng);
    if den.is_zero() {
        num
    } else {
        num.checked_div(&den).unwrap()
    }
}

fn random_indices(rng: &mut StdRng, dim: usize, degree: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..dim).collect();
    all.shuffle(rng);
    all.truncate(degree);
    all
}

#[test]
fn random_forms_and_fields_round_trip() {
    let mut rng = StdRng::seed_from_u64(11);
    let chart = Chart::new("M", ["x", "y", "z"]).unwrap();
    for case in 0..100 {
        let degree = rng.gen_range(1..=3);
        let terms: Vec<_> = (0..rng.gen_range(0..=3))
            .map(|_| (random_indices(&mut rng, 3, degree), random_function(&mut rng, &chart)))
            .collect();
        let form = DifferentialForm::from_terms(&chart, degree, terms).unwrap();
        let vdeg = rng.gen_range(1..=2);
        let vterms: Vec<_> = (0..rng.gen_range(1..=2))
            .map(|_| (random_indices(&mut rng, 3, vdeg), random_function(&mut rng, &chart)))
            .collect();
        let field = MultivectorField::from_terms(&chart, vdeg, vterms).unwrap();

        let src = format!("chart M (x, y, z);\nform w on M = {form};\nvector v on M = {field};\n");
        let doc = elaborate(parser::parse(&src).unwrap_or_else(|e| panic!("case {case}: {e}\n{src}")))
            .unwrap_or_else(|e| panic!("case {case}: {e}\n{src}"));
        match &doc.symbols["w"] {
            // A zero form prints as `0` and comes back as a 0-form.
            Value::Geo(_, Geo::Form(f)) if form.is_zero() => assert!(f.is_zero(), "case {case}"),
            Value::Geo(_, Geo::Form(f)) => assert_eq!(f, &form, "case {case}: {src}"),
            other => panic!("case {case}: {}", other.kind_name()),
        }
        match &doc.symbols["v"] {
            Value::Geo(_, Geo::Vector(v)) if field.is_zero() => assert!(v.is_zero(), "case {case}"),
            Value::Geo(_, Geo::Vector(v)) => assert_eq!(v, &field, "case {case}: {src}"),
            other => panic!("case {case}: {}", other.kind_name()),
        }
    }
}

#[test]
fn canonical_spellings() {
    let chart = Chart::new("M", ["x", "y"]).unwrap();
    assert_eq!(DifferentialForm::zero(&chart, 2).to_string(), "0");
    let c = RationalFunction::constant(chart.vars(), Rational::new((-3).into(), 6.into()));
    assert_eq!(c.to_string(), "-1/2");
    let f = DifferentialForm::from_terms(&chart, 1, [(vec![1], c)]).unwrap();
    assert_eq!(f.to_string(), "-(1/2)*dy");
}
