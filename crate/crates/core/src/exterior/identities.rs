//! Seeded checks of the Cartan calculus identities on one chart.

use crate::graded::Sign;
use crate::report::{Report, Residual};
use crate::sample::Sampler;

use super::{Chart, DifferentialForm, MultivectorField};

/// Condition labels produced by [`cartan_suite`], in row order per instance.
pub const CARTAN_CONDITIONS: [&str; 8] = [
    "d-squared",
    "d-leibniz",
    "cartan",
    "lie-bracket",
    "commutator",
    "schouten-antisymmetry",
    "schouten-leibniz",
    "schouten-jacobi",
];

/// `L_v α` from `L_v f = v(f)` and `L_v dx^i = d(v^i)`, without contractions.
pub fn lie_derivative_by_coordinates(a: &DifferentialForm, v: &MultivectorField) -> DifferentialForm {
    let c = a.chart();
    let mut out = DifferentialForm::zero(c, a.degree());
    for (idx, f) in a.components() {
        let basis = DifferentialForm::basis(c, idx).expect("stored tuples are valid");
        out = &out + &basis.scale(&v.apply(f));
        for k in 0..idx.len() {
            let mut term = DifferentialForm::scalar(c, f.clone());
            for (pos, &i) in idx.iter().enumerate() {
                let factor = if pos == k {
                    DifferentialForm::differential(c, &v.vector_component(i))
                } else {
                    DifferentialForm::coordinate_differential(c, i)
                };
                term = term.wedge(&factor);
            }
            out = &out + &term;
        }
    }
    out
}

/// `count` random instances of each identity in [`CARTAN_CONDITIONS`], with
/// form and multivector degrees cycling through what the chart allows.
pub fn cartan_suite(chart: &Chart, sampler: &mut Sampler, count: usize) -> Report {
    let dim = chart.dim();
    let mut report = Report::new();
    let mut push = |cond: &str, arity: usize, inputs: Vec<String>, r: DifferentialOrVector| {
        let (value, nonzero) = r.describe();
        report.push(Residual::new("cartan", arity, inputs, cond, value, nonzero));
    };
    for n in 0..count {
        let p = n % (dim + 1);
        let a = sampler.form(chart, p);
        let r = a.exterior_derivative().exterior_derivative();
        push("d-squared", 1, vec![a.to_string()], r.into());

        let q = (n / 3) % 2;
        let b = sampler.form(chart, q.min(dim));
        let lhs = a.wedge(&b).exterior_derivative();
        let rhs =
            &a.exterior_derivative().wedge(&b) + &a.wedge(&b.exterior_derivative()).scale_sign(Sign::power(p as i64));
        push("d-leibniz", 2, vec![a.to_string(), b.to_string()], diff(&lhs, &rhs).into());

        let v = sampler.vector_field(chart);
        let lhs = a.lie_derivative(&v).expect("same chart");
        let rhs = lie_derivative_by_coordinates(&a, &v);
        push("cartan", 2, vec![v.to_string(), a.to_string()], diff(&lhs, &rhs).into());

        let u = sampler.vector_field(chart);
        let luv = |x: &DifferentialForm| -> DifferentialForm {
            let a = x.lie_derivative(&v).expect("same chart").lie_derivative(&u).expect("same chart");
            let b = x.lie_derivative(&u).expect("same chart").lie_derivative(&v).expect("same chart");
            &a - &b
        };
        let lhs = a.lie_derivative(&u.vf_bracket(&v).expect("same chart")).expect("same chart");
        push("lie-bracket", 3, vec![u.to_string(), v.to_string(), a.to_string()], diff(&lhs, &luv(&a)).into());

        // ι_{[x,y]} β = (−1)^{(|x|−1)|y|} L_x ι_y β − ι_y L_x β
        let x = sampler.multivector(chart, (n % 3).min(dim));
        let y = sampler.multivector(chart, ((n / 3) % 3).min(dim));
        let beta = sampler.form(chart, (n / 2) % (dim + 1));
        let lhs = beta.interior(&x.schouten(&y).expect("same chart")).expect("same chart");
        let sign = Sign::power((x.degree() as i64 - 1) * y.degree() as i64);
        let rhs = &beta.interior(&y).expect("same chart").lie_derivative(&x).expect("same chart").scale_sign(sign)
            - &beta.lie_derivative(&x).expect("same chart").interior(&y).expect("same chart");
        push("commutator", 3, vec![x.to_string(), y.to_string(), beta.to_string()], diff(&lhs, &rhs).into());

        let degs = [n % 3, (n / 3) % 3, (n / 9) % 3];
        let [x1, x2, x3] = degs.map(|d| sampler.multivector(chart, d.min(dim)));
        let (a1, a2) = (x1.degree() as i64 - 1, x2.degree() as i64 - 1);
        let pair = vec![x1.to_string(), x2.to_string()];
        let triple = vec![x1.to_string(), x2.to_string(), x3.to_string()];
        let br = |p: &MultivectorField, q: &MultivectorField| p.schouten(q).expect("same chart");
        let lhs = br(&x1, &x2);
        let rhs = -&br(&x2, &x1).scale_sign(Sign::power(a1 * a2));
        push("schouten-antisymmetry", 2, pair, diff(&lhs, &rhs).into());
        let lhs = br(&x1, &x2.wedge(&x3));
        let rhs = &br(&x1, &x2).wedge(&x3) + &x2.wedge(&br(&x1, &x3)).scale_sign(Sign::power(a1 * x2.degree() as i64));
        push("schouten-leibniz", 3, triple.clone(), diff(&lhs, &rhs).into());
        let lhs = br(&x1, &br(&x2, &x3));
        let rhs = &br(&br(&x1, &x2), &x3) + &br(&x2, &br(&x1, &x3)).scale_sign(Sign::power(a1 * a2));
        push("schouten-jacobi", 3, triple, diff(&lhs, &rhs).into());
    }
    report
}

/// `lhs − rhs`, tolerating a zero side of another degree.
fn diff<K: super::Kind>(lhs: &super::Exterior<K>, rhs: &super::Exterior<K>) -> super::Exterior<K> {
    lhs.try_add(&-rhs).expect("identity sides share a degree")
}

enum DifferentialOrVector {
    Form(DifferentialForm),
    Vector(MultivectorField),
}

impl DifferentialOrVector {
    fn describe(&self) -> (String, bool) {
        match self {
            DifferentialOrVector::Form(f) => (f.to_string(), !f.is_zero()),
            DifferentialOrVector::Vector(v) => (v.to_string(), !v.is_zero()),
        }
    }
}

impl From<DifferentialForm> for DifferentialOrVector {
    fn from(f: DifferentialForm) -> Self {
        DifferentialOrVector::Form(f)
    }
}

impl From<MultivectorField> for DifferentialOrVector {
    fn from(v: MultivectorField) -> Self {
        DifferentialOrVector::Vector(v)
    }
}
