//! Random syntax trees shared by the round-trip tests.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use multisym_frontend::ast::*;

const NAMES: [&str; 8] = ["x", "y", "z", "a.x", "dx", "e1", "u", "w2"];
const KINDS: [&str; 5] = ["cartan", "gen-jacobi", "linfty", "moment", "product"];

fn ident(rng: &mut StdRng) -> Ident {
    Ident::new(*NAMES.choose(rng).unwrap())
}

fn idents(rng: &mut StdRng, lo: usize, hi: usize) -> Vec<Ident> {
    (0..rng.gen_range(lo..=hi)).map(|_| ident(rng)).collect()
}

fn expr(rng: &mut StdRng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => Expr::int(rng.gen_range(0..40)),
            1 => Expr::Name(ident(rng)),
            _ => Expr::Field(ident(rng)),
        };
    }
    let sub = |rng: &mut StdRng| Box::new(expr(rng, depth - 1));
    match rng.gen_range(0..8) {
        0 => Expr::D(sub(rng), Default::default()),
        1 => Expr::Neg(sub(rng), Default::default()),
        2 => Expr::Pow(sub(rng), rng.gen_range(-3..=4), Default::default()),
        k => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Wedge][k - 3];
            Expr::Bin(op, sub(rng), sub(rng), Default::default())
        }
    }
}

fn assignments(rng: &mut StdRng) -> Vec<Assignment> {
    (0..rng.gen_range(0..3)).map(|_| Assignment { target: ident(rng), value: expr(rng, 3) }).collect()
}

fn components(rng: &mut StdRng, prefix: &str) -> Vec<Component> {
    (0..rng.gen_range(0..3))
        .map(|_| {
            let index = rng.gen_range(1..=3);
            Component {
                prefix: prefix.into(),
                index,
                head_span: Default::default(),
                args: (0..index).map(|_| ident(rng)).collect(),
                value: expr(rng, 3),
            }
        })
        .collect()
}

fn stmt(rng: &mut StdRng) -> Stmt {
    let name = ident(rng);
    match rng.gen_range(0..11) {
        0 => Stmt::Chart { name, vars: idents(rng, 1, 4) },
        1 => Stmt::Value {
            kind: *[ValueKind::Scalar, ValueKind::Form, ValueKind::Vector].choose(rng).unwrap(),
            name,
            on: ident(rng),
            expr: expr(rng, 4),
        },
        2 => Stmt::Plectic {
            name,
            chart: ident(rng),
            form: expr(rng, 4),
            n: rng.gen_range(1..4),
            samples: (0..rng.gen_range(0..3))
                .map(|_| {
                    (0..rng.gen_range(1..3)).map(|_| Assignment { target: ident(rng), value: expr(rng, 2) }).collect()
                })
                .collect(),
        },
        3 => Stmt::Product { name, a: ident(rng), b: ident(rng) },
        4 => Stmt::LieAlg {
            name,
            basis: idents(rng, 1, 3),
            brackets: (0..rng.gen_range(0..3))
                .map(|_| LieBracket { left: ident(rng), right: ident(rng), value: expr(rng, 3) })
                .collect(),
        },
        5 => Stmt::LInfty {
            name,
            space: (0..rng.gen_range(0..3))
                .map(|_| SpaceEntry { label: ident(rng), degree: rng.gen_range(-3..=1) })
                .collect(),
            brackets: components(rng, "l"),
        },
        6 => Stmt::Map { name, source: ident(rng), target: ident(rng), images: assignments(rng) },
        7 => Stmt::LMorph { name, source: ident(rng), target: ident(rng), components: components(rng, "f") },
        8 => {
            Stmt::Action { name, algebra: ident(rng), manifold: ident(rng), fields: assignments(rng), anti: rng.gen() }
        }
        9 => Stmt::Moment { name, action: ident(rng), components: components(rng, "f") },
        _ => Stmt::Check(Directive {
            kind: Ident::new(*KINDS.choose(rng).unwrap()),
            targets: idents(rng, 0, 2),
            args: (0..rng.gen_range(0..3)).map(|_| expr(rng, 3)).collect(),
            expect: rng.gen_bool(0.5).then(|| expr(rng, 3)),
            options: (0..rng.gen_range(0..3))
                .map(|_| CheckOption {
                    name: Ident::new(*["seed", "max-arity", "sign-audit"].choose(rng).unwrap()),
                    value: match rng.gen_range(0..3) {
                        0 => OptValue::Flag,
                        1 => OptValue::Int(rng.gen_range(-5..50)),
                        _ => OptValue::Name("x".into()),
                    },
                })
                .collect(),
            span: Default::default(),
        }),
    }
}

/// Debug text with every `Span { .. }` removed, so trees built without
/// positions compare equal to parsed ones.
pub fn shape<T: std::fmt::Debug>(t: &T) -> String {
    let s = format!("{t:?}");
    let mut out = String::new();
    let mut rest = s.as_str();
    while let Some(i) = rest.find("Span {") {
        out.push_str(&rest[..i]);
        let close = rest[i..].find('}').expect("span closes");
        rest = &rest[i + close + 1..];
    }
    out.push_str(rest);
    out
}

/// A program of one to five random statements.
pub fn program(rng: &mut StdRng) -> Program {
    Program { statements: (0..rng.gen_range(1..6)).map(|_| stmt(rng)).collect() }
}
