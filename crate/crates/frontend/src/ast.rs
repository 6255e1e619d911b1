//! Syntax tree of an input file. Parentheses are not stored; the printer
//! reinserts the ones precedence requires.

use crate::error::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident { name: name.into(), span: Span::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => "^",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => PREC_SUM,
            BinOp::Mul | BinOp::Div => PREC_PRODUCT,
            BinOp::Wedge => PREC_WEDGE,
        }
    }
}

pub const PREC_SUM: u8 = 1;
pub const PREC_PRODUCT: u8 = 2;
pub const PREC_UNARY: u8 = 3;
pub const PREC_WEDGE: u8 = 4;
pub const PREC_POWER: u8 = 5;
pub const PREC_ATOM: u8 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Unsigned integer literal.
    Int(String, Span),
    /// Coordinate, basis 1-form `dx`, declared value or basis label.
    Name(Ident),
    /// Coordinate vector field `@x`.
    Field(Ident),
    /// Exterior derivative `d(e)`.
    D(Box<Expr>, Span),
    Neg(Box<Expr>, Span),
    Bin(BinOp, Box<Expr>, Box<Expr>, Span),
    /// `e**k`, `k` possibly negative.
    Pow(Box<Expr>, i64, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Int(_, s) | Expr::D(_, s) | Expr::Neg(_, s) | Expr::Bin(_, _, _, s) | Expr::Pow(_, _, s) => *s,
            Expr::Name(i) | Expr::Field(i) => i.span,
        }
    }

    pub fn precedence(&self) -> u8 {
        match self {
            Expr::Int(..) | Expr::Name(_) | Expr::Field(_) | Expr::D(..) => PREC_ATOM,
            Expr::Neg(..) => PREC_UNARY,
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Pow(..) => PREC_POWER,
        }
    }

    pub fn int(n: u64) -> Expr {
        Expr::Int(n.to_string(), Span::default())
    }

    pub fn name(n: &str) -> Expr {
        Expr::Name(Ident::new(n))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b), Span::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Scalar,
    Form,
    Vector,
}

impl ValueKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ValueKind::Scalar => "scalar",
            ValueKind::Form => "form",
            ValueKind::Vector => "vector",
        }
    }
}

/// `f2(e1, e2) = value` inside a component or bracket table; `index` is the
/// arity written after the prefix letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub prefix: String,
    pub index: usize,
    pub head_span: Span,
    pub args: Vec<Ident>,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub target: Ident,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieBracket {
    pub left: Ident,
    pub right: Ident,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceEntry {
    pub label: Ident,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptValue {
    Flag,
    Int(i64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOption {
    pub name: Ident,
    pub value: OptValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    /// Kind name, e.g. `gen-jacobi`.
    pub kind: Ident,
    pub targets: Vec<Ident>,
    pub args: Vec<Expr>,
    pub expect: Option<Expr>,
    pub options: Vec<CheckOption>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Chart { name: Ident, vars: Vec<Ident> },
    Value { kind: ValueKind, name: Ident, on: Ident, expr: Expr },
    Plectic { name: Ident, chart: Ident, form: Expr, n: usize, samples: Vec<Vec<Assignment>> },
    Product { name: Ident, a: Ident, b: Ident },
    LieAlg { name: Ident, basis: Vec<Ident>, brackets: Vec<LieBracket> },
    LInfty { name: Ident, space: Vec<SpaceEntry>, brackets: Vec<Component> },
    Map { name: Ident, source: Ident, target: Ident, images: Vec<Assignment> },
    LMorph { name: Ident, source: Ident, target: Ident, components: Vec<Component> },
    Action { name: Ident, algebra: Ident, manifold: Ident, fields: Vec<Assignment>, anti: bool },
    Moment { name: Ident, action: Ident, components: Vec<Component> },
    Check(Directive),
}

impl Stmt {
    /// The declared name, for declarations.
    pub fn name(&self) -> Option<&Ident> {
        match self {
            Stmt::Chart { name, .. }
            | Stmt::Value { name, .. }
            | Stmt::Plectic { name, .. }
            | Stmt::Product { name, .. }
            | Stmt::LieAlg { name, .. }
            | Stmt::LInfty { name, .. }
            | Stmt::Map { name, .. }
            | Stmt::LMorph { name, .. }
            | Stmt::Action { name, .. }
            | Stmt::Moment { name, .. } => Some(name),
            Stmt::Check(_) => None,
        }
    }
}

/// Parsed file: statements in source order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub statements: Vec<Stmt>,
}
