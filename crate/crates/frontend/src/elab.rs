//! Name resolution and evaluation of declarations. Everything that can be
//! decided statically (names, charts, degrees, table shapes) is checked here
//! and reported with a source span; actions and moment maps are validated
//! when a directive first needs them.

use std::collections::HashMap;

use multisym::arith::{Rational, RationalFunction};
use multisym::exterior::{Chart, DifferentialForm, MultivectorField};
use multisym::linfty::{
    liealg_components, FiniteLInfty, GradedElement, GradedSpace, LieAlgebra, LinearMap, MultilinearFamily,
};
use multisym::moment::{ActionConvention, ProductPlectic};
use multisym::plectic::PlecticManifold;
use num_traits::{One, Zero};

use crate::ast::*;
use crate::error::{ErrorCode, FrontendError, Result, Span};

/// Value of a geometric expression. Scalars are 0-forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geo {
    Form(DifferentialForm),
    Vector(MultivectorField),
}

impl Geo {
    pub fn describe(&self) -> String {
        match self {
            Geo::Form(f) if f.degree() == 0 => "a scalar".into(),
            Geo::Form(f) => format!("a {}-form", f.degree()),
            Geo::Vector(v) => format!("a {}-vector field", v.degree()),
        }
    }

    pub fn text(&self) -> String {
        match self {
            Geo::Form(f) => f.to_string(),
            Geo::Vector(v) => v.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ActionDecl {
    pub algebra: String,
    pub manifold: String,
    pub fields: Vec<MultivectorField>,
    pub convention: ActionConvention,
}

#[derive(Debug, Clone)]
pub struct MomentDecl {
    pub action: String,
    pub components: Vec<(Vec<String>, DifferentialForm)>,
}

#[derive(Debug, Clone)]
pub struct MapDecl {
    pub map: LinearMap,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone)]
pub struct LMorphDecl {
    pub algebra: String,
    pub target: String,
    pub components: MultilinearFamily,
}

#[derive(Debug, Clone)]
pub enum Value {
    Chart(Chart),
    Geo(ValueKind, Geo),
    Plectic(PlecticManifold),
    Product(Box<ProductPlectic>),
    LieAlg(LieAlgebra),
    LInfty(FiniteLInfty),
    Map(MapDecl),
    LMorph(LMorphDecl),
    Action(ActionDecl),
    Moment(MomentDecl),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Chart(_) => "chart",
            Value::Geo(k, _) => k.keyword(),
            Value::Plectic(_) => "plectic manifold",
            Value::Product(_) => "product manifold",
            Value::LieAlg(_) => "Lie algebra",
            Value::LInfty(_) => "L-infinity algebra",
            Value::Map(_) => "linear map",
            Value::LMorph(_) => "Lie algebra morphism",
            Value::Action(_) => "action",
            Value::Moment(_) => "moment map",
        }
    }

    /// The chart of charts, geometric values and manifolds.
    pub fn chart(&self) -> Option<&Chart> {
        match self {
            Value::Chart(c) => Some(c),
            Value::Geo(_, Geo::Form(f)) => Some(f.chart()),
            Value::Geo(_, Geo::Vector(v)) => Some(v.chart()),
            Value::Plectic(p) => Some(p.chart()),
            Value::Product(p) => Some(p.manifold().chart()),
            _ => None,
        }
    }

    pub fn manifold(&self) -> Option<&PlecticManifold> {
        match self {
            Value::Plectic(p) => Some(p),
            Value::Product(p) => Some(p.manifold()),
            _ => None,
        }
    }

    /// Structure constants of a Lie or L∞ algebra.
    pub fn linfty(&self) -> Option<&FiniteLInfty> {
        match self {
            Value::LieAlg(g) => Some(g.as_linfty()),
            Value::LInfty(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptionValue {
    Flag,
    Int(i64),
}

/// Directive after resolution; arguments are evaluated on the chart of the
/// first target.
#[derive(Debug, Clone)]
pub struct Check {
    /// 1-based position among directives.
    pub number: usize,
    pub kind: String,
    pub targets: Vec<String>,
    pub args: Vec<Geo>,
    pub expect: Option<Geo>,
    pub options: HashMap<String, OptionValue>,
    pub span: Span,
    /// Canonical text of the directive.
    pub text: String,
}

impl Check {
    pub fn int_option(&self, name: &str) -> Option<i64> {
        match self.options.get(name) {
            Some(OptionValue::Int(k)) => Some(*k),
            _ => None,
        }
    }

    pub fn flag(&self, name: &str) -> bool {
        self.options.contains_key(name)
    }
}

/// Elaborated program: the symbol table and the directives in order.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub program: Program,
    pub symbols: HashMap<String, Value>,
    /// Declaration order, for deterministic iteration.
    pub order: Vec<String>,
    pub checks: Vec<Check>,
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.symbols.get(name)
    }
}

const OPTION_NAMES: [&str; 5] = ["seed", "samples", "max-arity", "word-max", "sign-audit"];

/// Target shape of each check kind.
#[derive(Clone, Copy)]
enum Want {
    ChartLike,
    Manifold,
    Product,
    Algebra,
    Map,
    LMorph,
    Action,
    Moment,
}

impl Want {
    fn accepts(self, v: &Value) -> bool {
        match self {
            Want::ChartLike => matches!(v, Value::Chart(_) | Value::Plectic(_) | Value::Product(_)),
            Want::Manifold => v.manifold().is_some(),
            Want::Product => matches!(v, Value::Product(_)),
            Want::Algebra => v.linfty().is_some(),
            Want::Map => matches!(v, Value::Map(_)),
            Want::LMorph => matches!(v, Value::LMorph(_)),
            Want::Action => matches!(v, Value::Action(_)),
            Want::Moment => matches!(v, Value::Moment(_)),
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Want::ChartLike => "a chart or manifold",
            Want::Manifold => "a plectic or product manifold",
            Want::Product => "a product manifold",
            Want::Algebra => "a Lie or L-infinity algebra",
            Want::Map => "a linear map",
            Want::LMorph => "a Lie algebra morphism",
            Want::Action => "an action",
            Want::Moment => "a moment map",
        }
    }
}

/// `(targets, allowed argument counts, expectation allowed)`.
fn signature(kind: &str) -> Option<(&'static [Want], &'static [usize], bool)> {
    use Want::*;
    Some(match kind {
        "cartan" => (&[ChartLike], &[0], false),
        "closed" | "nondegenerate" => (&[ChartLike], &[0, 1], false),
        "hamiltonian" => (&[Manifold], &[1], true),
        "lift" => (&[Product], &[1], false),
        "bracket" => (&[Manifold], &[0, 2], true),
        "leibniz" | "jacobiator" => (&[Manifold], &[0, 3], false),
        "linfty" => (&[Manifold], &[0], false),
        "gen-jacobi" | "coderivation" | "decalage" => (&[Algebra], &[0], false),
        "strict-morphism" => (&[Map], &[0], false),
        "liealg-morphism" => (&[LMorph], &[0], false),
        "action" => (&[Action], &[0], false),
        "moment" | "diagonal" => (&[Moment], &[0], false),
        "product" => (&[Product], &[0], false),
        "product-moment" => (&[Moment, Moment], &[0], false),
        "h-morphism" => (&[Manifold, Manifold], &[0], false),
        _ => return None,
    })
}

/// Names of all check kinds.
pub const CHECK_KINDS: [&str; 20] = [
    "cartan",
    "closed",
    "nondegenerate",
    "hamiltonian",
    "lift",
    "bracket",
    "leibniz",
    "jacobiator",
    "linfty",
    "gen-jacobi",
    "coderivation",
    "decalage",
    "strict-morphism",
    "liealg-morphism",
    "action",
    "moment",
    "diagonal",
    "product",
    "product-moment",
    "h-morphism",
];

fn err<T>(code: ErrorCode, span: Span, msg: impl Into<String>) -> Result<T> {
    Err(FrontendError::new(code, span, msg))
}

fn invalid(span: Span) -> impl Fn(&dyn std::fmt::Display) -> FrontendError {
    move |e| FrontendError::new(ErrorCode::InvalidValue, span, e.to_string())
}

pub fn elaborate(program: Program) -> Result<Document> {
    let mut doc = Document { program: Program::default(), ..Default::default() };
    for st in &program.statements {
        if let Some(name) = st.name() {
            if doc.symbols.contains_key(&name.name) {
                return err(ErrorCode::DuplicateName, name.span, format!("`{}` is already declared", name.name));
            }
        }
        match st {
            Stmt::Check(d) => {
                let check = elaborate_check(&doc, d, doc.checks.len() + 1)?;
                doc.checks.push(check);
            }
            _ => {
                let name = st.name().expect("declaration").name.clone();
                let value = declaration(&doc, st)?;
                doc.symbols.insert(name.clone(), value);
                doc.order.push(name);
            }
        }
    }
    doc.program = program;
    Ok(doc)
}

fn lookup<'a>(doc: &'a Document, id: &Ident) -> Result<&'a Value> {
    doc.get(&id.name)
        .ok_or_else(|| FrontendError::new(ErrorCode::UnknownName, id.span, format!("unknown name `{}`", id.name)))
}

/// Chart named by `id`, directly or through a manifold.
fn chart_of(doc: &Document, id: &Ident) -> Result<Chart> {
    match lookup(doc, id)? {
        v @ (Value::Chart(_) | Value::Plectic(_) | Value::Product(_)) => Ok(v.chart().expect("has chart").clone()),
        v => {
            err(ErrorCode::TypeError, id.span, format!("`{}` is a {}, not a chart or manifold", id.name, v.kind_name()))
        }
    }
}

fn manifold_of(doc: &Document, id: &Ident) -> Result<PlecticManifold> {
    let v = lookup(doc, id)?;
    v.manifold().cloned().ok_or_else(|| {
        FrontendError::new(
            ErrorCode::TypeError,
            id.span,
            format!("`{}` is a {}, not a manifold", id.name, v.kind_name()),
        )
    })
}

/// `dNAME` for a coordinate `NAME`, unless `dNAME` is itself a coordinate.
fn basis_differential(chart: &Chart, name: &str) -> Option<usize> {
    if chart.index_of(name).is_some() {
        return None;
    }
    name.strip_prefix('d').and_then(|v| chart.index_of(v))
}

fn declaration(doc: &Document, st: &Stmt) -> Result<Value> {
    Ok(match st {
        Stmt::Chart { name, vars } => {
            for (i, v) in vars.iter().enumerate() {
                if vars[..i].iter().any(|w| w.name == v.name) {
                    return err(ErrorCode::DuplicateName, v.span, format!("variable `{}` repeated", v.name));
                }
                if v.name == "d" {
                    return err(ErrorCode::InvalidValue, v.span, "`d` is reserved for the exterior derivative");
                }
            }
            let c = Chart::new(&name.name, vars.iter().map(|v| v.name.clone())).map_err(|e| invalid(name.span)(&e))?;
            Value::Chart(c)
        }
        Stmt::Value { kind, name, on, expr } => {
            let chart = chart_of(doc, on)?;
            if chart.index_of(&name.name).is_some() || basis_differential(&chart, &name.name).is_some() {
                return err(
                    ErrorCode::DuplicateName,
                    name.span,
                    format!("`{}` shadows a coordinate expression of chart `{}`", name.name, chart.name()),
                );
            }
            let mut g = geo_eval(doc, &chart, expr)?;
            // A zero field prints as `0`, which evaluates to a scalar.
            if let (ValueKind::Vector, Geo::Form(f)) = (kind, &g) {
                if f.is_zero() {
                    g = Geo::Vector(MultivectorField::zero(&chart, 0));
                }
            }
            match (kind, &g) {
                (ValueKind::Scalar, Geo::Form(f)) if f.degree() == 0 => {}
                (ValueKind::Form, Geo::Form(_)) | (ValueKind::Vector, Geo::Vector(_)) => {}
                _ => {
                    return err(
                        ErrorCode::TypeError,
                        expr.span(),
                        format!("declared {} but the expression is {}", kind.keyword(), g.describe()),
                    )
                }
            }
            Value::Geo(*kind, g)
        }
        Stmt::Plectic { name: _, chart, form, n, samples } => {
            let c = match lookup(doc, chart)? {
                Value::Chart(c) => c.clone(),
                v => {
                    return err(
                        ErrorCode::TypeError,
                        chart.span,
                        format!("`{}` is a {}, not a chart", chart.name, v.kind_name()),
                    )
                }
            };
            let omega = expect_form(geo_eval(doc, &c, form)?, form.span())?;
            if omega.degree() != n + 1 {
                return err(
                    ErrorCode::DegreeError,
                    form.span(),
                    format!("an {}-plectic form has degree {}, found degree {}", n, n + 1, omega.degree()),
                );
            }
            let mut points = Vec::new();
            for p in samples {
                let mut point = vec![None; c.dim()];
                for a in p {
                    let i = c.index_of(&a.target.name).ok_or_else(|| {
                        FrontendError::new(
                            ErrorCode::UnknownName,
                            a.target.span,
                            format!("`{}` is not a coordinate of `{}`", a.target.name, c.name()),
                        )
                    })?;
                    if point[i].is_some() {
                        return err(
                            ErrorCode::DuplicateName,
                            a.target.span,
                            format!("coordinate `{}` given twice", a.target.name),
                        );
                    }
                    point[i] = Some(rational_eval(&a.value)?);
                }
                let span = p.first().map(|a| a.target.span).unwrap_or(chart.span);
                let point: Option<Vec<Rational>> = point.into_iter().collect();
                points.push(point.ok_or_else(|| {
                    FrontendError::new(ErrorCode::InvalidValue, span, "sample point must give every coordinate")
                })?);
            }
            let p = PlecticManifold::new(&c, *n, omega, points).map_err(|e| invalid(form.span())(&e))?;
            Value::Plectic(p)
        }
        Stmt::Product { name, a, b } => {
            let pa = plain_plectic(doc, a)?;
            let pb = plain_plectic(doc, b)?;
            Value::Product(Box::new(ProductPlectic::new(&pa, &pb).map_err(|e| invalid(name.span)(&e))?))
        }
        Stmt::LieAlg { name, basis, brackets } => {
            for (i, b) in basis.iter().enumerate() {
                if basis[..i].iter().any(|c| c.name == b.name) {
                    return err(ErrorCode::DuplicateName, b.span, format!("basis label `{}` repeated", b.name));
                }
            }
            let space =
                GradedSpace::new(basis.iter().map(|b| (b.name.clone(), 0))).map_err(|e| invalid(name.span)(&e))?;
            let mut table = Vec::new();
            for br in brackets {
                for id in [&br.left, &br.right] {
                    space
                        .index_of(&id.name)
                        .map_err(|e| FrontendError::new(ErrorCode::UnknownName, id.span, e.to_string()))?;
                }
                let v = lin_eval(&space, &br.value)?.into_element(&space, br.value.span())?;
                let terms: Vec<(String, Rational)> =
                    v.terms().map(|(i, c)| (space.label(i).to_string(), c.clone())).collect();
                table.push(((br.left.name.clone(), br.right.name.clone()), terms));
            }
            let labels: Vec<&str> = basis.iter().map(|b| b.name.as_str()).collect();
            let g = LieAlgebra::new(
                &labels,
                table.iter().map(|((a, b), t)| {
                    ((a.as_str(), b.as_str()), t.iter().map(|(l, c)| (l.as_str(), c.clone())).collect())
                }),
            )
            .map_err(|e| invalid(name.span)(&e))?;
            Value::LieAlg(g)
        }
        Stmt::LInfty { name, space, brackets } => {
            for (i, e) in space.iter().enumerate() {
                if space[..i].iter().any(|f| f.label.name == e.label.name) {
                    return err(
                        ErrorCode::DuplicateName,
                        e.label.span,
                        format!("basis label `{}` repeated", e.label.name),
                    );
                }
            }
            let s = GradedSpace::new(space.iter().map(|e| (e.label.name.clone(), e.degree)))
                .map_err(|e| invalid(name.span)(&e))?;
            let max = brackets.iter().map(|c| c.index).max().unwrap_or(1).max(1);
            let mut a = FiniteLInfty::new(&s, max);
            for c in brackets {
                check_component_arity(c)?;
                let labels = component_labels(&s, c)?;
                let v = lin_eval(&s, &c.value)?.into_element(&s, c.value.span())?;
                a.set_bracket(&labels, v)
                    .map_err(|e| FrontendError::new(ErrorCode::DegreeError, c.value.span(), e.to_string()))?;
            }
            Value::LInfty(a)
        }
        Stmt::Map { name: _, source, target, images } => {
            let (a, b) = (algebra_of(doc, source)?, algebra_of(doc, target)?);
            let mut f = LinearMap::zero(a.space(), b.space());
            for img in images {
                a.space()
                    .index_of(&img.target.name)
                    .map_err(|e| FrontendError::new(ErrorCode::UnknownName, img.target.span, e.to_string()))?;
                let v = lin_eval(b.space(), &img.value)?.into_element(b.space(), img.value.span())?;
                f = f
                    .with_image(&img.target.name, v)
                    .map_err(|e| FrontendError::new(ErrorCode::DegreeError, img.value.span(), e.to_string()))?;
            }
            Value::Map(MapDecl { map: f, source: source.name.clone(), target: target.name.clone() })
        }
        Stmt::LMorph { name: _, source, target, components } => {
            let g = match lookup(doc, source)? {
                Value::LieAlg(g) => g.clone(),
                v => {
                    return err(
                        ErrorCode::TypeError,
                        source.span,
                        format!("`{}` is a {}, not a Lie algebra", source.name, v.kind_name()),
                    )
                }
            };
            let a = algebra_of(doc, target)?;
            // a Lie n-algebra lives in degrees 1-n..=0 with brackets up to l_{n+1}
            let lowest = a.space().degrees().iter().copied().min().unwrap_or(0);
            let n = a.max_arity().saturating_sub(1).max((1 - lowest).max(1) as usize);
            let mut fam = liealg_components(&g, a.space(), n);
            for c in components {
                check_component_arity(c)?;
                if c.index > n {
                    return err(
                        ErrorCode::Arity,
                        c.head_span,
                        format!("components of a morphism into a Lie {n}-algebra stop at f{n}"),
                    );
                }
                let labels = component_labels(g.space(), c)?;
                let v = lin_eval(a.space(), &c.value)?.into_element(a.space(), c.value.span())?;
                fam.set(&labels, v)
                    .map_err(|e| FrontendError::new(ErrorCode::DegreeError, c.value.span(), e.to_string()))?;
            }
            Value::LMorph(LMorphDecl { algebra: source.name.clone(), target: target.name.clone(), components: fam })
        }
        Stmt::Action { name: _, algebra, manifold, fields, anti } => {
            let g = match lookup(doc, algebra)? {
                Value::LieAlg(g) => g.clone(),
                v => {
                    return err(
                        ErrorCode::TypeError,
                        algebra.span,
                        format!("`{}` is a {}, not a Lie algebra", algebra.name, v.kind_name()),
                    )
                }
            };
            let m = manifold_of(doc, manifold)?;
            let mut slots: Vec<Option<MultivectorField>> = vec![None; g.dim()];
            for f in fields {
                let i = g
                    .space()
                    .index_of(&f.target.name)
                    .map_err(|e| FrontendError::new(ErrorCode::UnknownName, f.target.span, e.to_string()))?;
                if slots[i].is_some() {
                    return err(
                        ErrorCode::DuplicateName,
                        f.target.span,
                        format!("field of `{}` given twice", f.target.name),
                    );
                }
                match geo_eval(doc, m.chart(), &f.value)? {
                    Geo::Vector(v) if v.degree() == 1 => slots[i] = Some(v),
                    g => {
                        return err(
                            ErrorCode::TypeError,
                            f.value.span(),
                            format!("expected a vector field, found {}", g.describe()),
                        )
                    }
                }
            }
            // unlisted elements act trivially
            let fields = slots.into_iter().map(|s| s.unwrap_or_else(|| MultivectorField::zero(m.chart(), 1))).collect();
            let convention = if *anti { ActionConvention::AntiMorphism } else { ActionConvention::Morphism };
            Value::Action(ActionDecl {
                algebra: algebra.name.clone(),
                manifold: manifold.name.clone(),
                fields,
                convention,
            })
        }
        Stmt::Moment { name: _, action, components } => {
            let decl = match lookup(doc, action)? {
                Value::Action(a) => a.clone(),
                v => {
                    return err(
                        ErrorCode::TypeError,
                        action.span,
                        format!("`{}` is a {}, not an action", action.name, v.kind_name()),
                    )
                }
            };
            let g = match doc.get(&decl.algebra) {
                Some(Value::LieAlg(g)) => g.clone(),
                _ => unreachable!("actions reference Lie algebras"),
            };
            let m = doc.get(&decl.manifold).and_then(Value::manifold).expect("actions reference manifolds").clone();
            let n = m.n();
            let mut out = Vec::new();
            for c in components {
                check_component_arity(c)?;
                if c.index > n {
                    return err(
                        ErrorCode::Arity,
                        c.head_span,
                        format!("moment components stop at f{n} on an {n}-plectic manifold"),
                    );
                }
                let labels = component_labels(g.space(), c)?;
                if c.args.len() != c.index {
                    unreachable!("checked by component_labels");
                }
                for (i, l) in labels.iter().enumerate() {
                    if labels[..i].contains(l) {
                        return err(
                            ErrorCode::InvalidValue,
                            c.args[i].span,
                            format!("label `{l}` repeated in an antisymmetric component"),
                        );
                    }
                }
                let f = expect_form(geo_eval(doc, m.chart(), &c.value)?, c.value.span())?;
                let expected = n - c.index;
                if f.degree() != expected && !f.is_zero() {
                    return err(
                        ErrorCode::DegreeError,
                        c.value.span(),
                        format!("f{} takes values in {}-forms, found degree {}", c.index, expected, f.degree()),
                    );
                }
                let f = if f.is_zero() { DifferentialForm::zero(m.chart(), expected) } else { f };
                out.push((labels.iter().map(|s| s.to_string()).collect(), f));
            }
            Value::Moment(MomentDecl { action: action.name.clone(), components: out })
        }
        Stmt::Check(_) => unreachable!("handled by the caller"),
    })
}

fn plain_plectic(doc: &Document, id: &Ident) -> Result<PlecticManifold> {
    match lookup(doc, id)? {
        Value::Plectic(p) => Ok(p.clone()),
        Value::Product(p) => Ok(p.manifold().clone()),
        v => {
            err(ErrorCode::TypeError, id.span, format!("`{}` is a {}, not a plectic manifold", id.name, v.kind_name()))
        }
    }
}

fn algebra_of(doc: &Document, id: &Ident) -> Result<FiniteLInfty> {
    let v = lookup(doc, id)?;
    v.linfty().cloned().ok_or_else(|| {
        FrontendError::new(
            ErrorCode::TypeError,
            id.span,
            format!("`{}` is a {}, not an algebra", id.name, v.kind_name()),
        )
    })
}

fn check_component_arity(c: &Component) -> Result<()> {
    if c.args.len() != c.index {
        return err(
            ErrorCode::Arity,
            c.head_span,
            format!("`{}{}` takes {} arguments, found {}", c.prefix, c.index, c.index, c.args.len()),
        );
    }
    Ok(())
}

fn component_labels<'a>(space: &GradedSpace, c: &'a Component) -> Result<Vec<&'a str>> {
    c.args
        .iter()
        .map(|a| {
            space
                .index_of(&a.name)
                .map(|_| a.name.as_str())
                .map_err(|e| FrontendError::new(ErrorCode::UnknownName, a.span, e.to_string()))
        })
        .collect()
}

fn expect_form(g: Geo, span: Span) -> Result<DifferentialForm> {
    match g {
        Geo::Form(f) => Ok(f),
        g => err(ErrorCode::TypeError, span, format!("expected a form, found {}", g.describe())),
    }
}

fn elaborate_check(doc: &Document, d: &Directive, number: usize) -> Result<Check> {
    let kind = d.kind.name.as_str();
    let (wants, arg_counts, expect_ok) = signature(kind).ok_or_else(|| {
        FrontendError::new(
            ErrorCode::Syntax,
            d.kind.span,
            format!("unknown check kind `{kind}`; known kinds: {}", CHECK_KINDS.join(", ")),
        )
    })?;
    if d.targets.len() != wants.len() {
        return err(
            ErrorCode::Arity,
            d.kind.span,
            format!("`check {kind}` takes {} target(s), found {}", wants.len(), d.targets.len()),
        );
    }
    for (t, w) in d.targets.iter().zip(wants) {
        let v = lookup(doc, t)?;
        if !w.accepts(v) {
            return err(
                ErrorCode::TypeError,
                t.span,
                format!("`check {kind}` needs {}, `{}` is a {}", w.describe(), t.name, v.kind_name()),
            );
        }
    }
    if !arg_counts.contains(&d.args.len()) {
        let counts: Vec<String> = arg_counts.iter().map(|k| k.to_string()).collect();
        return err(
            ErrorCode::Arity,
            d.kind.span,
            format!("`check {kind}` takes {} arguments, found {}", counts.join(" or "), d.args.len()),
        );
    }
    if let Some(e) = &d.expect {
        if !(expect_ok && (kind != "bracket" || d.args.len() == 2)) {
            return err(ErrorCode::Syntax, e.span(), format!("`check {kind}` takes no expected value here"));
        }
    }
    let chart = doc.get(&d.targets[0].name).and_then(Value::chart).cloned();
    let mut eval = |e: &Expr| -> Result<Geo> {
        match &chart {
            Some(c) => geo_eval(doc, c, e),
            None => err(ErrorCode::TypeError, e.span(), "this target takes no expression arguments"),
        }
    };
    let args = d.args.iter().map(&mut eval).collect::<Result<Vec<_>>>()?;
    let expect = d.expect.as_ref().map(&mut eval).transpose()?;
    let mut options = HashMap::new();
    for o in &d.options {
        let name = o.name.name.as_str();
        if !OPTION_NAMES.contains(&name) {
            return err(
                ErrorCode::Syntax,
                o.name.span,
                format!("unknown option `{name}`; known options: {}", OPTION_NAMES.join(", ")),
            );
        }
        let v = match (&o.value, name) {
            (OptValue::Flag, "sign-audit") => OptionValue::Flag,
            (OptValue::Int(k), "seed") => OptionValue::Int(*k),
            (OptValue::Int(k), _) if *k >= 1 && name != "sign-audit" => OptionValue::Int(*k),
            _ => return err(ErrorCode::InvalidValue, o.name.span, format!("option `{name}` has an invalid value")),
        };
        if options.insert(name.to_string(), v).is_some() {
            return err(ErrorCode::DuplicateName, o.name.span, format!("option `{name}` given twice"));
        }
    }
    Ok(Check {
        number,
        kind: kind.to_string(),
        targets: d.targets.iter().map(|t| t.name.clone()).collect(),
        args,
        expect,
        options,
        span: d.span,
        text: crate::printer::print_directive(d),
    })
}

/// Evaluates a geometric expression on `chart`.
pub fn geo_eval(doc: &Document, chart: &Chart, e: &Expr) -> Result<Geo> {
    let span = e.span();
    let scalar = |f: RationalFunction| Geo::Form(DifferentialForm::scalar(chart, f));
    Ok(match e {
        Expr::Int(s, _) => {
            let v: num_bigint::BigInt = s.parse().expect("lexer yields digits");
            scalar(RationalFunction::constant(chart.vars(), Rational::from_integer(v)))
        }
        Expr::Name(id) => {
            if let Some(i) = chart.index_of(&id.name) {
                scalar(chart.coordinate(i))
            } else if let Some(i) = basis_differential(chart, &id.name) {
                Geo::Form(DifferentialForm::coordinate_differential(chart, i))
            } else {
                match doc.get(&id.name) {
                    Some(Value::Geo(_, g)) => {
                        let c = match g {
                            Geo::Form(f) => f.chart(),
                            Geo::Vector(v) => v.chart(),
                        };
                        if c != chart {
                            return err(
                                ErrorCode::ChartMismatch,
                                id.span,
                                format!("`{}` lives on chart `{}`, expected `{}`", id.name, c.name(), chart.name()),
                            );
                        }
                        g.clone()
                    }
                    Some(v) => {
                        return err(
                            ErrorCode::TypeError,
                            id.span,
                            format!("`{}` is a {}, not a scalar, form or vector", id.name, v.kind_name()),
                        )
                    }
                    None => {
                        return err(
                            ErrorCode::UnknownName,
                            id.span,
                            format!(
                                "unknown name `{}` (chart `{}` has coordinates {})",
                                id.name,
                                chart.name(),
                                chart.vars().names().join(", ")
                            ),
                        )
                    }
                }
            }
        }
        Expr::Field(id) => match chart.index_of(&id.name) {
            Some(i) => Geo::Vector(MultivectorField::coordinate_field(chart, i)),
            None => {
                return err(
                    ErrorCode::UnknownName,
                    id.span,
                    format!("`{}` is not a coordinate of chart `{}`", id.name, chart.name()),
                )
            }
        },
        Expr::D(inner, _) => match geo_eval(doc, chart, inner)? {
            Geo::Form(f) => Geo::Form(f.exterior_derivative()),
            g => return err(ErrorCode::TypeError, inner.span(), format!("d applies to forms, found {}", g.describe())),
        },
        Expr::Neg(inner, _) => match geo_eval(doc, chart, inner)? {
            Geo::Form(f) => Geo::Form(-&f),
            Geo::Vector(v) => Geo::Vector(-&v),
        },
        Expr::Pow(base, k, _) => {
            let f = as_scalar(geo_eval(doc, chart, base)?, base.span(), "`**`")?;
            let k = i32::try_from(*k)
                .map_err(|_| FrontendError::new(ErrorCode::InvalidValue, span, "exponent too large"))?;
            scalar(f.pow(k).map_err(|e| FrontendError::new(ErrorCode::InvalidValue, span, e.to_string()))?)
        }
        Expr::Bin(op, a, b, _) => {
            let (x, y) = (geo_eval(doc, chart, a)?, geo_eval(doc, chart, b)?);
            match op {
                BinOp::Add | BinOp::Sub => {
                    let y = if *op == BinOp::Sub { negate(y) } else { y };
                    match (x, y) {
                        (Geo::Form(p), Geo::Form(q)) => {
                            Geo::Form(p.try_add(&q).map_err(|_| degree_error(span, p.degree(), q.degree()))?)
                        }
                        (Geo::Vector(p), Geo::Vector(q)) => {
                            Geo::Vector(p.try_add(&q).map_err(|_| degree_error(span, p.degree(), q.degree()))?)
                        }
                        (x, y) => {
                            return err(
                                ErrorCode::TypeError,
                                span,
                                format!("cannot add {} and {}", x.describe(), y.describe()),
                            )
                        }
                    }
                }
                BinOp::Mul => match (x, y) {
                    (Geo::Form(p), q) if p.degree() == 0 => scale(q, &p.component(&[])),
                    (p, Geo::Form(q)) if q.degree() == 0 => scale(p, &q.component(&[])),
                    (x, y) => {
                        return err(
                            ErrorCode::TypeError,
                            span,
                            format!(
                                "`*` needs a scalar factor, found {} and {}; use `^` for the wedge product",
                                x.describe(),
                                y.describe()
                            ),
                        )
                    }
                },
                BinOp::Div => {
                    let q = as_scalar(y, b.span(), "division")?;
                    if q.is_zero() {
                        return err(ErrorCode::InvalidValue, b.span(), "division by zero");
                    }
                    scale(x, &q.inverse().expect("nonzero"))
                }
                BinOp::Wedge => match (x, y) {
                    (Geo::Form(p), Geo::Form(q)) => Geo::Form(p.wedge(&q)),
                    (Geo::Vector(p), Geo::Vector(q)) => Geo::Vector(p.wedge(&q)),
                    (x, y) => {
                        return err(
                            ErrorCode::TypeError,
                            span,
                            format!("cannot wedge {} with {}", x.describe(), y.describe()),
                        )
                    }
                },
            }
        }
    })
}

fn degree_error(span: Span, a: usize, b: usize) -> FrontendError {
    FrontendError::new(ErrorCode::DegreeError, span, format!("cannot add terms of degree {a} and {b}"))
}

fn negate(g: Geo) -> Geo {
    match g {
        Geo::Form(f) => Geo::Form(-&f),
        Geo::Vector(v) => Geo::Vector(-&v),
    }
}

fn scale(g: Geo, f: &RationalFunction) -> Geo {
    match g {
        Geo::Form(p) => Geo::Form(p.scale(f)),
        Geo::Vector(v) => Geo::Vector(v.scale(f)),
    }
}

fn as_scalar(g: Geo, span: Span, what: &str) -> Result<RationalFunction> {
    match g {
        Geo::Form(f) if f.degree() == 0 => Ok(f.component(&[])),
        g => err(ErrorCode::TypeError, span, format!("{what} needs a scalar, found {}", g.describe())),
    }
}

/// Intermediate value of a linear-combination expression.
enum Lin {
    Number(Rational),
    Element(GradedElement),
}

impl Lin {
    fn into_element(self, space: &GradedSpace, span: Span) -> Result<GradedElement> {
        match self {
            Lin::Element(e) => Ok(e),
            Lin::Number(c) if c.is_zero() => Ok(GradedElement::zero(space)),
            Lin::Number(c) => {
                err(ErrorCode::TypeError, span, format!("expected a combination of basis labels, found the number {c}"))
            }
        }
    }
}

fn lin_eval(space: &GradedSpace, e: &Expr) -> Result<Lin> {
    let span = e.span();
    Ok(match e {
        Expr::Int(s, _) => Lin::Number(Rational::from_integer(s.parse().expect("lexer yields digits"))),
        Expr::Name(id) => Lin::Element(space.basis(&id.name).map_err(|_| {
            FrontendError::new(
                ErrorCode::UnknownName,
                id.span,
                format!("`{}` is not a basis label (labels: {})", id.name, space.labels().join(", ")),
            )
        })?),
        Expr::Neg(inner, _) => match lin_eval(space, inner)? {
            Lin::Number(c) => Lin::Number(-c),
            Lin::Element(x) => Lin::Element(-&x),
        },
        Expr::Pow(base, k, _) => match lin_eval(space, base)? {
            Lin::Number(c) => {
                if c.is_zero() && *k < 0 {
                    return err(ErrorCode::InvalidValue, span, "division by zero");
                }
                let k = i32::try_from(*k)
                    .map_err(|_| FrontendError::new(ErrorCode::InvalidValue, span, "exponent too large"))?;
                Lin::Number(num_traits::pow::Pow::pow(&c, k))
            }
            Lin::Element(_) => return err(ErrorCode::TypeError, span, "`**` applies to numbers only here"),
        },
        Expr::Bin(op, a, b, _) => {
            let (x, y) = (lin_eval(space, a)?, lin_eval(space, b)?);
            match (op, x, y) {
                (BinOp::Add, Lin::Number(p), Lin::Number(q)) => Lin::Number(p + q),
                (BinOp::Sub, Lin::Number(p), Lin::Number(q)) => Lin::Number(p - q),
                (BinOp::Add | BinOp::Sub, x, y) => {
                    let x = x.into_element(space, a.span())?;
                    let mut y = y.into_element(space, b.span())?;
                    if *op == BinOp::Sub {
                        y = -&y;
                    }
                    Lin::Element(
                        x.try_add(&y).map_err(|e| FrontendError::new(ErrorCode::TypeError, span, e.to_string()))?,
                    )
                }
                (BinOp::Mul, Lin::Number(p), Lin::Number(q)) => Lin::Number(p * q),
                (BinOp::Mul, Lin::Number(p), Lin::Element(x)) | (BinOp::Mul, Lin::Element(x), Lin::Number(p)) => {
                    Lin::Element(x.scale(&p))
                }
                (BinOp::Div, x, Lin::Number(q)) => {
                    if q.is_zero() {
                        return err(ErrorCode::InvalidValue, b.span(), "division by zero");
                    }
                    let inv = Rational::one() / q;
                    match x {
                        Lin::Number(p) => Lin::Number(p * inv),
                        Lin::Element(x) => Lin::Element(x.scale(&inv)),
                    }
                }
                _ => {
                    return err(
                        ErrorCode::TypeError,
                        span,
                        format!("`{}` is not available between algebra elements", op.symbol()),
                    )
                }
            }
        }
        Expr::D(..) | Expr::Field(_) => {
            return err(ErrorCode::TypeError, span, "expected a combination of basis labels")
        }
    })
}

/// A rational constant such as `-1/2`.
fn rational_eval(e: &Expr) -> Result<Rational> {
    let space = GradedSpace::new([("", 0)]).expect("one label");
    match lin_eval(&space, e) {
        Ok(Lin::Number(c)) => Ok(c),
        _ => err(ErrorCode::TypeError, e.span(), "expected a rational number"),
    }
}
