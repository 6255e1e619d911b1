//! Executes the directives of an elaborated document and collects one row
//! per evaluated identity instance.
//!
//! Directives are prepared (argument types and degrees checked) before any
//! of them runs, so a malformed file fails as a whole with a validation
//! error instead of producing partial output. Failures of the mathematics
//! itself are rows with status `fail`; errors raised by the engine while
//! running are rows with status `error`.

use serde::Serialize;

use multisym::exterior::identities::cartan_suite;
use multisym::exterior::{Chart, DifferentialForm, MultivectorField};
use multisym::graded::Sign;
use multisym::linfty::{
    check_generalized_jacobi, check_l1_condition, check_liealg_morphism, check_strict_morphism, jacobiator,
    l1_residual, ordered_tuples, FiniteLInfty, Symmetry,
};
use multisym::moment::SignChoice;
use multisym::moment::{
    audit_moment, check_action, check_moment, product_moment, restrict_to_diagonal, symplectic_h, FunctionPair,
    MomentCandidate, ProductPlectic,
};
use multisym::plectic::{generic_kernel, PlecticManifold};
use multisym::report::{Report, Residual};
use multisym::sample::Sampler;

use crate::elab::{Check, Document, Geo, MomentDecl, Value};
use crate::error::{ErrorCode, FrontendError, Result, Span};

/// Defaults applied to every directive; per-directive options win.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub max_arity: Option<usize>,
    pub word_max: Option<usize>,
    pub sign_audit: bool,
}

const DEFAULT_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    /// `directive:row`, both 1-based.
    pub id: String,
    pub directive: usize,
    pub check: String,
    pub status: Status,
    pub arity: usize,
    pub tuple: Vec<String>,
    pub condition: String,
    /// Printed residual; `0` on a pass.
    pub residual: String,
    pub residual_nonzero: bool,
    /// Supporting evidence, such as the Hamiltonian field that was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<ErrorCode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectiveResult {
    pub index: usize,
    pub text: String,
    pub line: usize,
    pub seed: u64,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub seed: u64,
    pub directives: Vec<DirectiveResult>,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Rows of directive `index` (1-based).
    pub fn rows_of(&self, index: usize) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.directive == index)
    }
}

/// Text form of one directive: a header, its notes, then one line per row.
pub fn format_directive(d: &DirectiveResult) -> String {
    let mut out = format!("== {} (line {}) {}\n", d.index, d.line, d.text);
    for n in &d.notes {
        out.push_str(&format!("   note: {n}\n"));
    }
    for r in &d.rows {
        out.push_str(&format_row(r));
        out.push('\n');
    }
    out
}

pub fn format_row(r: &Row) -> String {
    let mut s = format!(
        "{:<6} {:<5} {} [{}] k={} ({}): {}",
        r.id,
        r.status.as_str(),
        r.check,
        r.condition,
        r.arity,
        r.tuple.join(", "),
        r.residual
    );
    if let Some(w) = &r.witness {
        s.push_str(&format!("  witness: {w}"));
    }
    if let Some(c) = r.code {
        s.push_str(&format!("  [{}]", c.as_str()));
    }
    s
}

pub fn format_summary(s: &Summary) -> String {
    format!("summary: {} rows, {} pass, {} fail, {} error", s.rows, s.pass, s.fail, s.error)
}

/// A directive with its arguments checked against its kind.
enum Job {
    Cartan(Chart),
    Closed(DifferentialForm),
    Nondegenerate(DifferentialForm),
    Hamiltonian { m: PlecticManifold, alpha: DifferentialForm, expect: Option<MultivectorField> },
    Lift { p: Box<ProductPlectic>, v: MultivectorField },
    Bracket { m: PlecticManifold, pair: Option<(DifferentialForm, DifferentialForm)>, expect: Option<DifferentialForm> },
    Leibniz { m: PlecticManifold, triple: Option<[DifferentialForm; 3]> },
    Jacobiator { m: PlecticManifold, triple: Option<[DifferentialForm; 3]> },
    LieN(PlecticManifold),
    GenJacobi(FiniteLInfty),
    Coderivation(FiniteLInfty),
    Decalage(FiniteLInfty),
    Strict { decl: crate::elab::MapDecl, a1: FiniteLInfty, a2: FiniteLInfty },
    LieMorph(crate::elab::LMorphDecl),
    Action(String),
    Moment(String),
    Diagonal(String),
    Product(Box<ProductPlectic>),
    ProductMoment(String, String),
    HMorphism(PlecticManifold, PlecticManifold),
}

fn bad(code: ErrorCode, span: Span, msg: impl Into<String>) -> FrontendError {
    FrontendError::new(code, span, msg)
}

fn form_of_degree(g: &Geo, degree: usize, span: Span, what: &str) -> Result<DifferentialForm> {
    match g {
        Geo::Form(f) if f.degree() == degree || f.is_zero() => {
            Ok(if f.is_zero() { DifferentialForm::zero(f.chart(), degree) } else { f.clone() })
        }
        g => Err(bad(ErrorCode::DegreeError, span, format!("{what} must be a {degree}-form, found {}", g.describe()))),
    }
}

fn any_form(g: &Geo, span: Span) -> Result<DifferentialForm> {
    match g {
        Geo::Form(f) => Ok(f.clone()),
        g => Err(bad(ErrorCode::TypeError, span, format!("expected a form, found {}", g.describe()))),
    }
}

fn vector_field(g: &Geo, span: Span) -> Result<MultivectorField> {
    match g {
        Geo::Vector(v) if v.degree() == 1 || v.is_zero() => {
            Ok(if v.is_zero() { MultivectorField::zero(v.chart(), 1) } else { v.clone() })
        }
        g => Err(bad(ErrorCode::TypeError, span, format!("expected a vector field, found {}", g.describe()))),
    }
}

fn prepare(doc: &Document, c: &Check) -> Result<Job> {
    let target = |i: usize| doc.get(&c.targets[i]).expect("resolved during elaboration");
    let manifold = |i: usize| target(i).manifold().expect("kind checked").clone();
    let linfty = |i: usize| target(i).linfty().expect("kind checked").clone();
    let span = c.span;
    let hamiltonian_args = |m: &PlecticManifold| -> Result<Vec<DifferentialForm>> {
        c.args.iter().map(|g| form_of_degree(g, m.n() - 1, span, "a Hamiltonian form")).collect()
    };
    let triple = |v: Vec<DifferentialForm>| -> Option<[DifferentialForm; 3]> { v.try_into().ok() };
    Ok(match c.kind.as_str() {
        "cartan" => Job::Cartan(target(0).chart().expect("chart-like").clone()),
        "closed" | "nondegenerate" => {
            let form = match (c.args.first(), target(0).manifold()) {
                (Some(g), _) => any_form(g, span)?,
                (None, Some(m)) => m.omega().clone(),
                (None, None) => {
                    return Err(bad(
                        ErrorCode::Arity,
                        span,
                        format!("`check {}` on a chart needs a form argument", c.kind),
                    ))
                }
            };
            if c.kind == "closed" {
                Job::Closed(form)
            } else {
                if form.degree() == 0 {
                    return Err(bad(ErrorCode::DegreeError, span, "nondegeneracy needs a form of positive degree"));
                }
                Job::Nondegenerate(form)
            }
        }
        "hamiltonian" => {
            let m = manifold(0);
            let alpha = hamiltonian_args(&m)?.remove(0);
            let expect = c.expect.as_ref().map(|g| vector_field(g, span)).transpose()?;
            Job::Hamiltonian { m, alpha, expect }
        }
        "lift" => match target(0) {
            Value::Product(p) => Job::Lift { p: p.clone(), v: vector_field(&c.args[0], span)? },
            _ => unreachable!("kind checked"),
        },
        "bracket" => {
            let m = manifold(0);
            let args = hamiltonian_args(&m)?;
            let expect =
                c.expect.as_ref().map(|g| form_of_degree(g, m.n() - 1, span, "the expected bracket")).transpose()?;
            let pair = (args.len() == 2).then(|| (args[0].clone(), args[1].clone()));
            Job::Bracket { m, pair, expect }
        }
        "leibniz" => {
            let m = manifold(0);
            if m.n() != 1 {
                return Err(bad(
                    ErrorCode::InvalidValue,
                    span,
                    format!("the Leibniz rule is checked for n = 1 only, `{}` has n = {}", c.targets[0], m.n()),
                ));
            }
            let args = hamiltonian_args(&m)?;
            Job::Leibniz { triple: triple(args), m }
        }
        "jacobiator" => {
            let m = manifold(0);
            let args = hamiltonian_args(&m)?;
            Job::Jacobiator { triple: triple(args), m }
        }
        "linfty" => Job::LieN(manifold(0)),
        "gen-jacobi" => Job::GenJacobi(linfty(0)),
        "coderivation" => Job::Coderivation(linfty(0)),
        "decalage" => Job::Decalage(linfty(0)),
        "strict-morphism" => match target(0) {
            Value::Map(d) => {
                let a1 = doc.get(&d.source).and_then(Value::linfty).expect("declared").clone();
                let a2 = doc.get(&d.target).and_then(Value::linfty).expect("declared").clone();
                Job::Strict { decl: d.clone(), a1, a2 }
            }
            _ => unreachable!("kind checked"),
        },
        "liealg-morphism" => match target(0) {
            Value::LMorph(d) => Job::LieMorph(d.clone()),
            _ => unreachable!("kind checked"),
        },
        "action" => Job::Action(c.targets[0].clone()),
        "moment" => Job::Moment(c.targets[0].clone()),
        "diagonal" => Job::Diagonal(c.targets[0].clone()),
        "product" => match target(0) {
            Value::Product(p) => Job::Product(p.clone()),
            _ => unreachable!("kind checked"),
        },
        "product-moment" => Job::ProductMoment(c.targets[0].clone(), c.targets[1].clone()),
        "h-morphism" => {
            let (a, b) = (manifold(0), manifold(1));
            for (name, m) in c.targets.iter().zip([&a, &b]) {
                if m.n() != 1 {
                    return Err(bad(
                        ErrorCode::InvalidValue,
                        span,
                        format!("`check h-morphism` needs symplectic factors, `{name}` has n = {}", m.n()),
                    ));
                }
            }
            Job::HMorphism(a, b)
        }
        k => unreachable!("unknown kind {k} passed elaboration"),
    })
}

/// Validates every directive, then runs them in order. `on_directive` sees
/// each directive's result as soon as it is complete.
pub fn run(doc: &Document, opts: &RunOptions, mut on_directive: impl FnMut(&DirectiveResult)) -> Result<RunReport> {
    let jobs = doc.checks.iter().map(|c| prepare(doc, c)).collect::<Result<Vec<_>>>()?;
    let mut directives = Vec::new();
    let mut rows = Vec::new();
    for (c, job) in doc.checks.iter().zip(jobs) {
        let seed = match c.int_option("seed") {
            Some(s) => s as u64,
            None => opts.seed.wrapping_add(c.number as u64),
        };
        let mut ctx = Ctx { doc, check: c, opts, sampler: Sampler::new(seed), rows: Vec::new(), notes: Vec::new() };
        ctx.execute(job);
        if ctx.rows.is_empty() {
            ctx.notes.push("no instances to check".into());
        }
        let result = DirectiveResult {
            index: c.number,
            text: c.text.clone(),
            line: c.span.line,
            seed,
            notes: ctx.notes,
            rows: ctx.rows,
        };
        on_directive(&result);
        rows.extend(result.rows.iter().cloned());
        directives.push(result);
    }
    let mut summary = Summary { rows: rows.len(), ..Default::default() };
    for r in &rows {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Error => summary.error += 1,
        }
    }
    Ok(RunReport { schema: 1, seed: opts.seed, directives, rows, summary })
}

struct Ctx<'a> {
    doc: &'a Document,
    check: &'a Check,
    opts: &'a RunOptions,
    sampler: Sampler,
    rows: Vec<Row>,
    notes: Vec<String>,
}

/// Engine failure while running a directive.
struct RunError(String);

impl<E: std::fmt::Display> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError(e.to_string())
    }
}

type Run<T> = std::result::Result<T, RunError>;

impl Ctx<'_> {
    fn samples(&self) -> usize {
        self.check.int_option("samples").map(|k| k as usize).or(self.opts.samples).unwrap_or(DEFAULT_SAMPLES)
    }

    fn option(&self, name: &str, global: Option<usize>) -> Option<usize> {
        self.check.int_option(name).map(|k| k as usize).or(global)
    }

    fn sign_audit(&self) -> bool {
        self.check.flag("sign-audit") || self.opts.sign_audit
    }

    fn push(&mut self, r: Residual, witness: Option<String>) {
        let status = if r.nonzero { Status::Fail } else { Status::Pass };
        let id = format!("{}:{}", self.check.number, self.rows.len() + 1);
        self.rows.push(Row {
            id,
            directive: self.check.number,
            check: r.check,
            status,
            arity: r.arity,
            tuple: r.tuple,
            condition: r.condition,
            residual: r.value,
            residual_nonzero: r.nonzero,
            witness,
            code: None,
            span: None,
        });
    }

    fn push_report(&mut self, report: Report) {
        for r in report.rows {
            self.push(r, None);
        }
        self.notes.extend(report.notes);
    }

    fn push_error(&mut self, check: &str, message: String) {
        let id = format!("{}:{}", self.check.number, self.rows.len() + 1);
        self.rows.push(Row {
            id,
            directive: self.check.number,
            check: check.to_string(),
            status: Status::Error,
            arity: 0,
            tuple: Vec::new(),
            condition: "run".into(),
            residual: message,
            residual_nonzero: true,
            witness: None,
            code: Some(ErrorCode::Runtime),
            span: Some(self.check.span),
        });
    }

    fn execute(&mut self, job: Job) {
        let kind = self.check.kind.clone();
        if let Err(RunError(msg)) = self.dispatch(job) {
            self.push_error(&kind, msg);
        }
    }

    fn dispatch(&mut self, job: Job) -> Run<()> {
        match job {
            Job::Cartan(chart) => {
                let count = self.samples();
                let report = cartan_suite(&chart, &mut self.sampler, count);
                self.push_report(report);
            }
            Job::Closed(form) => {
                let d = form.exterior_derivative();
                self.push(row("closed", 1, vec![form.to_string()], "d(form)", &d), None);
            }
            Job::Nondegenerate(form) => {
                let kernel = generic_kernel(&form)?;
                let value = kernel.as_ref().map_or("0".to_string(), |k| k.to_string());
                let r = Residual::new(
                    "nondegenerate",
                    1,
                    vec![form.to_string()],
                    "kernel of v -> i_v form",
                    value,
                    kernel.is_some(),
                );
                self.push(r, None);
            }
            Job::Hamiltonian { m, alpha, expect } => self.hamiltonian(&m, &alpha, expect.as_ref()),
            Job::Lift { p, v } => self.lift(&p, &v)?,
            Job::Bracket { m, pair, expect } => match pair {
                Some((a, b)) => {
                    let br = m.bracket2(&a, &b)?;
                    let tuple = vec![a.to_string(), b.to_string()];
                    match expect {
                        Some(e) => self.push(
                            row("bracket", 2, tuple.clone(), "expected value", &(&br - &e)),
                            Some(br.to_string()),
                        ),
                        None => self.push(
                            Residual::new("bracket", 2, tuple.clone(), "value", "0".into(), false),
                            Some(br.to_string()),
                        ),
                    }
                    self.commutator(&m, &a, &b)?;
                }
                None => {
                    for _ in 0..self.samples() {
                        let (a, b) = (m.random_hamiltonian(&mut self.sampler), m.random_hamiltonian(&mut self.sampler));
                        self.commutator(&m, &a, &b)?;
                    }
                }
            },
            Job::Leibniz { m, triple } => {
                let triples = self.triples(&m, triple);
                for [f, g, h] in triples {
                    let b = |x: &DifferentialForm, y: &DifferentialForm| m.bracket2(x, y);
                    let lhs = b(&f, &g.wedge(&h))?;
                    let rhs = &b(&f, &g)?.wedge(&h) + &g.wedge(&b(&f, &h)?);
                    let tuple = vec![f.to_string(), g.to_string(), h.to_string()];
                    self.push(row("leibniz", 3, tuple, "{f,gh} = {f,g}h + g{f,h}", &(&lhs - &rhs)), None);
                }
            }
            Job::Jacobiator { m, triple } => {
                for [a, b, c] in self.triples(&m, triple) {
                    let j = m.jacobiator_check(&a, &b, &c)?;
                    let tuple = vec![a.to_string(), b.to_string(), c.to_string()];
                    let witness = j.lhs.to_string();
                    self.push(
                        row("jacobiator", 3, tuple, "jacobiator = -d i(v1^v2^v3) omega", &(&j.lhs - &j.rhs)),
                        Some(witness),
                    );
                }
            }
            Job::LieN(m) => {
                let m_max = self.option("max-arity", self.opts.max_arity).unwrap_or(m.n() + 1);
                let count = self.samples();
                let tuples = m.random_tuples(&mut self.sampler, m_max, count);
                let report = m.verify_lie_n_algebra(m_max, &tuples)?;
                self.push_report(report);
            }
            Job::GenJacobi(a) => {
                let m_max = self.option("max-arity", self.opts.max_arity).unwrap_or(a.max_arity() + 1);
                self.push_report(check_generalized_jacobi(&a, m_max));
            }
            Job::Coderivation(a) => {
                let w = self.option("word-max", self.opts.word_max).unwrap_or(a.max_arity() + 1);
                let b = a.decalage();
                let q = b.lift_coderivation(w);
                let (square, coleibniz) = (q.check_square(), q.check_coleibniz());
                self.push_report(square);
                self.push_report(coleibniz);
                self.push_report(check_l1_condition(&b, w));
            }
            Job::Decalage(a) => self.decalage(&a),
            Job::Strict { decl, a1, a2 } => {
                let k = self.option("max-arity", self.opts.max_arity).unwrap_or(a1.max_arity().max(a2.max_arity()));
                self.push_report(check_strict_morphism(&decl.map, &a1, &a2, k)?);
            }
            Job::LieMorph(d) => {
                let g = match self.doc.get(&d.algebra) {
                    Some(Value::LieAlg(g)) => g.clone(),
                    _ => unreachable!("checked during elaboration"),
                };
                let a = self.doc.get(&d.target).and_then(Value::linfty).expect("declared").clone();
                self.push_report(check_liealg_morphism(&g, &d.components, &a)?);
            }
            Job::Action(name) => {
                let decl = match self.doc.get(&name) {
                    Some(Value::Action(a)) => a.clone(),
                    _ => unreachable!("kind checked"),
                };
                let (g, m) = self.action_parts(&decl);
                let tuple = vec![name.clone()];
                match check_action(&m, &g, decl.fields.clone(), decl.convention) {
                    Ok(a) => {
                        let prims: Vec<String> = a.primitives().iter().map(|p| p.to_string()).collect();
                        let r = Residual::new(
                            "action",
                            1,
                            tuple,
                            "preserves omega, Hamiltonian, brackets",
                            "0".into(),
                            false,
                        );
                        self.push(r, Some(format!("primitives: {}", prims.join(", "))));
                    }
                    Err(e) => {
                        let r = Residual::new(
                            "action",
                            1,
                            tuple,
                            "preserves omega, Hamiltonian, brackets",
                            e.to_string(),
                            true,
                        );
                        self.push(r, None);
                    }
                }
            }
            Job::Moment(name) => {
                let f = self.candidate(&name)?;
                self.moment_report(&f)?;
            }
            Job::Diagonal(name) => {
                let f = self.candidate(&name)?;
                let pm = product_moment(&f, &f)?;
                let diag = restrict_to_diagonal(&pm)?;
                self.notes.push(format!("restricted form: {}", diag.manifold().omega()));
                self.moment_report(&diag)?;
            }
            Job::Product(p) => self.product(&p)?,
            Job::ProductMoment(a, b) => {
                let (fa, fb) = (self.candidate(&a)?, self.candidate(&b)?);
                let pm = product_moment(&fa, &fb)?;
                self.notes.push(format!(
                    "product manifold {} with omega = {}",
                    pm.product.manifold().chart().name(),
                    pm.product.manifold().omega()
                ));
                self.moment_report(&pm.candidate)?;
            }
            Job::HMorphism(a, b) => {
                let h = symplectic_h(&a, &b)?;
                let (ca, cb) = (a.chart().clone(), b.chart().clone());
                let mut tuples = Vec::new();
                for _ in 0..self.samples() {
                    for m in 2..=4 {
                        tuples.push(
                            (0..m)
                                .map(|_| {
                                    FunctionPair::new(
                                        self.sampler.function(ca.vars()),
                                        self.sampler.function(cb.vars()),
                                    )
                                })
                                .collect::<Vec<_>>(),
                        );
                    }
                }
                if self.sign_audit() {
                    let audited = h.audit(&tuples)?;
                    self.push_report(audited.report);
                } else {
                    self.push_report(h.check_with(&tuples, &SignChoice::printed(3))?);
                }
            }
        }
        Ok(())
    }

    fn triples(&mut self, m: &PlecticManifold, given: Option<[DifferentialForm; 3]>) -> Vec<[DifferentialForm; 3]> {
        match given {
            Some(t) => vec![t],
            None => {
                (0..self.samples()).map(|_| std::array::from_fn(|_| m.random_hamiltonian(&mut self.sampler))).collect()
            }
        }
    }

    fn hamiltonian(&mut self, m: &PlecticManifold, alpha: &DifferentialForm, expect: Option<&MultivectorField>) {
        let tuple = vec![alpha.to_string()];
        let cond = "i_u omega = -d(alpha)";
        match m.hamiltonian_vf(alpha) {
            Ok(u) => match expect {
                Some(e) => {
                    let diff = &u - e;
                    let r = Residual::new("hamiltonian", 1, tuple, "expected field", diff.to_string(), !diff.is_zero());
                    self.push(r, Some(u.to_string()));
                }
                None => self.push(Residual::new("hamiltonian", 1, tuple, cond, "0".into(), false), Some(u.to_string())),
            },
            Err(e) => {
                let r = Residual::new("hamiltonian", 1, tuple, cond, format!("no solution: {}", e), true);
                self.push(r, None);
            }
        }
    }

    fn lift(&mut self, p: &ProductPlectic, v: &MultivectorField) -> Run<()> {
        let tuple = vec![v.to_string()];
        let cond = "sum of locally Hamiltonian factor fields";
        let value = match p.lift_decomposition(v)? {
            None => "mixes factor variables".to_string(),
            Some((va, vb)) => {
                let ra = p.factor_a().omega().interior(&va)?.exterior_derivative();
                let rb = p.factor_b().omega().interior(&vb)?.exterior_derivative();
                if ra.is_zero() && rb.is_zero() {
                    "0".into()
                } else {
                    format!("a: {ra}; b: {rb}")
                }
            }
        };
        let nonzero = value != "0";
        self.push(Residual::new("lift", 1, tuple, cond, value, nonzero), None);
        Ok(())
    }

    fn commutator(&mut self, m: &PlecticManifold, a: &DifferentialForm, b: &DifferentialForm) -> Run<()> {
        let c = m.commutator_compat(a, b)?;
        let tuple = vec![a.to_string(), b.to_string()];
        self.push(row("commutator", 2, tuple.clone(), "d i(u1^u2) omega + i([u1,u2]) omega", &c.form_defect), None);
        let r = Residual::new(
            "commutator",
            2,
            tuple,
            "pi({a,b}) - [pi a, pi b]",
            c.field_defect.to_string(),
            !c.field_defect.is_zero(),
        );
        self.push(r, None);
        Ok(())
    }

    fn decalage(&mut self, a: &FiniteLInfty) {
        let b = a.decalage();
        let back = b.undecalage();
        let ok = &back == a;
        let r = Residual::new(
            "decalage",
            a.max_arity(),
            vec![],
            "round trip",
            if ok { "0".into() } else { "round trip differs".into() },
            !ok,
        );
        self.push(r, None);
        let s = a.space();
        let k_max = self.option("max-arity", self.opts.max_arity).unwrap_or(a.max_arity() + 1);
        for k in 1..=k_max {
            for idx in ordered_tuples(Symmetry::Skew, s.degrees(), k) {
                let j = jacobiator(a, &idx).relabel(b.space());
                let l1 = l1_residual(&b, &idx);
                let agree = l1 == j || l1 == -&j;
                let labels = idx.iter().map(|&i| s.label(i).to_string()).collect();
                let value = if agree { "0".to_string() } else { format!("{l1} vs {j}") };
                let witness = (!j.is_zero()).then(|| j.to_string());
                self.push(Residual::new("decalage", k, labels, "jacobiator = +-l1 residual", value, !agree), witness);
            }
        }
    }

    fn action_parts(&self, decl: &crate::elab::ActionDecl) -> (multisym::moment::LieAlgebra, PlecticManifold) {
        let g = match self.doc.get(&decl.algebra) {
            Some(Value::LieAlg(g)) => g.clone(),
            _ => unreachable!("checked during elaboration"),
        };
        let m = self.doc.get(&decl.manifold).and_then(Value::manifold).expect("checked during elaboration").clone();
        (g, m)
    }

    /// Validates the action behind moment map `name` and loads its components.
    fn candidate(&self, name: &str) -> Run<MomentCandidate> {
        let decl: &MomentDecl = match self.doc.get(name) {
            Some(Value::Moment(m)) => m,
            _ => unreachable!("kind checked"),
        };
        let action = match self.doc.get(&decl.action) {
            Some(Value::Action(a)) => a,
            _ => unreachable!("checked during elaboration"),
        };
        let (g, m) = self.action_parts(action);
        let a = check_action(&m, &g, action.fields.clone(), action.convention)
            .map_err(|e| RunError(format!("action `{}` is invalid: {e}", decl.action)))?;
        let mut f = MomentCandidate::new(&a);
        for (labels, value) in &decl.components {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            f.set(&refs, value.clone())?;
        }
        Ok(f)
    }

    fn moment_report(&mut self, f: &MomentCandidate) -> Run<()> {
        if self.sign_audit() {
            let audited = audit_moment(f)?;
            self.push_report(audited.report);
        } else {
            self.push_report(check_moment(f)?);
        }
        Ok(())
    }

    fn product(&mut self, p: &ProductPlectic) -> Run<()> {
        let m = p.manifold();
        let omega = m.omega().clone();
        self.push(row("product", 1, vec![omega.to_string()], "closed", &omega.exterior_derivative()), None);
        let kernel = generic_kernel(&omega)?;
        let value = kernel.as_ref().map_or("0".to_string(), |k| k.to_string());
        self.push(Residual::new("product", 1, vec![omega.to_string()], "nondegenerate", value, kernel.is_some()), None);
        let (a, b) = (p.factor_a().clone(), p.factor_b().clone());
        let audit = self.sign_audit();
        let mut flipped = false;
        for _ in 0..self.samples() {
            let (aa, ab) = (a.random_hamiltonian(&mut self.sampler), b.random_hamiltonian(&mut self.sampler));
            let (ba, bb) = (a.random_hamiltonian(&mut self.sampler), b.random_hamiltonian(&mut self.sampler));
            let pair = p.lift_hamiltonian(&aa, &ab)?;
            let defect = &m.omega().interior(&pair.u)? + &pair.alpha.exterior_derivative();
            let tuple = vec![aa.to_string(), ab.to_string()];
            self.push(
                row("product", 1, tuple, "i_(h_X u) omega = -d(h_Omega alpha)", &defect),
                Some(pair.u.to_string()),
            );

            let d = p.h_omega_defect((&aa, &ab), (&ba, &bb))?;
            let tuple = vec![aa.to_string(), ab.to_string(), ba.to_string(), bb.to_string()];
            let printed = &d.lhs - &d.rhs;
            if audit && !printed.is_zero() && d.sign_relation() == Some(Sign::Minus) {
                flipped = true;
                self.push(
                    row("product", 2, tuple, "h_Omega defect, sign flipped", &(&d.lhs + &d.rhs)),
                    Some(d.lhs.to_string()),
                );
            } else {
                self.push(row("product", 2, tuple, "h_Omega defect", &printed), Some(d.lhs.to_string()));
            }

            let (xa, xb) = (a.hamiltonian_vf(&aa)?, b.hamiltonian_vf(&ab)?);
            let (ya, yb) = (a.hamiltonian_vf(&ba)?, b.hamiltonian_vf(&bb)?);
            let hx = p.h_x_bracket_defect((&xa, &xb), (&ya, &yb))?;
            let tuple = vec![xa.to_string(), xb.to_string(), ya.to_string(), yb.to_string()];
            let r = Residual::new("product", 2, tuple, "h_X preserves brackets", hx.to_string(), !hx.is_zero());
            self.push(r, None);
        }
        if flipped {
            self.notes.push("h_Omega defect holds with the opposite global sign on the right-hand side".into());
        }
        Ok(())
    }
}

fn row(check: &str, arity: usize, tuple: Vec<String>, condition: &str, value: &DifferentialForm) -> Residual {
    Residual::new(check, arity, tuple, condition, value.to_string(), !value.is_zero())
}
