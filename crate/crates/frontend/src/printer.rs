//! Canonical text for syntax trees. `parse(print(p)) == p` for every
//! program the parser can produce.

use std::fmt::Write;

use crate::ast::*;

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_child(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Int(s, _) => out.push_str(s),
        Expr::Name(id) => out.push_str(&id.name),
        Expr::Field(id) => {
            out.push('@');
            out.push_str(&id.name);
        }
        Expr::D(inner, _) => {
            out.push_str("d(");
            write_expr(out, inner);
            out.push(')');
        }
        Expr::Neg(inner, _) => {
            out.push('-');
            write_child(out, inner, inner.precedence() < PREC_UNARY);
        }
        Expr::Bin(op, a, b, _) => {
            let p = op.precedence();
            write_child(out, a, a.precedence() < p);
            let _ = write!(out, " {} ", op.symbol());
            write_child(out, b, b.precedence() <= p);
        }
        Expr::Pow(base, k, _) => {
            write_child(out, base, base.precedence() < PREC_ATOM);
            let _ = write!(out, "**{k}");
        }
    }
}

fn names(ids: &[Ident]) -> String {
    ids.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(", ")
}

fn components(cs: &[Component]) -> String {
    if cs.is_empty() {
        return "{ }".into();
    }
    let body: Vec<String> =
        cs.iter().map(|c| format!("{}{}({}) = {};", c.prefix, c.index, names(&c.args), print_expr(&c.value))).collect();
    format!("{{ {} }}", body.join(" "))
}

fn assignments(xs: &[Assignment]) -> String {
    if xs.is_empty() {
        return "{ }".into();
    }
    let body: Vec<String> = xs.iter().map(|a| format!("{} -> {};", a.target.name, print_expr(&a.value))).collect();
    format!("{{ {} }}", body.join(" "))
}

pub fn print_directive(d: &Directive) -> String {
    let mut s = format!("check {}", d.kind.name);
    for t in &d.targets {
        s.push(' ');
        s.push_str(&t.name);
    }
    if !d.args.is_empty() {
        let args: Vec<String> = d.args.iter().map(print_expr).collect();
        let _ = write!(s, " ({})", args.join(", "));
    }
    if let Some(e) = &d.expect {
        let _ = write!(s, " = {}", print_expr(e));
    }
    if !d.options.is_empty() {
        let opts: Vec<String> = d
            .options
            .iter()
            .map(|o| match &o.value {
                OptValue::Flag => o.name.name.clone(),
                OptValue::Int(k) => format!("{}={k}", o.name.name),
                OptValue::Name(v) => format!("{}={v}", o.name.name),
            })
            .collect();
        let _ = write!(s, " [{}]", opts.join(", "));
    }
    s.push(';');
    s
}

pub fn print_stmt(st: &Stmt) -> String {
    match st {
        Stmt::Chart { name, vars } => format!("chart {} ({});", name.name, names(vars)),
        Stmt::Value { kind, name, on, expr } => {
            format!("{} {} on {} = {};", kind.keyword(), name.name, on.name, print_expr(expr))
        }
        Stmt::Plectic { name, chart, form, n, samples } => {
            let mut s = format!("plectic {} = ({}, {}, n={n})", name.name, chart.name, print_expr(form));
            if !samples.is_empty() {
                let pts: Vec<String> = samples
                    .iter()
                    .map(|p| {
                        let kv: Vec<String> =
                            p.iter().map(|a| format!("{}: {}", a.target.name, print_expr(&a.value))).collect();
                        format!("{{{}}}", kv.join(", "))
                    })
                    .collect();
                let _ = write!(s, " samples {}", pts.join(", "));
            }
            s.push(';');
            s
        }
        Stmt::Product { name, a, b } => format!("product {} = ({}, {});", name.name, a.name, b.name),
        Stmt::LieAlg { name, basis, brackets } => {
            let mut s = format!("liealg {} = basis({})", name.name, names(basis));
            if !brackets.is_empty() {
                let body: Vec<String> = brackets
                    .iter()
                    .map(|b| format!("[{}, {}] = {};", b.left.name, b.right.name, print_expr(&b.value)))
                    .collect();
                let _ = write!(s, " brackets {{ {} }}", body.join(" "));
            }
            s.push(';');
            s
        }
        Stmt::LInfty { name, space, brackets } => {
            let sp: Vec<String> = space.iter().map(|e| format!("{}: {}", e.label.name, e.degree)).collect();
            let mut s = format!("linfty {} = space {{ {} }}", name.name, sp.join(", "));
            if !brackets.is_empty() {
                let _ = write!(s, " brackets {}", components(brackets));
            }
            s.push(';');
            s
        }
        Stmt::Map { name, source, target, images } => {
            format!("map {} = {} -> {} {};", name.name, source.name, target.name, assignments(images))
        }
        Stmt::LMorph { name, source, target, components: cs } => {
            format!("lmorph {} = {} -> {} {};", name.name, source.name, target.name, components(cs))
        }
        Stmt::Action { name, algebra, manifold, fields, anti } => format!(
            "action {} = {} on {} via {}{};",
            name.name,
            algebra.name,
            manifold.name,
            assignments(fields),
            if *anti { " anti" } else { "" }
        ),
        Stmt::Moment { name, action, components: cs } => {
            format!("moment {} = for {} with {};", name.name, action.name, components(cs))
        }
        Stmt::Check(d) => print_directive(d),
    }
}

/// One statement per line.
pub fn print_program(p: &Program) -> String {
    let mut s = String::new();
    for st in &p.statements {
        s.push_str(&print_stmt(st));
        s.push('\n');
    }
    s
}
