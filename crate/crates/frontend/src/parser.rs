//! Recursive-descent parser. Expression precedence, loosest first:
//! `+ -`, `* /`, unary `-`, `^`, `**`.

use crate::ast::*;
use crate::error::{ErrorCode, FrontendError, Result, Span};
use crate::lexer::{tokenize, Tok, Token};

pub fn parse(src: &str) -> Result<Program> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Program { statements })
}

/// Parses a single expression, e.g. a printed form.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of expression")?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, what: &str) -> Result<T> {
        let t = &self.tokens[self.pos];
        Err(FrontendError::new(ErrorCode::Syntax, t.span, format!("expected {what}, found {}", t.tok)))
    }

    fn eat(&mut self, t: Tok) -> bool {
        if *self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Span> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            self.error(what)
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => Ok(Ident { name, span: self.bump().span }),
            _ => self.error(what),
        }
    }

    /// `a-b-c` written without spaces, as used by check kinds and options.
    fn hyphenated(&mut self, what: &str) -> Result<Ident> {
        let mut id = self.ident(what)?;
        while self.peek() == &Tok::Minus && self.span().start == id.span.end {
            let next = &self.tokens[self.pos + 1];
            match &next.tok {
                Tok::Ident(s) if next.span.start == self.span().end => {
                    id.name = format!("{}-{s}", id.name);
                    id.span = id.span.to(next.span);
                    self.pos += 2;
                }
                _ => break,
            }
        }
        Ok(id)
    }

    fn uint(&mut self, what: &str) -> Result<(u64, Span)> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let span = self.bump().span;
                let v = s.parse().map_err(|_| {
                    FrontendError::new(ErrorCode::InvalidValue, span, format!("integer `{s}` is too large"))
                })?;
                Ok((v, span))
            }
            _ => self.error(what),
        }
    }

    fn signed_int(&mut self, what: &str) -> Result<(i64, Span)> {
        let start = self.span();
        let neg = self.eat(Tok::Minus);
        let (v, span) = self.uint(what)?;
        let v = i64::try_from(v).map_err(|_| FrontendError::new(ErrorCode::InvalidValue, span, "integer too large"))?;
        Ok((if neg { -v } else { v }, start.to(span)))
    }

    fn ident_list(&mut self, what: &str) -> Result<Vec<Ident>> {
        let mut out = vec![self.ident(what)?];
        while self.eat(Tok::Comma) {
            out.push(self.ident(what)?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Stmt> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error("a declaration or `check`"),
        };
        let stmt = match kw.as_str() {
            "chart" => {
                self.bump();
                let name = self.ident("chart name")?;
                self.expect(Tok::LParen, "`(`")?;
                let vars = self.ident_list("variable name")?;
                self.expect(Tok::RParen, "`)`")?;
                Stmt::Chart { name, vars }
            }
            "scalar" | "form" | "vector" => {
                self.bump();
                let kind = match kw.as_str() {
                    "scalar" => ValueKind::Scalar,
                    "form" => ValueKind::Form,
                    _ => ValueKind::Vector,
                };
                let name = self.ident("name")?;
                self.keyword("on")?;
                let on = self.ident("chart or manifold name")?;
                self.expect(Tok::Eq, "`=`")?;
                let expr = self.expr()?;
                Stmt::Value { kind, name, on, expr }
            }
            "plectic" => self.plectic()?,
            "product" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                self.expect(Tok::LParen, "`(`")?;
                let a = self.ident("manifold name")?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.ident("manifold name")?;
                self.expect(Tok::RParen, "`)`")?;
                Stmt::Product { name, a, b }
            }
            "liealg" => self.liealg()?,
            "linfty" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                self.keyword("space")?;
                self.expect(Tok::LBrace, "`{`")?;
                let mut space = Vec::new();
                if self.peek() != &Tok::RBrace {
                    loop {
                        let label = self.ident("basis label")?;
                        self.expect(Tok::Colon, "`:`")?;
                        let (degree, _) = self.signed_int("degree")?;
                        space.push(SpaceEntry { label, degree });
                        if !self.eat(Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                let brackets = if self.at_keyword("brackets") {
                    self.bump();
                    self.components("l")?
                } else {
                    Vec::new()
                };
                Stmt::LInfty { name, space, brackets }
            }
            "map" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                let source = self.ident("source name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let target = self.ident("target name")?;
                let images = self.assignments()?;
                Stmt::Map { name, source, target, images }
            }
            "lmorph" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                let source = self.ident("Lie algebra name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let target = self.ident("target name")?;
                let components = self.components("f")?;
                Stmt::LMorph { name, source, target, components }
            }
            "action" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                let algebra = self.ident("Lie algebra name")?;
                self.keyword("on")?;
                let manifold = self.ident("manifold name")?;
                self.keyword("via")?;
                let fields = self.assignments()?;
                let anti = if self.at_keyword("anti") {
                    self.bump();
                    true
                } else {
                    false
                };
                Stmt::Action { name, algebra, manifold, fields, anti }
            }
            "moment" => {
                self.bump();
                let name = self.ident("name")?;
                self.expect(Tok::Eq, "`=`")?;
                self.keyword("for")?;
                let action = self.ident("action name")?;
                self.keyword("with")?;
                let components = self.components("f")?;
                Stmt::Moment { name, action, components }
            }
            "check" => Stmt::Check(self.directive()?),
            _ => return self.error("a declaration or `check`"),
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok(stmt)
    }

    fn plectic(&mut self) -> Result<Stmt> {
        self.bump();
        let name = self.ident("name")?;
        self.expect(Tok::Eq, "`=`")?;
        self.expect(Tok::LParen, "`(`")?;
        let chart = self.ident("chart name")?;
        self.expect(Tok::Comma, "`,`")?;
        let form = self.expr()?;
        self.expect(Tok::Comma, "`,`")?;
        self.keyword("n")?;
        self.expect(Tok::Eq, "`=`")?;
        let (n, _) = self.uint("n")?;
        self.expect(Tok::RParen, "`)`")?;
        let mut samples = Vec::new();
        if self.at_keyword("samples") {
            self.bump();
            loop {
                self.expect(Tok::LBrace, "`{`")?;
                let mut point = Vec::new();
                if self.peek() != &Tok::RBrace {
                    loop {
                        let target = self.ident("variable name")?;
                        self.expect(Tok::Colon, "`:`")?;
                        point.push(Assignment { target, value: self.expr()? });
                        if !self.eat(Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                samples.push(point);
                if !self.eat(Tok::Comma) {
                    break;
                }
            }
        }
        Ok(Stmt::Plectic { name, chart, form, n: n as usize, samples })
    }

    fn liealg(&mut self) -> Result<Stmt> {
        self.bump();
        let name = self.ident("name")?;
        self.expect(Tok::Eq, "`=`")?;
        self.keyword("basis")?;
        self.expect(Tok::LParen, "`(`")?;
        let basis = self.ident_list("basis label")?;
        self.expect(Tok::RParen, "`)`")?;
        let mut brackets = Vec::new();
        if self.at_keyword("brackets") {
            self.bump();
            self.expect(Tok::LBrace, "`{`")?;
            while self.eat(Tok::LBracket) {
                let left = self.ident("basis label")?;
                self.expect(Tok::Comma, "`,`")?;
                let right = self.ident("basis label")?;
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::Eq, "`=`")?;
                let value = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                brackets.push(LieBracket { left, right, value });
            }
            self.expect(Tok::RBrace, "`[` or `}`")?;
        }
        Ok(Stmt::LieAlg { name, basis, brackets })
    }

    /// `{ x -> e; … }`
    fn assignments(&mut self) -> Result<Vec<Assignment>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let target = self.ident("label")?;
            self.expect(Tok::Arrow, "`->`")?;
            let value = self.expr()?;
            self.expect(Tok::Semi, "`;`")?;
            out.push(Assignment { target, value });
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(out)
    }

    /// `{ p2(a, b) = e; … }` where `p` is `prefix`.
    fn components(&mut self, prefix: &str) -> Result<Vec<Component>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let head = self.ident("component")?;
            let index = head
                .name
                .strip_prefix(prefix)
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&k| k > 0 && head.name == format!("{prefix}{k}"))
                .ok_or_else(|| {
                    FrontendError::new(
                        ErrorCode::Syntax,
                        head.span,
                        format!("expected `{prefix}1`, `{prefix}2`, …, found `{}`", head.name),
                    )
                })?;
            self.expect(Tok::LParen, "`(`")?;
            let args = self.ident_list("basis label")?;
            self.expect(Tok::RParen, "`)`")?;
            self.expect(Tok::Eq, "`=`")?;
            let value = self.expr()?;
            self.expect(Tok::Semi, "`;`")?;
            out.push(Component { prefix: prefix.to_string(), index, head_span: head.span, args, value });
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(out)
    }

    fn directive(&mut self) -> Result<Directive> {
        let start = self.keyword("check")?;
        let kind = self.hyphenated("check kind")?;
        let mut targets = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            targets.push(self.ident("name")?);
        }
        let mut args = Vec::new();
        if self.eat(Tok::LParen) {
            args.push(self.expr()?);
            while self.eat(Tok::Comma) {
                args.push(self.expr()?);
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
        }
        let expect = if self.eat(Tok::Eq) { Some(self.expr()?) } else { None };
        let mut options = Vec::new();
        if self.eat(Tok::LBracket) {
            loop {
                let name = self.hyphenated("option name")?;
                let value = if self.eat(Tok::Eq) {
                    match self.peek() {
                        Tok::Ident(_) => OptValue::Name(self.ident("option value")?.name),
                        _ => OptValue::Int(self.signed_int("option value")?.0),
                    }
                } else {
                    OptValue::Flag
                };
                options.push(CheckOption { name, value });
                if !self.eat(Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBracket, "`,` or `]`")?;
        }
        let span = start.to(self.prev_span());
        Ok(Directive { kind, targets, args, expect, options, span })
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            let span = lhs.span().to(rhs.span());
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span().to(rhs.span());
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Minus {
            let start = self.bump().span;
            let inner = self.unary()?;
            let span = start.to(inner.span());
            return Ok(Expr::Neg(Box::new(inner), span));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while self.eat(Tok::Caret) {
            let rhs = self.power()?;
            let span = lhs.span().to(rhs.span());
            lhs = Expr::Bin(BinOp::Wedge, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat(Tok::StarStar) {
            let (k, span) = self.signed_int("integer exponent")?;
            let span = base.span().to(span);
            base = Expr::Pow(Box::new(base), k, span);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(s) => Ok(Expr::Int(s, self.bump().span)),
            Tok::At => {
                let start = self.bump().span;
                let mut id = self.ident("variable name after `@`")?;
                id.span = start.to(id.span);
                Ok(Expr::Field(id))
            }
            Tok::Ident(name) if name == "d" && self.peek_at(1) == &Tok::LParen => {
                let start = self.bump().span;
                self.bump();
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::D(Box::new(inner), start.to(end)))
            }
            Tok::Ident(_) => Ok(Expr::Name(self.ident("name")?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.error("an expression"),
        }
    }
}
