//! Tokens of the input language. Keywords are ordinary identifiers; the
//! parser decides by position. Identifiers may contain dots (`a.x`) so that
//! product-chart variables can be written directly.

use std::fmt;

use crate::error::{ErrorCode, FrontendError, Result, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned decimal integer, kept as text so it has no size limit.
    Int(String),
    Semi,
    Comma,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Caret,
    At,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Int(s) => return write!(f, "`{s}`"),
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::StarStar => "**",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::At => "@",
            Tok::Arrow => "->",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let byte = |k: usize| chars.get(k).map(|&(b, _)| b).unwrap_or(src.len());
    while i < chars.len() {
        let c = chars[i].1;
        let start = byte(i);
        let (l0, c0) = (line, col);
        let span_to = |k: usize| Span { line: l0, col: c0, start, end: byte(k) };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let mut j = i + 1;
        let tok = if ident_start(c) {
            loop {
                while j < chars.len() && ident_continue(chars[j].1) {
                    j += 1;
                }
                // a dot continues the identifier only when a segment follows
                if j + 1 < chars.len() && chars[j].1 == '.' && ident_start(chars[j + 1].1) {
                    j += 1;
                } else {
                    break;
                }
            }
            Tok::Ident(src[start..byte(j)].to_string())
        } else if c.is_ascii_digit() {
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            Tok::Int(src[start..byte(j)].to_string())
        } else {
            let next = chars.get(i + 1).map(|&(_, c)| c);
            match (c, next) {
                ('*', Some('*')) => {
                    j += 1;
                    Tok::StarStar
                }
                ('-', Some('>')) => {
                    j += 1;
                    Tok::Arrow
                }
                (';', _) => Tok::Semi,
                (',', _) => Tok::Comma,
                (':', _) => Tok::Colon,
                ('(', _) => Tok::LParen,
                (')', _) => Tok::RParen,
                ('{', _) => Tok::LBrace,
                ('}', _) => Tok::RBrace,
                ('[', _) => Tok::LBracket,
                (']', _) => Tok::RBracket,
                ('=', _) => Tok::Eq,
                ('+', _) => Tok::Plus,
                ('-', _) => Tok::Minus,
                ('*', _) => Tok::Star,
                ('/', _) => Tok::Slash,
                ('^', _) => Tok::Caret,
                ('@', _) => Tok::At,
                _ => {
                    return Err(FrontendError::new(
                        ErrorCode::Syntax,
                        span_to(i + 1),
                        format!("unexpected character `{c}`"),
                    ));
                }
            }
        };
        out.push(Token { tok, span: span_to(j) });
        col += j - i;
        i = j;
    }
    let end = Span { line, col, start: src.len(), end: src.len() };
    out.push(Token { tok: Tok::Eof, span: end });
    Ok(out)
}
