use std::fmt;

use serde::Serialize;

/// Source location of a token or construct. Spans never take part in
/// equality, so syntax trees compare structurally.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub col: usize,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl Span {
    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        if other.start < self.start {
            return other.to(self);
        }
        Span { line: self.line, col: self.col, start: self.start, end: self.end.max(other.end) }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Machine-readable error class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    Syntax,
    UnknownName,
    DuplicateName,
    ChartMismatch,
    DegreeError,
    TypeError,
    InvalidValue,
    Arity,
    Runtime,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Syntax => "syntax",
            ErrorCode::UnknownName => "unknown-name",
            ErrorCode::DuplicateName => "duplicate-name",
            ErrorCode::ChartMismatch => "chart-mismatch",
            ErrorCode::DegreeError => "degree-error",
            ErrorCode::TypeError => "type-error",
            ErrorCode::InvalidValue => "invalid-value",
            ErrorCode::Arity => "arity",
            ErrorCode::Runtime => "runtime",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {code}: {message}")]
pub struct FrontendError {
    pub code: ErrorCode,
    pub message: String,
    pub span: Span,
}

impl FrontendError {
    pub fn new(code: ErrorCode, span: Span, message: impl Into<String>) -> Self {
        FrontendError { code, message: message.into(), span }
    }

    /// The offending source line with a caret under the span.
    pub fn render(&self, source: &str) -> String {
        let line = source.lines().nth(self.span.line.saturating_sub(1)).unwrap_or("");
        let width = source.get(self.span.start..self.span.end).map(|s| s.chars().count()).unwrap_or(1).max(1);
        let pad = " ".repeat(self.span.col.saturating_sub(1));
        format!("{self}\n  {line}\n  {pad}{}", "^".repeat(width))
    }
}

pub type Result<T> = std::result::Result<T, FrontendError>;
