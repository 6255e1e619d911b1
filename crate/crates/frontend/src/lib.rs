//! Input language for multisym: parsing, elaboration and the check runner
//! behind the `multisym` command.

pub mod ast;
pub mod elab;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod runner;

use runner::{DirectiveResult, RunOptions, RunReport};

/// Parses, elaborates and runs `src`. Parse and validation problems are
/// returned as errors; mathematical failures are rows of the report.
pub fn check_source(
    src: &str,
    opts: &RunOptions,
    on_directive: impl FnMut(&DirectiveResult),
) -> error::Result<RunReport> {
    let doc = elab::elaborate(parser::parse(src)?)?;
    runner::run(&doc, opts, on_directive)
}
