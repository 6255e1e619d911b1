use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use multisym_frontend::runner::{format_directive, format_summary, RunOptions};
use multisym_frontend::{check_source, error::FrontendError, parser, printer};

/// Exact verification of identities in multisymplectic geometry.
#[derive(Parser)]
#[command(name = "multisym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every `check` directive in a file.
    Check {
        file: PathBuf,
        /// Emit the JSON report instead of text.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per directive.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        max_arity: Option<usize>,
        /// Longest word for coderivation checks.
        #[arg(long)]
        word_max: Option<usize>,
        /// Try one global sign per component arity before reporting failure.
        #[arg(long)]
        sign_audit: bool,
    },
    /// Print a file in canonical form.
    Print { file: PathBuf },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn report_error(path: &Path, src: &str, e: &FrontendError) -> ExitCode {
    eprintln!("{}:{}", path.display(), e.render(src));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Print { file } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match parser::parse(&src) {
                Ok(p) => {
                    print!("{}", printer::print_program(&p));
                    ExitCode::SUCCESS
                }
                Err(e) => report_error(&file, &src, &e),
            }
        }
        Command::Check { file, json, seed, samples, max_arity, word_max, sign_audit } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let opts = RunOptions { seed, samples, max_arity, word_max, sign_audit };
            let streamed = |d: &_| {
                if !json {
                    print!("{}", format_directive(d));
                }
            };
            match check_source(&src, &opts, streamed) {
                Ok(report) => {
                    if json {
                        print!("{}", report.to_json());
                    } else {
                        println!("{}", format_summary(&report.summary));
                    }
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => report_error(&file, &src, &e),
            }
        }
    }
}
