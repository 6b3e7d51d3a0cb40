//! Batch command-line front end for `lacunary-core`.
//!
//! [`run`] executes one invocation in-process and returns the exit code and
//! both output streams; the binary is a thin wrapper around it. Exit codes:
//! 0 success, 1 domain error (an error document is printed on stdout), 2
//! usage error.

mod args;
mod commands;
pub mod dto;
pub mod par;
pub mod tables_data;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use lacunary_core::parser::ParseError;

pub use args::Format;
use dto::{schema, ErrorJson, SpanJson};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum CliError {
    /// Malformed input text, with the source for the caret diagnostic.
    Parse { what: String, src: String, error: ParseError },
    /// `kind` is `domain`, `bound` or `io`.
    Domain { kind: &'static str, message: String },
    /// Flag combinations the argument parser cannot express; exit code 2.
    Usage(String),
}

impl CliError {
    pub(crate) fn domain(message: impl ToString) -> Self {
        CliError::Domain { kind: "domain", message: message.to_string() }
    }

    pub(crate) fn bound(message: impl ToString) -> Self {
        CliError::Domain { kind: "bound", message: message.to_string() }
    }

    pub(crate) fn io(message: impl ToString) -> Self {
        CliError::Domain { kind: "io", message: message.to_string() }
    }

    pub(crate) fn usage(message: impl ToString) -> Self {
        CliError::Usage(message.to_string())
    }

    fn document(&self) -> ErrorJson {
        match self {
            CliError::Parse { what, error, .. } => ErrorJson {
                schema: schema("error"),
                kind: "parse".into(),
                message: format!("{what}: {}", error.message),
                span: Some(SpanJson { start: error.span.start, end: error.span.end }),
                expected: error.expected.clone(),
            },
            CliError::Usage(message) => ErrorJson {
                schema: schema("error"),
                kind: "usage".into(),
                message: message.clone(),
                span: None,
                expected: Vec::new(),
            },
            CliError::Domain { kind, message } => ErrorJson {
                schema: schema("error"),
                kind: (*kind).into(),
                message: message.clone(),
                span: None,
                expected: Vec::new(),
            },
        }
    }

    fn human(&self) -> String {
        match self {
            CliError::Parse { what, src, error } => {
                format!("error: cannot parse {what}: {}\n{}\n", error.message, error.annotate(src))
            }
            CliError::Domain { message, .. } => format!("error: {message}\n"),
            CliError::Usage(message) => format!("error: {message}\n\nFor more information, try '--help'.\n"),
        }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let threads = cli.threads.map(|t| t as usize).unwrap_or_else(default_threads);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match pool.install(|| commands::dispatch(&cli.command, cli.format, threads)) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e @ CliError::Usage(_)) => Outcome { code: 2, stdout: String::new(), stderr: e.human() },
        Err(e) => {
            let doc = serde_json::to_string(&e.document()).expect("error document serializes");
            Outcome { code: 1, stdout: doc + "\n", stderr: e.human() }
        }
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
