use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;

/// A failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    /// User or input error.
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    /// Nothing usable left to report on.
    pub fn no_data(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn exit(self) -> ExitCode {
        eprintln!("error: {}", self.message);
        ExitCode::from(self.code)
    }
}

impl From<ovlstat::Error> for Failure {
    fn from(e: ovlstat::Error) -> Self {
        Failure::input(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a [String],
    pub seed: Option<u64>,
    pub payload: T,
    /// Wall time, only when `--timing` is passed so outputs stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a [String], seed: Option<u64>, payload: T) -> Self {
        Self {
            tool: "ovlstat",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            payload,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Failure::input(format!("cannot serialize output: {e}")))
    }
}

/// Invocation details shared by every subcommand.
pub struct Context<'a> {
    pub argv: &'a [String],
    pub started: Option<Instant>,
}

impl<'a> Context<'a> {
    pub fn envelope<T: Serialize>(&self, seed: Option<u64>, payload: T) -> Envelope<'a, T> {
        let mut env = Envelope::new(self.argv, seed, payload);
        env.timing_ms = self.started.map(|t| t.elapsed().as_secs_f64() * 1e3);
        env
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    let result = match path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(bytes)),
        None => io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| match path {
        Some(p) => Failure::input(format!("cannot write {}: {e}", p.display())),
        None => Failure::input(format!("cannot write to stdout: {e}")),
    })
}
