//! Library side of the `bathflow` binary, so the commands can be driven
//! in-process.
//!
//! Exit codes: 0 success, 1 a verification failure in `grassmann-verify`,
//! 2 invalid input, 3 a numerical failure (instability, truncation,
//! no convergence).

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use bathflow_core::Error;
use clap::Parser;

use config::{Cli, CommandKind, RunConfig};

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Structural(_) | Error::Configuration(_) => EXIT_INPUT,
        Error::NumericalInstability(_) | Error::Truncation(_) | Error::Convergence(_) => {
            EXIT_NUMERIC
        }
        Error::Verification(_) => EXIT_VERIFY,
    }
}

pub fn execute(cfg: &RunConfig) -> Result<commands::Outcome, Error> {
    match cfg.command {
        CommandKind::Trace => commands::trace(cfg),
        CommandKind::Transport => commands::transport(cfg),
        CommandKind::Spectrum => commands::spectrum(cfg),
        CommandKind::GrassmannVerify => commands::grassmann_verify(cfg),
    }
}

fn write_file(path: &Path, body: &str) -> std::io::Result<()> {
    std::fs::write(path, body)
}

/// Parses `args` (program name first), runs, writes output, returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let (kind, flags) = cli.command.split();
    let cfg = match RunConfig::resolve(kind, flags) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = write_file(path, &outcome.text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
            if let Some(svg) = &outcome.svg {
                let svg_path = path.with_extension("svg");
                if let Err(e) = write_file(&svg_path, svg) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", svg_path.display());
                    return EXIT_INPUT;
                }
            }
        }
        None => {
            if stdout.write_all(outcome.text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
        }
    }
    outcome.exit
}
