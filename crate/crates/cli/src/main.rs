//! `zreg`: every library operation as a subcommand, with text, CSV or JSON
//! output. Each output embeds the resolved config it was computed from, and
//! `--check FILE` recomputes a JSON output from that config.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{CliError, Context, CACHE_ENV};
use output::{diff_paths, render, Envelope, Report, RunConfig};

fn main() -> ExitCode {
    let code = run_args(
        std::env::args_os(),
        std::env::var_os(CACHE_ENV),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}

/// Parses `args`, runs, and returns the process exit code.
pub fn run_args<I, T>(args: I, cache_dir: Option<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match run(cli, cache_dir, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "zreg: {e}");
            e.exit_code()
        }
    }
}

fn tool() -> String {
    format!("zreg {}", env!("CARGO_PKG_VERSION"))
}

fn run(cli: Cli, cache_dir: Option<OsString>, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = match cli.threads {
        Some(k) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(k as usize)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?,
        ),
        None => None,
    };
    let execute = |cmd: &args::Command, ctx: &Context| -> Result<Report, CliError> {
        match &pool {
            Some(p) => p.install(|| commands::execute(cmd, ctx)),
            None => commands::execute(cmd, ctx),
        }
    };
    match (cli.check, cli.command) {
        (Some(path), None) => {
            let text = fs::read_to_string(&path).map_err(|e| with_path(e, &path))?;
            let saved: Envelope = serde_json::from_str(&text)
                .map_err(|e| zreg::Error::Format(format!("{}: {e}", path.display())))?;
            let ctx = Context {
                prime_cache: saved.config.prime_cache.as_ref().map(PathBuf::from),
            };
            let fresh = execute(&saved.config.command, &ctx)?;
            let diffs = diff_paths(&saved.result, &fresh.result, 20);
            if !diffs.is_empty() {
                return Err(CliError::Mismatch(diffs.join("\n")));
            }
            let note = if saved.config.tool == tool() {
                String::new()
            } else {
                format!(" (written by {})", saved.config.tool)
            };
            let msg = format!(
                "check passed: {} result recomputed identically{note}\n",
                saved.config.command.name()
            );
            emit(&msg, cli.output.as_deref(), out)
        }
        (None, Some(cmd)) => {
            let ctx = Context::resolve(cli.prime_cache, cache_dir.as_deref());
            let command = commands::resolve(cmd, cache_dir.as_deref());
            let config = RunConfig {
                tool: tool(),
                prime_cache: ctx.prime_cache.as_ref().map(|p| p.display().to_string()),
                command,
            };
            let report = execute(&config.command, &ctx)?;
            emit(&render(cli.format, &config, &report), cli.output.as_deref(), out)
        }
        (Some(_), Some(_)) => Err(CliError::Usage("--check replays a saved config and takes no subcommand".into())),
        (None, None) => Err(CliError::Usage("missing subcommand, see --help".into())),
    }
}

fn with_path(e: io::Error, path: &Path) -> io::Error {
    io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| with_path(e, p))?,
        None => {
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
