//! Command-line front end: JSON fixtures in, JSON results out.

pub mod commands;
pub mod verify;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use quadnorm_core::json::ring_from_json;
use serde_json::{json, Value};
use thiserror::Error;

use crate::verify::{select_laws, VerifyConfig, DEFAULT_CASES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] quadnorm_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
        }
    }

    fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}})
    }
}

#[derive(Debug, Parser)]
#[command(name = "quadnorm", version, about = "Norms of quadratic algebras along free ring extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for the verification harness
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random cases per law
    #[arg(long, global = true, default_value_t = DEFAULT_CASES as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    cases: u64,
    /// A law name, or `all`
    #[arg(long, global = true, default_value = "all")]
    law: String,
    /// Input JSON; read from stdin when absent
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Norm of a based quadratic algebra
    NormQuad,
    /// Norm of a homomorphism of based quadratic algebras
    NormHom,
    /// Composition of two based quadratic algebras
    Star,
    /// Discriminant of a based quadratic algebra
    Disc,
    /// Norm of a descent datum
    GlueNorm,
    /// Run the randomized law checks
    Verify,
    /// Characteristic polynomial of an algebra element
    CharPoly,
    /// Norm form or polarized norm form
    Sn,
}

/// What a run produced: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_fixture(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, CliError> {
    let text = match &cli.fixture {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| quadnorm_core::Error::Parse(e.to_string()).into())
}

fn verify_config(cli: &Cli) -> Result<VerifyConfig, CliError> {
    let mut config = VerifyConfig::new(cli.seed, cli.cases as usize);
    config.laws = select_laws(&cli.law).ok_or_else(|| {
        CliError::Usage(format!("unknown law `{}`; known: all, {}", cli.law, verify::law_names().join(", ")))
    })?;
    if let Some(path) = &cli.fixture {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| quadnorm_core::Error::Parse(e.to_string()))?;
        let bases = v
            .get("bases")
            .and_then(Value::as_array)
            .ok_or_else(|| quadnorm_core::Error::Parse("verify fixture needs a `bases` list".into()))?;
        config.bases = bases.iter().map(ring_from_json).collect::<Result<_, _>>()?;
        if config.bases.is_empty() {
            return Err(CliError::Usage("`bases` is empty".into()));
        }
    }
    Ok(config)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<(Value, i32, String), CliError> {
    if let Command::Verify = cli.command {
        let config = verify_config(cli)?;
        let report = verify::run(&config);
        let timing = report
            .laws
            .iter()
            .zip(&report.timings)
            .map(|(l, t)| format!("{}: {:.1} ms\n", l.name, t.as_secs_f64() * 1e3))
            .collect::<String>();
        let code = if report.all_passed() { 0 } else { 1 };
        let v = serde_json::to_value(&report).expect("report serializes");
        return Ok((v, code, timing));
    }
    let input = read_fixture(cli, stdin)?;
    let out = match cli.command {
        Command::NormQuad => commands::norm_quad_cmd(&input)?,
        Command::NormHom => commands::norm_hom_cmd(&input)?,
        Command::Star => commands::star_cmd(&input)?,
        Command::Disc => commands::disc_cmd(&input)?,
        Command::GlueNorm => commands::glue_norm_cmd(&input)?,
        Command::CharPoly => commands::char_poly_cmd(&input)?,
        Command::Sn => commands::sn_cmd(&input)?,
        Command::Verify => unreachable!(),
    };
    Ok((out, 0, String::new()))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome {
                    code: 2,
                    stdout: render(&CliError::Usage(e.to_string()).to_json()),
                    stderr: String::new(),
                },
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok((v, code, stderr)) => match &cli.out {
            Some(path) => match std::fs::write(path, render(&v)) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr },
                Err(e) => {
                    let err = CliError::Io(format!("cannot write {}: {e}", path.display()));
                    Outcome { code: 2, stdout: render(&err.to_json()), stderr }
                }
            },
            None => Outcome { code, stdout: render(&v), stderr },
        },
        Err(e) => Outcome { code: 2, stdout: render(&e.to_json()), stderr: String::new() },
    }
}
