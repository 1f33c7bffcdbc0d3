//! Command-line front end. [`dispatch`] is the whole program; `main` only
//! forwards process arguments and streams.
//!
//! Exit codes: 0 when every verification passed, 1 when a proved inequality
//! failed (the path of a reproduction bundle is printed), 2 for input or
//! usage errors.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use eigperturb::bounds::{bound_report, split_bounds};
use eigperturb::eigenstructure::summarize;
use eigperturb::fuzz::{paper_example_suite, run_fuzz, FuzzConfig};
use eigperturb::matfile::{format_matrix, parse_matrix, ParseError};
use eigperturb::matrix::ExactMatrix;
use serde::Serialize;

use report::{AnalyzeDocument, BoundDocument, ExamplesDocument, FuzzDocument, SplitDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "eigperturb",
    version,
    about = "Exact eigenstructure analysis and perturbation bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for reproduction bundles written on a verification violation.
    #[arg(long, global = true, value_name = "DIR")]
    repro_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenstructure summary of one matrix.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Both eigenvalue-count bounds for C = A + B, with all applicable checks.
    Bound {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Bounds from the Hermitian/skew-Hermitian splitting of a matrix.
    Split {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Randomized verification campaign over generated Jordan structures.
    Fuzz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
        /// Elementary operations in the conjugating matrix [default: 3n].
        #[arg(long)]
        unimodular_ops: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reproduces both worked examples (staircase family and the 5×5 pair).
    Examples {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(eigperturb::Error),
    /// A violation on user-supplied matrices, kept so they can be bundled.
    #[error("{error}")]
    Violation {
        error: eigperturb::Error,
        inputs: Vec<(&'static str, ExactMatrix)>,
    },
}

impl From<eigperturb::Error> for CliError {
    fn from(e: eigperturb::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_matrix(path: &Path) -> CliResult<ExactMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn bundled<T>(res: eigperturb::Result<T>, inputs: &[(&'static str, &ExactMatrix)]) -> CliResult<T> {
    res.map_err(|error| {
        if matches!(error, eigperturb::Error::Violation(_)) {
            CliError::Violation {
                error,
                inputs: inputs.iter().map(|(n, m)| (*n, (*m).clone())).collect(),
            }
        } else {
            CliError::Core(error)
        }
    })
}

fn emit<T: Serialize>(doc: &T, format: Format) -> String {
    match format {
        Format::Text => report::to_text(doc),
        Format::Json => report::to_json(doc),
    }
}

/// Standard output text plus an optional sidecar line for standard error.
struct Output {
    body: String,
    sidecar: Option<String>,
}

impl From<String> for Output {
    fn from(body: String) -> Self {
        Self {
            body,
            sidecar: None,
        }
    }
}

fn run(command: Command) -> CliResult<Output> {
    match command {
        Command::Analyze { file, format } => {
            let m = read_matrix(&file)?;
            let s = bundled(summarize(&m), &[("M", &m)])?;
            let doc = bundled(AnalyzeDocument::build(&m, &s), &[("M", &m)])?;
            Ok(emit(&doc, format).into())
        }
        Command::Bound { a, b, format } => {
            let (ma, mb) = (read_matrix(&a)?, read_matrix(&b)?);
            let inputs = [("A", &ma), ("B", &mb)];
            let r = bundled(bound_report(&ma, &mb), &inputs)?;
            let doc = bundled(BoundDocument::build(&ma, &mb, &r), &inputs)?;
            Ok(emit(&doc, format).into())
        }
        Command::Split { file, format } => {
            let m = read_matrix(&file)?;
            let r = bundled(split_bounds(&m), &[("A", &m)])?;
            Ok(emit(&SplitDocument::build(&r), format).into())
        }
        Command::Fuzz {
            n,
            rank,
            trials,
            seed,
            max_entry,
            unimodular_ops,
            format,
        } => {
            let mut config = FuzzConfig::new(n, rank, trials, seed);
            config.max_entry = max_entry;
            if let Some(ops) = unimodular_ops {
                config.unimodular_ops = ops;
            }
            let start = Instant::now();
            let report = run_fuzz(&config)?;
            let elapsed = format!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            let body = emit(
                &FuzzDocument {
                    config: &config,
                    report: &report,
                },
                format,
            );
            Ok(match format {
                Format::Text => Output {
                    body: format!("{body}{elapsed}\n"),
                    sidecar: None,
                },
                Format::Json => Output {
                    body,
                    sidecar: Some(elapsed),
                },
            })
        }
        Command::Examples { n, format } => {
            let suite = paper_example_suite(n)?;
            Ok(emit(&ExamplesDocument::build(&suite)?, format).into())
        }
    }
}

fn default_repro_root() -> PathBuf {
    std::env::temp_dir().join(format!("eigperturb-repro-{}", std::process::id()))
}

fn write_bundle(
    dir: &Path,
    inputs: &[(&'static str, ExactMatrix)],
    error: &eigperturb::Error,
) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    for (name, m) in inputs {
        fs::write(dir.join(format!("{name}.mat")), format_matrix(m))?;
    }
    fs::write(dir.join("violation.txt"), format!("{error}\n"))?;
    Ok(dir.to_path_buf())
}

/// Writes any reproduction bundle and returns the exit code.
fn report_error(e: CliError, repro_root: Option<PathBuf>, err: &mut dyn Write) -> i32 {
    let root = repro_root.unwrap_or_else(default_repro_root);
    let written = match &e {
        CliError::Core(eigperturb::Error::Reproduction(bundle)) => {
            Some(bundle.write_to(&root.join(format!("seed{}-trial{}", bundle.seed, bundle.trial))))
        }
        CliError::Violation { error, inputs } => Some(write_bundle(&root, inputs, error)),
        CliError::Core(error) if error.is_violation() => Some(write_bundle(&root, &[], error)),
        _ => None,
    };
    let _ = writeln!(err, "error: {e}");
    match written {
        Some(Ok(path)) => {
            let _ = writeln!(err, "reproduction bundle: {}", path.display());
            EXIT_VIOLATION
        }
        Some(Err(io)) => {
            let _ = writeln!(
                err,
                "could not write reproduction bundle under {}: {io}",
                root.display()
            );
            EXIT_VIOLATION
        }
        None => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(cli.command) {
        Ok(output) => {
            let _ = out.write_all(output.body.as_bytes());
            if let Some(line) = output.sidecar {
                let _ = writeln!(err, "{line}");
            }
            EXIT_OK
        }
        Err(e) => report_error(e, cli.repro_dir, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eigperturb::{Violation, ViolationKind};

    #[test]
    fn violation_writes_bundle_and_exits_one() {
        let dir = std::env::temp_dir().join(format!("eigperturb-unit-{}", std::process::id()));
        let error: eigperturb::Error =
            Violation::new(ViolationKind::ImprovedBound, "synthetic").into();
        let inputs = vec![("A", ExactMatrix::identity(2))];
        let mut err = Vec::new();
        let code = report_error(
            CliError::Violation { error, inputs },
            Some(dir.clone()),
            &mut err,
        );
        assert_eq!(code, EXIT_VIOLATION);
        let msg = String::from_utf8(err).unwrap();
        assert!(msg.contains("reproduction bundle"), "{msg}");
        assert_eq!(
            fs::read_to_string(dir.join("A.mat")).unwrap(),
            "matrix 2 2\n1 0\n0 1\n"
        );
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn input_errors_exit_two() {
        let mut err = Vec::new();
        let e = CliError::Core(eigperturb::Error::InvalidInput("bad".into()));
        assert_eq!(report_error(e, None, &mut err), EXIT_USAGE);
    }
}
