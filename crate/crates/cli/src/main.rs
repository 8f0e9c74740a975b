//! `freechaos`: partition counts, free moments, chaos diagnostics and the
//! Fock-space oracle from the command line.
//!
//! Exit status is 0 when every identity check passes, 1 when some check
//! fails (the failures are listed on stderr), and 2 on usage or input errors.

mod commands;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use freechaos::kernel_io::TextCoefficient;
use freechaos::{parse_kernel, parse_rational, BigRational, Complex64, Family, Kernel};

use commands::{Dist, Method};
use report::Report;

/// Overrides the directory that relative `--out` paths resolve against.
pub const OUT_DIR_ENV: &str = "FREECHAOS_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] freechaos::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Poisson,
    Semicircle4,
}

#[derive(Debug, Parser)]
#[command(name = "freechaos", version, about = "Free Wigner chaos moments and free Poisson diagnostics")]
struct Cli {
    /// Arithmetic for kernels and cumulant sequences.
    #[arg(long, value_enum, default_value_t = Mode::Float, global = true)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    /// Tolerance for the numeric checks of the chosen subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Catalan, Riordan and refined Riordan numbers.
    Counts {
        #[arg(long, default_value_t = 10)]
        max_m: usize,
    },
    /// Moments of the semicircle (variance t) or centered free Poisson (rate lambda) law.
    Moments {
        #[arg(value_enum)]
        dist: Dist,
        /// t or lambda: an integer, decimal or fraction such as 7/3.
        param: String,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[arg(long, value_enum, default_value_t = Method::Combinatorial)]
        method: Method,
    },
    /// Moments, fourth-moment statistic and Poisson defect of a kernel file.
    Chaos {
        kernel: PathBuf,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Also list every contraction sequence and its value.
        #[arg(long)]
        report_sequences: bool,
        /// Add a column computed on the truncated Fock space.
        #[arg(long)]
        oracle: bool,
    },
    /// Statistic, defect and moment gaps along a built-in kernel family.
    Scan {
        #[arg(value_enum)]
        family: FamilyName,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 16, 64])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
    /// Vacuum moments on the truncated Fock space, next to the contraction engine.
    Oracle {
        kernel: PathBuf,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Level bound; defaults to q * m for each m.
        #[arg(long)]
        level: Option<usize>,
    },
}

fn read_kernel<T: TextCoefficient>(path: &Path) -> Result<Kernel<T>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    parse_kernel(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn with_kernel<F>(path: &Path, mode: Mode, run: F) -> Result<Report, CliError>
where
    F: FnOnce(KernelInput) -> Result<Report, CliError>,
{
    match mode {
        Mode::Exact => run(KernelInput::Exact(read_kernel(path)?)),
        Mode::Float => run(KernelInput::Float(read_kernel(path)?)),
    }
}

enum KernelInput {
    Exact(Kernel<BigRational>),
    Float(Kernel<Complex64>),
}

macro_rules! dispatch {
    ($input:expr, $f:ident => $body:expr) => {
        match $input {
            KernelInput::Exact($f) => $body,
            KernelInput::Float($f) => $body,
        }
    };
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if let Some(tol) = cli.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    match &cli.command {
        Command::Counts { max_m } => commands::counts(*max_m),
        Command::Moments {
            dist,
            param,
            max_m,
            method,
        } => {
            let value = parse_rational(param).map_err(|e| CliError::Usage(format!("parameter: {e}")))?;
            commands::moments(*dist, &value, *max_m, *method, cli.mode == Mode::Exact, cli.tol)
        }
        Command::Chaos {
            kernel,
            m_max,
            report_sequences,
            oracle,
        } => with_kernel(kernel, cli.mode, |input| {
            dispatch!(input, f => commands::chaos(&f, *m_max, *report_sequences, *oracle, cli.tol))
        }),
        Command::Scan {
            family,
            p,
            d,
            lambda,
            n,
            m_max,
        } => {
            if cli.mode == Mode::Exact {
                return Err(CliError::Usage("scan runs in float mode only".into()));
            }
            let family = match family {
                FamilyName::Poisson => Family::Poisson { p: *p, d: *d },
                FamilyName::Semicircle4 => Family::Semicircle4 { lambda: *lambda },
            };
            commands::scan(family, *m_max, n, cli.tol)
        }
        Command::Oracle { kernel, m_max, level } => with_kernel(kernel, cli.mode, |input| {
            dispatch!(input, f => commands::oracle(&f, *m_max, *level, cli.tol))
        }),
    }
}

fn output_path(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Tsv => report.to_tsv(),
        Format::Json => report.to_json(),
    };
    match &cli.out {
        Some(out) => {
            let path = output_path(out);
            fs::write(&path, text).map_err(|source| CliError::Io { path, source })
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| emit(&cli, &report).map(|_| report));
    match result {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(report) => {
            eprint!("{}", report.failure_list());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
