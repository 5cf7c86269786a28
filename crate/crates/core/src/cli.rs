//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the exit code with the stdout payload, so it can be
//! driven from tests without a process.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, CertOptions};
use crate::error::Error;
use crate::io;
use crate::linalg::DEFAULT_RANK_TOL;
use crate::multiindex::TruncationSpec;
use crate::ring::{self, Complex, EvalPoint};
use crate::statespace::{self, StateSpaceSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MATH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ringsys", version, about = "State-space systems over a ring of power series")]
struct Cli {
    /// Relative smallest-singular-value threshold for invertibility and rank at z = 0.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    singular_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the state recursion on an input signal.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Markov parameters H_0..H_n.
    Markov {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Transfer function at (zeta, z) as CSV.
    Tfeval {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        /// Comma-separated complex values, one per variable; empty means z = 0.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        z: String,
    },
    /// Observability / controllability / minimality certificate.
    Check {
        #[arg(value_enum)]
        property: CheckKind,
        #[arg(long)]
        system: PathBuf,
    },
    /// Weighted norm of a ring element.
    Norm {
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Constant A(k - l) of the product inequality.
    Vage {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },
    /// Membership of a point in K_q(delta).
    Kq {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        delta: f64,
    },
    /// Realization algebra.
    Realize {
        #[arg(value_enum)]
        op: RealizeOp,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        system2: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Obs,
    Ctrl,
    Rctrl,
    Minimal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RealizeOp {
    Inverse,
    Cascade,
    Sum,
    Rows,
    Cols,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_mathematical() => EXIT_MATH,
            _ => EXIT_VALIDATION,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
        }
    }

    fn detail(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Usage(s) | CliError::Io(s) => s.clone(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct ErrorDoc {
    error: ErrorBody,
}

/// Exit status and the text meant for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.render().to_string(),
                },
                _ => failure(CliError::Usage(e.render().to_string().trim_end().to_string())),
            };
        }
    };
    match dispatch(cli) {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    let doc = ErrorDoc {
        error: ErrorBody {
            kind: e.kind(),
            detail: e.detail(),
        },
    };
    Outcome {
        code: e.exit_code(),
        stdout: to_json(&doc),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, payload: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, payload).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn load_system(path: &Path) -> Result<StateSpaceSystem, CliError> {
    Ok(io::parse_system(&read(path)?)?)
}

/// Parses `a+bi` style scalars: `1.5`, `-2i`, `0.5-0.25i`, `i`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex value".into());
    }
    let c: Complex = t.parse().map_err(|_| format!("cannot parse complex value {s:?}"))?;
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(format!("non-finite complex value {s:?}"))
    }
}

/// Comma-separated complex list; the empty string is the empty list.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

fn eval_point(spec: TruncationSpec, raw: &str) -> Result<EvalPoint, CliError> {
    let values = parse_complex_list(raw).map_err(CliError::Usage)?;
    if values.is_empty() {
        return Ok(EvalPoint::zeros(spec.num_vars));
    }
    Ok(EvalPoint::new(values))
}

#[derive(Serialize)]
struct SimulationDoc {
    truncation: TruncationSpec,
    signal: Vec<Vec<io::ElementJson>>,
    states: Vec<Vec<io::ElementJson>>,
}

#[derive(Serialize)]
struct MarkovDoc {
    truncation: TruncationSpec,
    markov: Vec<io::MatrixJson>,
}

#[derive(Serialize)]
struct NormReport {
    k: u32,
    norm: f64,
}

#[derive(Serialize)]
struct VageReport {
    k: i64,
    l: i64,
    constant: f64,
}

#[derive(Serialize)]
struct KqReport {
    q: u32,
    delta: f64,
    sum: Option<f64>,
    divergent: bool,
    member: bool,
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    let tol = cli.singular_tol;
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--singular-tol must lie in (0, 1), got {tol}")));
    }
    match cli.command {
        Command::Simulate {
            system,
            input,
            steps,
            out,
        } => {
            let sys = load_system(&system)?;
            let u = io::parse_signal(&read(&input)?)?;
            let sim = sys.simulate(&u, None, steps)?;
            let outputs = io::signal_doc(sys.spec(), &sim.outputs).signal;
            let states = io::signal_doc(sys.spec(), &sim.states).signal;
            let payload = to_json(&SimulationDoc {
                truncation: sys.spec(),
                signal: outputs,
                states,
            });
            write_out(out.as_deref(), &payload)?;
            Ok(payload)
        }
        Command::Markov { system, n } => {
            let sys = load_system(&system)?;
            let h = sys.markov(n)?;
            Ok(to_json(&MarkovDoc {
                truncation: sys.spec(),
                markov: h.params().iter().map(io::matrix_to_json).collect(),
            }))
        }
        Command::Tfeval { system, zeta, z } => {
            let sys = load_system(&system)?;
            let zeta = parse_complex(&zeta).map_err(CliError::Usage)?;
            let z = eval_point(sys.spec(), &z)?;
            Ok(io::cmatrix_to_csv(&sys.tf_eval(zeta, &z)?))
        }
        Command::Check { property, system } => {
            let sys = load_system(&system)?;
            let opts = CertOptions {
                rank_tol: tol,
                ..CertOptions::default()
            };
            let cert = match property {
                CheckKind::Obs => analysis::observability_certificate_with(sys.c(), sys.a(), &opts)?,
                CheckKind::Ctrl => analysis::controllability_certificate_with(sys.a(), sys.b(), &opts)?,
                CheckKind::Rctrl => analysis::r_controllability_certificate_with(sys.a(), sys.b(), &opts)?,
                CheckKind::Minimal => analysis::minimality_certificate_with(&sys, &opts)?,
            };
            Ok(to_json(&cert))
        }
        Command::Norm { element, k } => {
            let e = io::parse_element(&read(&element)?)?;
            Ok(to_json(&NormReport { k, norm: e.norm_k(k) }))
        }
        Command::Vage { k, l } => Ok(to_json(&VageReport {
            k,
            l,
            constant: ring::vage_constant(k, l)?,
        })),
        Command::Kq { z, q, delta } => {
            let values = parse_complex_list(&z).map_err(CliError::Usage)?;
            if values.is_empty() {
                return Err(CliError::Usage("--z needs at least one value".into()));
            }
            if !(delta.is_finite() && delta > 0.0) {
                return Err(CliError::Usage(format!("--delta must be positive, got {delta}")));
            }
            let m = ring::kq_membership(&EvalPoint::new(values), q, delta);
            Ok(to_json(&KqReport {
                q,
                delta,
                sum: (!m.is_divergent()).then_some(m.sum),
                divergent: m.is_divergent(),
                member: m.member,
            }))
        }
        Command::Realize {
            op,
            system,
            system2,
            out,
        } => {
            let s1 = load_system(&system)?;
            let second = || -> Result<StateSpaceSystem, CliError> {
                let p = system2
                    .as_deref()
                    .ok_or_else(|| CliError::Usage(format!("realize {op:?} needs --system2").to_lowercase()))?;
                load_system(p)
            };
            let sys = match op {
                RealizeOp::Inverse => statespace::realize_inverse_with_tol(&s1, tol)?,
                RealizeOp::Cascade => statespace::realize_cascade(&s1, &second()?)?,
                RealizeOp::Sum => statespace::realize_sum(&s1, &second()?)?,
                RealizeOp::Rows => statespace::realize_concat_rows(&s1, &second()?)?,
                RealizeOp::Cols => statespace::realize_concat_cols(&s1, &second()?)?,
            };
            let mut payload = io::system_to_string(&sys);
            payload.push('\n');
            write_out(out.as_deref(), &payload)?;
            Ok(payload)
        }
    }
}
