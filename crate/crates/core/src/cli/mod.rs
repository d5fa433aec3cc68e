//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

mod commands;
pub mod matrix_file;
pub mod report;

pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "entrywise", version, about = "Entrywise positivity preservers in fixed dimension")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance (PSD floors, orbit tests, float comparisons).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Arithmetic used by identity checks.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    /// Include wall-clock runtime in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold constant, partial constants and the verdict on c'.
    Threshold(ThresholdArgs),
    /// Randomized exact or float checks of the determinantal identities.
    VerifyIdentity(VerifyArgs),
    /// Generalized Rayleigh quotient of a Hadamard power.
    Rayleigh(RayleighArgs),
    /// Orbit block decomposition and simultaneous kernel of a PSD matrix.
    Stratify(StratifyArgs),
    /// Searches and sweeps.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Coefficients c_0,...,c_{N-1}.
    #[arg(long, value_name = "LIST")]
    pub c: String,
    #[arg(long = "M")]
    pub m: u32,
    /// Defaults to the number of coefficients.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Coefficient of z^M to classify.
    #[arg(long, allow_hyphen_values = true)]
    pub cprime: Option<f64>,
    /// Also report the grid estimate of the constant.
    #[arg(long)]
    pub empirical: bool,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// With --cprime, sample this many PSD matrices looking for a violation.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichIdentity {
    Pencil,
    CauchyBinet,
    Decomposition,
    Moments,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = WhichIdentity::All)]
    pub which: WhichIdentity,
    #[arg(long = "max-N", default_value_t = 4)]
    pub max_n: usize,
    /// Largest M (number of exponents for cauchy-binet, capped at 6 there).
    #[arg(long = "max-M", default_value_t = 8)]
    pub max_m: u32,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct RayleighArgs {
    /// Matrix file.
    #[arg(long, conflicts_with = "rank_one")]
    pub matrix: Option<PathBuf>,
    /// Use A = u u^* for comma-separated complex literals u.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub rank_one: Option<String>,
    #[arg(long, value_name = "LIST")]
    pub c: String,
    #[arg(long = "M")]
    pub m: u32,
    /// Disc radius; defaults to the matrix file's rho, else 1.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Tabulate the quotient along u_k = sqrt(rho)(1 - eps k/N) and at rho 1_N.
    #[arg(long)]
    pub probe_discontinuity: bool,
    #[arg(long, value_name = "LIST", default_value = "1e-1,1e-2,1e-3,1e-4,1e-5")]
    pub epsilons: String,
}

#[derive(Debug, Args)]
pub struct StratifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// trivial | s1 | cx (or unit_circle, nonzero_complex).
    #[arg(long, default_value = "trivial")]
    pub group: String,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Grid estimate against the closed-form constant.
    Sharpness {
        #[arg(long, value_name = "LIST")]
        c: String,
        #[arg(long = "M")]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Rank-one witness that f[-] is not positivity preserving.
    HornWitness {
        /// Coefficients of f, ascending by degree.
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        f: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Matrix in P_{N+1}((0,rho)) whose entrywise alpha power is not PSD.
    PowerNonpreservation {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Path inside the stratum of --source converging into that of --target.
    ClosureProbe {
        /// Coarser partition, e.g. "{{1,2}}".
        #[arg(long)]
        target: String,
        /// Finer partition, e.g. "{{1},{2}}".
        #[arg(long)]
        source: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value = "trivial")]
        group: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Random sweep of the cross-dimension inequality.
    CrossDim {
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long = "max-N", default_value_t = 5)]
        max_n: usize,
        #[arg(long = "max-M", default_value_t = 10)]
        max_m: u32,
    },
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Library(Error::Io(_) | Error::Json(_)) => EXIT_USAGE,
            CliError::Library(Error::Parameter(_) | Error::Domain(_) | Error::NotPsd { .. }) => EXIT_PRECONDITION,
            CliError::Library(_) => EXIT_FAILURE,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Library(e) => e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let start = Instant::now();
    match commands::dispatch(&cli) {
        Ok(mut report) => {
            if cli.global.timing {
                report.set_runtime_ms(start.elapsed().as_secs_f64() * 1e3);
            }
            let text = if cli.global.json { report.to_json() } else { report.to_text() };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}
