//! Command-line front end: expression parsing, subcommands, JSON reports and
//! CSV sidecars.
//!
//! Every invocation prints one JSON document (see [`Report`]). Exit codes:
//! `0` success, `2` undetermined verdict, `1` error.

mod commands;
pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use expr::{parse_element, parse_expr, parse_poly, parse_poly1, parse_poly2, Expr, Var};

pub const SCHEMA: &str = "heisdyn-report";
pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable naming the default word-count cache (file or directory).
pub const CACHE_ENV: &str = "HEISDYN_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "heisdyn",
    version,
    about = "Principal actions of the discrete Heisenberg group"
)]
pub struct Cli {
    /// Write the command's table to this CSV file.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command", content = "args")]
pub enum Command {
    /// Group-ring arithmetic.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Mixing criteria.
    #[command(subcommand)]
    Mixing(MixingCmd),
    /// Expansiveness tests.
    #[command(subcommand)]
    Expansive(ExpansiveCmd),
    /// Entropy engines.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Counts of words with trivial product.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Fundamental homoclinic points.
    #[command(subcommand)]
    Homoclinic(HomoclinicCmd),
    /// Random product of 2×2 matrices over a rotation.
    Randprod(RandprodArgs),
    /// Re-run the configuration embedded in a report.
    Replay { report: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum RingCmd {
    /// Product in normal form.
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The involution `x^k y^l z^m ↦ (x^k y^l z^m)^{-1}`.
    Star {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Newton polygon of the `(x, y)` support.
    Newton {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Content: gcd of the coefficient polynomials in `z`.
    Content {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// q-binomial coefficients in `(x + y)^n`.
    Qbinom {
        n: u32,
        /// A single coefficient `[n; k]_z` instead of the whole row.
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum MixingCmd {
    /// Mixing test for a central element `g(z)`.
    Central {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// The sufficient conditions via generalized cyclotomic divisors.
    Hayes {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 24)]
        k_max: u64,
        #[arg(long, default_value_t = 6)]
        n_max: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum ExpansiveCmd {
    /// Exact unimodular-root test for a polynomial in `z`.
    Sturm {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Criterion for `f = h·y − g` with `g, h` in `x, z`.
    Linear(LinearArgs),
    /// Minimum of `|det A_{ζ,f}(ξ, η)|` at `ζ = e^{2πip/q}`.
    Allan {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// The cocycle `ψ_ζ(n, ξ)` on a window.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// `ζ = e^{2πi·zeta}`.
        #[arg(long, allow_negative_numbers = true)]
        zeta: f64,
        /// `ξ = e^{2πi·xi}`.
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, default_value_t = 200)]
        window: usize,
    },
    /// Search for `g` with `f·g` lopsided.
    Lopsidize {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 40)]
        max_iterations: usize,
        #[arg(long, default_value_t = 10.0)]
        max_radius: f64,
        #[arg(long, default_value_t = 24)]
        max_scale_log2: u32,
    },
    /// The degree-48 worked example.
    Example48,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct LinearArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, default_value_t = 2048)]
    pub zeta_grid: usize,
    #[arg(long, default_value_t = 256)]
    pub torus_grid: usize,
    #[arg(long, default_value_t = 720)]
    pub xi_grid: usize,
    #[arg(long, default_value_t = 12)]
    pub rational_max: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub d_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum EntropyCmd {
    /// Trace series for lopsided `f`.
    Trace {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Fixed number of terms, overriding `--tol`.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Periodic-point determinants over prime `q`, extrapolated.
    Periodic {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11")]
        q: Vec<usize>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Linear formula for `f` linear in `x` or `y`.
    Linear {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Lower bound from the faces of the Newton polygon.
    Face {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Lyapunov spectra of the companion cocycle.
    Lyapunov {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 16)]
        zetas: usize,
        #[arg(long, default_value_t = 20000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_rational: bool,
        /// Also compute the Herman lower bound on this grid.
        #[arg(long)]
        herman_grid: Option<usize>,
    },
    /// Compares the quadratic conjecture with periodic determinants.
    ExperimentQuadratic {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 256)]
        zeta_grid: usize,
        #[arg(long, default_value_t = 4000)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        eta_samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11")]
        q: Vec<usize>,
        /// Periodic grid; 0 skips the periodic comparison.
        #[arg(long, default_value_t = 32)]
        periodic_grid: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct WordsArgs {
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
    /// Cache file (or directory); defaults to `$HEISDYN_CACHE`.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum WordsCmd {
    Heis(WordsArgs),
    Z2(WordsArgs),
    Free(WordsArgs),
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "sub")]
pub enum HomoclinicCmd {
    /// Truncated `w = (f*)^{-1}` and `t = w mod 1`.
    Fundamental {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        /// Report coefficients with gauge at most this.
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
    },
    /// Samples `π(u)` on a box of group elements.
    Cover {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        /// Box `|k|, |l|, |m| ≤ radius`.
        #[arg(long, default_value_t = 2)]
        radius: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct RandprodArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Everything needed to reproduce a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub threads: Option<usize>,
    /// Resolved word-count cache, if any.
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Undetermined,
}

/// A CSV sidecar: header row plus records.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        w.write_record(&self.headers).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// The JSON document printed for each run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub schema_version: u32,
    pub tool: Value,
    pub command: String,
    pub config: RunConfig,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub csv: Option<PathBuf>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Undetermined => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub(crate) struct Outcome {
    pub status: Status,
    pub result: Value,
    pub table: Option<Table>,
}

fn tool_info() -> Value {
    json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") })
}

fn resolve_cache(command: &Command) -> Option<PathBuf> {
    let (args, group) = match command {
        Command::Words(WordsCmd::Heis(a)) => (a, "heisenberg"),
        Command::Words(WordsCmd::Z2(a)) => (a, "z2"),
        Command::Words(WordsCmd::Free(a)) => (a, "free2"),
        _ => return None,
    };
    let base = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))?;
    Some(if base.is_dir() {
        base.join(format!("words-{group}.json"))
    } else {
        base
    })
}

/// Runs a configuration and builds its report.
pub fn run_config(config: &RunConfig) -> Result<Report> {
    let exec = || commands::execute(&config.command, config.cache.as_deref());
    let (name, out) = match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            pool.install(exec)?
        }
        None => exec()?,
    };
    Ok(Report {
        schema: SCHEMA.into(),
        schema_version: SCHEMA_VERSION,
        tool: tool_info(),
        command: name,
        config: config.clone(),
        status: out.status,
        result: out.result,
        csv: None,
        table: out.table,
    })
}

/// Runs parsed arguments, writing the CSV sidecar if requested.
pub fn execute(cli: &Cli) -> Result<Report> {
    let config = match &cli.command {
        Command::Replay { report } => {
            let text = std::fs::read_to_string(report)?;
            let old: Report = serde_json::from_str(&text)?;
            if matches!(old.config.command, Command::Replay { .. }) {
                return Err(Error::InvalidInput("cannot replay a replay".into()));
            }
            RunConfig {
                threads: cli.threads.or(old.config.threads),
                ..old.config
            }
        }
        command => RunConfig {
            command: command.clone(),
            threads: cli.threads,
            cache: resolve_cache(command),
        },
    };
    let mut report = run_config(&config)?;
    if let Some(path) = &cli.csv {
        let table = report.table.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no tabular output", report.command))
        })?;
        table.write(path)?;
        report.csv = Some(path.clone());
    }
    Ok(report)
}

fn error_document(e: &Error) -> Value {
    json!({
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "tool": tool_info(),
        "status": "error",
        "error": e.to_string(),
    })
}

/// Runs a command line and returns `(exit code, stdout text)` without printing.
/// Errors, including argument errors, become a JSON error document with code 1;
/// `--help` and `--version` return their text with code 0.
pub fn run_to_string<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => return (0, e.to_string()),
        Err(e) => {
            let err = Error::InvalidInput(e.kind().to_string());
            let mut doc = error_document(&err);
            doc["usage"] = Value::String(e.to_string());
            return (1, doc.to_string());
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let v = report.to_json();
            let text = if cli.pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            };
            (report.exit_code(), text.expect("json"))
        }
        Err(e) => (1, error_document(&e).to_string()),
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, text) = run_to_string(args);
    if code == 1 {
        if let Ok(doc) = serde_json::from_str::<Value>(&text) {
            eprintln!("error: {}", doc["error"].as_str().unwrap_or("unknown"));
            if let Some(u) = doc["usage"].as_str() {
                eprint!("{u}");
            }
        }
    }
    // a closed pipe (e.g. `| head`) is not an error of the computation
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", text.trim_end()).and_then(|_| out.flush());
    code
}
