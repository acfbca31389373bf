//! The `hamforge` command line: subcommands wiring constructions, families,
//! builders, counters and estimators together, plus one-command experiment
//! presets.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unreadable
//! files), 2 on typed domain errors, which are printed verbatim.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hamforge_core::counting::{brute_force_ham_count, exact_ham_count_with, CountMethod, DpConfig};
use hamforge_core::randmodels::DensitySpec;

mod commands;
pub mod presets;

pub use presets::{Preset, PresetOptions, PresetOutput};

/// Environment variable holding the DP memory budget in GiB.
pub const MEM_ENV: &str = "HAMFORGE_MEM_GIB";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(hamforge_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

pub(crate) fn dom<E: Into<hamforge_core::Error>>(e: E) -> CliError {
    CliError::Domain(e.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A rational `NUM/DEN` with `0 <= NUM <= DEN`, as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn density(&self) -> Result<DensitySpec, CliError> {
        DensitySpec::new(self.num, self.den).map_err(dom)
    }
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected NUM/DEN with 0 <= NUM <= DEN, got {s:?}");
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let num: u64 = a.parse().map_err(|_| bad())?;
        let den: u64 = b.parse().map_err(|_| bad())?;
        if den == 0 || num > den {
            return Err(bad());
        }
        Ok(Self { num, den })
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "hamforge", version, about = "Constructions, exact counts and random models for tight Hamiltonian cycles in r-graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (1 gives byte-identical reruns).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Write a named r-graph in the hypergraph text format.
    Construct(ConstructArgs),
    /// Count tight Hamiltonian cycles exactly.
    Count(CountArgs),
    /// Build and verify a spherical Steiner system S(3, q+1, q^s+1).
    Steiner(SteinerArgs),
    /// Build a random edge-disjoint packing.
    Pack(PackArgs),
    /// Partition a design or packing into vertex-disjoint groups.
    Family(FamilyArgs),
    /// Draw the quasi-random r-graph of a partitioned family.
    Build(BuildArgs),
    /// Sampled quasi-randomness audit of an r-graph.
    Audit(AuditArgs),
    /// Monte Carlo estimates of the bad fraction, fbar, gbar and the lower bound.
    Estimate(EstimateArgs),
    /// Run a named experiment preset.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Crown,
    Turan,
    Multipartite,
    Complete,
    Gnp,
    Gnm,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: GraphKind,
    #[arg(long)]
    pub n: usize,
    /// Uniformity (default 3; crown and turan are graphs).
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of parts (turan, multipartite).
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge probability (gnp).
    #[arg(long)]
    pub p: Option<Ratio>,
    /// Edge count (gnm).
    #[arg(long)]
    pub m: Option<u128>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dp,
    Brute,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "dp")]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SteinerArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub s: u32,
    /// Design file; without it the design goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PackArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub k: usize,
    /// Element size (direct mode).
    #[arg(long)]
    pub q: Option<usize>,
    /// Number of sampled q-subsets K (direct mode).
    #[arg(long)]
    pub count: Option<usize>,
    /// Ownership lottery range M (direct mode).
    #[arg(long)]
    pub m: Option<usize>,
    /// Minimum (r-1)-degree threshold (direct mode).
    #[arg(long)]
    pub tau: Option<f64>,
    /// Faithful mode exponent (defaults to the largest admissible value).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Faithful mode delta.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub attempts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct FamilyArgs {
    /// Steiner design file.
    #[arg(long, conflicts_with_all = ["packing", "singletons"])]
    pub design: Option<PathBuf>,
    /// Packing file.
    #[arg(long, conflicts_with = "singletons")]
    pub packing: Option<PathBuf>,
    /// Every r-set of [n] on its own (k = 1).
    #[arg(long)]
    pub singletons: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Group size (designs only; packings carry their own).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    pub family: PathBuf,
    /// Density; alternatively give --l and --k.
    #[arg(long, conflicts_with = "l")]
    pub p: Option<Ratio>,
    #[arg(long, requires = "k")]
    pub l: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct AuditArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct EstimateArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub p: Ratio,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Overrides the preset's Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Overrides the preset's number of exact-count builds.
    #[arg(long)]
    pub builds: Option<usize>,
    /// Overrides the preset's number of independent runs.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Output directory for report.json and the preset's CSV table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything that determines a run's output; embedded in experiment reports.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub version: &'static str,
    #[serde(flatten)]
    pub command: &'a Command,
    pub workers: Option<usize>,
    pub format: Format,
    pub memory_budget_bytes: u64,
}

pub(crate) struct Ctx<'a> {
    pub cli: &'a Cli,
    pub dp: DpConfig,
    pub stdout: &'a mut Vec<u8>,
}

impl Ctx<'_> {
    pub fn config(&self) -> RunConfig<'_> {
        RunConfig {
            version: env!("CARGO_PKG_VERSION"),
            command: &self.cli.command,
            workers: self.cli.workers,
            format: self.cli.format,
            memory_budget_bytes: self.dp.memory_budget_bytes,
        }
    }

    /// Writes `bytes` to `path`, or to stdout without one.
    pub fn emit(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
        match path {
            Some(p) => write_file(p, bytes),
            None => {
                self.stdout.extend_from_slice(bytes);
                Ok(())
            }
        }
    }
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn open(path: &Path) -> Result<BufReader<fs::File>, CliError> {
    fs::File::open(path)
        .map(BufReader::new)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

pub(crate) fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

/// DP budget from `HAMFORGE_MEM_GIB`, or the default.
pub fn dp_config_from_env() -> Result<DpConfig, CliError> {
    match std::env::var(MEM_ENV) {
        Err(_) => Ok(DpConfig::default()),
        Ok(v) => {
            let gib: f64 = v
                .trim()
                .parse()
                .ok()
                .filter(|g: &f64| g.is_finite() && *g > 0.0)
                .ok_or_else(|| usage(format!("{MEM_ENV} must be a positive number of GiB, got {v:?}")))?;
            Ok(DpConfig {
                memory_budget_bytes: (gib * (1u64 << 30) as f64) as u64,
            })
        }
    }
}

/// Counts with the requested method.
pub fn count_with(
    g: &hamforge_core::Hypergraph,
    method: Method,
    dp: &DpConfig,
) -> Result<hamforge_core::counting::CountResult, CliError> {
    match method {
        Method::Dp => exact_ham_count_with(g, dp).map_err(dom),
        Method::Brute => brute_force_ham_count(g).map_err(dom),
    }
}

pub(crate) fn method_name(m: CountMethod) -> &'static str {
    match m {
        CountMethod::SubsetDp => "subset_dp",
        CountMethod::BruteForce => "brute_force",
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let dp = dp_config_from_env()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(usage("--workers must be at least 1"));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
    let mut buf = Vec::new();
    let mut ctx = Ctx { cli, dp, stdout: &mut buf };
    pool.install(|| commands::dispatch(&mut ctx))?;
    stdout
        .write_all(&buf)
        .and_then(|_| stdout.flush())
        .map_err(|e| usage(format!("writing stdout: {e}")))
}

/// Convenience for the binary.
pub fn main_with_std() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
