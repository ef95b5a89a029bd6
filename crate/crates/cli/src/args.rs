use crate::output::Format;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "ihplab", version, about = "Experiments for the implicit hidden partition game and its MAX-CUT reduction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write a gnuplot script next to the CSV output.
    #[arg(long, global = true)]
    pub plot: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a game instance (or its reduced graph).
    Gen(GenArgs),
    /// Success rate of a protocol, optionally with the transcript TVD.
    Advantage(AdvantageArgs),
    /// Paired YES/NO reductions and their MAX-CUT values.
    Gap(GapArgs),
    /// Numeric audit of the analytic inequalities.
    Audit(AuditArgs),
    /// Spectrum dumps with boundedness reports.
    Spectrum(SpectrumArgs),
    /// Per-round forest potential of the distinguisher.
    Potential(PotentialArgs),
}

impl Command {
    pub fn default_format(&self) -> Format {
        match self {
            Command::Gap(_) | Command::Audit(_) => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct GameArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long = "alpha-n")]
    pub alpha_n: u32,
    /// Number of players.
    #[arg(long = "T", visible_alias = "players")]
    pub t: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseArg {
    Yes,
    No,
    Mixed,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, value_enum, default_value = "mixed")]
    pub case: CaseArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Stream index under the seed; distinct indices give independent instances.
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    /// Emit the reduced multigraph instead of the instance.
    #[arg(long)]
    pub graph: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolArg {
    Trivial,
    Random,
    Distinguisher,
    Adaptive,
    Forward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TvdArg {
    Exact,
    Plugin,
}

#[derive(Args, Debug, Serialize)]
pub struct AdvantageArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    /// Message budget in bits (distinguisher, adaptive, forward).
    #[arg(long, default_value_t = 8)]
    pub s: usize,
    /// Players that forward labels (forward protocol).
    #[arg(long, default_value_t = 1)]
    pub speakers: usize,
    #[arg(long, value_enum, default_value = "mixed")]
    pub case: CaseArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also estimate the transcript TVD between the two cases.
    #[arg(long, value_enum)]
    pub tvd: Option<TvdArg>,
    /// Samples for the TVD estimate (defaults to --trials).
    #[arg(long)]
    pub tvd_trials: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct GapArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Defaults to ε/100.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Exhaustive MAX-CUT (n ≤ 26); the default.
    #[arg(long, conflicts_with = "heuristic")]
    pub exact: bool,
    /// Local search with restarts; NO-side values are lower bounds only.
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1.7)]
    pub ratio_threshold: f64,
    /// Fraction of pairs that must reach the ratio threshold.
    #[arg(long, default_value_t = 0.95)]
    pub ratio_target: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    S0,
    S1,
    S2,
    S3,
    T1,
    T2,
    Kkl,
    Misc,
    Qkib,
    Message,
    Spectrum,
    Martingale,
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct AuditArgs {
    #[arg(long, value_enum, default_value = "all", value_delimiter = ',')]
    pub which: Vec<Which>,
    /// Parameter tuple `n,C,s*,alpha`; repeatable. Defaults to five tuples
    /// satisfying (P1)–(P4).
    #[arg(long = "params", value_parser = parse_tuple)]
    pub params: Vec<[f64; 4]>,
    /// δ for the (P5) flag.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Explicit ℓ values for the sums (otherwise the default grids).
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<f64>,
    /// Grid points for the T sums.
    #[arg(long, default_value_t = 12)]
    pub points: usize,
    /// Trials for the sampled audits (default depends on the audit).
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `m` for the martingale audit.
    #[arg(long, default_value_t = 10_000)]
    pub martingale_m: u64,
    #[arg(long, default_value_t = 4)]
    pub martingale_t: u32,
    #[arg(long, default_value_t = 0.1)]
    pub martingale_noise: f64,
}

fn parse_tuple(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected four comma-separated numbers n,C,s*,alpha".to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// Sets cut out by a labeled forest.
    Forest,
    /// Preimage of a random dense set under a random matching.
    Message,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "forest")]
    pub kind: SpectrumKind,
    /// Forest edges as `a-b:w,...`; random when absent.
    #[arg(long)]
    pub edges: Option<String>,
    /// Edge count of a random forest.
    #[arg(long, default_value_t = 3)]
    pub forest_edges: usize,
    #[arg(long = "alpha-n", default_value_t = 3)]
    pub alpha_n: u32,
    #[arg(long, default_value_t = 3)]
    pub s_star: u32,
    #[arg(long, default_value_t = 3.0)]
    pub c: f64,
    /// Dump only weights up to 2·levels.
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also trace component growth of the adaptive solver.
    #[arg(long)]
    pub adaptive: bool,
}
