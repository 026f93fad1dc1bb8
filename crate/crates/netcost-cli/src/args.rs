//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "netcost",
    version,
    about = "Classify Kubernetes network traffic and compare usage-based vs capacity-based pricing"
)]
pub struct Cli {
    /// Config document (TOML). Falls back to the NETCOST_CONFIG env var.
    #[arg(long, global = true, env = "NETCOST_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a flow trace into billing classes.
    Classify(ClassifyArgs),
    /// Price a classified trace under usage-based rates.
    Cost(CostArgs),
    /// Dimension a bare-metal link from a trace.
    Dimension(DimensionArgs),
    /// Generate a synthetic flow trace (emits flow CSV).
    Simulate(SimulateArgs),
    /// Extrapolate a measured window cost to a monthly cost.
    Extrapolate(ExtrapolateArgs),
    /// Find the parameter where cloud and bare-metal monthly costs cross.
    Breakeven(BreakevenArgs),
    /// Compare usage-based and capacity-based monthly costs for a trace.
    Compare(CompareArgs),
    /// Parse external evidence files.
    Ingest(IngestArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Flow CSV trace file.
    #[arg(long, value_name = "PATH")]
    pub trace: PathBuf,
    /// Topology document; overrides the `[topology]` section of --config.
    #[arg(long, value_name = "PATH")]
    pub topology: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, value_name = "PATH")]
    pub trace: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub topology: Option<PathBuf>,
    /// Billing window in seconds; defaults to the trace span.
    #[arg(long, value_name = "SECS")]
    pub duration: Option<f64>,
    #[command(flatten)]
    pub usage: UsageArgs,
    #[command(flatten)]
    pub lb: LbArgs,
}

#[derive(Debug, Args)]
pub struct DimensionArgs {
    #[arg(long, value_name = "PATH")]
    pub trace: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub topology: Option<PathBuf>,
    /// Rate bucket width in seconds.
    #[arg(long, value_name = "SECS", default_value_t = 1.0)]
    pub bucket: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub capacity: CapacityArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Length of the generated trace in seconds.
    #[arg(long, value_name = "SECS")]
    pub duration: f64,
    /// Bucket width in seconds (one aggregated flow per bucket per direction).
    #[arg(long, value_name = "SECS", default_value_t = 1.0)]
    pub bucket: f64,
    #[arg(long, value_name = "PATH")]
    pub topology: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    /// Measured cost of the window.
    #[arg(long)]
    pub cost: f64,
    /// Window length in seconds.
    #[arg(long, value_name = "SECS")]
    pub window: f64,
    /// Fraction of the month at the measured intensity.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct BreakevenArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Parameter swept: rate, active-fraction, or egress-share.
    #[arg(long, value_enum)]
    pub sweep: SweepArg,
    /// Lower end of the sweep interval.
    #[arg(long)]
    pub lo: f64,
    /// Upper end of the sweep interval.
    #[arg(long)]
    pub hi: f64,
    /// Convergence tolerance (cost difference or parameter interval).
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub usage: UsageArgs,
    #[command(flatten)]
    pub capacity: CapacityArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepArg {
    Rate,
    ActiveFraction,
    EgressShare,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_name = "PATH")]
    pub trace: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub topology: Option<PathBuf>,
    /// Rate bucket width for dimensioning, seconds.
    #[arg(long, value_name = "SECS", default_value_t = 1.0)]
    pub bucket: f64,
    #[command(flatten)]
    pub usage: UsageArgs,
    #[command(flatten)]
    pub capacity: CapacityArgs,
    #[command(flatten)]
    pub lb: LbArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(subcommand)]
    pub source: IngestSource,
}

#[derive(Debug, Subcommand)]
pub enum IngestSource {
    /// Prometheus text-exposition counters.
    Prometheus(IngestPrometheusArgs),
    /// Kubecost allocation JSON (minimal subset, see docs/kubecost-schema.md).
    Kubecost(IngestKubecostArgs),
    /// Flow CSV summary.
    Flows(IngestFlowsArgs),
}

#[derive(Debug, Args)]
pub struct IngestPrometheusArgs {
    #[arg(long, value_name = "PATH")]
    pub file: PathBuf,
    /// Timestamp assigned to samples without one, Unix seconds.
    #[arg(long, value_name = "SECS", default_value_t = 0.0)]
    pub scrape_time: f64,
    /// Keep only samples of this metric name.
    #[arg(long, value_name = "NAME")]
    pub metric: Option<String>,
    /// Skip malformed lines (warn on stderr) instead of failing.
    #[arg(long)]
    pub lenient: bool,
    /// Emit per-series rates instead of raw samples.
    #[arg(long)]
    pub rates: bool,
    /// On counter reset, drop the interval instead of restarting from zero.
    #[arg(long)]
    pub skip_resets: bool,
}

#[derive(Debug, Args)]
pub struct IngestKubecostArgs {
    #[arg(long, value_name = "PATH")]
    pub file: PathBuf,
    /// Pattern scale for the monthly extrapolation of the measured cost.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct IngestFlowsArgs {
    #[arg(long, value_name = "PATH")]
    pub file: PathBuf,
}

/// Usage-pricing overrides; flag > config > aws-like default.
#[derive(Debug, Args)]
pub struct UsageArgs {
    /// Usage pricing profile (aws-like).
    #[arg(long, value_name = "NAME")]
    pub usage_profile: Option<String>,
    /// In-zone rate, currency per GB.
    #[arg(long, value_name = "RATE")]
    pub in_zone: Option<f64>,
    /// Cross-zone rate, currency per GB.
    #[arg(long, value_name = "RATE")]
    pub cross_zone: Option<f64>,
    /// Cross-region rate, currency per GB (no built-in default).
    #[arg(long, value_name = "RATE")]
    pub cross_region: Option<f64>,
    /// Internet egress rate, currency per GB.
    #[arg(long, value_name = "RATE")]
    pub internet_egress: Option<f64>,
    /// Internet ingress rate, currency per GB.
    #[arg(long, value_name = "RATE")]
    pub internet_ingress: Option<f64>,
}

/// Capacity-pricing overrides; flag > config > ovh-advance2 default.
#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Capacity pricing profile (ovh-advance2).
    #[arg(long, value_name = "NAME")]
    pub capacity_profile: Option<String>,
    /// Base monthly price.
    #[arg(long, value_name = "PRICE")]
    pub base_monthly: Option<f64>,
    /// Capacity included in the base price, bits/s.
    #[arg(long, value_name = "BPS")]
    pub included_bps: Option<f64>,
    /// Purchasable increment size, bits/s.
    #[arg(long, value_name = "BPS")]
    pub increment_bps: Option<f64>,
    /// Monthly price per increment.
    #[arg(long, value_name = "PRICE")]
    pub increment_price: Option<f64>,
}

/// Load-balancer placement; enabled by --lb-zone/--backend-zone or the
/// `[pricing.load_balancer]` config section.
#[derive(Debug, Args)]
pub struct LbArgs {
    #[arg(long, value_name = "ZONE")]
    pub lb_zone: Option<String>,
    #[arg(long, value_name = "ZONE")]
    pub backend_zone: Option<String>,
    /// Load balancer hourly rate.
    #[arg(long, value_name = "RATE")]
    pub lb_hourly: Option<f64>,
    /// Load balancer per-GB processed rate.
    #[arg(long, value_name = "RATE")]
    pub lb_per_gb: Option<f64>,
    /// Do not charge the cross-zone hop on ingress internet bytes.
    #[arg(long)]
    pub no_ingress_hop: bool,
    /// Ignore any load balancer from the config document.
    #[arg(long)]
    pub no_lb: bool,
}

/// Dimensioning policy overrides; flag > config > defaults (0.5, 60 s,
/// egress-only).
#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Utilization target in (0, 1].
    #[arg(long, value_name = "FRACTION")]
    pub utilization: Option<f64>,
    /// Peak averaging window in seconds.
    #[arg(long, value_name = "SECS")]
    pub peak_window: Option<f64>,
    /// Which flows load the link: egress-only or all.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    EgressOnly,
    All,
}

/// Traffic pattern; flag > config `[pattern]` section.
#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Pattern kind: constant, duty-cycle, diurnal, or bursty.
    #[arg(long, visible_alias = "family", value_name = "KIND")]
    pub pattern: Option<String>,
    /// Rate in bytes/s (constant and duty-cycle).
    #[arg(long, value_name = "BPS")]
    pub rate: Option<f64>,
    /// Active fraction in (0, 1] (duty-cycle).
    #[arg(long, value_name = "FRACTION")]
    pub active_fraction: Option<f64>,
    /// Mean rate in bytes/s (diurnal).
    #[arg(long, value_name = "BPS")]
    pub mean: Option<f64>,
    /// Amplitude in bytes/s (diurnal).
    #[arg(long, value_name = "BPS")]
    pub amplitude: Option<f64>,
    /// Period in seconds (diurnal).
    #[arg(long, value_name = "SECS")]
    pub period: Option<f64>,
    /// Baseline rate in bytes/s (bursty).
    #[arg(long, value_name = "BPS")]
    pub baseline: Option<f64>,
    /// Burst rate in bytes/s (bursty).
    #[arg(long, value_name = "BPS")]
    pub burst_rate: Option<f64>,
    /// Per-bucket burst probability in [0, 1] (bursty).
    #[arg(long, value_name = "PROB")]
    pub burst_probability: Option<f64>,
    /// Seed for the deterministic burst generator.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of bytes leaving the cluster, in [0, 1].
    #[arg(long, value_name = "FRACTION")]
    pub egress_share: Option<f64>,
}
