//! Input loading and flag/config/default resolution.
//!
//! Precedence everywhere is CLI flag > config document > built-in default.

use std::fmt;
use std::path::Path;

use netcost::config::{CapacityConfig, ConfigDocument, PatternConfig, PolicyConfig, UsageConfig};
use netcost::dimensioning::{DimensioningPolicy, LinkDirection};
use netcost::ingest::parse_flow_csv;
use netcost::pricing::{CapacityPricing, LoadBalancerConfig, UsagePricing};
use netcost::scenarios::TrafficPattern;
use netcost::traffic::{Topology, Trace};

use crate::args::{
    CapacityArgs, DirectionArg, LbArgs, PatternArgs, PolicyArgs, SweepArg, UsageArgs,
};

/// CLI-level error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unparseable input data: exit 2.
    Input(String),
    /// Inconsistent configuration or pricing: exit 3.
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Config(msg) => f.write_str(msg),
        }
    }
}

impl From<netcost::Error> for CliError {
    fn from(e: netcost::Error) -> Self {
        use netcost::Error::*;
        match e {
            MissingRate(_) | InvalidPricing(_) | InvalidPolicy(_) | InvalidPattern(_)
            | InvalidScale(_) | InvalidBucket(_) | InvalidWindow(_) | InvalidDuration(_)
            | NonMonotone(_) | Config(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read '{}': {e}", path.display())))
}

pub fn load_config(path: Option<&Path>) -> CliResult<ConfigDocument> {
    match path {
        Some(p) => {
            let text = read_file(p)?;
            ConfigDocument::parse(&text)
                .map_err(|e| CliError::Input(format!("in '{}': {e}", p.display())))
        }
        None => Ok(ConfigDocument::default()),
    }
}

/// Topology from an explicit document, falling back to the config's
/// [topology] section.
pub fn load_topology(explicit: Option<&Path>, config: &ConfigDocument) -> CliResult<Topology> {
    if let Some(path) = explicit {
        let text = read_file(path)?;
        let doc = ConfigDocument::parse(&text)
            .map_err(|e| CliError::Input(format!("in '{}': {e}", path.display())))?;
        let section = doc.topology.ok_or_else(|| {
            CliError::Input(format!("'{}' has no [topology] section", path.display()))
        })?;
        return Ok(section.build()?);
    }
    let section = config.topology.as_ref().ok_or_else(|| {
        CliError::Input(
            "no topology: pass --topology or a --config with a [topology] section".into(),
        )
    })?;
    Ok(section.build()?)
}

pub fn load_trace(path: &Path) -> CliResult<Trace> {
    let text = read_file(path)?;
    parse_flow_csv(&text).map_err(|e| CliError::Input(format!("in '{}': {e}", path.display())))
}

/// Resolved usage pricing plus the profile name it started from.
pub fn resolve_usage(
    args: &UsageArgs,
    config: &ConfigDocument,
) -> CliResult<(UsagePricing, String)> {
    let base = config
        .pricing
        .as_ref()
        .and_then(|p| p.usage.clone())
        .unwrap_or_default();
    let profile = args
        .usage_profile
        .clone()
        .or(base.profile)
        .unwrap_or_else(|| "aws-like".to_string());
    let merged = UsageConfig {
        profile: Some(profile.clone()),
        in_zone: args.in_zone.or(base.in_zone),
        cross_zone: args.cross_zone.or(base.cross_zone),
        cross_region: args.cross_region.or(base.cross_region),
        internet_egress: args.internet_egress.or(base.internet_egress),
        internet_ingress: args.internet_ingress.or(base.internet_ingress),
        currency: base.currency,
    };
    Ok((merged.resolve()?, profile))
}

/// Resolved capacity pricing plus the profile name it started from.
pub fn resolve_capacity(
    args: &CapacityArgs,
    config: &ConfigDocument,
) -> CliResult<(CapacityPricing, String)> {
    let base = config
        .pricing
        .as_ref()
        .and_then(|p| p.capacity.clone())
        .unwrap_or_default();
    let profile = args
        .capacity_profile
        .clone()
        .or(base.profile)
        .unwrap_or_else(|| "ovh-advance2".to_string());
    let merged = CapacityConfig {
        profile: Some(profile.clone()),
        base_monthly: args.base_monthly.or(base.base_monthly),
        included_bps: args.included_bps.or(base.included_bps),
        increment_bps: args.increment_bps.or(base.increment_bps),
        increment_price: args.increment_price.or(base.increment_price),
    };
    Ok((merged.resolve()?, profile))
}

pub fn resolve_lb(args: &LbArgs, config: &ConfigDocument) -> CliResult<Option<LoadBalancerConfig>> {
    if args.no_lb {
        return Ok(None);
    }
    let from_config = config
        .pricing
        .as_ref()
        .and_then(|p| p.load_balancer.as_ref())
        .map(|lb| lb.resolve())
        .transpose()?;

    let any_flag = args.lb_zone.is_some()
        || args.backend_zone.is_some()
        || args.lb_hourly.is_some()
        || args.lb_per_gb.is_some()
        || args.no_ingress_hop;
    if !any_flag {
        return Ok(from_config);
    }

    let mut lb = match (&args.lb_zone, &args.backend_zone, from_config) {
        (Some(lb_zone), Some(backend_zone), _) => {
            LoadBalancerConfig::new(lb_zone.clone(), backend_zone.clone())
        }
        (None, None, Some(lb)) => lb,
        _ => {
            return Err(CliError::Config(
                "load balancer needs both --lb-zone and --backend-zone (or a config section)"
                    .into(),
            ))
        }
    };
    if let Some(rate) = args.lb_hourly {
        lb.hourly_rate = rate;
    }
    if let Some(rate) = args.lb_per_gb {
        lb.per_gb_processed = rate;
    }
    if args.no_ingress_hop {
        lb.charge_ingress_hop = false;
    }
    lb.validate()?;
    Ok(Some(lb))
}

pub fn resolve_policy(args: &PolicyArgs, config: &ConfigDocument) -> CliResult<DimensioningPolicy> {
    let base = config.policy.clone().unwrap_or_default();
    let merged = PolicyConfig {
        utilization: args.utilization.or(base.utilization),
        peak_window: args.peak_window.or(base.peak_window),
        direction: args
            .direction
            .map(|d| {
                match d {
                    DirectionArg::EgressOnly => "egress-only",
                    DirectionArg::All => "all",
                }
                .to_string()
            })
            .or(base.direction),
    };
    Ok(merged.resolve()?)
}

pub fn direction_name(direction: LinkDirection) -> &'static str {
    match direction {
        LinkDirection::EgressOnly => "egress-only",
        LinkDirection::All => "all",
    }
}

/// Resolve the pattern and egress share. When `sweep` is given, the swept
/// field may be omitted from the template; it is filled with a
/// placeholder that the sweep overwrites.
pub fn resolve_pattern(
    args: &PatternArgs,
    config: &ConfigDocument,
    sweep: Option<SweepArg>,
) -> CliResult<(TrafficPattern, f64)> {
    let base = config.pattern.clone().unwrap_or_default();
    let mut merged = PatternConfig {
        kind: args.pattern.clone().or(base.kind),
        rate: args.rate.or(base.rate),
        active_fraction: args.active_fraction.or(base.active_fraction),
        mean: args.mean.or(base.mean),
        amplitude: args.amplitude.or(base.amplitude),
        period: args.period.or(base.period),
        baseline: args.baseline.or(base.baseline),
        burst_rate: args.burst_rate.or(base.burst_rate),
        burst_probability: args.burst_probability.or(base.burst_probability),
        seed: args.seed.or(base.seed),
        egress_share: args.egress_share.or(base.egress_share),
    };
    match sweep {
        Some(SweepArg::Rate) => {
            merged.rate.get_or_insert(0.0);
            merged.mean.get_or_insert(0.0);
            merged.burst_rate.get_or_insert(0.0);
        }
        Some(SweepArg::ActiveFraction) => {
            merged.active_fraction.get_or_insert(1.0);
        }
        Some(SweepArg::EgressShare) => {
            merged.egress_share.get_or_insert(1.0);
        }
        None => {}
    }
    Ok(merged.resolve()?)
}
