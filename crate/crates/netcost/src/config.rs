//! The TOML config document shared by the library and the CLI.
//!
//! One self-describing document carries up to four sections — `[topology]`,
//! `[pricing]`, `[policy]`, and `[pattern]` — any of which may be omitted.
//! Pricing sections can start from a built-in named profile (`aws-like`,
//! `ovh-advance2`) and override individual fields.

use serde::Deserialize;
use std::net::Ipv4Addr;

use crate::dimensioning::{DimensioningPolicy, LinkDirection};
use crate::error::{Error, Result};
use crate::pricing::{CapacityPricing, LoadBalancerConfig, UsagePricing};
use crate::scenarios::TrafficPattern;
use crate::traffic::{Subnet, Topology};

/// Parsed but unresolved config document.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub topology: Option<TopologyConfig>,
    pub pricing: Option<PricingConfig>,
    pub policy: Option<PolicyConfig>,
    pub pattern: Option<PatternConfig>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    pub cluster_region: String,
    #[serde(default)]
    pub internet_ips: Vec<String>,
    #[serde(default)]
    pub subnets: Vec<SubnetConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubnetConfig {
    pub cidr: String,
    pub zone: String,
    pub region: String,
}

impl TopologyConfig {
    pub fn build(&self) -> Result<Topology> {
        let subnets = self
            .subnets
            .iter()
            .map(|s| {
                Ok(Subnet {
                    cidr: s.cidr.parse()?,
                    zone: s.zone.clone(),
                    region: s.region.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let internet = self
            .internet_ips
            .iter()
            .map(|ip| {
                ip.parse::<Ipv4Addr>()
                    .map_err(|_| Error::InvalidTopology(format!("'{ip}' is not an IPv4 address")))
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::new(subnets, internet, self.cluster_region.clone())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricingConfig {
    pub usage: Option<UsageConfig>,
    pub capacity: Option<CapacityConfig>,
    pub load_balancer: Option<LbConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageConfig {
    /// Built-in starting profile; currently `aws-like`.
    pub profile: Option<String>,
    pub in_zone: Option<f64>,
    pub cross_zone: Option<f64>,
    pub cross_region: Option<f64>,
    pub internet_egress: Option<f64>,
    pub internet_ingress: Option<f64>,
    pub currency: Option<String>,
}

impl UsageConfig {
    pub fn resolve(&self) -> Result<UsagePricing> {
        let mut pricing = match self.profile.as_deref() {
            None => UsagePricing::empty(),
            Some("aws-like") => UsagePricing::aws_like(),
            Some(other) => {
                return Err(Error::Config(format!(
                    "unknown usage pricing profile '{other}' (known: aws-like)"
                )))
            }
        };
        if let Some(r) = self.in_zone {
            pricing.in_zone = Some(r);
        }
        if let Some(r) = self.cross_zone {
            pricing.cross_zone = Some(r);
        }
        if let Some(r) = self.cross_region {
            pricing.cross_region = Some(r);
        }
        if let Some(r) = self.internet_egress {
            pricing.internet_egress = Some(r);
        }
        if let Some(r) = self.internet_ingress {
            pricing.internet_ingress = Some(r);
        }
        if let Some(c) = &self.currency {
            pricing.currency = c.clone();
        }
        pricing.validate()?;
        Ok(pricing)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityConfig {
    /// Built-in starting profile; currently `ovh-advance2`.
    pub profile: Option<String>,
    pub base_monthly: Option<f64>,
    pub included_bps: Option<f64>,
    pub increment_bps: Option<f64>,
    pub increment_price: Option<f64>,
}

impl CapacityConfig {
    pub fn resolve(&self) -> Result<CapacityPricing> {
        let mut pricing = match self.profile.as_deref() {
            None => None,
            Some("ovh-advance2") => Some(CapacityPricing::ovh_advance2()),
            Some(other) => {
                return Err(Error::Config(format!(
                    "unknown capacity pricing profile '{other}' (known: ovh-advance2)"
                )))
            }
        };
        let pricing = match &mut pricing {
            Some(p) => {
                if let Some(v) = self.base_monthly {
                    p.base_monthly = v;
                }
                if let Some(v) = self.included_bps {
                    p.included_bps = v;
                }
                if let Some(v) = self.increment_bps {
                    p.increment_bps = v;
                }
                if let Some(v) = self.increment_price {
                    p.increment_price = v;
                }
                p.clone()
            }
            None => {
                let require = |name: &str, v: Option<f64>| {
                    v.ok_or_else(|| {
                        Error::Config(format!(
                            "capacity pricing needs '{name}' when no profile is given"
                        ))
                    })
                };
                CapacityPricing {
                    base_monthly: require("base_monthly", self.base_monthly)?,
                    included_bps: require("included_bps", self.included_bps)?,
                    increment_bps: require("increment_bps", self.increment_bps)?,
                    increment_price: require("increment_price", self.increment_price)?,
                }
            }
        };
        pricing.validate()?;
        Ok(pricing)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LbConfig {
    pub lb_zone: String,
    pub backend_zone: String,
    #[serde(default)]
    pub hourly_rate: f64,
    #[serde(default)]
    pub per_gb_processed: f64,
    #[serde(default = "default_true")]
    pub charge_ingress_hop: bool,
}

fn default_true() -> bool {
    true
}

impl LbConfig {
    pub fn resolve(&self) -> Result<LoadBalancerConfig> {
        let lb = LoadBalancerConfig {
            lb_zone: self.lb_zone.clone(),
            backend_zone: self.backend_zone.clone(),
            hourly_rate: self.hourly_rate,
            per_gb_processed: self.per_gb_processed,
            charge_ingress_hop: self.charge_ingress_hop,
        };
        lb.validate()?;
        Ok(lb)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub utilization: Option<f64>,
    pub peak_window: Option<f64>,
    /// `egress-only` or `all`.
    pub direction: Option<String>,
}

impl PolicyConfig {
    pub fn resolve(&self) -> Result<DimensioningPolicy> {
        let mut policy = DimensioningPolicy::default();
        if let Some(u) = self.utilization {
            policy.utilization_target = u;
        }
        if let Some(w) = self.peak_window {
            policy.peak_window = w;
        }
        if let Some(d) = &self.direction {
            policy.direction = match d.as_str() {
                "egress-only" => LinkDirection::EgressOnly,
                "all" => LinkDirection::All,
                other => {
                    return Err(Error::Config(format!(
                        "unknown link direction '{other}' (known: egress-only, all)"
                    )))
                }
            };
        }
        policy.validate()?;
        Ok(policy)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    /// `constant`, `duty-cycle`, `diurnal`, or `bursty`.
    pub kind: Option<String>,
    pub rate: Option<f64>,
    pub active_fraction: Option<f64>,
    pub mean: Option<f64>,
    pub amplitude: Option<f64>,
    pub period: Option<f64>,
    pub baseline: Option<f64>,
    pub burst_rate: Option<f64>,
    pub burst_probability: Option<f64>,
    pub seed: Option<u64>,
    pub egress_share: Option<f64>,
}

impl PatternConfig {
    /// Resolve to a pattern plus the egress share (default 1.0).
    pub fn resolve(&self) -> Result<(TrafficPattern, f64)> {
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::Config("pattern needs a 'kind'".into()))?;
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::Config(format!("{kind} pattern needs '{name}'")))
        };
        let pattern = match kind {
            "constant" => TrafficPattern::Constant {
                rate: need("rate", self.rate)?,
            },
            "duty-cycle" => TrafficPattern::DutyCycle {
                rate: need("rate", self.rate)?,
                active_fraction: need("active_fraction", self.active_fraction)?,
            },
            "diurnal" => TrafficPattern::Diurnal {
                mean: need("mean", self.mean)?,
                amplitude: need("amplitude", self.amplitude)?,
                period: need("period", self.period)?,
            },
            "bursty" => TrafficPattern::Bursty {
                baseline: need("baseline", self.baseline)?,
                burst_rate: need("burst_rate", self.burst_rate)?,
                burst_probability: need("burst_probability", self.burst_probability)?,
                seed: self.seed.unwrap_or(0),
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown pattern kind '{other}' (known: constant, duty-cycle, diurnal, bursty)"
                )))
            }
        };
        pattern.validate()?;
        let share = self.egress_share.unwrap_or(1.0);
        Ok((pattern, share))
    }
}
