//! Usage-based and capacity-based pricing models.
//!
//! [`UsagePricing`] bills per decimal gigabyte per traffic class, the
//! managed-cloud model. [`CapacityPricing`] bills a fixed monthly price for
//! a provisioned link plus a per-increment surcharge beyond the included
//! capacity, the bare-metal model; it is independent of bytes transferred.
//!
//! Billing uses decimal gigabytes (1 GB = 1e9 bytes), the cloud-provider
//! convention. Monitoring dashboards often report binary units; convert
//! before comparing.

use crate::error::{Error, Result};
use crate::traffic::{ClassTotals, TrafficClass};

/// Bytes per decimal gigabyte, the unit usage rates are quoted in.
pub const BYTES_PER_GB: f64 = 1e9;

/// Per-GB usage rates for each traffic class.
///
/// A rate left at `None` is unconfigured: billing a class that carries
/// bytes without a rate is a [`Error::MissingRate`] error rather than a
/// silent zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UsagePricing {
    pub in_zone: Option<f64>,
    pub cross_zone: Option<f64>,
    pub cross_region: Option<f64>,
    pub internet_egress: Option<f64>,
    pub internet_ingress: Option<f64>,
    /// Informational currency label.
    pub currency: String,
}

impl UsagePricing {
    /// An empty profile with no rates configured.
    pub fn empty() -> Self {
        Self {
            in_zone: None,
            cross_zone: None,
            cross_region: None,
            internet_egress: None,
            internet_ingress: None,
            currency: "USD".into(),
        }
    }

    /// The built-in `aws-like` profile: in-zone free, cross-zone $0.02/GB,
    /// internet egress $0.09/GB, internet ingress free. Cross-region has no
    /// default and must be supplied explicitly.
    pub fn aws_like() -> Self {
        Self {
            in_zone: Some(0.0),
            cross_zone: Some(0.02),
            cross_region: None,
            internet_egress: Some(0.09),
            internet_ingress: Some(0.0),
            currency: "USD".into(),
        }
    }

    pub fn rate_for(&self, class: TrafficClass) -> Option<f64> {
        match class {
            TrafficClass::InZone => self.in_zone,
            TrafficClass::CrossZone => self.cross_zone,
            TrafficClass::CrossRegion => self.cross_region,
            TrafficClass::InternetEgress => self.internet_egress,
            TrafficClass::InternetIngress => self.internet_ingress,
        }
    }

    pub fn set_rate(&mut self, class: TrafficClass, rate: f64) {
        let slot = match class {
            TrafficClass::InZone => &mut self.in_zone,
            TrafficClass::CrossZone => &mut self.cross_zone,
            TrafficClass::CrossRegion => &mut self.cross_region,
            TrafficClass::InternetEgress => &mut self.internet_egress,
            TrafficClass::InternetIngress => &mut self.internet_ingress,
        };
        *slot = Some(rate);
    }

    pub fn validate(&self) -> Result<()> {
        for class in TrafficClass::ALL {
            if let Some(rate) = self.rate_for(class) {
                if !(rate.is_finite() && rate >= 0.0) {
                    return Err(Error::InvalidPricing(format!(
                        "{class} rate {rate} must be finite and non-negative"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Load-balancer placement and rates.
///
/// When the load balancer sits in a different zone than its backend, every
/// internet byte also traverses the backend-to-LB hop and picks up one
/// cross-zone charge on top of its internet rate. The ingress half of that
/// composition can be disabled via `charge_ingress_hop`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadBalancerConfig {
    pub lb_zone: String,
    pub backend_zone: String,
    /// Currency per hour of load-balancer uptime.
    pub hourly_rate: f64,
    /// Currency per decimal GB processed by the load balancer.
    pub per_gb_processed: f64,
    /// Whether ingress internet bytes also pay the backend hop.
    pub charge_ingress_hop: bool,
}

impl LoadBalancerConfig {
    pub fn new(lb_zone: impl Into<String>, backend_zone: impl Into<String>) -> Self {
        Self {
            lb_zone: lb_zone.into(),
            backend_zone: backend_zone.into(),
            hourly_rate: 0.0,
            per_gb_processed: 0.0,
            charge_ingress_hop: true,
        }
    }

    pub fn crosses_zone(&self) -> bool {
        self.lb_zone != self.backend_zone
    }

    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("hourly_rate", self.hourly_rate),
            ("per_gb_processed", self.per_gb_processed),
        ] {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(Error::InvalidPricing(format!(
                    "load balancer {name} {rate} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// Fixed monthly pricing for a provisioned link.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPricing {
    /// Monthly price including `included_bps` of capacity.
    pub base_monthly: f64,
    /// Capacity included in the base price, bits per second.
    pub included_bps: f64,
    /// Size of each purchasable capacity increment, bits per second.
    pub increment_bps: f64,
    /// Monthly price per increment beyond the included capacity.
    pub increment_price: f64,
}

impl CapacityPricing {
    /// The built-in `ovh-advance2` profile: $176.66/month including
    /// 1 Gbit/s, $147.00/month per extra 1 Gbit/s.
    pub fn ovh_advance2() -> Self {
        Self {
            base_monthly: 176.66,
            included_bps: 1e9,
            increment_bps: 1e9,
            increment_price: 147.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.included_bps.is_finite() && self.included_bps > 0.0) {
            return Err(Error::InvalidPricing(format!(
                "included capacity {} must be positive",
                self.included_bps
            )));
        }
        if !(self.increment_bps.is_finite() && self.increment_bps > 0.0) {
            return Err(Error::InvalidPricing(format!(
                "increment size {} must be positive",
                self.increment_bps
            )));
        }
        for (name, price) in [
            ("base_monthly", self.base_monthly),
            ("increment_price", self.increment_price),
        ] {
            if !(price.is_finite() && price >= 0.0) {
                return Err(Error::InvalidPricing(format!(
                    "{name} {price} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// Per-class cost breakdown of a billing window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    per_class: [f64; 5],
    /// Load-balancer uptime plus processed-bytes charges.
    pub lb_cost: f64,
    /// Sum of the per-class components and the load-balancer cost.
    pub total: f64,
}

impl CostBreakdown {
    pub fn class_cost(&self, class: TrafficClass) -> f64 {
        self.per_class[class.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrafficClass, f64)> + '_ {
        TrafficClass::ALL
            .into_iter()
            .map(|c| (c, self.class_cost(c)))
    }
}

/// Price a window of classified traffic under usage-based rates.
///
/// Each class costs `bytes / 1e9 * rate`. With a load balancer in a
/// different zone than its backend, internet bytes additionally pay one
/// cross-zone charge for the backend hop; that charge is accounted under
/// the cross-zone class since that is the traffic it bills as. The
/// load-balancer cost itself is `hourly_rate * duration/3600 +
/// per_gb_processed * internet_GB`.
pub fn cloud_cost(
    totals: &ClassTotals,
    pricing: &UsagePricing,
    lb: Option<&LoadBalancerConfig>,
    duration_secs: f64,
) -> Result<CostBreakdown> {
    pricing.validate()?;
    if let Some(lb) = lb {
        lb.validate()?;
        if !(duration_secs.is_finite() && duration_secs > 0.0) {
            return Err(Error::InvalidDuration(duration_secs));
        }
    }

    let mut per_class = [0.0f64; 5];
    for class in TrafficClass::ALL {
        let bytes = totals.get(class);
        if bytes == 0 {
            continue;
        }
        let rate = pricing.rate_for(class).ok_or(Error::MissingRate(class))?;
        per_class[class.index()] = bytes as f64 / BYTES_PER_GB * rate;
    }

    let mut lb_cost = 0.0;
    if let Some(lb) = lb {
        if lb.crosses_zone() {
            let mut hop_bytes = totals.get(TrafficClass::InternetEgress);
            if lb.charge_ingress_hop {
                hop_bytes += totals.get(TrafficClass::InternetIngress);
            }
            if hop_bytes > 0 {
                let cross = pricing
                    .rate_for(TrafficClass::CrossZone)
                    .ok_or(Error::MissingRate(TrafficClass::CrossZone))?;
                per_class[TrafficClass::CrossZone.index()] +=
                    hop_bytes as f64 / BYTES_PER_GB * cross;
            }
        }
        lb_cost = lb.hourly_rate * duration_secs / 3600.0
            + lb.per_gb_processed * totals.internet_bytes() as f64 / BYTES_PER_GB;
    }

    let total = per_class.iter().sum::<f64>() + lb_cost;
    Ok(CostBreakdown {
        per_class,
        lb_cost,
        total,
    })
}

/// Monthly price of a provisioned link able to carry `required_bps`.
///
/// Capacity at or under the included allowance costs the base price;
/// beyond it, each started increment adds its monthly price. The result
/// does not depend on traffic volume, only on the provisioned capacity.
pub fn bare_metal_monthly_cost(required_bps: f64, pricing: &CapacityPricing) -> Result<f64> {
    pricing.validate()?;
    if !(required_bps.is_finite() && required_bps >= 0.0) {
        return Err(Error::InvalidPolicy(format!(
            "required capacity {required_bps} must be finite and non-negative"
        )));
    }
    let excess_increments = (required_bps - pricing.included_bps) / pricing.increment_bps;
    // one part in 1e9 of an increment absorbs float noise from upstream
    // rate arithmetic without disturbing genuine boundary crossings
    if excess_increments <= 1e-9 {
        return Ok(pricing.base_monthly);
    }
    let increments = (excess_increments - 1e-9).ceil();
    Ok(pricing.base_monthly + increments * pricing.increment_price)
}
