//! Link capacity dimensioning from measured rate series.
//!
//! A bare-metal link must be provisioned ahead of time. The sizing rule is
//! a sliding-window peak over the rate series divided by a utilization
//! target, defaulting to 50% utilization at peak so the link never runs
//! hot enough to congest. The window mean (rather than the single hottest
//! bucket) defines the peak so that sampling noise does not drive
//! provisioning.

use crate::error::{Error, Result};
use crate::pricing::{bare_metal_monthly_cost, CapacityPricing};
use crate::traffic::{classify_flow, rate_series, RateSeries, Topology, Trace, TrafficClass};

/// Which flows count toward the link being dimensioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkDirection {
    /// Only traffic leaving a boundary: internet egress plus the
    /// cross-zone and cross-region classes.
    #[default]
    EgressOnly,
    /// All traffic regardless of class or direction.
    All,
}

/// Peak-detection and overprovisioning policy.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensioningPolicy {
    /// Fraction of link capacity allowed at peak, in (0, 1].
    pub utilization_target: f64,
    /// Averaging horizon for peak detection, seconds.
    pub peak_window: f64,
    pub direction: LinkDirection,
}

impl Default for DimensioningPolicy {
    fn default() -> Self {
        Self {
            utilization_target: 0.5,
            peak_window: 60.0,
            direction: LinkDirection::EgressOnly,
        }
    }
}

impl DimensioningPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.utilization_target.is_finite()
            && self.utilization_target > 0.0
            && self.utilization_target <= 1.0)
        {
            return Err(Error::InvalidPolicy(format!(
                "utilization target {} must be in (0, 1]",
                self.utilization_target
            )));
        }
        if !(self.peak_window.is_finite() && self.peak_window > 0.0) {
            return Err(Error::InvalidPolicy(format!(
                "peak window {} must be positive",
                self.peak_window
            )));
        }
        Ok(())
    }
}

/// Result of dimensioning a trace against a capacity-pricing profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensioned {
    /// Peak rate over the policy window, bits per second.
    pub peak_bps: f64,
    /// Required link capacity after the utilization rule, bits per second.
    pub capacity_bps: f64,
    /// Monthly price of that capacity.
    pub monthly_cost: f64,
}

/// Maximum windowed mean rate of a series, in bits per second.
///
/// The window slides bucket by bucket; its width is truncated to whole
/// buckets. A window wider than the series degenerates to the overall
/// mean.
pub fn peak_rate(series: &RateSeries, window_secs: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let width = series.bucket_width();
    if !(window_secs.is_finite() && window_secs >= width * (1.0 - 1e-12)) {
        return Err(Error::InvalidWindow(window_secs));
    }
    let k = ((window_secs / width) * (1.0 + 1e-12)).floor() as usize;
    let k = k.clamp(1, series.len());

    let bytes = series.bucket_bytes();
    let mut window_sum: f64 = bytes[..k].iter().sum();
    let mut max_sum = window_sum;
    for i in k..bytes.len() {
        window_sum += bytes[i] - bytes[i - k];
        if window_sum > max_sum {
            max_sum = window_sum;
        }
    }
    Ok(max_sum / (k as f64 * width) * 8.0)
}

/// Capacity needed to hold the peak at the policy's utilization target.
pub fn required_capacity(peak_bps: f64, policy: &DimensioningPolicy) -> Result<f64> {
    policy.validate()?;
    if !(peak_bps.is_finite() && peak_bps >= 0.0) {
        return Err(Error::InvalidPolicy(format!(
            "peak rate {peak_bps} must be finite and non-negative"
        )));
    }
    Ok(peak_bps / policy.utilization_target)
}

/// Dimension a trace: rate series, windowed peak, utilization rule,
/// monthly capacity price.
///
/// The policy's direction filter selects which flows load the link;
/// egress-only is the default since delivery traffic is what a serving
/// link must sustain. A trace with no span dimensions to zero capacity at
/// the fixed base price.
pub fn dimension(
    trace: &Trace,
    topology: &Topology,
    policy: &DimensioningPolicy,
    pricing: &CapacityPricing,
    bucket_width: f64,
) -> Result<Dimensioned> {
    policy.validate()?;
    pricing.validate()?;

    let (start, end) = match (trace.start(), trace.end()) {
        (Some(s), Some(e)) => (s, e),
        _ => {
            return Ok(Dimensioned {
                peak_bps: 0.0,
                capacity_bps: 0.0,
                monthly_cost: bare_metal_monthly_cost(0.0, pricing)?,
            })
        }
    };

    let filtered = match policy.direction {
        LinkDirection::All => trace.records().to_vec(),
        LinkDirection::EgressOnly => {
            let mut kept = Vec::new();
            for (index, record) in trace.records().iter().enumerate() {
                let class = classify_flow(record, topology).map_err(|e| Error::Flow {
                    index,
                    source: Box::new(e),
                })?;
                if matches!(
                    class,
                    TrafficClass::InternetEgress
                        | TrafficClass::CrossZone
                        | TrafficClass::CrossRegion
                ) {
                    kept.push(*record);
                }
            }
            kept
        }
    };

    let filtered = Trace::with_span(filtered, start, end)?;
    let series = rate_series(&filtered, bucket_width)?;
    let peak_bps = peak_rate(&series, policy.peak_window.max(bucket_width))?;
    let capacity_bps = required_capacity(peak_bps, policy)?;
    let monthly_cost = bare_metal_monthly_cost(capacity_bps, pricing)?;
    Ok(Dimensioned {
        peak_bps,
        capacity_bps,
        monthly_cost,
    })
}
