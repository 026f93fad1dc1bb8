//! Network cost modeling for Kubernetes workloads.
//!
//! The toolkit classifies traffic into billing classes against a declared
//! topology, prices it under the two rival models — usage-based (managed
//! cloud) and capacity-based (bare metal) — and answers the planning
//! questions that follow: what a measured window costs per month, what
//! link a workload needs, and at which point one model overtakes the
//! other.
//!
//! - [`traffic`]: topology, flow records, classification, rate series
//! - [`pricing`]: usage and capacity cost models, load-balancer composition
//! - [`dimensioning`]: peak detection and link sizing
//! - [`scenarios`]: traffic patterns, extrapolation, comparison, break-even
//! - [`ingest`]: Prometheus text, flow CSV, and Kubecost allocation parsers
//! - [`config`]: the TOML config document tying it together

pub mod config;
pub mod dimensioning;
pub mod error;
pub mod ingest;
pub mod pricing;
pub mod scenarios;
pub mod traffic;

pub use error::{Error, Result};
