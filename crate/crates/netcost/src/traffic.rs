//! Traffic topology, flow records, and billing-class classification.
//!
//! A [`Topology`] declares which IPv4 subnets belong to which availability
//! zone and region, plus the set of static addresses tagged as
//! internet-facing. Every [`FlowRecord`] between two endpoints resolves to
//! exactly one [`TrafficClass`], the unit at which usage-based billing
//! applies. [`aggregate_trace`] sums a trace into per-class byte totals and
//! [`rate_series`] buckets it into a transfer-rate time series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::net::Ipv4Addr;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An IPv4 network prefix. The address is stored masked to the prefix
/// length, so `10.0.1.5/24` normalizes to `10.0.1.0/24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cidr {
    network: u32,
    prefix_len: u8,
}

impl Cidr {
    pub fn new(addr: Ipv4Addr, prefix_len: u8) -> Result<Self> {
        if prefix_len > 32 {
            return Err(Error::InvalidTopology(format!(
                "prefix length {prefix_len} exceeds 32"
            )));
        }
        let network = u32::from(addr) & Self::mask(prefix_len);
        Ok(Self {
            network,
            prefix_len,
        })
    }

    fn mask(prefix_len: u8) -> u32 {
        if prefix_len == 0 {
            0
        } else {
            u32::MAX << (32 - prefix_len)
        }
    }

    pub fn contains(&self, addr: Ipv4Addr) -> bool {
        u32::from(addr) & Self::mask(self.prefix_len) == self.network
    }

    pub fn network(&self) -> Ipv4Addr {
        Ipv4Addr::from(self.network)
    }

    pub fn prefix_len(&self) -> u8 {
        self.prefix_len
    }

    /// A deterministic host address inside the prefix: the first address
    /// after the network address, or the network address itself for /32
    /// and /31 prefixes where no room exists.
    pub fn first_host(&self) -> Ipv4Addr {
        if self.prefix_len >= 31 {
            self.network()
        } else {
            Ipv4Addr::from(self.network + 1)
        }
    }
}

impl FromStr for Cidr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (addr, len) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidTopology(format!("'{s}' is not CIDR notation")))?;
        let addr: Ipv4Addr = addr
            .parse()
            .map_err(|_| Error::InvalidTopology(format!("'{addr}' is not an IPv4 address")))?;
        let len: u8 = len
            .parse()
            .map_err(|_| Error::InvalidTopology(format!("'{len}' is not a prefix length")))?;
        Cidr::new(addr, len)
    }
}

impl fmt::Display for Cidr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.network(), self.prefix_len)
    }
}

/// One subnet entry of a topology: a prefix and the zone/region it sits in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subnet {
    pub cidr: Cidr,
    pub zone: String,
    pub region: String,
}

/// Where an address resolves within a topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution<'a> {
    /// The address falls inside a cluster subnet.
    Zone { zone: &'a str, region: &'a str },
    /// The address is internet-facing: explicitly tagged, or matching no
    /// subnet prefix.
    Internet,
}

/// Declarative map of cluster subnets to zones and regions.
///
/// Addresses resolve by longest-prefix match over the subnets; anything
/// matching no prefix is internet traffic, as is anything in the
/// explicitly tagged internet address set (the static ingress IPs).
#[derive(Debug, Clone)]
pub struct Topology {
    subnets: Vec<Subnet>,
    internet_addresses: BTreeSet<Ipv4Addr>,
    cluster_region: String,
}

impl Topology {
    /// Build and validate a topology.
    ///
    /// Validation rejects duplicate prefixes (two subnets with the same
    /// network/length would make longest-prefix match ambiguous), a zone id
    /// appearing under two different regions, and tagged internet addresses
    /// that fall inside a cluster subnet.
    pub fn new(
        subnets: Vec<Subnet>,
        internet_addresses: impl IntoIterator<Item = Ipv4Addr>,
        cluster_region: impl Into<String>,
    ) -> Result<Self> {
        let internet_addresses: BTreeSet<Ipv4Addr> = internet_addresses.into_iter().collect();

        let mut seen: BTreeSet<Cidr> = BTreeSet::new();
        let mut zone_regions: BTreeMap<&str, &str> = BTreeMap::new();
        for subnet in &subnets {
            if !seen.insert(subnet.cidr) {
                return Err(Error::InvalidTopology(format!(
                    "duplicate subnet prefix {}",
                    subnet.cidr
                )));
            }
            match zone_regions.entry(subnet.zone.as_str()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(subnet.region.as_str());
                }
                std::collections::btree_map::Entry::Occupied(e) => {
                    if *e.get() != subnet.region {
                        return Err(Error::InvalidTopology(format!(
                            "zone '{}' mapped to both region '{}' and region '{}'",
                            subnet.zone,
                            e.get(),
                            subnet.region
                        )));
                    }
                }
            }
        }

        for addr in &internet_addresses {
            if let Some(subnet) = subnets.iter().find(|s| s.cidr.contains(*addr)) {
                return Err(Error::InvalidTopology(format!(
                    "internet address {addr} falls inside cluster subnet {}",
                    subnet.cidr
                )));
            }
        }

        Ok(Self {
            subnets,
            internet_addresses,
            cluster_region: cluster_region.into(),
        })
    }

    pub fn subnets(&self) -> &[Subnet] {
        &self.subnets
    }

    pub fn internet_addresses(&self) -> impl Iterator<Item = Ipv4Addr> + '_ {
        self.internet_addresses.iter().copied()
    }

    pub fn cluster_region(&self) -> &str {
        &self.cluster_region
    }

    /// Resolve an address by longest-prefix match; unmatched addresses and
    /// tagged internet addresses resolve to [`Resolution::Internet`].
    pub fn resolve(&self, addr: Ipv4Addr) -> Resolution<'_> {
        if self.internet_addresses.contains(&addr) {
            return Resolution::Internet;
        }
        let best = self
            .subnets
            .iter()
            .filter(|s| s.cidr.contains(addr))
            .max_by_key(|s| s.cidr.prefix_len());
        match best {
            Some(subnet) => Resolution::Zone {
                zone: &subnet.zone,
                region: &subnet.region,
            },
            None => Resolution::Internet,
        }
    }

    /// A deterministic cluster-internal address, used when synthesizing
    /// traffic: the first host of the first subnet.
    pub fn sample_cluster_address(&self) -> Result<Ipv4Addr> {
        self.subnets
            .first()
            .map(|s| s.cidr.first_host())
            .ok_or_else(|| Error::InvalidTopology("topology has no subnets".into()))
    }

    /// A deterministic internet-facing address, used when synthesizing
    /// traffic: the first tagged internet address if any, otherwise a
    /// documentation-range address that resolves to internet.
    pub fn sample_internet_address(&self) -> Result<Ipv4Addr> {
        if let Some(addr) = self.internet_addresses.iter().next() {
            return Ok(*addr);
        }
        const CANDIDATES: [Ipv4Addr; 3] = [
            Ipv4Addr::new(203, 0, 113, 1),
            Ipv4Addr::new(198, 51, 100, 1),
            Ipv4Addr::new(192, 0, 2, 1),
        ];
        CANDIDATES
            .into_iter()
            .find(|a| self.resolve(*a) == Resolution::Internet)
            .ok_or_else(|| {
                Error::InvalidTopology("no address resolves to internet in this topology".into())
            })
    }
}

/// The five billing classes; every flow maps to exactly one.
///
/// Internet traffic is split by direction because providers price egress
/// and ingress asymmetrically (ingress is typically free).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrafficClass {
    InZone,
    CrossZone,
    CrossRegion,
    InternetEgress,
    InternetIngress,
}

impl TrafficClass {
    /// All classes, in stable display order.
    pub const ALL: [TrafficClass; 5] = [
        TrafficClass::InZone,
        TrafficClass::CrossZone,
        TrafficClass::CrossRegion,
        TrafficClass::InternetEgress,
        TrafficClass::InternetIngress,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TrafficClass::InZone => "in-zone",
            TrafficClass::CrossZone => "cross-zone",
            TrafficClass::CrossRegion => "cross-region",
            TrafficClass::InternetEgress => "internet-egress",
            TrafficClass::InternetIngress => "internet-ingress",
        }
    }

    pub(crate) fn index(&self) -> usize {
        match self {
            TrafficClass::InZone => 0,
            TrafficClass::CrossZone => 1,
            TrafficClass::CrossRegion => 2,
            TrafficClass::InternetEgress => 3,
            TrafficClass::InternetIngress => 4,
        }
    }
}

impl fmt::Display for TrafficClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One timestamped byte transfer between two endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
    pub src: Ipv4Addr,
    pub dst: Ipv4Addr,
    pub bytes: u64,
}

impl FlowRecord {
    pub fn new(timestamp: f64, src: Ipv4Addr, dst: Ipv4Addr, bytes: u64) -> Result<Self> {
        if !timestamp.is_finite() {
            return Err(Error::InvalidFlow(format!(
                "timestamp {timestamp} is not finite"
            )));
        }
        Ok(Self {
            timestamp,
            src,
            dst,
            bytes,
        })
    }
}

/// A time-ordered list of flow records covering a span `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    records: Vec<FlowRecord>,
    span: Option<(f64, f64)>,
}

impl Trace {
    /// Build a trace from records, deriving the span from the earliest and
    /// latest timestamps. An empty record set yields a trace with no span.
    pub fn from_records(mut records: Vec<FlowRecord>) -> Self {
        records.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
        let span = match (records.first(), records.last()) {
            (Some(first), Some(last)) => Some((first.timestamp, last.timestamp)),
            _ => None,
        };
        Self { records, span }
    }

    /// Build a trace with an explicit span. Every record must fall inside
    /// `[start, end]` and the span must have positive width.
    pub fn with_span(mut records: Vec<FlowRecord>, start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidDuration(end - start));
        }
        for r in &records {
            if r.timestamp < start || r.timestamp > end {
                return Err(Error::InvalidFlow(format!(
                    "record timestamp {} outside span [{start}, {end}]",
                    r.timestamp
                )));
            }
        }
        records.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
        Ok(Self {
            records,
            span: Some((start, end)),
        })
    }

    pub fn records(&self) -> &[FlowRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn start(&self) -> Option<f64> {
        self.span.map(|(s, _)| s)
    }

    pub fn end(&self) -> Option<f64> {
        self.span.map(|(_, e)| e)
    }

    /// Span width in seconds; `None` for traces with no records and no
    /// explicit span.
    pub fn duration(&self) -> Option<f64> {
        self.span.map(|(s, e)| e - s)
    }

    pub fn total_bytes(&self) -> u64 {
        self.records.iter().map(|r| r.bytes).sum()
    }
}

/// Byte totals per traffic class.
///
/// Conservation holds by construction: the sum over all classes equals the
/// total bytes of the records that were aggregated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassTotals {
    bytes: [u64; 5],
}

impl ClassTotals {
    pub fn of(entries: &[(TrafficClass, u64)]) -> Self {
        let mut totals = Self::default();
        for (class, bytes) in entries {
            totals.add(*class, *bytes);
        }
        totals
    }

    pub fn get(&self, class: TrafficClass) -> u64 {
        self.bytes[class.index()]
    }

    pub fn add(&mut self, class: TrafficClass, bytes: u64) {
        self.bytes[class.index()] += bytes;
    }

    pub fn total_bytes(&self) -> u64 {
        self.bytes.iter().sum()
    }

    /// Bytes crossing the internet boundary in either direction.
    pub fn internet_bytes(&self) -> u64 {
        self.get(TrafficClass::InternetEgress) + self.get(TrafficClass::InternetIngress)
    }

    pub fn merge(&self, other: &ClassTotals) -> ClassTotals {
        let mut merged = *self;
        for class in TrafficClass::ALL {
            merged.add(class, other.get(class));
        }
        merged
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrafficClass, u64)> + '_ {
        TrafficClass::ALL.into_iter().map(|c| (c, self.get(c)))
    }
}

/// A bucketed transfer-rate series.
///
/// Bytes are accounted per bucket and rates derived on demand, so byte
/// totals stay exact under integer accounting while rates carry the
/// division. Bucket `i` covers `[start + i*w, start + (i+1)*w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    start: f64,
    bucket_width: f64,
    bucket_bytes: Vec<f64>,
}

impl RateSeries {
    pub fn new(start: f64, bucket_width: f64, bucket_bytes: Vec<f64>) -> Result<Self> {
        if !(bucket_width.is_finite() && bucket_width > 0.0) {
            return Err(Error::InvalidBucket(bucket_width));
        }
        if !start.is_finite() {
            return Err(Error::InvalidDuration(start));
        }
        if let Some(bad) = bucket_bytes.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(Error::InvalidFlow(format!("negative bucket bytes: {bad}")));
        }
        Ok(Self {
            start,
            bucket_width,
            bucket_bytes,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.bucket_width * self.bucket_bytes.len() as f64
    }

    pub fn bucket_width(&self) -> f64 {
        self.bucket_width
    }

    pub fn len(&self) -> usize {
        self.bucket_bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bucket_bytes.is_empty()
    }

    pub fn bucket_bytes(&self) -> &[f64] {
        &self.bucket_bytes
    }

    /// Rate of bucket `i` in bytes per second.
    pub fn rate(&self, i: usize) -> f64 {
        self.bucket_bytes[i] / self.bucket_width
    }

    pub fn rates(&self) -> impl Iterator<Item = f64> + '_ {
        self.bucket_bytes.iter().map(|b| b / self.bucket_width)
    }

    /// `(bucket start timestamp, bytes-per-second rate)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bucket_bytes.iter().enumerate().map(|(i, b)| {
            (
                self.start + i as f64 * self.bucket_width,
                b / self.bucket_width,
            )
        })
    }

    pub fn total_bytes(&self) -> f64 {
        self.bucket_bytes.iter().sum()
    }

    /// Mean rate over the whole series in bytes per second.
    pub fn mean_rate(&self) -> f64 {
        if self.bucket_bytes.is_empty() {
            return 0.0;
        }
        self.total_bytes() / (self.bucket_width * self.bucket_bytes.len() as f64)
    }
}

/// Classify one flow into its billing class.
///
/// Direction is inferred from endpoint resolution: a flow from a cluster
/// subnet to an internet address is egress, the reverse is ingress. A flow
/// between two internet endpoints cannot involve the cluster and is
/// rejected, surfacing mislabelled topologies early. A flow with equal
/// endpoints resolves in-zone.
pub fn classify_flow(flow: &FlowRecord, topology: &Topology) -> Result<TrafficClass> {
    match (topology.resolve(flow.src), topology.resolve(flow.dst)) {
        (
            Resolution::Zone {
                zone: src_zone,
                region: src_region,
            },
            Resolution::Zone {
                zone: dst_zone,
                region: dst_region,
            },
        ) => {
            if src_zone == dst_zone {
                Ok(TrafficClass::InZone)
            } else if src_region == dst_region {
                Ok(TrafficClass::CrossZone)
            } else {
                Ok(TrafficClass::CrossRegion)
            }
        }
        (Resolution::Zone { .. }, Resolution::Internet) => Ok(TrafficClass::InternetEgress),
        (Resolution::Internet, Resolution::Zone { .. }) => Ok(TrafficClass::InternetIngress),
        (Resolution::Internet, Resolution::Internet) => Err(Error::InvalidTopology(format!(
            "flow {} -> {} resolves to internet on both ends",
            flow.src, flow.dst
        ))),
    }
}

/// Sum a trace into per-class byte totals.
///
/// Classification errors are annotated with the index of the offending
/// record.
pub fn aggregate_trace(trace: &Trace, topology: &Topology) -> Result<ClassTotals> {
    let mut totals = ClassTotals::default();
    for (index, record) in trace.records().iter().enumerate() {
        let class = classify_flow(record, topology).map_err(|e| Error::Flow {
            index,
            source: Box::new(e),
        })?;
        totals.add(class, record.bytes);
    }
    Ok(totals)
}

/// Bucket a trace into a transfer-rate series covering `[start, end)`.
///
/// Buckets with no flows are present with rate zero. A record timestamped
/// exactly at `end` is accounted in the final bucket so that byte totals
/// are conserved.
pub fn rate_series(trace: &Trace, bucket_width: f64) -> Result<RateSeries> {
    if !(bucket_width.is_finite() && bucket_width > 0.0) {
        return Err(Error::InvalidBucket(bucket_width));
    }
    let (start, end) = match (trace.start(), trace.end()) {
        (Some(s), Some(e)) if e > s => (s, e),
        _ => return Err(Error::EmptySpan),
    };
    let span = end - start;
    // ceil with a relative guard so an exact multiple does not gain a bucket
    let n_buckets = ((span / bucket_width) * (1.0 - 1e-12)).ceil().max(1.0) as usize;

    let mut bytes = vec![0u64; n_buckets];
    for record in trace.records() {
        let raw = ((record.timestamp - start) / bucket_width).floor();
        let idx = (raw.max(0.0) as usize).min(n_buckets - 1);
        bytes[idx] += record.bytes;
    }
    RateSeries::new(
        start,
        bucket_width,
        bytes.into_iter().map(|b| b as f64).collect(),
    )
}
