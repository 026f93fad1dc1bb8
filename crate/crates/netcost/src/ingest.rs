//! Parsers for external evidence: Prometheus text-exposition scrapes,
//! flow-record CSV, and a minimal Kubecost allocation document.
//!
//! All timestamps are Unix seconds; Prometheus millisecond timestamps are
//! converted at the parse boundary. Parsers are stateless and reentrant.

use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::traffic::{ClassTotals, FlowRecord, RateSeries, Trace, TrafficClass};

/// One cumulative-counter observation from a scrape.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterSample {
    pub name: String,
    pub labels: BTreeMap<String, String>,
    pub value: f64,
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
}

/// How to treat a line the parser cannot make sense of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Fail with a [`Error::Parse`] naming the line.
    #[default]
    Strict,
    /// Skip the line and report it as a warning.
    Lenient,
}

/// Parse a Prometheus text-exposition (v0.0.4) document.
///
/// Data lines are `name{label="value",...} value [timestamp_ms]`; `#`
/// lines (HELP, TYPE, comments) and blank lines are skipped. Samples
/// without a timestamp take `scrape_time`. In lenient mode malformed
/// lines are skipped and reported in the returned warning list.
pub fn parse_prometheus_text(
    document: &str,
    scrape_time: f64,
    mode: ParseMode,
) -> Result<(Vec<CounterSample>, Vec<String>)> {
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in document.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_exposition_line(line, scrape_time) {
            Ok(sample) => samples.push(sample),
            Err(message) => match mode {
                ParseMode::Strict => {
                    return Err(Error::Parse {
                        line: line_no,
                        message,
                    })
                }
                ParseMode::Lenient => warnings.push(format!("line {line_no}: {message}")),
            },
        }
    }
    Ok((samples, warnings))
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == ':'
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c.is_ascii_digit()
}

fn parse_exposition_line(
    line: &str,
    scrape_time: f64,
) -> std::result::Result<CounterSample, String> {
    let chars: Vec<char> = line.chars().collect();
    let mut pos = 0;

    // metric name
    if pos >= chars.len() || !is_name_start(chars[pos]) {
        return Err("expected metric name".into());
    }
    let name_start = pos;
    while pos < chars.len() && is_name_char(chars[pos]) {
        pos += 1;
    }
    let name: String = chars[name_start..pos].iter().collect();

    // optional label set
    let mut labels = BTreeMap::new();
    if pos < chars.len() && chars[pos] == '{' {
        pos += 1;
        loop {
            while pos < chars.len() && (chars[pos] == ' ' || chars[pos] == '\t') {
                pos += 1;
            }
            if pos < chars.len() && chars[pos] == '}' {
                pos += 1;
                break;
            }
            if pos >= chars.len() || !(chars[pos].is_ascii_alphabetic() || chars[pos] == '_') {
                return Err("expected label name".into());
            }
            let label_start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            let label_name: String = chars[label_start..pos].iter().collect();
            if pos >= chars.len() || chars[pos] != '=' {
                return Err(format!("expected '=' after label '{label_name}'"));
            }
            pos += 1;
            if pos >= chars.len() || chars[pos] != '"' {
                return Err(format!(
                    "expected '\"' opening value of label '{label_name}'"
                ));
            }
            pos += 1;
            let mut value = String::new();
            loop {
                if pos >= chars.len() {
                    return Err(format!("unterminated value for label '{label_name}'"));
                }
                match chars[pos] {
                    '\\' => {
                        pos += 1;
                        match chars.get(pos) {
                            Some('\\') => value.push('\\'),
                            Some('"') => value.push('"'),
                            Some('n') => value.push('\n'),
                            other => return Err(format!("invalid escape {other:?}")),
                        }
                        pos += 1;
                    }
                    '"' => {
                        pos += 1;
                        break;
                    }
                    c => {
                        value.push(c);
                        pos += 1;
                    }
                }
            }
            labels.insert(label_name, value);
            if pos < chars.len() && chars[pos] == ',' {
                pos += 1;
                continue;
            }
            if pos < chars.len() && chars[pos] == '}' {
                pos += 1;
                break;
            }
            return Err("expected ',' or '}' in label set".into());
        }
    }

    // value and optional timestamp, blank-separated
    let rest: String = chars[pos..].iter().collect();
    let mut tokens = rest.split_ascii_whitespace();
    let value_token = tokens.next().ok_or("missing sample value")?;
    let value: f64 = value_token
        .parse()
        .map_err(|_| format!("'{value_token}' is not a number"))?;
    if value.is_nan() || value < 0.0 {
        return Err(format!("counter value {value} is negative or NaN"));
    }
    let timestamp = match tokens.next() {
        Some(ts_token) => {
            let ms: i64 = ts_token
                .parse()
                .map_err(|_| format!("'{ts_token}' is not a millisecond timestamp"))?;
            ms as f64 / 1000.0
        }
        None => scrape_time,
    };
    if let Some(extra) = tokens.next() {
        return Err(format!("unexpected trailing token '{extra}'"));
    }
    Ok(CounterSample {
        name,
        labels,
        value,
        timestamp,
    })
}

/// How a counter decrease (process restart) is accounted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResetPolicy {
    /// The counter restarted from zero, so the new value is the interval's
    /// delta. The conventional monitoring treatment.
    #[default]
    RestartFromZero,
    /// Discard the interval: it contributes zero bytes.
    SkipInterval,
}

/// Derive a rate series from cumulative counter samples of one series.
///
/// Requires at least two samples with strictly increasing, uniformly
/// spaced timestamps. Rates are never negative: a decrease is handled per
/// the [`ResetPolicy`].
pub fn counters_to_rates(samples: &[CounterSample], reset: ResetPolicy) -> Result<RateSeries> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples(samples.len()));
    }
    let interval = samples[1].timestamp - samples[0].timestamp;
    for (i, pair) in samples.windows(2).enumerate() {
        let dt = pair[1].timestamp - pair[0].timestamp;
        if dt <= 0.0 {
            return Err(Error::NonMonotonicTime(i + 1));
        }
        if (dt - interval).abs() > interval * 1e-6 {
            return Err(Error::NonUniformSpacing(i + 1));
        }
    }

    let deltas: Vec<f64> = samples
        .windows(2)
        .map(|pair| {
            if pair[1].value >= pair[0].value {
                pair[1].value - pair[0].value
            } else {
                match reset {
                    ResetPolicy::RestartFromZero => pair[1].value,
                    ResetPolicy::SkipInterval => 0.0,
                }
            }
        })
        .collect();
    RateSeries::new(samples[0].timestamp, interval, deltas)
}

const FLOW_CSV_HEADER: &str = "timestamp,src,dst,bytes";

/// Parse a flow-record CSV document into a trace.
///
/// The header `timestamp,src,dst,bytes` is required; line endings may be
/// LF or CRLF. The trace span is derived from the earliest and latest
/// record, so an empty body yields a trace with no span.
pub fn parse_flow_csv(document: &str) -> Result<Trace> {
    let mut lines = document.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == FLOW_CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{FLOW_CSV_HEADER}', got '{header}'"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: format!("empty document; expected header '{FLOW_CSV_HEADER}'"),
            })
        }
    }

    let mut records = Vec::new();
    for (i, raw) in lines {
        let row = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: row,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let timestamp: f64 = fields[0].parse().map_err(|_| Error::Parse {
            line: row,
            message: format!("'{}' is not a timestamp", fields[0]),
        })?;
        let src: Ipv4Addr = fields[1].parse().map_err(|_| Error::Parse {
            line: row,
            message: format!("'{}' is not an IPv4 address", fields[1]),
        })?;
        let dst: Ipv4Addr = fields[2].parse().map_err(|_| Error::Parse {
            line: row,
            message: format!("'{}' is not an IPv4 address", fields[2]),
        })?;
        let bytes_field = fields[3].trim();
        let bytes: u64 = match bytes_field.parse() {
            Ok(b) => b,
            Err(_) => {
                if bytes_field.starts_with('-') && bytes_field[1..].parse::<u64>().is_ok() {
                    return Err(Error::NegativeBytes { row });
                }
                return Err(Error::Parse {
                    line: row,
                    message: format!("'{bytes_field}' is not a byte count"),
                });
            }
        };
        records.push(
            FlowRecord::new(timestamp, src, dst, bytes).map_err(|e| Error::Parse {
                line: row,
                message: e.to_string(),
            })?,
        );
    }
    Ok(Trace::from_records(records))
}

/// Serialize a trace to the flow CSV format. `parse_flow_csv` inverts this
/// exactly.
pub fn serialize_flow_csv(trace: &Trace) -> String {
    let mut out = String::from(FLOW_CSV_HEADER);
    out.push('\n');
    for record in trace.records() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            record.timestamp, record.src, record.dst, record.bytes
        ));
    }
    out
}

/// Result of parsing a Kubecost allocation document: classified byte
/// totals plus the measured network cost and window length, ready to feed
/// a monthly extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct KubecostAllocation {
    pub totals: ClassTotals,
    pub network_cost: f64,
    /// Window length in seconds.
    pub window_duration: f64,
}

#[derive(Deserialize)]
struct KubecostDoc {
    #[serde(rename = "schemaVersion")]
    schema_version: u32,
    window: KubecostWindow,
    allocations: Vec<KubecostEntry>,
}

#[derive(Deserialize)]
struct KubecostWindow {
    /// Unix seconds.
    start: f64,
    /// Unix seconds.
    end: f64,
}

#[derive(Deserialize)]
struct KubecostEntry {
    #[allow(dead_code)]
    #[serde(default)]
    name: String,
    #[serde(rename = "networkCost")]
    network_cost: f64,
    #[serde(rename = "inZoneBytes", default)]
    in_zone_bytes: u64,
    #[serde(rename = "crossZoneBytes", default)]
    cross_zone_bytes: u64,
    #[serde(rename = "crossRegionBytes", default)]
    cross_region_bytes: u64,
    #[serde(rename = "internetEgressBytes", default)]
    internet_egress_bytes: u64,
    #[serde(rename = "internetIngressBytes", default)]
    internet_ingress_bytes: u64,
}

/// Parse the minimal Kubecost allocation subset documented in
/// `docs/kubecost-schema.md`. Byte totals are summed across allocations,
/// as is the network cost.
pub fn parse_kubecost_allocation(document: &str) -> Result<KubecostAllocation> {
    let doc: KubecostDoc =
        serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    if doc.schema_version != 1 {
        return Err(Error::Schema(format!(
            "unsupported schemaVersion {}; this reader understands version 1",
            doc.schema_version
        )));
    }
    let window_duration = doc.window.end - doc.window.start;
    if !(window_duration.is_finite() && window_duration > 0.0) {
        return Err(Error::Schema(format!(
            "window end {} must be after start {}",
            doc.window.end, doc.window.start
        )));
    }
    let mut totals = ClassTotals::default();
    let mut network_cost = 0.0;
    for entry in &doc.allocations {
        if !(entry.network_cost.is_finite() && entry.network_cost >= 0.0) {
            return Err(Error::Schema(format!(
                "networkCost {} must be finite and non-negative",
                entry.network_cost
            )));
        }
        totals.add(TrafficClass::InZone, entry.in_zone_bytes);
        totals.add(TrafficClass::CrossZone, entry.cross_zone_bytes);
        totals.add(TrafficClass::CrossRegion, entry.cross_region_bytes);
        totals.add(TrafficClass::InternetEgress, entry.internet_egress_bytes);
        totals.add(TrafficClass::InternetIngress, entry.internet_ingress_bytes);
        network_cost += entry.network_cost;
    }
    Ok(KubecostAllocation {
        totals,
        network_cost,
        window_duration,
    })
}
