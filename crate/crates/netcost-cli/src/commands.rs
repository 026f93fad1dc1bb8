//! Subcommand execution: each command resolves its inputs, runs the
//! library operation, and renders a report.

use std::collections::BTreeMap;

use netcost::config::ConfigDocument;
use netcost::ingest::{
    counters_to_rates, parse_kubecost_allocation, parse_prometheus_text, serialize_flow_csv,
    CounterSample, ParseMode, ResetPolicy,
};
use netcost::pricing::cloud_cost;
use netcost::scenarios::{
    break_even, compare, extrapolate_monthly, generate_trace, BreakEvenFamily, BreakEvenOutcome,
    SweepParameter,
};
use netcost::traffic::aggregate_trace;
use netcost::{dimensioning, Error};

use crate::args::{
    BreakevenArgs, ClassifyArgs, CompareArgs, CostArgs, DimensionArgs, ExtrapolateArgs,
    IngestFlowsArgs, IngestKubecostArgs, IngestPrometheusArgs, IngestSource, SimulateArgs,
    SweepArg,
};
use crate::inputs::{
    direction_name, load_topology, load_trace, resolve_capacity, resolve_lb, resolve_pattern,
    resolve_policy, resolve_usage, CliError, CliResult,
};
use crate::render::{bps, currency, num, percent, ratio, Report};

/// What a command hands back to `main` for output.
pub enum Output {
    Report(Report),
    /// Preformatted text emitted as-is (the simulate flow CSV).
    Raw(String),
}

pub fn classify(args: &ClassifyArgs, config: &ConfigDocument) -> CliResult<Output> {
    let topology = load_topology(args.topology.as_deref(), config)?;
    let trace = load_trace(&args.trace)?;
    let totals = aggregate_trace(&trace, &topology)?;
    let total = totals.total_bytes();

    let mut report = Report::new(&["class", "bytes", "share_pct"]);
    for (class, bytes) in totals.iter() {
        let share = if total > 0 {
            bytes as f64 / total as f64
        } else {
            0.0
        };
        report.push(vec![class.to_string(), bytes.to_string(), percent(share)]);
    }
    report.push(vec![
        "total".into(),
        total.to_string(),
        percent(if total > 0 { 1.0 } else { 0.0 }),
    ]);
    Ok(Output::Report(report))
}

pub fn cost(args: &CostArgs, config: &ConfigDocument) -> CliResult<Output> {
    let topology = load_topology(args.topology.as_deref(), config)?;
    let trace = load_trace(&args.trace)?;
    let (usage, profile) = resolve_usage(&args.usage, config)?;
    let lb = resolve_lb(&args.lb, config)?;
    let duration = match args.duration.or_else(|| trace.duration()) {
        Some(d) => d,
        None if lb.is_some() => {
            return Err(CliError::Config(
                "load balancer pricing needs a duration; pass --duration".into(),
            ))
        }
        None => 0.0,
    };
    let totals = aggregate_trace(&trace, &topology)?;
    let breakdown = cloud_cost(&totals, &usage, lb.as_ref(), duration)?;

    let mut report = Report::new(&["component", "bytes", "cost"]);
    for (class, cost) in breakdown.iter() {
        report.push(vec![
            class.to_string(),
            totals.get(class).to_string(),
            currency(cost),
        ]);
    }
    if lb.is_some() {
        report.push(vec![
            "load-balancer".into(),
            totals.internet_bytes().to_string(),
            currency(breakdown.lb_cost),
        ]);
    }
    report.push(vec![
        "total".into(),
        totals.total_bytes().to_string(),
        currency(breakdown.total),
    ]);
    report.push(vec!["usage_profile".into(), String::new(), profile]);
    Ok(Output::Report(report))
}

pub fn dimension(args: &DimensionArgs, config: &ConfigDocument) -> CliResult<Output> {
    let topology = load_topology(args.topology.as_deref(), config)?;
    let trace = load_trace(&args.trace)?;
    let policy = resolve_policy(&args.policy, config)?;
    let (capacity, profile) = resolve_capacity(&args.capacity, config)?;
    let result = dimensioning::dimension(&trace, &topology, &policy, &capacity, args.bucket)?;

    let mut report = Report::new(&["field", "value"]);
    report.kv("peak_bps", bps(result.peak_bps));
    report.kv("capacity_bps", bps(result.capacity_bps));
    report.kv("monthly_cost", currency(result.monthly_cost));
    report.kv("utilization", num(policy.utilization_target));
    report.kv("peak_window_s", num(policy.peak_window));
    report.kv("direction", direction_name(policy.direction));
    report.kv("bucket_s", num(args.bucket));
    report.kv("capacity_profile", profile);
    Ok(Output::Report(report))
}

pub fn simulate(args: &SimulateArgs, config: &ConfigDocument) -> CliResult<Output> {
    let topology = load_topology(args.topology.as_deref(), config)?;
    let (pattern, egress_share) = resolve_pattern(&args.pattern, config, None)?;
    let trace = generate_trace(
        &pattern,
        args.duration,
        args.bucket,
        &topology,
        egress_share,
    )?;
    Ok(Output::Raw(serialize_flow_csv(&trace)))
}

pub fn extrapolate(args: &ExtrapolateArgs) -> CliResult<Output> {
    let monthly = extrapolate_monthly(args.cost, args.window, args.scale)?;
    let mut report = Report::new(&["field", "value"]);
    report.kv("window_cost", currency(args.cost));
    report.kv("window_s", num(args.window));
    report.kv("pattern_scale", num(args.scale));
    report.kv("monthly_cost", currency(monthly));
    Ok(Output::Report(report))
}

pub fn breakeven(args: &BreakevenArgs, config: &ConfigDocument) -> CliResult<Output> {
    let (pattern, egress_share) = resolve_pattern(&args.pattern, config, Some(args.sweep))?;
    let (usage, usage_profile) = resolve_usage(&args.usage, config)?;
    let (capacity, capacity_profile) = resolve_capacity(&args.capacity, config)?;
    let policy = resolve_policy(&args.policy, config)?;
    let (sweep, sweep_name) = match args.sweep {
        SweepArg::Rate => (SweepParameter::Rate, "rate"),
        SweepArg::ActiveFraction => (SweepParameter::ActiveFraction, "active-fraction"),
        SweepArg::EgressShare => (SweepParameter::EgressShare, "egress-share"),
    };
    let family = BreakEvenFamily {
        pattern,
        egress_share,
        sweep,
    };
    let outcome = break_even(
        &family,
        (args.lo, args.hi),
        &usage,
        &capacity,
        &policy,
        args.tolerance,
    )?;

    let mut report = Report::new(&["field", "value"]);
    report.kv("sweep", sweep_name);
    report.kv("lo", num(args.lo));
    report.kv("hi", num(args.hi));
    report.kv("tolerance", num(args.tolerance));
    report.kv("usage_profile", usage_profile);
    report.kv("capacity_profile", capacity_profile);
    match outcome {
        BreakEvenOutcome::Crossing {
            parameter,
            cloud_monthly,
            bare_metal_monthly,
        } => {
            report.kv("outcome", "crossing");
            report.kv("parameter", format!("{parameter:.6}"));
            report.kv("cloud_monthly", currency(cloud_monthly));
            report.kv("bare_metal_monthly", currency(bare_metal_monthly));
        }
        BreakEvenOutcome::NoCrossing { cheaper } => {
            report.kv("outcome", "no-crossing");
            report.kv("cheaper", cheaper.to_string());
        }
    }
    Ok(Output::Report(report))
}

pub fn compare_cmd(args: &CompareArgs, config: &ConfigDocument) -> CliResult<Output> {
    let topology = load_topology(args.topology.as_deref(), config)?;
    let trace = load_trace(&args.trace)?;
    let (usage, usage_profile) = resolve_usage(&args.usage, config)?;
    let (capacity, capacity_profile) = resolve_capacity(&args.capacity, config)?;
    let lb = resolve_lb(&args.lb, config)?;
    let policy = resolve_policy(&args.policy, config)?;
    let report_data = compare(
        &trace,
        &topology,
        &usage,
        lb.as_ref(),
        &capacity,
        &policy,
        args.bucket,
    )?;

    let mut report = Report::new(&["field", "value"]);
    for (class, bytes) in report_data.totals.iter() {
        report.kv(&format!("bytes.{class}"), bytes.to_string());
    }
    for (class, cost) in report_data.window.iter() {
        report.kv(&format!("window_cost.{class}"), currency(cost));
    }
    report.kv(
        "window_cost.load-balancer",
        currency(report_data.window.lb_cost),
    );
    report.kv("window_cost.total", currency(report_data.window.total));
    report.kv("window_s", num(report_data.window_duration));
    report.kv("cloud_monthly", currency(report_data.cloud_monthly));
    report.kv("peak_bps", bps(report_data.dimensioned.peak_bps));
    report.kv("capacity_bps", bps(report_data.dimensioned.capacity_bps));
    report.kv(
        "bare_metal_monthly",
        currency(report_data.bare_metal_monthly),
    );
    match report_data.ratio {
        Some(r) => report.kv("ratio", ratio(r)),
        None => report.kv("ratio", "n/a"),
    }
    report.kv("usage_profile", usage_profile);
    report.kv("capacity_profile", capacity_profile);
    report.kv("utilization", num(policy.utilization_target));
    report.kv("peak_window_s", num(policy.peak_window));
    report.kv("direction", direction_name(policy.direction));
    Ok(Output::Report(report))
}

pub fn ingest(source: &IngestSource, _config: &ConfigDocument) -> CliResult<Output> {
    match source {
        IngestSource::Prometheus(args) => ingest_prometheus(args),
        IngestSource::Kubecost(args) => ingest_kubecost(args),
        IngestSource::Flows(args) => ingest_flows(args),
    }
}

/// Canonical series key: metric name plus sorted labels.
fn series_key(sample: &CounterSample) -> String {
    if sample.labels.is_empty() {
        return sample.name.clone();
    }
    let labels: Vec<String> = sample
        .labels
        .iter()
        .map(|(k, v)| format!("{k}=\"{v}\""))
        .collect();
    format!("{}{{{}}}", sample.name, labels.join(","))
}

fn ingest_prometheus(args: &IngestPrometheusArgs) -> CliResult<Output> {
    let text = crate::inputs::read_file(&args.file)?;
    let mode = if args.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let (samples, warnings) = parse_prometheus_text(&text, args.scrape_time, mode)
        .map_err(|e| CliError::Input(format!("in '{}': {e}", args.file.display())))?;
    for warning in &warnings {
        eprintln!("warning: {}: {warning}", args.file.display());
    }

    let mut series: BTreeMap<String, Vec<CounterSample>> = BTreeMap::new();
    for sample in samples {
        if let Some(metric) = &args.metric {
            if sample.name != *metric {
                continue;
            }
        }
        series.entry(series_key(&sample)).or_default().push(sample);
    }

    if !args.rates {
        let mut report = Report::new(&["series", "timestamp", "value"]);
        for (key, samples) in &series {
            for s in samples {
                report.push(vec![key.clone(), num(s.timestamp), num(s.value)]);
            }
        }
        return Ok(Output::Report(report));
    }

    let reset = if args.skip_resets {
        ResetPolicy::SkipInterval
    } else {
        ResetPolicy::RestartFromZero
    };
    let mut report = Report::new(&["series", "bucket_start", "rate_bytes_per_s"]);
    for (key, mut samples) in series {
        samples.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
        match counters_to_rates(&samples, reset) {
            Ok(rates) => {
                for (ts, rate) in rates.samples() {
                    report.push(vec![key.clone(), num(ts), num(rate)]);
                }
            }
            Err(Error::InsufficientSamples(_)) if args.lenient => {
                eprintln!("warning: series '{key}' has fewer than two samples; skipped");
            }
            Err(e) => {
                return Err(CliError::Input(format!("series '{key}': {e}")));
            }
        }
    }
    Ok(Output::Report(report))
}

fn ingest_kubecost(args: &IngestKubecostArgs) -> CliResult<Output> {
    let text = crate::inputs::read_file(&args.file)?;
    let parsed = parse_kubecost_allocation(&text)
        .map_err(|e| CliError::Input(format!("in '{}': {e}", args.file.display())))?;
    let monthly = extrapolate_monthly(parsed.network_cost, parsed.window_duration, args.scale)?;

    let mut report = Report::new(&["field", "value"]);
    for (class, bytes) in parsed.totals.iter() {
        report.kv(&format!("bytes.{class}"), bytes.to_string());
    }
    report.kv("network_cost", currency(parsed.network_cost));
    report.kv("window_s", num(parsed.window_duration));
    report.kv("pattern_scale", num(args.scale));
    report.kv("monthly_cost", currency(monthly));
    Ok(Output::Report(report))
}

fn ingest_flows(args: &IngestFlowsArgs) -> CliResult<Output> {
    let trace = load_trace(&args.file)?;
    let mut report = Report::new(&["field", "value"]);
    report.kv("records", trace.len().to_string());
    report.kv(
        "start",
        trace.start().map(num).unwrap_or_else(|| "n/a".into()),
    );
    report.kv("end", trace.end().map(num).unwrap_or_else(|| "n/a".into()));
    report.kv(
        "duration_s",
        trace.duration().map(num).unwrap_or_else(|| "n/a".into()),
    );
    report.kv("total_bytes", trace.total_bytes().to_string());
    Ok(Output::Report(report))
}
