//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success. Criteria 1, 2, and 5 go through the CLI binary;
//! the rest exercise the library directly with independent oracles.

use std::net::Ipv4Addr;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use netcost::dimensioning::{dimension, peak_rate, DimensioningPolicy};
use netcost::ingest::{parse_flow_csv, serialize_flow_csv};
use netcost::pricing::{bare_metal_monthly_cost, cloud_cost, CapacityPricing, UsagePricing};
use netcost::scenarios::{
    break_even, generate_trace, BreakEvenFamily, BreakEvenOutcome, SweepParameter, TrafficPattern,
    SECONDS_PER_MONTH,
};
use netcost::traffic::{
    aggregate_trace, classify_flow, ClassTotals, FlowRecord, RateSeries, Subnet, Topology, Trace,
    TrafficClass,
};

fn pass(criterion: &str) {
    println!("[PASS] {criterion}");
}

fn netcost_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcost"))
        .args(args)
        .env_remove("NETCOST_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

/// Value of a `field,value` row in CSV output.
fn csv_value(stdout: &str, field: &str) -> String {
    for line in stdout.lines() {
        if let Some((name, value)) = line.split_once(',') {
            if name == field {
                return value.to_string();
            }
        }
    }
    panic!("field '{field}' not found in output:\n{stdout}");
}

fn fixture_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("netcost-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create fixture dir");
    dir
}

fn write_fixture(name: &str, contents: &str) -> PathBuf {
    let path = fixture_dir().join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

const TOPOLOGY_TOML: &str = r#"
[topology]
cluster_region = "eu-west-1"
internet_ips = ["52.18.0.9"]
subnets = [
  { cidr = "10.0.1.0/24", zone = "euw1-az1", region = "eu-west-1" },
  { cidr = "10.0.2.0/24", zone = "euw1-az2", region = "eu-west-1" },
]
"#;

fn test_topology() -> Topology {
    Topology::new(
        vec![
            Subnet {
                cidr: "10.0.1.0/24".parse().unwrap(),
                zone: "euw1-az1".into(),
                region: "eu-west-1".into(),
            },
            Subnet {
                cidr: "10.0.2.0/24".parse().unwrap(),
                zone: "euw1-az2".into(),
                region: "eu-west-1".into(),
            },
        ],
        [Ipv4Addr::new(52, 18, 0, 9)],
        "eu-west-1",
    )
    .unwrap()
}

#[test]
fn criterion_1_table_extrapolation() {
    let started = Instant::now();
    let output = netcost_bin(&[
        "extrapolate",
        "--cost",
        "3.34",
        "--window",
        "1800",
        "--scale",
        "1.0",
        "--format",
        "csv",
    ]);
    let stdout = stdout_of(&output);
    let elapsed = started.elapsed();
    assert_eq!(csv_value(&stdout, "monthly_cost"), "4809.60");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass("criterion 1: 30-min window cost extrapolates to $4809.60/month in <1s");
}

#[test]
fn criterion_2_duty_cycle_extrapolation() {
    let started = Instant::now();
    let output = netcost_bin(&[
        "extrapolate",
        "--cost",
        "3.34",
        "--window",
        "1800",
        "--scale",
        "0.08",
        "--format",
        "csv",
    ]);
    let stdout = stdout_of(&output);
    let elapsed = started.elapsed();
    let monthly = csv_value(&stdout, "monthly_cost");
    assert_eq!(monthly, "384.77");
    let value: f64 = monthly.parse().unwrap();
    assert!(
        (value - 384.0).abs() / 384.0 < 0.0025,
        "off by >0.25%: {value}"
    );
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass("criterion 2: 8% duty cycle extrapolates to $384.77/month (within 0.25% of $384) in <1s");
}

#[test]
fn criterion_3_bare_metal_dimensioning() {
    let started = Instant::now();
    let topology = test_topology();
    let pattern = TrafficPattern::Constant { rate: 1.3e7 };
    let trace = generate_trace(&pattern, 300.0, 1.0, &topology, 1.0).unwrap();
    assert_eq!(trace.total_bytes(), 3_900_000_000, "nearly 4 GB over 5 min");

    let result = dimension(
        &trace,
        &topology,
        &DimensioningPolicy::default(),
        &CapacityPricing::ovh_advance2(),
        1.0,
    )
    .unwrap();
    let elapsed = started.elapsed();
    assert_eq!(result.capacity_bps, 2.08e8, "required capacity 208 Mb/s");
    assert_eq!(result.monthly_cost, 176.66);
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass("criterion 3: 13 MBps 5-min trace dimensions to 208 Mb/s at $176.66/month in <1s");
}

#[test]
fn criterion_4_pricing_spot_checks() {
    let pricing = UsagePricing::aws_like();

    let egress = ClassTotals::of(&[(TrafficClass::InternetEgress, 1_000_000_000)]);
    assert_eq!(
        cloud_cost(&egress, &pricing, None, 0.0).unwrap().total,
        0.09
    );

    for volume in [1u64, 5_000_000_000, 123_456_789_012] {
        let ingress = ClassTotals::of(&[(TrafficClass::InternetIngress, volume)]);
        assert_eq!(
            cloud_cost(&ingress, &pricing, None, 0.0).unwrap().total,
            0.0
        );
    }

    let cross = ClassTotals::of(&[(TrafficClass::CrossZone, 100_000_000_000)]);
    let cost = cloud_cost(&cross, &pricing, None, 0.0).unwrap().total;
    assert!((cost - 2.0).abs() < 1e-12, "100 GB cross-zone: {cost}");
    pass("criterion 4: $0.09/GB egress, free ingress, $0.02/GB cross-zone, exact");
}

#[test]
fn criterion_5_ratio_report() {
    // An 1800 s window whose usage cost is $3.34 and whose peak fits the
    // included 1 Gb/s: 1800 egress records of 20,617,284 bytes. The final
    // zero-byte record marks the window end, since the CSV span is the
    // min/max timestamp.
    let mut csv = String::from("timestamp,src,dst,bytes\n");
    for i in 0..1800 {
        csv.push_str(&format!("{i},10.0.1.1,52.18.0.9,20617284\n"));
    }
    csv.push_str("1800,10.0.1.1,52.18.0.9,0\n");
    let trace_path = write_fixture("ratio-trace.csv", &csv);
    let topo_path = write_fixture("ratio-topo.toml", TOPOLOGY_TOML);

    let output = netcost_bin(&[
        "compare",
        "--trace",
        trace_path.to_str().unwrap(),
        "--topology",
        topo_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let stdout = stdout_of(&output);
    assert_eq!(csv_value(&stdout, "window_cost.total"), "3.34");
    assert_eq!(csv_value(&stdout, "cloud_monthly"), "4809.60");
    assert_eq!(csv_value(&stdout, "bare_metal_monthly"), "176.66");
    assert_eq!(csv_value(&stdout, "ratio"), "27.22");
    pass("criterion 5: $4809.60 vs $176.66 reported as 27.22x (raw ratio, no adjustment)");
}

/// Random endpoints over the test topology, never internet-to-internet.
fn random_records(rng: &mut StdRng, max_records: usize) -> Vec<FlowRecord> {
    let pool: [Ipv4Addr; 4] = [
        "10.0.1.5".parse().unwrap(),
        "10.0.2.5".parse().unwrap(),
        "52.18.0.9".parse().unwrap(),
        "8.8.8.8".parse().unwrap(),
    ];
    let internet = |a: Ipv4Addr| a == pool[2] || a == pool[3];
    let n = rng.gen_range(0..=max_records);
    (0..n)
        .map(|_| {
            let src = pool[rng.gen_range(0..pool.len())];
            let dst = loop {
                let d = pool[rng.gen_range(0..pool.len())];
                if !(internet(src) && internet(d)) {
                    break d;
                }
            };
            FlowRecord::new(
                rng.gen_range(0.0..3600.0),
                src,
                dst,
                rng.gen_range(0..3_000_000_000u64),
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn criterion_6_conservation_on_1000_randomized_traces() {
    let topology = test_topology();
    let mut rng = StdRng::seed_from_u64(601);
    for _ in 0..1000 {
        let records = random_records(&mut rng, 200);
        let record_sum: u64 = records.iter().map(|r| r.bytes).sum();
        let trace = Trace::from_records(records);
        let totals = aggregate_trace(&trace, &topology).unwrap();
        assert_eq!(totals.total_bytes(), record_sum);
    }
    pass("criterion 6a: class totals conserve record bytes exactly on 1000 random traces");
}

#[test]
fn criterion_6_classification_matches_brute_force() {
    let topology = test_topology();
    let mut rng = StdRng::seed_from_u64(602);
    for _ in 0..1000 {
        let records = random_records(&mut rng, 200);
        let trace = Trace::from_records(records);

        // independent oracle: classify record by record and sum by hand
        let mut expected = ClassTotals::default();
        for record in trace.records() {
            let class = classify_flow(record, &topology).unwrap();
            expected.add(class, record.bytes);
        }
        let totals = aggregate_trace(&trace, &topology).unwrap();
        assert_eq!(totals, expected);
    }
    pass("criterion 6b: aggregate_trace equals per-record brute-force classification");
}

#[test]
fn criterion_6_cost_monotonicity() {
    let mut pricing = UsagePricing::aws_like();
    pricing.cross_region = Some(0.05);
    let mut rng = StdRng::seed_from_u64(603);
    for _ in 0..200 {
        let mut totals = ClassTotals::default();
        for class in TrafficClass::ALL {
            totals.add(class, rng.gen_range(0..5_000_000_000u64));
        }
        let base = cloud_cost(&totals, &pricing, None, 1.0).unwrap().total;
        let mut grown = totals;
        grown.add(
            TrafficClass::ALL[rng.gen_range(0..5)],
            rng.gen_range(0..1_000_000_000),
        );
        let more = cloud_cost(&grown, &pricing, None, 1.0).unwrap().total;
        assert!(more >= base);
    }

    let capacity = CapacityPricing::ovh_advance2();
    let mut last = 0.0f64;
    for i in 0..10_000 {
        let bps = i as f64 * 1.2e6; // 0 .. 12 Gb/s
        let cost = bare_metal_monthly_cost(bps, &capacity).unwrap();
        assert!(cost >= last, "step down at {bps} b/s");
        // every value sits on a step of the price ladder
        let steps = (cost - capacity.base_monthly) / capacity.increment_price;
        assert!(
            (steps - steps.round()).abs() < 1e-9,
            "off-ladder cost {cost}"
        );
        last = cost;
    }
    pass(
        "criterion 6c: cloud cost monotone in bytes; capacity cost a non-decreasing step function",
    );
}

#[test]
fn criterion_6_break_even_matches_linear_scan() {
    let policy = DimensioningPolicy::default();
    let mut rng = StdRng::seed_from_u64(604);

    for _ in 0..20 {
        // randomized pricing around a sampled crossing point; the rate is
        // bounded so the active-period peak stays inside the included
        // capacity (bare-metal side constant over the sweep) while the
        // full-month cloud cost exceeds it (a crossing exists)
        let crossing = rng.gen_range(0.05..0.8);
        let egress_rate = rng.gen_range(0.02..0.25);
        let base_cap = 0.9
            * (1e9 * policy.utilization_target / 8.0)
            * crossing
            * egress_rate
            * SECONDS_PER_MONTH
            / 1e9;
        let base_monthly = rng.gen_range(10.0..base_cap.min(400.0));
        let rate = base_monthly * 1e9 / (crossing * SECONDS_PER_MONTH * egress_rate);
        assert!(rate * 8.0 / policy.utilization_target <= 1e9);

        let mut usage = UsagePricing::empty();
        usage.internet_egress = Some(egress_rate);
        usage.internet_ingress = Some(0.0);
        let capacity = CapacityPricing {
            base_monthly,
            included_bps: 1e9,
            increment_bps: 1e9,
            increment_price: rng.gen_range(50.0..300.0),
        };
        let family = BreakEvenFamily {
            pattern: TrafficPattern::DutyCycle {
                rate,
                active_fraction: 1.0,
            },
            egress_share: 1.0,
            sweep: SweepParameter::ActiveFraction,
        };

        let tolerance = 1e-6;
        let lo = 1e-3;
        let outcome =
            break_even(&family, (lo, 1.0), &usage, &capacity, &policy, tolerance).unwrap();
        let parameter = match outcome {
            BreakEvenOutcome::Crossing { parameter, .. } => parameter,
            other => panic!("expected a crossing, got {other:?}"),
        };

        // independent oracle: direct arithmetic on a 1e-4-step scan
        let cloud_direct = |p: f64| rate * p * SECONDS_PER_MONTH / 1e9 * egress_rate;
        let mut scan_crossing = None;
        let steps = ((1.0 - lo) / 1e-4) as usize;
        let mut prev = cloud_direct(lo) - base_monthly;
        for j in 1..=steps {
            let p = lo + j as f64 * 1e-4;
            let diff = cloud_direct(p) - base_monthly;
            if (prev > 0.0) != (diff > 0.0) {
                scan_crossing = Some(p - 0.5e-4);
                break;
            }
            prev = diff;
        }
        let scan_crossing = scan_crossing.expect("scan finds the crossing");
        assert!(
            (parameter - scan_crossing).abs() <= 1e-4 + tolerance,
            "bisection {parameter} vs scan {scan_crossing}"
        );
    }

    // anchored hand check: full-month cloud $4809.60 against $176.66
    let anchored_rate = 4809.60 * 1e9 / (0.09 * SECONDS_PER_MONTH);
    let family = BreakEvenFamily {
        pattern: TrafficPattern::DutyCycle {
            rate: anchored_rate,
            active_fraction: 1.0,
        },
        egress_share: 1.0,
        sweep: SweepParameter::ActiveFraction,
    };
    let outcome = break_even(
        &family,
        (1e-6, 1.0),
        &UsagePricing::aws_like(),
        &CapacityPricing::ovh_advance2(),
        &policy,
        1e-6,
    )
    .unwrap();
    match outcome {
        BreakEvenOutcome::Crossing { parameter, .. } => {
            assert!(
                (parameter - 176.66 / 4809.60).abs() < 1e-5,
                "anchored crossing {parameter}"
            );
            assert_eq!(format!("{parameter:.4}"), "0.0367");
        }
        other => panic!("expected a crossing, got {other:?}"),
    }
    pass("criterion 6d: bisection agrees with a 1e-4-step linear scan; anchored d* = 0.0367");
}

#[test]
fn criterion_6_peak_matches_exhaustive_scan() {
    let mut rng = StdRng::seed_from_u64(605);
    for _ in 0..100 {
        let len = rng.gen_range(1..400);
        let width = rng.gen_range(1..=60) as f64;
        let bytes: Vec<f64> = (0..len)
            .map(|_| rng.gen_range(0..1_000_000_000u64) as f64)
            .collect();
        let series = RateSeries::new(0.0, width, bytes.clone()).unwrap();
        let k = rng.gen_range(1..=len);

        let exhaustive = bytes
            .windows(k)
            .map(|w| w.iter().sum::<f64>() / (k as f64 * width) * 8.0)
            .fold(f64::MIN, f64::max);
        let fast = peak_rate(&series, k as f64 * width).unwrap();
        assert_eq!(fast, exhaustive, "len {len} k {k} width {width}");
    }
    pass("criterion 6e: sliding-window peak equals exhaustive window scan on 100 random series");
}

#[test]
fn criterion_6_flow_csv_round_trip() {
    let mut rng = StdRng::seed_from_u64(606);
    for _ in 0..100 {
        let trace = Trace::from_records(random_records(&mut rng, 150));
        let text = serialize_flow_csv(&trace);
        let reparsed = parse_flow_csv(&text).unwrap();
        assert_eq!(reparsed, trace);
        assert_eq!(serialize_flow_csv(&reparsed), text);
    }
    pass("criterion 6f: flow CSV parse-serialize identity on random traces");
}

#[test]
fn criterion_6_determinism() {
    // library: seeded bursty generation is byte-identical
    let topology = test_topology();
    let pattern = TrafficPattern::Bursty {
        baseline: 1e6,
        burst_rate: 5e7,
        burst_probability: 0.25,
        seed: 2024,
    };
    let a = serialize_flow_csv(&generate_trace(&pattern, 900.0, 1.0, &topology, 0.8).unwrap());
    let b = serialize_flow_csv(&generate_trace(&pattern, 900.0, 1.0, &topology, 0.8).unwrap());
    assert_eq!(a, b);

    // CLI: identical invocations produce byte-identical CSV
    let topo_path = write_fixture("determinism-topo.toml", TOPOLOGY_TOML);
    let args = [
        "simulate",
        "--pattern",
        "bursty",
        "--baseline",
        "1e6",
        "--burst-rate",
        "5e7",
        "--burst-probability",
        "0.25",
        "--seed",
        "2024",
        "--duration",
        "900",
        "--bucket",
        "1",
        "--topology",
        topo_path.to_str().unwrap(),
    ];
    let first = netcost_bin(&args);
    let second = netcost_bin(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let trace_path = write_fixture("determinism-trace.csv", &a);
    let classify_args = [
        "classify",
        "--trace",
        trace_path.to_str().unwrap(),
        "--topology",
        topo_path.to_str().unwrap(),
        "--format",
        "csv",
    ];
    let c1 = netcost_bin(&classify_args);
    let c2 = netcost_bin(&classify_args);
    assert_eq!(c1.stdout, c2.stdout);
    pass("criterion 6g: seeded generation and CLI CSV output are byte-identical across runs");
}
