//! Acceptance suite. Runs every criterion, prints one verdict line each and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use sccorr::pipeline::{assemble, edge_values, process_tile, tile_origins};
use sccorr::*;

const PROPERTY_CASES: u32 = 10_000;

type Criterion = (&'static str, Duration, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn bs(s: &str) -> Bitstream {
    s.parse().unwrap()
}

fn vdc_ld() -> RngConfig {
    RngConfig::vdc(8).with_start(1)
}

fn halton3() -> RngConfig {
    RngConfig::halton(3)
}

/// Table 1 stream pairs and their exact SCC.
fn c1_scc_unit_truth() -> Verdict {
    let rows = [
        ("10101010", "10111011", 1.0),
        ("10101010", "11011101", -1.0),
        ("10101010", "11111100", 0.0),
    ];
    let got: Vec<f64> = rows
        .iter()
        .map(|(x, y, _)| scc(&bs(x), &bs(y)).unwrap())
        .collect();
    let pass = rows.iter().zip(&got).all(|((_, _, want), g)| g == want);
    verdict(pass, format!("scc = {got:?}"))
}

/// Bit reversal of `t` in `w` bits, written independently of the library.
fn bitrev(t: u64, w: u32) -> u64 {
    (0..w).fold(0, |acc, i| acc | (((t >> i) & 1) << (w - 1 - i)))
}

/// AND over all N=16 value pairs with shared and complemented thresholds.
fn c2_and_identities() -> Verdict {
    let n = 16u64;
    let r: Vec<u64> = (0..n).map(|t| bitrev(t, 4)).collect();
    let gen = |v: u64, flip: bool| {
        Bitstream::from_fn(n as usize, |t| {
            let rt = if flip { n - 1 - r[t] } else { r[t] };
            rt < v
        })
    };
    let mut failures = 0;
    for x in 0..=n {
        for y in 0..=n {
            let shared = gates_and(&gen(x, false), &gen(y, false));
            if shared != x.min(y) {
                failures += 1;
            }
            let opposite = gates_and(&gen(x, false), &gen(y, true));
            if opposite != (x + y).saturating_sub(n) {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!(
            "{} pairs x 2 encodings, {failures} mismatches",
            (n + 1) * (n + 1)
        ),
    )
}

fn gates_and(x: &Bitstream, y: &Bitstream) -> u64 {
    sccorr::gates::mult(x, y).unwrap().ones()
}

fn c3_synchronizer() -> Verdict {
    let r = sweep_correlation(&Manipulator::synchronizer(1), &vdc_ld(), &halton3(), 256)
        .unwrap()
        .report;
    let pass = (r.mean_input_scc + 0.048).abs() <= 0.03
        && r.mean_output_scc >= 0.98
        && r.mean_bias_x.abs() <= 0.005
        && r.mean_bias_y.abs() <= 0.005;
    verdict(
        pass,
        format!(
            "pairs {} in {:+.4} out {:+.4} bias x {:+.5} y {:+.5}",
            r.pairs, r.mean_input_scc, r.mean_output_scc, r.mean_bias_x, r.mean_bias_y
        ),
    )
}

fn c4_desynchronizer() -> Verdict {
    let r = sweep_correlation(&Manipulator::desynchronizer(1), &halton3(), &halton3(), 256)
        .unwrap()
        .report;
    let pass = r.mean_output_scc <= -0.88 && r.mean_bias_y == 0.0 && r.mean_bias_x.abs() <= 0.005;
    verdict(
        pass,
        format!(
            "in {:+.4} out {:+.4} bias x {:+.5} y {:+.5}",
            r.mean_input_scc, r.mean_output_scc, r.mean_bias_x, r.mean_bias_y
        ),
    )
}

fn c5_decorrelator() -> Verdict {
    let decorr = sweep_correlation(&Manipulator::decorrelator(4), &halton3(), &halton3(), 256)
        .unwrap()
        .report;
    let iso = sweep_correlation(
        &Manipulator::Isolator { init: false },
        &halton3(),
        &halton3(),
        256,
    )
    .unwrap()
    .report;
    let pass = decorr.mean_input_scc >= 0.97
        && decorr.mean_output_scc.abs() <= 0.15
        && iso.mean_output_scc.abs() >= 0.3;
    verdict(
        pass,
        format!(
            "in {:+.4} decorrelator out {:+.4} isolator out {:+.4}",
            decorr.mean_input_scc, decorr.mean_output_scc, iso.mean_output_scc
        ),
    )
}

fn c6_max_min_accuracy() -> Verdict {
    let cfg = OpSweepConfig {
        rng_x: vdc_ld(),
        rng_y: halton3(),
        rng_sel: RngConfig::halton(5),
        n: 256,
        depth: 1,
    };
    let err = |op| sweep_ops(op, &cfg).unwrap().report.mean_abs_error;
    let (or_max, sync_max) = (err(SweepOp::OrMax), err(SweepOp::SyncMax));
    let (and_min, sync_min) = (err(SweepOp::AndMin), err(SweepOp::SyncMin));
    let pass = (or_max - 0.087).abs() <= 0.010
        && sync_max <= 0.010
        && (and_min - 0.082).abs() <= 0.010
        && sync_min <= 0.010;
    verdict(
        pass,
        format!(
            "or-max {or_max:.4} sync-max {sync_max:.4} and-min {and_min:.4} sync-min {sync_min:.4}"
        ),
    )
}

fn c7_pipeline() -> Verdict {
    let img = GrayImage::test_card(64, 64).unwrap();
    let mae = |v| run_pipeline(&img, &PipelineConfig::new(v)).unwrap().1.mae;
    let (none, regen, sync) = (mae(Variant::None), mae(Variant::Regen), mae(Variant::Sync));
    let pass = none >= 0.06 && regen <= 0.03 && sync <= 0.03 && (sync - regen).abs() <= 0.005;
    verdict(
        pass,
        format!("mae none {none:.4} regen {regen:.4} sync {sync:.4}"),
    )
}

fn stream(max_len: usize) -> impl Strategy<Value = Bitstream> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(|v| v.into_iter().collect())
}

fn stream_pair(max_len: usize) -> impl Strategy<Value = (Bitstream, Bitstream)> {
    (1..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(x, y)| (x.into_iter().collect(), y.into_iter().collect()))
    })
}

fn aux_rng() -> impl Strategy<Value = RngConfig> {
    prop_oneof![
        (2u64..40).prop_map(RngConfig::halton),
        (1u32..12).prop_map(RngConfig::vdc),
        (3u32..16, 1u64..1000)
            .prop_map(|(w, s)| { RngConfig::lfsr(w, s % ((1 << w) - 1) + 1).unwrap() }),
    ]
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> (String, bool) {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    match runner.run(&strategy, test) {
        Ok(()) => (name.to_string(), true),
        Err(e) => {
            eprintln!("property `{name}` failed: {e}");
            (name.to_string(), false)
        }
    }
}

fn c8_properties() -> Verdict {
    let results = [
        run_property(
            "shuffle ledger",
            (stream(300), 1usize..9, aux_rng()),
            |(x, depth, aux)| {
                let mut buf = ShuffleBuffer::new(depth, &aux).unwrap();
                let initial = buf.stored_ones();
                let out = buf.run(&x);
                prop_assert_eq!(out.len(), x.len());
                prop_assert_eq!(out.ones() + buf.stored_ones(), x.ones() + initial);
                Ok(())
            },
        ),
        run_property(
            "flushed synchronizer ledger",
            (stream_pair(300), 1u32..5),
            |((x, y), depth)| {
                let mut sync = Synchronizer::new(depth).unwrap();
                let (xo, yo) = run_pairwise(&mut sync, &x, &y, true).unwrap();
                let (px, py) = sync.pending();
                prop_assert_eq!(xo.ones() + u64::from(px), x.ones());
                prop_assert_eq!(yo.ones() + u64::from(py), y.ones());
                prop_assert!(px + py <= depth);
                Ok(())
            },
        ),
        run_property(
            "desynchronizer y passthrough",
            (stream_pair(300), 1u32..5, any::<bool>()),
            |((x, y), depth, flush)| {
                let mut d = Desynchronizer::new(depth).unwrap();
                let (_, yo) = run_pairwise(&mut d, &x, &y, flush).unwrap();
                prop_assert_eq!(yo, y);
                Ok(())
            },
        ),
        run_property("scc range and symmetry", stream_pair(300), |(x, y)| {
            let s = scc(&x, &y).unwrap();
            prop_assert!((-1.0..=1.0).contains(&s));
            prop_assert_eq!(s, scc(&y, &x).unwrap());
            let k = scc_counts(&x, &y).unwrap();
            let k2 = scc_counts(&y, &x).unwrap();
            prop_assert_eq!((k.a, k.b, k.c, k.d), (k2.a, k2.c, k2.b, k2.d));
            if !x.is_constant() {
                prop_assert_eq!(scc(&x, &x).unwrap(), 1.0);
                prop_assert_eq!(scc(&x, &x.not()).unwrap(), -1.0);
            }
            Ok(())
        }),
        run_property(
            "vdc d/s exact count",
            (1u32..13, any::<u64>(), any::<u64>()),
            |(w, v, start)| {
                let n = 1u64 << w;
                let v = v % (n + 1);
                let cfg = RngConfig::vdc(w).with_start(start % (4 * n));
                prop_assert_eq!(encode(v, &cfg, n as usize).unwrap().ones(), v);
                Ok(())
            },
        ),
        run_property("bipolar from unipolar", stream(500), |x| {
            let u = value(&x, Encoding::Unipolar);
            let b = value(&x, Encoding::Bipolar);
            prop_assert!((b - (2.0 * u - 1.0)).abs() <= 1e-12);
            Ok(())
        }),
        run_property(
            "pipeline determinism",
            (
                2usize..10,
                2usize..10,
                any::<u64>(),
                0usize..3,
                2usize..6,
                4u32..7,
            ),
            |(w, h, seed, variant, tile, log_n)| {
                let img = GrayImage::from_fn(w, h, |r, c| {
                    let z =
                        seed ^ ((r as u64) << 32 | c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                    (z.wrapping_mul(0xBF58_476D_1CE4_E5B9) >> 56) as u8
                })
                .unwrap();
                let mut cfg = PipelineConfig::with_length(Variant::ALL[variant], 1 << log_n);
                cfg.tile = tile;
                let first = edge_values(&img, &cfg).unwrap();
                prop_assert_eq!(&first, &edge_values(&img, &cfg).unwrap());
                // tiles are independent: reverse order, sequential
                let tiles: Vec<_> = tile_origins(&img, tile)
                    .into_iter()
                    .rev()
                    .map(|(r, c)| process_tile(&img, &cfg, r, c).unwrap())
                    .collect();
                prop_assert_eq!(&first, &assemble(&img, &tiles));
                Ok(())
            },
        ),
    ];
    let failed: Vec<_> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n.as_str())
        .collect();
    verdict(
        failed.is_empty(),
        format!(
            "{} suites x {PROPERTY_CASES} cases, failed: {}",
            results.len(),
            if failed.is_empty() {
                "none".into()
            } else {
                failed.join(", ")
            }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 SCC unit truth",
            Duration::from_millis(1),
            c1_scc_unit_truth,
        ),
        (
            "2 AND identities at N=16",
            Duration::from_secs(1),
            c2_and_identities,
        ),
        (
            "3 synchronizer sweep",
            Duration::from_secs(60),
            c3_synchronizer,
        ),
        (
            "4 desynchronizer sweep",
            Duration::from_secs(60),
            c4_desynchronizer,
        ),
        (
            "5 decorrelator vs isolator",
            Duration::from_secs(60),
            c5_decorrelator,
        ),
        (
            "6 max/min accuracy",
            Duration::from_secs(120),
            c6_max_min_accuracy,
        ),
        ("7 pipeline accuracy", Duration::from_secs(300), c7_pipeline),
        ("8 property suites", Duration::MAX, c8_properties),
    ];
    let mut all = true;
    for (name, budget, run) in criteria {
        let started = Instant::now();
        let v = run();
        let elapsed = started.elapsed();
        let in_time = elapsed <= budget;
        let pass = v.pass && in_time;
        all &= pass;
        println!(
            "criterion {name}: {} ({}; {:.3} s{})",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time budget" }
        );
    }
    if !all {
        std::process::exit(1);
    }
}
