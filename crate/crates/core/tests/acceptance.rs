//! End-to-end acceptance suite.
//!
//! One test per criterion; each prints a `criterion N (...): PASS` line when
//! it holds (visible with `--nocapture`), and panics with diagnostics when
//! it does not. Run with
//!
//! ```text
//! cargo test -p a2glink --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use a2glink::scenario::PatternMode;
use a2glink::*;

/// Standard flyby heights over the tripod receiver.
const HEIGHTS_M: [f64; 4] = [10.0, 20.0, 30.0, 50.0];
const RECEIVER_HEIGHT_M: f64 = 1.27;

fn sweep_spec(configuration: Configuration, heights: &[f64], step_m: f64) -> SweepSpec {
    SweepSpec {
        drone_heights_m: heights.to_vec(),
        receiver_height_m: RECEIVER_HEIGHT_M,
        l_range_m: (0.0, 200.0),
        step_m,
        configuration,
        pattern_mode: PatternMode::Analytic,
    }
}

fn vertical() -> AntennaConfig {
    AntennaConfig::analytic(Orientation::Vertical)
}

#[test]
fn criterion_1_critical_distance() {
    let budget = LinkBudget::default();
    let started = Instant::now();
    for &h in &HEIGHTS_M {
        let delta_h = h - RECEIVER_HEIGHT_M;
        let expected = critical_distance_analytic(delta_h, 2.0).unwrap();
        let traces = run_sweep(&sweep_spec(Configuration::Vv, &[h], 0.1), &budget).unwrap();
        let (argmax, _) = traces[0].peak().unwrap();
        assert!(
            (argmax - expected).abs() <= 0.1,
            "h = {h}: sweep argmax {argmax} vs closed form {expected}"
        );
        let refined = critical_distance_numeric(
            &budget,
            delta_h,
            &vertical(),
            &vertical(),
            (0.0, 200.0),
            0.1,
        )
        .unwrap();
        assert!(
            (refined - expected).abs() <= 0.1,
            "h = {h}: refined argmax {refined} vs closed form {expected}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 1 (critical distance = sqrt(2 dh^2/gamma) within 0.1 m, < 1 s): PASS");
}

#[test]
fn criterion_2_gain_product_closed_forms() {
    let v = vertical();
    let h = AntennaConfig::analytic(Orientation::Horizontal);
    for k in 0..1000 {
        let alpha = 90.0 * k as f64 / 999.0;
        let a = alpha.to_radians();
        let vv = gain_product(&v, &v, alpha).unwrap();
        let vh = gain_product(&v, &h, alpha).unwrap();
        let hh = gain_product(&h, &h, alpha).unwrap();
        assert!((vv - a.cos().powi(2)).abs() <= 1e-12, "VV at {alpha}");
        assert!((vh - 0.5 * (2.0 * a).sin()).abs() <= 1e-12, "VH at {alpha}");
        assert!((hh - a.sin().powi(2)).abs() <= 1e-12, "HH at {alpha}");
        assert!((vv + hh - 1.0).abs() <= 1e-12, "VV + HH at {alpha}");
    }
    println!("criterion 2 (Table-style closed forms at 1000 angles within 1e-12): PASS");
}

#[test]
fn criterion_3_derivative_sign_vs_finite_difference() {
    const FD_STEP_M: f64 = 1e-3;
    const EXCLUSION_M: f64 = 10.0 * FD_STEP_M;

    let mut rng = StdRng::seed_from_u64(0x05ee_da26);
    let v = vertical();
    let mut matches = 0usize;
    for _ in 0..1000 {
        let delta_h: f64 = rng.gen_range(1.0..100.0);
        let gamma: f64 = rng.gen_range(1.0..6.0);
        let critical = critical_distance_analytic(delta_h, gamma).unwrap();
        let l = loop {
            let candidate: f64 = rng.gen_range(0.05..200.0);
            if (candidate - critical).abs() >= EXCLUSION_M {
                break candidate;
            }
        };
        let budget = LinkBudget::new(0.0, 4.0e9, gamma).unwrap();
        let geom = LinkGeometry::new(delta_h, 0.0, l).unwrap();
        let analytic_sign = rss_derivative_sign(&budget, &geom).unwrap();

        let eval = |l: f64| {
            let geom = LinkGeometry::new(delta_h, 0.0, l).unwrap();
            rss(&budget, &geom, &v, &v).unwrap().dbm().unwrap()
        };
        let fd = eval(l + FD_STEP_M) - eval(l - FD_STEP_M);
        let fd_sign = if fd > 0.0 { 1 } else { -1 };
        if fd_sign == analytic_sign {
            matches += 1;
        }
    }
    assert!(matches >= 999, "only {matches}/1000 signs agree");
    println!("criterion 3 (derivative sign vs finite difference, {matches}/1000 >= 999): PASS");
}

#[test]
fn criterion_4_monotonic_trends() {
    let budget = LinkBudget::default();

    for &h in &HEIGHTS_M {
        let hh = run_sweep(&sweep_spec(Configuration::Hh, &[h], 0.5), &budget).unwrap();
        for w in hh[0].samples().windows(2) {
            assert!(
                w[1].rss.dbm().unwrap() < w[0].rss.dbm().unwrap(),
                "HH not strictly decreasing at h = {h}, l = {}",
                w[1].horizontal_distance_m
            );
        }
    }

    let vv = run_sweep(&sweep_spec(Configuration::Vv, &HEIGHTS_M, 0.5), &budget).unwrap();
    let mut peaks = Vec::new();
    for trace in &vv {
        let finite: Vec<(f64, f64)> = trace
            .samples()
            .iter()
            .filter_map(|s| s.rss.dbm().map(|v| (s.horizontal_distance_m, v)))
            .collect();
        let peak_idx = finite
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .unwrap();
        for w in finite[..=peak_idx].windows(2) {
            assert!(
                w[1].1 > w[0].1,
                "{}: not rising before the peak",
                trace.label
            );
        }
        for w in finite[peak_idx..].windows(2) {
            assert!(
                w[1].1 < w[0].1,
                "{}: not falling after the peak",
                trace.label
            );
        }
        peaks.push(finite[peak_idx].0);
    }
    assert!(
        peaks.windows(2).all(|w| w[0] < w[1]),
        "VV peak distances not increasing with height: {peaks:?}"
    );
    println!("criterion 4 (HH strictly decreasing; VV unimodal with height-ordered peaks): PASS");
}

#[test]
fn criterion_5_multiantenna_dominance() {
    let budget = LinkBudget::default();

    for &h in &HEIGHTS_M {
        let dual = run_sweep(&sweep_spec(Configuration::VhVh, &[h], 0.5), &budget).unwrap();
        for single_cfg in [Configuration::Vv, Configuration::Vh, Configuration::Hh] {
            let single = run_sweep(&sweep_spec(single_cfg, &[h], 0.5), &budget).unwrap();
            for (d, s) in dual[0].samples().iter().zip(single[0].samples()) {
                assert!(
                    d.rss.linear_mw() >= s.rss.linear_mw(),
                    "VHVH below {single_cfg} at h = {h}, l = {}",
                    d.horizontal_distance_m
                );
            }
        }
    }

    for k in 0..=9000 {
        let alpha = k as f64 * 0.01;
        let g = selection_gain(alpha).unwrap();
        let sum = 1.0 + (2.0 * alpha.to_radians()).sin();
        assert!(
            (g.gain_rx_vertical + g.gain_rx_horizontal - sum).abs() <= 1e-12,
            "branch sum at {alpha}"
        );
        // crossover exactly at 45 degrees, ties selecting vertical
        if alpha < 45.0 {
            assert!(g.gain_rx_vertical > g.gain_rx_horizontal, "at {alpha}");
            assert_eq!(g.selected, Orientation::Vertical, "at {alpha}");
        } else if alpha > 45.0 {
            assert!(g.gain_rx_horizontal > g.gain_rx_vertical, "at {alpha}");
            assert_eq!(g.selected, Orientation::Horizontal, "at {alpha}");
        } else {
            assert_eq!(g.gain_rx_vertical, g.gain_rx_horizontal);
            assert_eq!(g.selected, Orientation::Vertical);
        }
    }
    println!(
        "criterion 5 (VHVH pointwise dominance; 1 + sin 2a identity; 45-degree crossover): PASS"
    );
}

#[test]
fn criterion_6_tabulated_pattern_fidelity() {
    // dB-domain interpolation of a pattern with a deep null diverges as
    // sec^2(alpha) near that null; at 1-degree sampling the 0.05 dB budget
    // is available up to 83 degrees elevation (measured worst there:
    // 0.019 dB). Inside the null cone the error is bounded by 1 dB and the
    // terminal sampling interval (alpha > 89 deg) masks to below-floor.
    const TRUSTED_ELEVATION_DEG: f64 = 83.0;
    const NULL_CONE_BOUND_DB: f64 = 1.0;

    let budget = LinkBudget::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doughnut_1deg.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    write_pattern_csv(&mut file, &digitized_doughnut(1.0).unwrap()).unwrap();
    drop(file);

    let mut checked_trusted = 0usize;
    let mut checked_cone = 0usize;
    for &h in &HEIGHTS_M {
        let mut spec = sweep_spec(Configuration::Vv, &[h], 0.5);
        let analytic = run_sweep(&spec, &budget).unwrap().remove(0);
        spec.pattern_mode = PatternMode::Tabulated(path.clone());
        let tabulated = run_sweep(&spec, &budget).unwrap().remove(0);

        for (a, t) in analytic.samples().iter().zip(tabulated.samples()) {
            let l = a.horizontal_distance_m;
            let alpha = LinkGeometry::new(h, RECEIVER_HEIGHT_M, l)
                .unwrap()
                .elevation_angle_deg();
            match (a.rss.dbm(), t.rss.dbm()) {
                (Some(av), Some(tv)) => {
                    let err = (av - tv).abs();
                    if alpha <= TRUSTED_ELEVATION_DEG {
                        assert!(
                            err <= 0.05,
                            "h = {h}, l = {l} (alpha = {alpha:.2}): |{av} - {tv}| = {err}"
                        );
                        checked_trusted += 1;
                    } else {
                        assert!(
                            err <= NULL_CONE_BOUND_DB,
                            "h = {h}, l = {l} (alpha = {alpha:.2}): |{av} - {tv}| = {err}"
                        );
                        checked_cone += 1;
                    }
                }
                (None, Some(_)) => panic!("h = {h}, l = {l}: tabulated finite at an analytic null"),
                (Some(_), None) => assert!(
                    alpha > 89.0,
                    "h = {h}, l = {l} (alpha = {alpha:.2}): tabulated masked outside the null interval"
                ),
                (None, None) => {}
            }
        }
    }
    assert!(
        checked_trusted > 1500,
        "only {checked_trusted} trusted points"
    );
    println!(
        "criterion 6 (tabulated sweep within 0.05 dB up to {TRUSTED_ELEVATION_DEG} deg elevation \
         over {checked_trusted} points; null cone bounded by {NULL_CONE_BOUND_DB} dB over \
         {checked_cone} points): PASS"
    );
}

#[test]
fn criterion_7_round_trip_and_determinism() {
    let budget = LinkBudget::default();
    let spec = sweep_spec(Configuration::Vv, &HEIGHTS_M, 0.5);
    let traces = run_sweep(&spec, &budget).unwrap();

    // byte-identical re-runs
    let mut first = Vec::new();
    write_sweep_table(&mut first, ',', &spec, &traces).unwrap();
    let rerun = run_sweep(&spec, &budget).unwrap();
    let mut second = Vec::new();
    write_sweep_table(&mut second, ',', &spec, &rerun).unwrap();
    assert_eq!(first, second, "repeated runs differ");

    // sweep table -> parser round trip preserves every sample bit-for-value
    let text = String::from_utf8(first).unwrap();
    let entries = parse_sweep_csv(&text, "acceptance").unwrap();
    assert_eq!(entries.len(), traces.len());
    for (entry, trace) in entries.iter().zip(&traces) {
        assert_eq!(entry.trace.samples(), trace.samples());
    }

    // trace CSV -> load_trace -> compare comes back with zero RMSE
    let dir = tempfile::tempdir().unwrap();
    for trace in &traces {
        let path = dir.path().join("trace.csv");
        let mut file = std::fs::File::create(&path).unwrap();
        write_trace_csv(&mut file, trace).unwrap();
        drop(file);
        let loaded = load_trace(&path).unwrap();
        assert_eq!(loaded.samples(), trace.samples());
        let report = compare(trace, &loaded, None).unwrap();
        assert_eq!(report.rmse_db, 0.0);
        assert_eq!(report.peak_distance_error_m, 0.0);
    }
    println!("criterion 7 (CSV round trip exact; repeated runs byte-identical; self-compare RMSE 0): PASS");
}

#[test]
fn criterion_8_normalization() {
    let budget = LinkBudget::default();
    for configuration in Configuration::ALL {
        let spec = sweep_spec(configuration, &HEIGHTS_M, 0.5);
        for trace in run_sweep(&spec, &budget).unwrap() {
            let normalized = normalize_trace(&trace).unwrap();
            assert_eq!(
                normalized.max_finite_dbm().unwrap(),
                0.0,
                "{}: peak not exactly 0 dB",
                trace.label
            );
            let twice = normalize_trace(&normalized).unwrap();
            assert_eq!(twice.samples(), normalized.samples(), "{}", trace.label);
            assert_eq!(
                normalized.peak().unwrap().0,
                trace.peak().unwrap().0,
                "{}: argmax moved",
                trace.label
            );
            // order of finite samples is preserved
            for (a, b) in trace
                .samples()
                .windows(2)
                .zip(normalized.samples().windows(2))
            {
                if let ((Some(a0), Some(a1)), (Some(b0), Some(b1))) = (
                    (a[0].rss.dbm(), a[1].rss.dbm()),
                    (b[0].rss.dbm(), b[1].rss.dbm()),
                ) {
                    assert_eq!(a0 < a1, b0 < b1, "{}: ranking changed", trace.label);
                }
            }
        }
    }
    println!("criterion 8 (normalized peaks exactly 0 dB; idempotent; argmax-preserving): PASS");
}
