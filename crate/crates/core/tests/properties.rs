//! Property tests for the model identities and the trace plumbing.

use proptest::prelude::*;

use a2glink::*;

fn elevation() -> impl Strategy<Value = f64> {
    0.0..=90.0f64
}

proptest! {
    // cos^2 + sin^2: the VV and HH gain products always split unity
    #[test]
    fn vv_and_hh_products_sum_to_one(alpha in elevation()) {
        let v = AntennaConfig::analytic(Orientation::Vertical);
        let h = AntennaConfig::analytic(Orientation::Horizontal);
        let vv = gain_product(&v, &v, alpha).unwrap();
        let hh = gain_product(&h, &h, alpha).unwrap();
        prop_assert!((vv + hh - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&vv));
        prop_assert!((0.0..=1.0).contains(&hh));
    }

    #[test]
    fn gain_product_is_symmetric(alpha in elevation()) {
        let v = AntennaConfig::analytic(Orientation::Vertical);
        let h = AntennaConfig::analytic(Orientation::Horizontal);
        prop_assert_eq!(
            gain_product(&v, &h, alpha).unwrap(),
            gain_product(&h, &v, alpha).unwrap()
        );
    }

    #[test]
    fn analytic_gains_are_monotone(a in elevation(), b in elevation()) {
        prop_assume!(a < b);
        let va = analytic_gain(Orientation::Vertical, a).unwrap();
        let vb = analytic_gain(Orientation::Vertical, b).unwrap();
        let ha = analytic_gain(Orientation::Horizontal, a).unwrap();
        let hb = analytic_gain(Orientation::Horizontal, b).unwrap();
        prop_assert!(vb <= va, "vertical gain rose: {} -> {}", va, vb);
        prop_assert!(hb >= ha, "horizontal gain fell: {} -> {}", ha, hb);
    }

    #[test]
    fn selection_dominates_both_branches(alpha in elevation()) {
        let g = selection_gain(alpha).unwrap();
        prop_assert!(g.selected_gain >= g.gain_rx_vertical);
        prop_assert!(g.selected_gain >= g.gain_rx_horizontal);
        let sum = 1.0 + (2.0 * alpha.to_radians()).sin();
        prop_assert!((g.gain_rx_vertical + g.gain_rx_horizontal - sum).abs() <= 1e-12);
    }

    // Eq-style budget: swapping which terminal is which changes nothing,
    // and no gain can beat the isotropic link
    #[test]
    fn rss_is_symmetric_and_bounded(
        delta_h in 1.0..100.0f64,
        l in 0.0..200.0f64,
        gamma in 1.0..6.0f64,
        tx_v in any::<bool>(),
        rx_v in any::<bool>(),
    ) {
        let orient = |vertical| if vertical { Orientation::Vertical } else { Orientation::Horizontal };
        let tx = AntennaConfig::analytic(orient(tx_v));
        let rx = AntennaConfig::analytic(orient(rx_v));
        let budget = LinkBudget::new(0.0, 4.0e9, gamma).unwrap();
        let geom = LinkGeometry::new(delta_h, 0.0, l).unwrap();

        let forward = rss(&budget, &geom, &tx, &rx).unwrap();
        let swapped = rss(&budget, &geom, &rx, &tx).unwrap();
        prop_assert_eq!(forward, swapped);

        let linear = forward.linear_mw();
        prop_assert!(linear >= 0.0);
        prop_assert!(linear <= budget.isotropic_rss_mw(geom.slant_distance_m()));
    }
}

fn rss_value() -> impl Strategy<Value = Rss> {
    prop_oneof![
        4 => (-120.0..0.0f64).prop_map(Rss::Dbm),
        1 => Just(Rss::BelowFloor),
    ]
}

fn trace() -> impl Strategy<Value = RssTrace> {
    proptest::collection::vec(rss_value(), 1..40).prop_map(|levels| {
        let samples = levels
            .into_iter()
            .enumerate()
            .map(|(i, rss)| RssSample {
                horizontal_distance_m: i as f64 * 0.5,
                rss,
            })
            .collect();
        RssTrace::new("prop", samples).unwrap()
    })
}

proptest! {
    #[test]
    fn normalization_is_idempotent_and_order_preserving(t in trace()) {
        let Ok(once) = normalize_trace(&t) else {
            // traces with no finite sample are the only rejection
            prop_assert!(t.samples().iter().all(|s| !s.rss.is_finite()));
            return Ok(());
        };
        prop_assert_eq!(once.max_finite_dbm().unwrap(), 0.0);
        let twice = normalize_trace(&once).unwrap();
        prop_assert_eq!(twice.samples(), once.samples());
        prop_assert_eq!(once.peak().unwrap().0, t.peak().unwrap().0);
        // pairwise ranking of finite samples is unchanged
        let finites = |tr: &RssTrace| -> Vec<f64> {
            tr.samples().iter().filter_map(|s| s.rss.dbm()).collect()
        };
        let before = finites(&t);
        let after = finites(&once);
        for i in 0..before.len() {
            for j in i + 1..before.len() {
                prop_assert_eq!(before[i] < before[j], after[i] < after[j]);
            }
        }
    }

    #[test]
    fn trace_csv_round_trip_is_bit_exact(t in trace()) {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = parse_trace_csv(&text, "prop", "prop").unwrap();
        prop_assert_eq!(back.samples(), t.samples());
    }

    #[test]
    fn self_comparison_is_always_zero(t in trace()) {
        prop_assume!(t.samples().iter().any(|s| s.rss.is_finite()));
        let report = compare(&t, &t, None).unwrap();
        prop_assert_eq!(report.rmse_db, 0.0);
        prop_assert_eq!(report.peak_distance_error_m, 0.0);
    }
}
