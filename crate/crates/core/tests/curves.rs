use proptest::prelude::*;

use relaydmt::dmt::{
    dmt_general_network, dmt_min_sum, dmt_modified_naf, dmt_multi_hop, dmt_naf_baseline, dmt_point_to_point,
    dmt_product, dmt_product_with, dmt_rs_parallel, dmt_rs_two_relay_limit, dmt_upper_bound_general, DmtCurve,
    PenaltyReading,
};
use relaydmt::topology::{min_cut_exhaustive, min_cut_max_flow, min_cut_weight, NetworkTopology, TopologyError};
use relaydmt::{CurveLabel, DmtError};

fn grid(r_max: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..=points).map(move |k| r_max * k as f64 / points as f64)
}

fn assert_le(a: &DmtCurve, b: &DmtCurve, upto: f64) {
    for r in grid(upto, 400) {
        let (x, y) = (a.eval_clamped(r), b.eval_clamped(r));
        assert!(x <= y + 1e-9, "r = {r}: {x} > {y}");
    }
}

fn dag_strategy() -> impl Strategy<Value = NetworkTopology> {
    (0usize..=6, 1u32..=3, any::<u64>(), 1u32..=3).prop_filter_map("destination unreachable", |(relays, hi, bits, uniform)| {
        let nodes = relays + 2;
        let antennas: Vec<u32> = (0..nodes).map(|k| if uniform == 3 { hi } else { 1 + ((bits >> k) as u32 % hi) }).collect();
        let mut edges = Vec::new();
        let mut bit = 0;
        for a in 0..nodes {
            for b in a + 1..nodes {
                if (bits.rotate_left(bit) & 3) != 0 {
                    edges.push((a, b));
                }
                bit += 7;
            }
        }
        NetworkTopology::new(antennas, edges).ok()
    })
}

proptest! {
    #[test]
    fn point_to_point_is_convex_and_symmetric(m in 1usize..=8, n in 1usize..=8) {
        let c = dmt_point_to_point(m, n).unwrap();
        prop_assert!(c.is_convex());
        let swapped = dmt_point_to_point(n, m).unwrap();
        prop_assert_eq!(c.vertices(), swapped.vertices());
        prop_assert_eq!(c.eval(0.0).unwrap(), (m * n) as f64);
        prop_assert_eq!(c.r_max(), m.min(n) as f64);
    }

    #[test]
    fn product_channel_never_beats_optimal(p in 1usize..=5, dm in 0usize..=3, dn in 0usize..=3) {
        let (m, n) = (p + dm, p + dn);
        let product = dmt_product(m, p, n).unwrap();
        let optimal = dmt_point_to_point(p, m.min(n)).unwrap();
        assert_le(&product, &optimal, p as f64);
        let other = dmt_product_with(m, p, n, PenaltyReading::FloorQuarter).unwrap();
        prop_assert_eq!(product.vertices(), other.vertices());
    }

    #[test]
    fn modified_naf_dominates_naf(p in 1usize..=4, dm in 0usize..=2, dn in 0usize..=2) {
        let (m, n) = (p + dm, p + dn);
        let modified = dmt_modified_naf(m, n, p).unwrap();
        let naf = dmt_naf_baseline(m, n, p).unwrap();
        assert_le(&naf, &modified, modified.r_max());
    }

    #[test]
    fn parallel_improves_with_rounds(m in 1usize..=4, n in 1usize..=4, p in 1usize..=4, k in 1usize..=4, b in 1usize..=20) {
        let fewer = dmt_rs_parallel(m, n, p, k, Some(b)).unwrap();
        let more = dmt_rs_parallel(m, n, p, k, Some(b + 1)).unwrap();
        let limit = dmt_rs_parallel(m, n, p, k, None).unwrap();
        assert_le(&fewer.curve, &more.curve, limit.curve.r_max());
        assert_le(&more.curve, &limit.curve, limit.curve.r_max());
        prop_assert_eq!(fewer.curve.eval(0.0).unwrap(), limit.curve.eval(0.0).unwrap());
        prop_assert_eq!(fewer.rounds_sufficient, b >= fewer.required_rounds);
    }

    #[test]
    fn min_sum_matches_dense_scan(a in 1usize..=4, b in 1usize..=4, c in 1usize..=4, d in 1usize..=4, frac in 0.0f64..=1.0) {
        let c1 = dmt_point_to_point(a, b).unwrap();
        let c2 = dmt_point_to_point(c, d).unwrap();
        let total = ((c1.r_max() + c2.r_max()) * 100.0) as u64;
        let two_r_hundredths = (frac * total as f64).round() as u64;
        let two_r = two_r_hundredths as f64 / 100.0;
        let scan = (0..=two_r_hundredths * 10)
            .map(|k| k as f64 * 1e-3)
            .filter(|&nu| nu <= c1.r_max() && two_r - nu <= c2.r_max() + 1e-12)
            .map(|nu| c1.eval_clamped(nu) + c2.eval_clamped(two_r - nu))
            .fold(f64::INFINITY, f64::min);
        let fast = dmt_min_sum(&c1, &c2, two_r / 2.0).unwrap();
        prop_assert!((fast.value - scan).abs() < 1e-9, "{} vs {}", fast.value, scan);
        let limit = dmt_rs_two_relay_limit(&c1, &c2).unwrap();
        prop_assert!((limit.eval_clamped(two_r / 2.0) - fast.value).abs() < 1e-9);
        prop_assert!(limit.is_convex());
    }

    #[test]
    fn multi_hop_is_weakest_hop(antennas in prop::collection::vec(1usize..=4, 2..=6), slots in 1usize..=100) {
        let out = dmt_multi_hop(&antennas, slots).unwrap();
        let hops: Vec<DmtCurve> = antennas.windows(2).map(|w| dmt_point_to_point(w[1], w[0]).unwrap()).collect();
        let weakest = DmtCurve::pointwise_min(&hops).unwrap();
        for r in grid(4.0, 200) {
            prop_assert!((out.curve.eval_clamped(r) - weakest.eval_clamped(r)).abs() < 1e-9);
        }
        if let Some(required) = out.required_slots {
            prop_assert_eq!(out.slots_sufficient, slots >= required);
        }
    }

    #[test]
    fn general_network_below_cut_set_bound(topology in dag_strategy()) {
        let upper = dmt_upper_bound_general(&topology).unwrap();
        match dmt_general_network(&topology) {
            Ok(curve) => assert_le(&curve, &upper, upper.r_max().max(curve.r_max())),
            Err(DmtError::UnsupportedParameter(_)) => prop_assert!(topology.uniform_antennas().is_none()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn min_cut_agrees_and_is_monotone(topology in dag_strategy(), a in 0usize..8, b in 0usize..8) {
        let cut = min_cut_exhaustive(&topology).unwrap();
        prop_assert_eq!(cut, min_cut_max_flow(&topology).unwrap());
        let nodes = topology.node_count();
        let (a, b) = (a % nodes, b % nodes);
        if a < b {
            let added = topology.with_edge((a, b));
            prop_assert!(min_cut_weight(&added).unwrap() >= cut);
            let removed = topology.without_edge((a, b));
            if removed.validate().is_ok() {
                prop_assert!(min_cut_weight(&removed).unwrap() <= cut);
            }
        }
    }

    #[test]
    fn curve_labels_round_trip(m in 1usize..=5, n in 1usize..=5, p in 1usize..=5, rounds in prop::option::of(1usize..=9)) {
        let labels = [
            CurveLabel::PointToPoint { m, n },
            CurveLabel::RsParallel { m, n, p, relays: 2, rounds },
            CurveLabel::ModifiedNaf { m, n, p },
            CurveLabel::RsMultiHop { antennas: vec![m, p, n], slots: 8 },
        ];
        for label in labels {
            let text = serde_json::to_string(&label).unwrap();
            prop_assert_eq!(serde_json::from_str::<CurveLabel>(&text).unwrap(), label.clone());
            prop_assert!(!label.name().contains(','));
        }
    }
}

#[test]
fn upper_bound_corners_on_two_relay_network() {
    let net = NetworkTopology::new(vec![2, 2, 2, 2], vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let general = dmt_general_network(&net).unwrap();
    let upper = dmt_upper_bound_general(&net).unwrap();
    assert_eq!(general.eval(0.0).unwrap(), upper.eval(0.0).unwrap());
    assert_eq!(general.eval(2.0).unwrap(), upper.eval(2.0).unwrap());
    assert!(general.eval(1.0).unwrap() < upper.eval(1.0).unwrap());
}

#[test]
fn topology_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("chain.json");
    std::fs::write(&good, r#"{"nodes": [2, 2, 2], "edges": [[0, 1], [1, 2]]}"#).unwrap();
    let chain = relaydmt::jobs::load_topology(&good).unwrap();
    assert_eq!(min_cut_weight(&chain).unwrap(), 4);

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"nodes\": [2, 2],\n  \"edges\": [[0, 1]\n}").unwrap();
    let err = NetworkTopology::load(&broken).unwrap_err();
    assert!(matches!(&err, TopologyError::Parse(msg) if msg.contains("line 4")), "{err}");

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"nodes": [1, 1, 1], "edges": []}"#).unwrap();
    assert!(matches!(NetworkTopology::load(&empty), Err(TopologyError::UnreachableDestination(_))));
}
