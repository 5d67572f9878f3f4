use hlfq::galois_stats::{independence_test, joint_cycle_sample, simulate_product_model, CycleType, JointCycleStats};
use hlfq::hlcount::{pi_exact, TupleSpec, DEFAULT_BUDGET};
use hlfq::Shard;

#[test]
fn all_irreducible_cell_matches_exact_count() {
    for (q, n) in [("31", 3usize), ("3^3", 3), ("31", 2)] {
        let spec = TupleSpec::parse(q, n, &["0", "1"]).unwrap();
        let samples = 200_000u64;
        let stats = joint_cycle_sample(&spec, samples, 5).unwrap();
        let full = CycleType::full_cycle(n);
        let freq = stats.cell_count(&[full.clone(), full]) as f64 / samples as f64;
        let space = (spec.q() as f64).powi(n as i32);
        let p = pi_exact(&spec, Shard::FULL, DEFAULT_BUDGET).unwrap().pi.exact().unwrap() as f64 / space;
        let z = (freq - p) / (p * (1.0 - p) / samples as f64).sqrt();
        assert!(z.abs() < 4.0, "q={q} n={n}: freq {freq} vs {p}");
    }
}

#[test]
fn discarded_fraction_shrinks_like_one_over_q() {
    for q in ["11", "31", "101", "401"] {
        let spec = TupleSpec::parse(q, 3, &["0", "1"]).unwrap();
        let stats = joint_cycle_sample(&spec, 50_000, 8).unwrap();
        assert_eq!(stats.total + stats.discarded, 50_000);
        let scaled = stats.discarded as f64 / 50_000.0 * spec.q() as f64;
        // two offsets, each non-square-free with probability about 1/q
        assert!((1.0..3.0).contains(&scaled), "q={q}: q * fraction = {scaled}");
    }
}

#[test]
fn copied_coordinate_is_rejected() {
    let base = simulate_product_model(3, 1, 10_000, 3);
    let mut copied = JointCycleStats::empty(3, 2);
    for (cell, &count) in &base.counts {
        for _ in 0..count {
            copied.record(vec![cell[0].clone(), cell[0].clone()]);
        }
    }
    let rep = independence_test(&copied).unwrap();
    assert!(rep.joint_fit.p_value < 1e-6);
    assert!(rep.independence.p_value < 1e-6);
    assert!(!rep.marginal_fits.iter().any(|m| m.rejects(1e-6)));
}

#[test]
fn product_model_p_values_spread_out() {
    // rough uniformity: deciles of 200 null p-values each get some mass
    let mut deciles = [0u32; 10];
    for s in 0..200 {
        let p = independence_test(&simulate_product_model(3, 2, 5_000, s)).unwrap().joint_fit.p_value;
        deciles[((p * 10.0) as usize).min(9)] += 1;
    }
    assert!(deciles.iter().all(|&d| (5..=40).contains(&d)), "{deciles:?}");
}
