use num_complex::Complex64;
use proptest::prelude::*;

use relaydmt::matrix::{log_det_i_plus, ordered_eigenvalues, sample_gaussian_channel, sample_haar_unitary, svd};
use relaydmt::montecarlo::{snr_sweep, wilson_interval};
use relaydmt::schemes::{SchemeConfig, SchemeKind};
use relaydmt::verify::EmpiricalCdf;
use relaydmt::SimRng;

proptest! {
    #[test]
    fn haar_draws_are_unitary(p in 1usize..=6, seed in any::<u64>()) {
        let theta = sample_haar_unitary(p, &mut SimRng::from_seed(seed)).unwrap();
        prop_assert!(theta.is_unitary(1e-10));
    }

    #[test]
    fn eigenvalues_are_ordered_and_sum_to_norm(rows in 1usize..=5, cols in 1usize..=5, seed in any::<u64>()) {
        let a = sample_gaussian_channel(rows, cols, &mut SimRng::from_seed(seed)).unwrap();
        let values = ordered_eigenvalues(&a).unwrap();
        prop_assert_eq!(values.len(), rows.min(cols));
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let total: f64 = values.iter().sum();
        prop_assert!((total - a.frobenius_norm_sq()).abs() < 1e-9 * (1.0 + total));
        let dec = svd(&a).unwrap();
        prop_assert!(dec.reconstruct().max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn log_det_grows_with_scale(rows in 1usize..=4, cols in 1usize..=4, seed in any::<u64>(), s in 0.0f64..1e3, t in 0.0f64..1e3) {
        let a = sample_gaussian_channel(rows, cols, &mut SimRng::from_seed(seed)).unwrap();
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let x = log_det_i_plus(lo, &a, None).unwrap();
        let y = log_det_i_plus(hi, &a, None).unwrap();
        prop_assert!(x >= 0.0 && y >= x - 1e-12);
        let direct: f64 = ordered_eigenvalues(&a).unwrap().iter().map(|l| (1.0 + hi * l).log2()).sum();
        prop_assert!((y - direct).abs() < 1e-9 * (1.0 + direct));
    }
}

/// `|Θ_11|²` of a Haar unitary follows Beta(1, p − 1), and so does the
/// same entry after multiplying by any fixed unitary.
#[test]
fn haar_law_is_left_invariant() {
    let p = 3;
    let n = 20_000;
    let mut rng = SimRng::from_seed(42);
    let fixed = sample_haar_unitary(p, &mut rng).unwrap();
    let mut plain = Vec::with_capacity(n);
    let mut rotated = Vec::with_capacity(n);
    for _ in 0..n {
        let theta = sample_haar_unitary(p, &mut rng).unwrap();
        plain.push(theta.get(0, 0).norm_sqr());
        rotated.push(fixed.matmul(&theta).unwrap().get(0, 0).norm_sqr());
    }
    let beta = |x: f64| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(p as i32 - 1);
    for samples in [plain, rotated] {
        let ks = EmpiricalCdf::new(samples).ks_distance(beta);
        assert!(ks < 0.015, "KS distance {ks}");
    }
}

#[test]
fn gaussian_entries_have_unit_variance() {
    let mut rng = SimRng::from_seed(9);
    let a = sample_gaussian_channel(200, 200, &mut rng).unwrap();
    let mean_power = a.frobenius_norm_sq() / 40_000.0;
    assert!((mean_power - 1.0).abs() < 0.03, "{mean_power}");
    let mean: Complex64 = a.to_row_major().iter().sum::<Complex64>() / 40_000.0;
    assert!(mean.norm() < 0.02);
}

/// Exact coverage from the binomial law. The Wilson interval undercovers
/// when `n p` is of order one, so only `n p >= 5` is required to reach 93%.
fn exact_coverage(n: u64, p: f64) -> f64 {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut covered = 0.0;
    for k in 0..=n {
        let (lo, hi) = wilson_interval(k, n);
        if lo <= p && p <= hi {
            covered += pmf;
        }
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
    }
    covered
}

#[test]
fn wilson_interval_covers_true_probability() {
    for n in [50u64, 100, 200, 1000] {
        for p in [0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 0.5] {
            let coverage = exact_coverage(n, p);
            if n as f64 * p >= 5.0 {
                assert!(coverage >= 0.93, "n = {n}, p = {p}: coverage {coverage}");
            } else {
                assert!(coverage >= 0.90, "n = {n}, p = {p}: coverage {coverage}");
            }
        }
    }
    let mut rng = SimRng::from_seed(17);
    let (n, p, reps) = (400u64, 0.05, 4000);
    let covered = (0..reps)
        .filter(|_| {
            let failures = (0..n).filter(|_| rng.uniform() < p).count() as u64;
            let (lo, hi) = wilson_interval(failures, n);
            lo <= p && p <= hi
        })
        .count();
    assert!(covered as f64 / reps as f64 >= 0.93);
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let schemes: Vec<SchemeConfig> = vec![
        SchemeKind::RsTwoHop { m: 2, p: 2, n: 2, slots: 3 }.into(),
        SchemeKind::RsMultiHop { antennas: vec![2, 1, 2, 2], slots: 2 }.into(),
        SchemeKind::Naf { m: 1, p: 2, n: 1, blocks: 2 }.into(),
    ];
    for scheme in &schemes {
        let one = in_pool(1, || snr_sweep(scheme, 0.5, &[10.0, 100.0], 3000, 77).unwrap());
        let many = in_pool(5, || snr_sweep(scheme, 0.5, &[10.0, 100.0], 3000, 77).unwrap());
        assert_eq!(one, many, "{}", scheme.name());
    }
}

fn two_point_slope(scheme: SchemeConfig, rate: f64, seed: u64) -> f64 {
    let grid = [100.0, 10_000.0];
    let sweep = snr_sweep(&scheme, rate, &grid, 200_000, seed).unwrap();
    (sweep[0].p_hat.log10() - sweep[1].p_hat.log10()) / 2.0
}

#[test]
fn scalar_traditional_and_rotated_relaying_share_a_slope() {
    let af = two_point_slope(SchemeKind::TraditionalAf { m: 1, p: 1, n: 1 }.into(), 0.5, 1);
    let rs = two_point_slope(SchemeKind::RsTwoHop { m: 1, p: 1, n: 1, slots: 1 }.into(), 0.5, 2);
    assert!((af - rs).abs() < 0.1, "{af} vs {rs}");
    assert!(rs > 0.3 && rs < 0.6, "slope {rs}");
}
