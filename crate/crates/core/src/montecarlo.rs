//! Outage-probability estimation and empirical diversity slopes.
//!
//! Trial `i` of a run draws from its own generator seeded by
//! `derive_trial_seed(master, i)`, so results depend only on the trial
//! indices and never on how rayon schedules them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DmtError, Result};
use crate::rng::SimRng;
use crate::schemes::SchemeConfig;

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Fewest failures a grid point needs to enter a slope fit.
pub const MIN_FAILURES_FOR_FIT: u64 = 10;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run. Both mixing steps are bijections, so
/// distinct indices under one master never collide.
pub fn derive_trial_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master).wrapping_add(index))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutageEstimate {
    pub scheme: SchemeConfig,
    pub r: f64,
    pub power: f64,
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl OutageEstimate {
    pub fn from_counts(scheme: SchemeConfig, r: f64, power: f64, trials: u64, failures: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(failures, trials);
        Self {
            scheme,
            r,
            power,
            trials,
            failures,
            p_hat: failures as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.power.log10()
    }
}

/// Wilson score interval at 95%, clamped so that `low <= p_hat <= high`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = (centre - half).clamp(0.0, p);
    let high = (centre + half).clamp(p, 1.0);
    (low, high)
}

fn check_point(config: &SchemeConfig, r: f64, power: f64, trials: u64) -> Result<()> {
    config.validate()?;
    if trials == 0 {
        return Err(DmtError::InvalidConfig("trials must be at least 1".into()));
    }
    if !(power > 1.0) || !power.is_finite() {
        return Err(DmtError::InvalidConfig(format!("SNR must exceed 1 (0 dB), got {power}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(DmtError::InvalidConfig(format!("rate must be finite and nonnegative, got {r}")));
    }
    Ok(())
}

fn count_failures(config: &SchemeConfig, r: f64, power: f64, trials: u64, master: u64, first: u64) -> Result<u64> {
    (first..first + trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SimRng::from_seed(derive_trial_seed(master, i));
            config
                .sample_mutual_info(power, &mut rng)
                .map(|mi| mi.is_outage(r, power) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Outage probability at multiplexing gain `r` and linear SNR `power`.
pub fn estimate_outage(config: &SchemeConfig, r: f64, power: f64, trials: u64, master: u64) -> Result<OutageEstimate> {
    check_point(config, r, power, trials)?;
    let failures = count_failures(config, r, power, trials, master, 0)?;
    Ok(OutageEstimate::from_counts(config.clone(), r, power, trials, failures))
}

/// One estimate per grid point; point `j` uses trial indices
/// `j·trials .. (j+1)·trials`.
pub fn snr_sweep(config: &SchemeConfig, r: f64, powers: &[f64], trials: u64, master: u64) -> Result<Vec<OutageEstimate>> {
    if powers.is_empty() {
        return Err(DmtError::InvalidConfig("empty SNR grid".into()));
    }
    if powers.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(DmtError::InvalidConfig("SNR grid must be strictly increasing".into()));
    }
    for &power in powers {
        check_point(config, r, power, trials)?;
    }
    powers
        .iter()
        .enumerate()
        .map(|(j, &power)| {
            let first = (j as u64).checked_mul(trials).ok_or_else(|| {
                DmtError::InvalidConfig("trial indices overflow 64 bits".into())
            })?;
            let failures = count_failures(config, r, power, trials, master, first)?;
            Ok(OutageEstimate::from_counts(config.clone(), r, power, trials, failures))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    /// `(log10 P, −log10 p_hat)` for every retained point.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points_used: usize,
    /// SNRs in dB of upper-half points left out for too few failures.
    pub dropped_snr_db: Vec<f64>,
}

/// Weighted least-squares slope of `−log10 p_hat` against `log10 P` over
/// the upper half of the grid. Weights are inverse delta-method variances
/// `(1 − p) / (n p)` of the log estimate.
pub fn fit_diversity_slope(sweep: &[OutageEstimate]) -> Result<SlopeFit> {
    if sweep.len() < 4 {
        return Err(DmtError::InsufficientData(format!(
            "slope fit needs at least 4 grid points, got {}",
            sweep.len()
        )));
    }
    let mut sorted: Vec<&OutageEstimate> = sweep.iter().collect();
    sorted.sort_by(|a, b| a.power.total_cmp(&b.power));
    let upper = &sorted[sorted.len() / 2..];
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut dropped_snr_db = Vec::new();
    let ln10_sq = std::f64::consts::LN_10.powi(2);
    for e in upper {
        if e.failures < MIN_FAILURES_FOR_FIT || e.failures >= e.trials {
            dropped_snr_db.push(e.snr_db());
            continue;
        }
        let p = e.p_hat;
        points.push((e.power.log10(), -p.log10()));
        weights.push(e.trials as f64 * p / (1.0 - p) * ln10_sq);
    }
    if points.len() < 2 {
        return Err(DmtError::InsufficientData(format!(
            "only {} upper-half point(s) have at least {MIN_FAILURES_FOR_FIT} failures",
            points.len()
        )));
    }
    let w_sum: f64 = weights.iter().sum();
    let x_bar = points.iter().zip(&weights).map(|(p, w)| w * p.0).sum::<f64>() / w_sum;
    let y_bar = points.iter().zip(&weights).map(|(p, w)| w * p.1).sum::<f64>() / w_sum;
    let sxx: f64 = points.iter().zip(&weights).map(|(p, w)| w * (p.0 - x_bar).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .zip(&weights)
        .map(|(p, w)| w * (p.0 - x_bar) * (p.1 - y_bar))
        .sum();
    let slope = sxy / sxx;
    Ok(SlopeFit {
        points_used: points.len(),
        intercept: y_bar - slope * x_bar,
        stderr: (1.0 / sxx).sqrt(),
        slope,
        points,
        dropped_snr_db,
    })
}
