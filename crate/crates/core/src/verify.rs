//! Numerical checks of the per-realization matrix inequalities and the
//! distributional claims behind the achievability proofs.
//!
//! Each suite draws sample `k` from `SimRng::from_seed(derive_trial_seed(master, k))`
//! and runs in parallel, so a report depends only on its settings and seed.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DmtError, Result};
use crate::matrix::{
    eigenvalue_at, ordered_eigenvalues, sample_gaussian_channel, sample_haar_frame, sample_haar_unitary, svd,
    ComplexMatrix, UNITARY_TOL,
};
use crate::montecarlo::derive_trial_seed;
use crate::rng::SimRng;
use crate::schemes::{alpha_coefficient, mutual_info_af_lower, mutual_info_af_upper, mutual_info_traditional_af};

/// Relative slack below which a bound counts as violated.
pub const RELATIVE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheckReport {
    pub name: String,
    pub samples: u64,
    pub violations: u64,
    /// Smallest observed margin; negative values mean a bound was crossed.
    pub worst_margin: f64,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
}

impl BoundCheckReport {
    fn new(name: impl Into<String>, samples: u64, violations: u64, worst_margin: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            samples,
            violations,
            worst_margin,
            pass,
            details: BTreeMap::new(),
        }
    }

    fn detail(mut self, key: impl Into<String>, value: f64) -> Self {
        self.details.insert(key.into(), value);
        self
    }
}

fn sample_rng(master: u64, k: u64) -> SimRng {
    SimRng::from_seed(derive_trial_seed(master, k))
}

/// Which rotation enters the right-hand side of the eigenvalue bound.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Lemma3Variant {
    #[default]
    Faithful,
    /// Uses `Θ^T` on the right-hand side; a broken bound for mutation tests.
    TransposedTheta,
}

/// `λ_i(GΘH) − λ_i(G) λ_i(H) λ_min(V_{(1,i)}^H(G) Θ U_{(1,i)}(H))`, with
/// eigenvalues beyond the rank taken as zero.
pub fn check_lemma3(g: &ComplexMatrix, h: &ComplexMatrix, theta: &ComplexMatrix, i: usize) -> Result<f64> {
    check_lemma3_with(g, h, theta, i, Lemma3Variant::Faithful).map(|(margin, _)| margin)
}

/// Returns the margin and the left-hand side.
#[doc(hidden)]
pub fn check_lemma3_with(
    g: &ComplexMatrix,
    h: &ComplexMatrix,
    theta: &ComplexMatrix,
    i: usize,
    variant: Lemma3Variant,
) -> Result<(f64, f64)> {
    if i == 0 {
        return Err(DmtError::InvalidInput("eigenvalue index is 1-based".into()));
    }
    if theta.rows() != theta.cols() || !theta.is_unitary(UNITARY_TOL) {
        return Err(DmtError::InvalidInput("rotation must be a square unitary matrix".into()));
    }
    let lhs = eigenvalue_at(&ordered_eigenvalues(&g.matmul(theta)?.matmul(h)?)?, i);
    let (sg, sh) = (svd(g)?, svd(h)?);
    if i > sg.sigma.len() || i > sh.sigma.len() {
        return Ok((lhs, lhs));
    }
    let lambda_g = sg.sigma[i - 1].powi(2);
    let lambda_h = sh.sigma[i - 1].powi(2);
    let rotation = match variant {
        Lemma3Variant::Faithful => theta.clone(),
        Lemma3Variant::TransposedTheta => theta.transpose(),
    };
    let psi = sg.v.leading_columns(i)?.adjoint().matmul(&rotation)?.matmul(&sh.u.leading_columns(i)?)?;
    let lambda_min = eigenvalue_at(&ordered_eigenvalues(&psi)?, i);
    Ok((lhs - lambda_g * lambda_h * lambda_min, lhs))
}

/// Random sizes in `1..=max_dim` for `G`, `H`, `Θ` and the index `i`.
pub fn lemma3_suite(samples: u64, max_dim: usize, master: u64) -> Result<BoundCheckReport> {
    lemma3_suite_with(samples, max_dim, master, Lemma3Variant::Faithful)
}

#[doc(hidden)]
pub fn lemma3_suite_with(samples: u64, max_dim: usize, master: u64, variant: Lemma3Variant) -> Result<BoundCheckReport> {
    let outcomes: Vec<(f64, bool)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            let mut dim = || rng_dim(&mut rng, max_dim);
            let (m, n, p, i) = (dim(), dim(), dim(), dim());
            let g = sample_gaussian_channel(n, p, &mut rng)?;
            let h = sample_gaussian_channel(p, m, &mut rng)?;
            let theta = sample_haar_unitary(p, &mut rng)?;
            let (margin, lhs) = check_lemma3_with(&g, &h, &theta, i, variant)?;
            Ok((margin, margin < -RELATIVE_SLACK * (1.0 + lhs.abs())))
        })
        .collect::<Result<_>>()?;
    let violations = outcomes.iter().filter(|o| o.1).count() as u64;
    let worst = outcomes.iter().map(|o| o.0).fold(f64::INFINITY, f64::min);
    Ok(BoundCheckReport::new("lemma3_eigenvalue_bound", samples, violations, worst, violations == 0)
        .detail("max_dim", max_dim as f64))
}

fn rng_dim(rng: &mut SimRng, max_dim: usize) -> usize {
    rng.below(max_dim as u64) as usize + 1
}

/// Sorted samples of a scalar statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        Self { sorted: samples }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn on_grid(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&e| (e, self.cdf(e))).collect()
    }

    /// Kolmogorov-Smirnov distance to a continuous reference CDF.
    pub fn ks_distance(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let f = reference(x);
                (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.sorted.len();
        let k = ((q * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }
}

/// `n` points evenly spaced in `log10` between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1).max(1) as f64))
        .collect()
}

/// Samples of `λ_min(Ψ^H Ψ)` with `Ψ = V^H Θ U`, where `V`, `U` are
/// independent uniformly random `p × i` orthonormal frames and `Θ` is Haar.
pub fn lambda_min_tail(p: usize, i: usize, samples: u64, master: u64) -> Result<EmpiricalCdf> {
    if i == 0 || i > p {
        return Err(DmtError::InvalidInput(format!("need 1 <= i <= p, got i={i}, p={p}")));
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            let v = sample_haar_frame(p, i, &mut rng)?;
            let u = sample_haar_frame(p, i, &mut rng)?;
            let theta = sample_haar_unitary(p, &mut rng)?;
            let psi = v.adjoint().matmul(&theta)?.matmul(&u)?;
            Ok(eigenvalue_at(&ordered_eigenvalues(&psi)?, i))
        })
        .collect::<Result<_>>()?;
    Ok(EmpiricalCdf::new(values))
}

/// Law of the smallest eigenvalue for `i = 1`: `1 − (1 − z)^{p−1}`.
pub fn lambda_min_cdf_rank_one(p: usize, z: f64) -> f64 {
    1.0 - (1.0 - z.clamp(0.0, 1.0)).powi(p as i32 - 1)
}

/// `η = i (p − (i+1)/2) κ^{1/i}` with `κ = (i²/(i−1))^{i−1}` and `κ = 1` at `i = 1`.
pub fn lemma4_eta(p: usize, i: usize) -> f64 {
    let fi = i as f64;
    let kappa = if i == 1 { 1.0 } else { (fi * fi / (fi - 1.0)).powf(fi - 1.0) };
    fi * (p as f64 - (fi + 1.0) / 2.0) * kappa.powf(1.0 / fi)
}

/// Kolmogorov-Smirnov check of the rank-one law.
pub fn lemma4_rank_one_ks(p: usize, samples: u64, tolerance: f64, master: u64) -> Result<BoundCheckReport> {
    let cdf = lambda_min_tail(p, 1, samples, master)?;
    let d = cdf.ks_distance(|z| lambda_min_cdf_rank_one(p, z));
    Ok(
        BoundCheckReport::new(format!("lemma4_rank_one_ks_p{p}"), samples, (d >= tolerance) as u64, tolerance - d, d < tolerance)
            .detail("ks_distance", d)
            .detail("tolerance", tolerance),
    )
}

/// Compares the empirical CDF with `η ε^{1/i}` on a log grid of `ε` in
/// `[1e-6, 1e-2]`. A grid point fails when the empirical value exceeds the
/// bound by more than three binomial standard errors.
pub fn lemma4_bound(p: usize, i: usize, samples: u64, master: u64) -> Result<BoundCheckReport> {
    let cdf = lambda_min_tail(p, i, samples, master)?;
    let eta = lemma4_eta(p, i);
    let n = samples as f64;
    let mut violations = 0;
    let mut strict_violations = 0;
    let mut worst = f64::INFINITY;
    for (eps, f_hat) in cdf.on_grid(&log_grid(1e-6, 1e-2, 41)) {
        let bound = eta * eps.powf(1.0 / i as f64);
        let allowance = 3.0 * (bound.min(1.0) * (1.0 - bound.min(1.0)) / n).sqrt();
        worst = worst.min(bound - f_hat);
        if f_hat > bound {
            strict_violations += 1;
        }
        if f_hat > bound + allowance {
            violations += 1;
        }
    }
    Ok(
        BoundCheckReport::new(format!("lemma4_tail_bound_p{p}_i{i}"), samples, violations, worst, violations == 0)
            .detail("eta", eta)
            .detail("strict_violations", strict_violations as f64),
    )
}

/// Survival function of `Gamma(k, 1)` at `x`: `e^{−x} Σ_{j<k} x^j / j!`.
pub fn gamma_survival(k: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..k {
        if j > 0 {
            term *= x / j as f64;
        }
        sum += term;
    }
    (-x).exp() * sum
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Tail of `‖H‖²` for an `p × m` Rayleigh matrix above `x = P^{δ₀/2}`,
/// compared with the asymptote `x^{mp} e^{−x} / (mp)!` times `slack`.
pub fn check_chi_square_tail(
    m: usize,
    p: usize,
    delta0: f64,
    power: f64,
    samples: u64,
    slack: f64,
    master: u64,
) -> Result<BoundCheckReport> {
    if !(delta0 > 0.0) || !(power > 1.0) || samples == 0 {
        return Err(DmtError::InvalidInput(format!(
            "need delta0 > 0, P > 1 and samples >= 1, got {delta0}, {power}, {samples}"
        )));
    }
    let x = power.powf(delta0 / 2.0);
    let exceed: u64 = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            sample_gaussian_channel(p, m, &mut rng).map(|h| (h.frobenius_norm_sq() > x) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let dof = m * p;
    let empirical = exceed as f64 / samples as f64;
    let asymptote = x.powi(dof as i32) * (-x).exp() / factorial(dof);
    let exact = gamma_survival(dof, x);
    let se = (exact * (1.0 - exact) / samples as f64).sqrt();
    let z = if se > 0.0 { (empirical - exact) / se } else { 0.0 };
    let margin = slack * asymptote - empirical;
    Ok(BoundCheckReport::new(
        format!("chi_square_tail_m{m}_p{p}"),
        samples,
        (margin < 0.0) as u64,
        margin,
        margin >= 0.0,
    )
    .detail("threshold", x)
    .detail("empirical_tail", empirical)
    .detail("asymptotic_bound", asymptote)
    .detail("slack", slack)
    .detail("exact_tail", exact)
    .detail("z_vs_exact", z))
}

/// `δ = −log α² / log P` for each of `samples` channel draws.
pub fn alpha_delta_samples(m: usize, p: usize, power: f64, samples: u64, master: u64) -> Result<EmpiricalCdf> {
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            let h = sample_gaussian_channel(p, m, &mut rng)?;
            let a = alpha_coefficient(&h, power, m)?;
            Ok(-(a * a).ln() / power.ln())
        })
        .collect::<Result<_>>()?;
    Ok(EmpiricalCdf::new(values))
}

/// 99.9th percentile of `δ` along an increasing SNR grid, reusing the same
/// channel draws at every grid point. Passes when the percentile never
/// increases and `δ` is never negative.
pub fn check_alpha_high_snr(m: usize, p: usize, powers: &[f64], samples: u64, master: u64) -> Result<BoundCheckReport> {
    if powers.windows(2).any(|w| !(w[1] > w[0])) || powers.is_empty() {
        return Err(DmtError::InvalidInput("SNR grid must be non-empty and increasing".into()));
    }
    let mut report_details = BTreeMap::new();
    let mut quantiles = Vec::with_capacity(powers.len());
    let mut negative = 0u64;
    for &power in powers {
        let cdf = alpha_delta_samples(m, p, power, samples, master)?;
        negative += cdf.samples().iter().filter(|&&d| d < 0.0).count() as u64;
        let q = cdf.quantile(0.999);
        report_details.insert(format!("q999_at_{:.0}dB", 10.0 * power.log10()), q);
        quantiles.push(q);
    }
    let worst_rise = quantiles
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let rises = quantiles.windows(2).filter(|w| w[1] > w[0]).count() as u64;
    let violations = rises + negative;
    let mut report = BoundCheckReport::new(
        format!("alpha_high_snr_m{m}_p{p}"),
        samples,
        violations,
        if worst_rise.is_finite() { worst_rise } else { 0.0 },
        violations == 0,
    );
    report.details = report_details;
    Ok(report.detail("negative_deltas", negative as f64))
}

/// Per-realization `lower ≤ exact ≤ upper` for the two-hop channel on the
/// event `‖G‖² ≤ c log2 P`.
pub fn check_mi_sandwich(
    samples: u64,
    power: f64,
    c: f64,
    dims: (usize, usize, usize),
    master: u64,
) -> Result<BoundCheckReport> {
    let (m, p, n) = dims;
    let limit = c * power.log2();
    let outcomes: Vec<(bool, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            let h = sample_gaussian_channel(p, m, &mut rng)?;
            let g = sample_gaussian_channel(n, p, &mut rng)?;
            if g.frobenius_norm_sq() > limit {
                return Ok((false, f64::INFINITY));
            }
            let a = alpha_coefficient(&h, power, m)?;
            let lower = mutual_info_af_lower(&h, &g, power, m, a, c)?;
            let exact = mutual_info_traditional_af(&h, &g, power, m, a)?;
            let upper = mutual_info_af_upper(&h, &g, power, m, a)?;
            let tol = RELATIVE_SLACK * (1.0 + upper.abs());
            Ok((true, (exact - lower).min(upper - exact) + tol))
        })
        .collect::<Result<_>>()?;
    let conditioned = outcomes.iter().filter(|o| o.0).count() as u64;
    let violations = outcomes.iter().filter(|o| o.0 && o.1 < 0.0).count() as u64;
    let worst = outcomes
        .iter()
        .filter(|o| o.0)
        .map(|o| o.1)
        .fold(f64::INFINITY, f64::min);
    let failures = samples - conditioned;
    Ok(BoundCheckReport::new(
        format!("mi_sandwich_m{m}_p{p}_n{n}"),
        samples,
        violations,
        if worst.is_finite() { worst } else { 0.0 },
        violations == 0,
    )
    .detail("c", c)
    .detail("norm_limit", limit)
    .detail("conditioning_failures", failures as f64)
    .detail("conditioning_failure_rate", failures as f64 / samples as f64))
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    for (rank, &k) in idx.iter().enumerate() {
        out[k] = rank as f64;
    }
    out
}

/// Spearman rank correlation (ties broken by order, continuous data assumed).
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> f64 {
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mean) * (b - mean)).sum();
    let var: f64 = rx.iter().map(|a| (a - mean).powi(2)).sum();
    cov / var
}

/// Pairs `(λ_min(Ψ_{i,1}), λ_min(Ψ_{i,2}))` sharing one `(G, H)` draw but with
/// independent slot rotations; passes when `|ρ| < tolerance`.
pub fn check_slot_independence(p: usize, i: usize, pairs: u64, tolerance: f64, master: u64) -> Result<BoundCheckReport> {
    if i == 0 || i > p {
        return Err(DmtError::InvalidInput(format!("need 1 <= i <= p, got i={i}, p={p}")));
    }
    let draws: Vec<(f64, f64)> = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(master, k);
            let g = sample_gaussian_channel(p, p, &mut rng)?;
            let h = sample_gaussian_channel(p, p, &mut rng)?;
            let v = svd(&g)?.v.leading_columns(i)?.adjoint();
            let u = svd(&h)?.u.leading_columns(i)?;
            let mut slot = || -> Result<f64> {
                let theta = sample_haar_unitary(p, &mut rng)?;
                Ok(eigenvalue_at(&ordered_eigenvalues(&v.matmul(&theta)?.matmul(&u)?)?, i))
            };
            Ok((slot()?, slot()?))
        })
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
    let rho = spearman_rho(&xs, &ys);
    Ok(BoundCheckReport::new(
        format!("slot_independence_p{p}_i{i}"),
        pairs,
        (rho.abs() >= tolerance) as u64,
        tolerance - rho.abs(),
        rho.abs() < tolerance,
    )
    .detail("spearman_rho", rho)
    .detail("tolerance", tolerance))
}

/// Log-scale exponents of one two-hop realization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HighSnrExponents {
    /// `δ = −log α² / log P`.
    pub delta: f64,
    /// `γ_j(G)` for `j = 1..=min(n, p)`.
    pub gammas_g: Vec<f64>,
    /// `γ_j(H)` for `j = 1..=min(p, m)`.
    pub gammas_h: Vec<f64>,
    /// Exponents of the `min(p, q)` smallest eigenvalues of `GG^H`, smallest first.
    pub chis_g: Vec<f64>,
    pub chis_h: Vec<f64>,
    /// `ψ(l) = max_i γ_min(Ψ_{i,l})` per slot.
    pub psi: Vec<f64>,
    /// `φ_i = χ_i(G) + χ_i(H) + mean(ψ)`.
    pub phi: Vec<f64>,
}

fn gammas(a: &ComplexMatrix, log_p: f64) -> Result<Vec<f64>> {
    Ok(ordered_eigenvalues(a)?.iter().map(|l| -l.ln() / log_p).collect())
}

/// Exponents for channels `H` (`p × m`), `G` (`n × p`) and slot rotations.
pub fn high_snr_exponents(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    thetas: &[ComplexMatrix],
    power: f64,
    m: usize,
) -> Result<HighSnrExponents> {
    if !(power > 1.0) {
        return Err(DmtError::Domain(format!("exponents need P > 1, got {power}")));
    }
    let log_p = power.ln();
    let (p, n) = (h.rows(), g.rows());
    let q = m.min(n);
    let k = p.min(q);
    let a = alpha_coefficient(h, power, m)?;
    let gammas_g = gammas(g, log_p)?;
    let gammas_h = gammas(h, log_p)?;
    let chis = |gs: &[f64]| -> Vec<f64> { gs.iter().rev().take(k).copied().collect() };
    let (chis_g, chis_h) = (chis(&gammas_g), chis(&gammas_h));
    let (sg, sh) = (svd(g)?, svd(h)?);
    let psi = thetas
        .iter()
        .map(|theta| {
            (1..=k).try_fold(f64::NEG_INFINITY, |acc, i| {
                let v = sg.v.leading_columns(i)?.adjoint();
                let u = sh.u.leading_columns(i)?;
                let lmin = eigenvalue_at(&ordered_eigenvalues(&v.matmul(theta)?.matmul(&u)?)?, i);
                Ok::<f64, DmtError>(acc.max(-lmin.ln() / log_p))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let psi_mean = if psi.is_empty() { 0.0 } else { psi.iter().sum::<f64>() / psi.len() as f64 };
    let phi = chis_g.iter().zip(&chis_h).map(|(x, y)| x + y + psi_mean).collect();
    Ok(HighSnrExponents {
        delta: -(a * a).ln() / log_p,
        gammas_g,
        gammas_h,
        chis_g,
        chis_h,
        psi,
        phi,
    })
}

/// Sample counts for the full verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    pub lemma3_samples: u64,
    pub lemma4_samples: u64,
    pub lemma4_ks_tolerance: f64,
    pub chi_square_samples: u64,
    pub alpha_samples: u64,
    pub sandwich_samples: u64,
    pub independence_pairs: u64,
    pub independence_tolerance: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            lemma3_samples: 100_000,
            lemma4_samples: 1_000_000,
            lemma4_ks_tolerance: 0.005,
            chi_square_samples: 1_000_000,
            alpha_samples: 100_000,
            sandwich_samples: 100_000,
            independence_pairs: 100_000,
            independence_tolerance: 0.01,
        }
    }
}

/// Runs every suite; suite `k` draws from master seed `derive_trial_seed(master, u64::MAX − k)`.
pub fn run_all_suites(settings: &VerifySettings, master: u64) -> Result<Vec<BoundCheckReport>> {
    let mut suite = 0u64;
    let mut next_seed = || {
        suite += 1;
        derive_trial_seed(master, u64::MAX - suite)
    };
    let mut reports = vec![lemma3_suite(settings.lemma3_samples, 4, next_seed())?];
    for p in 2..=4 {
        reports.push(lemma4_rank_one_ks(p, settings.lemma4_samples, settings.lemma4_ks_tolerance, next_seed())?);
    }
    for p in 2..=4 {
        for i in 1..=p {
            reports.push(lemma4_bound(p, i, settings.lemma4_samples, next_seed())?);
        }
    }
    reports.push(check_chi_square_tail(1, 1, 0.5, 1e4, settings.chi_square_samples, 10.0, next_seed())?);
    reports.push(check_chi_square_tail(2, 1, 0.4, 1e3, settings.chi_square_samples, 10.0, next_seed())?);
    let grid: Vec<f64> = (2..=6).map(|k| 10f64.powi(k)).collect();
    reports.push(check_alpha_high_snr(1, 1, &grid, settings.alpha_samples, next_seed())?);
    reports.push(check_alpha_high_snr(2, 2, &grid, settings.alpha_samples, next_seed())?);
    for (m, p, n) in [(1, 1, 1), (2, 2, 2), (3, 2, 2)] {
        let c = (2 * p * n - 1) as f64;
        reports.push(check_mi_sandwich(settings.sandwich_samples, 1e3, c, (m, p, n), next_seed())?);
    }
    reports.push(check_slot_independence(3, 2, settings.independence_pairs, settings.independence_tolerance, next_seed())?);
    Ok(reports)
}
