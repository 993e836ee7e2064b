//! End-to-end channel constructions and per-realization mutual information
//! for the relaying schemes.
//!
//! Every source transmits with covariance `(P/m) I_m`; all rates are in bits.

use serde::{Deserialize, Serialize};

use crate::dmt::{self, DmtCurve};
use crate::error::{DmtError, Result};
use crate::matrix::{log_det_i_plus, sample_gaussian_channel, sample_haar_unitary, ComplexMatrix};
use crate::rng::SimRng;

/// How relays rotate their received signal in each slot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitaryMode {
    /// Fresh Haar unitary per slot.
    #[default]
    Haar,
    /// No rotation.
    Identity,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    /// `α² = min(1, P / ((P/m)‖H‖² + m))`
    #[default]
    PaperFormula,
    Unit,
}

/// Mutual information accumulated over `slots` channel uses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MutualInfo {
    pub total_bits: f64,
    pub slots: usize,
}

impl MutualInfo {
    pub fn per_slot(&self) -> f64 {
        self.total_bits / self.slots as f64
    }

    /// Outage at multiplexing gain `r`: the total falls short of
    /// `slots · r · log2 P`.
    pub fn is_outage(&self, r: f64, power: f64) -> bool {
        self.total_bits < self.slots as f64 * r * power.log2()
    }
}

/// Relay amplification `α = sqrt(min(1, P / ((P/m)‖H‖² + m)))`.
pub fn alpha_coefficient(h: &ComplexMatrix, power: f64, m: usize) -> Result<f64> {
    if !(power > 0.0) || m == 0 {
        return Err(DmtError::Domain(format!("need P > 0 and m >= 1, got P={power}, m={m}")));
    }
    let norm = h.frobenius_norm_sq();
    if !norm.is_finite() {
        return Err(DmtError::Numeric("channel norm is not finite".into()));
    }
    let m = m as f64;
    Ok((power / (power / m * norm + m)).min(1.0).sqrt())
}

fn check_chain(h: &ComplexMatrix, g: &ComplexMatrix) -> Result<()> {
    if g.cols() != h.rows() {
        return Err(DmtError::Dimension(format!(
            "relay-destination channel has {} columns but the relay has {} antennas",
            g.cols(),
            h.rows()
        )));
    }
    Ok(())
}

fn check_power(power: f64) -> Result<()> {
    if !(power >= 0.0) || !power.is_finite() {
        return Err(DmtError::Domain(format!("power must be finite and nonnegative, got {power}")));
    }
    Ok(())
}

/// `log2 |I + α²(P/m) GHH^HG^H (I + α²GG^H)^{-1}|`: the exact rate of the
/// two-hop channel with relay noise forwarded to the destination.
pub fn mutual_info_traditional_af(h: &ComplexMatrix, g: &ComplexMatrix, power: f64, m: usize, alpha: f64) -> Result<f64> {
    check_chain(h, g)?;
    check_power(power)?;
    let gh = g.matmul(h)?;
    let a2 = alpha * alpha;
    let noise = ComplexMatrix::identity(g.rows())?.add(&g.outer_gram().scale(a2))?;
    log_det_i_plus(a2 * power / m as f64, &gh, Some(&noise))
}

/// Same channel with the forwarded relay noise dropped.
pub fn mutual_info_af_upper(h: &ComplexMatrix, g: &ComplexMatrix, power: f64, m: usize, alpha: f64) -> Result<f64> {
    check_chain(h, g)?;
    check_power(power)?;
    let gh = g.matmul(h)?;
    log_det_i_plus(alpha * alpha * power / m as f64, &gh, None)
}

/// Same channel with the noise inflated to `c · log2 P + 1`.
pub fn mutual_info_af_lower(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    power: f64,
    m: usize,
    alpha: f64,
    c: f64,
) -> Result<f64> {
    check_chain(h, g)?;
    if !(power > 1.0) {
        return Err(DmtError::Domain(format!("lower bound needs P > 1, got {power}")));
    }
    if !(c > 0.0) {
        return Err(DmtError::Domain(format!("lower bound needs c > 0, got {c}")));
    }
    let gh = g.matmul(h)?;
    let inflated = power / (c * power.log2() + 1.0);
    log_det_i_plus(alpha * alpha * inflated / m as f64, &gh, None)
}

fn relay_rotation(p: usize, rng: &mut SimRng, mode: UnitaryMode) -> Result<ComplexMatrix> {
    match mode {
        UnitaryMode::Haar => sample_haar_unitary(p, rng),
        UnitaryMode::Identity => ComplexMatrix::identity(p),
    }
}

/// `A_l = G Θ_l H` for `l = 1..=slots`.
pub fn build_rs_two_hop_blocks(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    slots: usize,
    rng: &mut SimRng,
    mode: UnitaryMode,
) -> Result<Vec<ComplexMatrix>> {
    check_chain(h, g)?;
    if slots == 0 {
        return Err(DmtError::InvalidInput("need at least one slot".into()));
    }
    (0..slots)
        .map(|_| g.matmul(&relay_rotation(h.rows(), rng, mode)?)?.matmul(h))
        .collect()
}

/// `Σ_l log2 |I + α²(P/m) A_l A_l^H|` over one slot per block.
pub fn mutual_info_rs(blocks: &[ComplexMatrix], power: f64, m: usize, alpha: f64) -> Result<MutualInfo> {
    let first = blocks
        .first()
        .ok_or_else(|| DmtError::InvalidInput("no blocks".into()))?;
    check_power(power)?;
    let scale = alpha * alpha * power / m as f64;
    let mut total_bits = 0.0;
    for a in blocks {
        if a.rows() != first.rows() || a.cols() != first.cols() {
            return Err(DmtError::Dimension("blocks differ in shape".into()));
        }
        total_bits += log_det_i_plus(scale, a, None)?;
    }
    Ok(MutualInfo {
        total_bits,
        slots: blocks.len(),
    })
}

/// `G_h Θ_{h−1} G_{h−1} ⋯ Θ_1 G_1`, where `g_list[j]` maps hop `j`'s
/// transmitter to its receiver.
pub fn build_multihop_block(g_list: &[ComplexMatrix], rng: &mut SimRng, mode: UnitaryMode) -> Result<ComplexMatrix> {
    let (first, rest) = g_list
        .split_first()
        .ok_or_else(|| DmtError::InvalidInput("no hops".into()))?;
    let mut acc = first.clone();
    for g in rest {
        let theta = relay_rotation(acc.rows(), rng, mode)?;
        acc = g.matmul(&theta)?.matmul(&acc)?;
    }
    Ok(acc)
}

/// Round-robin schedule over `K` parallel half-duplex relays: path `i`
/// visits relay `(i − 1) mod K + 1`, hop `j` of path `i` fires in slot
/// `i + j − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsSchedule {
    relays: usize,
    rounds: usize,
}

impl RsSchedule {
    pub fn new(relays: usize, rounds: usize) -> Result<Self> {
        if relays == 0 || rounds == 0 {
            return Err(DmtError::InvalidInput(format!(
                "schedule needs K >= 1 and B >= 1, got K={relays}, B={rounds}"
            )));
        }
        Ok(Self { relays, rounds })
    }

    pub fn relays(&self) -> usize {
        self.relays
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// `L = B K`.
    pub fn path_count(&self) -> usize {
        self.relays * self.rounds
    }

    /// `S = L + 1`.
    pub fn slot_count(&self) -> usize {
        self.path_count() + 1
    }

    /// Relay used by path `i` (1-based).
    pub fn relay_of_path(&self, i: usize) -> usize {
        (i - 1) % self.relays + 1
    }

    /// Node sequence `(0, k, K + 1)` of path `i`.
    pub fn path(&self, i: usize) -> [usize; 3] {
        [0, self.relay_of_path(i), self.relays + 1]
    }

    pub fn path_sequence(&self) -> Vec<[usize; 3]> {
        (1..=self.path_count()).map(|i| self.path(i)).collect()
    }

    /// Slot of hop `j` (1-based) on path `i`.
    pub fn timing(&self, i: usize, j: usize) -> usize {
        i + j - 1
    }
}

/// `A_i = G_k Θ_i H_k` for each path `i` through relay `k`, in path order.
pub fn build_rs_parallel_blocks(
    h_list: &[ComplexMatrix],
    g_list: &[ComplexMatrix],
    schedule: &RsSchedule,
    rng: &mut SimRng,
    mode: UnitaryMode,
) -> Result<Vec<ComplexMatrix>> {
    if h_list.len() != schedule.relays() || g_list.len() != schedule.relays() {
        return Err(DmtError::Dimension(format!(
            "schedule has {} relays but {} incoming and {} outgoing channels were given",
            schedule.relays(),
            h_list.len(),
            g_list.len()
        )));
    }
    (1..=schedule.path_count())
        .map(|i| {
            let k = schedule.relay_of_path(i) - 1;
            let (h, g) = (&h_list[k], &g_list[k]);
            check_chain(h, g)?;
            g.matmul(&relay_rotation(h.rows(), rng, mode)?)?.matmul(h)
        })
        .collect()
}

/// `Σ_i log2 |I + α_i²(P/m) A_i A_i^H|` over the `L + 1` slots of the schedule.
pub fn mutual_info_rs_parallel(
    blocks: &[ComplexMatrix],
    schedule: &RsSchedule,
    power: f64,
    m: usize,
    alphas: &[f64],
) -> Result<MutualInfo> {
    if blocks.len() != schedule.path_count() || alphas.len() != blocks.len() {
        return Err(DmtError::Dimension(format!(
            "schedule has {} paths but {} blocks and {} coefficients were given",
            schedule.path_count(),
            blocks.len(),
            alphas.len()
        )));
    }
    check_power(power)?;
    let mut total_bits = 0.0;
    for (a, alpha) in blocks.iter().zip(alphas) {
        total_bits += log_det_i_plus(alpha * alpha * power / m as f64, a, None)?;
    }
    Ok(MutualInfo {
        total_bits,
        slots: schedule.slot_count(),
    })
}

/// Single half-duplex relay with a direct link over `blocks` two-slot
/// blocks. Each block sees `[[F, 0], [αGΘ_bH, F]]` with noise covariance
/// `diag(I, I + α²GG^H)`.
#[allow(clippy::too_many_arguments)]
pub fn mutual_info_modified_naf(
    f: &ComplexMatrix,
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    blocks: usize,
    power: f64,
    m: usize,
    alpha: f64,
    rng: &mut SimRng,
    mode: UnitaryMode,
) -> Result<MutualInfo> {
    check_chain(h, g)?;
    check_power(power)?;
    if f.rows() != g.rows() || f.cols() != h.cols() {
        return Err(DmtError::Dimension(format!(
            "direct link is {}x{} but the relay path maps {} to {} antennas",
            f.rows(),
            f.cols(),
            h.cols(),
            g.rows()
        )));
    }
    if blocks == 0 {
        return Err(DmtError::InvalidInput("need at least one block".into()));
    }
    let n = g.rows();
    let zero = ComplexMatrix::zeros(n, f.cols())?;
    let eye = ComplexMatrix::identity(n)?;
    let relay_noise = eye.add(&g.outer_gram().scale(alpha * alpha))?;
    let noise = ComplexMatrix::block_diagonal(&[&eye, &relay_noise])?;
    let mut total_bits = 0.0;
    for _ in 0..blocks {
        let theta = relay_rotation(h.rows(), rng, mode)?;
        let relayed = g.matmul(&theta)?.matmul(h)?.scale(alpha);
        let system = ComplexMatrix::from_blocks(&[vec![f, &zero], vec![&relayed, f]])?;
        total_bits += log_det_i_plus(power / m as f64, &system, Some(&noise))?;
    }
    Ok(MutualInfo {
        total_bits,
        slots: 2 * blocks,
    })
}

/// Scheme and antenna configuration for outage simulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum SchemeKind {
    /// Direct `m × n` Rayleigh link.
    PointToPoint { m: usize, n: usize },
    TraditionalAf { m: usize, p: usize, n: usize },
    RsTwoHop { m: usize, p: usize, n: usize, slots: usize },
    /// Line network with antenna counts `N_0, …, N_h`.
    RsMultiHop { antennas: Vec<usize>, slots: usize },
    RsParallel { m: usize, p: usize, n: usize, relays: usize, rounds: usize },
    Naf { m: usize, p: usize, n: usize, blocks: usize },
    ModifiedNaf { m: usize, p: usize, n: usize, blocks: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeConfig {
    #[serde(flatten)]
    pub kind: SchemeKind,
    #[serde(default)]
    pub alpha_policy: AlphaPolicy,
    #[serde(default)]
    pub unitary: UnitaryMode,
}

impl From<SchemeKind> for SchemeConfig {
    fn from(kind: SchemeKind) -> Self {
        Self {
            kind,
            alpha_policy: AlphaPolicy::default(),
            unitary: UnitaryMode::default(),
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let counts: Vec<(&str, usize)> = match &self.kind {
            SchemeKind::PointToPoint { m, n } => vec![("m", *m), ("n", *n)],
            SchemeKind::TraditionalAf { m, p, n } => vec![("m", *m), ("p", *p), ("n", *n)],
            SchemeKind::RsTwoHop { m, p, n, slots } => vec![("m", *m), ("p", *p), ("n", *n), ("slots", *slots)],
            SchemeKind::RsMultiHop { antennas, slots } => {
                if antennas.len() < 2 {
                    return Err(DmtError::InvalidConfig(
                        "a line network needs at least a source and a destination".into(),
                    ));
                }
                let mut v: Vec<(&str, usize)> = antennas.iter().map(|&a| ("antennas", a)).collect();
                v.push(("slots", *slots));
                v
            }
            SchemeKind::RsParallel { m, p, n, relays, rounds } => {
                vec![("m", *m), ("p", *p), ("n", *n), ("relays", *relays), ("rounds", *rounds)]
            }
            SchemeKind::Naf { m, p, n, blocks } | SchemeKind::ModifiedNaf { m, p, n, blocks } => {
                vec![("m", *m), ("p", *p), ("n", *n), ("blocks", *blocks)]
            }
        };
        match counts.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(DmtError::InvalidConfig(format!("{name} must be at least 1"))),
            None => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SchemeKind::PointToPoint { .. } => "point_to_point",
            SchemeKind::TraditionalAf { .. } => "traditional_af",
            SchemeKind::RsTwoHop { .. } => "rs_two_hop",
            SchemeKind::RsMultiHop { .. } => "rs_multi_hop",
            SchemeKind::RsParallel { .. } => "rs_parallel",
            SchemeKind::Naf { .. } => "naf",
            SchemeKind::ModifiedNaf { .. } => "modified_naf",
        }
    }

    fn alpha(&self, h: &ComplexMatrix, power: f64, m: usize) -> Result<f64> {
        match self.alpha_policy {
            AlphaPolicy::PaperFormula => alpha_coefficient(h, power, m),
            AlphaPolicy::Unit => Ok(1.0),
        }
    }

    /// Draws one channel realization and returns its mutual information.
    pub fn sample_mutual_info(&self, power: f64, rng: &mut SimRng) -> Result<MutualInfo> {
        match &self.kind {
            SchemeKind::PointToPoint { m, n } => {
                let f = sample_gaussian_channel(*n, *m, rng)?;
                Ok(MutualInfo {
                    total_bits: log_det_i_plus(power / *m as f64, &f, None)?,
                    slots: 1,
                })
            }
            SchemeKind::TraditionalAf { m, p, n } => {
                let h = sample_gaussian_channel(*p, *m, rng)?;
                let g = sample_gaussian_channel(*n, *p, rng)?;
                let alpha = self.alpha(&h, power, *m)?;
                Ok(MutualInfo {
                    total_bits: mutual_info_traditional_af(&h, &g, power, *m, alpha)?,
                    slots: 1,
                })
            }
            SchemeKind::RsTwoHop { m, p, n, slots } => {
                let h = sample_gaussian_channel(*p, *m, rng)?;
                let g = sample_gaussian_channel(*n, *p, rng)?;
                let alpha = self.alpha(&h, power, *m)?;
                let blocks = build_rs_two_hop_blocks(&h, &g, *slots, rng, self.unitary)?;
                mutual_info_rs(&blocks, power, *m, alpha)
            }
            SchemeKind::RsMultiHop { antennas, slots } => {
                let g_list = antennas
                    .windows(2)
                    .map(|w| sample_gaussian_channel(w[1], w[0], rng))
                    .collect::<Result<Vec<_>>>()?;
                let mut alpha = 1.0;
                for (g, &tx) in g_list[..g_list.len() - 1].iter().zip(antennas) {
                    alpha *= self.alpha(g, power, tx)?;
                }
                let blocks = (0..*slots)
                    .map(|_| build_multihop_block(&g_list, rng, self.unitary))
                    .collect::<Result<Vec<_>>>()?;
                mutual_info_rs(&blocks, power, antennas[0], alpha)
            }
            SchemeKind::RsParallel { m, p, n, relays, rounds } => {
                let schedule = RsSchedule::new(*relays, *rounds)?;
                let mut h_list = Vec::with_capacity(*relays);
                let mut g_list = Vec::with_capacity(*relays);
                for _ in 0..*relays {
                    h_list.push(sample_gaussian_channel(*p, *m, rng)?);
                    g_list.push(sample_gaussian_channel(*n, *p, rng)?);
                }
                let relay_alpha = h_list
                    .iter()
                    .map(|h| self.alpha(h, power, *m))
                    .collect::<Result<Vec<_>>>()?;
                let alphas: Vec<f64> = (1..=schedule.path_count())
                    .map(|i| relay_alpha[schedule.relay_of_path(i) - 1])
                    .collect();
                let blocks = build_rs_parallel_blocks(&h_list, &g_list, &schedule, rng, self.unitary)?;
                mutual_info_rs_parallel(&blocks, &schedule, power, *m, &alphas)
            }
            SchemeKind::Naf { m, p, n, blocks } | SchemeKind::ModifiedNaf { m, p, n, blocks } => {
                let f = sample_gaussian_channel(*n, *m, rng)?;
                let h = sample_gaussian_channel(*p, *m, rng)?;
                let g = sample_gaussian_channel(*n, *p, rng)?;
                let alpha = self.alpha(&h, power, *m)?;
                let mode = match self.kind {
                    SchemeKind::Naf { .. } => UnitaryMode::Identity,
                    _ => self.unitary,
                };
                mutual_info_modified_naf(&f, &h, &g, *blocks, power, *m, alpha, rng, mode)
            }
        }
    }

    /// Tradeoff curve the analysis predicts for this configuration.
    pub fn analytic_curve(&self) -> Result<DmtCurve> {
        let rotated = self.unitary == UnitaryMode::Haar;
        match &self.kind {
            SchemeKind::PointToPoint { m, n } => dmt::dmt_point_to_point(*m, *n),
            SchemeKind::TraditionalAf { m, p, n } => dmt::dmt_product(*m, *p, *n),
            SchemeKind::RsTwoHop { m, p, n, .. } if rotated => dmt::dmt_point_to_point(*p, *m.min(n)),
            SchemeKind::RsTwoHop { m, p, n, .. } => dmt::dmt_product(*m, *p, *n),
            SchemeKind::RsMultiHop { antennas, slots } => dmt::dmt_multi_hop(antennas, *slots).map(|h| h.curve),
            SchemeKind::RsParallel { m, p, n, relays, rounds } if rotated => {
                dmt::dmt_rs_parallel(*m, *n, *p, *relays, Some(*rounds)).map(|r| r.curve)
            }
            SchemeKind::RsParallel { m, p, n, relays, .. } => {
                Ok(dmt::dmt_product(*m, *p, *n)?.scaled(*relays as f64))
            }
            SchemeKind::ModifiedNaf { m, p, n, .. } if rotated => dmt::dmt_modified_naf(*m, *n, *p),
            SchemeKind::Naf { m, p, n, .. } | SchemeKind::ModifiedNaf { m, p, n, .. } => {
                dmt::dmt_naf_baseline(*m, *n, *p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::scalar(Complex64::new(x, 0.0))
    }

    #[test]
    fn alpha_examples() {
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        assert_eq!(alpha_coefficient(&zero, 2.0, 2).unwrap(), 1.0);
        let a = alpha_coefficient(&scalar(1.0), 10.0, 1).unwrap();
        assert!((a * a - 10.0 / 11.0).abs() < 1e-15);
        let huge = alpha_coefficient(&scalar(1e8), 10.0, 1).unwrap();
        assert!(huge < 1e-7);
        let inf = scalar(f64::INFINITY);
        assert!(matches!(alpha_coefficient(&inf, 10.0, 1), Err(DmtError::Numeric(_))));
    }

    #[test]
    fn two_hop_scalar_examples() {
        let one = scalar(1.0);
        let exact = mutual_info_traditional_af(&one, &one, 3.0, 1, 1.0).unwrap();
        assert!((exact - 2.5_f64.log2()).abs() < 1e-12);
        assert!((mutual_info_af_upper(&one, &one, 3.0, 1, 1.0).unwrap() - 2.0).abs() < 1e-12);
        let zero = scalar(0.0);
        assert_eq!(mutual_info_traditional_af(&one, &zero, 3.0, 1, 1.0).unwrap(), 0.0);
        assert_eq!(mutual_info_af_upper(&one, &zero, 3.0, 1, 1.0).unwrap(), 0.0);
        assert_eq!(mutual_info_af_lower(&one, &zero, 3.0, 1, 1.0, 1.0).unwrap(), 0.0);
        let lower = mutual_info_af_lower(&one, &one, 4.0, 1, 1.0, 1.0).unwrap();
        assert!((lower - (1.0 + 4.0 / 3.0_f64).log2()).abs() < 1e-12);
        assert!(matches!(mutual_info_af_lower(&one, &one, 1.0, 1, 1.0, 1.0), Err(DmtError::Domain(_))));
        let wide = ComplexMatrix::zeros(1, 2).unwrap();
        assert!(matches!(
            mutual_info_traditional_af(&one, &wide, 3.0, 1, 1.0),
            Err(DmtError::Dimension(_))
        ));
    }

    #[test]
    fn exact_never_exceeds_upper() {
        let mut rng = SimRng::from_seed(3);
        for _ in 0..500 {
            let h = sample_gaussian_channel(3, 2, &mut rng).unwrap();
            let g = sample_gaussian_channel(2, 3, &mut rng).unwrap();
            let a = alpha_coefficient(&h, 100.0, 2).unwrap();
            let exact = mutual_info_traditional_af(&h, &g, 100.0, 2, a).unwrap();
            let upper = mutual_info_af_upper(&h, &g, 100.0, 2, a).unwrap();
            assert!(exact <= upper + 1e-12);
        }
    }

    #[test]
    fn rs_block_examples() {
        let mut rng = SimRng::from_seed(5);
        let h = sample_gaussian_channel(2, 2, &mut rng).unwrap();
        let g = sample_gaussian_channel(2, 2, &mut rng).unwrap();
        let fixed = build_rs_two_hop_blocks(&h, &g, 1, &mut rng, UnitaryMode::Identity).unwrap();
        assert!(fixed[0].max_abs_diff(&g.matmul(&h).unwrap()) < 1e-15);
        let blocks = build_rs_two_hop_blocks(&h, &g, 3, &mut rng, UnitaryMode::Haar).unwrap();
        assert_eq!(blocks.len(), 3);
        assert!(blocks[0].max_abs_diff(&blocks[1]) > 1e-6);
        assert!(blocks[1].max_abs_diff(&blocks[2]) > 1e-6);
        let bound = g.frobenius_norm_sq() * h.frobenius_norm_sq();
        for a in &blocks {
            let lambda = crate::matrix::ordered_eigenvalues(a).unwrap();
            assert!(lambda.iter().all(|&l| l <= bound * (1.0 + 1e-12)));
        }
    }

    #[test]
    fn rs_mutual_info_examples() {
        let mi = mutual_info_rs(&[scalar(1.0)], 3.0, 1, 1.0).unwrap();
        assert!((mi.per_slot() - 2.0).abs() < 1e-12);
        let zeros = vec![ComplexMatrix::zeros(2, 2).unwrap(); 3];
        assert_eq!(mutual_info_rs(&zeros, 3.0, 2, 1.0).unwrap().total_bits, 0.0);

        let mut rng = SimRng::from_seed(9);
        let blocks: Vec<ComplexMatrix> = (0..4).map(|_| sample_gaussian_channel(2, 3, &mut rng).unwrap()).collect();
        let total = mutual_info_rs(&blocks, 50.0, 3, 0.7).unwrap().total_bits;
        let parts: f64 = blocks
            .iter()
            .map(|b| mutual_info_rs(std::slice::from_ref(b), 50.0, 3, 0.7).unwrap().total_bits)
            .sum();
        assert!((total - parts).abs() < 1e-10);
        let mixed = vec![ComplexMatrix::zeros(2, 2).unwrap(), ComplexMatrix::zeros(2, 3).unwrap()];
        assert!(matches!(mutual_info_rs(&mixed, 3.0, 2, 1.0), Err(DmtError::Dimension(_))));
    }

    #[test]
    fn single_block_rs_matches_upper_bound() {
        let mut rng = SimRng::from_seed(11);
        for _ in 0..50 {
            let h = sample_gaussian_channel(3, 2, &mut rng).unwrap();
            let g = sample_gaussian_channel(2, 3, &mut rng).unwrap();
            let a = alpha_coefficient(&h, 30.0, 2).unwrap();
            let blocks = build_rs_two_hop_blocks(&h, &g, 1, &mut rng, UnitaryMode::Identity).unwrap();
            let rs = mutual_info_rs(&blocks, 30.0, 2, a).unwrap().total_bits;
            let upper = mutual_info_af_upper(&h, &g, 30.0, 2, a).unwrap();
            assert!((rs - upper).abs() < 1e-12);
        }
    }

    #[test]
    fn multihop_examples() {
        let mut rng = SimRng::from_seed(13);
        let g1 = sample_gaussian_channel(3, 2, &mut rng).unwrap();
        let g2 = sample_gaussian_channel(2, 3, &mut rng).unwrap();
        let one = build_multihop_block(std::slice::from_ref(&g1), &mut rng, UnitaryMode::Haar).unwrap();
        assert_eq!(one, g1);
        let two = build_multihop_block(&[g1.clone(), g2.clone()], &mut rng, UnitaryMode::Identity).unwrap();
        assert!(two.max_abs_diff(&g2.matmul(&g1).unwrap()) < 1e-15);
        let g3 = sample_gaussian_channel(4, 2, &mut rng).unwrap();
        let list = [g1, g2, g3];
        let bound: f64 = list.iter().map(|g| g.frobenius_norm_sq()).product();
        for _ in 0..100 {
            let a = build_multihop_block(&list, &mut rng, UnitaryMode::Haar).unwrap();
            assert_eq!((a.rows(), a.cols()), (4, 2));
            assert!(a.frobenius_norm_sq() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn schedule_layout() {
        let s = RsSchedule::new(3, 2).unwrap();
        assert_eq!(s.path_count(), 6);
        assert_eq!(s.slot_count(), 7);
        let relays: Vec<usize> = (1..=6).map(|i| s.relay_of_path(i)).collect();
        assert_eq!(relays, vec![1, 2, 3, 1, 2, 3]);
        assert_eq!(s.path(5), [0, 2, 4]);
        assert_eq!(s.path_sequence().len(), 6);
        for i in 1..=6 {
            assert!(s.timing(i, 2) > s.timing(i, 1));
            assert_eq!(s.timing(i, 1), i);
        }
        assert!(RsSchedule::new(0, 1).is_err());
    }

    #[test]
    fn parallel_examples() {
        let s = RsSchedule::new(1, 1).unwrap();
        let mi = mutual_info_rs_parallel(&[scalar(1.0)], &s, 3.0, 1, &[1.0]).unwrap();
        assert!((mi.total_bits - 2.0).abs() < 1e-12);
        assert!((mi.per_slot() - 1.0).abs() < 1e-12);

        let mut rng = SimRng::from_seed(17);
        let s = RsSchedule::new(2, 1).unwrap();
        let h_list: Vec<_> = (0..2).map(|_| sample_gaussian_channel(2, 2, &mut rng).unwrap()).collect();
        let zeros = vec![ComplexMatrix::zeros(2, 2).unwrap(); 2];
        let blocks = build_rs_parallel_blocks(&h_list, &zeros, &s, &mut rng, UnitaryMode::Haar).unwrap();
        assert_eq!(mutual_info_rs_parallel(&blocks, &s, 10.0, 2, &[1.0, 1.0]).unwrap().total_bits, 0.0);

        let g_list: Vec<_> = (0..2).map(|_| sample_gaussian_channel(2, 2, &mut rng).unwrap()).collect();
        let blocks = build_rs_parallel_blocks(&h_list, &g_list, &s, &mut rng, UnitaryMode::Haar).unwrap();
        let both = mutual_info_rs_parallel(&blocks, &s, 10.0, 2, &[0.5, 0.9]).unwrap().total_bits;
        let first = mutual_info_rs(&blocks[..1], 10.0, 2, 0.5).unwrap().total_bits;
        let second = mutual_info_rs(&blocks[1..], 10.0, 2, 0.9).unwrap().total_bits;
        assert!((both - first - second).abs() < 1e-10);
        assert!(mutual_info_rs_parallel(&blocks, &s, 10.0, 2, &[1.0]).is_err());
    }

    #[test]
    fn naf_examples() {
        let mut rng = SimRng::from_seed(1);
        let silent = mutual_info_modified_naf(
            &scalar(1.0),
            &scalar(1.0),
            &scalar(1.0),
            1,
            3.0,
            1,
            0.0,
            &mut rng,
            UnitaryMode::Haar,
        )
        .unwrap();
        assert!((silent.per_slot() - 2.0).abs() < 1e-12);

        let relay_only = mutual_info_modified_naf(
            &scalar(0.0),
            &scalar(1.0),
            &scalar(1.0),
            1,
            3.0,
            1,
            1.0,
            &mut rng,
            UnitaryMode::Identity,
        )
        .unwrap();
        // M = [[0, 0], [1, 0]], N = diag(1, 2): |I + 3 M M^H N^{-1}| = 2.5.
        assert!((relay_only.total_bits - 2.5_f64.log2()).abs() < 1e-12);
        assert_eq!(relay_only.slots, 2);

        let f = sample_gaussian_channel(2, 2, &mut rng).unwrap();
        let h = sample_gaussian_channel(3, 2, &mut rng).unwrap();
        let g0 = ComplexMatrix::zeros(2, 3).unwrap();
        let direct = mutual_info_modified_naf(&f, &h, &g0, 3, 20.0, 2, 0.8, &mut rng, UnitaryMode::Haar).unwrap();
        let expect = log_det_i_plus(10.0, &f, None).unwrap();
        assert!((direct.per_slot() - expect).abs() < 1e-10);
    }

    #[test]
    fn outage_threshold() {
        let mi = MutualInfo { total_bits: 3.0, slots: 2 };
        assert!(mi.is_outage(0.8, 4.0));
        assert!(!mi.is_outage(0.75, 4.0));
    }

    #[test]
    fn config_serde_and_validation() {
        let text = r#"{"scheme": "rs_parallel", "m": 1, "p": 1, "n": 1, "relays": 2, "rounds": 4}"#;
        let cfg: SchemeConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.alpha_policy, AlphaPolicy::PaperFormula);
        assert_eq!(cfg.unitary, UnitaryMode::Haar);
        assert!(cfg.validate().is_ok());
        let back: SchemeConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let bad: SchemeConfig = SchemeKind::RsTwoHop { m: 1, p: 1, n: 1, slots: 0 }.into();
        assert!(matches!(bad.validate(), Err(DmtError::InvalidConfig(_))));
        let short: SchemeConfig = SchemeKind::RsMultiHop { antennas: vec![2], slots: 1 }.into();
        assert!(short.validate().is_err());
    }

    #[test]
    fn every_scheme_samples() {
        let kinds = vec![
            SchemeKind::PointToPoint { m: 2, n: 1 },
            SchemeKind::TraditionalAf { m: 2, p: 2, n: 3 },
            SchemeKind::RsTwoHop { m: 2, p: 2, n: 2, slots: 3 },
            SchemeKind::RsMultiHop { antennas: vec![2, 3, 2, 2], slots: 2 },
            SchemeKind::RsParallel { m: 2, p: 1, n: 2, relays: 2, rounds: 2 },
            SchemeKind::Naf { m: 2, p: 2, n: 2, blocks: 2 },
            SchemeKind::ModifiedNaf { m: 2, p: 2, n: 2, blocks: 2 },
        ];
        let mut rng = SimRng::from_seed(21);
        for kind in kinds {
            let cfg = SchemeConfig::from(kind);
            let low = cfg.sample_mutual_info(10.0, &mut rng.clone()).unwrap();
            let high = cfg.sample_mutual_info(1e4, &mut rng.clone()).unwrap();
            assert!(low.total_bits >= 0.0);
            assert!(high.total_bits >= low.total_bits, "{}", cfg.name());
            assert!(cfg.analytic_curve().is_ok(), "{}", cfg.name());
            cfg.sample_mutual_info(10.0, &mut rng).unwrap();
        }
    }
}
