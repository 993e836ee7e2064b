//! Piecewise-linear diversity-multiplexing tradeoff curves.
//!
//! Curves are stored as vertex lists starting at `r = 0` and ending at the
//! first point where the diversity reaches zero. All vertex coordinates come
//! from small integer lattices, so `f64` holds them exactly except for the
//! rate-rescaled parallel-relay curves.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{DmtError, Result};
use crate::topology::{self, NetworkTopology, TopologyError};

const EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct DmtCurve {
    vertices: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for DmtCurve {
    type Error = DmtError;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        DmtCurve::new(v)
    }
}

impl From<DmtCurve> for Vec<(f64, f64)> {
    fn from(c: DmtCurve) -> Self {
        c.vertices
    }
}

impl DmtCurve {
    /// Checks the vertex-list invariants: starts at `r = 0`, strictly
    /// increasing `r`, non-increasing `d`, terminal `d = 0`.
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: &str| Err(DmtError::InvalidInput(format!("curve vertices: {msg}")));
        let Some(&(r0, _)) = vertices.first() else {
            return bad("empty vertex list");
        };
        if vertices.iter().any(|(r, d)| !r.is_finite() || !d.is_finite()) {
            return bad("non-finite coordinate");
        }
        if r0 != 0.0 {
            return bad("first vertex must sit at r = 0");
        }
        if vertices.last().map(|v| v.1) != Some(0.0) {
            return bad("last vertex must have d = 0");
        }
        for w in vertices.windows(2) {
            if w[1].0 <= w[0].0 {
                return bad("r must be strictly increasing");
            }
            if w[1].1 > w[0].1 {
                return bad("d must be non-increasing");
            }
        }
        Ok(Self { vertices })
    }

    /// Samples `f` at the given abscissae and keeps only the vertices that
    /// change slope, truncating after the first zero.
    fn from_samples(mut rs: Vec<f64>, f: impl Fn(f64) -> f64) -> Self {
        rs.retain(|r| *r >= 0.0);
        rs.push(0.0);
        rs.sort_by(f64::total_cmp);
        rs.dedup_by(|a, b| (*a - *b).abs() <= EPS * b.abs().max(1.0));
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(rs.len());
        for r in rs {
            let mut d = f(r);
            if d.abs() <= EPS {
                d = 0.0;
            }
            pts.push((r, d));
            if d == 0.0 {
                break;
            }
        }
        Self {
            vertices: drop_collinear(pts),
        }
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices.iter().map(|v| v.0)
    }

    pub fn r_max(&self) -> f64 {
        self.vertices.last().map_or(0.0, |v| v.0)
    }

    pub fn d_max(&self) -> f64 {
        self.vertices[0].1
    }

    /// Linear interpolation on `[0, r_max]`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r >= -EPS && r <= self.r_max() + EPS) {
            return Err(DmtError::Domain(format!(
                "r = {r} lies outside the curve domain [0, {}]",
                self.r_max()
            )));
        }
        Ok(self.eval_clamped(r))
    }

    /// Like [`DmtCurve::eval`] but returns `0` beyond `r_max` and `d(0)` below zero.
    pub fn eval_clamped(&self, r: f64) -> f64 {
        let v = &self.vertices;
        if r <= 0.0 {
            return v[0].1;
        }
        if r >= self.r_max() {
            return 0.0;
        }
        let i = v.partition_point(|p| p.0 <= r);
        let (r0, d0) = v[i - 1];
        let (r1, d1) = v[i];
        if r == r0 {
            return d0;
        }
        d0 + (d1 - d0) * (r - r0) / (r1 - r0)
    }

    /// Slopes are non-decreasing.
    pub fn is_convex(&self) -> bool {
        let slopes: Vec<f64> = self
            .vertices
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        slopes.windows(2).all(|s| s[1] >= s[0] - 1e-9)
    }

    /// `r ↦ factor · d(r)`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_samples(self.breakpoints().collect(), |r| factor * self.eval_clamped(r))
    }

    /// `r ↦ d(factor · r)` for `factor > 0`.
    pub fn rate_scaled(&self, factor: f64) -> Self {
        Self::from_samples(self.breakpoints().map(|r| r / factor).collect(), |r| {
            self.eval_clamped(factor * r)
        })
    }

    /// Pointwise sum, each term clamped to zero beyond its own domain.
    pub fn sum(&self, other: &Self) -> Self {
        let rs = self.breakpoints().chain(other.breakpoints()).collect();
        Self::from_samples(rs, |r| self.eval_clamped(r) + other.eval_clamped(r))
    }

    /// Pointwise minimum. The result can lose convexity.
    pub fn pointwise_min(curves: &[DmtCurve]) -> Result<Self> {
        if curves.is_empty() {
            return Err(DmtError::InvalidInput("minimum over an empty set of curves".into()));
        }
        let mut grid: Vec<f64> = curves.iter().flat_map(|c| c.breakpoints()).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut rs = grid.clone();
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            for (i, ci) in curves.iter().enumerate() {
                for cj in &curves[i + 1..] {
                    let (fa, fb) = (ci.eval_clamped(a) - cj.eval_clamped(a), ci.eval_clamped(b) - cj.eval_clamped(b));
                    if fa * fb < 0.0 {
                        rs.push(a + (b - a) * fa / (fa - fb));
                    }
                }
            }
        }
        Ok(Self::from_samples(rs, |r| {
            curves.iter().map(|c| c.eval_clamped(r)).fold(f64::INFINITY, f64::min)
        }))
    }
}

fn drop_collinear(pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            let scale = (p.0 - a.0).abs().max(1.0) * (p.1 - a.1).abs().max(1.0);
            if cross.abs() <= 1e-12 * scale {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

fn require_positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(DmtError::UnsupportedParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `d_{m×n}`: vertices `(k, (m−k)(n−k))` for `k = 0..=min(m, n)`.
pub fn dmt_point_to_point(m: usize, n: usize) -> Result<DmtCurve> {
    require_positive("m", m)?;
    require_positive("n", n)?;
    let vertices = (0..=m.min(n))
        .map(|k| (k as f64, ((m - k) * (n - k)) as f64))
        .collect();
    DmtCurve::new(vertices)
}

/// Grouping of the eigenvector-misalignment penalty in the product-channel
/// tradeoff. The two readings agree at every integer argument.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyReading {
    /// `½ · ⌊x² / 2⌋`
    #[default]
    HalfFloorHalf,
    /// `⌊x² / 4⌋`
    FloorQuarter,
}

pub fn product_penalty(x: usize, reading: PenaltyReading) -> f64 {
    let sq = x * x;
    match reading {
        PenaltyReading::HalfFloorHalf => 0.5 * (sq / 2) as f64,
        PenaltyReading::FloorQuarter => (sq / 4) as f64,
    }
}

/// Tradeoff of the two-hop channel `G·H` under plain amplify-and-forward.
pub fn dmt_product(m: usize, p: usize, n: usize) -> Result<DmtCurve> {
    dmt_product_with(m, p, n, PenaltyReading::default())
}

pub fn dmt_product_with(m: usize, p: usize, n: usize, reading: PenaltyReading) -> Result<DmtCurve> {
    require_positive("p", p)?;
    if m < p || n < p {
        return Err(DmtError::UnsupportedParameter(format!(
            "product channel needs m >= p and n >= p, got m={m}, p={p}, n={n}"
        )));
    }
    let q = m.min(n);
    let delta = m.abs_diff(n);
    let vertices = (0..=p)
        .map(|r| {
            let x = p.saturating_sub(delta + r);
            let d = ((p - r) * (q - r)) as f64 - product_penalty(x, reading);
            (r as f64, d)
        })
        .collect();
    DmtCurve::new(vertices)
}

/// Outcome of the parallel-relay construction with its round-count hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelDmt {
    pub curve: DmtCurve,
    pub rounds_sufficient: bool,
    pub required_rounds: usize,
}

/// `K · d_{p×q}((1 + 1/(BK)) r)` with `q = min(m, n)`; `rounds = None`
/// stands for the `B → ∞` limit `K · d_{p×q}(r)`.
pub fn dmt_rs_parallel(m: usize, n: usize, p: usize, relays: usize, rounds: Option<usize>) -> Result<ParallelDmt> {
    require_positive("K", relays)?;
    let q = m.min(n);
    let base = dmt_point_to_point(p, q)?;
    let required_rounds = p.min(q).pow(2) * p.max(q);
    let (curve, rounds_sufficient) = match rounds {
        None => (base.scaled(relays as f64), true),
        Some(b) => {
            require_positive("B", b)?;
            let stretch = 1.0 + 1.0 / (b * relays) as f64;
            (base.rate_scaled(stretch).scaled(relays as f64), b >= required_rounds)
        }
    };
    Ok(ParallelDmt {
        curve,
        rounds_sufficient,
        required_rounds,
    })
}

/// Minimizer of `c1(ν) + c2(2r − ν)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinSum {
    pub value: f64,
    pub nu: f64,
}

/// `min_ν c1(ν) + c2(2r − ν)` over the feasible interval, each curve clamped
/// to zero beyond its domain. The objective is convex piecewise-linear, so
/// only breakpoints and interval ends are scanned.
pub fn dmt_min_sum(c1: &DmtCurve, c2: &DmtCurve, r: f64) -> Result<MinSum> {
    let two_r = 2.0 * r;
    let lo = (two_r - c2.r_max()).max(0.0);
    let hi = two_r.min(c1.r_max());
    if !(r >= 0.0) || lo > hi + EPS {
        return Err(DmtError::Domain(format!(
            "no feasible split at r = {r}: need 0 <= 2r <= {}",
            c1.r_max() + c2.r_max()
        )));
    }
    let hi = hi.max(lo);
    let candidates = [lo, hi]
        .into_iter()
        .chain(c1.breakpoints())
        .chain(c2.breakpoints().map(|b| two_r - b))
        .filter(|nu| *nu >= lo && *nu <= hi);
    let mut best = MinSum {
        value: f64::INFINITY,
        nu: lo,
    };
    for nu in candidates {
        let value = c1.eval_clamped(nu) + c2.eval_clamped(two_r - nu);
        if value < best.value || (value == best.value && nu < best.nu) {
            best = MinSum { value, nu };
        }
    }
    Ok(best)
}

/// The whole curve `r ↦ dmt_min_sum(c1, c2, r)` for convex inputs; its
/// breakpoints lie at half the sums of input breakpoints.
pub fn dmt_rs_two_relay_limit(c1: &DmtCurve, c2: &DmtCurve) -> Result<DmtCurve> {
    let mut rs = Vec::new();
    for b1 in c1.breakpoints() {
        for b2 in c2.breakpoints() {
            rs.push((b1 + b2) / 2.0);
        }
    }
    Ok(DmtCurve::from_samples(rs, |r| {
        dmt_min_sum(c1, c2, r).map_or(0.0, |m| m.value)
    }))
}

/// `d_{m×n}(r) + d_{p×q}(2r)` with `q = min(m, n)`.
pub fn dmt_modified_naf(m: usize, n: usize, p: usize) -> Result<DmtCurve> {
    let direct = dmt_point_to_point(m, n)?;
    let relayed = dmt_point_to_point(p, m.min(n))?.rate_scaled(2.0);
    Ok(direct.sum(&relayed))
}

/// `d_{m×n}(r) + d_GH(2r)` using the product-channel tradeoff.
pub fn dmt_naf_baseline(m: usize, n: usize, p: usize) -> Result<DmtCurve> {
    let direct = dmt_point_to_point(m, n)?;
    let relayed = dmt_product(m, p, n)?.rate_scaled(2.0);
    Ok(direct.sum(&relayed))
}

/// Result of the line-network analysis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiHopDmt {
    pub curve: DmtCurve,
    /// Hop index `m` (1-based) whose antenna pair is dominated by every other node.
    pub bottleneck: Option<usize>,
    pub condition_met: bool,
    pub required_slots: Option<usize>,
    pub slots_sufficient: bool,
}

/// Line network `N_0 → N_1 → … → N_h` with one relay per hop. When no hop
/// dominates, the curve is only the cut-set upper bound.
pub fn dmt_multi_hop(antennas: &[usize], slots: usize) -> Result<MultiHopDmt> {
    if antennas.len() < 2 {
        return Err(TopologyError::TooFewNodes(antennas.len()).into());
    }
    if let Some(node) = antennas.iter().position(|&a| a == 0) {
        return Err(TopologyError::ZeroAntennas(node).into());
    }
    let hops = antennas.len() - 1;
    let dominant = (1..=hops).find(|&m| {
        let pair_max = antennas[m].max(antennas[m - 1]);
        antennas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != m && *j != m - 1)
            .all(|(_, &a)| pair_max <= a)
    });
    match dominant {
        Some(m) => {
            let (a, b) = (antennas[m], antennas[m - 1]);
            let required = a.min(b).pow(2) * a.max(b);
            Ok(MultiHopDmt {
                curve: dmt_point_to_point(a, b)?,
                bottleneck: Some(m),
                condition_met: true,
                required_slots: Some(required),
                slots_sufficient: slots >= required,
            })
        }
        None => {
            let per_hop = (1..=hops)
                .map(|j| dmt_point_to_point(antennas[j], antennas[j - 1]))
                .collect::<Result<Vec<_>>>()?;
            Ok(MultiHopDmt {
                curve: DmtCurve::pointwise_min(&per_hop)?,
                bottleneck: None,
                condition_met: false,
                required_slots: None,
                slots_sufficient: false,
            })
        }
    }
}

/// `(min-cut weight / N²) · d_{N×N}` for a network with `N` antennas per node.
pub fn dmt_general_network(topology: &NetworkTopology) -> Result<DmtCurve> {
    topology::validate(topology)?;
    let n = topology.uniform_antennas().ok_or_else(|| {
        DmtError::UnsupportedParameter("every node must carry the same number of antennas".into())
    })? as usize;
    let weight = topology::min_cut_weight(topology)?;
    Ok(dmt_point_to_point(n, n)?.scaled(weight as f64 / (n * n) as f64))
}

/// Minimum over cuts of the point-to-point tradeoff between the antennas
/// transmitting across the cut and those receiving on the far side.
pub fn dmt_upper_bound_general(topology: &NetworkTopology) -> Result<DmtCurve> {
    topology::validate(topology)?;
    let mut shapes: Vec<(u64, u64)> = topology
        .cut_masks()?
        .map(|in_s| {
            let (tx, rx) = topology.cut_aggregate_antennas(&in_s);
            (tx.min(rx), tx.max(rx))
        })
        .collect();
    shapes.sort_unstable();
    shapes.dedup();
    let curves = shapes
        .into_iter()
        .map(|(a, b)| dmt_point_to_point(a as usize, b as usize))
        .collect::<Result<Vec<_>>>()?;
    DmtCurve::pointwise_min(&curves)
}

/// Named analytic curve with its parameters; the tag doubles as the CSV label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveLabel {
    PointToPoint { m: usize, n: usize },
    ProductChannel { m: usize, p: usize, n: usize },
    RsTwoHop { m: usize, p: usize, n: usize },
    RsMultiHop { antennas: Vec<usize>, slots: usize },
    RsParallel { m: usize, n: usize, p: usize, relays: usize, rounds: Option<usize> },
    RsTwoRelayLimit { m: usize, n1: usize, n2: usize },
    NafSingleRelay { m: usize, n: usize, p: usize },
    ModifiedNaf { m: usize, n: usize, p: usize },
    RsGeneralNetwork { topology: PathBuf },
    CutSetUpperBound { topology: PathBuf },
}

impl CurveLabel {
    pub fn name(&self) -> String {
        match self {
            Self::PointToPoint { m, n } => format!("point_to_point(m={m};n={n})"),
            Self::ProductChannel { m, p, n } => format!("product_channel(m={m};p={p};n={n})"),
            Self::RsTwoHop { m, p, n } => format!("rs_two_hop(m={m};p={p};n={n})"),
            Self::RsMultiHop { antennas, slots } => {
                let list: Vec<String> = antennas.iter().map(|a| a.to_string()).collect();
                format!("rs_multi_hop(antennas={};slots={slots})", list.join("-"))
            }
            Self::RsParallel { m, n, p, relays, rounds } => {
                let b = rounds.map_or_else(|| "inf".to_string(), |b| b.to_string());
                format!("rs_parallel(m={m};n={n};p={p};relays={relays};rounds={b})")
            }
            Self::RsTwoRelayLimit { m, n1, n2 } => format!("rs_two_relay_limit(m={m};n1={n1};n2={n2})"),
            Self::NafSingleRelay { m, n, p } => format!("naf(m={m};n={n};p={p})"),
            Self::ModifiedNaf { m, n, p } => format!("modified_naf(m={m};n={n};p={p})"),
            Self::RsGeneralNetwork { topology } => format!("rs_general_network({})", topology.display()),
            Self::CutSetUpperBound { topology } => format!("cut_set_upper_bound({})", topology.display()),
        }
    }

    pub fn build(&self) -> Result<DmtCurve> {
        match self {
            Self::PointToPoint { m, n } => dmt_point_to_point(*m, *n),
            Self::ProductChannel { m, p, n } => dmt_product(*m, *p, *n),
            Self::RsTwoHop { m, p, n } => dmt_point_to_point(*p, *m.min(n)),
            Self::RsMultiHop { antennas, slots } => dmt_multi_hop(antennas, *slots).map(|h| h.curve),
            Self::RsParallel { m, n, p, relays, rounds } => {
                dmt_rs_parallel(*m, *n, *p, *relays, *rounds).map(|r| r.curve)
            }
            Self::RsTwoRelayLimit { m, n1, n2 } => {
                dmt_rs_two_relay_limit(&dmt_point_to_point(*m, *n1)?, &dmt_point_to_point(*m, *n2)?)
            }
            Self::NafSingleRelay { m, n, p } => dmt_naf_baseline(*m, *n, *p),
            Self::ModifiedNaf { m, n, p } => dmt_modified_naf(*m, *n, *p),
            Self::RsGeneralNetwork { topology } => dmt_general_network(&NetworkTopology::load(topology)?),
            Self::CutSetUpperBound { topology } => dmt_upper_bound_general(&NetworkTopology::load(topology)?),
        }
    }
}
