//! Directed acyclic relay networks and their source/destination cut-sets.
//!
//! Node `0` is the source and the last node is the destination; everything
//! in between is a relay. The weight of a cut `S` sums `N_a * N_b` over the
//! edges leaving `S`.

use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{DmtError, Result};

/// Largest relay count for which cuts are enumerated exhaustively.
pub const MAX_ENUMERATED_RELAYS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("a network needs a source and a destination, got {0} node(s)")]
    TooFewNodes(usize),
    #[error("node {0} has zero antennas")]
    ZeroAntennas(usize),
    #[error("edge ({from}, {to}) references a node outside 0..{node_count}")]
    IndexOutOfRange { from: usize, to: usize, node_count: usize },
    #[error("graph contains a directed cycle through node {0}")]
    Cycle(usize),
    #[error("destination {0} is unreachable from the source")]
    UnreachableDestination(usize),
    #[error("cannot parse topology: {0}")]
    Parse(String),
}

/// On-disk form: `{"nodes": [antennas...], "edges": [[from, to], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyFile {
    pub nodes: Vec<u32>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyFile", into = "TopologyFile")]
pub struct NetworkTopology {
    antennas: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<TopologyFile> for NetworkTopology {
    type Error = TopologyError;

    fn try_from(file: TopologyFile) -> std::result::Result<Self, Self::Error> {
        NetworkTopology::new(file.nodes, file.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<NetworkTopology> for TopologyFile {
    fn from(t: NetworkTopology) -> Self {
        TopologyFile {
            nodes: t.antennas,
            edges: t.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Subset `S` of nodes holding the source but not the destination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutSet {
    pub members: Vec<usize>,
    pub weight: u64,
}

impl NetworkTopology {
    /// Validated constructor. Duplicate edges are merged.
    pub fn new(antennas: Vec<u32>, edges: Vec<(usize, usize)>) -> std::result::Result<Self, TopologyError> {
        let t = Self::unvalidated(antennas, edges);
        t.validate()?;
        Ok(t)
    }

    /// Builds without checking invariants; pair with [`NetworkTopology::validate`].
    pub fn unvalidated(antennas: Vec<u32>, edges: Vec<(usize, usize)>) -> Self {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        Self {
            antennas,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn from_json_str(text: &str) -> std::result::Result<Self, TopologyError> {
        let file: TopologyFile = serde_json::from_str(text).map_err(|e| {
            TopologyError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::try_from(file)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, TopologyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TopologyError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&TopologyFile::from(self.clone())).expect("topology serializes")
    }

    pub fn node_count(&self) -> usize {
        self.antennas.len()
    }

    pub fn relay_count(&self) -> usize {
        self.antennas.len().saturating_sub(2)
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn destination(&self) -> usize {
        self.antennas.len().saturating_sub(1)
    }

    pub fn antennas(&self) -> &[u32] {
        &self.antennas
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Common antenna count when every node carries the same number.
    pub fn uniform_antennas(&self) -> Option<u32> {
        let first = *self.antennas.first()?;
        self.antennas.iter().all(|&n| n == first).then_some(first)
    }

    pub fn with_edge(&self, edge: (usize, usize)) -> Self {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Self::unvalidated(self.antennas.clone(), edges)
    }

    pub fn without_edge(&self, edge: (usize, usize)) -> Self {
        let edges = self.edges.iter().copied().filter(|&e| e != edge).collect();
        Self::unvalidated(self.antennas.clone(), edges)
    }

    /// Reports the first violated invariant: node count, antenna counts,
    /// edge indices, acyclicity, then reachability of the destination.
    pub fn validate(&self) -> std::result::Result<(), TopologyError> {
        let n = self.antennas.len();
        if n < 2 {
            return Err(TopologyError::TooFewNodes(n));
        }
        if let Some(node) = self.antennas.iter().position(|&a| a == 0) {
            return Err(TopologyError::ZeroAntennas(node));
        }
        for &(from, to) in &self.edges {
            if from >= n || to >= n {
                return Err(TopologyError::IndexOutOfRange { from, to, node_count: n });
            }
        }
        self.topological_order()?;
        if !self.reachable_from_source()[self.destination()] {
            return Err(TopologyError::UnreachableDestination(self.destination()));
        }
        Ok(())
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.antennas.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }

    /// Kahn's algorithm.
    fn topological_order(&self) -> std::result::Result<Vec<usize>, TopologyError> {
        let n = self.antennas.len();
        let adj = self.successors();
        let mut indegree = vec![0usize; n];
        for &(_, b) in &self.edges {
            indegree[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
            return Err(TopologyError::Cycle(stuck));
        }
        Ok(order)
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let adj = self.successors();
        let mut seen = vec![false; self.antennas.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Weight of the cut whose source side is flagged in `in_s`.
    pub fn cut_weight(&self, in_s: &[bool]) -> u64 {
        self.edges
            .iter()
            .filter(|&&(a, b)| in_s[a] && !in_s[b])
            .map(|&(a, b)| self.antennas[a] as u64 * self.antennas[b] as u64)
            .sum()
    }

    /// Total antennas on the transmitting and receiving ends of the edges
    /// crossing the cut.
    pub fn cut_aggregate_antennas(&self, in_s: &[bool]) -> (u64, u64) {
        let n = self.antennas.len();
        let mut tx = vec![false; n];
        let mut rx = vec![false; n];
        for &(a, b) in &self.edges {
            if in_s[a] && !in_s[b] {
                tx[a] = true;
                rx[b] = true;
            }
        }
        let sum = |flags: &[bool]| -> u64 {
            flags
                .iter()
                .zip(&self.antennas)
                .filter(|(f, _)| **f)
                .map(|(_, &a)| a as u64)
                .sum()
        };
        (sum(&tx), sum(&rx))
    }

    /// Source-side membership flags for each of the `2^K` cuts, relays
    /// indexed by bit `k - 1` of the mask.
    pub(crate) fn cut_masks(&self) -> Result<impl Iterator<Item = Vec<bool>> + '_> {
        let k = self.relay_count();
        if k > MAX_ENUMERATED_RELAYS {
            return Err(DmtError::Capacity(format!(
                "{k} relays exceed the enumeration cap of {MAX_ENUMERATED_RELAYS}; use min_cut_weight"
            )));
        }
        let n = self.antennas.len();
        Ok((0u64..(1u64 << k)).map(move |mask| {
            let mut in_s = vec![false; n];
            in_s[0] = true;
            for (bit, flag) in in_s[1..=k].iter_mut().enumerate() {
                *flag = mask >> bit & 1 == 1;
            }
            in_s
        }))
    }
}

/// Validates a topology, mapping the failure into the crate error type.
pub fn validate(topology: &NetworkTopology) -> Result<()> {
    topology.validate().map_err(DmtError::from)
}

/// Every cut-set with its weight.
pub fn enumerate_cuts(topology: &NetworkTopology) -> Result<Vec<CutSet>> {
    validate(topology)?;
    Ok(topology
        .cut_masks()?
        .map(|in_s| CutSet {
            weight: topology.cut_weight(&in_s),
            members: (0..in_s.len()).filter(|&v| in_s[v]).collect(),
        })
        .collect())
}

/// Minimum cut weight; exhaustive for small relay counts and max-flow
/// beyond the enumeration cap.
pub fn min_cut_weight(topology: &NetworkTopology) -> Result<u64> {
    validate(topology)?;
    if topology.relay_count() <= MAX_ENUMERATED_RELAYS {
        min_cut_exhaustive(topology)
    } else {
        Ok(max_flow(topology))
    }
}

pub fn min_cut_exhaustive(topology: &NetworkTopology) -> Result<u64> {
    validate(topology)?;
    Ok(topology
        .cut_masks()?
        .map(|in_s| topology.cut_weight(&in_s))
        .min()
        .unwrap_or(0))
}

pub fn min_cut_max_flow(topology: &NetworkTopology) -> Result<u64> {
    validate(topology)?;
    Ok(max_flow(topology))
}

/// Edmonds-Karp with edge capacities `N_a * N_b`.
fn max_flow(topology: &NetworkTopology) -> u64 {
    let n = topology.node_count();
    let (s, t) = (topology.source(), topology.destination());
    let mut cap = vec![vec![0u64; n]; n];
    for &(a, b) in topology.edges() {
        cap[a][b] += topology.antennas()[a] as u64 * topology.antennas()[b] as u64;
    }
    let mut flow = 0u64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for w in 0..n {
                if parent[w] == usize::MAX && cap[v][w] > 0 {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(cap[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            cap[u][v] -= bottleneck;
            cap[v][u] += bottleneck;
            v = u;
        }
        flow += bottleneck;
    }
}
