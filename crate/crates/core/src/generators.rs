//! Graph families: temporal Erdős–Rényi graphs, the lower-bound family
//! played by the lazy adversary, and the witness-complexity family built
//! from L, R, B and C node sets.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal_graph::{EdgeRecord, NodeId, TemporalGraph, Time, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErtParams {
    pub n: usize,
    pub p: f64,
    pub lifetime: Time,
    pub rng_seed: u64,
}

/// ERT(n, p, Tmax): every pair independently with probability `p`, label
/// uniform on `[1, Tmax]`.
pub fn generate_ert(params: ErtParams) -> Result<TemporalGraph> {
    let ErtParams {
        n,
        p,
        lifetime,
        rng_seed,
    } = params;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not a probability")));
    }
    if n == 0 || lifetime == 0 {
        return Err(Error::InvalidParameter("n and Tmax must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push(EdgeRecord::single(u, v, rng.random_range(1..=lifetime)));
            }
        }
    }
    TemporalGraph::new(n, lifetime, Variant::Simple, edges)
}

/// The lower-bound family: a path `v1 .. v(n-2)` whose even-indexed edges
/// carry `Tmax` and whose odd-indexed edges are left open, plus two hubs
/// `v(n-1)` and `v(n)`. Node `v_i` has id `i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm52Family {
    pub n: usize,
    pub lifetime: Time,
    pub fixed: Vec<EdgeRecord>,
    /// Odd-indexed path edges, in path order.
    pub free: Vec<(NodeId, NodeId)>,
}

impl Thm52Family {
    pub fn static_edge_count(&self) -> usize {
        self.fixed.len() + self.free.len()
    }

    /// The family member whose open edges carry `labels`.
    pub fn complete(&self, labels: &[Time]) -> Result<TemporalGraph> {
        if labels.len() != self.free.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels given for {} open edges",
                labels.len(),
                self.free.len()
            )));
        }
        let mut edges = self.fixed.clone();
        edges.extend(
            self.free
                .iter()
                .zip(labels)
                .map(|(&(u, v), &t)| EdgeRecord::single(u, v, t)),
        );
        TemporalGraph::new(self.n, self.lifetime, Variant::Simple, edges)
    }
}

pub fn build_thm52_family(n: usize, lifetime: Time) -> Result<Thm52Family> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n must be even and at least 6, got {n}"
        )));
    }
    if lifetime < 4 {
        return Err(Error::InvalidParameter(format!(
            "Tmax must be at least 4, got {lifetime}"
        )));
    }
    let path_len = n - 2;
    let (hub_a, hub_b) = (n - 2, n - 1);
    let mut fixed = Vec::new();
    let mut free = Vec::new();
    // path edge i joins v_i and v_(i+1)
    for i in 1..path_len {
        let (u, v) = (i - 1, i);
        if i % 2 == 0 {
            fixed.push(EdgeRecord::single(u, v, lifetime));
        } else {
            free.push((u, v));
        }
    }
    for v in 0..path_len {
        fixed.push(EdgeRecord::single(v, hub_a, lifetime - 2));
    }
    fixed.push(EdgeRecord::single(hub_a, hub_b, lifetime - 1));
    for v in 0..path_len {
        fixed.push(EdgeRecord::single(v, hub_b, lifetime));
    }
    Ok(Thm52Family {
        n,
        lifetime,
        fixed,
        free,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaEdgeKind {
    LeftRight,
    PathEdge,
    HubRight,
    HubHub,
    HubOwnCap,
    HubLowerCap,
    CapRight,
    LeftHub,
}

/// An edge of the witness-complexity family with the indices its label was
/// computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaEdge {
    pub kind: OmegaEdgeKind,
    pub u: NodeId,
    pub v: NodeId,
    pub label: Time,
    /// Phase the construction puts this edge in.
    pub phase: usize,
    /// Family indices, all 0-based: `(i, j)` as in the label formula.
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaFamily {
    pub x: usize,
    pub delta: Time,
    pub lifetime: Time,
    pub graph: TemporalGraph,
    /// `x` edge-disjoint Hamiltonian paths on R as node ids; path `i`
    /// starts at `r_(2(i+1))`.
    pub paths: Vec<Vec<NodeId>>,
    pub edges: Vec<OmegaEdge>,
}

impl OmegaFamily {
    pub fn left(&self, i: usize) -> NodeId {
        i
    }

    /// `r_j` for `j` in `1..=2x`.
    pub fn right(&self, j: usize) -> NodeId {
        self.x + j - 1
    }

    pub fn hub(&self, i: usize) -> NodeId {
        3 * self.x + i
    }

    pub fn cap(&self, i: usize) -> NodeId {
        4 * self.x + i
    }

    /// Even-indexed R nodes along path `i`, in path order.
    pub fn even_on_path(&self, i: usize) -> Vec<NodeId> {
        let x = self.x;
        self.paths[i]
            .iter()
            .copied()
            .filter(|&r| (r - x + 1).is_multiple_of(2))
            .collect()
    }
}

/// `x` edge-disjoint Hamiltonian paths on `0..2x` by the zigzag
/// `k, k+1, k-1, k+2, k-2, ...` (mod 2x), for `k` in `0..x`.
pub fn zigzag_paths(x: usize) -> Vec<Vec<usize>> {
    let size = 2 * x;
    (0..x)
        .map(|k| {
            let mut path = vec![k];
            for step in 1..size {
                let offset = step.div_ceil(2);
                let next = if step % 2 == 1 {
                    (k + offset) % size
                } else {
                    (k + size - offset) % size
                };
                path.push(next);
            }
            path
        })
        .collect()
}

/// The witness-complexity family on `n = 5x` nodes with
/// `delta = 4x + 1` and `Tmax = x * delta`.
///
/// Node ids: `l_1..l_x` are `0..x`, `r_1..r_2x` are `x..3x`, `b_1..b_x` are
/// `3x..4x` and `c_1..c_x` are `4x..5x`. Family indices `i` are 0-based, so
/// `l_(i+1)` owns phase `i`. On path `i`, the `j`-th even-indexed node
/// (0-based ordinal) gets label `i delta + 4j + 1` to `l_(i+1)`.
pub fn build_omega_m_family(x: usize) -> Result<OmegaFamily> {
    if x == 0 {
        return Err(Error::InvalidParameter("x must be at least 1".into()));
    }
    let delta = (4 * x + 1) as Time;
    let lifetime = x as Time * delta;
    let t = |v: usize| v as Time;
    let right = |j: usize| x + j - 1;
    // zigzag vertex k < x becomes r_(2(k+1)); vertex x + a becomes r_(2a+1)
    let relabel = |z: usize| {
        if z < x {
            right(2 * (z + 1))
        } else {
            right(2 * (z - x) + 1)
        }
    };
    let paths: Vec<Vec<NodeId>> = zigzag_paths(x)
        .into_iter()
        .map(|p| p.into_iter().map(relabel).collect())
        .collect();
    let mut edges = Vec::new();
    let mut push = |kind, u, v, label: Time, phase, i, j| {
        edges.push(OmegaEdge {
            kind,
            u,
            v,
            label,
            phase,
            i,
            j,
        });
    };
    for (i, path) in paths.iter().enumerate() {
        let evens = path.iter().filter(|&&r| (r - x + 1).is_multiple_of(2));
        for (j, &r) in evens.enumerate() {
            push(OmegaEdgeKind::LeftRight, i, r, t(i) * delta + 4 * t(j) + 1, i, i, j);
        }
        for (pos, w) in path.windows(2).enumerate() {
            let j = pos + 1;
            push(
                OmegaEdgeKind::PathEdge,
                w[0],
                w[1],
                t(i) * delta + 2 * t(j) + 1,
                i,
                i,
                j,
            );
        }
        for (j, &r) in path.iter().enumerate() {
            push(
                OmegaEdgeKind::HubRight,
                3 * x + i,
                r,
                t(i) * delta + 2 * t(j) + 2,
                i,
                i,
                j,
            );
        }
    }
    for i in 0..x {
        let (b_i, c_i) = (3 * x + i, 4 * x + i);
        let end = t(i + 1) * delta;
        for j in i + 1..x {
            push(OmegaEdgeKind::HubHub, b_i, 3 * x + j, end - 2, i, i, j);
        }
        push(OmegaEdgeKind::HubOwnCap, b_i, c_i, end - 1, i, i, i);
        for j in 0..i {
            push(OmegaEdgeKind::HubLowerCap, b_i, 4 * x + j, end - 2, i, i, j);
        }
        for j in 1..=2 * x {
            push(OmegaEdgeKind::CapRight, c_i, right(j), end, i + 1, i, j);
        }
        for l in 0..x {
            push(OmegaEdgeKind::LeftHub, l, b_i, end, i + 1, l, i);
        }
    }
    let graph = TemporalGraph::new(
        5 * x,
        lifetime,
        Variant::Simple,
        edges.iter().map(|e| EdgeRecord::single(e.u, e.v, e.label)).collect(),
    )?;
    Ok(OmegaFamily {
        x,
        delta,
        lifetime,
        graph,
        paths,
        edges,
    })
}

/// Records grouped by phase: record `e` is in phase `i` when its label lies
/// in `[i delta, (i + 1) delta - 1]`. Multilabel records appear once per
/// distinct phase of their labels.
pub fn phases(graph: &TemporalGraph, delta: Time) -> BTreeMap<usize, Vec<usize>> {
    let delta = delta.max(1);
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, e) in graph.edges().iter().enumerate() {
        let mut seen: Vec<usize> = e.labels.iter().map(|&l| (l / delta) as usize).collect();
        seen.dedup();
        for p in seen {
            out.entry(p).or_default().push(r);
        }
    }
    out
}
