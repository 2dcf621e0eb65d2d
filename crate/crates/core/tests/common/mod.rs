//! Oracles shared by the integration tests. They are written from the
//! definitions alone and do not call the library's algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgd_core::generators::{generate_ert, ErtParams};
use tgd_core::infection::SeedSet;
use tgd_core::{EdgeRecord, TemporalGraph, Time, Variant};

/// Step-by-step SIR: at step `t` seeds land first, then every temporal edge
/// with label `t` fires from a node infected at `t0` with
/// `t0 < t <= t0 + delta` into a susceptible neighbour.
pub fn oracle_times(graph: &TemporalGraph, seeds: &SeedSet, delta: Time) -> Vec<Option<Time>> {
    let n = graph.node_count();
    let mut times: Vec<Option<Time>> = vec![None; n];
    let last = graph
        .lifetime()
        .max(seeds.seeds().iter().map(|s| s.time).max().unwrap_or(0));
    for t in 0..=last {
        for s in seeds.seeds() {
            if s.time == t && times[s.node].is_none() {
                times[s.node] = Some(t);
            }
        }
        let infectious = |x: Option<Time>| x.is_some_and(|t0| t0 < t && t <= t0 + delta);
        let mut newly = Vec::new();
        for e in graph.edges() {
            if !e.labels.contains(&t) {
                continue;
            }
            let (a, b) = (e.u, e.v);
            if infectious(times[a]) && times[b].is_none() {
                newly.push(b);
            }
            if infectious(times[b]) && times[a].is_none() {
                newly.push(a);
            }
        }
        for v in newly {
            times[v].get_or_insert(t);
        }
    }
    times
}

/// True iff some single seed `(v, t)` with `t` in `0..=Tmax` infects every
/// node.
pub fn oracle_has_ipz(graph: &TemporalGraph, delta: Time) -> bool {
    (0..graph.node_count()).any(|v| {
        (0..=graph.lifetime()).any(|t| {
            oracle_times(graph, &SeedSet::single(v, t), delta)
                .iter()
                .all(Option::is_some)
        })
    })
}

/// Units `(record, label)` in record order, and the closure matrix of the
/// relation "share an endpoint and labels differ by at most delta".
pub fn oracle_decc(graph: &TemporalGraph, delta: Time) -> (Vec<(usize, Time)>, Vec<Vec<bool>>) {
    let units: Vec<(usize, Time)> = graph
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(r, e)| e.labels.iter().map(move |&l| (r, l)))
        .collect();
    let k = units.len();
    let mut reach = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            let (ea, la) = (graph.edge(units[a].0), units[a].1);
            let (eb, lb) = (graph.edge(units[b].0), units[b].1);
            let share = ea.u == eb.u || ea.u == eb.v || ea.v == eb.u || ea.v == eb.v;
            reach[a][b] = a == b || (share && la.abs_diff(lb) <= delta);
        }
    }
    for m in 0..k {
        for a in 0..k {
            if reach[a][m] {
                for b in 0..k {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    (units, reach)
}

/// Every simple labeling on `n` nodes: each pair absent or labelled in
/// `1..=lifetime`.
pub fn all_labelings(n: usize, lifetime: Time) -> impl Iterator<Item = TemporalGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let base = lifetime as u64 + 1;
    let total = base.pow(pairs.len() as u32);
    (0..total).map(move |mut code| {
        let mut edges = Vec::new();
        for &(u, v) in &pairs {
            let l = (code % base) as Time;
            code /= base;
            if l > 0 {
                edges.push(EdgeRecord::single(u, v, l));
            }
        }
        TemporalGraph::new(n, lifetime, Variant::Simple, edges).expect("valid labeling")
    })
}

/// Every labeling of a fixed static skeleton.
pub fn skeleton_labelings(
    n: usize,
    lifetime: Time,
    skeleton: Vec<(usize, usize)>,
) -> impl Iterator<Item = TemporalGraph> {
    let base = lifetime as u64;
    let total = base.pow(skeleton.len() as u32);
    (0..total).map(move |mut code| {
        let edges = skeleton
            .iter()
            .map(|&(u, v)| {
                let l = (code % base) as Time + 1;
                code /= base;
                EdgeRecord::single(u, v, l)
            })
            .collect();
        TemporalGraph::new(n, lifetime, Variant::Simple, edges).expect("valid labeling")
    })
}

/// ERT with one to three distinct labels per present pair, as parallel
/// records.
pub fn ert_multiedge(n: usize, p: f64, lifetime: Time, seed: u64) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                let mult = rng.random_range(1..=3usize.min(lifetime as usize));
                let mut labels: Vec<Time> = Vec::new();
                while labels.len() < mult {
                    let l = rng.random_range(1..=lifetime);
                    if !labels.contains(&l) {
                        labels.push(l);
                    }
                }
                edges.extend(labels.into_iter().map(|l| EdgeRecord::single(u, v, l)));
            }
        }
    }
    TemporalGraph::new(n, lifetime, Variant::Multiedge, edges).expect("valid multiedge graph")
}

/// A seeded ERT instance with its delta.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: TemporalGraph,
    pub delta: Time,
    pub seed: u64,
}

/// `count` instances with `n <= 30`, `Tmax <= 20` and delta cycling
/// through `1`, `ceil(Tmax / 2)` and `Tmax`.
pub fn ert_suite(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(1..=30usize);
            let lifetime = rng.random_range(1..=20 as Time);
            let p = rng.random_range(0.0..=1.0f64);
            let delta = match i % 3 {
                0 => 1,
                1 => lifetime.div_ceil(2),
                _ => lifetime,
            };
            let seed = rng.random();
            let graph = generate_ert(ErtParams {
                n,
                p,
                lifetime,
                rng_seed: seed,
            })
            .expect("valid params");
            Instance { graph, delta, seed }
        })
        .collect()
}

/// Same parameter distribution as [`ert_suite`] on multiedge graphs.
pub fn multiedge_suite(count: usize, seed: u64) -> Vec<Instance> {
    ert_suite(count, seed)
        .into_iter()
        .map(|inst| {
            let g = &inst.graph;
            let n = g.node_count();
            let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
            let p = g.edge_count() as f64 / pairs;
            Instance {
                graph: ert_multiedge(n, p, g.lifetime(), inst.seed),
                ..inst
            }
        })
        .collect()
}
