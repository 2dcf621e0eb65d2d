use std::collections::BTreeMap;

use crate::error::Result;
use crate::game::{Answer, Discoverer, Goal, RoundOracle};
use crate::infection::{Seed, SeedSet};
use crate::temporal_graph::{EdgeRecord, NodeId, TemporalGraph, Time, Variant};

/// The `n * Tmax` single-seed rounds `(v, t)` for every node `v` and every
/// `t` in `[0, Tmax - 1]`, node-major.
pub fn brute_force_rounds(n: usize, lifetime: Time) -> Vec<SeedSet> {
    (0..n)
        .flat_map(|v| (0..lifetime).map(move |t| SeedSet::single(v, t)))
        .collect()
}

/// Seeds every node one step before every possible label.
///
/// Seeding `v` alone at `t - 1` makes `v` the only infectious node at `t`,
/// so every node infected at `t` is a neighbour of `v` through a label `t`.
/// This works without a disclosed static graph and for every variant.
#[derive(Debug, Default, Clone)]
pub struct BruteForce;

impl Discoverer for BruteForce {
    fn name(&self) -> &str {
        "brute-force"
    }

    fn play(&mut self, oracle: &mut dyn RoundOracle) -> Result<Answer> {
        let config = oracle.config().clone();
        let mut labels: BTreeMap<(NodeId, NodeId), Vec<Time>> = BTreeMap::new();
        let mut ipz = (config.node_count == 1).then(|| Seed::new(0, 0));
        for seeds in brute_force_rounds(config.node_count, config.lifetime) {
            let Seed { node: v, time: t0 } = seeds.seeds()[0];
            let payload = oracle.round(seeds)?;
            let table = payload.timetable();
            if ipz.is_none() && table.len() == config.node_count {
                ipz = Some(Seed::new(v, t0));
            }
            for (w, t) in table.iter() {
                if t == t0 + 1 {
                    labels.entry((v.min(w), v.max(w))).or_default().push(t);
                }
            }
        }
        if config.goal == Goal::Ipz {
            return Ok(Answer::Ipz(ipz));
        }
        let mut edges = Vec::new();
        for ((u, v), mut ls) in labels {
            ls.sort_unstable();
            ls.dedup();
            match config.variant {
                Variant::Multiedge => edges.extend(ls.into_iter().map(|t| EdgeRecord::single(u, v, t))),
                _ => edges.push(EdgeRecord::new(u, v, ls)),
            }
        }
        match TemporalGraph::new(config.node_count, config.lifetime, config.variant, edges) {
            Ok(g) => Ok(Answer::Graph(g)),
            Err(e) => Ok(Answer::Forfeit(e.to_string())),
        }
    }
}
