//! What a Discoverer knows about the labels of a disclosed static graph.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::game::PhaseCounts;
use crate::game::{Feedback, Payload};
use crate::infection::{Seed, SeedSet};
use crate::labels::LabelSet;
use crate::temporal_graph::{EdgeRecord, NodeId, TemporalGraph, Time, Variant};

/// Labels of one static pair: `mult` records, candidate labels still
/// possible and labels already confirmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairKnowledge {
    pub u: NodeId,
    pub v: NodeId,
    pub mult: usize,
    pub candidates: LabelSet,
    pub confirmed: LabelSet,
}

impl PairKnowledge {
    pub fn is_known(&self) -> bool {
        self.confirmed.len() == self.mult
    }
}

#[derive(Debug, Clone)]
pub struct KnowledgeState {
    node_count: usize,
    lifetime: Time,
    delta: Time,
    variant: Variant,
    pairs: Vec<PairKnowledge>,
    index: HashMap<(NodeId, NodeId), usize>,
    // pair indices per node
    adjacency: Vec<Vec<usize>>,
    unknown_at: Vec<usize>,
    known: Vec<bool>,
    performed: HashSet<Seed>,
    pub phases: PhaseCounts,
}

impl KnowledgeState {
    /// Starts from a disclosed static graph; `static_edges` repeats a pair
    /// once per parallel record.
    pub fn new(
        node_count: usize,
        lifetime: Time,
        delta: Time,
        variant: Variant,
        static_edges: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        if variant == Variant::Multilabel {
            return Err(Error::Unsupported(
                "label tracking needs a known number of labels per pair".into(),
            ));
        }
        let mut index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        let mut pairs: Vec<PairKnowledge> = Vec::new();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in static_edges {
            let (u, v) = (a.min(b), a.max(b));
            if u == v || v >= node_count {
                return Err(Error::InvalidGraph(format!("bad disclosed edge {u}-{v}")));
            }
            match index.get(&(u, v)) {
                Some(&i) => pairs[i].mult += 1,
                None => {
                    index.insert((u, v), pairs.len());
                    adjacency[u].push(pairs.len());
                    adjacency[v].push(pairs.len());
                    pairs.push(PairKnowledge {
                        u,
                        v,
                        mult: 1,
                        candidates: LabelSet::full(lifetime),
                        confirmed: LabelSet::empty(lifetime),
                    });
                }
            }
        }
        if variant == Variant::Simple && pairs.len() != static_edges.len() {
            return Err(Error::InvalidGraph("parallel edges in a simple graph".into()));
        }
        let mut state = Self {
            node_count,
            lifetime,
            delta,
            variant,
            unknown_at: adjacency.iter().map(Vec::len).collect(),
            known: vec![false; pairs.len()],
            pairs,
            index,
            adjacency,
            performed: HashSet::new(),
            phases: PhaseCounts::default(),
        };
        for i in 0..state.pairs.len() {
            state.settle(i)?;
        }
        Ok(state)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn pairs(&self) -> &[PairKnowledge] {
        &self.pairs
    }

    pub fn pair(&self, a: NodeId, b: NodeId) -> Option<&PairKnowledge> {
        self.index.get(&(a.min(b), a.max(b))).map(|&i| &self.pairs[i])
    }

    pub fn pairs_at(&self, v: NodeId) -> impl Iterator<Item = &PairKnowledge> + '_ {
        self.adjacency[v].iter().map(|&i| &self.pairs[i])
    }

    /// True when every pair at `v` is known.
    pub fn node_known(&self, v: NodeId) -> bool {
        self.unknown_at[v] == 0
    }

    pub fn all_known(&self) -> bool {
        self.unknown_at.iter().all(|&c| c == 0)
    }

    /// Lowest node with a pair whose labels are still unknown.
    pub fn first_unknown_node(&self) -> Option<NodeId> {
        self.unknown_at.iter().position(|&c| c > 0)
    }

    pub fn performed(&self, seed: Seed) -> bool {
        self.performed.contains(&seed)
    }

    pub fn performed_count(&self) -> usize {
        self.performed.len()
    }

    /// Sum over pairs of candidate-set sizes.
    pub fn potential(&self) -> usize {
        self.pairs.iter().map(|p| p.candidates.len()).sum()
    }

    fn confirm(&mut self, i: usize, t: Time) -> Result<()> {
        let p = &mut self.pairs[i];
        if !p.candidates.contains(t) {
            return Err(Error::InconsistentFeedback(format!(
                "label {t} on {}-{} was already ruled out",
                p.u, p.v
            )));
        }
        if p.confirmed.insert(t) {
            self.settle(i)?;
        }
        Ok(())
    }

    // keeps candidates, confirmed labels and the per-node counters aligned
    fn settle(&mut self, i: usize) -> Result<()> {
        let p = &mut self.pairs[i];
        if p.confirmed.len() > p.mult || p.candidates.len() < p.mult {
            return Err(Error::InconsistentFeedback(format!(
                "no labeling of {}-{} fits the feedback",
                p.u, p.v
            )));
        }
        if p.confirmed.len() == p.mult && p.candidates.len() > p.mult {
            p.candidates = p.confirmed.clone();
        } else if p.candidates.len() == p.mult && p.confirmed.len() < p.mult {
            p.confirmed = p.candidates.clone();
        }
        if !self.known[i] && p.is_known() {
            self.known[i] = true;
            let (u, v) = (p.u, p.v);
            self.unknown_at[u] -= 1;
            self.unknown_at[v] -= 1;
        }
        Ok(())
    }

    /// Updates knowledge from one answered round.
    ///
    /// Labels are confirmed directly from log entries. From infection times
    /// alone a label is confirmed when exactly one pair could have carried
    /// the infection. In both modes, a label `t` is ruled out on a pair
    /// when one endpoint was infectious at `t` while the other was still
    /// susceptible at `t`.
    pub fn observe(&mut self, seeds: &SeedSet, payload: &Payload, mode: Feedback) -> Result<()> {
        for s in seeds.seeds() {
            self.performed.insert(*s);
        }
        let times = payload.timetable().to_dense(self.node_count);
        if let (Some(log), Feedback::FullLog) = (payload.log(), mode) {
            for e in log.entries.iter().filter(|e| !e.is_seed()) {
                let i = *self
                    .index
                    .get(&(e.infector.min(e.infected), e.infector.max(e.infected)))
                    .ok_or_else(|| {
                        Error::InconsistentFeedback(format!("infection along non-edge {}-{}", e.infector, e.infected))
                    })?;
                self.confirm(i, e.time)?;
            }
        }
        self.prune(&times)?;
        self.deduce_single_source(seeds, &times)
    }

    fn prune(&mut self, times: &[Option<Time>]) -> Result<()> {
        for a in 0..self.node_count {
            let Some(t0) = times[a] else { continue };
            let hi = t0.saturating_add(self.delta).min(self.lifetime);
            for k in 0..self.adjacency[a].len() {
                let i = self.adjacency[a][k];
                let p = &self.pairs[i];
                let b = if p.u == a { p.v } else { p.u };
                let b_hi = match times[b] {
                    Some(tb) if tb <= t0 + 1 => continue,
                    Some(tb) => hi.min(tb - 1),
                    None => hi,
                };
                let lo = t0 + 1;
                if lo > b_hi {
                    continue;
                }
                if p.confirmed.count_range(lo, b_hi) > 0 {
                    return Err(Error::InconsistentFeedback(format!(
                        "a confirmed label of {}-{} failed to transmit",
                        p.u, p.v
                    )));
                }
                if self.pairs[i].candidates.remove_range(lo, b_hi) > 0 {
                    self.settle(i)?;
                }
            }
        }
        Ok(())
    }

    fn deduce_single_source(&mut self, seeds: &SeedSet, times: &[Option<Time>]) -> Result<()> {
        for w in 0..self.node_count {
            let Some(t) = times[w] else { continue };
            if seeds.contains(w, t) {
                continue;
            }
            let mut source = None;
            let mut count = 0;
            for &i in &self.adjacency[w] {
                let p = &self.pairs[i];
                let a = if p.u == w { p.v } else { p.u };
                let infectious = times[a].is_some_and(|t0| t0 < t && t <= t0.saturating_add(self.delta));
                if infectious && p.candidates.contains(t) {
                    count += 1;
                    source = Some(i);
                }
            }
            match (count, source) {
                (0, _) => {
                    return Err(Error::InconsistentFeedback(format!(
                        "node {w} infected at {t} without a possible infector"
                    )))
                }
                (1, Some(i)) => self.confirm(i, t)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Graph built from confirmed labels, filling unknown slots with the
    /// smallest remaining candidates.
    pub fn best_guess(&self) -> Result<TemporalGraph> {
        let mut edges = Vec::new();
        for p in &self.pairs {
            let mut labels: Vec<Time> = p.confirmed.iter().collect();
            for t in p.candidates.iter() {
                if labels.len() >= p.mult {
                    break;
                }
                if !p.confirmed.contains(t) {
                    labels.push(t);
                }
            }
            labels.sort_unstable();
            match self.variant {
                Variant::Simple => edges.push(EdgeRecord::new(p.u, p.v, labels)),
                _ => edges.extend(labels.into_iter().map(|t| EdgeRecord::single(p.u, p.v, t))),
            }
        }
        TemporalGraph::new(self.node_count, self.lifetime, self.variant, edges)
    }

    /// Graph made only of confirmed labels.
    pub fn confirmed_graph(&self) -> Result<TemporalGraph> {
        let edges = self
            .pairs
            .iter()
            .flat_map(|p| p.confirmed.iter().map(|t| EdgeRecord::single(p.u, p.v, t)))
            .collect();
        let variant = match self.variant {
            Variant::Simple => Variant::Simple,
            _ => Variant::Multiedge,
        };
        TemporalGraph::new(self.node_count, self.lifetime, variant, edges)
    }
}
