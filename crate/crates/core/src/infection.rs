//! SIR infection chains on temporal graphs.
//!
//! A node infected at `t0` is infectious during `[t0 + 1, t0 + delta]` and
//! resistant afterwards. It transmits along every edge whose label falls in
//! that window to neighbours that are still susceptible.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal_graph::{NodeId, TemporalGraph, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub node: NodeId,
    pub time: Time,
}

impl Seed {
    pub fn new(node: NodeId, time: Time) -> Self {
        Self { node, time }
    }
}

impl From<(NodeId, Time)> for Seed {
    fn from((node, time): (NodeId, Time)) -> Self {
        Self { node, time }
    }
}

/// Seed infections of one round, sorted and without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Seed>", into = "Vec<Seed>")]
pub struct SeedSet(Vec<Seed>);

impl From<Vec<Seed>> for SeedSet {
    fn from(mut seeds: Vec<Seed>) -> Self {
        seeds.sort_unstable();
        seeds.dedup();
        Self(seeds)
    }
}

impl From<SeedSet> for Vec<Seed> {
    fn from(s: SeedSet) -> Self {
        s.0
    }
}

impl FromIterator<Seed> for SeedSet {
    fn from_iter<I: IntoIterator<Item = Seed>>(iter: I) -> Self {
        Self::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl SeedSet {
    pub fn single(node: NodeId, time: Time) -> Self {
        Self(vec![Seed::new(node, time)])
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: NodeId, time: Time) -> bool {
        self.0.binary_search(&Seed::new(node, time)).is_ok()
    }

    pub fn validate(&self, graph: &TemporalGraph) -> Result<()> {
        for s in &self.0 {
            if s.node >= graph.node_count() || s.time > graph.lifetime() {
                return Err(Error::SeedOutOfRange {
                    node: s.node,
                    time: s.time,
                    lifetime: graph.lifetime(),
                });
            }
        }
        Ok(())
    }
}

/// `infector == infected` marks a seed infection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LogEntry {
    pub infector: NodeId,
    pub infected: NodeId,
    pub time: Time,
}

impl LogEntry {
    pub fn is_seed(&self) -> bool {
        self.infector == self.infected
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfectionLog {
    pub entries: Vec<LogEntry>,
}

impl InfectionLog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorts entries by time, then infected node.
    pub fn normalize(&mut self) {
        self.entries.sort_unstable_by_key(|e| (e.time, e.infected, e.infector));
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} {} {}\n", e.infector, e.infected, e.time))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|s| s.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v t`, found `{line}`"),
                })?;
            if nums.len() != 3 || nums[2] > Time::MAX as u64 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v t`, found `{line}`"),
                });
            }
            entries.push(LogEntry {
                infector: nums[0] as NodeId,
                infected: nums[1] as NodeId,
                time: nums[2] as Time,
            });
        }
        Ok(Self { entries })
    }
}

/// Infection time per node; absent nodes were never infected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfectionTimetable(pub BTreeMap<NodeId, Time>);

impl InfectionTimetable {
    pub fn get(&self, v: NodeId) -> Option<Time> {
        self.0.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Time)> + '_ {
        self.0.iter().map(|(&v, &t)| (v, t))
    }

    /// Dense form: `out[v]` is the infection time of `v`.
    pub fn to_dense(&self, n: usize) -> Vec<Option<Time>> {
        let mut out = vec![None; n];
        for (v, t) in self.iter() {
            if v < n {
                out[v] = Some(t);
            }
        }
        out
    }
}

/// How a susceptible node picks its infector when several infectious
/// neighbours reach it in the same step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    LowestId,
    HighestId,
    SeededRandom(u64),
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::LowestId => f.write_str("lowest"),
            TiePolicy::HighestId => f.write_str("highest"),
            TiePolicy::SeededRandom(s) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lowest" => Ok(TiePolicy::LowestId),
            "highest" => Ok(TiePolicy::HighestId),
            other => other
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(TiePolicy::SeededRandom)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "tie policy must be lowest, highest or random:<seed>, got `{other}`"
                    ))
                }),
        }
    }
}

/// Runs one infection chain and returns its log and timetable.
///
/// A seed on a node that is already infected is a no-op; a seed that lands
/// in the same step as a transmission takes precedence over it.
pub fn simulate(
    graph: &TemporalGraph,
    seeds: &SeedSet,
    delta: Time,
    policy: TiePolicy,
) -> Result<(InfectionLog, InfectionTimetable)> {
    if delta == 0 {
        return Err(Error::InvalidParameter("delta must be at least 1".into()));
    }
    seeds.validate(graph)?;
    let infected = run(graph, seeds, delta, policy);
    let mut log = InfectionLog {
        entries: infected
            .iter()
            .enumerate()
            .filter_map(|(v, slot)| {
                slot.map(|(time, infector)| LogEntry {
                    infector,
                    infected: v,
                    time,
                })
            })
            .collect(),
    };
    log.normalize();
    let table = InfectionTimetable(
        infected
            .iter()
            .enumerate()
            .filter_map(|(v, slot)| slot.map(|(t, _)| (v, t)))
            .collect(),
    );
    Ok((log, table))
}

/// Dense infection times only. Skips log construction; used in hot loops.
pub fn infection_times(graph: &TemporalGraph, seeds: &SeedSet, delta: Time) -> Result<Vec<Option<Time>>> {
    seeds.validate(graph)?;
    Ok(run(graph, seeds, delta.max(1), TiePolicy::LowestId)
        .into_iter()
        .map(|slot| slot.map(|(t, _)| t))
        .collect())
}

// heap key: (time, node, kind, infector); kind 0 is a seed so it sorts first
fn run(graph: &TemporalGraph, seeds: &SeedSet, delta: Time, policy: TiePolicy) -> Vec<Option<(Time, NodeId)>> {
    let n = graph.node_count();
    let mut infected: Vec<Option<(Time, NodeId)>> = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(Time, NodeId, u8, NodeId)>> = seeds
        .seeds()
        .iter()
        .map(|s| Reverse((s.time, s.node, 0, s.node)))
        .collect();
    let mut rng = match policy {
        TiePolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut candidates = Vec::new();
    while let Some(Reverse((t, v, kind, infector))) = heap.pop() {
        // gather every competing event for the same (time, node)
        candidates.clear();
        candidates.push((kind, infector));
        while let Some(&Reverse((t2, v2, k2, i2))) = heap.peek() {
            if t2 != t || v2 != v {
                break;
            }
            heap.pop();
            candidates.push((k2, i2));
        }
        if infected[v].is_some() {
            continue;
        }
        let chosen = if candidates[0].0 == 0 {
            v
        } else {
            // candidates are sorted ascending by infector
            candidates.dedup();
            match policy {
                TiePolicy::LowestId => candidates[0].1,
                TiePolicy::HighestId => candidates[candidates.len() - 1].1,
                TiePolicy::SeededRandom(_) => {
                    let rng = rng.as_mut().expect("rng exists for random policy");
                    candidates[rng.random_range(0..candidates.len())].1
                }
            }
        };
        infected[v] = Some((t, chosen));
        let hi = t.saturating_add(delta);
        for inc in graph.incident_between(v, t + 1, hi) {
            if infected[inc.neighbor].is_none() {
                heap.push(Reverse((inc.label, inc.neighbor, 1, v)));
            }
        }
    }
    infected
}

/// True iff `log` could have been produced by an infection chain on
/// `graph` seeded with `seeds`.
pub fn verify_log_consistency(graph: &TemporalGraph, seeds: &SeedSet, log: &InfectionLog, delta: Time) -> bool {
    let Ok(claimed) = timetable_of(log) else {
        return false;
    };
    let Ok((_, expected)) = simulate(graph, seeds, delta, TiePolicy::LowestId) else {
        return false;
    };
    if claimed != expected {
        return false;
    }
    for e in &log.entries {
        if e.infected >= graph.node_count() {
            return false;
        }
        let seeded_now = seeds.contains(e.infected, e.time);
        if e.is_seed() {
            if !seeded_now {
                return false;
            }
            continue;
        }
        if seeded_now || !graph.has_label(e.infector, e.infected, e.time) {
            return false;
        }
        match expected.get(e.infector) {
            Some(t0) if t0 < e.time && e.time <= t0.saturating_add(delta) => {}
            _ => return false,
        }
    }
    true
}

pub fn timetable_of(log: &InfectionLog) -> Result<InfectionTimetable> {
    let mut table = BTreeMap::new();
    for e in &log.entries {
        if table.insert(e.infected, e.time).is_some() {
            return Err(Error::DuplicateInfection(e.infected));
        }
    }
    Ok(InfectionTimetable(table))
}
