//! Follow and DiscoveryFollow: sweep one node over the lifetime, then chase
//! every infection the sweep produces until its delta-edge connected
//! component is mapped.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::game::{Answer, Discoverer, Feedback, Goal, Knowledge, PhaseCounts, RoundOracle};
use crate::infection::{infection_times, Seed, SeedSet};
use crate::temporal_graph::{NodeId, Time};

use super::knowledge::KnowledgeState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Discovery,
    Exploration,
}

/// Shared bookkeeping of one game: knowledge, the exploration queue and
/// the outcome of every single-seed round issued so far.
struct Runner<'a> {
    oracle: &'a mut dyn RoundOracle,
    state: KnowledgeState,
    mode: Feedback,
    delta: Time,
    lifetime: Time,
    skip_redundant: bool,
    queued: HashSet<(NodeId, Time)>,
    queue: VecDeque<(NodeId, Time)>,
    // for every issued seed, whether it infected every node
    spanning: HashMap<Seed, bool>,
}

impl<'a> Runner<'a> {
    fn new(oracle: &'a mut dyn RoundOracle, skip_redundant: bool) -> Result<Self> {
        let config = oracle.config().clone();
        if config.knowledge != Knowledge::StaticKnown {
            return Err(Error::Unsupported("following infections needs the static graph".into()));
        }
        let edges = oracle
            .disclosure()
            .static_edges
            .clone()
            .ok_or_else(|| Error::Unsupported("static graph was not disclosed".into()))?;
        let state = KnowledgeState::new(config.node_count, config.lifetime, config.delta, config.variant, &edges)?;
        Ok(Self {
            oracle,
            state,
            mode: config.feedback,
            delta: config.delta,
            lifetime: config.lifetime,
            skip_redundant,
            queued: HashSet::new(),
            queue: VecDeque::new(),
            spanning: HashMap::new(),
        })
    }

    /// Issues `seed` alone unless it was already performed or is redundant.
    /// Queues every non-seed infection of the round. Returns whether a
    /// round was issued.
    fn issue(&mut self, seed: Seed, phase: Phase) -> Result<bool> {
        if self.state.performed(seed) {
            return Ok(false);
        }
        if self.skip_redundant && self.state.node_known(seed.node) {
            self.state.phases.skipped_redundant += 1;
            return Ok(false);
        }
        let seeds = SeedSet::single(seed.node, seed.time);
        let payload = self.oracle.round(seeds.clone())?;
        match phase {
            Phase::Discovery => self.state.phases.discovery += 1,
            Phase::Exploration => self.state.phases.exploration += 1,
        }
        self.state.observe(&seeds, &payload, self.mode)?;
        let table = payload.timetable();
        self.spanning.insert(seed, table.len() == self.state.node_count());
        for (w, t) in table.iter() {
            if (w, t) != (seed.node, seed.time) && self.queued.insert((w, t)) {
                self.queue.push_back((w, t));
            }
        }
        Ok(true)
    }

    /// Sweeps `v0` with seeds `0, delta, 2 delta, ...`, exploring after
    /// every round. Seeds at `Tmax` or later cannot fire any edge and are
    /// not issued. Returns the number of sweep rounds issued.
    fn sweep(&mut self, v0: NodeId) -> Result<usize> {
        let steps = self.lifetime.div_ceil(self.delta);
        let mut issued = 0;
        for i in 0..=steps {
            let t = i * self.delta;
            if t >= self.lifetime {
                break;
            }
            if self.issue(Seed::new(v0, t), Phase::Discovery)? {
                issued += 1;
            }
            self.explore()?;
        }
        Ok(issued)
    }

    /// Drains the queue: for an infection of `w` at `t`, seed `w` at
    /// `t - delta - 1`, `t - 1` and `t`. An early seed before step 0 is
    /// moved to 0 so labels below `t - 1` are still probed.
    fn explore(&mut self) -> Result<()> {
        while let Some((w, t)) = self.queue.pop_front() {
            let early = t.saturating_sub(self.delta + 1);
            for t2 in [early, t.saturating_sub(1), t] {
                if t2 <= self.lifetime {
                    self.issue(Seed::new(w, t2), Phase::Exploration)?;
                }
            }
        }
        Ok(())
    }

    /// Last resort when a sweep finds nothing new at a node that still has
    /// unknown pairs: seed one endpoint right before every candidate label.
    fn complete(&mut self, v0: NodeId) -> Result<()> {
        let targets: Vec<(NodeId, Time)> = self
            .state
            .pairs_at(v0)
            .filter(|p| !p.is_known())
            .flat_map(|p| p.candidates.iter().map(move |t| (p.u, t)))
            .collect();
        for (u, t) in targets {
            self.issue(Seed::new(u, t - 1), Phase::Exploration)?;
            self.explore()?;
        }
        Ok(())
    }
}

/// Full discovery: repeatedly sweeps the lowest node with an unknown pair.
#[derive(Debug, Clone, Default)]
pub struct DiscoveryFollow {
    pub skip_redundant: bool,
    phases: PhaseCounts,
    sweeps: usize,
    completions: usize,
}

impl DiscoveryFollow {
    pub fn new(skip_redundant: bool) -> Self {
        Self {
            skip_redundant,
            ..Self::default()
        }
    }

    /// Number of outer-loop iterations in the last game.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Number of times the completion fallback ran in the last game.
    pub fn completions(&self) -> usize {
        self.completions
    }
}

impl Discoverer for DiscoveryFollow {
    fn name(&self) -> &str {
        "discovery-follow"
    }

    fn play(&mut self, oracle: &mut dyn RoundOracle) -> Result<Answer> {
        self.sweeps = 0;
        self.completions = 0;
        let goal = oracle.config().goal;
        let mut run = Runner::new(oracle, self.skip_redundant)?;
        let result = (|| -> Result<()> {
            while let Some(v0) = run.state.first_unknown_node() {
                self.sweeps += 1;
                let issued = run.sweep(v0)?;
                if issued == 0 && !run.state.node_known(v0) {
                    self.completions += 1;
                    run.complete(v0)?;
                    if !run.state.node_known(v0) {
                        break;
                    }
                }
            }
            Ok(())
        })();
        self.phases = run.state.phases;
        result?;
        if goal == Goal::Ipz {
            return Err(Error::Unsupported(
                "discovery-follow answers full discovery games".into(),
            ));
        }
        Ok(Answer::Graph(run.state.best_guess()?))
    }

    fn phases(&self) -> Option<PhaseCounts> {
        Some(self.phases)
    }
}

/// Ideal-patient-zero search from node 0.
///
/// After mapping every component the sweep touches, every `(v, t)` is
/// simulated on the confirmed labels. A seed that spans the confirmed graph
/// is checked with a real round before it is returned.
#[derive(Debug, Clone, Default)]
pub struct Follow {
    phases: PhaseCounts,
}

impl Follow {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Discoverer for Follow {
    fn name(&self) -> &str {
        "follow"
    }

    fn play(&mut self, oracle: &mut dyn RoundOracle) -> Result<Answer> {
        let config = oracle.config().clone();
        if config.node_count == 1 {
            return Ok(Answer::Ipz(Some(Seed::new(0, 0))));
        }
        let mut run = Runner::new(oracle, false)?;
        let result = (|| -> Result<Option<Seed>> {
            run.sweep(0)?;
            let known = run.state.confirmed_graph()?;
            for v in 0..config.node_count {
                for t in 0..=config.lifetime {
                    let seed = Seed::new(v, t);
                    let times = infection_times(&known, &SeedSet::single(v, t), config.delta)?;
                    if !times.iter().all(Option::is_some) {
                        continue;
                    }
                    if !run.spanning.contains_key(&seed) {
                        run.issue(seed, Phase::Exploration)?;
                    }
                    if run.spanning.get(&seed) == Some(&true) {
                        return Ok(Some(seed));
                    }
                }
            }
            Ok(None)
        })();
        self.phases = run.state.phases;
        Ok(Answer::Ipz(result?))
    }

    fn phases(&self) -> Option<PhaseCounts> {
        Some(self.phases)
    }
}
