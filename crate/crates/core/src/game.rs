//! The round-based discovery game and its ideal-patient-zero variant.
//!
//! The Discoverer submits seed sets, the Adversary answers each with
//! feedback, and at the end both submit a graph. The harness enforces the
//! per-round seed limit and the round budget and checks that the
//! Adversary's final graph explains every answer it gave.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infection::{
    infection_times, simulate, verify_log_consistency, InfectionLog, InfectionTimetable, Seed, SeedSet, TiePolicy,
};
use crate::temporal_graph::{NodeId, TemporalGraph, Time, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Feedback {
    #[default]
    FullLog,
    TimesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Knowledge {
    #[default]
    StaticKnown,
    NodesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Goal {
    #[default]
    FullDiscovery,
    Ipz,
}

impl FromStr for Feedback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_log" => Ok(Feedback::FullLog),
            "times" | "times_only" => Ok(Feedback::TimesOnly),
            other => Err(Error::InvalidParameter(format!("unknown feedback mode `{other}`"))),
        }
    }
}

impl FromStr for Knowledge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" | "static_known" => Ok(Knowledge::StaticKnown),
            "nodes" | "nodes_only" => Ok(Knowledge::NodesOnly),
            other => Err(Error::InvalidParameter(format!("unknown knowledge mode `{other}`"))),
        }
    }
}

impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_discovery" | "discovery" => Ok(Goal::FullDiscovery),
            "ipz" => Ok(Goal::Ipz),
            other => Err(Error::InvalidParameter(format!("unknown goal `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub node_count: usize,
    pub lifetime: Time,
    pub delta: Time,
    pub k: usize,
    #[serde(default)]
    pub feedback: Feedback,
    #[serde(default)]
    pub knowledge: Knowledge,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub goal: Goal,
    /// Defaults to `10 * n * lifetime` rounds.
    #[serde(default)]
    pub round_budget: Option<usize>,
}

impl GameConfig {
    pub fn new(node_count: usize, lifetime: Time, delta: Time) -> Self {
        Self {
            node_count,
            lifetime,
            delta,
            k: 1,
            feedback: Feedback::FullLog,
            knowledge: Knowledge::StaticKnown,
            variant: Variant::Simple,
            goal: Goal::FullDiscovery,
            round_budget: None,
        }
    }

    /// Config for a game played on `graph`'s node count, lifetime and variant.
    pub fn for_graph(graph: &TemporalGraph, delta: Time) -> Self {
        Self {
            variant: graph.variant(),
            ..Self::new(graph.node_count(), graph.lifetime(), delta)
        }
    }

    pub fn with_feedback(mut self, feedback: Feedback) -> Self {
        self.feedback = feedback;
        self
    }

    pub fn with_knowledge(mut self, knowledge: Knowledge) -> Self {
        self.knowledge = knowledge;
        self
    }

    pub fn with_goal(mut self, goal: Goal) -> Self {
        self.goal = goal;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn budget(&self) -> usize {
        self.round_budget
            .unwrap_or(10 * self.node_count * self.lifetime as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 || self.lifetime == 0 || self.delta == 0 || self.k == 0 {
            return Err(Error::InvalidParameter(
                "n, Tmax, delta and k must all be positive".into(),
            ));
        }
        if self.delta > self.lifetime {
            return Err(Error::InvalidParameter(format!(
                "delta {} exceeds Tmax {}",
                self.delta, self.lifetime
            )));
        }
        Ok(())
    }
}

/// What the Discoverer learns before the first round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disclosure {
    pub node_count: usize,
    /// Static edges as sorted pairs, repeated once per parallel record.
    /// Absent when only the node set is known.
    pub static_edges: Option<Vec<(NodeId, NodeId)>>,
}

impl Disclosure {
    pub fn of(graph: &TemporalGraph, knowledge: Knowledge) -> Self {
        Self {
            node_count: graph.node_count(),
            static_edges: match knowledge {
                Knowledge::StaticKnown => Some(graph.static_pairs()),
                Knowledge::NodesOnly => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Log(InfectionLog),
    Times(InfectionTimetable),
}

impl Payload {
    pub fn timetable(&self) -> InfectionTimetable {
        match self {
            Payload::Log(log) => crate::infection::timetable_of(log).unwrap_or_default(),
            Payload::Times(t) => t.clone(),
        }
    }

    pub fn log(&self) -> Option<&InfectionLog> {
        match self {
            Payload::Log(log) => Some(log),
            Payload::Times(_) => None,
        }
    }

    pub fn degrade(self) -> Payload {
        match self {
            Payload::Log(_) => Payload::Times(self.timetable()),
            times => times,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub seeds: SeedSet,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub disclosure: Disclosure,
    pub rounds: Vec<Round>,
}

impl Transcript {
    pub fn schedule(&self) -> Vec<SeedSet> {
        self.rounds.iter().map(|r| r.seeds.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Graph(TemporalGraph),
    /// `None` claims that no ideal patient zero exists.
    Ipz(Option<Seed>),
    /// The Discoverer gave up or broke a rule.
    Forfeit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Discoverer,
    Adversary,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Discoverer => "discoverer",
            Winner::Adversary => "adversary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub winner: Winner,
    pub rounds_used: usize,
    pub answer: Answer,
    pub adversary_graph: TemporalGraph,
}

/// Rounds spent per phase of the discovery loop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCounts {
    pub discovery: usize,
    pub exploration: usize,
    /// Planned seeds that were not issued because every pair at the node
    /// was already known. Not rounds.
    pub skipped_redundant: usize,
}

impl PhaseCounts {
    pub fn rounds(&self) -> usize {
        self.discovery + self.exploration
    }
}

/// The Discoverer's view of a running game.
pub trait RoundOracle {
    fn config(&self) -> &GameConfig;
    fn disclosure(&self) -> &Disclosure;
    fn round(&mut self, seeds: SeedSet) -> Result<Payload>;
    fn rounds_used(&self) -> usize;
}

pub trait Discoverer {
    fn name(&self) -> &str;
    fn play(&mut self, oracle: &mut dyn RoundOracle) -> Result<Answer>;

    /// Phase accounting of the last game, for strategies that keep one.
    fn phases(&self) -> Option<PhaseCounts> {
        None
    }
}

pub trait Adversary {
    fn name(&self) -> &str;
    /// Called once before the game; returns what the Discoverer is told.
    fn begin(&mut self, config: &GameConfig) -> Result<Disclosure>;
    /// Full log for a validated seed set. The harness hides infectors when
    /// the game only reveals infection times.
    fn respond(&mut self, seeds: &SeedSet) -> Result<InfectionLog>;
    /// A graph consistent with every answer given so far.
    fn final_graph(&mut self, answer: &Answer) -> Result<TemporalGraph>;
}

/// One game in progress. Serves rounds to a Discoverer and records the
/// transcript.
pub struct GameHandle {
    config: GameConfig,
    disclosure: Disclosure,
    adversary: Box<dyn Adversary + Send>,
    transcript: Transcript,
}

impl fmt::Debug for GameHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameHandle")
            .field("config", &self.config)
            .field("adversary", &self.adversary.name())
            .field("rounds", &self.transcript.rounds.len())
            .finish()
    }
}

impl GameHandle {
    pub fn start(config: GameConfig, mut adversary: Box<dyn Adversary + Send>) -> Result<Self> {
        config.validate()?;
        let disclosure = adversary.begin(&config)?;
        if disclosure.node_count != config.node_count {
            return Err(Error::InvalidParameter(format!(
                "adversary disclosed {} nodes but the game has {}",
                disclosure.node_count, config.node_count
            )));
        }
        Ok(Self {
            transcript: Transcript {
                disclosure: disclosure.clone(),
                rounds: Vec::new(),
            },
            config,
            disclosure,
            adversary,
        })
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn adversary_name(&self) -> &str {
        self.adversary.name()
    }

    /// Ends the game: collects the Adversary's graph and adjudicates.
    pub fn finish(mut self, answer: Answer) -> Result<(GameOutcome, Transcript)> {
        let graph = self.adversary.final_graph(&answer)?;
        let outcome = adjudicate(&self.config, &self.transcript, answer, graph)?;
        Ok((outcome, self.transcript))
    }

    fn check_seeds(&self, seeds: &SeedSet) -> Result<()> {
        if self.transcript.rounds.len() >= self.config.budget() {
            return Err(Error::RoundBudgetExhausted(self.config.budget()));
        }
        if seeds.len() > self.config.k {
            return Err(Error::TooManySeeds {
                given: seeds.len(),
                allowed: self.config.k,
            });
        }
        for s in seeds.seeds() {
            if s.node >= self.config.node_count || s.time > self.config.lifetime {
                return Err(Error::SeedOutOfRange {
                    node: s.node,
                    time: s.time,
                    lifetime: self.config.lifetime,
                });
            }
        }
        Ok(())
    }
}

impl RoundOracle for GameHandle {
    fn config(&self) -> &GameConfig {
        &self.config
    }

    fn disclosure(&self) -> &Disclosure {
        &self.disclosure
    }

    fn round(&mut self, seeds: SeedSet) -> Result<Payload> {
        self.check_seeds(&seeds)?;
        let mut log = self.adversary.respond(&seeds)?;
        log.normalize();
        let payload = match self.config.feedback {
            Feedback::FullLog => Payload::Log(log),
            Feedback::TimesOnly => Payload::Log(log).degrade(),
        };
        self.transcript.rounds.push(Round {
            seeds,
            payload: payload.clone(),
        });
        Ok(payload)
    }

    fn rounds_used(&self) -> usize {
        self.transcript.rounds.len()
    }
}

/// Presents an oracle as if it only revealed infection times.
pub struct TimesOnlyView<'a> {
    inner: &'a mut dyn RoundOracle,
    config: GameConfig,
}

impl<'a> TimesOnlyView<'a> {
    pub fn new(inner: &'a mut dyn RoundOracle) -> Self {
        let config = inner.config().clone().with_feedback(Feedback::TimesOnly);
        Self { inner, config }
    }
}

impl RoundOracle for TimesOnlyView<'_> {
    fn config(&self) -> &GameConfig {
        &self.config
    }

    fn disclosure(&self) -> &Disclosure {
        self.inner.disclosure()
    }

    fn round(&mut self, seeds: SeedSet) -> Result<Payload> {
        Ok(self.inner.round(seeds)?.degrade())
    }

    fn rounds_used(&self) -> usize {
        self.inner.rounds_used()
    }
}

/// Plays one full game. A Discoverer error (budget, bad seeds) becomes a
/// forfeit; an Adversary whose final graph contradicts its own answers is
/// reported as `AdversaryInconsistent`.
pub fn play(
    config: GameConfig,
    discoverer: &mut dyn Discoverer,
    adversary: Box<dyn Adversary + Send>,
) -> Result<(GameOutcome, Transcript)> {
    let mut handle = GameHandle::start(config, adversary)?;
    let answer = match discoverer.play(&mut handle) {
        Ok(answer) => answer,
        Err(e @ Error::AdversaryInconsistent { .. }) => return Err(e),
        Err(e) => Answer::Forfeit(e.to_string()),
    };
    handle.finish(answer)
}

/// Decides the winner after checking that `adversary_graph` explains every
/// round of the transcript.
pub fn adjudicate(
    config: &GameConfig,
    transcript: &Transcript,
    answer: Answer,
    adversary_graph: TemporalGraph,
) -> Result<GameOutcome> {
    let g = &adversary_graph;
    if g.node_count() != config.node_count || g.lifetime() != config.lifetime {
        return Err(Error::AdversaryInconsistent {
            round: 0,
            reason: "final graph has the wrong node count or lifetime".into(),
        });
    }
    if let Some(pairs) = &transcript.disclosure.static_edges {
        if *pairs != g.static_pairs() {
            return Err(Error::AdversaryInconsistent {
                round: 0,
                reason: "final graph differs from the disclosed static graph".into(),
            });
        }
    }
    for (i, round) in transcript.rounds.iter().enumerate() {
        let ok = match &round.payload {
            Payload::Log(log) => verify_log_consistency(g, &round.seeds, log, config.delta),
            Payload::Times(times) => infection_times(g, &round.seeds, config.delta)
                .map(|t| dense_eq(&t, times))
                .unwrap_or(false),
        };
        if !ok {
            return Err(Error::AdversaryInconsistent {
                round: i + 1,
                reason: "feedback cannot be produced by the final graph".into(),
            });
        }
    }
    let wins = match (&answer, config.goal) {
        (Answer::Graph(claimed), Goal::FullDiscovery) => claimed.same_labeling(g),
        (Answer::Ipz(Some(seed)), Goal::Ipz) => is_ipz(g, *seed, config.delta),
        (Answer::Ipz(None), Goal::Ipz) => find_ipz(g, config.delta).is_none(),
        _ => false,
    };
    Ok(GameOutcome {
        winner: if wins { Winner::Discoverer } else { Winner::Adversary },
        rounds_used: transcript.rounds.len(),
        answer,
        adversary_graph,
    })
}

fn dense_eq(times: &[Option<Time>], table: &InfectionTimetable) -> bool {
    let count = times.iter().filter(|t| t.is_some()).count();
    count == table.len() && table.iter().all(|(v, t)| times.get(v) == Some(&Some(t)))
}

/// True iff seeding `seed` alone infects every node.
pub fn is_ipz(graph: &TemporalGraph, seed: Seed, delta: Time) -> bool {
    infection_times(graph, &SeedSet::single(seed.node, seed.time), delta)
        .map(|t| t.iter().all(Option::is_some))
        .unwrap_or(false)
}

/// Exhaustive search over `V x [0, Tmax]`, lowest node then earliest time.
pub fn find_ipz(graph: &TemporalGraph, delta: Time) -> Option<Seed> {
    (0..graph.node_count())
        .flat_map(|v| (0..=graph.lifetime()).map(move |t| Seed::new(v, t)))
        .find(|&s| is_ipz(graph, s, delta))
}

/// Full log of `seeds` on `graph`, lowest-id ties.
pub(crate) fn honest_log(graph: &TemporalGraph, seeds: &SeedSet, delta: Time) -> Result<InfectionLog> {
    Ok(simulate(graph, seeds, delta, TiePolicy::LowestId)?.0)
}
