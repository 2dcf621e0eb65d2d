//! Adversary strategies and the potential / witnessing machinery.

pub mod lazy;
pub mod potential;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{honest_log, Adversary, Answer, Disclosure, GameConfig};
use crate::infection::{InfectionLog, SeedSet};
use crate::temporal_graph::{TemporalGraph, Time};

pub use lazy::{
    lazy_adversary_multilabel, lazy_adversary_thm52, lazy_adversary_unknown_static, LazyAdversary, LazyInstance,
};
pub use potential::{potential, witness_verify, PotentialTrace};

/// Answers every round by simulating a fixed hidden graph.
#[derive(Debug, Clone)]
pub struct Honest {
    hidden: TemporalGraph,
    delta: Time,
}

impl Honest {
    pub fn new(hidden: TemporalGraph, delta: Time) -> Self {
        Self { hidden, delta }
    }

    pub fn hidden(&self) -> &TemporalGraph {
        &self.hidden
    }
}

impl Adversary for Honest {
    fn name(&self) -> &str {
        "honest"
    }

    fn begin(&mut self, config: &GameConfig) -> Result<Disclosure> {
        if config.node_count != self.hidden.node_count() || config.lifetime != self.hidden.lifetime() {
            return Err(Error::InvalidParameter(
                "game config does not match the hidden graph".into(),
            ));
        }
        self.delta = config.delta;
        Ok(Disclosure::of(&self.hidden, config.knowledge))
    }

    fn respond(&mut self, seeds: &SeedSet) -> Result<InfectionLog> {
        honest_log(&self.hidden, seeds, self.delta)
    }

    fn final_graph(&mut self, _answer: &Answer) -> Result<TemporalGraph> {
        Ok(self.hidden.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    Honest,
    Thm52,
    UnknownStatic,
    Multilabel,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 4] = [
        AdversaryKind::Honest,
        AdversaryKind::Thm52,
        AdversaryKind::UnknownStatic,
        AdversaryKind::Multilabel,
    ];

    /// Builds the adversary for a game on `graph`'s parameters. The honest
    /// adversary hides `graph` itself; lazy adversaries take only its node
    /// count, lifetime and edge count.
    pub fn build(
        self,
        graph: &TemporalGraph,
        delta: Time,
        k: usize,
    ) -> Result<(Box<dyn Adversary + Send>, Option<LazyInstance>)> {
        let (n, t, m) = (graph.node_count(), graph.lifetime(), graph.edge_count());
        Ok(match self {
            AdversaryKind::Honest => (Box::new(Honest::new(graph.clone(), delta)), None),
            AdversaryKind::Thm52 => wrap(lazy_adversary_thm52(n, t, delta, k)?),
            AdversaryKind::UnknownStatic => wrap(lazy_adversary_unknown_static(n, m, t, delta, k)?),
            AdversaryKind::Multilabel => wrap(lazy_adversary_multilabel(n, m, t, delta, k)?),
        })
    }
}

fn wrap((adv, meta): (LazyAdversary, LazyInstance)) -> (Box<dyn Adversary + Send>, Option<LazyInstance>) {
    (Box::new(adv), Some(meta))
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdversaryKind::Honest => "honest",
            AdversaryKind::Thm52 => "thm52",
            AdversaryKind::UnknownStatic => "unknown-static",
            AdversaryKind::Multilabel => "multilabel",
        })
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "adversary must be honest, thm52, unknown-static or multilabel, got `{s}`"
                ))
            })
    }
}
