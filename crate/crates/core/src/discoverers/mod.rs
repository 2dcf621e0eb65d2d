//! Discoverer strategies.

pub mod brute_force;
pub mod follow;
pub mod knowledge;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Answer, Discoverer, Goal, RoundOracle};
use crate::temporal_graph::{EdgeRecord, TemporalGraph, Variant};

pub use brute_force::{brute_force_rounds, BruteForce};
pub use follow::{DiscoveryFollow, Follow};
pub use knowledge::{KnowledgeState, PairKnowledge, PhaseCounts};

/// Answers at once without playing a round: every disclosed edge gets
/// label 1, and no ideal patient zero is claimed.
#[derive(Debug, Clone, Default)]
pub struct ImmediateGuess;

impl Discoverer for ImmediateGuess {
    fn name(&self) -> &str {
        "immediate"
    }

    fn play(&mut self, oracle: &mut dyn RoundOracle) -> Result<Answer> {
        let config = oracle.config().clone();
        if config.goal == Goal::Ipz {
            return Ok(Answer::Ipz(None));
        }
        let edges = oracle
            .disclosure()
            .static_edges
            .clone()
            .unwrap_or_default()
            .into_iter()
            .map(|(u, v)| EdgeRecord::single(u, v, 1));
        let edges: Vec<EdgeRecord> = match config.variant {
            // parallel records cannot share a label; keep one per pair
            Variant::Multiedge => {
                let mut e: Vec<EdgeRecord> = edges.collect();
                e.dedup();
                e
            }
            _ => edges.collect(),
        };
        let graph = TemporalGraph::new(config.node_count, config.lifetime, config.variant, edges)?;
        Ok(Answer::Graph(graph))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscovererKind {
    BruteForce,
    DiscoveryFollow,
    /// DiscoveryFollow that skips seeds at nodes whose pairs are all known.
    DiscoveryFollowSkip,
    Follow,
    Immediate,
}

impl DiscovererKind {
    pub const ALL: [DiscovererKind; 5] = [
        DiscovererKind::BruteForce,
        DiscovererKind::DiscoveryFollow,
        DiscovererKind::DiscoveryFollowSkip,
        DiscovererKind::Follow,
        DiscovererKind::Immediate,
    ];

    pub fn build(self) -> Box<dyn Discoverer + Send> {
        match self {
            DiscovererKind::BruteForce => Box::new(BruteForce),
            DiscovererKind::DiscoveryFollow => Box::new(DiscoveryFollow::new(false)),
            DiscovererKind::DiscoveryFollowSkip => Box::new(DiscoveryFollow::new(true)),
            DiscovererKind::Follow => Box::new(Follow::new()),
            DiscovererKind::Immediate => Box::new(ImmediateGuess),
        }
    }
}

impl fmt::Display for DiscovererKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiscovererKind::BruteForce => "brute-force",
            DiscovererKind::DiscoveryFollow => "discovery-follow",
            DiscovererKind::DiscoveryFollowSkip => "discovery-follow-skip",
            DiscovererKind::Follow => "follow",
            DiscovererKind::Immediate => "immediate",
        })
    }
}

impl FromStr for DiscovererKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiscovererKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "discoverer must be one of brute-force, discovery-follow, \
                     discovery-follow-skip, follow, immediate; got `{s}`"
                ))
            })
    }
}
