//! The potential: for every edge record, how many labels are still
//! consistent with the feedback when all other records keep their true
//! labels. A schedule whose feedback pins every label is witnessing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{honest_log, Payload, Round, Transcript};
use crate::infection::{infection_times, verify_log_consistency, SeedSet};
use crate::temporal_graph::{TemporalGraph, Time, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialTrace {
    /// `values[i]` is the potential after the first `i` rounds.
    pub values: Vec<usize>,
    /// Consistent label count per record after the last round.
    pub per_record: Vec<usize>,
}

impl PotentialTrace {
    pub fn initial(&self) -> usize {
        self.values[0]
    }

    pub fn last(&self) -> usize {
        *self.values.last().expect("trace has at least one value")
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Potential after every prefix of `transcript`.
pub fn potential(graph: &TemporalGraph, transcript: &Transcript, delta: Time) -> Result<PotentialTrace> {
    potential_of_rounds(graph, &transcript.rounds, delta)
}

pub fn potential_of_rounds(graph: &TemporalGraph, rounds: &[Round], delta: Time) -> Result<PotentialTrace> {
    if graph.variant() == Variant::Multilabel {
        return Err(Error::Unsupported(
            "the potential is defined for one label per record".into(),
        ));
    }
    let honest: Vec<Vec<Option<Time>>> = rounds
        .iter()
        .map(|r| infection_times(graph, &r.seeds, delta))
        .collect::<Result<_>>()?;
    for (i, (round, times)) in rounds.iter().zip(&honest).enumerate() {
        if !consistent(graph, round, times, delta) {
            return Err(Error::InconsistentFeedback(format!(
                "round {} does not match the graph",
                i + 1
            )));
        }
    }
    let a = rounds.len();
    // removed[i] counts (record, label) pairs first ruled out by round i
    let mut removed = vec![0usize; a + 1];
    let mut initial = 0usize;
    let mut per_record = Vec::with_capacity(graph.edge_count());
    for (r, e) in graph.edges().iter().enumerate() {
        let mut alive = 0;
        for l in 1..=graph.lifetime() {
            if l == e.labels[0] {
                initial += 1;
                alive += 1;
                continue;
            }
            let Ok(deviated) = graph.with_labels(r, vec![l]) else {
                continue;
            };
            initial += 1;
            let first_bad = rounds.iter().zip(&honest).position(|(round, times)| {
                (times[e.u].is_some() || times[e.v].is_some()) && !consistent(&deviated, round, times, delta)
            });
            match first_bad {
                Some(i) => removed[i + 1] += 1,
                None => alive += 1,
            }
        }
        per_record.push(alive);
    }
    let mut values = Vec::with_capacity(a + 1);
    let mut current = initial;
    for gone in removed {
        current -= gone;
        values.push(current);
    }
    Ok(PotentialTrace { values, per_record })
}

fn consistent(graph: &TemporalGraph, round: &Round, honest_times: &[Option<Time>], delta: Time) -> bool {
    match &round.payload {
        Payload::Log(log) => verify_log_consistency(graph, &round.seeds, log, delta),
        Payload::Times(table) => match infection_times(graph, &round.seeds, delta) {
            Ok(times) => times.len() == honest_times.len() && times.iter().enumerate().all(|(v, &t)| t == table.get(v)),
            Err(_) => false,
        },
    }
}

/// True iff the honest full logs of `schedule` leave exactly one label per
/// record.
pub fn witness_verify(graph: &TemporalGraph, schedule: &[SeedSet], delta: Time) -> Result<bool> {
    let rounds = schedule
        .iter()
        .map(|seeds| {
            Ok(Round {
                seeds: seeds.clone(),
                payload: Payload::Log(honest_log(graph, seeds, delta)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(potential_of_rounds(graph, &rounds, delta)?.last() == graph.edge_count())
}

/// Seeds each record's lower endpoint one step before its label.
pub fn per_edge_schedule(graph: &TemporalGraph) -> Vec<SeedSet> {
    graph
        .edges()
        .iter()
        .map(|e| SeedSet::single(e.u, e.labels[0] - 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_schedule() {
        let g = TemporalGraph::simple(3, 4, [(0, 1, 2), (1, 2, 3)]).unwrap();
        let trace = potential_of_rounds(&g, &[], 1).unwrap();
        assert_eq!(trace.values, vec![8]);
        assert!(!witness_verify(&g, &[], 1).unwrap());
        let single = TemporalGraph::simple(2, 1, [(0, 1, 1)]).unwrap();
        assert!(witness_verify(&single, &[], 1).unwrap());
    }

    #[test]
    fn per_edge_schedule_witnesses() {
        let g = TemporalGraph::simple(4, 5, [(0, 1, 2), (1, 2, 3), (2, 3, 5), (0, 3, 1)]).unwrap();
        let schedule = per_edge_schedule(&g);
        assert_eq!(schedule.len(), 4);
        assert!(witness_verify(&g, &schedule, 2).unwrap());
    }

    #[test]
    fn inconsistent_transcript_is_an_error() {
        let g = TemporalGraph::simple(2, 3, [(0, 1, 2)]).unwrap();
        let other = TemporalGraph::simple(2, 3, [(0, 1, 1)]).unwrap();
        let seeds = SeedSet::single(0, 0);
        let round = Round {
            seeds: seeds.clone(),
            payload: Payload::Log(honest_log(&other, &seeds, 1).unwrap()),
        };
        assert!(potential_of_rounds(&g, &[round], 1).is_err());
    }
}
