//! Running DiscoveryFollow over a parameter grid.

use std::io::{Read, Write};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tracing::warn;

use crate::adversaries::Honest;
use crate::discoverers::DiscoveryFollow;
use crate::error::{Error, Result};
use crate::game::{play, Discoverer, GameConfig, Winner};
use crate::generators::{generate_ert, ErtParams};
use crate::temporal_graph::{delta_ecc, TemporalGraph, Time};

use super::config::SweepConfig;

/// One game of DiscoveryFollow against the honest adversary. Field order
/// is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub p: f64,
    #[serde(rename = "Tmax")]
    pub lifetime: Time,
    pub delta: Time,
    pub m: usize,
    pub rounds_total: usize,
    pub rounds_discovery: usize,
    pub rounds_exploration: usize,
    pub rounds_skipped: usize,
    pub decc_count: usize,
    pub decc_mean_size: f64,
    pub won: bool,
    /// Seconds; 0 unless timing was requested.
    pub wall_time: f64,
}

pub const CSV_HEADER: &str = "n,p,Tmax,delta,m,rounds_total,rounds_discovery,rounds_exploration,rounds_skipped,decc_count,decc_mean_size,won,wall_time";

impl RunRecord {
    /// Share of rounds spent sweeping for new components.
    pub fn discovery_fraction(&self) -> Option<f64> {
        (self.rounds_total > 0).then(|| self.rounds_discovery as f64 / self.rounds_total as f64)
    }
}

/// A single grid point with its derived graph seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepTask {
    pub n: usize,
    pub p: f64,
    pub lifetime: Time,
    pub delta: Time,
    pub rng_seed: u64,
}

/// Expands the grid in order n, p, ratio, delta, repetition.
pub fn sweep_tasks(config: &SweepConfig) -> Result<Vec<SweepTask>> {
    config.validate()?;
    let mut tasks = Vec::new();
    let mut seeds = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for &n in &config.nodes {
        if n < 2 {
            warn!(n, "skipping grid point without possible edges");
            continue;
        }
        for &p in &config.p {
            for &ratio in &config.ratios {
                let lifetime = (ratio * n as f64).round();
                if lifetime < 1.0 {
                    warn!(n, ratio, "skipping grid point with Tmax < 1");
                    continue;
                }
                let lifetime = lifetime as Time;
                for delta in config.delta.deltas(lifetime) {
                    for _ in 0..config.repetitions {
                        tasks.push(SweepTask {
                            n,
                            p,
                            lifetime,
                            delta,
                            rng_seed: seeds.random(),
                        });
                    }
                }
            }
        }
    }
    Ok(tasks)
}

/// Plays DiscoveryFollow against the honest adversary hiding `graph`.
pub fn run_game(graph: &TemporalGraph, p: f64, delta: Time, skip_redundant: bool, timing: bool) -> Result<RunRecord> {
    let start = Instant::now();
    let mut discoverer = DiscoveryFollow::new(skip_redundant);
    let config = GameConfig::for_graph(graph, delta);
    let (outcome, _) = play(config, &mut discoverer, Box::new(Honest::new(graph.clone(), delta)))?;
    let wall_time = if timing { start.elapsed().as_secs_f64() } else { 0.0 };
    let phases = discoverer.phases().unwrap_or_default();
    let decc = delta_ecc(graph, delta);
    Ok(RunRecord {
        n: graph.node_count(),
        p,
        lifetime: graph.lifetime(),
        delta,
        m: graph.edge_count(),
        rounds_total: outcome.rounds_used,
        rounds_discovery: phases.discovery,
        rounds_exploration: phases.exploration,
        rounds_skipped: phases.skipped_redundant,
        decc_count: decc.component_count(),
        decc_mean_size: decc.mean_size(),
        won: outcome.winner == Winner::Discoverer,
        wall_time,
    })
}

pub fn run_task(task: &SweepTask, skip_redundant: bool, timing: bool) -> Result<RunRecord> {
    let graph = generate_ert(ErtParams {
        n: task.n,
        p: task.p,
        lifetime: task.lifetime,
        rng_seed: task.rng_seed,
    })?;
    run_game(&graph, task.p, task.delta, skip_redundant, timing)
}

/// Runs the whole grid on the rayon pool. Records come back in grid
/// order whatever the scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<RunRecord>> {
    let tasks = sweep_tasks(config)?;
    tasks
        .par_iter()
        .map(|t| run_task(t, config.skip_redundant, config.timing))
        .collect()
}

/// Runs every graph at every delta of `deltas`. `p` is the static density.
pub fn run_on_graphs(
    graphs: &[TemporalGraph],
    deltas: &dyn Fn(Time) -> Vec<Time>,
    skip_redundant: bool,
) -> Result<Vec<RunRecord>> {
    let jobs: Vec<(&TemporalGraph, Time)> = graphs
        .iter()
        .flat_map(|g| deltas(g.lifetime()).into_iter().map(move |d| (g, d)))
        .collect();
    jobs.par_iter()
        .map(|&(g, d)| {
            let n = g.node_count();
            let pairs = n * n.saturating_sub(1) / 2;
            let density = if pairs == 0 {
                0.0
            } else {
                g.static_pairs().len() as f64 / pairs as f64
            };
            run_game(g, density, d, skip_redundant, false)
        })
        .collect()
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[RunRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Reads records, rejecting files whose header differs from the schema.
pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{CSV_HEADER}`"),
        });
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}
