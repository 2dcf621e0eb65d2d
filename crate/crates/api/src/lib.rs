//! JSON bodies exchanged with the discovery service. Graphs, seeds, logs
//! and reports reuse the core types and their serde forms.

use serde::{Deserialize, Serialize};
use tgd_core::adversaries::{AdversaryKind, LazyInstance, PotentialTrace};
use tgd_core::datasets::{Bucketing, IngestedNetwork, Reduction};
use tgd_core::discoverers::DiscovererKind;
use tgd_core::experiments::{AnalysisReport, RunRecord, SweepConfig};
use tgd_core::game::{Answer, Disclosure, Feedback, GameConfig, Goal, Knowledge, Payload, PhaseCounts, Winner};
use tgd_core::infection::{InfectionLog, InfectionTimetable, SeedSet, TiePolicy};
use tgd_core::temporal_graph::DeltaEccPartition;
use tgd_core::{TemporalGraph, Time};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenerateRequest {
    Ert {
        n: usize,
        p: f64,
        lifetime: Time,
        #[serde(default)]
        rng_seed: u64,
    },
    /// The lower-bound family; `labels` fill its open edges, all 1 when
    /// absent.
    Thm52 {
        n: usize,
        lifetime: Time,
        #[serde(default)]
        labels: Option<Vec<Time>>,
    },
    Omega {
        x: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphResponse {
    pub graph: TemporalGraph,
    /// The delta the family was built for, if it has one.
    pub delta: Option<Time>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRequest {
    pub graph: TemporalGraph,
    pub seeds: SeedSet,
    pub delta: Time,
    #[serde(default)]
    pub policy: Option<TiePolicy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResponse {
    pub log: InfectionLog,
    pub timetable: InfectionTimetable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEccRequest {
    pub graph: TemporalGraph,
    pub delta: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEccResponse {
    pub component_count: usize,
    pub mean_size: f64,
    pub partition: DeltaEccPartition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyLogRequest {
    pub graph: TemporalGraph,
    pub seeds: SeedSet,
    pub log: InfectionLog,
    pub delta: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyLogResponse {
    pub consistent: bool,
}

/// Game settings shared by one-shot games and sessions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSettings {
    pub adversary: AdversaryKind,
    pub delta: Time,
    #[serde(default = "one")]
    pub k: usize,
    #[serde(default)]
    pub feedback: Feedback,
    #[serde(default)]
    pub knowledge: Knowledge,
    #[serde(default)]
    pub goal: Goal,
    #[serde(default)]
    pub round_budget: Option<usize>,
}

fn one() -> usize {
    1
}

impl GameSettings {
    pub fn new(adversary: AdversaryKind, delta: Time) -> Self {
        Self {
            adversary,
            delta,
            k: 1,
            feedback: Feedback::FullLog,
            knowledge: Knowledge::StaticKnown,
            goal: Goal::FullDiscovery,
            round_budget: None,
        }
    }
}

/// A whole game played on the server. For lazy adversaries the graph only
/// supplies n, Tmax, m and the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayRequest {
    pub graph: TemporalGraph,
    pub discoverer: DiscovererKind,
    #[serde(flatten)]
    pub settings: GameSettings,
    /// Also compute the potential trace of the transcript.
    #[serde(default)]
    pub potential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayResponse {
    pub discoverer: String,
    pub adversary: String,
    pub winner: Winner,
    pub rounds_used: usize,
    pub answer: Answer,
    pub adversary_graph: TemporalGraph,
    pub phases: Option<PhaseCounts>,
    pub lazy: Option<LazyInstance>,
    /// Potential after every round, when requested and defined.
    pub potential: Option<PotentialTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSessionRequest {
    pub graph: TemporalGraph,
    #[serde(flatten)]
    pub settings: GameSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session: u64,
    pub config: GameConfig,
    pub disclosure: Disclosure,
    pub lazy: Option<LazyInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRequest {
    pub seeds: SeedSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundResponse {
    pub payload: Payload,
    pub rounds_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerRequest {
    pub answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerResponse {
    pub winner: Winner,
    pub rounds_used: usize,
    pub adversary_graph: TemporalGraph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub config: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResponse {
    pub records: Vec<RunRecord>,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeRequest {
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeResponse {
    pub report: AnalysisReport,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestRequest {
    /// File contents, `network_id u v timestamp` per line.
    pub text: String,
    #[serde(default)]
    pub bucketing: Bucketing,
    #[serde(default)]
    pub reduction: Reduction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestResponse {
    pub networks: Vec<IngestedNetwork>,
}

/// Checks a schedule against a graph. Without a schedule the per-edge
/// schedule is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRequest {
    pub graph: TemporalGraph,
    pub delta: Time,
    #[serde(default)]
    pub schedule: Option<Vec<SeedSet>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResponse {
    pub witnessing: bool,
    pub schedule: Vec<SeedSet>,
}
