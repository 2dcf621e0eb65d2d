use std::sync::OnceLock;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::{json, Value};

use tgd_api::*;
use tgd_core::adversaries::AdversaryKind;
use tgd_core::discoverers::DiscovererKind;
use tgd_core::game::{Answer, Payload, Winner};
use tgd_core::infection::{Seed, SeedSet};
use tgd_core::TemporalGraph;

fn base() -> &'static str {
    static URL: OnceLock<String> = OnceLock::new();
    URL.get_or_init(|| tgd_service::spawn_embedded().unwrap().url())
}

fn post<T: serde::de::DeserializeOwned>(path: &str, body: &impl serde::Serialize) -> T {
    let resp = Client::new()
        .post(format!("{}{path}", base()))
        .json(body)
        .send()
        .unwrap();
    assert!(resp.status().is_success(), "{path}: {}", resp.text().unwrap());
    resp.json().unwrap()
}

fn small() -> TemporalGraph {
    TemporalGraph::simple(4, 3, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (0, 3, 2)]).unwrap()
}

#[test]
fn health() {
    let h: Health = Client::new()
        .get(format!("{}/health", base()))
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(h.status, "ok");
}

#[test]
fn simulate_and_verify() {
    let seeds: SeedSet = [Seed::new(0, 0)].into_iter().collect();
    let sim: SimulateResponse = post(
        "/simulate",
        &SimulateRequest {
            graph: small(),
            seeds: seeds.clone(),
            delta: 1,
            policy: None,
        },
    );
    assert_eq!(sim.timetable.get(1), Some(1));
    let v: VerifyLogResponse = post(
        "/verify-log",
        &VerifyLogRequest {
            graph: small(),
            seeds,
            log: sim.log,
            delta: 1,
        },
    );
    assert!(v.consistent);
}

#[test]
fn components_of_a_chain() {
    let r: DeltaEccResponse = post(
        "/delta-ecc",
        &DeltaEccRequest {
            graph: small(),
            delta: 1,
        },
    );
    assert!(r.component_count >= 1);
    let bad = Client::new()
        .post(format!("{}/delta-ecc", base()))
        .json(&DeltaEccRequest {
            graph: small(),
            delta: 0,
        })
        .send()
        .unwrap();
    assert_eq!(bad.status(), StatusCode::BAD_REQUEST);
    let body: ErrorBody = bad.json().unwrap();
    assert!(body.error.contains("delta"));
}

#[test]
fn generate_and_play() {
    let g: GraphResponse = post(
        "/graphs/generate",
        &json!({"family": "ert", "n": 12, "p": 0.3, "lifetime": 6, "rng_seed": 4}),
    );
    let mut req = PlayRequest {
        graph: g.graph.clone(),
        discoverer: DiscovererKind::DiscoveryFollow,
        settings: GameSettings::new(AdversaryKind::Honest, 2),
        potential: true,
    };
    let r: PlayResponse = post("/play", &req);
    assert_eq!(r.winner, Winner::Discoverer);
    assert_eq!(r.potential.unwrap().last(), g.graph.edge_count());
    assert!(r.phases.is_some());

    req.settings = GameSettings::new(AdversaryKind::Thm52, 1);
    req.discoverer = DiscovererKind::BruteForce;
    req.potential = false;
    let t: GraphResponse = post("/graphs/generate", &json!({"family": "thm52", "n": 8, "lifetime": 4}));
    req.graph = t.graph;
    let r: PlayResponse = post("/play", &req);
    assert_eq!(r.winner, Winner::Discoverer);
    assert!(r.lazy.is_some());
}

#[test]
fn session_lifecycle() {
    let created: SessionCreated = post(
        "/sessions",
        &CreateSessionRequest {
            graph: small(),
            settings: GameSettings::new(AdversaryKind::Honest, 1),
        },
    );
    let id = created.session;
    let round: RoundResponse = post(
        &format!("/sessions/{id}/rounds"),
        &RoundRequest {
            seeds: [Seed::new(0, 0)].into_iter().collect(),
        },
    );
    assert_eq!(round.rounds_used, 1);
    assert!(matches!(round.payload, Payload::Log(_)));
    let done: AnswerResponse = post(
        &format!("/sessions/{id}/answer"),
        &AnswerRequest {
            answer: Answer::Graph(small()),
        },
    );
    assert_eq!(done.winner, Winner::Discoverer);
    let gone = Client::new()
        .post(format!("{}/sessions/{id}/rounds", base()))
        .json(&json!({"seeds": []}))
        .send()
        .unwrap();
    assert_eq!(gone.status(), StatusCode::NOT_FOUND);
    let del = Client::new()
        .delete(format!("{}/sessions/{id}", base()))
        .send()
        .unwrap();
    assert_eq!(del.status(), StatusCode::NOT_FOUND);
}

#[test]
fn round_budget_is_a_conflict() {
    let mut settings = GameSettings::new(AdversaryKind::Honest, 1);
    settings.round_budget = Some(1);
    let created: SessionCreated = post(
        "/sessions",
        &CreateSessionRequest {
            graph: small(),
            settings,
        },
    );
    let url = format!("{}/sessions/{}/rounds", base(), created.session);
    let seeds = RoundRequest {
        seeds: [Seed::new(0, 0)].into_iter().collect(),
    };
    assert!(Client::new()
        .post(&url)
        .json(&seeds)
        .send()
        .unwrap()
        .status()
        .is_success());
    let second = Client::new().post(&url).json(&seeds).send().unwrap();
    assert_eq!(second.status(), StatusCode::CONFLICT);
}

#[test]
fn sweep_analyze_ingest_witness() {
    let config: tgd_core::experiments::SweepConfig =
        "nodes = 6, 10\np = 0.3, 0.6\nratios = 0.5, 1\ndelta = one\nrepetitions = 2\n"
            .parse()
            .unwrap();
    let s: SweepResponse = post("/sweep", &SweepRequest { config });
    assert_eq!(s.records.len(), 16);
    let a: AnalyzeResponse = post("/analyze", &AnalyzeRequest { csv: s.csv });
    assert_eq!(a.report.records, 16);
    assert!(!a.text.is_empty());

    let i: IngestResponse = post("/ingest", &json!({"text": "net,u,v,t\na,x,y,5\na,y,z,7\nb,1,2,3\n"}));
    assert_eq!(i.networks.len(), 2);

    let w: WitnessResponse = post("/witness", &json!({"graph": small(), "delta": 1}));
    assert!(w.witnessing);
    assert_eq!(w.schedule.len(), 4);
    let v: Value = serde_json::to_value(&w).unwrap();
    assert!(v["schedule"].is_array());
}
