//! The discovery service: axum routes over the core library. CPU-bound
//! work runs on the blocking pool; interactive games live in an in-memory
//! session table.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use tokio::net::TcpListener;
use tracing::info;

use tgd_api::*;
use tgd_core::adversaries::potential::{per_edge_schedule, potential};
use tgd_core::adversaries::{witness_verify, AdversaryKind, LazyInstance};
use tgd_core::datasets::ingest_str;
use tgd_core::experiments::{analyze, read_records, records_to_csv, run_sweep};
use tgd_core::game::{play, GameConfig, GameHandle, RoundOracle};
use tgd_core::generators::{build_omega_m_family, build_thm52_family, generate_ert, ErtParams};
use tgd_core::infection::{simulate, verify_log_consistency, TiePolicy};
use tgd_core::temporal_graph::delta_ecc;
use tgd_core::{Error, TemporalGraph, Variant};

struct Session {
    handle: GameHandle,
}

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<u64, Arc<Mutex<Option<Session>>>>>,
    next_id: AtomicU64,
}

type Shared = Arc<AppState>;

/// Error response: a status and a JSON `{"error": ...}` body.
#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) | Error::InconsistentFeedback(_) | Error::AdversaryInconsistent { .. } => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            Error::RoundBudgetExhausted(_) => StatusCode::CONFLICT,
            Error::Unsupported(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> std::result::Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map(Json),
        Err(e) => Err(ApiError(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("worker failed: {e}"),
        )),
    }
}

pub fn router() -> Router {
    router_with(Arc::new(AppState::default()))
}

pub fn router_with(state: Shared) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/graphs/generate", post(generate))
        .route("/simulate", post(simulate_round))
        .route("/delta-ecc", post(components))
        .route("/verify-log", post(verify_log))
        .route("/play", post(play_game))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", delete(drop_session))
        .route("/sessions/{id}/rounds", post(session_round))
        .route("/sessions/{id}/answer", post(session_answer))
        .route("/sweep", post(sweep))
        .route("/analyze", post(analyze_csv))
        .route("/ingest", post(ingest))
        .route("/witness", post(witness))
        .with_state(state)
}

/// Serves until the process ends.
pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router()).await
}

/// A server on its own runtime thread, for callers without one.
pub struct Embedded {
    pub addr: SocketAddr,
}

impl Embedded {
    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

/// Starts a server on `127.0.0.1` at an ephemeral port in a background
/// thread. The server lives as long as the process.
pub fn spawn_embedded() -> std::io::Result<Embedded> {
    let std_listener = std::net::TcpListener::bind("127.0.0.1:0")?;
    std_listener.set_nonblocking(true)?;
    let addr = std_listener.local_addr()?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(1)
        .enable_all()
        .build()?;
    std::thread::Builder::new().name("tgd-embedded".into()).spawn(move || {
        runtime.block_on(async move {
            let listener = TcpListener::from_std(std_listener).expect("listener is non-blocking");
            if let Err(e) = axum::serve(listener, router()).await {
                tracing::error!("embedded server stopped: {e}");
            }
        })
    })?;
    Ok(Embedded { addr })
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

async fn generate(Json(req): Json<GenerateRequest>) -> ApiResult<GraphResponse> {
    blocking(move || {
        Ok(match req {
            GenerateRequest::Ert {
                n,
                p,
                lifetime,
                rng_seed,
            } => GraphResponse {
                graph: generate_ert(ErtParams {
                    n,
                    p,
                    lifetime,
                    rng_seed,
                })?,
                delta: None,
            },
            GenerateRequest::Thm52 { n, lifetime, labels } => {
                let family = build_thm52_family(n, lifetime)?;
                let labels = labels.unwrap_or_else(|| vec![1; family.free.len()]);
                GraphResponse {
                    graph: family.complete(&labels)?,
                    delta: None,
                }
            }
            GenerateRequest::Omega { x } => {
                let family = build_omega_m_family(x)?;
                GraphResponse {
                    graph: family.graph,
                    delta: Some(family.delta),
                }
            }
        })
    })
    .await
}

async fn simulate_round(Json(req): Json<SimulateRequest>) -> ApiResult<SimulateResponse> {
    blocking(move || {
        let (log, timetable) = simulate(
            &req.graph,
            &req.seeds,
            req.delta,
            req.policy.unwrap_or(TiePolicy::LowestId),
        )?;
        Ok(SimulateResponse { log, timetable })
    })
    .await
}

async fn components(Json(req): Json<DeltaEccRequest>) -> ApiResult<DeltaEccResponse> {
    if req.delta == 0 {
        return Err(Error::InvalidParameter("delta must be at least 1".into()).into());
    }
    blocking(move || {
        let partition = delta_ecc(&req.graph, req.delta);
        Ok(DeltaEccResponse {
            component_count: partition.component_count(),
            mean_size: partition.mean_size(),
            partition,
        })
    })
    .await
}

async fn verify_log(Json(req): Json<VerifyLogRequest>) -> ApiResult<VerifyLogResponse> {
    blocking(move || {
        Ok(VerifyLogResponse {
            consistent: verify_log_consistency(&req.graph, &req.seeds, &req.log, req.delta),
        })
    })
    .await
}

fn game_config(graph: &TemporalGraph, settings: &GameSettings) -> GameConfig {
    let variant = match settings.adversary {
        AdversaryKind::Honest => graph.variant(),
        AdversaryKind::Multilabel => Variant::Multilabel,
        AdversaryKind::Thm52 | AdversaryKind::UnknownStatic => Variant::Simple,
    };
    GameConfig {
        variant,
        round_budget: settings.round_budget,
        ..GameConfig::for_graph(graph, settings.delta)
            .with_k(settings.k)
            .with_feedback(settings.feedback)
            .with_knowledge(settings.knowledge)
            .with_goal(settings.goal)
    }
}

async fn play_game(Json(req): Json<PlayRequest>) -> ApiResult<PlayResponse> {
    blocking(move || {
        let config = game_config(&req.graph, &req.settings);
        let (adversary, lazy) = req
            .settings
            .adversary
            .build(&req.graph, req.settings.delta, req.settings.k)?;
        let adversary_name = adversary.name().to_string();
        let mut discoverer = req.discoverer.build();
        let (outcome, transcript) = play(config, discoverer.as_mut(), adversary)?;
        let potential = if req.potential {
            potential(&outcome.adversary_graph, &transcript, req.settings.delta).ok()
        } else {
            None
        };
        Ok(PlayResponse {
            discoverer: discoverer.name().to_string(),
            adversary: adversary_name,
            winner: outcome.winner,
            rounds_used: outcome.rounds_used,
            answer: outcome.answer,
            adversary_graph: outcome.adversary_graph,
            phases: discoverer.phases(),
            lazy,
            potential,
        })
    })
    .await
}

fn session(state: &AppState, id: u64) -> std::result::Result<Arc<Mutex<Option<Session>>>, ApiError> {
    state
        .sessions
        .lock()
        .expect("session table lock")
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session {id}")))
}

async fn create_session(
    State(state): State<Shared>,
    Json(req): Json<CreateSessionRequest>,
) -> ApiResult<SessionCreated> {
    blocking(move || {
        let config = game_config(&req.graph, &req.settings);
        let (adversary, lazy): (_, Option<LazyInstance>) =
            req.settings
                .adversary
                .build(&req.graph, req.settings.delta, req.settings.k)?;
        let handle = GameHandle::start(config, adversary)?;
        let id = state.next_id.fetch_add(1, Ordering::Relaxed) + 1;
        let created = SessionCreated {
            session: id,
            config: handle.config().clone(),
            disclosure: handle.disclosure().clone(),
            lazy,
        };
        state
            .sessions
            .lock()
            .expect("session table lock")
            .insert(id, Arc::new(Mutex::new(Some(Session { handle }))));
        Ok(created)
    })
    .await
}

async fn session_round(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    Json(req): Json<RoundRequest>,
) -> ApiResult<RoundResponse> {
    let entry = session(&state, id)?;
    blocking(move || {
        let mut guard = entry.lock().expect("session lock");
        let s = guard
            .as_mut()
            .ok_or_else(|| ApiError(StatusCode::GONE, format!("session {id} has ended")))?;
        let payload = s.handle.round(req.seeds)?;
        Ok(RoundResponse {
            payload,
            rounds_used: s.handle.rounds_used(),
        })
    })
    .await
}

async fn session_answer(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    Json(req): Json<AnswerRequest>,
) -> ApiResult<AnswerResponse> {
    let entry = session(&state, id)?;
    let response = blocking(move || {
        let s = entry
            .lock()
            .expect("session lock")
            .take()
            .ok_or_else(|| ApiError(StatusCode::GONE, format!("session {id} has ended")))?;
        let (outcome, _) = s.handle.finish(req.answer)?;
        Ok(AnswerResponse {
            winner: outcome.winner,
            rounds_used: outcome.rounds_used,
            adversary_graph: outcome.adversary_graph,
        })
    })
    .await;
    state.sessions.lock().expect("session table lock").remove(&id);
    response
}

async fn drop_session(State(state): State<Shared>, Path(id): Path<u64>) -> StatusCode {
    match state.sessions.lock().expect("session table lock").remove(&id) {
        Some(_) => StatusCode::NO_CONTENT,
        None => StatusCode::NOT_FOUND,
    }
}

async fn sweep(Json(req): Json<SweepRequest>) -> ApiResult<SweepResponse> {
    blocking(move || {
        let records = run_sweep(&req.config)?;
        let csv = records_to_csv(&records)?;
        Ok(SweepResponse { records, csv })
    })
    .await
}

async fn analyze_csv(Json(req): Json<AnalyzeRequest>) -> ApiResult<AnalyzeResponse> {
    blocking(move || {
        let records = read_records(req.csv.as_bytes())?;
        let report = analyze(&records);
        let text = report.to_text();
        Ok(AnalyzeResponse { report, text })
    })
    .await
}

async fn ingest(Json(req): Json<IngestRequest>) -> ApiResult<IngestResponse> {
    blocking(move || {
        Ok(IngestResponse {
            networks: ingest_str(&req.text, req.bucketing, req.reduction)?,
        })
    })
    .await
}

async fn witness(Json(req): Json<WitnessRequest>) -> ApiResult<WitnessResponse> {
    blocking(move || {
        let schedule = req.schedule.unwrap_or_else(|| per_edge_schedule(&req.graph));
        let witnessing = witness_verify(&req.graph, &schedule, req.delta)?;
        Ok(WitnessResponse { witnessing, schedule })
    })
    .await
}
