//! Blocking client for the discovery service. One method per endpoint,
//! plus [`RemoteSession`], which lets any local Discoverer play against a
//! server-side adversary.

use std::time::Duration;

use reqwest::blocking::{Client as Http, RequestBuilder};
use reqwest::StatusCode;
use serde::de::DeserializeOwned;
use serde::Serialize;

use tgd_api::*;
use tgd_core::experiments::SweepConfig;
use tgd_core::game::{Answer, Disclosure, GameConfig, Payload, RoundOracle};
use tgd_core::infection::SeedSet;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("server answered {status}: {message}")]
    Status { status: StatusCode, message: String },
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base_url: String,
    http: Http,
}

impl Client {
    pub fn new(base_url: impl Into<String>) -> Self {
        let http = Http::builder()
            .timeout(None::<Duration>)
            .build()
            .expect("http client configuration is static");
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            http,
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base_url)
    }

    fn send<T: DeserializeOwned>(&self, req: RequestBuilder) -> Result<T> {
        let resp = req.send()?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json()?);
        }
        let text = resp.text().unwrap_or_default();
        let message = serde_json::from_str::<ErrorBody>(&text)
            .map(|b| b.error)
            .unwrap_or(text);
        Err(ClientError::Status { status, message })
    }

    fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        self.send(self.http.post(self.url(path)).json(body))
    }

    pub fn health(&self) -> Result<Health> {
        self.send(self.http.get(self.url("/health")))
    }

    pub fn generate(&self, req: &GenerateRequest) -> Result<GraphResponse> {
        self.post("/graphs/generate", req)
    }

    pub fn simulate(&self, req: &SimulateRequest) -> Result<SimulateResponse> {
        self.post("/simulate", req)
    }

    pub fn delta_ecc(&self, req: &DeltaEccRequest) -> Result<DeltaEccResponse> {
        self.post("/delta-ecc", req)
    }

    pub fn verify_log(&self, req: &VerifyLogRequest) -> Result<VerifyLogResponse> {
        self.post("/verify-log", req)
    }

    pub fn play(&self, req: &PlayRequest) -> Result<PlayResponse> {
        self.post("/play", req)
    }

    pub fn sweep(&self, config: &SweepConfig) -> Result<SweepResponse> {
        self.post("/sweep", &SweepRequest { config: config.clone() })
    }

    pub fn analyze(&self, csv: &str) -> Result<AnalyzeResponse> {
        self.post("/analyze", &AnalyzeRequest { csv: csv.to_string() })
    }

    pub fn ingest(&self, req: &IngestRequest) -> Result<IngestResponse> {
        self.post("/ingest", req)
    }

    pub fn witness(&self, req: &WitnessRequest) -> Result<WitnessResponse> {
        self.post("/witness", req)
    }

    /// Opens an interactive game on the server.
    pub fn open_session(&self, req: &CreateSessionRequest) -> Result<RemoteSession> {
        let created: SessionCreated = self.post("/sessions", req)?;
        Ok(RemoteSession {
            client: self.clone(),
            created,
            rounds_used: 0,
        })
    }
}

/// A server-side game seen through [`RoundOracle`].
#[derive(Debug)]
pub struct RemoteSession {
    client: Client,
    created: SessionCreated,
    rounds_used: usize,
}

impl RemoteSession {
    pub fn id(&self) -> u64 {
        self.created.session
    }

    pub fn created(&self) -> &SessionCreated {
        &self.created
    }

    pub fn answer(self, answer: Answer) -> Result<AnswerResponse> {
        self.client
            .post(&format!("/sessions/{}/answer", self.id()), &AnswerRequest { answer })
    }

    /// Drops the game without answering.
    pub fn abandon(self) -> Result<()> {
        let resp = self
            .client
            .http
            .delete(self.client.url(&format!("/sessions/{}", self.id())))
            .send()?;
        match resp.status() {
            s if s.is_success() => Ok(()),
            status => Err(ClientError::Status {
                status,
                message: format!("could not drop session {}", self.id()),
            }),
        }
    }
}

impl RoundOracle for RemoteSession {
    fn config(&self) -> &GameConfig {
        &self.created.config
    }

    fn disclosure(&self) -> &Disclosure {
        &self.created.disclosure
    }

    fn round(&mut self, seeds: SeedSet) -> tgd_core::Result<Payload> {
        let path = format!("/sessions/{}/rounds", self.id());
        match self.client.post::<_, RoundResponse>(&path, &RoundRequest { seeds }) {
            Ok(r) => {
                self.rounds_used = r.rounds_used;
                Ok(r.payload)
            }
            Err(ClientError::Status {
                status: StatusCode::CONFLICT,
                ..
            }) => Err(tgd_core::Error::RoundBudgetExhausted(self.created.config.budget())),
            Err(ClientError::Status {
                status: StatusCode::BAD_REQUEST,
                message,
            }) => Err(tgd_core::Error::InvalidParameter(message)),
            Err(e) => Err(tgd_core::Error::Io(e.to_string())),
        }
    }

    fn rounds_used(&self) -> usize {
        self.rounds_used
    }
}
