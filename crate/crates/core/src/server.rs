//! HTTP facade over one loaded drift network.
//!
//! | route | body | response |
//! |---|---|---|
//! | `GET /model` | | [`ModelDescriptor`] |
//! | `POST /whatif` | [`Assessment`] | [`WhatIfResult`] |
//! | `GET /sweep?mode=cumulative\|exclusive` | | [`SweepTable`] |
//! | `POST /rank` | [`Assessment`] | list of [`RankedAction`] |
//!
//! Failures are HTTP 400 with `{"error": ..., "detail": ...}`; unknown routes
//! are 404. The model is loaded once and never mutated.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::error::{Error, Result};
use crate::learning::{Granularity, NaiveBayesModel, OvercostBand};
use crate::maturity::{Assessment, Cell, DriftFactorSpec, DriftNetwork, FrameworkConfig};
use crate::simulation::{maturity_sweep, rank_actions, what_if, RankedAction, SweepMode, SweepTable, WhatIfResult};

pub const DEFAULT_PORT: u16 = 8348;

const SCHEMA: &str = include_str!("../schema/api.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellInfo {
    pub code: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuestionInfo {
    pub key: String,
    pub cell: String,
    pub domain: String,
    pub level: u8,
    pub text: String,
    /// Whether a maturity node for this question exists in the network.
    pub in_network: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameworkSummary {
    pub cells: Vec<CellInfo>,
    pub domains: Vec<String>,
    pub levels: u8,
    pub questions: Vec<QuestionInfo>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of each loaded file, keyed by role.
    pub files: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
}

impl Provenance {
    pub fn record_file(&mut self, role: &str, bytes: &[u8]) {
        self.files.insert(role.to_string(), hex::encode(Sha256::digest(bytes)));
    }

    pub fn record_model(&mut self, m: &NaiveBayesModel) {
        self.alpha = Some(m.alpha);
        self.granularity = Some(m.granularity);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub framework: FrameworkSummary,
    pub drift_factors: Vec<DriftFactorSpec>,
    pub bands: Vec<String>,
    pub provenance: Provenance,
    pub schema: serde_json::Value,
}

/// Immutable state shared by all requests.
pub struct AppState {
    pub network: DriftNetwork,
    pub config: FrameworkConfig,
    pub descriptor: ModelDescriptor,
}

impl AppState {
    pub fn new(network: DriftNetwork, config: FrameworkConfig, provenance: Provenance) -> Result<Self> {
        for d in network.drift_ids() {
            if !config.drift_factors.iter().any(|s| &s.id == d) {
                return Err(Error::input(format!("network drift `{d}` is not in the framework catalogue")));
            }
        }
        let fw = &config.framework;
        let questions = fw
            .questions()
            .map(|q| {
                let key = q.key().to_string();
                QuestionInfo {
                    in_network: network.has_maturity_node(&key),
                    key,
                    cell: q.cell.code(),
                    domain: q.domain,
                    level: q.level,
                    text: q.text,
                }
            })
            .collect();
        let drift_factors = config
            .drift_factors
            .iter()
            .filter(|s| network.drift_ids().contains(&s.id))
            .cloned()
            .collect();
        let descriptor = ModelDescriptor {
            framework: FrameworkSummary {
                cells: Cell::all().map(|c| CellInfo { code: c.code(), label: c.label() }).collect(),
                domains: fw.domains().to_vec(),
                levels: fw.levels(),
                questions,
            },
            drift_factors,
            bands: OvercostBand::ALL.iter().map(|b| b.label().to_string()).collect(),
            provenance,
            schema: serde_json::from_str(SCHEMA).expect("bundled schema is JSON"),
        };
        Ok(AppState { network, config, descriptor })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
}

struct ApiError(StatusCode, ErrorBody);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::UnknownQuestion(_) => "unknown question",
            Error::ImpossibleEvidence => "impossible evidence",
            Error::Json(_) => "invalid json",
            _ => "invalid request",
        };
        ApiError(StatusCode::BAD_REQUEST, ErrorBody { error: kind.to_string(), detail: e.to_string() })
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

type Shared = Arc<AppState>;

async fn get_model(State(s): State<Shared>) -> Json<ModelDescriptor> {
    Json(s.descriptor.clone())
}

async fn post_whatif(State(s): State<Shared>, body: Bytes) -> std::result::Result<Json<WhatIfResult>, ApiError> {
    let a: Assessment = serde_json::from_slice(&body).map_err(Error::from)?;
    let r = tokio::task::spawn_blocking(move || what_if(&s.network, &s.config.framework, &a))
        .await
        .expect("worker panicked")?;
    Ok(Json(r))
}

async fn post_rank(State(s): State<Shared>, body: Bytes) -> std::result::Result<Json<Vec<RankedAction>>, ApiError> {
    let a: Assessment = serde_json::from_slice(&body).map_err(Error::from)?;
    let r = tokio::task::spawn_blocking(move || rank_actions(&s.network, &s.config.framework, &a))
        .await
        .expect("worker panicked")?;
    Ok(Json(r))
}

#[derive(Deserialize)]
struct SweepQuery {
    mode: Option<String>,
}

async fn get_sweep(State(s): State<Shared>, Query(q): Query<SweepQuery>) -> std::result::Result<Json<SweepTable>, ApiError> {
    let mode: SweepMode = q.mode.as_deref().unwrap_or("cumulative").parse()?;
    let r = tokio::task::spawn_blocking(move || maturity_sweep(&s.network, mode))
        .await
        .expect("worker panicked")?;
    Ok(Json(r))
}

async fn not_found() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, ErrorBody { error: "not found".into(), detail: "no such route".into() })
}

/// Routes over `state`. `cors_origins` lists origins allowed to call the API
/// from a browser; `*` allows any.
pub fn router(state: AppState, cors_origins: &[String]) -> Router {
    let mut app = Router::new()
        .route("/model", get(get_model))
        .route("/whatif", post(post_whatif))
        .route("/sweep", get(get_sweep))
        .route("/rank", post(post_rank))
        .fallback(not_found)
        .with_state(Arc::new(state));
    if !cors_origins.is_empty() {
        let allow = if cors_origins.iter().any(|o| o == "*") {
            AllowOrigin::any()
        } else {
            AllowOrigin::list(cors_origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
        };
        app = app.layer(
            CorsLayer::new()
                .allow_origin(allow)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([axum::http::header::CONTENT_TYPE]),
        );
    }
    app
}

/// Binds `addr` and serves until the process is interrupted.
pub async fn serve(state: AppState, addr: SocketAddr, cors_origins: &[String]) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(format!("bind {addr}"), e))?;
    log::info!("listening on {}", listener.local_addr().map_err(|e| Error::io("listener", e))?);
    axum::serve(listener, router(state, cors_origins))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io("serve", e))
}
