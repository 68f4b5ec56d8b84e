//! JSON-over-HTTP API for waveform editing and quick simulations.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::RwLock;

use crate::cli::error_json;
use crate::config::parse_json;
use crate::error::{Error, Result};
use crate::kick::{simulate_kick, WaveformDoc};
use crate::sim::{run_push, ScenarioConfig, ScenarioKind};

/// Every `n`-th simulation row is returned in the CoM trace.
const TRACE_STRIDE: usize = 10;

pub struct AppState {
    path: PathBuf,
    doc: RwLock<WaveformDoc>,
}

impl AppState {
    /// Loads the persisted document, or the default profile when the file does not exist.
    pub fn load(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let doc = match std::fs::read_to_string(&path) {
            Ok(text) => WaveformDoc::parse(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => WaveformDoc::default(),
            Err(e) => return Err(e.into()),
        };
        Ok(AppState {
            path,
            doc: RwLock::new(doc),
        })
    }
}

struct ApiError(StatusCode, Error);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(error_json(&self.1))).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Aborted(_) | Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e)
    }
}

type ApiResult = std::result::Result<Json<Value>, ApiError>;

fn versioned<T: serde::Serialize>(body: &T) -> Result<Value> {
    let mut v = serde_json::to_value(body)?;
    if let Value::Object(map) = &mut v {
        map.insert("v".into(), json!(1));
    }
    Ok(v)
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/waveforms", get(get_waveforms).put(put_waveforms))
        .route("/api/kick/simulate", post(kick_simulate))
        .route("/api/push/simulate", post(push_simulate))
        .with_state(state)
}

pub async fn serve(port: u16, waveforms: PathBuf) -> Result<()> {
    let state = Arc::new(AppState::load(waveforms)?);
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}

async fn health() -> Json<Value> {
    Json(json!({ "ok": true, "v": 1 }))
}

async fn get_waveforms(State(s): State<Arc<AppState>>) -> ApiResult {
    let doc = s.doc.read().await;
    Ok(Json(versioned(&*doc)?))
}

fn persist(path: &Path, doc: &WaveformDoc) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(doc)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

async fn put_waveforms(State(s): State<Arc<AppState>>, body: String) -> ApiResult {
    let doc = WaveformDoc::parse(&body)?;
    let mut current = s.doc.write().await;
    persist(&s.path, &doc)?;
    *current = doc;
    Ok(Json(versioned(&*current)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KickRequest {
    strength: Option<f64>,
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &str) -> Result<T> {
    parse_json(if body.trim().is_empty() { "{}" } else { body })
}

async fn kick_simulate(State(s): State<Arc<AppState>>, body: String) -> ApiResult {
    let req: KickRequest = parse_body(&body)?;
    let mut profile = s.doc.read().await.profile();
    if let Some(st) = req.strength {
        if !(0.0..=1.0).contains(&st) {
            return Err(Error::config("/strength", "strength outside [0, 1]").into());
        }
        profile.strength = st;
    }
    let base = ScenarioConfig::new(ScenarioKind::Kick);
    let result = tokio::task::spawn_blocking(move || simulate_kick(&profile, &base.gait, &base.robot, &base.ball.model()))
        .await
        .map_err(|e| Error::Aborted(e.to_string()))?;
    Ok(Json(versioned(&result)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PushRequest {
    mass: f64,
    length: f64,
    distance: f64,
}

async fn push_simulate(body: String) -> ApiResult {
    let req: PushRequest = parse_body(&body)?;
    let mut cfg = ScenarioConfig::new(ScenarioKind::Push);
    cfg.pendulum.mass = req.mass;
    cfg.pendulum.cord_length = req.length;
    cfg.pendulum.retraction = req.distance;
    cfg.duration_s = 5.0;
    cfg.validate()?;
    let log = tokio::task::spawn_blocking(move || run_push(&cfg))
        .await
        .map_err(|e| Error::Aborted(e.to_string()))??;
    if log.summary.aborted {
        let reason = log.summary.reason.clone().unwrap_or_default();
        return Err(ApiError(StatusCode::INTERNAL_SERVER_ERROR, Error::Aborted(reason)));
    }
    let trace: Vec<Value> = log
        .rows
        .iter()
        .step_by(TRACE_STRIDE)
        .map(|r| json!({ "t": r.t, "x": r.c[0], "y": r.c[1] }))
        .collect();
    Ok(Json(json!({
        "v": 1,
        "deltaV": log.summary.delta_v.unwrap_or(0.0),
        "recovered": log.summary.recovered,
        "comTrace": trace,
    })))
}
