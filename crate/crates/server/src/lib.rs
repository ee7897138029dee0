//! HTTP sessions for playing the leading-digit game against a seeded dealer.
//!
//! Each round is commit-reveal: `rounds/open` draws the dealer's number and
//! returns `sha256(number ‖ nonce)`; `rounds/play` takes the player's number,
//! settles the round and reveals the number and nonce so the client can
//! recompute the digest.
//!
//! | method | path                          | success                    |
//! |--------|-------------------------------|----------------------------|
//! | POST   | `/sessions`                   | 201 `{session_id, seed}`   |
//! | POST   | `/sessions/{id}/rounds/open`  | 200 `{commitment_digest}`  |
//! | POST   | `/sessions/{id}/rounds/play`  | 200 settled round          |
//! | GET    | `/sessions/{id}/stats`        | 200 stats and history      |
//! | GET    | `/config`                     | 200 capabilities           |

mod error;
mod session;
pub mod snapshot;

use std::collections::HashMap;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use mulgame::decimal::MAX_INPUT_DIGITS;
use mulgame::simulator::DEFAULT_RESOLUTION;
use mulgame::strategy::GENERATOR;
use mulgame::Mantissa;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use session::{commitment_digest, RoundView, Session, SessionConfig, StatsView};

type Shared = Arc<Mutex<Session>>;

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    snapshot_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(snapshot_dir: Option<PathBuf>) -> Self {
        let state = AppState { sessions: Arc::default(), snapshot_dir };
        if let Some(dir) = &state.snapshot_dir {
            let mut map = state.sessions.write().expect("fresh lock");
            for s in snapshot::load_all(dir) {
                map.insert(s.id.clone(), Arc::new(Mutex::new(s)));
            }
        }
        state
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().map(|m| m.len()).unwrap_or(0)
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        let map = self.sessions.read().map_err(ApiError::internal)?;
        map.get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn persist(&self, f: impl FnOnce(&std::path::Path) -> std::io::Result<()>) {
        if let Some(dir) = &self.snapshot_dir {
            if let Err(e) = f(dir) {
                eprintln!("snapshot write failed: {e}");
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServerOptions {
    pub addr: Option<IpAddr>,
    pub port: u16,
    /// Origins allowed by CORS; `*` allows any.
    pub allow_origin: Vec<String>,
    pub static_dir: Option<PathBuf>,
    pub snapshot_dir: Option<PathBuf>,
}

/// All routes, plus CORS and the static-file fallback from `opts`.
pub fn router(state: AppState, opts: &ServerOptions) -> Router {
    let mut app = Router::new()
        .route("/config", get(config))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/rounds/open", post(open_round))
        .route("/sessions/{id}/rounds/play", post(play_round))
        .route("/sessions/{id}/stats", get(stats))
        .with_state(state);
    if let Some(dir) = &opts.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if !opts.allow_origin.is_empty() {
        let origin = if opts.allow_origin.iter().any(|o| o == "*") {
            AllowOrigin::any()
        } else {
            AllowOrigin::list(opts.allow_origin.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
        };
        app = app.layer(
            CorsLayer::new()
                .allow_origin(origin)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([axum::http::header::CONTENT_TYPE]),
        );
    }
    app
}

/// Binds and serves until Ctrl-C.
pub async fn serve(opts: ServerOptions) -> std::io::Result<()> {
    let state = AppState::new(opts.snapshot_dir.clone());
    let addr = SocketAddr::new(opts.addr.unwrap_or(IpAddr::from([127, 0, 0, 1])), opts.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{} ({} restored sessions)", listener.local_addr()?, state.session_count());
    axum::serve(listener, router(state, &opts))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn config() -> Json<Value> {
    Json(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "commitment": {
            "hash": "sha256",
            "input": "canonical dealer number followed by the hex nonce",
            "nonce_bits": 128,
        },
        "generator": GENERATOR,
        "dealer_resolution_digits": DEFAULT_RESOLUTION,
        "max_input_digits": MAX_INPUT_DIGITS,
        "strategies": ["pure", "discrete", "benford", "uniform_log", "uniform_mantissa", "uniform_digits", "beta_n"],
        "winning_set_forms": [{"digits": [1, 2, 3]}, {"domain": "mantissa", "parts": [[1.0, 4.0]]}],
        "defaults": {
            "payout": {"stake": 100.0, "win_return": 140.0},
            "dealer": {"type": "benford"},
            "winning_set": {"digits": [1, 2, 3]},
        },
    }))
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let cfg: SessionConfig = serde_json::from_slice(&body).map_err(ApiError::invalid_spec)?;
    let session = Session::new(session::random_hex(16), cfg)?;
    let reply = json!({"session_id": session.id, "seed": session.seed()});
    state.persist(|dir| snapshot::created(dir, &session));
    let id = session.id.clone();
    state.sessions.write().map_err(ApiError::internal)?.insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(reply)))
}

async fn open_round(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let shared = state.get(&id)?;
    let mut s = shared.lock().map_err(ApiError::internal)?;
    let digest = s.open()?;
    Ok(Json(json!({"commitment_digest": digest})))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberInput {
    Text(String),
    Number(f64),
}

#[derive(Deserialize)]
struct PlayRequest {
    player_number: NumberInput,
    #[serde(default)]
    digits: Option<u32>,
}

/// Strings are read exactly; JSON numbers by their shortest decimal. With
/// `digits`, the number must lie on that grid.
fn parse_player_number(req: &PlayRequest) -> Result<Mantissa, ApiError> {
    let m = match (&req.player_number, req.digits) {
        (NumberInput::Text(s), _) => s.trim().parse::<Mantissa>().map_err(ApiError::invalid_number)?,
        (NumberInput::Number(x), Some(d)) => Mantissa::from_f64_on_grid(*x, d).map_err(ApiError::invalid_number)?,
        (NumberInput::Number(x), None) => Mantissa::from_f64_shortest(*x).map_err(ApiError::invalid_number)?,
    };
    if let Some(d) = req.digits {
        if m.on_grid(d).is_none() {
            return Err(ApiError::invalid_number(format!("{m} has more than {d} significant digits")));
        }
    }
    Ok(m)
}

async fn play_round(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<RoundView>, ApiError> {
    let shared = state.get(&id)?;
    let value: Value = serde_json::from_slice(&body).map_err(ApiError::malformed)?;
    let req: PlayRequest = serde_json::from_value(value).map_err(ApiError::invalid_number)?;
    let mut s = shared.lock().map_err(ApiError::internal)?;
    if !s.has_open_round() {
        return Err(ApiError::conflict("no_open_round", "open a round before playing"));
    }
    let number = parse_player_number(&req)?;
    let round = s.play(number)?;
    state.persist(|dir| snapshot::settled(dir, &s, &round));
    Ok(Json(round))
}

async fn stats(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<StatsView>, ApiError> {
    let shared = state.get(&id)?;
    let s = shared.lock().map_err(ApiError::internal)?;
    Ok(Json(s.stats()))
}
