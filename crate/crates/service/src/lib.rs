//! HTTP JSON service over the endgame solver and play sessions.
//!
//! | method | path                   | body                            |
//! |--------|------------------------|---------------------------------|
//! | POST   | `/analyze`             | `{"position": "2*3+4+6L"}`      |
//! | POST   | `/session`             | `{"position": ..., "opener": "A"}` |
//! | POST   | `/session/{id}/open`   | `{"component": "3#2"}`          |
//! | POST   | `/session/{id}/decide` | `{"choice": "KeepControl"}`     |
//! | GET    | `/session/{id}`        |                                 |
//! | GET    | `/schema`              |                                 |
//!
//! Errors are `{"error": ..., "detail": ...}` with status 400 (malformed
//! body or position), 404 (unknown session), 409 (action not legal now) or
//! 422 (odd loops beyond the exhaustive-search cap).

pub mod api;
pub mod store;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::http::HeaderValue;
use axum::routing::{get, post};
use axum::Router;
use loony::report::DEFAULT_ORACLE_CAP;
use tower_http::cors::{Any, CorsLayer};

pub use store::SessionStore;

/// JSON Schema for every response body.
pub const SCHEMA: &str = include_str!("../schema/api.json");

pub const CORS_ENV: &str = "ENDGAME_CORS_ORIGIN";

#[derive(Debug)]
pub struct AppState {
    pub sessions: SessionStore,
    pub oracle_cap: u128,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub oracle_cap: u128,
    pub ttl: Duration,
    /// Allowed browser origin; any origin when `None`.
    pub cors_origin: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            oracle_cap: DEFAULT_ORACLE_CAP,
            ttl: store::DEFAULT_TTL,
            cors_origin: None,
        }
    }
}

impl Config {
    pub fn from_env() -> Self {
        Config {
            cors_origin: std::env::var(CORS_ENV).ok(),
            ..Config::default()
        }
    }
}

fn cors(origin: Option<&str>) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    match origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => layer.allow_origin(o),
        None => layer.allow_origin(Any),
    }
}

pub fn router(config: &Config) -> Router {
    let state = Arc::new(AppState {
        sessions: SessionStore::new(config.ttl),
        oracle_cap: config.oracle_cap,
    });
    Router::new()
        .route("/analyze", post(api::analyze))
        .route("/session", post(api::create_session))
        .route("/session/{id}", get(api::get_session))
        .route("/session/{id}/open", post(api::open))
        .route("/session/{id}/decide", post(api::decide))
        .route("/schema", get(api::schema))
        .layer(cors(config.cors_origin.as_deref()))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: Config) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(&config)).await
}

/// Blocking entry point for the command line.
pub fn run(port: u16) -> std::io::Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    eprintln!("listening on http://{addr}");
    rt.block_on(serve(addr, Config::from_env()))
}
