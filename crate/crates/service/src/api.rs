//! Request handlers and their JSON shapes.

use std::sync::Arc;
use std::time::Instant;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use loony::model::parse;
use loony::report::{self, Analysis, AnalyzeError, ClosedForm};
use loony::session::{Advice, SessionError};
use loony::{Choice, Component, Endgame, ModelError, Player, SessionState};
use serde::{Deserialize, Serialize};

use crate::AppState;

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub detail: String,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, detail: impl ToString) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error,
                detail: detail.to_string(),
            },
        }
    }

    fn bad_request(detail: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", detail)
    }

    fn invalid_position(e: ModelError) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_position", e)
    }

    fn not_found(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("no session {id}"),
        )
    }

    fn conflict(detail: impl ToString) -> Self {
        Self::new(StatusCode::CONFLICT, "illegal_action", detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl From<AnalyzeError> for ApiError {
    fn from(e: AnalyzeError) -> Self {
        match e {
            AnalyzeError::TooLargeForOracle { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "too_large_for_oracle", e)
            }
            AnalyzeError::Solve(e) => ApiError::bad_request(e),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError::conflict(e)
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Deserialize)]
pub struct AnalyzeRequest {
    pub position: String,
}

pub async fn analyze(
    State(app): State<Arc<AppState>>,
    body: Result<Json<AnalyzeRequest>, JsonRejection>,
) -> ApiResult<Analysis> {
    let Json(req) = body?;
    let g = parse(&req.position).map_err(ApiError::invalid_position)?;
    Ok(Json(report::analyze_with(&ClosedForm, &g, app.oracle_cap)?))
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub position: String,
    #[serde(default = "first_player")]
    pub opener: Player,
}

fn first_player() -> Player {
    Player::A
}

#[derive(Debug, Deserialize)]
pub struct OpenRequest {
    pub component: String,
}

#[derive(Debug, Deserialize)]
pub struct DecideRequest {
    pub choice: Choice,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: String,
    #[serde(flatten)]
    pub state: SessionState,
    pub terminal: bool,
    /// Advice for `toAct`; absent once the game is over.
    pub advice: Option<Advice>,
}

fn view(id: &str, state: &SessionState) -> Result<SessionView, ApiError> {
    let advice = if state.is_terminal() {
        None
    } else {
        Some(state.advise()?)
    };
    Ok(SessionView {
        id: id.to_string(),
        state: state.clone(),
        terminal: state.is_terminal(),
        advice,
    })
}

/// Parses a component reference: a grammar token such as `3` or `6L`,
/// optionally followed by `#k` to name the k-th copy (1-based).
pub fn parse_component_ref(text: &str, g: &Endgame) -> Result<Component, ApiError> {
    let (token, index) = match text.split_once('#') {
        Some((t, i)) => {
            let i: u64 = i
                .trim()
                .parse()
                .map_err(|_| ApiError::bad_request(format!("bad copy index in {text:?}")))?;
            (t, i)
        }
        None => (text, 1),
    };
    let c: Component = token.trim().parse().map_err(ApiError::invalid_position)?;
    let copies = g.multiplicity(c);
    if copies == 0 {
        return Err(ApiError::conflict(format!(
            "no {c} in the remaining position"
        )));
    }
    if index == 0 || index > copies {
        return Err(ApiError::conflict(format!(
            "{c}#{index}: only {copies} cop(ies) remain"
        )));
    }
    Ok(c)
}

pub async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    let g = parse(&req.position).map_err(ApiError::invalid_position)?;
    if !g.is_simple() && g.total_boxes() > app.oracle_cap {
        return Err(AnalyzeError::TooLargeForOracle {
            boxes: g.total_boxes(),
            cap: app.oracle_cap,
        }
        .into());
    }
    let state = SessionState::new(g, req.opener);
    let v = view("", &state)?;
    let id = app.sessions.insert(state);
    Ok((StatusCode::CREATED, Json(SessionView { id, ..v })))
}

pub async fn get_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<SessionView> {
    let slot = app
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let mut entry = slot.lock().await;
    entry.touched = Instant::now();
    Ok(Json(view(&id, &entry.state)?))
}

pub async fn open(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<OpenRequest>, JsonRejection>,
) -> ApiResult<SessionView> {
    let slot = app
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let Json(req) = body?;
    let mut entry = slot.lock().await;
    entry.touched = Instant::now();
    let c = parse_component_ref(&req.component, &entry.state.remaining)?;
    let next = entry.state.apply_open(c)?;
    let v = view(&id, &next)?;
    entry.state = next;
    Ok(Json(v))
}

pub async fn decide(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<DecideRequest>, JsonRejection>,
) -> ApiResult<SessionView> {
    let slot = app
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let Json(req) = body?;
    let mut entry = slot.lock().await;
    entry.touched = Instant::now();
    let next = entry.state.apply_decision(req.choice)?;
    let v = view(&id, &next)?;
    entry.state = next;
    Ok(Json(v))
}

pub async fn schema() -> impl IntoResponse {
    (
        [(axum::http::header::CONTENT_TYPE, "application/schema+json")],
        crate::SCHEMA,
    )
}
