//! Stateless JSON API over the value table.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use notakto::engine::{recommend, Advisor};
use notakto::position::Position;
use notakto::quotient::{position_value, ValueTable};
use notakto::{Move, Outcome};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionRequest {
    pub boards: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireMove {
    pub board: usize,
    pub cell: u8,
}

impl From<Move> for WireMove {
    fn from(m: Move) -> Self {
        WireMove {
            board: m.board_index,
            cell: m.cell,
        }
    }
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeResponse {
    pub outcome: Outcome,
    pub value: String,
    pub winning_moves: Vec<WireMove>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestMoveResponse {
    #[serde(rename = "move")]
    pub mv: Option<WireMove>,
    pub outcome: Outcome,
}

pub fn analyze(p: &Position, t: &ValueTable) -> AnalyzeResponse {
    let advisor = Advisor::Quotient(t);
    AnalyzeResponse {
        outcome: advisor.outcome(p),
        value: position_value(p, t).to_string(),
        winning_moves: advisor
            .winning_moves(p)
            .into_iter()
            .map(Into::into)
            .collect(),
    }
}

pub fn best_move(p: &Position, t: &ValueTable) -> BestMoveResponse {
    let r = recommend(p, t);
    BestMoveResponse {
        mv: r.mv.map(Into::into),
        outcome: r.outcome_now,
    }
}

struct ApiError(String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (StatusCode::BAD_REQUEST, Json(json!({ "error": self.0 }))).into_response()
    }
}

fn parse_request(body: &[u8]) -> Result<Position, ApiError> {
    let req: PositionRequest =
        serde_json::from_slice(body).map_err(|e| ApiError(format!("malformed request: {e}")))?;
    if req.boards.is_empty() {
        return Err(ApiError("boards must not be empty".into()));
    }
    Position::from_masks(&req.boards).map_err(|e| ApiError(e.to_string()))
}

type Shared = Arc<ValueTable>;

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "ok": true }))
}

async fn analyze_handler(
    State(t): State<Shared>,
    body: Bytes,
) -> Result<Json<AnalyzeResponse>, ApiError> {
    let p = parse_request(&body)?;
    Ok(Json(analyze(&p, &t)))
}

async fn best_move_handler(
    State(t): State<Shared>,
    body: Bytes,
) -> Result<Json<BestMoveResponse>, ApiError> {
    let p = parse_request(&body)?;
    Ok(Json(best_move(&p, &t)))
}

async fn index() -> Html<&'static str> {
    Html(INDEX)
}

async fn not_found() -> impl IntoResponse {
    (StatusCode::NOT_FOUND, Json(json!({ "error": "not found" })))
}

/// Builds the service. With `assets`, static files are served from that
/// directory at `/`; otherwise `/` returns a short built-in page.
pub fn router(table: Arc<ValueTable>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/analyze", post(analyze_handler))
        .route("/api/bestmove", post(best_move_handler))
        .with_state(table);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir).fallback(get(not_found))),
        None => api.route("/", get(index)).fallback(not_found),
    }
}

const INDEX: &str = r#"<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>notakto</title></head>
<body>
<h1>notakto</h1>
<p>JSON API:</p>
<ul>
<li><code>GET /api/health</code></li>
<li><code>POST /api/analyze</code> with <code>{"boards":[mask,...]}</code></li>
<li><code>POST /api/bestmove</code> with <code>{"boards":[mask,...]}</code></li>
</ul>
<p>Masks are 9-bit integers, bit i set when cell i (row by row, 0 = top left) holds an X.</p>
</body>
</html>
"#;
