//! HTTP API over a single append-only activity log.
//!
//! All state lives in the data directory: the JSONL event log, bearer tokens,
//! idempotency records and the optional external scores. The in-memory world
//! is rebuilt from the log on startup.

pub mod app;
pub mod clock;
pub mod config;
pub mod error;
pub mod handlers;
pub mod store;

use axum::routing::{get, post};
use axum::Router;

pub use app::{App, OpenReport};
pub use clock::{Clock, ManualClock, SystemClock};
pub use config::ServiceConfig;
pub use error::ApiError;

pub fn router(app: App) -> Router {
    use handlers as h;
    let api = Router::new()
        .route("/participants", post(h::register).get(h::list_participants))
        .route("/participants/{id}", get(h::get_participant))
        .route("/teams", post(h::create_team).get(h::list_teams))
        .route("/teams/{id}", get(h::get_team))
        .route("/teams/{id}/members", post(h::join_team).get(h::team_members))
        .route("/teams/{id}/roles", post(h::assign_role))
        .route("/teams/{id}/sprints", post(h::start_sprint).get(h::list_sprints))
        .route("/teams/{id}/sprints/{index}/end", post(h::end_sprint))
        .route("/sprints/{id}", get(h::get_sprint))
        .route("/sprints/{id}/mood", post(h::report_mood))
        .route("/tasks", post(h::propose_task).get(h::list_tasks))
        .route("/tasks/{id}", get(h::get_task))
        .route("/tasks/{id}/estimates", post(h::estimate))
        .route("/tasks/{id}/assign", post(h::assign))
        .route("/tasks/{id}/confidence", post(h::confidence))
        .route("/tasks/{id}/collaborators", post(h::add_collaborator))
        .route("/tasks/{id}/complete", post(h::complete))
        .route("/tasks/{id}/reviews", post(h::review))
        .route("/analytics/skills", get(h::skills))
        .route("/analytics/scatter/competence-productivity", get(h::scatter))
        .route("/analytics/heatmap/{metric}", get(h::heatmap))
        .route("/analytics/external-scores", post(h::upload_external))
        .route("/analytics/skills-vs-external", get(h::skills_vs_external))
        .route("/events", get(h::export_events))
        .route("/spec", get(h::openapi));
    Router::new().nest("/api/v1", api).fallback(h::not_found).with_state(app)
}

/// Serves until the listener fails or the process is killed.
pub async fn serve(app: App, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(app)).await
}
