//! Deployment state and the single-writer mutation path.
//!
//! Every mutation runs under one lock: authenticate, check preconditions,
//! apply to the in-memory world, append and sync the log line, and only then
//! answer. The in-memory world therefore always equals `replay(log)`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use chrono::Duration;
use serde_json::Value;
use skilltrace_core::domain::event::{EndSprint, StartSprint};
use skilltrace_core::domain::time::Timestamp;
use skilltrace_core::domain::{replay, ActivityEvent, ParticipantId, Payload, TeamId, WorldState};
use skilltrace_core::rational::Rational;
use skilltrace_core::reporting::parse_external_scores;

use crate::clock::Clock;
use crate::config::ServiceConfig;
use crate::error::ApiError;
use crate::store::{self, EventLog, IdempotencyLog, StoreError, StoredResponse};

pub const IDEMPOTENCY_HEADER: &str = "idempotency-key";
pub const LAST_EVENT_HEADER: &str = "x-last-event-id";

pub struct Deployment {
    pub world: WorldState,
    pub events: Vec<ActivityEvent>,
    log: EventLog,
    pub tokens: BTreeMap<String, ParticipantId>,
    idempotency: IdempotencyLog,
    pub external: Option<BTreeMap<ParticipantId, Rational>>,
}

#[derive(Clone)]
pub struct App {
    inner: Arc<Mutex<Deployment>>,
    pub config: Arc<ServiceConfig>,
    clock: Arc<dyn Clock>,
}

/// What opening the data directory found.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenReport {
    pub events: usize,
    pub truncated_bytes: u64,
    pub pruned_tokens: usize,
}

impl App {
    pub fn open(config: ServiceConfig, clock: Arc<dyn Clock>) -> Result<(App, OpenReport), StoreError> {
        let recovered = EventLog::open(&config.data_dir)?;
        let token_path = config.token_path();
        let mut tokens = store::read_tokens(&token_path)?;
        // tokens written ahead of a registration that never reached the log
        let before = tokens.len();
        tokens.retain(|_, id| recovered.world.participants.contains_key(id));
        let pruned_tokens = before - tokens.len();
        if pruned_tokens > 0 {
            store::write_tokens(&token_path, &tokens)?;
        }
        let idempotency = IdempotencyLog::open(&config.data_dir)?;
        let external = match std::fs::read(config.data_dir.join(store::EXTERNAL_SCORES_FILE)) {
            Ok(bytes) => parse_external_scores(bytes.as_slice()).ok(),
            Err(_) => None,
        };
        let report = OpenReport {
            events: recovered.events.len(),
            truncated_bytes: recovered.truncated_bytes,
            pruned_tokens,
        };
        let deployment = Deployment {
            world: recovered.world,
            events: recovered.events,
            log: recovered.log,
            tokens,
            idempotency,
            external,
        };
        let app = App { inner: Arc::new(Mutex::new(deployment)), config: Arc::new(config), clock };
        Ok((app, report))
    }

    fn lock(&self) -> MutexGuard<'_, Deployment> {
        self.inner.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn token_path(&self) -> PathBuf {
        self.config.token_path()
    }

    /// Runs a read against the current snapshot.
    pub fn read<F>(&self, headers: &HeaderMap, f: F) -> Response
    where
        F: FnOnce(&Deployment, &ParticipantId) -> Result<Response, ApiError>,
    {
        let dep = self.lock();
        let last = dep.world.last_event_id;
        let result = authenticate(&dep, headers).and_then(|actor| f(&dep, &actor));
        with_last_event(result.unwrap_or_else(IntoResponse::into_response), last)
    }

    /// Runs a mutation. `authenticated` is false only for registration.
    pub fn mutate<F>(&self, headers: &HeaderMap, request: &str, authenticated: bool, f: F) -> Response
    where
        F: FnOnce(&mut Tx<'_>) -> Result<(StatusCode, Value), ApiError>,
    {
        let mut dep = self.lock();
        let response = self.mutate_locked(&mut dep, headers, request, authenticated, f);
        let last = dep.world.last_event_id;
        with_last_event(response, last)
    }

    fn mutate_locked<F>(
        &self,
        dep: &mut Deployment,
        headers: &HeaderMap,
        request: &str,
        authenticated: bool,
        f: F,
    ) -> Response
    where
        F: FnOnce(&mut Tx<'_>) -> Result<(StatusCode, Value), ApiError>,
    {
        let actor = if authenticated {
            match authenticate(dep, headers) {
                Ok(a) => Some(a),
                Err(e) => return e.into_response(),
            }
        } else {
            None
        };
        let scope = actor.as_ref().map(|a| a.to_string()).unwrap_or_default();
        let key = match headers.get(IDEMPOTENCY_HEADER).map(|v| v.to_str()) {
            None => None,
            Some(Ok(k)) if !k.is_empty() => Some(k.to_string()),
            Some(_) => return ApiError::bad_request("INVALID_HEADER", "malformed Idempotency-Key").into_response(),
        };
        if let Some(key) = &key {
            if let Some(stored) = dep.idempotency.get(&scope, key) {
                if stored.request != request {
                    return ApiError::conflict(
                        "IDEMPOTENCY_KEY_REUSED",
                        format!("key already used for {}", stored.request),
                    )
                    .into_response();
                }
                return stored_response(stored);
            }
        }
        if let Some(expected) = headers.get(header::IF_MATCH) {
            let expected = expected.to_str().unwrap_or_default().trim().trim_matches('"');
            if expected != dep.world.last_event_id.to_string() {
                return ApiError::conflict(
                    "CONFLICT",
                    format!("log is at event {}, request expected {expected}", dep.world.last_event_id),
                )
                .into_response();
            }
        }

        let now = self.clock.now();
        let mut tx = Tx { dep, actor, now, config: &self.config };
        let (status, body) = match f(&mut tx) {
            Ok(ok) => ok,
            Err(e) => return e.into_response(),
        };
        let body = serde_json::to_string(&body).expect("json values serialize");
        if let Some(key) = key {
            let stored = StoredResponse {
                scope,
                key,
                request: request.to_string(),
                status: status.as_u16(),
                content_type: "application/json".into(),
                body: body.clone(),
            };
            // the mutation is already durable; a lost cache entry only costs
            // retry protection for this key
            let _ = dep.idempotency.record(stored);
        }
        (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

fn with_last_event(mut response: Response, last: u64) -> Response {
    response.headers_mut().insert(LAST_EVENT_HEADER, HeaderValue::from(last));
    response
}

fn stored_response(stored: &StoredResponse) -> Response {
    let status = StatusCode::from_u16(stored.status).unwrap_or(StatusCode::OK);
    (status, [(header::CONTENT_TYPE, stored.content_type.clone())], stored.body.clone()).into_response()
}

fn authenticate(dep: &Deployment, headers: &HeaderMap) -> Result<ParticipantId, ApiError> {
    let value = headers
        .get(header::AUTHORIZATION)
        .ok_or_else(|| ApiError::unauthorized("missing bearer token"))?
        .to_str()
        .map_err(|_| ApiError::unauthorized("malformed Authorization header"))?;
    let token = value
        .strip_prefix("Bearer ")
        .ok_or_else(|| ApiError::unauthorized("expected a Bearer token"))?
        .trim();
    match dep.tokens.get(token) {
        Some(id) if dep.world.participants.contains_key(id) => Ok(id.clone()),
        _ => Err(ApiError::unauthorized("unknown token")),
    }
}

/// A mutation in progress, holding the deployment lock.
pub struct Tx<'a> {
    pub dep: &'a mut Deployment,
    actor: Option<ParticipantId>,
    pub now: Timestamp,
    pub config: &'a ServiceConfig,
}

impl Tx<'_> {
    pub fn world(&self) -> &WorldState {
        &self.dep.world
    }

    /// The authenticated caller. Only registration runs without one.
    pub fn actor(&self) -> &ParticipantId {
        self.actor.as_ref().expect("authenticated mutation")
    }

    pub fn sprint_length(&self) -> Duration {
        Duration::days(self.config.sprint_length_days as i64)
    }

    /// Event timestamp: the clock, but never behind the log.
    fn timestamp(&self) -> Timestamp {
        match self.dep.events.last() {
            Some(last) if last.timestamp > self.now => last.timestamp,
            _ => self.now,
        }
    }

    /// Validates, persists and applies events atomically.
    pub fn commit(&mut self, team: Option<&TeamId>, items: Vec<(ParticipantId, Payload)>) -> Result<(), ApiError> {
        if items.is_empty() {
            return Ok(());
        }
        let at = self.timestamp();
        let first = self.dep.world.next_event_id();
        let events: Vec<ActivityEvent> = items
            .into_iter()
            .enumerate()
            .map(|(i, (actor, payload))| ActivityEvent {
                event_id: first + i as u64,
                timestamp: at,
                actor,
                team: team.cloned(),
                payload,
            })
            .collect();

        let actor = self.actor.clone();
        if events.len() == 1 {
            // `apply` leaves the world untouched on rejection
            self.dep.world.apply(&events[0]).map_err(|e| ApiError::domain(e, actor.as_ref()))?;
        } else {
            let mut next = self.dep.world.clone();
            for e in &events {
                next.apply(e).map_err(|err| ApiError::domain(err, actor.as_ref()))?;
            }
            self.dep.world = next;
        }
        if let Err(e) = self.dep.log.append(&events) {
            self.dep.world = replay(&self.dep.events).expect("persisted log replays");
            return Err(e.into());
        }
        self.dep.events.extend(events);
        Ok(())
    }

    /// Start-sprint events needed so the team's latest sprint covers `now`.
    /// Sprints open back to back once the first one exists.
    pub fn catch_up_sprints(&self, team: &TeamId) -> Vec<(ParticipantId, Payload)> {
        let world = self.world();
        let Some(t) = world.teams.get(team) else { return Vec::new() };
        let Some(last) = world.last_sprint(team) else { return Vec::new() };
        let length = self.sprint_length();
        let (mut index, mut end) = (last.index, last.end);
        let mut out = Vec::new();
        while self.now >= end {
            index += 1;
            let start = end;
            end = start + length;
            out.push((t.product_owner.clone(), Payload::StartSprint(StartSprint { index, start, end })));
        }
        out
    }

    /// Opens the first sprint at `now` if the team has none.
    pub fn first_sprint(&self, team: &TeamId) -> Option<(ParticipantId, Payload)> {
        let world = self.world();
        let t = world.teams.get(team)?;
        if world.last_sprint(team).is_some() {
            return None;
        }
        let start = self.timestamp();
        Some((
            t.product_owner.clone(),
            Payload::StartSprint(StartSprint { index: 1, start, end: start + self.sprint_length() }),
        ))
    }

    /// Closes the running sprint now, for a manual start.
    pub fn end_running_sprint(&self, team: &TeamId) -> Option<(ParticipantId, Payload)> {
        let last = self.world().last_sprint(team)?;
        let now = self.timestamp();
        (now < last.end && now > last.start)
            .then(|| (self.actor().clone(), Payload::EndSprint(EndSprint { index: last.index, end: now })))
    }

    pub fn set_external(&mut self, scores: BTreeMap<ParticipantId, Rational>, raw: &[u8]) -> Result<(), ApiError> {
        store::atomic_write(&self.config.data_dir.join(store::EXTERNAL_SCORES_FILE), raw)?;
        self.dep.external = Some(scores);
        Ok(())
    }

    /// Registers a bearer token ahead of the participant's REGISTER event.
    pub fn add_token(&mut self, token: String, id: ParticipantId) -> Result<(), ApiError> {
        self.dep.tokens.insert(token, id);
        store::write_tokens(&self.config.token_path(), &self.dep.tokens)?;
        Ok(())
    }

    pub fn drop_token(&mut self, token: &str) {
        self.dep.tokens.remove(token);
        let _ = store::write_tokens(&self.config.token_path(), &self.dep.tokens);
    }
}
