use std::collections::{BTreeMap, HashMap};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use skilltrace_core::domain::event::*;
use skilltrace_core::domain::log::to_jsonl;
use skilltrace_core::domain::time::{self, Timestamp};
use skilltrace_core::domain::{DomainError, Membership, ParticipantId, Payload, SprintKey, TaskId, TeamId, WorldState};
use skilltrace_core::rational;
use skilltrace_core::reporting::{parse_external_scores, render, Format, ReportKind};

use crate::app::{App, Deployment, Tx};
use crate::error::ApiError;

type Items = Vec<(ParticipantId, Payload)>;

fn parse<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    let bytes: &[u8] = if bytes.is_empty() { b"{}" } else { bytes };
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request("INVALID_PAYLOAD", e.to_string()))
}

fn post(uri: &Uri) -> String {
    format!("POST {}", uri.path())
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("entities serialize")
}

fn timestamp(text: &str) -> Result<Timestamp, ApiError> {
    time::parse(text).map_err(|e| ApiError::bad_request("INVALID_PAYLOAD", e))
}

/// First unused id of the form `<prefix><n>`.
fn fresh_id(prefix: &str, mut taken: impl FnMut(&str) -> bool, from: usize) -> String {
    (from + 1..).map(|n| format!("{prefix}{n}")).find(|id| !taken(id)).expect("unbounded range")
}

fn team_of(world: &WorldState, id: &str) -> Result<TeamId, ApiError> {
    let id = TeamId::from(id);
    if !world.teams.contains_key(&id) {
        return Err(ApiError::domain(DomainError::UnknownTeam(id), None));
    }
    Ok(id)
}

fn task_team(world: &WorldState, id: &str) -> Result<(TaskId, TeamId), ApiError> {
    let task = TaskId::from(id);
    match world.tasks.get(&task) {
        Some(t) => Ok((task, t.team.clone())),
        None => Err(ApiError::domain(DomainError::UnknownTask(task), None)),
    }
}

fn likert(value: &Value) -> Result<i64, ApiError> {
    value
        .as_i64()
        .ok_or_else(|| ApiError::bad_request("INVALID_PAYLOAD", format!("expected an integer rating, got {value}")))
}

// ---- participants

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegisterBody {
    id: Option<String>,
    display_name: String,
    #[serde(default)]
    skill_profile: BTreeMap<String, i64>,
}

pub async fn register(State(app): State<App>, uri: Uri, headers: HeaderMap, bytes: Bytes) -> Response {
    app.mutate(&headers, &post(&uri), false, |tx| {
        let b: RegisterBody = parse(&bytes)?;
        let world = tx.world();
        let id = match b.id {
            Some(id) => ParticipantId::new(id),
            None => {
                let n = world.participants.len();
                ParticipantId::new(fresh_id("p", |c| world.participants.contains_key(&ParticipantId::from(c)), n))
            }
        };
        if world.participants.contains_key(&id) {
            return Err(ApiError::domain(DomainError::Duplicate(format!("participant {id}")), None));
        }
        let token = crate::store::new_token();
        tx.add_token(token.clone(), id.clone())?;
        let payload = Payload::Register(Register {
            participant: id.clone(),
            display_name: b.display_name,
            skill_profile: b.skill_profile,
        });
        if let Err(e) = tx.commit(None, vec![(id.clone(), payload)]) {
            tx.drop_token(&token);
            return Err(e);
        }
        Ok((StatusCode::CREATED, json!({"participant": tx.world().participants[&id], "token": token})))
    })
}

pub async fn list_participants(State(app): State<App>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| Ok(json_response(to_json(&dep.world.participants.values().collect::<Vec<_>>()))))
}

pub async fn get_participant(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let id = ParticipantId::new(id);
        match dep.world.participants.get(&id) {
            Some(p) => Ok(json_response(to_json(p))),
            None => Err(ApiError::domain(DomainError::UnknownParticipant(id), None)),
        }
    })
}

fn json_response(value: Value) -> Response {
    axum::Json(value).into_response()
}

// ---- teams

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TeamBody {
    id: Option<String>,
    name: String,
    members: Option<Vec<ParticipantId>>,
    product_owner: Option<ParticipantId>,
    #[serde(default)]
    stakeholders: Vec<ParticipantId>,
}

pub async fn create_team(State(app): State<App>, uri: Uri, headers: HeaderMap, bytes: Bytes) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: TeamBody = parse(&bytes)?;
        let actor = tx.actor().clone();
        let world = tx.world();
        let id = match b.id {
            Some(id) => TeamId::new(id),
            None => TeamId::new(fresh_id("t", |c| world.teams.contains_key(&TeamId::from(c)), world.teams.len())),
        };
        let payload = Payload::CreateTeam(CreateTeam {
            name: b.name,
            members: b.members.unwrap_or_else(|| vec![actor.clone()]),
            product_owner: b.product_owner.unwrap_or_else(|| actor.clone()),
            stakeholders: b.stakeholders,
        });
        tx.commit(Some(&id), vec![(actor, payload)])?;
        Ok((StatusCode::CREATED, to_json(&tx.world().teams[&id])))
    })
}

pub async fn list_teams(State(app): State<App>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| Ok(json_response(to_json(&dep.world.teams.values().collect::<Vec<_>>()))))
}

pub async fn get_team(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let id = team_of(&dep.world, &id)?;
        Ok(json_response(to_json(&dep.world.teams[&id])))
    })
}

pub async fn team_members(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let team = &dep.world.teams[&team_of(&dep.world, &id)?];
        Ok(json_response(json!({
            "members": team.members,
            "stakeholders": team.stakeholders,
            "product_owner": team.product_owner,
        })))
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JoinBody {
    participant: Option<ParticipantId>,
    #[serde(rename = "as", default = "member")]
    membership: Membership,
}

fn member() -> Membership {
    Membership::Member
}

pub async fn join_team(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: JoinBody = parse(&bytes)?;
        let team = team_of(tx.world(), &id)?;
        let actor = tx.actor().clone();
        let mut items = tx.catch_up_sprints(&team);
        let participant = b.participant.unwrap_or_else(|| actor.clone());
        items.push((actor, Payload::JoinTeam(JoinTeam { participant, membership: b.membership })));
        tx.commit(Some(&team), items)?;
        Ok((StatusCode::OK, to_json(&tx.world().teams[&team])))
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RoleBody {
    participant: ParticipantId,
    role: String,
}

pub async fn assign_role(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: RoleBody = parse(&bytes)?;
        let team = team_of(tx.world(), &id)?;
        let mut items = tx.catch_up_sprints(&team);
        let participant = b.participant.clone();
        items.push((tx.actor().clone(), Payload::AssignRole(AssignRole { participant: b.participant, role: b.role })));
        tx.commit(Some(&team), items)?;
        Ok((StatusCode::OK, to_json(&tx.world().participants[&participant])))
    })
}

// ---- sprints

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StartBody {
    start: Option<String>,
    end: Option<String>,
}

/// Manual sprint start. Without an explicit start the running sprint, if
/// any, is closed now and the next one opens immediately.
pub async fn start_sprint(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: StartBody = parse(&bytes)?;
        let team = team_of(tx.world(), &id)?;
        let index = tx.world().last_sprint(&team).map_or(1, |s| s.index + 1);
        let mut items: Items = Vec::new();
        let start = match &b.start {
            Some(s) => timestamp(s)?,
            None => {
                items.extend(tx.end_running_sprint(&team));
                tx.now
            }
        };
        let end = match &b.end {
            Some(e) => timestamp(e)?,
            None => start + tx.sprint_length(),
        };
        items.push((tx.actor().clone(), Payload::StartSprint(StartSprint { index, start, end })));
        tx.commit(Some(&team), items)?;
        let key = SprintKey::new(team, index);
        Ok((StatusCode::CREATED, to_json(&tx.world().sprints[&key])))
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EndBody {
    end: Option<String>,
}

pub async fn end_sprint(
    State(app): State<App>,
    Path((id, index)): Path<(String, u32)>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: EndBody = parse(&bytes)?;
        let team = team_of(tx.world(), &id)?;
        let end = match &b.end {
            Some(e) => timestamp(e)?,
            None => tx.now,
        };
        tx.commit(Some(&team), vec![(tx.actor().clone(), Payload::EndSprint(EndSprint { index, end }))])?;
        Ok((StatusCode::OK, to_json(&tx.world().sprints[&SprintKey::new(team, index)])))
    })
}

pub async fn list_sprints(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let team = team_of(&dep.world, &id)?;
        Ok(json_response(to_json(&dep.world.sprints_of(&team).collect::<Vec<_>>())))
    })
}

fn sprint_key(world: &WorldState, id: &str) -> Result<SprintKey, ApiError> {
    let malformed = || ApiError::bad_request("INVALID_PAYLOAD", format!("sprint id {id:?} is not <team>:<index>"));
    let (team, index) = id.rsplit_once(':').ok_or_else(malformed)?;
    let index: u32 = index.parse().map_err(|_| malformed())?;
    Ok(SprintKey::new(team_of(world, team)?, index))
}

pub async fn get_sprint(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let key = sprint_key(&dep.world, &id)?;
        match dep.world.sprints.get(&key) {
            Some(s) => Ok(json_response(to_json(s))),
            None => Err(ApiError::domain(DomainError::UnknownSprint(key), None)),
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoodBody {
    phase: Phase,
    value: Value,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Phase {
    Begin,
    End,
}

/// Mood reports go to the team's latest sprint only.
pub async fn report_mood(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: MoodBody = parse(&bytes)?;
        let value = likert(&b.value)?;
        let key = sprint_key(tx.world(), &id)?;
        let mut items = tx.catch_up_sprints(&key.team);
        let latest = tx.world().last_sprint(&key.team).map_or(0, |s| s.index) + items.len() as u32;
        if key.index == 0 || key.index > latest {
            return Err(ApiError::domain(DomainError::UnknownSprint(key), None));
        }
        if key.index < latest {
            return Err(ApiError::bad_request(
                "SPRINT_NOT_CURRENT",
                format!("mood reports are accepted for sprint {}:{latest} only", key.team),
            ));
        }
        let report = MoodReport { sprint: key.index, value };
        let payload = match b.phase {
            Phase::Begin => Payload::ReportMoodBegin(report),
            Phase::End => Payload::ReportMoodEnd(report),
        };
        items.push((tx.actor().clone(), payload));
        tx.commit(Some(&key.team), items)?;
        Ok((StatusCode::OK, to_json(&tx.world().sprints[&key])))
    })
}

// ---- tasks

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProposeBody {
    id: Option<String>,
    team: String,
    description: String,
    #[serde(default)]
    skills_required: Vec<String>,
}

pub async fn propose_task(State(app): State<App>, uri: Uri, headers: HeaderMap, bytes: Bytes) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: ProposeBody = parse(&bytes)?;
        let team = team_of(tx.world(), &b.team)?;
        let world = tx.world();
        let task = match b.id {
            Some(id) => TaskId::new(id),
            None => {
                let prefix = format!("{team}-k");
                TaskId::new(fresh_id(&prefix, |c| world.tasks.contains_key(&TaskId::from(c)), world.tasks.len()))
            }
        };
        let mut items = tx.catch_up_sprints(&team);
        items.push((
            tx.actor().clone(),
            Payload::ProposeTask(ProposeTask {
                task: task.clone(),
                description: b.description,
                skills_required: b.skills_required,
            }),
        ));
        tx.commit(Some(&team), items)?;
        Ok((StatusCode::CREATED, to_json(&tx.world().tasks[&task])))
    })
}

pub async fn list_tasks(
    State(app): State<App>,
    Query(q): Query<HashMap<String, String>>,
    headers: HeaderMap,
) -> Response {
    app.read(&headers, |dep, _| {
        let team = q.get("team").map(|t| TeamId::from(t.as_str()));
        let tasks: Vec<_> = dep.world.tasks.values().filter(|t| team.as_ref().is_none_or(|id| &t.team == id)).collect();
        Ok(json_response(to_json(&tasks)))
    })
}

pub async fn get_task(State(app): State<App>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        let (task, _) = task_team(&dep.world, &id)?;
        Ok(json_response(to_json(&dep.world.tasks[&task])))
    })
}

/// Shared shape of the task sub-resource mutations: catch up the team's
/// sprints, append the event, answer with the updated task.
fn task_mutation(
    tx: &mut Tx<'_>,
    id: &str,
    build: impl FnOnce(&Tx<'_>, &TaskId, &TeamId, &mut Items) -> Result<Payload, ApiError>,
) -> Result<(StatusCode, Value), ApiError> {
    let (task, team) = task_team(tx.world(), id)?;
    let mut items = tx.catch_up_sprints(&team);
    let payload = build(tx, &task, &team, &mut items)?;
    items.push((tx.actor().clone(), payload));
    tx.commit(Some(&team), items)?;
    Ok((StatusCode::OK, to_json(&tx.world().tasks[&task])))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimateBody {
    kind: EstimateKind,
    value: Value,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum EstimateKind {
    Difficulty,
    Priority,
    Time,
}

pub async fn estimate(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: EstimateBody = parse(&bytes)?;
        task_mutation(tx, &id, |_, task, _, _| {
            let task = task.clone();
            Ok(match b.kind {
                EstimateKind::Difficulty => Payload::EstimateDifficulty(Rating { task, value: likert(&b.value)? }),
                EstimateKind::Priority => Payload::EstimatePriority(Rating { task, value: likert(&b.value)? }),
                EstimateKind::Time => {
                    let text = match &b.value {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        other => return Err(ApiError::bad_request("INVALID_PAYLOAD", format!("bad days {other}"))),
                    };
                    let days = rational::parse(&text)
                        .map_err(|e| ApiError::bad_request("INVALID_PAYLOAD", e.to_string()))?;
                    Payload::EstimateTime(EstimateTime { task, days })
                }
            })
        })
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignBody {
    assignee: Option<ParticipantId>,
    sprint: Option<u32>,
}

/// Assigns into the given sprint, or the team's latest, opening sprint 1 if
/// the team has none yet.
pub async fn assign(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: AssignBody = parse(&bytes)?;
        task_mutation(tx, &id, |tx, task, team, items| {
            let sprint = match b.sprint {
                Some(s) => s,
                None => match tx.world().last_sprint(team) {
                    Some(last) => last.index + items.len() as u32,
                    None => {
                        items.extend(tx.first_sprint(team));
                        1
                    }
                },
            };
            let assignee = b.assignee.unwrap_or_else(|| tx.actor().clone());
            Ok(Payload::AssignTask(AssignTask { task: task.clone(), assignee, sprint }))
        })
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RatingBody {
    value: Value,
}

pub async fn confidence(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: RatingBody = parse(&bytes)?;
        task_mutation(tx, &id, |_, task, _, _| {
            Ok(Payload::DeclareConfidence(Rating { task: task.clone(), value: likert(&b.value)? }))
        })
    })
}

pub async fn review(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: RatingBody = parse(&bytes)?;
        task_mutation(tx, &id, |_, task, _, _| {
            Ok(Payload::ReviewQuality(Rating { task: task.clone(), value: likert(&b.value)? }))
        })
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CollaboratorBody {
    participant: ParticipantId,
}

pub async fn add_collaborator(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let b: CollaboratorBody = parse(&bytes)?;
        task_mutation(tx, &id, |_, task, _, _| {
            Ok(Payload::AddCollaborator(AddCollaborator { task: task.clone(), participant: b.participant }))
        })
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

pub async fn complete(
    State(app): State<App>,
    Path(id): Path<String>,
    uri: Uri,
    headers: HeaderMap,
    bytes: Bytes,
) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let _: Empty = parse(&bytes)?;
        task_mutation(tx, &id, |_, task, _, _| Ok(Payload::CompleteTask(TaskRef { task: task.clone() })))
    })
}

// ---- analytics

fn format_of(q: &HashMap<String, String>) -> Result<Format, ApiError> {
    match q.get("format").map(String::as_str) {
        None | Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(other) => Err(ApiError::bad_request("INVALID_QUERY", format!("unknown format {other:?}"))),
    }
}

fn artifact(body: String, format: Format) -> Response {
    let content_type = match format {
        Format::Csv => "text/csv; charset=utf-8",
        Format::Json => "application/json",
    };
    ([(header::CONTENT_TYPE, content_type)], body).into_response()
}

fn report(app: &App, dep: &Deployment, kind: ReportKind, q: &HashMap<String, String>) -> Result<Response, ApiError> {
    let format = format_of(q)?;
    let top_k = match q.get("top_k") {
        Some(k) => k
            .parse::<usize>()
            .ok()
            .filter(|k| *k > 0)
            .ok_or_else(|| ApiError::bad_request("INVALID_QUERY", "top_k must be a positive integer"))?,
        None => app.config.top_k_flag,
    };
    if kind == ReportKind::SkillsVsExternal && dep.external.is_none() {
        return Err(ApiError::bad_request(
            "NO_EXTERNAL_SCORES",
            "upload scores to /api/v1/analytics/external-scores first",
        ));
    }
    let body = render(kind, format, &dep.world, &app.config.metrics(), dep.external.as_ref(), top_k)?;
    Ok(artifact(body, format))
}

pub async fn skills(State(app): State<App>, Query(q): Query<HashMap<String, String>>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| report(&app, dep, ReportKind::Skills, &q))
}

pub async fn scatter(State(app): State<App>, Query(q): Query<HashMap<String, String>>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| report(&app, dep, ReportKind::Scatter, &q))
}

pub async fn heatmap(
    State(app): State<App>,
    Path(metric): Path<String>,
    Query(q): Query<HashMap<String, String>>,
    headers: HeaderMap,
) -> Response {
    app.read(&headers, |dep, _| {
        let kind = match metric.as_str() {
            "collaboration" => ReportKind::HeatmapCollab,
            "mood" => ReportKind::HeatmapMood,
            other => return Err(ApiError::not_found("NOT_FOUND", format!("no heatmap {other:?}"))),
        };
        report(&app, dep, kind, &q)
    })
}

pub async fn skills_vs_external(
    State(app): State<App>,
    Query(q): Query<HashMap<String, String>>,
    headers: HeaderMap,
) -> Response {
    app.read(&headers, |dep, _| report(&app, dep, ReportKind::SkillsVsExternal, &q))
}

/// Replaces the operator-supplied external scores (`participant_id,score`).
/// They are kept beside the log, never in it.
pub async fn upload_external(State(app): State<App>, uri: Uri, headers: HeaderMap, bytes: Bytes) -> Response {
    app.mutate(&headers, &post(&uri), true, |tx| {
        let scores = parse_external_scores(bytes.as_ref())?;
        let unknown: Vec<&ParticipantId> =
            scores.keys().filter(|id| !tx.world().participants.contains_key(*id)).collect();
        if !unknown.is_empty() {
            return Err(ApiError::bad_request("INVALID_EXTERNAL_SCORES", "unknown participants")
                .with_detail(json!({ "unknown": unknown })));
        }
        let count = scores.len();
        tx.set_external(scores, &bytes)?;
        Ok((StatusCode::OK, json!({ "count": count })))
    })
}

// ---- log and description

pub async fn export_events(State(app): State<App>, headers: HeaderMap) -> Response {
    app.read(&headers, |dep, _| {
        Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], to_jsonl(&dep.events)).into_response())
    })
}

pub const OPENAPI: &str = include_str!("openapi.json");

pub async fn openapi() -> Response {
    ([(header::CONTENT_TYPE, "application/json")], OPENAPI).into_response()
}

pub async fn not_found(uri: Uri) -> Response {
    ApiError::not_found("NOT_FOUND", format!("no route for {}", uri.path())).into_response()
}
