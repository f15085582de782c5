use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::time::{self, Timestamp};
use super::{Membership, ParticipantId, TaskId, TeamId};
use crate::rational::{serde_fraction, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    Register,
    CreateTeam,
    JoinTeam,
    AssignRole,
    StartSprint,
    EndSprint,
    ProposeTask,
    EstimateDifficulty,
    EstimatePriority,
    EstimateTime,
    AssignTask,
    DeclareConfidence,
    AddCollaborator,
    CompleteTask,
    ReviewQuality,
    ReportMoodBegin,
    ReportMoodEnd,
}

/// Kind-specific event body. Likert values are kept as raw integers here and
/// range-checked when the event is applied.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Register(Register),
    CreateTeam(CreateTeam),
    JoinTeam(JoinTeam),
    AssignRole(AssignRole),
    StartSprint(StartSprint),
    EndSprint(EndSprint),
    ProposeTask(ProposeTask),
    EstimateDifficulty(Rating),
    EstimatePriority(Rating),
    EstimateTime(EstimateTime),
    AssignTask(AssignTask),
    DeclareConfidence(Rating),
    AddCollaborator(AddCollaborator),
    CompleteTask(TaskRef),
    ReviewQuality(Rating),
    ReportMoodBegin(MoodReport),
    ReportMoodEnd(MoodReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Register {
    pub participant: ParticipantId,
    pub display_name: String,
    #[serde(default)]
    pub skill_profile: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateTeam {
    pub name: String,
    pub members: Vec<ParticipantId>,
    pub product_owner: ParticipantId,
    #[serde(default)]
    pub stakeholders: Vec<ParticipantId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JoinTeam {
    pub participant: ParticipantId,
    #[serde(rename = "as")]
    pub membership: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignRole {
    pub participant: ParticipantId,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSprint {
    pub index: u32,
    #[serde(with = "time::serde_millis")]
    pub start: Timestamp,
    #[serde(with = "time::serde_millis")]
    pub end: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndSprint {
    pub index: u32,
    #[serde(with = "time::serde_millis")]
    pub end: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProposeTask {
    pub task: TaskId,
    pub description: String,
    #[serde(default)]
    pub skills_required: Vec<String>,
}

/// A Likert rating aimed at a task (difficulty, priority, confidence, quality).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rating {
    pub task: TaskId,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateTime {
    pub task: TaskId,
    #[serde(with = "serde_fraction")]
    pub days: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignTask {
    pub task: TaskId,
    pub assignee: ParticipantId,
    pub sprint: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddCollaborator {
    pub task: TaskId,
    pub participant: ParticipantId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRef {
    pub task: TaskId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoodReport {
    pub sprint: u32,
    pub value: i64,
}

impl Payload {
    pub fn kind(&self) -> EventKind {
        match self {
            Payload::Register(_) => EventKind::Register,
            Payload::CreateTeam(_) => EventKind::CreateTeam,
            Payload::JoinTeam(_) => EventKind::JoinTeam,
            Payload::AssignRole(_) => EventKind::AssignRole,
            Payload::StartSprint(_) => EventKind::StartSprint,
            Payload::EndSprint(_) => EventKind::EndSprint,
            Payload::ProposeTask(_) => EventKind::ProposeTask,
            Payload::EstimateDifficulty(_) => EventKind::EstimateDifficulty,
            Payload::EstimatePriority(_) => EventKind::EstimatePriority,
            Payload::EstimateTime(_) => EventKind::EstimateTime,
            Payload::AssignTask(_) => EventKind::AssignTask,
            Payload::DeclareConfidence(_) => EventKind::DeclareConfidence,
            Payload::AddCollaborator(_) => EventKind::AddCollaborator,
            Payload::CompleteTask(_) => EventKind::CompleteTask,
            Payload::ReviewQuality(_) => EventKind::ReviewQuality,
            Payload::ReportMoodBegin(_) => EventKind::ReportMoodBegin,
            Payload::ReportMoodEnd(_) => EventKind::ReportMoodEnd,
        }
    }

    pub fn from_value(kind: EventKind, value: serde_json::Value) -> Result<Self, serde_json::Error> {
        use serde_json::from_value as de;
        Ok(match kind {
            EventKind::Register => Payload::Register(de(value)?),
            EventKind::CreateTeam => Payload::CreateTeam(de(value)?),
            EventKind::JoinTeam => Payload::JoinTeam(de(value)?),
            EventKind::AssignRole => Payload::AssignRole(de(value)?),
            EventKind::StartSprint => Payload::StartSprint(de(value)?),
            EventKind::EndSprint => Payload::EndSprint(de(value)?),
            EventKind::ProposeTask => Payload::ProposeTask(de(value)?),
            EventKind::EstimateDifficulty => Payload::EstimateDifficulty(de(value)?),
            EventKind::EstimatePriority => Payload::EstimatePriority(de(value)?),
            EventKind::EstimateTime => Payload::EstimateTime(de(value)?),
            EventKind::AssignTask => Payload::AssignTask(de(value)?),
            EventKind::DeclareConfidence => Payload::DeclareConfidence(de(value)?),
            EventKind::AddCollaborator => Payload::AddCollaborator(de(value)?),
            EventKind::CompleteTask => Payload::CompleteTask(de(value)?),
            EventKind::ReviewQuality => Payload::ReviewQuality(de(value)?),
            EventKind::ReportMoodBegin => Payload::ReportMoodBegin(de(value)?),
            EventKind::ReportMoodEnd => Payload::ReportMoodEnd(de(value)?),
        })
    }
}

/// One immutable, timestamped record in the activity log.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityEvent {
    pub event_id: u64,
    pub timestamp: Timestamp,
    pub actor: ParticipantId,
    /// Absent only for `REGISTER`, which happens outside any team.
    pub team: Option<TeamId>,
    pub payload: Payload,
}

impl ActivityEvent {
    pub fn kind(&self) -> EventKind {
        self.payload.kind()
    }
}

impl Serialize for Payload {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Payload::Register(p) => p.serialize(s),
            Payload::CreateTeam(p) => p.serialize(s),
            Payload::JoinTeam(p) => p.serialize(s),
            Payload::AssignRole(p) => p.serialize(s),
            Payload::StartSprint(p) => p.serialize(s),
            Payload::EndSprint(p) => p.serialize(s),
            Payload::ProposeTask(p) => p.serialize(s),
            Payload::EstimateDifficulty(p)
            | Payload::EstimatePriority(p)
            | Payload::DeclareConfidence(p)
            | Payload::ReviewQuality(p) => p.serialize(s),
            Payload::EstimateTime(p) => p.serialize(s),
            Payload::AssignTask(p) => p.serialize(s),
            Payload::AddCollaborator(p) => p.serialize(s),
            Payload::CompleteTask(p) => p.serialize(s),
            Payload::ReportMoodBegin(p) | Payload::ReportMoodEnd(p) => p.serialize(s),
        }
    }
}

/// Wire form: field order and names are part of the log format.
#[derive(Serialize)]
struct WireEventRef<'a> {
    event_id: u64,
    #[serde(with = "time::serde_millis")]
    timestamp: Timestamp,
    actor: &'a ParticipantId,
    team: &'a Option<TeamId>,
    kind: EventKind,
    payload: &'a Payload,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireEvent {
    event_id: u64,
    #[serde(with = "time::serde_millis")]
    timestamp: Timestamp,
    actor: ParticipantId,
    team: Option<TeamId>,
    kind: EventKind,
    payload: serde_json::Value,
}

impl Serialize for ActivityEvent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireEventRef {
            event_id: self.event_id,
            timestamp: self.timestamp,
            actor: &self.actor,
            team: &self.team,
            kind: self.kind(),
            payload: &self.payload,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ActivityEvent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = WireEvent::deserialize(d)?;
        let payload = Payload::from_value(wire.kind, wire.payload).map_err(serde::de::Error::custom)?;
        Ok(ActivityEvent {
            event_id: wire.event_id,
            timestamp: wire.timestamp,
            actor: wire.actor,
            team: wire.team,
            payload,
        })
    }
}
