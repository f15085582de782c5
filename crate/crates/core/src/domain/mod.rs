//! Domain entities, the task lifecycle and the append-only activity log.
//!
//! All state is derived by replaying [`ActivityEvent`]s in order; see
//! [`world::replay`].

mod entities;
pub mod event;
mod likert;
pub mod log;
mod task;
pub mod time;
pub mod world;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use entities::{Membership, Participant, SprintKey, SprintRecord, Team};
pub use event::{ActivityEvent, EventKind, Payload};
pub use likert::{LikertScale, LikertValue};
pub use task::{transition_task, Task, TaskAction, TaskStatus};
pub use time::Timestamp;
pub use world::{replay, ReplayError, WorldState};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }
    };
}

id_type!(
    /// Opaque participant identifier, unique within a deployment.
    ParticipantId
);
id_type!(TeamId);
id_type!(TaskId);

/// Validation failures raised while applying events or transitioning tasks.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("likert value {value} outside {scale}")]
    LikertOutOfRange { value: i64, scale: LikertScale },
    #[error("task {task}: cannot {action} a task in status {from}")]
    IllegalTransition {
        task: TaskId,
        from: TaskStatus,
        action: &'static str,
    },
    #[error("timestamp order violation: {0}")]
    TimestampOrderViolation(String),
    #[error("task {task} has no {what} estimates")]
    MissingEstimates { task: TaskId, what: &'static str },
    #[error("task {0}: estimates are frozen once the task is assigned")]
    EstimatesFrozen(TaskId),
    #[error("unknown participant {0}")]
    UnknownParticipant(ParticipantId),
    #[error("unknown team {0}")]
    UnknownTeam(TeamId),
    #[error("unknown task {0}")]
    UnknownTask(TaskId),
    #[error("unknown sprint {0}")]
    UnknownSprint(SprintKey),
    #[error("{0} already exists")]
    Duplicate(String),
    #[error("participant {participant} is not a member of team {team}")]
    NotTeamMember { participant: ParticipantId, team: TeamId },
    #[error("participant {actor} is not the assignee of task {task}")]
    NotAssignee { task: TaskId, actor: ParticipantId },
    #[error("invalid team: {0}")]
    InvalidTeam(String),
    #[error("invalid sprint: {0}")]
    InvalidSprint(String),
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
}

impl DomainError {
    /// Stable machine-readable code, used by the HTTP error body.
    pub fn code(&self) -> &'static str {
        match self {
            DomainError::LikertOutOfRange { .. } => "LIKERT_OUT_OF_RANGE",
            DomainError::IllegalTransition { .. } => "ILLEGAL_TRANSITION",
            DomainError::TimestampOrderViolation(_) => "TIMESTAMP_ORDER_VIOLATION",
            DomainError::MissingEstimates { .. } => "MISSING_ESTIMATES",
            DomainError::EstimatesFrozen(_) => "ESTIMATES_FROZEN",
            DomainError::UnknownParticipant(_) => "UNKNOWN_PARTICIPANT",
            DomainError::UnknownTeam(_) => "UNKNOWN_TEAM",
            DomainError::UnknownTask(_) => "UNKNOWN_TASK",
            DomainError::UnknownSprint(_) => "UNKNOWN_SPRINT",
            DomainError::Duplicate(_) => "DUPLICATE",
            DomainError::NotTeamMember { .. } => "NOT_TEAM_MEMBER",
            DomainError::NotAssignee { .. } => "NOT_ASSIGNEE",
            DomainError::InvalidTeam(_) => "INVALID_TEAM",
            DomainError::InvalidSprint(_) => "INVALID_SPRINT",
            DomainError::InvalidPayload(_) => "INVALID_PAYLOAD",
        }
    }
}
