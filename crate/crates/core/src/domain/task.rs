use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::time::Timestamp;
use super::{DomainError, LikertValue, ParticipantId, TaskId, TeamId};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TaskStatus {
    Proposed,
    Assigned,
    Completed,
}

impl fmt::Display for TaskStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskStatus::Proposed => "Proposed",
            TaskStatus::Assigned => "Assigned",
            TaskStatus::Completed => "Completed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Task {
    pub id: TaskId,
    pub team: TeamId,
    pub proposer: ParticipantId,
    pub description: String,
    pub skills_required: BTreeSet<String>,
    pub status: TaskStatus,
    pub difficulty_estimates: BTreeMap<ParticipantId, LikertValue>,
    pub priority_estimates: BTreeMap<ParticipantId, LikertValue>,
    #[serde(serialize_with = "serialize_days")]
    pub time_estimates_days: BTreeMap<ParticipantId, Rational>,
    pub assignee: Option<ParticipantId>,
    pub collaborators: BTreeSet<ParticipantId>,
    pub confidence: Option<LikertValue>,
    pub assigned_at: Option<Timestamp>,
    pub completed_at: Option<Timestamp>,
    pub quality_reviews: BTreeMap<ParticipantId, LikertValue>,
    pub sprint_assigned: Option<u32>,
}

fn serialize_days<S: serde::Serializer>(
    map: &BTreeMap<ParticipantId, Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(k, &rational::to_fraction_string(v))?;
    }
    m.end()
}

/// A lifecycle step requested for a task.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskAction {
    Assign {
        assignee: ParticipantId,
        sprint: u32,
        at: Timestamp,
    },
    Complete {
        at: Timestamp,
    },
}

impl TaskAction {
    fn name(&self) -> &'static str {
        match self {
            TaskAction::Assign { .. } => "assign",
            TaskAction::Complete { .. } => "complete",
        }
    }
}

impl Task {
    pub fn proposed(
        id: TaskId,
        team: TeamId,
        proposer: ParticipantId,
        description: impl Into<String>,
    ) -> Self {
        Self {
            id,
            team,
            proposer,
            description: description.into(),
            skills_required: BTreeSet::new(),
            status: TaskStatus::Proposed,
            difficulty_estimates: BTreeMap::new(),
            priority_estimates: BTreeMap::new(),
            time_estimates_days: BTreeMap::new(),
            assignee: None,
            collaborators: BTreeSet::new(),
            confidence: None,
            assigned_at: None,
            completed_at: None,
            quality_reviews: BTreeMap::new(),
            sprint_assigned: None,
        }
    }

    /// Participants who worked on the task: the assignee plus collaborators.
    pub fn workers(&self) -> impl Iterator<Item = &ParticipantId> {
        self.assignee.iter().chain(self.collaborators.iter())
    }

    pub fn transition(&self, action: &TaskAction) -> Result<Task, DomainError> {
        let illegal = || DomainError::IllegalTransition {
            task: self.id.clone(),
            from: self.status,
            action: action.name(),
        };
        match (self.status, action) {
            (TaskStatus::Proposed, TaskAction::Assign { assignee, sprint, at }) => {
                if self.difficulty_estimates.is_empty() {
                    return Err(DomainError::MissingEstimates {
                        task: self.id.clone(),
                        what: "difficulty",
                    });
                }
                if self.time_estimates_days.is_empty() {
                    return Err(DomainError::MissingEstimates {
                        task: self.id.clone(),
                        what: "time",
                    });
                }
                if *sprint == 0 {
                    return Err(DomainError::InvalidSprint("sprint indices start at 1".into()));
                }
                if self.collaborators.contains(assignee) {
                    return Err(DomainError::InvalidPayload(format!(
                        "{assignee} is already a collaborator on {}",
                        self.id
                    )));
                }
                let mut next = self.clone();
                next.status = TaskStatus::Assigned;
                next.assignee = Some(assignee.clone());
                next.assigned_at = Some(*at);
                next.sprint_assigned = Some(*sprint);
                Ok(next)
            }
            (TaskStatus::Assigned, TaskAction::Complete { at }) => {
                let assigned_at = self.assigned_at.expect("assigned task carries assigned_at");
                if *at < assigned_at {
                    return Err(DomainError::TimestampOrderViolation(format!(
                        "task {} completed at {} before assignment at {}",
                        self.id,
                        super::time::format(at),
                        super::time::format(&assigned_at)
                    )));
                }
                let mut next = self.clone();
                next.status = TaskStatus::Completed;
                next.completed_at = Some(*at);
                Ok(next)
            }
            _ => Err(illegal()),
        }
    }

    /// Checks the structural invariants tied to the lifecycle status.
    pub fn check_invariants(&self) -> Result<(), String> {
        match self.status {
            TaskStatus::Proposed => {
                if self.assignee.is_some() || self.assigned_at.is_some() || self.completed_at.is_some() {
                    return Err("proposed task carries assignment data".into());
                }
                if self.confidence.is_some() {
                    return Err("proposed task carries confidence".into());
                }
            }
            TaskStatus::Assigned => {
                if self.assignee.is_none() || self.assigned_at.is_none() || self.completed_at.is_some() {
                    return Err("assigned task has inconsistent timestamps".into());
                }
            }
            TaskStatus::Completed => match (self.assignee.as_ref(), self.assigned_at, self.completed_at) {
                (Some(_), Some(a), Some(c)) if c >= a => {}
                _ => return Err("completed task has inconsistent timestamps".into()),
            },
        }
        if let Some(a) = &self.assignee {
            if self.collaborators.contains(a) {
                return Err("assignee listed as collaborator".into());
            }
        }
        Ok(())
    }
}

/// Applies one lifecycle step, returning the updated task.
pub fn transition_task(task: &Task, action: &TaskAction) -> Result<Task, DomainError> {
    task.transition(action)
}
