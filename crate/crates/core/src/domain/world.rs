//! Event-sourced world state.
//!
//! [`WorldState::apply`] validates an event against the current state and only
//! mutates once every check has passed, so a rejected event leaves the state
//! untouched.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::event::*;
use super::time::Timestamp;
use super::{
    DomainError, LikertValue, Participant, ParticipantId, SprintKey, SprintRecord, Task,
    TaskAction, TaskId, TaskStatus, Team, TeamId,
};
use crate::domain::Membership;
use num::Signed;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WorldState {
    pub participants: BTreeMap<ParticipantId, Participant>,
    pub teams: BTreeMap<TeamId, Team>,
    pub tasks: BTreeMap<TaskId, Task>,
    pub sprints: BTreeMap<SprintKey, SprintRecord>,
    /// Id of the last applied event, 0 for an empty log.
    pub last_event_id: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayError {
    /// Structural damage: id gaps or regressions, unparseable or truncated lines.
    #[error("corrupt log at line {line}: {reason}")]
    CorruptLog { line: usize, reason: String },
    /// A well-formed event that is not valid against the state built so far.
    /// `index` is zero-based; the log line number is `index + 1`.
    #[error("invalid event at line {} (event_id {event_id}): {source}", index + 1)]
    InvalidEvent {
        index: usize,
        event_id: u64,
        #[source]
        source: DomainError,
    },
}

impl ReplayError {
    /// One-based line number of the offending entry.
    pub fn line(&self) -> usize {
        match self {
            ReplayError::CorruptLog { line, .. } => *line,
            ReplayError::InvalidEvent { index, .. } => index + 1,
        }
    }
}

/// Rebuilds the world from an ordered log.
pub fn replay<'a, I>(events: I) -> Result<WorldState, ReplayError>
where
    I: IntoIterator<Item = &'a ActivityEvent>,
{
    let mut world = WorldState::default();
    for (index, event) in events.into_iter().enumerate() {
        world.apply_logged(index, event)?;
    }
    Ok(world)
}

impl WorldState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_event_id(&self) -> u64 {
        self.last_event_id + 1
    }

    /// Applies the event at position `index` of a log, checking id continuity.
    pub fn apply_logged(&mut self, index: usize, event: &ActivityEvent) -> Result<(), ReplayError> {
        let expected = self.next_event_id();
        if event.event_id != expected {
            let what = if event.event_id < expected { "regression" } else { "gap" };
            return Err(ReplayError::CorruptLog {
                line: index + 1,
                reason: format!("event_id {what}: expected {expected}, found {}", event.event_id),
            });
        }
        self.apply(event).map_err(|source| ReplayError::InvalidEvent {
            index,
            event_id: event.event_id,
            source,
        })
    }

    /// Validates and applies a single event. Does not check `event_id`.
    pub fn apply(&mut self, event: &ActivityEvent) -> Result<(), DomainError> {
        let ts = event.timestamp;
        let actor = &event.actor;
        match &event.payload {
            Payload::Register(p) => {
                if event.team.is_some() {
                    return Err(DomainError::InvalidPayload("REGISTER carries no team".into()));
                }
                if p.participant != *actor {
                    return Err(DomainError::InvalidPayload(
                        "participants register themselves".into(),
                    ));
                }
                if p.participant.as_str().is_empty() {
                    return Err(DomainError::InvalidPayload("empty participant id".into()));
                }
                if self.participants.contains_key(&p.participant) {
                    return Err(DomainError::Duplicate(format!("participant {}", p.participant)));
                }
                let mut profile = BTreeMap::new();
                for (area, level) in &p.skill_profile {
                    if area.trim().is_empty() {
                        return Err(DomainError::InvalidPayload("empty expertise area".into()));
                    }
                    profile.insert(area.clone(), LikertValue::eleven(*level)?);
                }
                self.participants.insert(
                    p.participant.clone(),
                    Participant {
                        id: p.participant.clone(),
                        display_name: p.display_name.clone(),
                        skill_profile: profile,
                        roles: BTreeMap::new(),
                        registered_at: ts,
                    },
                );
            }
            Payload::CreateTeam(p) => {
                let team_id = self.event_team(event)?;
                self.require_participant(actor)?;
                if team_id.as_str().is_empty() {
                    return Err(DomainError::InvalidPayload("empty team id".into()));
                }
                if self.teams.contains_key(team_id) {
                    return Err(DomainError::Duplicate(format!("team {team_id}")));
                }
                let members: BTreeSet<_> = p.members.iter().cloned().collect();
                let stakeholders: BTreeSet<_> = p.stakeholders.iter().cloned().collect();
                if members.is_empty() {
                    return Err(DomainError::InvalidTeam("a team needs at least one member".into()));
                }
                for id in members.iter().chain(stakeholders.iter()) {
                    self.require_participant(id)?;
                }
                if let Some(both) = members.intersection(&stakeholders).next() {
                    return Err(DomainError::InvalidTeam(format!(
                        "{both} cannot be both member and stakeholder"
                    )));
                }
                if !members.contains(&p.product_owner) && !stakeholders.contains(&p.product_owner) {
                    return Err(DomainError::InvalidTeam(
                        "product owner must be a member or stakeholder".into(),
                    ));
                }
                let member_since = members.iter().map(|m| (m.clone(), ts)).collect();
                self.teams.insert(
                    team_id.clone(),
                    Team {
                        id: team_id.clone(),
                        name: p.name.clone(),
                        members,
                        product_owner: p.product_owner.clone(),
                        stakeholders,
                        member_since,
                    },
                );
            }
            Payload::JoinTeam(p) => {
                let team = self.team(event)?;
                self.require_participant(actor)?;
                self.require_participant(&p.participant)?;
                if !team.is_member(actor) && *actor != p.participant {
                    return Err(DomainError::NotTeamMember {
                        participant: actor.clone(),
                        team: team.id.clone(),
                    });
                }
                if team.is_affiliated(&p.participant) {
                    return Err(DomainError::Duplicate(format!(
                        "{} in team {}",
                        p.participant, team.id
                    )));
                }
                let team_id = team.id.clone();
                let team = self.teams.get_mut(&team_id).expect("checked above");
                match p.membership {
                    Membership::Member => {
                        team.members.insert(p.participant.clone());
                        team.member_since.insert(p.participant.clone(), ts);
                    }
                    Membership::Stakeholder => {
                        team.stakeholders.insert(p.participant.clone());
                    }
                }
            }
            Payload::AssignRole(p) => {
                let team = self.team(event)?;
                self.require_member(team, actor)?;
                if !team.is_affiliated(&p.participant) {
                    return Err(DomainError::NotTeamMember {
                        participant: p.participant.clone(),
                        team: team.id.clone(),
                    });
                }
                if p.role.trim().is_empty() {
                    return Err(DomainError::InvalidPayload("empty role name".into()));
                }
                let team_id = team.id.clone();
                self.participants
                    .get_mut(&p.participant)
                    .expect("affiliated participants are registered")
                    .roles
                    .entry(team_id)
                    .or_default()
                    .insert(p.role.clone());
            }
            Payload::StartSprint(p) => {
                let team = self.team(event)?;
                self.require_affiliated(team, actor)?;
                let team_id = team.id.clone();
                let last = self.last_sprint(&team_id);
                let expected = last.map_or(1, |s| s.index + 1);
                if p.index != expected {
                    return Err(DomainError::InvalidSprint(format!(
                        "team {team_id}: expected sprint {expected}, got {}",
                        p.index
                    )));
                }
                if p.end <= p.start {
                    return Err(DomainError::InvalidSprint("sprint end must follow its start".into()));
                }
                if let Some(prev) = last {
                    if p.start < prev.end {
                        return Err(DomainError::InvalidSprint(format!(
                            "sprint {} starts before sprint {} ends",
                            p.index, prev.index
                        )));
                    }
                }
                let record = SprintRecord {
                    team: team_id,
                    index: p.index,
                    start: p.start,
                    end: p.end,
                    mood_begin: BTreeMap::new(),
                    mood_end: BTreeMap::new(),
                };
                self.sprints.insert(record.key(), record);
            }
            Payload::EndSprint(p) => {
                let team = self.team(event)?;
                self.require_affiliated(team, actor)?;
                let team_id = team.id.clone();
                let last = self
                    .last_sprint(&team_id)
                    .ok_or_else(|| DomainError::UnknownSprint(SprintKey::new(team_id.clone(), p.index)))?;
                if last.index != p.index {
                    return Err(DomainError::InvalidSprint(format!(
                        "only the latest sprint ({}) can be ended",
                        last.index
                    )));
                }
                if p.end <= last.start {
                    return Err(DomainError::InvalidSprint("sprint end must follow its start".into()));
                }
                let key = last.key();
                self.sprints.get_mut(&key).expect("exists").end = p.end;
            }
            Payload::ProposeTask(p) => {
                let team = self.team(event)?;
                self.require_member(team, actor)?;
                if p.task.as_str().is_empty() {
                    return Err(DomainError::InvalidPayload("empty task id".into()));
                }
                if self.tasks.contains_key(&p.task) {
                    return Err(DomainError::Duplicate(format!("task {}", p.task)));
                }
                let mut task = Task::proposed(p.task.clone(), team.id.clone(), actor.clone(), &p.description);
                task.skills_required = p.skills_required.iter().cloned().collect();
                self.tasks.insert(task.id.clone(), task);
            }
            Payload::EstimateDifficulty(r) | Payload::EstimatePriority(r) => {
                let task = self.estimable_task(event, &r.task)?;
                let value = LikertValue::eleven(r.value)?;
                let id = task.id.clone();
                let task = self.tasks.get_mut(&id).expect("exists");
                let map = if matches!(event.payload, Payload::EstimateDifficulty(_)) {
                    &mut task.difficulty_estimates
                } else {
                    &mut task.priority_estimates
                };
                map.insert(actor.clone(), value);
            }
            Payload::EstimateTime(e) => {
                let task = self.estimable_task(event, &e.task)?;
                if e.days.is_negative() {
                    return Err(DomainError::InvalidPayload("time estimate must be non-negative".into()));
                }
                let id = task.id.clone();
                self.tasks
                    .get_mut(&id)
                    .expect("exists")
                    .time_estimates_days
                    .insert(actor.clone(), e.days.clone());
            }
            Payload::AssignTask(p) => {
                let task = self.team_task(event, &p.task)?;
                let team = &self.teams[&task.team];
                self.require_member(team, actor)?;
                self.require_member(team, &p.assignee)?;
                let key = SprintKey::new(team.id.clone(), p.sprint);
                if !self.sprints.contains_key(&key) {
                    return Err(DomainError::UnknownSprint(key));
                }
                let next = task.transition(&TaskAction::Assign {
                    assignee: p.assignee.clone(),
                    sprint: p.sprint,
                    at: ts,
                })?;
                self.tasks.insert(next.id.clone(), next);
            }
            Payload::DeclareConfidence(r) => {
                let task = self.team_task(event, &r.task)?;
                if task.status == TaskStatus::Proposed {
                    return Err(DomainError::IllegalTransition {
                        task: task.id.clone(),
                        from: task.status,
                        action: "declare confidence on",
                    });
                }
                if task.assignee.as_ref() != Some(actor) {
                    return Err(DomainError::NotAssignee { task: task.id.clone(), actor: actor.clone() });
                }
                let value = LikertValue::eleven(r.value)?;
                let id = task.id.clone();
                self.tasks.get_mut(&id).expect("exists").confidence = Some(value);
            }
            Payload::AddCollaborator(p) => {
                let task = self.team_task(event, &p.task)?;
                let team = &self.teams[&task.team];
                self.require_member(team, actor)?;
                self.require_member(team, &p.participant)?;
                if task.status != TaskStatus::Assigned {
                    return Err(DomainError::IllegalTransition {
                        task: task.id.clone(),
                        from: task.status,
                        action: "add a collaborator to",
                    });
                }
                if task.assignee.as_ref() == Some(&p.participant) {
                    return Err(DomainError::InvalidPayload(
                        "the assignee is not their own collaborator".into(),
                    ));
                }
                let id = task.id.clone();
                self.tasks
                    .get_mut(&id)
                    .expect("exists")
                    .collaborators
                    .insert(p.participant.clone());
            }
            Payload::CompleteTask(p) => {
                let task = self.team_task(event, &p.task)?;
                if task.status == TaskStatus::Assigned && task.assignee.as_ref() != Some(actor) {
                    return Err(DomainError::NotAssignee { task: task.id.clone(), actor: actor.clone() });
                }
                let next = task.transition(&TaskAction::Complete { at: ts })?;
                self.tasks.insert(next.id.clone(), next);
            }
            Payload::ReviewQuality(r) => {
                let task = self.team_task(event, &r.task)?;
                self.require_member(&self.teams[&task.team], actor)?;
                if task.status != TaskStatus::Completed {
                    return Err(DomainError::IllegalTransition {
                        task: task.id.clone(),
                        from: task.status,
                        action: "review",
                    });
                }
                let value = LikertValue::eleven(r.value)?;
                let id = task.id.clone();
                self.tasks
                    .get_mut(&id)
                    .expect("exists")
                    .quality_reviews
                    .insert(actor.clone(), value);
            }
            Payload::ReportMoodBegin(m) | Payload::ReportMoodEnd(m) => {
                let team = self.team(event)?;
                self.require_member(team, actor)?;
                let key = SprintKey::new(team.id.clone(), m.sprint);
                if !self.sprints.contains_key(&key) {
                    return Err(DomainError::UnknownSprint(key));
                }
                let value = LikertValue::five(m.value)?;
                let sprint = self.sprints.get_mut(&key).expect("exists");
                let map = if matches!(event.payload, Payload::ReportMoodBegin(_)) {
                    &mut sprint.mood_begin
                } else {
                    &mut sprint.mood_end
                };
                map.insert(actor.clone(), value);
            }
        }
        self.last_event_id = self.last_event_id.max(event.event_id);
        Ok(())
    }

    /// Latest sprint of a team by index.
    pub fn last_sprint(&self, team: &TeamId) -> Option<&SprintRecord> {
        self.sprints_of(team).next_back()
    }

    pub fn sprints_of<'a>(&'a self, team: &TeamId) -> impl DoubleEndedIterator<Item = &'a SprintRecord> + 'a {
        let lo = SprintKey::new(team.clone(), 0);
        let hi = SprintKey::new(team.clone(), u32::MAX);
        self.sprints.range(lo..=hi).map(|(_, s)| s)
    }

    /// The latest sprint of `team` that has started at `at`.
    pub fn current_sprint(&self, team: &TeamId, at: &Timestamp) -> Option<&SprintRecord> {
        self.sprints_of(team).rev().find(|s| s.start <= *at)
    }

    /// Teams in which the participant is a (non-stakeholder) member.
    pub fn teams_of<'a>(&'a self, participant: &'a ParticipantId) -> impl Iterator<Item = &'a Team> + 'a {
        self.teams.values().filter(move |t| t.is_member(participant))
    }

    /// Everyone who is a member of at least one team, in id order.
    pub fn team_members(&self) -> Vec<ParticipantId> {
        let set: BTreeSet<&ParticipantId> = self.teams.values().flat_map(|t| t.members.iter()).collect();
        set.into_iter().cloned().collect()
    }

    /// Highest sprint index across all teams, 0 when none exist.
    pub fn max_sprint_index(&self) -> u32 {
        self.sprints.keys().map(|k| k.index).max().unwrap_or(0)
    }

    /// Verifies every entity-level invariant; used by property tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        for task in self.tasks.values() {
            task.check_invariants().map_err(|e| format!("task {}: {e}", task.id))?;
            if task.time_estimates_days.values().any(|d| d.is_negative()) {
                return Err(format!("task {}: negative time estimate", task.id));
            }
        }
        for team in self.teams.values() {
            if team.members.is_empty() {
                return Err(format!("team {} has no members", team.id));
            }
            if !team.is_affiliated(&team.product_owner) {
                return Err(format!("team {} product owner unaffiliated", team.id));
            }
            for (expected, sprint) in (1..).zip(self.sprints_of(&team.id)) {
                if sprint.index != expected || sprint.end <= sprint.start {
                    return Err(format!("team {} sprint {} malformed", team.id, sprint.index));
                }
                for id in sprint.mood_begin.keys().chain(sprint.mood_end.keys()) {
                    if !team.is_member(id) {
                        return Err(format!("mood from non-member {id}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn event_team<'e>(&self, event: &'e ActivityEvent) -> Result<&'e TeamId, DomainError> {
        event
            .team
            .as_ref()
            .ok_or_else(|| DomainError::InvalidPayload(format!("{:?} requires a team", event.kind())))
    }

    fn team(&self, event: &ActivityEvent) -> Result<&Team, DomainError> {
        let id = self.event_team(event)?;
        self.teams.get(id).ok_or_else(|| DomainError::UnknownTeam(id.clone()))
    }

    fn team_task(&self, event: &ActivityEvent, task: &TaskId) -> Result<&Task, DomainError> {
        let team = self.team(event)?;
        let task = self.tasks.get(task).ok_or_else(|| DomainError::UnknownTask(task.clone()))?;
        if task.team != team.id {
            return Err(DomainError::InvalidPayload(format!(
                "task {} belongs to team {}, not {}",
                task.id, task.team, team.id
            )));
        }
        Ok(task)
    }

    fn estimable_task(&self, event: &ActivityEvent, task: &TaskId) -> Result<&Task, DomainError> {
        let task = self.team_task(event, task)?;
        self.require_member(&self.teams[&task.team], &event.actor)?;
        if task.status != TaskStatus::Proposed {
            return Err(DomainError::EstimatesFrozen(task.id.clone()));
        }
        Ok(task)
    }

    fn require_participant(&self, id: &ParticipantId) -> Result<(), DomainError> {
        if self.participants.contains_key(id) {
            Ok(())
        } else {
            Err(DomainError::UnknownParticipant(id.clone()))
        }
    }

    fn require_member(&self, team: &Team, id: &ParticipantId) -> Result<(), DomainError> {
        self.require_participant(id)?;
        if team.is_member(id) {
            Ok(())
        } else {
            Err(DomainError::NotTeamMember { participant: id.clone(), team: team.id.clone() })
        }
    }

    fn require_affiliated(&self, team: &Team, id: &ParticipantId) -> Result<(), DomainError> {
        self.require_participant(id)?;
        if team.is_affiliated(id) {
            Ok(())
        } else {
            Err(DomainError::NotTeamMember { participant: id.clone(), team: team.id.clone() })
        }
    }
}
