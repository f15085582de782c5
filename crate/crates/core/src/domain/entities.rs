use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::time::Timestamp;
use super::{LikertValue, ParticipantId, TeamId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Participant {
    pub id: ParticipantId,
    pub display_name: String,
    /// Self-assessed expertise, 11-point scale. Stored, never scored.
    pub skill_profile: BTreeMap<String, LikertValue>,
    pub roles: BTreeMap<TeamId, BTreeSet<String>>,
    pub registered_at: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    Stakeholder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Team {
    pub id: TeamId,
    pub name: String,
    pub members: BTreeSet<ParticipantId>,
    pub product_owner: ParticipantId,
    pub stakeholders: BTreeSet<ParticipantId>,
    /// When each member joined; drives the productivity denominator.
    pub member_since: BTreeMap<ParticipantId, Timestamp>,
}

impl Team {
    pub fn is_member(&self, id: &ParticipantId) -> bool {
        self.members.contains(id)
    }

    pub fn is_affiliated(&self, id: &ParticipantId) -> bool {
        self.members.contains(id) || self.stakeholders.contains(id)
    }
}

/// Identifies one sprint of one team.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SprintKey {
    pub team: TeamId,
    pub index: u32,
}

impl SprintKey {
    pub fn new(team: TeamId, index: u32) -> Self {
        Self { team, index }
    }
}

impl fmt::Display for SprintKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.team, self.index)
    }
}

/// One week-long sprint of a team, with the mood reports taken at its
/// planning (begin) and review (end) meetings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SprintRecord {
    pub team: TeamId,
    pub index: u32,
    pub start: Timestamp,
    pub end: Timestamp,
    pub mood_begin: BTreeMap<ParticipantId, LikertValue>,
    pub mood_end: BTreeMap<ParticipantId, LikertValue>,
}

impl SprintRecord {
    pub fn key(&self) -> SprintKey {
        SprintKey::new(self.team.clone(), self.index)
    }

    pub fn contains(&self, ts: &Timestamp) -> bool {
        self.start <= *ts && *ts < self.end
    }
}
