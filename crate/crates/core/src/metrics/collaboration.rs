//! Collaborators per task, per week.
//!
//! A task counts toward the sprint it was assigned in. From a participant's
//! point of view its co-worker count is the assignee plus collaborators,
//! minus the participant themself.

use std::collections::BTreeMap;

use num::Zero;
use crate::domain::{ParticipantId, TaskStatus, WorldState};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Collaboration {
    /// Mean co-worker count per task, for weeks with at least one task.
    pub per_week: BTreeMap<u32, Rational>,
    /// Mean of the defined weekly values; 0 with no weeks.
    pub col: Rational,
}

pub fn compute_collaboration(participant: &ParticipantId, world: &WorldState) -> Collaboration {
    let mut counts: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    for task in world.tasks.values() {
        if task.status == TaskStatus::Proposed {
            continue;
        }
        let Some(week) = task.sprint_assigned else { continue };
        if !task.workers().any(|w| w == participant) {
            continue;
        }
        let co_workers = task.workers().count() as i64 - 1;
        counts.entry(week).or_default().push(int(co_workers));
    }
    let per_week: BTreeMap<u32, Rational> = counts
        .into_iter()
        .filter_map(|(week, values)| rational::mean(values.iter()).map(|m| (week, m)))
        .collect();
    let col = rational::mean(per_week.values()).unwrap_or_else(Rational::zero);
    Collaboration { per_week, col }
}
