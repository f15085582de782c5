//! Technical productivity: completed workload (summed difficulty) per active sprint.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{aggregate_task, MetricsError};
use crate::domain::{ParticipantId, SprintKey, TaskStatus, WorldState};
use crate::rational::{int, serde_report, Rational};

/// Which sprints form the productivity denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActiveSprints {
    /// Sprints of the participant's teams that ended after they joined, plus
    /// any sprint in which they were assigned work.
    #[default]
    #[serde(alias = "Membership")]
    Membership,
    /// Every sprint of every team the participant belongs to.
    #[serde(alias = "AllTeamSprints")]
    AllTeamSprints,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Productivity {
    #[serde(with = "serde_report")]
    pub mu: Rational,
    /// Completed workload by sprint index.
    #[serde(skip)]
    pub workload_by_sprint: BTreeMap<u32, Rational>,
    pub active_sprints: u32,
}

pub fn compute_productivity(
    participant: &ParticipantId,
    world: &WorldState,
    denominator: ActiveSprints,
) -> Result<Productivity, MetricsError> {
    let mut active: BTreeSet<SprintKey> = BTreeSet::new();
    for team in world.teams_of(participant) {
        // stakeholders do no sprint work
        let Some(joined) = team.member_since.get(participant) else { continue };
        for sprint in world.sprints_of(&team.id) {
            if denominator == ActiveSprints::AllTeamSprints || sprint.end > *joined {
                active.insert(sprint.key());
            }
        }
    }

    let mut workload_by_sprint: BTreeMap<u32, Rational> = BTreeMap::new();
    for task in world.tasks.values() {
        if task.assignee.as_ref() != Some(participant) {
            continue;
        }
        let Some(sprint) = task.sprint_assigned else { continue };
        active.insert(SprintKey::new(task.team.clone(), sprint));
        if task.status == TaskStatus::Completed {
            let agg = aggregate_task(task)?;
            *workload_by_sprint.entry(sprint).or_insert_with(Rational::zero) += agg.difficulty;
        }
    }

    let total: Rational = workload_by_sprint.values().sum();
    let active_sprints = active.len() as u32;
    let mu = if active_sprints == 0 {
        Rational::zero()
    } else {
        total / int(active_sprints as i64)
    };
    Ok(Productivity { mu, workload_by_sprint, active_sprints })
}
