//! Per-participant metric bundle and cohort-wide evaluation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    aggregate_task, compute_collaboration, compute_competence, compute_mood_deltas,
    compute_productivity, mood, ActiveSprints, MetricsError, MoodDelta, MoodMissingPolicy,
};
use crate::domain::{ParticipantId, TaskId, TaskStatus, WorldState};
use crate::par::{self, Strategy};
use crate::rational::{serde_report, serde_report_map, Rational};

/// Knobs for the policy choices the metrics leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricsConfig {
    pub active_sprints: ActiveSprints,
    pub mood_missing: MoodMissingPolicy,
    #[serde(skip)]
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticipantMetrics {
    pub participant: ParticipantId,
    #[serde(with = "serde_report")]
    pub mu: Rational,
    #[serde(with = "serde_report")]
    pub comp: Rational,
    #[serde(with = "serde_report")]
    pub alpha: Rational,
    #[serde(with = "serde_report")]
    pub beta: Rational,
    #[serde(with = "serde_report")]
    pub col: Rational,
    #[serde(serialize_with = "serde_report_map::serialize")]
    pub collaboration_per_week: BTreeMap<u32, Rational>,
    pub mood_deltas: Vec<MoodDelta>,
    /// Mean absolute mood change; `None` without any complete report pair.
    #[serde(with = "serde_report::option")]
    pub stab: Option<Rational>,
    /// Tasks the participant has been assigned.
    pub history: BTreeSet<TaskId>,
    pub active_sprints: u32,
}

pub fn compute_participant_metrics(
    participant: &ParticipantId,
    world: &WorldState,
    config: &MetricsConfig,
) -> Result<ParticipantMetrics, MetricsError> {
    let mut history = BTreeSet::new();
    let mut scorable = Vec::new();
    for task in world.tasks.values() {
        if task.assignee.as_ref() != Some(participant) {
            continue;
        }
        history.insert(task.id.clone());
        if task.status == TaskStatus::Completed {
            let agg = aggregate_task(task)?;
            if agg.is_scorable() {
                scorable.push(agg);
            }
        }
    }
    let competence = compute_competence(&scorable)?;
    let productivity = compute_productivity(participant, world, config.active_sprints)?;
    let collaboration = compute_collaboration(participant, world);
    let sprints = world.teams_of(participant).flat_map(|t| world.sprints_of(&t.id));
    let mood_deltas = compute_mood_deltas(participant, sprints);
    let stab = mood::stability(&mood_deltas);

    Ok(ParticipantMetrics {
        participant: participant.clone(),
        mu: productivity.mu,
        comp: competence.comp,
        alpha: competence.alpha,
        beta: competence.beta,
        col: collaboration.col,
        collaboration_per_week: collaboration.per_week,
        mood_deltas,
        stab,
        history,
        active_sprints: productivity.active_sprints,
    })
}

/// Metrics for every team member, in participant-id order.
pub fn compute_cohort_metrics(
    world: &WorldState,
    config: &MetricsConfig,
) -> Result<Vec<ParticipantMetrics>, MetricsError> {
    let cohort = world.team_members();
    par::try_map(config.strategy, &cohort, |id| compute_participant_metrics(id, world, config))
}
