//! Deterministic skill metrics over a replayed [`WorldState`](crate::domain::WorldState).
//!
//! Everything is computed in exact rational arithmetic; the only floating point
//! value is the Pearson coefficient, whose square is still exact.

mod aggregate;
mod collaboration;
pub mod competence;
pub mod mood;
mod participant;
pub mod pearson;
mod productivity;
pub mod skills;

pub use aggregate::{aggregate_task, TaskAggregates};
pub use collaboration::{compute_collaboration, Collaboration};
pub use competence::{compute_competence, Competence, Outcome};
pub use mood::{compute_mood_deltas, MoodDelta};
pub use participant::{compute_cohort_metrics, compute_participant_metrics, MetricsConfig, ParticipantMetrics};
pub use pearson::{pearson_r, Correlation};
pub use productivity::{compute_productivity, ActiveSprints, Productivity};
pub use skills::{compute_skill_report, score_cohort, MoodMissingPolicy, SkillInputs, SkillReport, SkillScores};

use crate::domain::{TaskId, WorldState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("task {0} has no difficulty or time estimates")]
    NoEstimates(TaskId),
    #[error("task {0} is not completed and reviewed")]
    IncompleteTask(TaskId),
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

impl MetricsError {
    pub fn code(&self) -> &'static str {
        match self {
            MetricsError::NoEstimates(_) => "NO_ESTIMATES",
            MetricsError::IncompleteTask(_) => "INCOMPLETE_TASK",
            MetricsError::EmptyCohort => "EMPTY_COHORT",
            MetricsError::DegenerateInput(_) => "DEGENERATE_INPUT",
        }
    }
}

/// Cohort metrics plus the skills report for a world.
pub fn skill_report(world: &WorldState, config: &MetricsConfig) -> Result<SkillReport, MetricsError> {
    let metrics = compute_cohort_metrics(world, config)?;
    compute_skill_report(&metrics, config.mood_missing)
}
