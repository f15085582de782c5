use serde::Serialize;

use super::MetricsError;
use crate::domain::{time, LikertValue, Task, TaskId, TaskStatus};
use crate::rational::{self, serde_report, Rational};

/// Crowd-estimate aggregates of one task.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskAggregates {
    pub task: TaskId,
    /// Mean difficulty, the task's workload weight.
    #[serde(with = "serde_report")]
    pub difficulty: Rational,
    #[serde(with = "serde_report::option")]
    pub priority_mean: Option<Rational>,
    /// Mean estimated days; the deadline offset from assignment.
    #[serde(with = "serde_report::option")]
    pub est_days: Option<Rational>,
    /// Days from assignment to completion, present iff completed.
    #[serde(with = "serde_report::option")]
    pub actual_days: Option<Rational>,
    /// Mean peer-review quality, present iff reviewed.
    #[serde(with = "serde_report::option")]
    pub quality: Option<Rational>,
}

fn likert_mean<'a>(values: impl Iterator<Item = &'a LikertValue>) -> Option<Rational> {
    let as_rational: Vec<Rational> = values.map(|v| rational::int(v.value() as i64)).collect();
    rational::mean(as_rational.iter())
}

pub fn aggregate_task(task: &Task) -> Result<TaskAggregates, MetricsError> {
    let difficulty = likert_mean(task.difficulty_estimates.values())
        .ok_or_else(|| MetricsError::NoEstimates(task.id.clone()))?;
    let est_days = rational::mean(task.time_estimates_days.values());
    if task.status != TaskStatus::Proposed && est_days.is_none() {
        return Err(MetricsError::NoEstimates(task.id.clone()));
    }
    let actual_days = match (task.status, task.assigned_at, task.completed_at) {
        (TaskStatus::Completed, Some(a), Some(c)) => Some(time::days_between(&a, &c)),
        _ => None,
    };
    Ok(TaskAggregates {
        task: task.id.clone(),
        difficulty,
        priority_mean: likert_mean(task.priority_estimates.values()),
        est_days,
        actual_days,
        quality: likert_mean(task.quality_reviews.values()),
    })
}

impl TaskAggregates {
    /// Completed and reviewed, so it can be scored for competence.
    pub fn is_scorable(&self) -> bool {
        self.actual_days.is_some() && self.quality.is_some() && self.est_days.is_some()
    }
}
