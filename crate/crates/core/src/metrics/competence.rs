//! Beta-reputation competence.
//!
//! Each completed, reviewed task contributes its difficulty either to the
//! positive evidence `alpha` (finished by its deadline with mean quality above
//! 5) or to the negative evidence `beta` (late, or quality at most 5).
//! Competence is the Beta posterior mean `(alpha + 1) / (alpha + beta + 2)`,
//! which is exactly 1/2 with no evidence.

use num::{One, Zero};
use serde::Serialize;

use super::{MetricsError, TaskAggregates};
use crate::rational::{int, serde_report, Rational};

/// Mean quality must strictly exceed this to count as satisfactory.
pub const QUALITY_THRESHOLD: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// On time and satisfactory quality.
    Success,
    /// Late or unsatisfactory.
    Failure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Competence {
    #[serde(with = "serde_report")]
    pub alpha: Rational,
    #[serde(with = "serde_report")]
    pub beta: Rational,
    #[serde(with = "serde_report")]
    pub comp: Rational,
}

impl Competence {
    pub fn from_evidence(alpha: Rational, beta: Rational) -> Self {
        let a1 = &alpha + Rational::one();
        let comp = &a1 / (&a1 + &beta + Rational::one());
        Self { alpha, beta, comp }
    }

    /// The no-evidence prior.
    pub fn prior() -> Self {
        Self::from_evidence(Rational::zero(), Rational::zero())
    }
}

/// Classifies one completed, reviewed task.
pub fn classify(task: &TaskAggregates) -> Result<Outcome, MetricsError> {
    let incomplete = || MetricsError::IncompleteTask(task.task.clone());
    let actual = task.actual_days.as_ref().ok_or_else(incomplete)?;
    let est = task.est_days.as_ref().ok_or_else(incomplete)?;
    let quality = task.quality.as_ref().ok_or_else(incomplete)?;
    let on_time = actual <= est;
    let satisfactory = *quality > int(QUALITY_THRESHOLD);
    Ok(if on_time && satisfactory { Outcome::Success } else { Outcome::Failure })
}

/// Folds a participant's scorable task history into `(alpha, beta, comp)`.
pub fn compute_competence<'a, I>(history: I) -> Result<Competence, MetricsError>
where
    I: IntoIterator<Item = &'a TaskAggregates>,
{
    let mut alpha = Rational::zero();
    let mut beta = Rational::zero();
    for task in history {
        match classify(task)? {
            Outcome::Success => alpha += &task.difficulty,
            Outcome::Failure => beta += &task.difficulty,
        }
    }
    Ok(Competence::from_evidence(alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn task(d: i64, late_by: Rational, quality: Rational) -> TaskAggregates {
        TaskAggregates {
            task: "k".into(),
            difficulty: int(d),
            priority_mean: None,
            est_days: Some(int(3)),
            actual_days: Some(int(3) + late_by),
            quality: Some(quality),
        }
    }

    #[test]
    fn empty_history_is_one_half() {
        let c = compute_competence(&[]).unwrap();
        assert_eq!(c.comp, ratio(1, 2));
        assert_eq!(c, Competence::prior());
    }

    #[test]
    fn single_success() {
        let c = compute_competence(&[task(10, int(-1), int(8))]).unwrap();
        assert_eq!((c.alpha.clone(), c.beta.clone()), (int(10), int(0)));
        assert_eq!(c.comp, ratio(11, 12));
    }

    #[test]
    fn success_and_late_task() {
        let c = compute_competence(&[task(4, int(-1), int(7)), task(6, int(1), int(9))]).unwrap();
        assert_eq!((c.alpha.clone(), c.beta.clone()), (int(4), int(6)));
        assert_eq!(c.comp, ratio(5, 12));
    }

    #[test]
    fn quality_five_is_failure() {
        let c = compute_competence(&[task(3, int(-1), int(5))]).unwrap();
        assert_eq!((c.alpha, c.beta), (int(0), int(3)));
    }

    #[test]
    fn exactly_on_deadline_is_on_time() {
        let t = task(3, int(0), ratio(51, 10));
        assert_eq!(classify(&t).unwrap(), Outcome::Success);
        // one millisecond late
        let t = task(3, ratio(1, 86_400_000), int(9));
        assert_eq!(classify(&t).unwrap(), Outcome::Failure);
    }

    #[test]
    fn missing_review_is_incomplete() {
        let mut t = task(3, int(0), int(9));
        t.quality = None;
        assert!(matches!(compute_competence(&[t]), Err(MetricsError::IncompleteTask(_))));
    }
}
