use std::collections::BTreeMap;

use serde::Serialize;

use super::ReportError;
use crate::domain::ParticipantId;
use crate::metrics::{pearson_r, ParticipantMetrics, SkillReport};
use crate::rational::{serde_report, serde_report_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub participant: ParticipantId,
    #[serde(with = "serde_report")]
    pub x: Rational,
    #[serde(with = "serde_report")]
    pub y: Rational,
    /// Among the top-k by skills score (skills-vs-external series only).
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSeries {
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<ScatterPoint>,
    /// Absent when the correlation is undefined (fewer than 3 points or a
    /// constant coordinate).
    #[serde(serialize_with = "serde_report_f64::option::serialize")]
    pub r: Option<f64>,
    pub significant_at: Vec<f64>,
}

impl ScatterSeries {
    fn new(x_label: &str, y_label: &str, points: Vec<ScatterPoint>) -> Self {
        let xs: Vec<Rational> = points.iter().map(|p| p.x.clone()).collect();
        let ys: Vec<Rational> = points.iter().map(|p| p.y.clone()).collect();
        let (r, significant_at) = match pearson_r(&xs, &ys) {
            Ok(c) => (Some(c.r), c.significant_at),
            Err(_) => (None, Vec::new()),
        };
        Self { x_label: x_label.into(), y_label: y_label.into(), points, r, significant_at }
    }
}

/// Competence (x) against productivity (y), one point per participant.
pub fn build_competence_productivity_scatter(cohort: &[ParticipantMetrics]) -> Result<ScatterSeries, ReportError> {
    if cohort.is_empty() {
        return Err(ReportError::EmptyCohort);
    }
    let mut points: Vec<ScatterPoint> = cohort
        .iter()
        .map(|m| ScatterPoint { participant: m.participant.clone(), x: m.comp.clone(), y: m.mu.clone(), flagged: false })
        .collect();
    points.sort_by(|a, b| a.participant.cmp(&b.participant));
    Ok(ScatterSeries::new("comp", "mu", points))
}

/// External (examination) score (x) against skills score (y) for participants
/// present in both; the `top_k` highest skills scores are flagged.
pub fn build_skills_vs_external(
    report: &SkillReport,
    external: &BTreeMap<ParticipantId, Rational>,
    top_k: usize,
) -> Result<ScatterSeries, ReportError> {
    let points: Vec<ScatterPoint> = report
        .per_participant
        .iter()
        .filter_map(|(id, scores)| {
            external.get(id).map(|score| ScatterPoint {
                participant: id.clone(),
                x: score.clone(),
                y: scores.s_skills.clone(),
                flagged: false,
            })
        })
        .collect();
    if points.is_empty() {
        return Err(ReportError::NoOverlap);
    }
    let mut points = points;
    let flagged: Vec<ParticipantId> = report
        .ranking
        .iter()
        .filter(|id| external.contains_key(*id))
        .take(top_k)
        .cloned()
        .collect();
    for p in &mut points {
        p.flagged = flagged.contains(&p.participant);
    }
    Ok(ScatterSeries::new("external_score", "S_skills", points))
}
