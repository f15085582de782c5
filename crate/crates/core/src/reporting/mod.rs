//! Analysis artifacts built from metric outputs, with CSV and JSON export.
//!
//! CSV output follows RFC 4180 (header row, CRLF line endings); numbers are
//! fixed-point with six decimals, absent values are empty fields. JSON output
//! mirrors the type fields. Both are pure functions of their inputs.

mod heatmap;
mod scatter;

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

pub use heatmap::{assemble, build_heatmap, rank_statistic, HeatmapMatrix, HeatmapMetric};
pub use scatter::{build_competence_productivity_scatter, build_skills_vs_external, ScatterPoint, ScatterSeries};

use crate::domain::{ParticipantId, WorldState};
use crate::metrics::{self, MetricsConfig, MetricsError, SkillReport};
use crate::rational::{self, to_report, Rational};

/// Default number of highest skills scores flagged in the external comparison.
pub const DEFAULT_TOP_K: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no sprints recorded")]
    NoSprints,
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("no participant has both a skills score and an external score")]
    NoOverlap,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("external scores: {0}")]
    ExternalScores(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ReportError {
    pub fn code(&self) -> &'static str {
        match self {
            ReportError::NoSprints => "NO_SPRINTS",
            ReportError::EmptyCohort => "EMPTY_COHORT",
            ReportError::NoOverlap => "NO_OVERLAP",
            ReportError::Metrics(e) => e.code(),
            ReportError::ExternalScores(_) => "INVALID_EXTERNAL_SCORES",
            ReportError::Csv(_) => "CSV_ERROR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Skills,
    Scatter,
    HeatmapCollab,
    HeatmapMood,
    SkillsVsExternal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Builds and serializes one artifact. The CLI and HTTP service both go
/// through here, so their outputs agree byte for byte.
pub fn render(
    kind: ReportKind,
    format: Format,
    world: &WorldState,
    config: &MetricsConfig,
    external: Option<&BTreeMap<ParticipantId, Rational>>,
    top_k: usize,
) -> Result<String, ReportError> {
    match kind {
        ReportKind::Skills => {
            let report = metrics::skill_report(world, config)?;
            Ok(match format {
                Format::Csv => skills_csv(&report)?,
                Format::Json => to_json(&report),
            })
        }
        ReportKind::Scatter => {
            let cohort = metrics::compute_cohort_metrics(world, config)?;
            let series = build_competence_productivity_scatter(&cohort)?;
            series_out(&series, format)
        }
        ReportKind::SkillsVsExternal => {
            let external = external.ok_or(ReportError::NoOverlap)?;
            let report = metrics::skill_report(world, config)?;
            let series = build_skills_vs_external(&report, external, top_k)?;
            series_out(&series, format)
        }
        ReportKind::HeatmapCollab | ReportKind::HeatmapMood => {
            let metric = if kind == ReportKind::HeatmapCollab {
                HeatmapMetric::CollaboratorsPerTask
            } else {
                HeatmapMetric::IntraWeekMoodChange
            };
            let matrix = build_heatmap(metric, world, config.strategy)?;
            Ok(match format {
                Format::Csv => heatmap_csv(&matrix)?,
                Format::Json => to_json(&matrix),
            })
        }
    }
}

fn series_out(series: &ScatterSeries, format: Format) -> Result<String, ReportError> {
    Ok(match format {
        Format::Csv => scatter_csv(series)?,
        Format::Json => to_json(series),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, ReportError> {
    let bytes = w.into_inner().map_err(|e| ReportError::ExternalScores(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt(v: Option<&Rational>) -> String {
    v.map(to_report).unwrap_or_default()
}

pub const SKILLS_HEADER: [&str; 13] = [
    "rank", "participant_id", "mu", "comp", "alpha", "beta", "col", "stab", "S_mu", "S_comp", "S_col", "S_dm",
    "S_skills",
];

/// One row per ranked participant, best first.
pub fn skills_csv(report: &SkillReport) -> Result<String, ReportError> {
    let mut w = writer();
    w.write_record(SKILLS_HEADER)?;
    for (rank, id) in report.ranking.iter().enumerate() {
        let raw = &report.raw[id];
        let s = &report.per_participant[id];
        w.write_record([
            (rank + 1).to_string(),
            id.to_string(),
            to_report(&raw.mu),
            to_report(&raw.comp),
            to_report(&raw.alpha),
            to_report(&raw.beta),
            to_report(&raw.col),
            opt(raw.stab.as_ref()),
            to_report(&s.s_mu),
            to_report(&s.s_comp),
            to_report(&s.s_col),
            to_report(&s.s_dm),
            to_report(&s.s_skills),
        ])?;
    }
    finish(w)
}

pub fn scatter_csv(series: &ScatterSeries) -> Result<String, ReportError> {
    let mut w = writer();
    w.write_record(["participant_id", series.x_label.as_str(), series.y_label.as_str(), "flagged"])?;
    for p in &series.points {
        w.write_record([p.participant.to_string(), to_report(&p.x), to_report(&p.y), p.flagged.to_string()])?;
    }
    finish(w)
}

pub fn heatmap_csv(matrix: &HeatmapMatrix) -> Result<String, ReportError> {
    let mut w = writer();
    let mut header = vec!["participant_id".to_string()];
    header.extend(matrix.cols.iter().map(|c| format!("week_{c}")));
    w.write_record(&header)?;
    for (id, cells) in matrix.rows.iter().zip(&matrix.cells) {
        let mut record = vec![id.to_string()];
        record.extend(cells.iter().map(|c| opt(c.as_ref())));
        w.write_record(&record)?;
    }
    finish(w)
}

/// Reads `participant_id,score` CSV (header required).
pub fn parse_external_scores<R: Read>(reader: R) -> Result<BTreeMap<ParticipantId, Rational>, ReportError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "participant_id" || &headers[1] != "score" {
        return Err(ReportError::ExternalScores("expected header participant_id,score".into()));
    }
    let mut out = BTreeMap::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let id = record.get(0).unwrap_or_default();
        if id.is_empty() {
            return Err(ReportError::ExternalScores(format!("row {}: empty participant_id", i + 2)));
        }
        let score = rational::parse(record.get(1).unwrap_or_default())
            .map_err(|e| ReportError::ExternalScores(format!("row {}: {e}", i + 2)))?;
        if out.insert(ParticipantId::from(id), score).is_some() {
            return Err(ReportError::ExternalScores(format!("row {}: duplicate participant {id}", i + 2)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{SkillScores, ParticipantMetrics};
    use crate::rational::int;
    use std::collections::{BTreeMap, BTreeSet};

    fn report_with(skills: &[(&str, i64)]) -> SkillReport {
        let mut per = BTreeMap::new();
        let mut raw = BTreeMap::new();
        for (id, s) in skills {
            per.insert(
                ParticipantId::from(*id),
                SkillScores {
                    s_mu: int(0),
                    s_comp: int(0),
                    s_col: int(0),
                    s_dm: int(0),
                    s_skills: int(*s),
                    stab_used: int(0),
                },
            );
            raw.insert(
                ParticipantId::from(*id),
                ParticipantMetrics {
                    participant: ParticipantId::from(*id),
                    mu: int(0),
                    comp: int(0),
                    alpha: int(0),
                    beta: int(0),
                    col: int(0),
                    collaboration_per_week: BTreeMap::new(),
                    mood_deltas: vec![],
                    stab: None,
                    history: BTreeSet::new(),
                    active_sprints: 0,
                },
            );
        }
        let mut ranking: Vec<ParticipantId> = per.keys().cloned().collect();
        ranking.sort_by(|a, b| per[b].s_skills.cmp(&per[a].s_skills).then(a.cmp(b)));
        SkillReport { cohort: per.keys().cloned().collect(), ranking, per_participant: per, raw, excluded: vec![] }
    }

    #[test]
    fn top_one_flag() {
        let report = report_with(&[("a", 70), ("b", 20), ("c", 40)]);
        let ext: BTreeMap<_, _> = [("a", 80), ("b", 85), ("c", 90)].iter().map(|(k, v)| ((*k).into(), int(*v))).collect();
        let s = build_skills_vs_external(&report, &ext, 1).unwrap();
        let flagged: Vec<_> = s.points.iter().filter(|p| p.flagged).map(|p| p.participant.as_str()).collect();
        assert_eq!(flagged, vec!["a"]);
    }

    #[test]
    fn constant_external_has_no_r() {
        let report = report_with(&[("a", 70), ("b", 20), ("c", 40)]);
        let ext: BTreeMap<_, _> = ["a", "b", "c"].iter().map(|k| ((*k).into(), int(90))).collect();
        let s = build_skills_vs_external(&report, &ext, 3).unwrap();
        assert_eq!(s.points.len(), 3);
        assert!(s.r.is_none());
        assert!(s.significant_at.is_empty());
    }

    #[test]
    fn empty_external_no_overlap() {
        let report = report_with(&[("a", 70)]);
        assert!(matches!(build_skills_vs_external(&report, &BTreeMap::new(), 3), Err(ReportError::NoOverlap)));
    }

    #[test]
    fn single_participant_scatter() {
        let r = report_with(&[("a", 1)]);
        let cohort: Vec<ParticipantMetrics> = r.raw.values().cloned().collect();
        let s = build_competence_productivity_scatter(&cohort).unwrap();
        assert_eq!(s.points.len(), 1);
        assert!(s.r.is_none());
        let json = to_json(&s);
        assert!(json.contains("\"r\": null"));
        assert!(build_competence_productivity_scatter(&[]).is_err());
    }

    #[test]
    fn heatmap_csv_blank_for_absent() {
        let m = assemble(
            HeatmapMetric::CollaboratorsPerTask,
            vec![1, 2, 3],
            vec![("p1".into(), vec![Some(int(2)), None, Some(int(0))])],
        );
        assert_eq!(heatmap_csv(&m).unwrap(), "participant_id,week_1,week_2,week_3\r\np1,2.000000,,0.000000\r\n");
    }

    #[test]
    fn external_scores_csv() {
        let ext = parse_external_scores("participant_id,score\np1,88.5\np2, 90\n".as_bytes()).unwrap();
        assert_eq!(ext[&ParticipantId::from("p1")], crate::rational::ratio(177, 2));
        assert_eq!(ext[&ParticipantId::from("p2")], int(90));
        assert!(parse_external_scores("id,score\np1,1\n".as_bytes()).is_err());
        assert!(parse_external_scores("participant_id,score\np1,x\n".as_bytes()).is_err());
        assert!(parse_external_scores("participant_id,score\np1,1\np1,2\n".as_bytes()).is_err());
    }
}
