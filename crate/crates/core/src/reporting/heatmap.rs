//! Ranked weekly heatmaps: collaborators per task and intra-week mood change.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ReportError;
use crate::domain::{ParticipantId, WorldState};
use crate::metrics::{compute_collaboration, compute_mood_deltas, mood, skills::rank_order};
use crate::par::{self, Strategy};
use crate::rational::{self, int, serde_report, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeatmapMetric {
    CollaboratorsPerTask,
    IntraWeekMoodChange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapMatrix {
    pub metric: HeatmapMetric,
    /// Participants, descending by their mean defined cell.
    pub rows: Vec<ParticipantId>,
    /// Sprint (week) indices `1..=N`.
    pub cols: Vec<u32>,
    /// `cells[row][col]`; `None` where the participant has no data that week.
    #[serde(serialize_with = "serialize_cells")]
    pub cells: Vec<Vec<Option<Rational>>>,
    #[serde(serialize_with = "serialize_domain")]
    pub color_domain: (Rational, Rational),
}

fn serialize_cells<S: serde::Serializer>(cells: &[Vec<Option<Rational>>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<Option<f64>>> = cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.as_ref().map(|v| rational::to_report(v).parse().expect("decimal")))
                .collect()
        })
        .collect();
    rows.serialize(s)
}

fn serialize_domain<S: serde::Serializer>(d: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Domain<'a>(
        #[serde(with = "serde_report")] &'a Rational,
        #[serde(with = "serde_report")] &'a Rational,
    );
    Domain(&d.0, &d.1).serialize(s)
}

/// The ranking statistic of a row: the mean of its defined cells.
pub fn rank_statistic(row: &[Option<Rational>]) -> Option<Rational> {
    rational::mean(row.iter().flatten())
}

fn weekly_values(metric: HeatmapMetric, participant: &ParticipantId, world: &WorldState) -> BTreeMap<u32, Rational> {
    match metric {
        HeatmapMetric::CollaboratorsPerTask => compute_collaboration(participant, world).per_week,
        HeatmapMetric::IntraWeekMoodChange => {
            let sprints = world.teams_of(participant).flat_map(|t| world.sprints_of(&t.id));
            mood::weekly_deltas(&compute_mood_deltas(participant, sprints))
        }
    }
}

pub fn build_heatmap(
    metric: HeatmapMetric,
    world: &WorldState,
    strategy: Strategy,
) -> Result<HeatmapMatrix, ReportError> {
    let weeks = world.max_sprint_index();
    if weeks == 0 {
        return Err(ReportError::NoSprints);
    }
    let cols: Vec<u32> = (1..=weeks).collect();
    let members = world.team_members();
    let rows = par::map(strategy, &members, |p| {
        let values = weekly_values(metric, p, world);
        let cells: Vec<Option<Rational>> = cols.iter().map(|w| values.get(w).cloned()).collect();
        (p.clone(), cells)
    });
    Ok(assemble(metric, cols, rows))
}

/// Orders and filters rows, then derives the color domain.
pub fn assemble(
    metric: HeatmapMetric,
    cols: Vec<u32>,
    rows: Vec<(ParticipantId, Vec<Option<Rational>>)>,
) -> HeatmapMatrix {
    let mut ranked: Vec<(ParticipantId, Vec<Option<Rational>>, Rational)> = rows
        .into_iter()
        .filter_map(|(p, cells)| rank_statistic(&cells).map(|stat| (p, cells, stat)))
        .collect();
    ranked.sort_by(|a, b| rank_order(&a.2, &a.0, &b.2, &b.0));

    let defined = ranked.iter().flat_map(|(_, cells, _)| cells.iter().flatten());
    let color_domain = defined.fold(None::<(Rational, Rational)>, |acc, v| match acc {
        None => Some((v.clone(), v.clone())),
        Some((lo, hi)) => Some((if *v < lo { v.clone() } else { lo }, if *v > hi { v.clone() } else { hi })),
    });
    let color_domain = color_domain.unwrap_or((int(0), int(1)));

    let (rows, cells) = ranked.into_iter().map(|(p, c, _)| (p, c)).unzip();
    HeatmapMatrix { metric, rows, cols, cells, color_domain }
}
