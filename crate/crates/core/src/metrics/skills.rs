//! Aggregate skills score.
//!
//! Productivity, competence and collaboration are min-max normalized over the
//! cohort onto `[0, 100/3]`; mood stability becomes `S_dm = 4 * (1 - minmax(stab))`
//! on `[0, 4]`, so the steadiest participant gets 4. The score is
//!
//! ```text
//! S_skills = (S_mu + S_comp + S_col) / (5 - S_dm)    in [0, 100]
//! ```
//!
//! A component with no spread across the cohort maps everyone to the midpoint
//! of its range.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{MetricsError, ParticipantMetrics};
use crate::domain::ParticipantId;
use crate::rational::{int, ratio, serde_report, Rational};

/// How participants without any complete mood pair enter the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoodMissingPolicy {
    /// Treated as the least stable member of the cohort.
    #[default]
    #[serde(alias = "CohortWorst")]
    CohortWorst,
    /// Left out of the report entirely.
    #[serde(alias = "Exclude")]
    Exclude,
}

/// Raw per-participant inputs to the score.
#[derive(Debug, Clone, PartialEq)]
pub struct SkillInputs {
    pub participant: ParticipantId,
    pub mu: Rational,
    pub comp: Rational,
    pub col: Rational,
    pub stab: Option<Rational>,
}

impl From<&ParticipantMetrics> for SkillInputs {
    fn from(m: &ParticipantMetrics) -> Self {
        Self {
            participant: m.participant.clone(),
            mu: m.mu.clone(),
            comp: m.comp.clone(),
            col: m.col.clone(),
            stab: m.stab.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkillScores {
    #[serde(rename = "S_mu", with = "serde_report")]
    pub s_mu: Rational,
    #[serde(rename = "S_comp", with = "serde_report")]
    pub s_comp: Rational,
    #[serde(rename = "S_col", with = "serde_report")]
    pub s_col: Rational,
    #[serde(rename = "S_dm", with = "serde_report")]
    pub s_dm: Rational,
    #[serde(rename = "S_skills", with = "serde_report")]
    pub s_skills: Rational,
    /// The stability value actually normalized (after the missing-mood policy).
    #[serde(with = "serde_report")]
    pub stab_used: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredCohort {
    /// Descending by `S_skills`, ties by participant id.
    pub ranking: Vec<ParticipantId>,
    pub per_participant: BTreeMap<ParticipantId, SkillScores>,
    /// Dropped under [`MoodMissingPolicy::Exclude`].
    pub excluded: Vec<ParticipantId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkillReport {
    pub cohort: BTreeSet<ParticipantId>,
    pub ranking: Vec<ParticipantId>,
    pub per_participant: BTreeMap<ParticipantId, SkillScores>,
    pub raw: BTreeMap<ParticipantId, ParticipantMetrics>,
    pub excluded: Vec<ParticipantId>,
}

/// Upper end of each of the three additive components.
pub fn component_top() -> Rational {
    ratio(100, 3)
}

/// Upper end of the stability component.
pub fn stability_top() -> Rational {
    int(4)
}

/// Position of `x` within `[min, max]` on `[0, 1]`; 1/2 when `min == max`.
pub fn minmax_unit(x: &Rational, min: &Rational, max: &Rational) -> Rational {
    if max == min {
        ratio(1, 2)
    } else {
        (x - min) / (max - min)
    }
}

fn bounds<'a>(values: impl Iterator<Item = &'a Rational>) -> Option<(Rational, Rational)> {
    let mut it = values;
    let first = it.next()?.clone();
    let (mut lo, mut hi) = (first.clone(), first);
    for v in it {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    Some((lo, hi))
}

pub fn score_cohort(inputs: &[SkillInputs], policy: MoodMissingPolicy) -> Result<ScoredCohort, MetricsError> {
    let mut excluded = Vec::new();
    let kept: Vec<&SkillInputs> = inputs
        .iter()
        .filter(|p| {
            let keep = policy == MoodMissingPolicy::CohortWorst || p.stab.is_some();
            if !keep {
                excluded.push(p.participant.clone());
            }
            keep
        })
        .collect();
    if kept.is_empty() {
        return Err(MetricsError::EmptyCohort);
    }

    let worst = bounds(kept.iter().filter_map(|p| p.stab.as_ref())).map(|(_, hi)| hi);
    let stabs: Vec<Rational> = kept
        .iter()
        .map(|p| p.stab.clone().or_else(|| worst.clone()).unwrap_or_else(Rational::zero))
        .collect();

    let (mu_lo, mu_hi) = bounds(kept.iter().map(|p| &p.mu)).expect("nonempty");
    let (comp_lo, comp_hi) = bounds(kept.iter().map(|p| &p.comp)).expect("nonempty");
    let (col_lo, col_hi) = bounds(kept.iter().map(|p| &p.col)).expect("nonempty");
    let (stab_lo, stab_hi) = bounds(stabs.iter()).expect("nonempty");

    let top = component_top();
    let mut per_participant = BTreeMap::new();
    for (p, stab) in kept.iter().zip(stabs) {
        let s_mu = minmax_unit(&p.mu, &mu_lo, &mu_hi) * &top;
        let s_comp = minmax_unit(&p.comp, &comp_lo, &comp_hi) * &top;
        let s_col = minmax_unit(&p.col, &col_lo, &col_hi) * &top;
        let s_dm = stability_top() * (Rational::one() - minmax_unit(&stab, &stab_lo, &stab_hi));
        let s_skills = (&s_mu + &s_comp + &s_col) / (int(5) - &s_dm);
        per_participant.insert(
            p.participant.clone(),
            SkillScores { s_mu, s_comp, s_col, s_dm, s_skills, stab_used: stab },
        );
    }

    let mut ranking: Vec<ParticipantId> = per_participant.keys().cloned().collect();
    ranking.sort_by(|a, b| rank_order(&per_participant[a].s_skills, a, &per_participant[b].s_skills, b));
    Ok(ScoredCohort { ranking, per_participant, excluded })
}

/// Descending by score, ascending by id on ties.
pub fn rank_order(sa: &Rational, a: &ParticipantId, sb: &Rational, b: &ParticipantId) -> Ordering {
    sb.cmp(sa).then_with(|| a.cmp(b))
}

pub fn compute_skill_report(
    metrics: &[ParticipantMetrics],
    policy: MoodMissingPolicy,
) -> Result<SkillReport, MetricsError> {
    let inputs: Vec<SkillInputs> = metrics.iter().map(SkillInputs::from).collect();
    let scored = score_cohort(&inputs, policy)?;
    let raw: BTreeMap<ParticipantId, ParticipantMetrics> = metrics
        .iter()
        .filter(|m| scored.per_participant.contains_key(&m.participant))
        .map(|m| (m.participant.clone(), m.clone()))
        .collect();
    Ok(SkillReport {
        cohort: raw.keys().cloned().collect(),
        ranking: scored.ranking,
        per_participant: scored.per_participant,
        raw,
        excluded: scored.excluded,
    })
}
