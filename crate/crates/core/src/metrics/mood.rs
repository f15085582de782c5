//! Intra-sprint mood change: end-of-sprint mood minus start-of-sprint mood.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::domain::{ParticipantId, SprintRecord, TeamId};
use crate::rational::{self, int, Rational};

/// Largest attainable |change| on a 1..=5 scale.
pub const MAX_MOOD_DELTA: i8 = 4;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MoodDelta {
    pub team: TeamId,
    pub sprint: u32,
    pub delta: i8,
}

/// Deltas for every sprint in which the participant reported both moods.
pub fn compute_mood_deltas<'a, I>(participant: &ParticipantId, sprints: I) -> Vec<MoodDelta>
where
    I: IntoIterator<Item = &'a SprintRecord>,
{
    let mut out: Vec<MoodDelta> = sprints
        .into_iter()
        .filter_map(|s| {
            let begin = s.mood_begin.get(participant)?;
            let end = s.mood_end.get(participant)?;
            let delta = end.value() as i8 - begin.value() as i8;
            debug_assert!(delta.abs() <= MAX_MOOD_DELTA);
            Some(MoodDelta { team: s.team.clone(), sprint: s.index, delta })
        })
        .collect();
    out.sort();
    out
}

/// Mean absolute change; `None` without any complete report pair.
pub fn stability(deltas: &[MoodDelta]) -> Option<Rational> {
    let abs: Vec<Rational> = deltas.iter().map(|d| int(d.delta.abs() as i64)).collect();
    rational::mean(abs.iter())
}

/// Signed change per sprint index, averaged across teams sharing an index.
pub fn weekly_deltas(deltas: &[MoodDelta]) -> BTreeMap<u32, Rational> {
    let mut by_week: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    for d in deltas {
        by_week.entry(d.sprint).or_default().push(int(d.delta as i64));
    }
    by_week
        .into_iter()
        .filter_map(|(w, v)| rational::mean(v.iter()).map(|m| (w, m)))
        .collect()
}
