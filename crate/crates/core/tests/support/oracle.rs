//! Brute-force reference metrics computed straight from the event list.
//!
//! Deliberately shares nothing with the library beyond the event types: no
//! WorldState, no aggregation helpers. Everything is exact rational arithmetic
//! except `pearson`, which is a textbook two-pass f64 computation.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, One, Signed, Zero};
use skilltrace_core::domain::{ActivityEvent, Membership, Payload};

pub type Q = BigRational;

const MS_PER_DAY: i64 = 86_400_000;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn avg(values: &[Q]) -> Option<Q> {
    if values.is_empty() {
        return None;
    }
    let total = values.iter().fold(Q::zero(), |acc, v| acc + v);
    Some(total / q(values.len() as i64))
}

/// One scored task from a participant's point of view.
#[derive(Debug, Clone)]
pub struct Evidence {
    pub difficulty: Q,
    pub est_days: Q,
    pub actual_days: Q,
    pub quality: Q,
}

/// Beta reputation written out longhand.
pub fn competence(history: &[Evidence]) -> (Q, Q, Q) {
    let mut alpha = Q::zero();
    let mut beta = Q::zero();
    for e in history {
        let on_time = e.actual_days <= e.est_days;
        let good = e.quality > q(5);
        if on_time && good {
            alpha += &e.difficulty;
        } else {
            beta += &e.difficulty;
        }
    }
    let comp = (&alpha + Q::one()) / (&alpha + &beta + q(2));
    (alpha, beta, comp)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub mu: Q,
    pub comp: Q,
    pub alpha: Q,
    pub beta: Q,
    pub col: Q,
    pub stab: Option<Q>,
    pub collab_weeks: BTreeMap<u32, Q>,
    pub mood_weeks: BTreeMap<u32, Q>,
}

#[derive(Default)]
struct T {
    team: String,
    difficulty: BTreeMap<String, i64>,
    time: BTreeMap<String, Q>,
    reviews: BTreeMap<String, i64>,
    assignee: Option<String>,
    collaborators: BTreeSet<String>,
    sprint: Option<u32>,
    assigned_ms: i64,
    completed_ms: Option<i64>,
}

type Moods = BTreeMap<String, i64>;

#[derive(Default)]
struct Tm {
    joined: BTreeMap<String, i64>,
    /// index -> (end ms, begin moods, end moods)
    sprints: BTreeMap<u32, (i64, Moods, Moods)>,
}

/// Metrics for every team member of the log.
pub fn cohort(events: &[ActivityEvent], all_team_sprints: bool) -> BTreeMap<String, OracleMetrics> {
    let mut tasks: BTreeMap<String, T> = BTreeMap::new();
    let mut teams: BTreeMap<String, Tm> = BTreeMap::new();
    for e in events {
        let ms = e.timestamp.timestamp_millis();
        let team = e.team.as_ref().map(|t| t.to_string()).unwrap_or_default();
        let actor = e.actor.to_string();
        match &e.payload {
            Payload::CreateTeam(p) => {
                let tm = teams.entry(team).or_default();
                for m in &p.members {
                    tm.joined.insert(m.to_string(), ms);
                }
            }
            Payload::JoinTeam(p) => {
                if p.membership == Membership::Member {
                    teams.get_mut(&team).unwrap().joined.insert(p.participant.to_string(), ms);
                }
            }
            Payload::StartSprint(p) => {
                let end = p.end.timestamp_millis();
                teams.get_mut(&team).unwrap().sprints.insert(p.index, (end, BTreeMap::new(), BTreeMap::new()));
            }
            Payload::EndSprint(p) => {
                teams.get_mut(&team).unwrap().sprints.get_mut(&p.index).unwrap().0 = p.end.timestamp_millis();
            }
            Payload::ProposeTask(p) => {
                tasks.insert(p.task.to_string(), T { team, ..Default::default() });
            }
            Payload::EstimateDifficulty(r) => {
                tasks.get_mut(r.task.as_str()).unwrap().difficulty.insert(actor, r.value);
            }
            Payload::EstimateTime(p) => {
                tasks.get_mut(p.task.as_str()).unwrap().time.insert(actor, p.days.clone());
            }
            Payload::AssignTask(p) => {
                let t = tasks.get_mut(p.task.as_str()).unwrap();
                t.assignee = Some(p.assignee.to_string());
                t.sprint = Some(p.sprint);
                t.assigned_ms = ms;
            }
            Payload::AddCollaborator(p) => {
                tasks.get_mut(p.task.as_str()).unwrap().collaborators.insert(p.participant.to_string());
            }
            Payload::CompleteTask(p) => {
                tasks.get_mut(p.task.as_str()).unwrap().completed_ms = Some(ms);
            }
            Payload::ReviewQuality(r) => {
                tasks.get_mut(r.task.as_str()).unwrap().reviews.insert(actor, r.value);
            }
            Payload::ReportMoodBegin(m) => {
                teams.get_mut(&team).unwrap().sprints.get_mut(&m.sprint).unwrap().1.insert(actor, m.value);
            }
            Payload::ReportMoodEnd(m) => {
                teams.get_mut(&team).unwrap().sprints.get_mut(&m.sprint).unwrap().2.insert(actor, m.value);
            }
            _ => {}
        }
    }

    let people: BTreeSet<String> = teams.values().flat_map(|t| t.joined.keys().cloned()).collect();
    let mut out = BTreeMap::new();
    for p in people {
        let mut evidence = Vec::new();
        let mut workload = Q::zero();
        let mut active: BTreeSet<(String, u32)> = BTreeSet::new();
        let mut weeks: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
        for t in tasks.values() {
            let Some(sprint) = t.sprint else { continue };
            let workers: BTreeSet<&String> = t.assignee.iter().chain(t.collaborators.iter()).collect();
            if workers.contains(&p) {
                weeks.entry(sprint).or_default().push(q(workers.len() as i64 - 1));
            }
            if t.assignee.as_deref() != Some(p.as_str()) {
                continue;
            }
            active.insert((t.team.clone(), sprint));
            let Some(done) = t.completed_ms else { continue };
            let d = avg(&t.difficulty.values().map(|v| q(*v)).collect::<Vec<_>>()).unwrap();
            workload += &d;
            if t.reviews.is_empty() {
                continue;
            }
            evidence.push(Evidence {
                difficulty: d,
                est_days: avg(&t.time.values().cloned().collect::<Vec<_>>()).unwrap(),
                actual_days: qr(done - t.assigned_ms, MS_PER_DAY),
                quality: avg(&t.reviews.values().map(|v| q(*v)).collect::<Vec<_>>()).unwrap(),
            });
        }
        let mut deltas: Vec<(u32, i64)> = Vec::new();
        for (name, tm) in &teams {
            let Some(joined) = tm.joined.get(&p) else { continue };
            for (idx, (end, begin, fin)) in &tm.sprints {
                if all_team_sprints || *end > *joined {
                    active.insert((name.clone(), *idx));
                }
                if let (Some(b), Some(f)) = (begin.get(&p), fin.get(&p)) {
                    deltas.push((*idx, f - b));
                }
            }
        }
        let (alpha, beta, comp) = competence(&evidence);
        let mu = if active.is_empty() { Q::zero() } else { workload / q(active.len() as i64) };
        let collab_weeks: BTreeMap<u32, Q> = weeks.iter().map(|(w, v)| (*w, avg(v).unwrap())).collect();
        let col = avg(&collab_weeks.values().cloned().collect::<Vec<_>>()).unwrap_or_else(Q::zero);
        let stab = avg(&deltas.iter().map(|(_, d)| q(d.abs())).collect::<Vec<_>>());
        let mut by_week: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
        for (w, d) in &deltas {
            by_week.entry(*w).or_default().push(q(*d));
        }
        let mood_weeks = by_week.iter().map(|(w, v)| (*w, avg(v).unwrap())).collect();
        out.insert(p, OracleMetrics { mu, comp, alpha, beta, col, stab, collab_weeks, mood_weeks });
    }
    out
}

/// S_skills per participant. `exclude` drops participants without mood data;
/// otherwise they take the largest stab in the cohort (0 when nobody has any).
pub type SkillRow = (Q, Q, Q, Option<Q>);

pub fn skills(metrics: &BTreeMap<String, SkillRow>, exclude: bool) -> BTreeMap<String, Q> {
    let kept: Vec<(&String, &SkillRow)> =
        metrics.iter().filter(|(_, m)| !exclude || m.3.is_some()).collect();
    let worst = kept.iter().filter_map(|(_, m)| m.3.clone()).max().unwrap_or_else(Q::zero);
    let stab: Vec<Q> = kept.iter().map(|(_, m)| m.3.clone().unwrap_or_else(|| worst.clone())).collect();
    let unit = |x: &Q, all: Vec<Q>| {
        let lo = all.iter().min().unwrap().clone();
        let hi = all.iter().max().unwrap().clone();
        if lo == hi {
            qr(1, 2)
        } else {
            (x - &lo) / (hi - lo)
        }
    };
    let third = qr(100, 3);
    let mut out = BTreeMap::new();
    for (i, (id, m)) in kept.iter().enumerate() {
        let s_mu = unit(&m.0, kept.iter().map(|k| k.1 .0.clone()).collect()) * &third;
        let s_comp = unit(&m.1, kept.iter().map(|k| k.1 .1.clone()).collect()) * &third;
        let s_col = unit(&m.2, kept.iter().map(|k| k.1 .2.clone()).collect()) * &third;
        let s_dm = q(4) * (Q::one() - unit(&stab[i], stab.clone()));
        out.insert((*id).clone(), (s_mu + s_comp + s_col) / (q(5) - s_dm));
    }
    out
}

/// Convenience: the skills oracle fed from [`cohort`].
pub fn cohort_skills(events: &[ActivityEvent], all_team_sprints: bool, exclude: bool) -> BTreeMap<String, Q> {
    let m = cohort(events, all_team_sprints);
    let inputs = m.into_iter().map(|(k, v)| (k, (v.mu, v.comp, v.col, v.stab))).collect();
    skills(&inputs, exclude)
}

/// Textbook two-pass sample correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

pub fn to_f64(v: &Q) -> f64 {
    use num::ToPrimitive;
    v.to_f64().unwrap()
}

/// Half-even rounding to six decimals, rendered like the reports.
pub fn six(v: &Q) -> String {
    let scaled = v * q(1_000_000);
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = qr(1, 2);
    let mut n = floor.to_integer();
    if frac > half || (frac == half && (&n % BigInt::from(2)) != BigInt::zero()) {
        n += 1;
    }
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{digits:0>7}");
    let (int_part, dec) = digits.split_at(digits.len() - 6);
    format!("{}{int_part}.{dec}", if neg { "-" } else { "" })
}
