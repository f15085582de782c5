//! Seeded synthetic cohorts emitted as valid activity logs.
//!
//! Every team gets its own ChaCha8 stream (`stream = team index + 1`; stream 0
//! drives registration and archetype assignment), so teams can be generated in
//! parallel and the output is identical for a given seed regardless of
//! thread count. Team-local events are merged by timestamp and renumbered.

use std::collections::BTreeMap;

use chrono::Duration;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::event::*;
use crate::domain::time::{self, Timestamp, MILLIS_PER_DAY};
use crate::domain::{ActivityEvent, ParticipantId, Payload, TaskId, TeamId};
use crate::par::{self, Strategy};
use crate::rational::{self, int, ratio, Rational};

/// Identifier of the pseudo-random source, echoed in generated configs.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, per-team streams)";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid synth config: {0}")]
pub struct SynthError(pub String);

/// Behavioural profile a synthetic participant is drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchetypeSpec {
    pub name: String,
    /// Probability an assigned task gets completed within its sprint.
    pub completion_rate: f64,
    /// Probability a completed task finishes by its deadline.
    pub on_time_rate: f64,
    /// Centre of peer quality ratings (0..=10).
    pub quality_mean: f64,
    /// Expected number of collaborators per task.
    pub collaborator_affinity: f64,
    /// Half-width of the uniform intra-sprint mood swing.
    pub mood_volatility: f64,
    /// Expected tasks taken on per sprint.
    pub productivity_scale: f64,
    /// Difficulty bias added to tasks this participant takes on.
    #[serde(default)]
    pub difficulty_bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchetypeWeight {
    pub archetype: ArchetypeSpec,
    pub weight: f64,
}

/// Team size: a fixed count or an inclusive `[min, max]` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TeamSize {
    Fixed(u32),
    Range([u32; 2]),
}

impl TeamSize {
    fn bounds(self) -> (u32, u32) {
        match self {
            TeamSize::Fixed(n) => (n, n),
            TeamSize::Range([lo, hi]) => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub teams: u32,
    pub members_per_team: TeamSize,
    pub sprints: u32,
    pub archetypes: Vec<ArchetypeWeight>,
    pub seed: u64,
    #[serde(with = "time::serde_millis")]
    pub start: Timestamp,
    /// Probability each mood report (begin or end) is filed.
    pub mood_report_rate: f64,
    /// Read-only echo of the generator algorithm.
    pub rng: String,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            teams: 21,
            members_per_team: TeamSize::Range([5, 7]),
            sprints: 12,
            archetypes: default_archetypes(),
            seed: 0,
            start: time::parse("2014-01-06T00:00:00.000Z").expect("valid literal"),
            mood_report_rate: 0.9,
            rng: RNG_ALGORITHM.to_string(),
        }
    }
}

pub fn default_archetypes() -> Vec<ArchetypeWeight> {
    vec![
        ArchetypeWeight {
            archetype: ArchetypeSpec {
                name: "strong".into(),
                completion_rate: 0.95,
                on_time_rate: 0.9,
                quality_mean: 8.0,
                collaborator_affinity: 1.5,
                mood_volatility: 0.6,
                productivity_scale: 3.0,
                difficulty_bias: 1.0,
            },
            weight: 0.3,
        },
        ArchetypeWeight {
            archetype: ArchetypeSpec {
                name: "steady".into(),
                completion_rate: 0.85,
                on_time_rate: 0.65,
                quality_mean: 6.5,
                collaborator_affinity: 1.0,
                mood_volatility: 1.2,
                productivity_scale: 2.0,
                difficulty_bias: 0.0,
            },
            weight: 0.4,
        },
        ArchetypeWeight {
            archetype: ArchetypeSpec {
                name: "struggling".into(),
                completion_rate: 0.6,
                on_time_rate: 0.3,
                quality_mean: 4.0,
                collaborator_affinity: 0.5,
                mood_volatility: 2.2,
                productivity_scale: 1.2,
                difficulty_bias: -1.0,
            },
            weight: 0.3,
        },
    ]
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError(m));
        if self.teams == 0 || self.sprints == 0 {
            return bad("teams and sprints must be at least 1".into());
        }
        let (lo, hi) = self.members_per_team.bounds();
        if lo == 0 || lo > hi {
            return bad(format!("members_per_team range [{lo}, {hi}] is empty or zero"));
        }
        if self.archetypes.is_empty() {
            return bad("at least one archetype is required".into());
        }
        let total: f64 = self.archetypes.iter().map(|a| a.weight).sum();
        if self.archetypes.iter().any(|a| a.weight.is_nan() || a.weight < 0.0) || (total - 1.0).abs() > 1e-9 {
            return bad(format!("archetype weights must be non-negative and sum to 1 (got {total})"));
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.mood_report_rate) {
            return bad("mood_report_rate must be a probability".into());
        }
        for a in &self.archetypes {
            let s = &a.archetype;
            if !unit(s.completion_rate) || !unit(s.on_time_rate) {
                return bad(format!("archetype {}: rates must lie in [0, 1]", s.name));
            }
            if !(0.0..=10.0).contains(&s.quality_mean) {
                return bad(format!("archetype {}: quality_mean must lie in [0, 10]", s.name));
            }
            if s.mood_volatility > 4.0 {
                return bad(format!("archetype {}: mood_volatility above the mood range", s.name));
            }
            let nonneg = [s.collaborator_affinity, s.mood_volatility, s.productivity_scale];
            if nonneg.iter().any(|x| !x.is_finite() || *x < 0.0) || !s.difficulty_bias.is_finite() {
                return bad(format!("archetype {}: scales must be finite and non-negative", s.name));
            }
        }
        Ok(())
    }
}

/// A generated log plus the archetype each participant was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCohort {
    pub events: Vec<ActivityEvent>,
    pub archetypes: BTreeMap<ParticipantId, String>,
}

pub fn generate(config: &SynthConfig) -> Result<Vec<ActivityEvent>, SynthError> {
    generate_cohort(config, Strategy::default()).map(|c| c.events)
}

/// An event before numbering; `order` breaks timestamp ties within a team.
struct Draft {
    at: Timestamp,
    team_index: u32,
    order: u32,
    actor: ParticipantId,
    team: Option<TeamId>,
    payload: Payload,
}

struct TeamPlan {
    index: u32,
    id: TeamId,
    members: Vec<(ParticipantId, usize)>,
}

pub fn generate_cohort(config: &SynthConfig, strategy: Strategy) -> Result<SyntheticCohort, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = config.members_per_team.bounds();

    let mut plans = Vec::new();
    let mut archetypes = BTreeMap::new();
    let mut drafts = Vec::new();
    let mut next_participant = 1u32;
    for t in 0..config.teams {
        let size = rng.random_range(lo..=hi);
        let mut members = Vec::new();
        for _ in 0..size {
            let id = ParticipantId::new(format!("p{next_participant:04}"));
            next_participant += 1;
            let archetype = pick_archetype(&mut rng, &config.archetypes);
            archetypes.insert(id.clone(), config.archetypes[archetype].archetype.name.clone());
            members.push((id, archetype));
        }
        plans.push(TeamPlan { index: t, id: TeamId::new(format!("t{:02}", t + 1)), members });
    }

    let registration = config.start - Duration::days(1);
    let areas = ["backend", "frontend", "testing", "ui_design"];
    for (i, (id, _)) in plans.iter().flat_map(|p| p.members.iter()).enumerate() {
        let skill_profile = areas.iter().map(|a| (a.to_string(), rng.random_range(0..=10))).collect();
        drafts.push(Draft {
            at: registration + Duration::seconds(i as i64),
            team_index: 0,
            order: i as u32,
            actor: id.clone(),
            team: None,
            payload: Payload::Register(Register {
                participant: id.clone(),
                display_name: format!("Participant {}", &id.as_str()[1..]),
                skill_profile,
            }),
        });
    }

    let team_drafts = par::map(strategy, &plans, |plan| generate_team(config, plan));
    for batch in team_drafts {
        drafts.extend(batch);
    }
    drafts.sort_by(|a, b| {
        let pre_a = a.team.is_none();
        let pre_b = b.team.is_none();
        pre_b
            .cmp(&pre_a)
            .then(a.at.cmp(&b.at))
            .then(a.team_index.cmp(&b.team_index))
            .then(a.order.cmp(&b.order))
    });

    let events = drafts
        .into_iter()
        .enumerate()
        .map(|(i, d)| ActivityEvent {
            event_id: i as u64 + 1,
            timestamp: d.at,
            actor: d.actor,
            team: d.team,
            payload: d.payload,
        })
        .collect();
    Ok(SyntheticCohort { events, archetypes })
}

fn pick_archetype(rng: &mut ChaCha8Rng, mix: &[ArchetypeWeight]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, a) in mix.iter().enumerate() {
        acc += a.weight;
        if u < acc {
            return i;
        }
    }
    mix.iter().rposition(|a| a.weight > 0.0).unwrap_or(0)
}

fn clamp_round(x: f64, lo: i64, hi: i64) -> i64 {
    (x.round() as i64).clamp(lo, hi)
}

/// Sequential event builder for one team.
struct TeamLog<'a> {
    plan: &'a TeamPlan,
    drafts: Vec<Draft>,
}

impl TeamLog<'_> {
    fn push(&mut self, at: Timestamp, actor: &ParticipantId, payload: Payload) {
        let order = self.drafts.len() as u32;
        self.drafts.push(Draft {
            at,
            team_index: self.plan.index + 1,
            order,
            actor: actor.clone(),
            team: Some(self.plan.id.clone()),
            payload,
        });
    }
}

fn generate_team(config: &SynthConfig, plan: &TeamPlan) -> Vec<Draft> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(plan.index as u64 + 1);
    let specs: Vec<&ArchetypeSpec> = plan.members.iter().map(|(_, a)| &config.archetypes[*a].archetype).collect();
    let ids: Vec<&ParticipantId> = plan.members.iter().map(|(id, _)| id).collect();
    let owner = ids[0];
    let mut log = TeamLog { plan, drafts: Vec::new() };

    let formed = config.start - Duration::hours(12);
    log.push(
        formed,
        owner,
        Payload::CreateTeam(CreateTeam {
            name: format!("Team {}", plan.index + 1),
            members: ids.iter().map(|id| (*id).clone()).collect(),
            product_owner: owner.clone(),
            stakeholders: Vec::new(),
        }),
    );
    let roles = ["programmer", "ui_designer", "tester"];
    for (i, id) in ids.iter().enumerate() {
        let role = roles[rng.random_range(0..roles.len())];
        log.push(
            formed + Duration::seconds(1 + i as i64),
            owner,
            Payload::AssignRole(AssignRole { participant: (*id).clone(), role: role.into() }),
        );
    }

    let base_mood: Vec<i64> = ids.iter().map(|_| rng.random_range(3..=5)).collect();
    let mut task_counter = 0u32;
    let week = Duration::days(7);
    for s in 0..config.sprints {
        let index = s + 1;
        let start = config.start + week * s as i32;
        let mut clock = start;
        let mut tick = || {
            clock += Duration::seconds(1);
            clock
        };
        log.push(start, owner, Payload::StartSprint(StartSprint { index, start, end: start + week }));

        let mut begin_moods = vec![None; ids.len()];
        for (m, id) in ids.iter().enumerate() {
            if rng.random_bool(config.mood_report_rate) {
                let mood = clamp_round(base_mood[m] as f64 + rng.random_range(-0.6..0.6), 1, 5);
                begin_moods[m] = Some(mood);
                let at = tick();
                log.push(at, id, Payload::ReportMoodBegin(MoodReport { sprint: index, value: mood }));
            }
        }

        let mut completed: Vec<(TaskId, usize, Timestamp)> = Vec::new();
        for (m, assignee) in ids.iter().enumerate() {
            let spec = specs[m];
            let count = (spec.productivity_scale + rng.random::<f64>()).floor() as u32;
            for _ in 0..count {
                task_counter += 1;
                let task = TaskId::new(format!("{}-k{task_counter:04}", plan.id));
                let proposer = ids[rng.random_range(0..ids.len())];
                let at = tick();
                log.push(
                    at,
                    proposer,
                    Payload::ProposeTask(ProposeTask {
                        task: task.clone(),
                        description: format!("Task {task_counter} of {}", plan.id),
                        skills_required: Vec::new(),
                    }),
                );
                let true_difficulty = rng.random_range(1.0..9.0) + spec.difficulty_bias;
                let true_half_days: i64 = rng.random_range(2..=8);
                // the assignee plus up to two teammates estimate
                let mut estimators = vec![m];
                let mut rest: Vec<usize> = (0..ids.len()).filter(|&o| o != m).collect();
                for _ in 0..rest.len().min(2) {
                    estimators.push(rest.swap_remove(rng.random_range(0..rest.len())));
                }
                estimators.sort_unstable();
                for estimator in estimators.iter().map(|&e| ids[e]) {
                    let d = clamp_round(true_difficulty + rng.random_range(-1.5..1.5), 0, 10);
                    let at = tick();
                    log.push(at, estimator, Payload::EstimateDifficulty(Rating { task: task.clone(), value: d }));
                    let p = rng.random_range(0..=10);
                    let at = tick();
                    log.push(at, estimator, Payload::EstimatePriority(Rating { task: task.clone(), value: p }));
                    let half_days = (true_half_days + rng.random_range(-1..=1)).clamp(1, 10);
                    let at = tick();
                    log.push(
                        at,
                        estimator,
                        Payload::EstimateTime(EstimateTime { task: task.clone(), days: ratio(half_days, 2) }),
                    );
                }
                let assigned_at = tick();
                log.push(
                    assigned_at,
                    owner,
                    Payload::AssignTask(AssignTask { task: task.clone(), assignee: (*assignee).clone(), sprint: index }),
                );
                let confidence = clamp_round(spec.quality_mean + rng.random_range(-2.0..2.0), 0, 10);
                let at = tick();
                log.push(at, assignee, Payload::DeclareConfidence(Rating { task: task.clone(), value: confidence }));

                let others: Vec<usize> = (0..ids.len()).filter(|&o| o != m).collect();
                let wanted = (spec.collaborator_affinity + rng.random::<f64>()).floor() as usize;
                let mut pool = others;
                for _ in 0..wanted.min(pool.len()) {
                    let pick = pool.swap_remove(rng.random_range(0..pool.len()));
                    let at = tick();
                    log.push(
                        at,
                        assignee,
                        Payload::AddCollaborator(AddCollaborator { task: task.clone(), participant: ids[pick].clone() }),
                    );
                }

                if rng.random_bool(spec.completion_rate) {
                    // mean of the member estimates, in exact milliseconds
                    let est_days: Rational = mean_estimate(&log.drafts, &task);
                    let est_ms = est_days * int(MILLIS_PER_DAY);
                    let actual_ms = if rng.random_bool(spec.on_time_rate) {
                        let frac = rng.random_range(0.4..=1.0);
                        let scaled = &est_ms * rational::from_f64_decimal(frac).expect("finite");
                        scaled.floor().to_integer()
                    } else {
                        let extra = rng.random_range(0.25..1.25) * MILLIS_PER_DAY as f64;
                        est_ms.ceil().to_integer() + num::BigInt::from(extra.max(1.0) as i64)
                    };
                    let actual_ms: i64 = num::ToPrimitive::to_i64(&actual_ms).expect("fits");
                    let done = assigned_at + Duration::milliseconds(actual_ms);
                    log.push(done, assignee, Payload::CompleteTask(TaskRef { task: task.clone() }));
                    completed.push((task, m, done));
                }
            }
        }

        // review meeting, after every completion of the sprint
        let mut review_clock = start + Duration::hours(156);
        let mut review_tick = || {
            review_clock += Duration::seconds(1);
            review_clock
        };
        for (task, m, _) in &completed {
            let spec = specs[*m];
            for (r, reviewer) in ids.iter().enumerate() {
                if r == *m {
                    continue;
                }
                let q = clamp_round(spec.quality_mean + rng.random_range(-2.0..2.0), 0, 10);
                let at = review_tick();
                log.push(at, reviewer, Payload::ReviewQuality(Rating { task: task.clone(), value: q }));
            }
        }
        for (m, id) in ids.iter().enumerate() {
            if rng.random_bool(config.mood_report_rate) {
                let anchor = begin_moods[m].unwrap_or(base_mood[m]) as f64;
                let v = specs[m].mood_volatility;
                let swing = if v > 0.0 { rng.random_range(-v..=v) } else { 0.0 };
                let mood = clamp_round(anchor + swing, 1, 5);
                let at = review_tick();
                log.push(at, id, Payload::ReportMoodEnd(MoodReport { sprint: index, value: mood }));
            }
        }
    }
    log.drafts
}

fn mean_estimate(drafts: &[Draft], task: &TaskId) -> Rational {
    let days: Vec<Rational> = drafts
        .iter()
        .filter_map(|d| match &d.payload {
            Payload::EstimateTime(e) if &e.task == task => Some(e.days.clone()),
            _ => None,
        })
        .collect();
    rational::mean(days.iter()).expect("every task is estimated before completion")
}
