//! Random but valid activity logs, biased toward metric boundaries: exact
//! deadlines, one-millisecond overruns, quality ratings of exactly 5, late
//! joiners, shared participants and missing mood reports.

use chrono::{Duration, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skilltrace_core::domain::event::*;
use skilltrace_core::domain::{ActivityEvent, Membership, Payload, Timestamp};
use skilltrace_core::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub participants: usize,
    pub teams: usize,
    pub sprints: u32,
    pub tasks: usize,
}

impl Shape {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let participants = rng.random_range(1..=10);
        Shape {
            participants,
            teams: rng.random_range(1..=participants.min(3)),
            sprints: rng.random_range(1..=12),
            tasks: rng.random_range(0..=50),
        }
    }
}

struct Log {
    events: Vec<ActivityEvent>,
}

impl Log {
    fn push(&mut self, at: Timestamp, actor: &str, team: Option<&str>, payload: Payload) {
        let event_id = self.events.len() as u64 + 1;
        self.events.push(ActivityEvent {
            event_id,
            timestamp: at,
            actor: actor.into(),
            team: team.map(Into::into),
            payload,
        });
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

pub fn random_log(seed: u64) -> Vec<ActivityEvent> {
    random_log_with(seed, Shape::from_seed(seed))
}

pub fn random_log_with(seed: u64, shape: Shape) -> Vec<ActivityEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t0 = Utc.with_ymd_and_hms(2014, 1, 6, 0, 0, 0).unwrap();
    let week = Duration::days(7);
    let mut log = Log { events: Vec::new() };
    let people: Vec<String> = (1..=shape.participants).map(|i| format!("p{i:02}")).collect();
    for (i, p) in people.iter().enumerate() {
        log.push(
            t0 - Duration::days(2) + Duration::seconds(i as i64),
            p,
            None,
            Payload::Register(Register {
                participant: p.as_str().into(),
                display_name: format!("Person {i}"),
                skill_profile: [("backend".to_string(), rng.random_range(0..=10))].into(),
            }),
        );
    }

    // founding members, late joiners (team, sprint to join at) and a stakeholder
    let team_ids: Vec<String> = (1..=shape.teams).map(|i| format!("t{i}")).collect();
    let mut founders: Vec<Vec<String>> = vec![Vec::new(); shape.teams];
    let mut late: Vec<(usize, String, u32)> = Vec::new();
    for (i, p) in people.iter().enumerate() {
        let team = if i < shape.teams { i } else { rng.random_range(0..shape.teams) };
        if i >= shape.teams && shape.sprints > 1 && rng.random_bool(0.2) {
            late.push((team, p.clone(), rng.random_range(2..=shape.sprints)));
        } else {
            founders[team].push(p.clone());
        }
    }
    for (i, p) in people.iter().enumerate() {
        if shape.teams > 1 && rng.random_bool(0.15) {
            let home = founders.iter().position(|f| f.contains(p));
            let other = (i + 1) % shape.teams;
            if home.is_some() && home != Some(other) && !founders[other].contains(p) {
                founders[other].push(p.clone());
            }
        }
    }
    for (t, id) in team_ids.iter().enumerate() {
        let owner = founders[t][0].clone();
        let stakeholders: Vec<_> = people
            .iter()
            .filter(|p| !founders[t].contains(p) && !late.iter().any(|(lt, lp, _)| *lt == t && lp == *p))
            .take(if rng.random_bool(0.3) { 1 } else { 0 })
            .map(|p| p.as_str().into())
            .collect();
        log.push(
            t0 - Duration::days(1),
            &owner,
            Some(id),
            Payload::CreateTeam(CreateTeam {
                name: format!("Team {id}"),
                members: founders[t].iter().map(|m| m.as_str().into()).collect(),
                product_owner: owner.as_str().into(),
                stakeholders,
            }),
        );
    }

    // tasks are spread across (team, sprint) slots
    let mut per_slot = vec![vec![0usize; shape.sprints as usize]; shape.teams];
    for _ in 0..shape.tasks {
        let t = rng.random_range(0..shape.teams);
        let s = rng.random_range(0..shape.sprints as usize);
        per_slot[t][s] += 1;
    }

    let mut members: Vec<Vec<String>> = founders.clone();
    let mut task_no = 0;
    for s in 1..=shape.sprints {
        let start = t0 + week * (s as i32 - 1);
        for (t, id) in team_ids.iter().enumerate() {
            let owner = founders[t][0].clone();
            let mut clock = start;
            let mut tick = |secs: i64| {
                clock += Duration::seconds(secs);
                clock
            };
            log.push(start, &owner, Some(id), Payload::StartSprint(StartSprint { index: s, start, end: start + week }));
            for (lt, lp, at) in &late {
                if *lt == t && *at == s {
                    let when = tick(30);
                    log.push(
                        when,
                        lp,
                        Some(id),
                        Payload::JoinTeam(JoinTeam { participant: lp.as_str().into(), membership: Membership::Member }),
                    );
                    members[t].push(lp.clone());
                }
            }
            let current = members[t].clone();
            for m in &current {
                if rng.random_bool(0.8) {
                    let when = tick(1);
                    let value = rng.random_range(1..=5);
                    log.push(when, m, Some(id), Payload::ReportMoodBegin(MoodReport { sprint: s, value }));
                }
            }

            let mut completions: Vec<(Timestamp, String, String)> = Vec::new();
            for _ in 0..per_slot[t][s as usize - 1] {
                task_no += 1;
                let task = format!("k{task_no:03}");
                let when = tick(60);
                let proposer = pick(&mut rng, &current).clone();
                log.push(
                    when,
                    &proposer,
                    Some(id),
                    Payload::ProposeTask(ProposeTask {
                        task: task.as_str().into(),
                        description: "work".into(),
                        skills_required: vec![],
                    }),
                );
                let estimators = rng.random_range(1..=current.len().min(3));
                let mut days: Vec<Rational> = Vec::new();
                for e in current.iter().take(estimators) {
                    let value = rng.random_range(0..=10);
                    let when = tick(1);
                    log.push(when, e, Some(id), Payload::EstimateDifficulty(Rating { task: task.as_str().into(), value }));
                    if rng.random_bool(0.5) {
                        let when = tick(1);
                        let value = rng.random_range(0..=10);
                        log.push(when, e, Some(id), Payload::EstimatePriority(Rating { task: task.as_str().into(), value }));
                    }
                    let d = ratio(rng.random_range(1..=16), *pick(&mut rng, &[1, 2, 3, 4]));
                    days.push(d.clone());
                    let when = tick(1);
                    log.push(when, e, Some(id), Payload::EstimateTime(EstimateTime { task: task.as_str().into(), days: d }));
                }
                if !rng.random_bool(0.85) {
                    continue;
                }
                let assignee = pick(&mut rng, &current).clone();
                let assigned = tick(1);
                log.push(
                    assigned,
                    &owner_or(&current, &owner),
                    Some(id),
                    Payload::AssignTask(AssignTask { task: task.as_str().into(), assignee: assignee.as_str().into(), sprint: s }),
                );
                let others: Vec<&String> = current.iter().filter(|c| **c != assignee).collect();
                let collab = rng.random_range(0..=others.len().min(2));
                for c in others.iter().take(collab) {
                    let when = tick(1);
                    log.push(
                        when,
                        &assignee,
                        Some(id),
                        Payload::AddCollaborator(AddCollaborator { task: task.as_str().into(), participant: c.as_str().into() }),
                    );
                }
                if !rng.random_bool(0.75) {
                    continue;
                }
                // est_ms is integral: 86_400_000 is divisible by every denominator
                let mean: Rational = days.iter().sum::<Rational>() / ratio(days.len() as i64, 1);
                let est_ms = mean * ratio(86_400_000, 1);
                let est_ms_floor: i64 = est_ms.floor().to_integer().try_into().unwrap();
                let actual_ms = match rng.random_range(0..5) {
                    0 if est_ms.is_integer() => est_ms_floor,
                    1 => est_ms_floor + 1,
                    2 => rng.random_range(0..=est_ms_floor),
                    3 => est_ms_floor + rng.random_range(1..3 * 86_400_000),
                    _ => 0,
                };
                completions.push((assigned + Duration::milliseconds(actual_ms), assignee.clone(), task.clone()));
            }
            completions.sort();
            for (at, who, task) in completions {
                log.push(at, &who, Some(id), Payload::CompleteTask(TaskRef { task: task.as_str().into() }));
                if rng.random_bool(0.85) {
                    let n = rng.random_range(1..=current.len().min(3));
                    for r in current.iter().take(n) {
                        let value = if rng.random_bool(0.3) { 5 } else { rng.random_range(0..=10) };
                        log.push(
                            at + Duration::seconds(1),
                            r,
                            Some(id),
                            Payload::ReviewQuality(Rating { task: task.as_str().into(), value }),
                        );
                    }
                }
            }
            for m in &current {
                if rng.random_bool(0.8) {
                    let value = rng.random_range(1..=5);
                    log.push(
                        start + Duration::days(6),
                        m,
                        Some(id),
                        Payload::ReportMoodEnd(MoodReport { sprint: s, value }),
                    );
                }
            }
        }
    }
    log.events
}

fn owner_or(current: &[String], owner: &str) -> String {
    if current.iter().any(|c| c == owner) {
        owner.to_string()
    } else {
        current[0].clone()
    }
}
