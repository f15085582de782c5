mod support;

use chrono::Duration;
use proptest::prelude::*;
use skilltrace_core::domain::log::{parse_jsonl, to_jsonl};
use skilltrace_core::domain::{
    replay, transition_task, DomainError, LikertValue, Payload, ReplayError, Task, TaskAction, TaskStatus,
};
use skilltrace_core::rational::ratio;
use support::worlds::random_log;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn replay_is_deterministic(seed in any::<u64>()) {
        let events = random_log(seed);
        let a = replay(&events).unwrap();
        let b = replay(&events).unwrap();
        prop_assert_eq!(&a, &b);
        a.check_invariants().map_err(TestCaseError::fail)?;

        let text = to_jsonl(&events);
        let parsed = parse_jsonl(&text).unwrap();
        prop_assert_eq!(&parsed, &events);
        prop_assert_eq!(to_jsonl(&parsed), text);
        prop_assert_eq!(replay(&parsed).unwrap(), a);
    }

    #[test]
    fn every_prefix_satisfies_invariants(seed in any::<u64>()) {
        let events = random_log(seed);
        let mut world = skilltrace_core::domain::WorldState::default();
        for (i, e) in events.iter().enumerate() {
            world.apply_logged(i, e).unwrap();
            world.check_invariants().map_err(TestCaseError::fail)?;
        }
    }

    /// Perturbed logs either replay into a consistent world or are rejected
    /// with a located error; the world is never left half-applied.
    #[test]
    fn perturbed_logs_stay_closed(seed in any::<u64>(), pick in any::<prop::sample::Index>(), how in 0u8..4) {
        let mut events = random_log(seed);
        let i = pick.index(events.len());
        match how {
            0 => {
                events.remove(i);
                for (n, e) in events.iter_mut().enumerate() {
                    e.event_id = n as u64 + 1;
                }
            }
            1 if i + 1 < events.len() => {
                events.swap(i, i + 1);
                events[i].event_id = i as u64 + 1;
                events[i + 1].event_id = i as u64 + 2;
            }
            2 => {
                if let Payload::EstimateDifficulty(r) | Payload::ReviewQuality(r) = &mut events[i].payload {
                    r.value = 11;
                }
            }
            _ => events[i].timestamp -= Duration::days(30),
        }
        let mut world = skilltrace_core::domain::WorldState::default();
        for (n, e) in events.iter().enumerate() {
            let before = world.clone();
            match world.apply_logged(n, e) {
                Ok(()) => world.check_invariants().map_err(TestCaseError::fail)?,
                Err(ReplayError::InvalidEvent { index, .. }) => {
                    prop_assert_eq!(index, n);
                    prop_assert_eq!(&world, &before);
                    break;
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Step {
    Assign(u32),
    Complete(i64),
}

proptest! {
    #[test]
    fn task_machine_only_moves_forward(steps in prop::collection::vec(prop_oneof![
        (0u32..3).prop_map(Step::Assign),
        (-5i64..5).prop_map(Step::Complete),
    ], 0..8), estimated in any::<bool>()) {
        let t0 = skilltrace_core::domain::time::parse("2014-01-06T09:00:00.000Z").unwrap();
        let mut task = Task::proposed("k".into(), "t".into(), "p".into(), "x");
        if estimated {
            task.difficulty_estimates.insert("p".into(), LikertValue::eleven(4).unwrap());
            task.time_estimates_days.insert("p".into(), ratio(1, 2));
        }
        for step in steps {
            let action = match step {
                Step::Assign(s) => TaskAction::Assign { assignee: "p".into(), sprint: s, at: t0 },
                Step::Complete(h) => TaskAction::Complete { at: t0 + Duration::hours(h) },
            };
            match transition_task(&task, &action) {
                Ok(next) => {
                    let advanced = matches!(
                        (task.status, next.status),
                        (TaskStatus::Proposed, TaskStatus::Assigned) | (TaskStatus::Assigned, TaskStatus::Completed)
                    );
                    prop_assert!(advanced);
                    next.check_invariants().map_err(TestCaseError::fail)?;
                    task = next;
                }
                Err(DomainError::IllegalTransition { from, .. }) => prop_assert_eq!(from, task.status),
                Err(DomainError::MissingEstimates { .. }) => prop_assert!(!estimated),
                Err(DomainError::InvalidSprint(_)) => prop_assert!(matches!(step, Step::Assign(0))),
                Err(DomainError::TimestampOrderViolation(_)) => prop_assert!(matches!(step, Step::Complete(h) if h < 0)),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

#[test]
fn completed_is_terminal() {
    let t0 = skilltrace_core::domain::time::parse("2014-01-06T09:00:00.000Z").unwrap();
    let mut task = Task::proposed("k".into(), "t".into(), "p".into(), "x");
    task.difficulty_estimates.insert("p".into(), LikertValue::eleven(4).unwrap());
    task.time_estimates_days.insert("p".into(), ratio(1, 2));
    let task = transition_task(&task, &TaskAction::Assign { assignee: "p".into(), sprint: 1, at: t0 }).unwrap();
    let done = transition_task(&task, &TaskAction::Complete { at: t0 }).unwrap();
    for action in [
        TaskAction::Complete { at: t0 },
        TaskAction::Assign { assignee: "q".into(), sprint: 1, at: t0 },
    ] {
        let err = transition_task(&done, &action).unwrap_err();
        assert_eq!(err.code(), "ILLEGAL_TRANSITION");
    }
}

#[test]
fn id_gaps_and_regressions_are_corrupt() {
    let mut events = random_log(3);
    events[2].event_id = 9;
    assert!(matches!(replay(&events), Err(ReplayError::CorruptLog { line: 3, .. })));
    let mut events = random_log(3);
    events[2].event_id = 1;
    assert!(matches!(replay(&events), Err(ReplayError::CorruptLog { line: 3, .. })));
}

#[test]
fn likert_out_of_range_reports_index() {
    let mut events = random_log(5);
    let i = events.iter().position(|e| matches!(e.payload, Payload::EstimateDifficulty(_))).unwrap();
    if let Payload::EstimateDifficulty(r) = &mut events[i].payload {
        r.value = 11;
    }
    match replay(&events) {
        Err(ReplayError::InvalidEvent { index, source, .. }) => {
            assert_eq!(index, i);
            assert_eq!(source.code(), "LIKERT_OUT_OF_RANGE");
        }
        other => panic!("unexpected {other:?}"),
    }
}
