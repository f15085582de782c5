mod support;

use std::collections::BTreeMap;

use skilltrace_core::domain::log::to_jsonl;
use skilltrace_core::domain::replay;
use skilltrace_core::metrics::{compute_cohort_metrics, pearson_r, MetricsConfig};
use skilltrace_core::par::Strategy;
use skilltrace_core::rational::to_f64;
use skilltrace_core::synth::{
    default_archetypes, generate, generate_cohort, ArchetypeSpec, ArchetypeWeight, SynthConfig, TeamSize,
};

fn archetype(name: &str, on_time_rate: f64, quality_mean: f64) -> ArchetypeSpec {
    ArchetypeSpec {
        name: name.into(),
        completion_rate: 0.9,
        on_time_rate,
        quality_mean,
        collaborator_affinity: 1.0,
        mood_volatility: 1.0,
        productivity_scale: 2.0,
        difficulty_bias: 0.0,
    }
}

/// Mean competence per archetype name.
fn mean_comp(config: &SynthConfig) -> BTreeMap<String, f64> {
    let cohort = generate_cohort(config, Strategy::default()).unwrap();
    let world = replay(&cohort.events).unwrap();
    let metrics = compute_cohort_metrics(&world, &MetricsConfig::default()).unwrap();
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for m in &metrics {
        let e = sums.entry(cohort.archetypes[&m.participant].clone()).or_default();
        e.0 += to_f64(&m.comp);
        e.1 += 1;
    }
    sums.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

#[test]
fn minimal_config_is_valid() {
    let config = SynthConfig { teams: 1, members_per_team: TeamSize::Fixed(5), sprints: 1, seed: 7, ..Default::default() };
    let events = generate(&config).unwrap();
    replay(&events).unwrap().check_invariants().unwrap();
}

#[test]
fn same_seed_same_bytes() {
    let config = SynthConfig { teams: 3, sprints: 4, seed: 7, ..Default::default() };
    assert_eq!(to_jsonl(&generate(&config).unwrap()), to_jsonl(&generate(&config).unwrap()));
    let other = SynthConfig { seed: 8, ..config.clone() };
    assert_ne!(to_jsonl(&generate(&config).unwrap()), to_jsonl(&generate(&other).unwrap()));
}

#[test]
fn default_scale() {
    let config = SynthConfig::default();
    assert_eq!((config.teams, config.sprints), (21, 12));
    assert_eq!(config.members_per_team, TeamSize::Range([5, 7]));
    let world = replay(&generate(&SynthConfig { seed: 1, ..config }).unwrap()).unwrap();
    assert_eq!(world.teams.len(), 21);
    assert!(world.teams.values().all(|t| (5..=7).contains(&t.members.len())));
    assert_eq!(world.max_sprint_index(), 12);
}

#[test]
fn random_seeds_replay() {
    for seed in 0..25 {
        let config = SynthConfig { teams: 3, members_per_team: TeamSize::Range([1, 7]), sprints: 5, seed, ..Default::default() };
        replay(&generate(&config).unwrap()).unwrap().check_invariants().unwrap();
    }
}

// Calibration over seeds 0..20 with 4 teams of 6 measured a minimum
// difference of 0.90 between the two archetype means (A ~0.95, B ~0.01).
#[test]
fn on_time_quality_archetypes_separate() {
    let mix = vec![
        ArchetypeWeight { archetype: archetype("A", 0.95, 8.0), weight: 0.5 },
        ArchetypeWeight { archetype: archetype("B", 0.3, 3.0), weight: 0.5 },
    ];
    for seed in [1, 2, 3] {
        let config = SynthConfig {
            teams: 4,
            members_per_team: TeamSize::Fixed(6),
            sprints: 12,
            archetypes: mix.clone(),
            seed,
            ..Default::default()
        };
        let means = mean_comp(&config);
        assert!(means["A"] - means["B"] > 0.5, "seed {seed}: {means:?}");
    }
}

#[test]
fn ordering_by_on_time_times_quality() {
    let mix = vec![
        ArchetypeWeight { archetype: archetype("hi", 0.9, 8.0), weight: 0.34 },
        ArchetypeWeight { archetype: archetype("mid", 0.6, 6.5), weight: 0.33 },
        ArchetypeWeight { archetype: archetype("lo", 0.3, 4.0), weight: 0.33 },
    ];
    let config = SynthConfig { teams: 6, members_per_team: TeamSize::Fixed(6), sprints: 12, archetypes: mix, seed: 5, ..Default::default() };
    let means = mean_comp(&config);
    assert!(means["hi"] > means["mid"] && means["mid"] > means["lo"], "{means:?}");
}

// The default archetypes couple competence with productivity; calibration
// over seeds {1, 3, 5, 7, 42} gave r between 0.877 and 0.902.
#[test]
fn coupled_archetypes_correlate() {
    let config = SynthConfig { seed: 42, archetypes: default_archetypes(), ..Default::default() };
    let events = generate(&config).unwrap();
    let metrics = compute_cohort_metrics(&replay(&events).unwrap(), &MetricsConfig::default()).unwrap();
    let xs: Vec<_> = metrics.iter().map(|m| m.comp.clone()).collect();
    let ys: Vec<_> = metrics.iter().map(|m| m.mu.clone()).collect();
    let c = pearson_r(&xs, &ys).unwrap();
    assert!(c.r > 0.5, "r = {}", c.r);
    assert_eq!(c.significant_at, vec![0.05, 0.01]);
}
