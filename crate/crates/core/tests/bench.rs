use contjack::bench::{run_experiment, run_simulation, ExperimentSpec};
use contjack::config::{StrategySpec, TournamentConfig};

#[test]
fn identical_lineup_scores_one() {
    let mut cfg = TournamentConfig::new(5, 400_000, vec![StrategySpec::Nash; 4]);
    cfg.log.window_fraction = 1.0;
    let run = run_simulation(&cfg, None).unwrap();
    for p in &run.report.players {
        assert!(
            (p.s - 1.0).abs() < 3.5 * 4.0 * p.std_error,
            "{}: s = {}",
            p.id,
            p.s
        );
    }
}

#[test]
fn bandit_lineup_reports_reference_metric() {
    let players = vec![
        StrategySpec::Bandit {
            arms: 20,
            step: Default::default(),
            credit_when_constrained: true,
            epsilon: None,
            prune: None,
        },
        StrategySpec::Nash,
        StrategySpec::Nash,
        StrategySpec::UniformReference,
    ];
    let cfg = TournamentConfig::new(1, 20_000, players);
    let run = run_simulation(&cfg, None).unwrap();
    assert!(run.report.players[0].r.is_some());
    assert!(run.report.r_ne.is_some() && run.report.r_ref.is_some());
}

#[test]
fn seeds_give_distinct_curves_same_config() {
    let mut cfg = TournamentConfig::new(
        0,
        5_000,
        vec![StrategySpec::Nash, StrategySpec::Adaptive { a: 0.5 }],
    );
    cfg.log.curve_every = 500;
    let runs = run_experiment(&ExperimentSpec {
        config: cfg,
        seeds: vec![10, 11],
        jobs: 2,
    })
    .unwrap();
    assert_ne!(runs[0].curve, runs[1].curve);
    let (a, b) = (runs[0].summary(), runs[1].summary());
    assert_eq!(a.config.players, b.config.players);
    assert_eq!((a.config.seed, b.config.seed), (10, 11));
}
