mod common;

use std::any::Any;

use common::*;
use contjack::analytic::{payoff_envelope, EnvelopeFunction};
use contjack::bench::reference_metric;
use contjack::engine::{play_turn, Observation, Seating, Strategy, StrategyKind};
use contjack::rng::RngStream;
use contjack::strategies::{
    FixedThreshold, NashStrategy, OpponentModel, StepSchedule, UniformReference,
};

/// Bucket averages of the true loss profile of an adaptive opponent.
fn true_profile(m: usize, a: f64) -> Vec<f64> {
    (0..m)
        .map(|b| {
            let (lo, hi) = (b as f64 / m as f64, (b + 1) as f64 / m as f64);
            simpson_split(|t| bust(t.max(a)), lo, hi, &[a], 200) * m as f64
        })
        .collect()
}

fn train(model: &mut OpponentModel, a: f64, turns: u64, rng: &mut RngStream, t_range: (f64, f64)) {
    for i in 0..turns {
        let t = t_range.0 + (t_range.1 - t_range.0) * rng.uniform();
        let out = play_turn(rng, t.max(a));
        model.observe(7, 1, t, out.score.value(), i + 1);
    }
}

#[test]
fn learned_profile_matches_closed_form() {
    // 1e5 turns over 8 buckets: ~12500 visits each, so 0.02 is about 4.5 standard errors.
    let m = 8;
    for (seed, a) in [(1u64, 0.3), (2, 0.6), (3, 0.8)] {
        let mut model = OpponentModel::new(m, StepSchedule::Harmonic).unwrap();
        let mut rng = RngStream::from_seed(seed);
        train(&mut model, a, 100_000, &mut rng, (0.0, 1.0));
        let e = model.entry(7, 1).unwrap();
        let truth = true_profile(m, a);
        let err = e
            .values()
            .iter()
            .zip(&truth)
            .zip(e.visits())
            .filter(|(_, &v)| v > 0)
            .map(|((x, y), _)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err <= 0.02, "a={a}: sup error {err}");
    }
}

#[test]
fn estimator_variance_within_chebyshev_bound() {
    // One bucket, N visits, 100 repetitions: mean squared error <= 4 * 1/(4N).
    let m = 8;
    let a = 0.55;
    let bucket = 5;
    let truth = true_profile(m, a)[bucket];
    for n in [25u64, 100, 400] {
        let mut mse = 0.0;
        for rep in 0..100 {
            let mut model = OpponentModel::new(m, StepSchedule::Harmonic).unwrap();
            let mut rng = RngStream::from_seed(1000 * n + rep);
            let lo = bucket as f64 / m as f64;
            train(&mut model, a, n, &mut rng, (lo, lo + 1.0 / m as f64));
            let e = model.entry(7, 1).unwrap();
            assert_eq!(e.visits()[bucket], n);
            mse += (e.values()[bucket] - truth).powi(2) / 100.0;
        }
        assert!(mse <= 1.0 / n as f64, "N={n}: mse {mse}");
    }
}

/// Left-endpoint piecewise-constant product of adaptive loss profiles.
fn left_sampled(m: usize, a: &[f64]) -> EnvelopeFunction {
    let vals = (0..m)
        .map(|b| {
            a.iter()
                .map(|&ai| bust((b as f64 / m as f64).max(ai)))
                .product()
        })
        .collect();
    EnvelopeFunction::uniform_constant(vals).unwrap()
}

#[test]
fn discretisation_error_is_first_order() {
    let a = [0.45, 0.62, 0.7];
    let n = a.len() as f64;
    let c = std::f64::consts::E; // Lipschitz constant of t -> 1 - (1 - t) e^t on [0, 1]
    for x in [0.2f64, 0.55, 0.8] {
        let exact = x.exp()
            * simpson_split(
                |t| a.iter().map(|&ai| bust(t.max(ai))).product(),
                x,
                1.0,
                &a,
                4000,
            );
        let mut errs = Vec::new();
        for m in [32usize, 64, 128, 256, 512] {
            let approx = payoff_envelope(x, &left_sampled(m, &a)).unwrap();
            let err = (approx - exact).abs();
            assert!(err <= x.exp() * n * c / (2.0 * m as f64), "m={m}: {err}");
            errs.push(err);
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (1.6..2.5).contains(&ratio),
                "x={x}: halving m changed error by {ratio}"
            );
        }
    }
}

/// Plays the uniform reference with probability `eps`, otherwise `inner`.
struct Mixture {
    eps: f64,
    inner: FixedThreshold,
}

impl Strategy for Mixture {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Other
    }
    fn label(&self) -> String {
        format!("mixture({})", self.eps)
    }
    fn decide(&mut self, obs: &Observation<'_>, rng: &mut RngStream) -> f64 {
        if rng.uniform() < self.eps {
            UniformReference::draw(obs.constraint_t, rng)
        } else {
            self.inner.decide(obs, rng)
        }
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[test]
fn exploration_mixture_identity() {
    let rounds = 1_000_000;
    let eps = 0.3;
    let target = 0.68;
    let focal = |s: Box<dyn Strategy>, seed: u64| {
        let mut players: Vec<Box<dyn Strategy>> = vec![
            s,
            Box::new(NashStrategy::new(3).unwrap()),
            Box::new(NashStrategy::new(3).unwrap()),
        ];
        mc_reward(&mut players, 0, rounds, seed, Seating::Shuffled)
    };
    let (r_ne, se_ne) = focal(Box::new(NashStrategy::new(3).unwrap()), 11);
    let (r0, se0) = focal(Box::new(UniformReference), 12);
    let (rt, se_t) = focal(fixed(target), 13);
    let (rm, se_m) = focal(
        Box::new(Mixture {
            eps,
            inner: FixedThreshold::new(target).unwrap(),
        }),
        14,
    );
    let measured = reference_metric(rm, r0, r_ne).unwrap();
    let predicted = (1.0 - eps) * (rt - r0) / (r_ne - r0);
    let gap = r_ne - r0;
    let se_num = (se_m.powi(2) + (eps * se0).powi(2) + ((1.0 - eps) * se_t).powi(2)).sqrt();
    let se = (se_num.powi(2) + (measured * se_ne).powi(2)).sqrt() / gap;
    assert!(
        (measured - predicted).abs() <= 3.0 * se,
        "r = {measured} vs {predicted} (se {se})"
    );
}
