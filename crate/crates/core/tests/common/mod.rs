//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use contjack::engine::{run_tournament, Seating, Strategy, TournamentOptions};
use contjack::strategies::{AdaptiveThreshold, FixedThreshold};

pub const ALPHA: [f64; 14] = [
    0.570557, 0.687916, 0.748671, 0.787111, 0.814059, 0.834191, 0.849900, 0.862558, 0.873008,
    0.881805, 0.889328, 0.895845, 0.901554, 0.906602,
];
pub const BETA: [f64; 14] = [
    0.588650, 0.698942, 0.756234, 0.792694, 0.818387, 0.837665, 0.852764, 0.864966, 0.875068,
    0.883591, 0.890894, 0.897231, 0.902791, 0.907714,
];
pub const GAMMA: [f64; 14] = [
    0.570557, 0.726417, 0.791326, 0.828415, 0.852904, 0.870488, 0.883829, 0.894355, 0.902905,
    0.910009, 0.916021, 0.921184, 0.925674, 0.929619,
];

/// Probability of busting when hitting until the sum exceeds `x`.
pub fn bust(x: f64) -> f64 {
    1.0 - (1.0 - x) * x.exp()
}

/// Composite Simpson on `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Simpson with breakpoints so kinks sit on panel edges.
pub fn simpson_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, kinks: &[f64], n: usize) -> f64 {
    let mut pts = vec![a];
    let mut ks: Vec<f64> = kinks.iter().copied().filter(|&k| k > a && k < b).collect();
    ks.sort_by(f64::total_cmp);
    pts.extend(ks);
    pts.push(b);
    pts.windows(2).map(|w| simpson(&f, w[0], w[1], n)).sum()
}

/// Probability that a player with fixed threshold `k` ends with a valid score below `t`... or busts,
/// i.e. the chance it does not beat `t`, by direct integration of the renewal density.
/// For `t < k`: P(bust) + P(score in (k, t)) = bust(k); for `t >= k`: 1 - (1-t) e^k.
pub fn lose_to(t: f64, k: f64) -> f64 {
    if t < k {
        bust(k)
    } else {
        1.0 - (1.0 - t) * k.exp()
    }
}

/// First-seat payoff against fixed thresholds, from the score density `e^A` on `(A, 1)`.
pub fn payoff_oracle(a: f64, ks: &[f64]) -> f64 {
    let f = |t: f64| ks.iter().map(|&k| lose_to(t, k)).product::<f64>();
    a.exp() * simpson_split(f, a, 1.0, ks, 4000)
}

/// Maximiser of a unimodal-ish function: grid scan then golden-section refinement.
pub fn grid_argmax<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = (lo + i as f64 * step).min(hi);
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    (a + b) / 2.0
}

/// Mean and standard error of a sample given its sum, sum of squares and size.
pub fn mean_se(sum: f64, sumsq: f64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let mean = sum / n;
    let var = (sumsq - n * mean * mean) / (n - 1.0);
    (mean, (var.max(0.0) / n).sqrt())
}

/// Mean reward and its standard error for player `who` over a tournament.
pub fn mc_reward(
    players: &mut [Box<dyn Strategy>],
    who: usize,
    rounds: u64,
    seed: u64,
    seating: Seating,
) -> (f64, f64) {
    let (mut s, mut s2) = (0.0, 0.0);
    let opts = TournamentOptions {
        rounds,
        seed,
        seating,
    };
    run_tournament(players, &opts, |log| {
        let r = log.reward_of(who);
        s += r;
        s2 += r * r;
        Ok(())
    })
    .unwrap();
    mean_se(s, s2, rounds)
}

pub fn fixed(a: f64) -> Box<dyn Strategy> {
    Box::new(FixedThreshold::new(a).unwrap())
}

pub fn adaptive(a: f64) -> Box<dyn Strategy> {
    Box::new(AdaptiveThreshold::new(a).unwrap())
}

/// Deterministic pseudo-random reals in `[lo, hi)` for test-case generation.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((self.0 >> 11) as f64 / (1u64 << 53) as f64)
    }
}
