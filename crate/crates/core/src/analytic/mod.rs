//! Exact kernels of the game and the payoff integrals built from them.
//!
//! A player who keeps hitting while the running sum is at most `x` stops at
//! `S(x)`, and `P(S(x) <= y) = F(x, y) = (y - x) e^x` for `x <= y <= 1`.
//! Everything else in the crate is assembled from that one formula.

mod discretization;
mod envelope;
pub(crate) mod kernels;

pub use discretization::{abs_power_integral, cell_average, lipschitz_lp_bound};
pub use envelope::{
    best_response_envelope, payoff_envelope, EnvelopeFunction, EnvelopeResponse, Interpolation,
};
pub use kernels::{
    bust_kernel_f, expected_reward_pure, integral_h, payoff_pure, payoff_pure_with, product_h,
    response_kernel_g, survival, PureOpponentProfile, Score,
};
