//! Continuous blackjack: each player keeps drawing uniform numbers on `[0, 1]`
//! until they choose to stop; a sum above 1 is a bust, and the highest valid
//! score takes the round.
//!
//! * [`analytic`]: closed-form kernels and payoff integrals.
//! * [`equilibrium`]: Nash thresholds, upper bounds and best responses.
//! * [`engine`]: seedable round and tournament simulator.
//! * [`strategies`]: static strategies and the two learners.
//! * [`bench`]: reward metrics and the experiment harness.
//! * [`config`]: the TOML run description used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod analytic;
pub mod bench;
pub mod config;
pub mod engine;
pub mod equilibrium;
pub mod error;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod strategies;

pub use error::{Error, Result};
