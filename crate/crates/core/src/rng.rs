//! Seedable, splittable uniform streams.
//!
//! Every random quantity in a tournament is drawn from its own ChaCha8 stream,
//! addressed by `(seed, round, seat, purpose)`:
//!
//! * the 256-bit key is expanded from the 64-bit tournament seed,
//! * the ChaCha stream id is the round index,
//! * the word offset inside the stream is `slot << 36`, where `slot` packs the
//!   seat and the [`StreamPurpose`].
//!
//! Card draws for a turn therefore never depend on how many numbers a strategy
//! consumed, on logging, or on what happened in other rounds. Changing one
//! player's threshold leaves every other turn's draws untouched, which is what
//! makes paired (common random number) comparisons possible.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SLOT_SHIFT: u32 = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    /// Uniforms added to the player's sum.
    Turn = 0,
    /// Private randomness of the strategy in that seat.
    Strategy = 1,
    /// Seat permutation of the round (seat index is ignored).
    Seating = 2,
}

/// Builds per-slot streams for one seed.
#[derive(Debug, Clone)]
pub struct StreamFactory {
    seed: u64,
    key: [u8; 32],
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
        Self { seed, key }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, round: u64, seat: usize, purpose: StreamPurpose) -> RngStream {
        let mut inner = ChaCha8Rng::from_seed(self.key);
        inner.set_stream(round);
        let slot = (seat as u128) * 4 + purpose as u128;
        inner.set_word_pos(slot << SLOT_SHIFT);
        RngStream {
            seed: self.seed,
            position: 0,
            inner,
        }
    }
}

/// A stream of uniforms on `[0, 1)` with a draw counter.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    position: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Stream `(round 0, seat 0, turn)` of `seed`; handy for standalone use.
    pub fn from_seed(seed: u64) -> Self {
        StreamFactory::new(seed).stream(0, 0, StreamPurpose::Turn)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniforms drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn uniform(&mut self) -> f64 {
        self.position += 1;
        self.inner.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.position += 1;
        self.inner.gen_range(0..n)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.position += 1;
        self.inner.next_u64()
    }
}
