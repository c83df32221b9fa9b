//! Seedable randomness and exact weighted choice over big-integer weights.
//!
//! [`RandomSource`] wraps ChaCha8, whose output stream for a given seed is
//! fixed across platforms and `rand_chacha` releases. All draws are exact:
//! integers below a bound come from masked rejection sampling, never from a
//! modulo reduction or a float.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::BigCount;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seeds from OS entropy. The chosen seed is available via [`seed`](Self::seed)
    /// so a run can be replayed.
    pub fn from_entropy() -> Self {
        Self::from_seed(rand::random())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_word(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `[0, bound)`.
    ///
    /// Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "uniform_below: empty range");
        if bound == 1 {
            return 0;
        }
        let mask = u64::MAX >> (bound - 1).leading_zeros();
        loop {
            let x = self.next_word() & mask;
            if x < bound {
                return x;
            }
        }
    }

    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform big integer in `[0, bound)`: draws `ceil(bits/64)` words, masks
    /// the top word to the bit length of `bound - 1` and rejects overshoots.
    ///
    /// Panics if `bound == 0`.
    pub fn uniform_below(&mut self, bound: &BigCount) -> BigCount {
        assert!(!bound.is_zero(), "uniform_below: empty range");
        if let Some(small) = to_u64(bound) {
            return BigCount::from(self.below(small));
        }
        let top = bound - 1u32;
        let bits = top.bits();
        let words = bits.div_ceil(64) as usize;
        let spare = (words as u64) * 64 - bits;
        let top_mask = u64::MAX >> spare;
        let mut buf = vec![0u64; words];
        loop {
            for w in buf.iter_mut() {
                *w = self.next_word();
            }
            buf[words - 1] &= top_mask;
            let x = BigUint::from_slice(&to_u32_digits(&buf));
            if &x < bound {
                return x;
            }
        }
    }

    /// Index `i` with probability `weights[i] / total`.
    pub fn weighted_index(&mut self, table: &WeightTable) -> Result<usize> {
        table.sample(self)
    }
}

fn to_u64(v: &BigCount) -> Option<u64> {
    let digits = v.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}

fn to_u32_digits(words: &[u64]) -> Vec<u32> {
    words
        .iter()
        .flat_map(|w| [*w as u32, (*w >> 32) as u32])
        .collect()
}

/// Ordered nonnegative weights with their running totals.
#[derive(Debug, Clone, Default)]
pub struct WeightTable {
    weights: Vec<BigCount>,
    cumulative: Vec<BigCount>,
}

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, weight: BigCount) {
        let running = self.total() + &weight;
        self.weights.push(weight);
        self.cumulative.push(running);
    }

    pub fn total(&self) -> BigCount {
        self.cumulative.last().cloned().unwrap_or_default()
    }

    pub fn weights(&self) -> &[BigCount] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Draws `u` uniformly below the total and returns the first index whose
    /// running sum exceeds `u`. Fails when every weight is zero.
    pub fn sample(&self, rng: &mut RandomSource) -> Result<usize> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::EmptySpace {
                space: "all weights are zero",
                depth: 0,
                atoms: 0,
            });
        }
        let u = rng.uniform_below(&total);
        Ok(self.cumulative.partition_point(|c| c <= &u))
    }
}

impl FromIterator<BigCount> for WeightTable {
    fn from_iter<I: IntoIterator<Item = BigCount>>(iter: I) -> Self {
        let mut table = WeightTable::new();
        for w in iter {
            table.push(w);
        }
        table
    }
}
