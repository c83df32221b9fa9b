//! Exact sizes of the three formula spaces.
//!
//! * `q_us(n, p)`: depth at most `n`, atoms drawn from `p` letters.
//! * `q_es(n, p)`: depth exactly `n`, atoms drawn from `p` letters.
//! * `q_ea(n, p)`: depth exactly `n`, every one of the `p` letters occurs.
//!
//! Counts depend on the atom set only through `p` and on the signature only
//! through how many connectives it has of each arity.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::lang::Signature;

pub type BigCount = BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Tag {
    UpTo,
    ExactAll,
}

/// Memoized counting functions for one fixed signature.
///
/// Safe to share between threads; the table only grows, and every entry is
/// a pure function of its key.
#[derive(Debug)]
pub struct CountCache {
    profile: Vec<(usize, usize)>,
    max_arity: usize,
    memo: RwLock<HashMap<(Tag, u32, usize), BigCount>>,
}

impl CountCache {
    pub fn new(sig: &Signature) -> Self {
        CountCache {
            profile: sig.arity_profile(),
            max_arity: sig.max_arity(),
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// `(arity, number of connectives with that arity)`, ascending by arity.
    pub fn arity_profile(&self) -> &[(usize, usize)] {
        &self.profile
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn lookup(&self, key: (Tag, u32, usize)) -> Option<BigCount> {
        self.memo.read().unwrap().get(&key).cloned()
    }

    fn store(&self, key: (Tag, u32, usize), value: &BigCount) {
        self.memo.write().unwrap().insert(key, value.clone());
    }

    /// Formulae of depth at most `n` over `p` atoms. Zero for negative `n`.
    ///
    /// Panics if `p == 0`.
    pub fn q_us(&self, n: i64, p: usize) -> BigCount {
        assert!(p >= 1, "formula spaces need at least one atom");
        if n < 0 {
            return BigCount::zero();
        }
        let n = n as u32;
        if let Some(v) = self.lookup((Tag::UpTo, n, p)) {
            return v;
        }
        // walk down to the deepest cached level, then build upwards
        let mut start = n;
        let mut below = loop {
            if start == 0 {
                break None;
            }
            if let Some(v) = self.lookup((Tag::UpTo, start - 1, p)) {
                break Some(v);
            }
            start -= 1;
        };
        let mut current = BigCount::zero();
        for d in start..=n {
            current = match &below {
                None => BigCount::from(p),
                Some(prev) => {
                    let mut total = BigCount::from(p);
                    for &(arity, count) in &self.profile {
                        total += prev.pow(arity as u32) * count;
                    }
                    total
                }
            };
            self.store((Tag::UpTo, d, p), &current);
            below = Some(current.clone());
        }
        current
    }

    /// Formulae of depth exactly `n` over `p` atoms (some or all used).
    pub fn q_es(&self, n: u32, p: usize) -> BigCount {
        if n == 0 {
            assert!(p >= 1, "formula spaces need at least one atom");
            return BigCount::from(p);
        }
        self.q_us(i64::from(n), p) - self.q_us(i64::from(n) - 1, p)
    }

    /// `k^n`, the most distinct atoms a depth-`n` formula can hold.
    pub fn max_atoms(&self, n: u32) -> BigCount {
        BigCount::from(self.max_arity).pow(n)
    }

    /// Whether `p` atoms can all fit in a formula of depth `n`.
    pub fn fits(&self, n: u32, p: usize) -> bool {
        BigCount::from(p) <= self.max_atoms(n)
    }

    /// Formulae of depth exactly `n` in which all `p` atoms occur.
    pub fn q_ea(&self, n: u32, p: usize) -> BigCount {
        assert!(p >= 1, "formula spaces need at least one atom");
        if !self.fits(n, p) {
            return BigCount::zero();
        }
        if let Some(v) = self.lookup((Tag::ExactAll, n, p)) {
            return v;
        }
        let mut value = self.q_es(n, p);
        for i in 1..p {
            value -= binomial(p, i) * self.q_ea(n, i);
        }
        self.store((Tag::ExactAll, n, p), &value);
        value
    }
}

/// Free-standing form of [`CountCache::max_atoms`].
pub fn max_atoms(n: u32, sig: &Signature) -> BigCount {
    BigCount::from(sig.max_arity()).pow(n)
}

pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
