//! Random formula generators.
//!
//! * [`Generator::es_biased`]: depth exactly `n`, some atoms; every formula is
//!   reachable but the law is not uniform. Kept as a baseline.
//! * [`Generator::es_uniform`]: depth exactly `n`, some atoms, uniform.
//! * [`Generator::us`]: depth at most `n`, some atoms, uniform.
//! * [`Generator::ea`]: depth exactly `n`, all atoms, uniform.
//!
//! The uniform generators weigh every choice by exact counts from
//! [`CountCache`], so each formula of the target space comes out with
//! probability exactly `1 / |space|`.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::counting::{binomial, BigCount, CountCache};
use crate::error::{Error, Result};
use crate::lang::{AtomSet, Formula, Signature, Symbol};
use crate::random::{RandomSource, WeightTable};

/// Default limit on candidate distributions materialized by
/// [`Generator::enumerate_ea_distributions`].
pub const DEFAULT_DISTRIBUTION_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    EsBiased,
    Es,
    Us,
    Ea,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::EsBiased => "es-biased",
            Mode::Es => "es",
            Mode::Us => "us",
            Mode::Ea => "ea",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "es-biased" => Ok(Mode::EsBiased),
            "es" => Ok(Mode::Es),
            "us" => Ok(Mode::Us),
            "ea" => Ok(Mode::Ea),
            other => Err(format!(
                "unknown mode {other:?} (expected es-biased, es, us or ea)"
            )),
        }
    }
}

/// Per-argument depths chosen for an application node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepthVector(pub Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EaSlot {
    pub depth: u32,
    pub atoms: Vec<Symbol>,
}

/// One way to split an exactly-`n`, all-atoms formula among the arguments of
/// its main connective: a depth and a nonempty atom subset per argument,
/// with the subsets covering every atom and some argument at depth `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EaDistribution {
    pub slots: Vec<EaSlot>,
}

impl EaDistribution {
    pub fn arity(&self) -> usize {
        self.slots.len()
    }
}

/// Samples the argument depths of an `m`-ary node at depth `n >= 1` over `p`
/// atoms. The vector `(d_1..d_m)` (with some `d_i = n - 1`) comes out with
/// probability `Π q_es(d_i) / (q_us(n-1)^m - q_us(n-2)^m)`.
///
/// Slots are filled left to right. Each candidate depth is weighted by its
/// `q_es` times the number of weighted completions of the remaining slots:
/// `T^s - U^s` while no slot has reached `n - 1` yet, `T^s` afterwards, where
/// `T = q_us(n-1)` and `U = q_us(n-2)`.
pub fn sample_exact_depth_vector(
    counts: &CountCache,
    m: usize,
    n: u32,
    p: usize,
    rng: &mut RandomSource,
) -> DepthVector {
    assert!(m >= 1 && n >= 1, "depth vectors need m >= 1 and n >= 1");
    let top = i64::from(n) - 1;
    let t = counts.q_us(top, p);
    let u = counts.q_us(top - 1, p);
    let t_pow: Vec<BigCount> = (0..m as u32).map(|s| t.pow(s)).collect();
    let u_pow: Vec<BigCount> = (0..m as u32).map(|s| u.pow(s)).collect();
    let exact: Vec<BigCount> = (0..n).map(|d| counts.q_es(d, p)).collect();

    let mut depths = Vec::with_capacity(m);
    let mut met = false;
    for slot in 0..m {
        let rest = m - slot - 1;
        let table: WeightTable = (0..n)
            .map(|d| {
                let now_met = met || d == n - 1;
                let completions = if now_met {
                    t_pow[rest].clone()
                } else {
                    &t_pow[rest] - &u_pow[rest]
                };
                &exact[d as usize] * completions
            })
            .collect();
        let d = table
            .sample(rng)
            .expect("depth vector requested for an empty space") as u32;
        met |= d == n - 1;
        depths.push(d);
    }
    DepthVector(depths)
}

type CoverKey = (u32, usize, usize, usize, bool);

/// Generators for one language (signature plus atom set).
#[derive(Debug)]
pub struct Generator {
    sig: Signature,
    atoms: AtomSet,
    counts: Arc<CountCache>,
    covers: RwLock<HashMap<CoverKey, BigCount>>,
}

impl Generator {
    pub fn new(sig: Signature, atoms: AtomSet) -> Result<Self> {
        let counts = Arc::new(CountCache::new(&sig));
        Self::with_counts(sig, atoms, counts)
    }

    /// Reuses a count cache built for the same signature.
    pub fn with_counts(sig: Signature, atoms: AtomSet, counts: Arc<CountCache>) -> Result<Self> {
        atoms.check_disjoint(&sig)?;
        Ok(Generator {
            sig,
            atoms,
            counts,
            covers: RwLock::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn counts(&self) -> &CountCache {
        &self.counts
    }

    pub fn generate(&self, mode: Mode, n: u32, rng: &mut RandomSource) -> Result<Formula> {
        match mode {
            Mode::EsBiased => self.es_biased(n, rng),
            Mode::Es => self.es_uniform(n, rng),
            Mode::Us => self.us(n, rng),
            Mode::Ea => self.ea(n, rng),
        }
    }

    fn empty(&self, space: &'static str, n: u32) -> Error {
        Error::EmptySpace {
            space,
            depth: n,
            atoms: self.atoms.len(),
        }
    }

    fn random_atom(&self, rng: &mut RandomSource) -> Formula {
        let atoms = self.atoms.atoms();
        Formula::Atom(atoms[rng.below_usize(atoms.len())].clone())
    }

    /// Non-uniform exact-depth generator: a connective uniformly from the
    /// signature, one argument position (uniformly) forced to depth `n - 1`,
    /// every other argument at a depth drawn uniformly from `0..n`.
    pub fn es_biased(&self, n: u32, rng: &mut RandomSource) -> Result<Formula> {
        if n > 0 && self.sig.is_empty() {
            return Err(self.empty("exact depth, some atoms", n));
        }
        Ok(self.es_biased_rec(n, rng))
    }

    fn es_biased_rec(&self, n: u32, rng: &mut RandomSource) -> Formula {
        if n == 0 {
            return self.random_atom(rng);
        }
        let conns = self.sig.connectives();
        let conn = &conns[rng.below_usize(conns.len())];
        let m = conn.arity;
        let deep = rng.below_usize(m);
        let mut args: Vec<Option<Formula>> = vec![None; m];
        args[deep] = Some(self.es_biased_rec(n - 1, rng));
        for (x, slot) in args.iter_mut().enumerate() {
            if x != deep {
                let j = rng.below(u64::from(n)) as u32;
                *slot = Some(self.es_biased_rec(j, rng));
            }
        }
        Formula::App(conn.name.clone(), args.into_iter().flatten().collect())
    }

    /// Uniform over formulae of depth exactly `n` using some or all atoms.
    pub fn es_uniform(&self, n: u32, rng: &mut RandomSource) -> Result<Formula> {
        if self.counts.q_es(n, self.atoms.len()).is_zero() {
            return Err(self.empty("exact depth, some atoms", n));
        }
        Ok(self.es_uniform_rec(n, rng))
    }

    fn es_uniform_rec(&self, n: u32, rng: &mut RandomSource) -> Formula {
        if n == 0 {
            return self.random_atom(rng);
        }
        let p = self.atoms.len();
        let top = i64::from(n) - 1;
        let t = self.counts.q_us(top, p);
        let u = self.counts.q_us(top - 1, p);
        let profile = self.counts.arity_profile();
        // arity m carries C(m) * (T^m - U^m); within an arity the choice is uniform
        let table: WeightTable = profile
            .iter()
            .map(|&(m, count)| (t.pow(m as u32) - u.pow(m as u32)) * count)
            .collect();
        let (m, count) = profile[table.sample(rng).expect("nonempty space")];
        let conn = self
            .sig
            .with_arity(m)
            .nth(rng.below_usize(count))
            .expect("arity profile matches signature");
        let depths = sample_exact_depth_vector(&self.counts, m, n, p, rng);
        let args = depths
            .0
            .iter()
            .map(|&d| self.es_uniform_rec(d, rng))
            .collect();
        Formula::App(conn.name.clone(), args)
    }

    /// Uniform over formulae of depth at most `n` using some or all atoms.
    pub fn us(&self, n: u32, rng: &mut RandomSource) -> Result<Formula> {
        let p = self.atoms.len();
        let table: WeightTable = (0..=n).map(|d| self.counts.q_es(d, p)).collect();
        let d = table.sample(rng)? as u32;
        self.es_uniform(d, rng)
    }

    /// Uniform over formulae of depth exactly `n` in which every atom occurs.
    pub fn ea(&self, n: u32, rng: &mut RandomSource) -> Result<Formula> {
        let p = self.atoms.len();
        if !self.counts.fits(n, p) {
            return Err(Error::Infeasible {
                atoms: p,
                depth: n,
                bound: self.counts.max_atoms(n),
            });
        }
        if self.counts.q_ea(n, p).is_zero() {
            return Err(self.empty("exact depth, all atoms", n));
        }
        Ok(self.ea_rec(n, self.atoms.atoms(), rng))
    }

    fn ea_rec(&self, n: u32, atoms: &[Symbol], rng: &mut RandomSource) -> Formula {
        let p = atoms.len();
        if n == 0 {
            debug_assert_eq!(p, 1);
            return Formula::Atom(atoms[0].clone());
        }
        let profile = self.counts.arity_profile();
        let table: WeightTable = profile
            .iter()
            .map(|&(m, count)| self.cover_count(n, p, m, p, false) * count)
            .collect();
        let (m, count) = profile[table.sample(rng).expect("nonempty space")];

        // fill argument slots left to right; the state is which atoms are
        // still missing and whether some slot has reached depth n - 1
        let mut missing: Vec<usize> = (0..p).collect();
        let mut covered: Vec<usize> = Vec::new();
        let mut met = false;
        let mut slots: Vec<(u32, Vec<usize>)> = Vec::with_capacity(m);
        for slot in 0..m {
            let rest = m - slot - 1;
            let u = missing.len();
            let mut options = Vec::new();
            let mut table = WeightTable::new();
            for d in 0..n {
                let now_met = met || d == n - 1;
                for a in 0..=u {
                    for b in 0..=(p - u) {
                        if a + b == 0 {
                            continue;
                        }
                        let inner = self.counts.q_ea(d, a + b);
                        if inner.is_zero() {
                            continue;
                        }
                        let tail = self.cover_count(n, p, rest, u - a, now_met);
                        if tail.is_zero() {
                            continue;
                        }
                        options.push((d, a, b));
                        table.push(inner * binomial(u, a) * binomial(p - u, b) * tail);
                    }
                }
            }
            let (d, a, b) = options[table.sample(rng).expect("consistent cover counts")];
            let fresh = take_subset(&mut missing, a, rng);
            let mut reused = covered.clone();
            let reused = take_subset(&mut reused, b, rng);
            covered.extend(fresh.iter().copied());
            let mut subset: Vec<usize> = fresh.into_iter().chain(reused).collect();
            subset.sort_unstable();
            met |= d == n - 1;
            slots.push((d, subset));
        }
        debug_assert!(missing.is_empty() && met);

        let args = slots
            .iter()
            .map(|(d, subset)| {
                let sub: Vec<Symbol> = subset.iter().map(|&i| atoms[i].clone()).collect();
                self.ea_rec(*d, &sub, rng)
            })
            .collect();
        let conn = self
            .sig
            .with_arity(m)
            .nth(rng.below_usize(count))
            .expect("arity profile matches signature");
        Formula::App(conn.name.clone(), args)
    }

    /// Weighted number of ways to fill `slots` argument positions of a
    /// depth-`n` node over `p` atoms, given `missing` atoms not yet placed and
    /// whether a depth-`n - 1` argument already exists. Each position takes a
    /// depth `d < n` and a nonempty atom subset `S`, weighted by
    /// `q_ea(d, |S|)`; complete fillings must cover every atom and reach
    /// depth `n - 1` somewhere.
    fn cover_count(&self, n: u32, p: usize, slots: usize, missing: usize, met: bool) -> BigCount {
        if slots == 0 {
            return if missing == 0 && met {
                BigCount::from(1u32)
            } else {
                BigCount::zero()
            };
        }
        let key = (n, p, slots, missing, met);
        if let Some(v) = self.covers.read().unwrap().get(&key) {
            return v.clone();
        }
        let mut total = BigCount::zero();
        for d in 0..n {
            let now_met = met || d == n - 1;
            for a in 0..=missing {
                for b in 0..=(p - missing) {
                    if a + b == 0 {
                        continue;
                    }
                    let inner = self.counts.q_ea(d, a + b);
                    if inner.is_zero() {
                        continue;
                    }
                    let tail = self.cover_count(n, p, slots - 1, missing - a, now_met);
                    if tail.is_zero() {
                        continue;
                    }
                    total += inner * binomial(missing, a) * binomial(p - missing, b) * tail;
                }
            }
        }
        self.covers.write().unwrap().insert(key, total.clone());
        total
    }

    /// Lists every distribution for an exactly-`n`, all-atoms formula over
    /// this generator's atoms with its weight `C(m) · Π q_ea(d_i, |P_i|)`.
    /// Zero-weight members are kept. The weights sum to `q_ea(n, p)`.
    ///
    /// Fails with a capacity error if more than `cap` candidates would be
    /// examined.
    pub fn enumerate_ea_distributions(
        &self,
        n: u32,
        cap: u64,
    ) -> Result<Vec<(EaDistribution, BigCount)>> {
        let atoms = self.atoms.atoms();
        let p = atoms.len();
        if !self.counts.fits(n, p) {
            return Err(Error::Infeasible {
                atoms: p,
                depth: n,
                bound: self.counts.max_atoms(n),
            });
        }
        assert!(n >= 1, "distributions exist only above depth 0");
        if p > 63 {
            return Err(Error::Capacity {
                what: format!("distribution set over {p} atoms"),
                cap,
            });
        }

        let mut candidates: u128 = 0;
        for &(m, _) in self.counts.arity_profile() {
            let vectors = (n as u128)
                .saturating_pow(m as u32)
                .saturating_sub(((n - 1) as u128).saturating_pow(m as u32));
            let assignments = ((1u128 << m.min(100)) - 1).saturating_pow(p as u32);
            candidates = candidates.saturating_add(vectors.saturating_mul(assignments));
        }
        if candidates > u128::from(cap) {
            return Err(Error::Capacity {
                what: format!("distribution set ({candidates} candidates)"),
                cap,
            });
        }

        let mut out = Vec::new();
        for &(m, count) in self.counts.arity_profile() {
            let depth_vectors = exact_depth_vectors(m, n);
            let position_masks = (1u64 << m) - 1;
            // each atom picks a nonempty set of argument positions
            let mut choice = vec![1u64; p];
            loop {
                let mut subsets = vec![Vec::new(); m];
                for (atom, &mask) in choice.iter().enumerate() {
                    for (pos, subset) in subsets.iter_mut().enumerate() {
                        if mask >> pos & 1 == 1 {
                            subset.push(atom);
                        }
                    }
                }
                if subsets.iter().all(|s| !s.is_empty()) {
                    for depths in &depth_vectors {
                        let mut weight = BigCount::from(count);
                        for (d, s) in depths.iter().zip(&subsets) {
                            weight *= self.counts.q_ea(*d, s.len());
                        }
                        let slots = depths
                            .iter()
                            .zip(&subsets)
                            .map(|(&depth, s)| EaSlot {
                                depth,
                                atoms: s.iter().map(|&i| atoms[i].clone()).collect(),
                            })
                            .collect();
                        out.push((EaDistribution { slots }, weight));
                    }
                }
                // odometer over choice ∈ [1, 2^m - 1]^p
                let mut i = 0;
                loop {
                    if i == p {
                        break;
                    }
                    if choice[i] < position_masks {
                        choice[i] += 1;
                        break;
                    }
                    choice[i] = 1;
                    i += 1;
                }
                if i == p {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// All `m`-tuples over `0..n` with at least one entry equal to `n - 1`.
fn exact_depth_vectors(m: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; m];
    loop {
        if v.contains(&(n - 1)) {
            out.push(v.clone());
        }
        let mut i = 0;
        while i < m {
            if v[i] + 1 < n {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == m {
            return out;
        }
    }
}

/// Removes a uniformly random `k`-subset from `pool` and returns it.
fn take_subset(pool: &mut Vec<usize>, k: usize, rng: &mut RandomSource) -> Vec<usize> {
    let mut taken = Vec::with_capacity(k);
    for _ in 0..k {
        let i = rng.below_usize(pool.len());
        taken.push(pool.swap_remove(i));
    }
    taken
}
