//! Brute-force enumeration of the formula spaces and frequency trials
//! against them.
//!
//! Enumeration never consults the counting recurrences; it builds every tree
//! level by level, which makes it usable as ground truth for both counts and
//! generator uniformity.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::generators::{Generator, Mode};
use crate::lang::{AtomSet, Formula, Signature, Symbol};
use crate::random::RandomSource;
use crate::stats::{chi_square_quantile, chi_square_statistic};

/// Default limit on the number of formulae an enumeration may materialize.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Quantile used for the uniformity verdict.
pub const CHI_SQUARE_LEVEL: f64 = 0.999;

/// Smallest expected count per cell for which the chi-square verdict is
/// reported.
pub const MIN_EXPECTED_PER_CELL: f64 = 5.0;

/// Formulae grouped by exact depth: `levels[d]` holds every formula of depth
/// `d`, in enumeration order.
fn levels(n: u32, atoms: &AtomSet, sig: &Signature, cap: u64) -> Result<Vec<Vec<Formula>>> {
    let over_cap = || Error::Capacity {
        what: format!("enumeration of formulae up to depth {n}"),
        cap,
    };
    let mut total = atoms.len() as u64;
    if total > cap {
        return Err(over_cap());
    }
    let mut levels: Vec<Vec<Formula>> =
        vec![atoms.atoms().iter().cloned().map(Formula::Atom).collect()];
    for d in 1..=n {
        let pool: Vec<&Formula> = levels.iter().flatten().collect();
        let shallow = pool.len() - levels[(d - 1) as usize].len();
        let mut level = Vec::new();
        for conn in sig.connectives() {
            let m = conn.arity;
            let mut idx = vec![0usize; m];
            'tuples: loop {
                // at least one argument must come from the deepest level
                if idx.iter().any(|&i| i >= shallow) {
                    total += 1;
                    if total > cap {
                        return Err(over_cap());
                    }
                    let args = idx.iter().map(|&i| pool[i].clone()).collect();
                    level.push(Formula::App(conn.name.clone(), args));
                }
                // lexicographic odometer, last argument fastest
                let mut pos = m;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < pool.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        levels.push(level);
    }
    Ok(levels)
}

/// Every formula of depth at most `n`: by depth, then by connective order,
/// then lexicographically by argument.
pub fn enumerate_up_to(n: u32, atoms: &AtomSet, sig: &Signature, cap: u64) -> Result<Vec<Formula>> {
    Ok(levels(n, atoms, sig, cap)?.into_iter().flatten().collect())
}

/// Every formula of depth exactly `n`.
pub fn enumerate_exact(n: u32, atoms: &AtomSet, sig: &Signature, cap: u64) -> Result<Vec<Formula>> {
    Ok(levels(n, atoms, sig, cap)?.pop().unwrap_or_default())
}

/// Every formula of depth exactly `n` that uses all of `atoms`.
pub fn enumerate_exact_all(
    n: u32,
    atoms: &AtomSet,
    sig: &Signature,
    cap: u64,
) -> Result<Vec<Formula>> {
    let all: BTreeSet<Symbol> = atoms.to_set();
    Ok(enumerate_exact(n, atoms, sig, cap)?
        .into_iter()
        .filter(|f| f.atoms_used() == all)
        .collect())
}

/// The space a generator mode samples from.
pub fn enumerate_space(
    mode: Mode,
    n: u32,
    atoms: &AtomSet,
    sig: &Signature,
    cap: u64,
) -> Result<Vec<Formula>> {
    match mode {
        Mode::EsBiased | Mode::Es => enumerate_exact(n, atoms, sig, cap),
        Mode::Us => enumerate_up_to(n, atoms, sig, cap),
        Mode::Ea => enumerate_exact_all(n, atoms, sig, cap),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    InsufficientSamples,
}

/// Observed frequencies of a generator over an enumerated space, tested
/// against the uniform law.
#[derive(Debug, Clone)]
pub struct FrequencyReport {
    pub mode: Mode,
    pub space: Vec<Formula>,
    pub observed: Vec<u64>,
    /// Samples that fell outside the enumerated space.
    pub outside: u64,
    pub samples: u64,
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub verdict: Verdict,
}

impl FrequencyReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn frequency(&self, i: usize) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.observed[i] as f64 / self.samples as f64
        }
    }

    /// Observed frequency of the formula with the given prefix text.
    pub fn frequency_of(&self, prefix: &str) -> Option<f64> {
        self.space
            .iter()
            .position(|f| f.to_prefix() == prefix)
            .map(|i| self.frequency(i))
    }

    /// One `formula<TAB>observed<TAB>expected` row per formula (observed
    /// frequency against expected probability), preceded by a header and
    /// followed by a `#` summary line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("formula\tobserved\texpected\n");
        for (i, f) in self.space.iter().enumerate() {
            let _ = writeln!(
                out,
                "{f}\t{:.6}\t{:.6}",
                self.frequency(i),
                self.expected[i]
            );
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::InsufficientSamples => "FAIL insufficient-samples",
        };
        format!(
            "# {verdict} mode={} samples={} space={} outside={} chi2={:.4} df={} critical={:.4}",
            self.mode.name(),
            self.samples,
            self.space.len(),
            self.outside,
            self.statistic,
            self.df,
            self.critical,
        )
    }
}

/// Samples `samples` formulae from `generator` in `mode` and tests the
/// frequencies against the uniform law on the enumerated space.
pub fn run_uniformity_trial(
    generator: &Generator,
    mode: Mode,
    n: u32,
    samples: u64,
    seed: u64,
    cap: u64,
) -> Result<FrequencyReport> {
    let space = enumerate_space(mode, n, generator.atoms(), generator.signature(), cap)?;
    if space.is_empty() {
        return Err(Error::EmptySpace {
            space: "enumerated space",
            depth: n,
            atoms: generator.atoms().len(),
        });
    }
    let index: HashMap<&Formula, usize> = space.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut observed = vec![0u64; space.len()];
    let mut outside = 0;
    let mut rng = RandomSource::from_seed(seed);
    for _ in 0..samples {
        let f = generator.generate(mode, n, &mut rng)?;
        match index.get(&f) {
            Some(&i) => observed[i] += 1,
            None => outside += 1,
        }
    }
    drop(index);

    let cells = space.len();
    let expected = vec![1.0 / cells as f64; cells];
    let df = cells - 1;
    let statistic = if samples == 0 {
        0.0
    } else {
        chi_square_statistic(&observed, &expected)
    };
    let critical = if df == 0 {
        0.0
    } else {
        chi_square_quantile(df as f64, CHI_SQUARE_LEVEL)
    };
    let verdict = if (samples as f64) / (cells as f64) < MIN_EXPECTED_PER_CELL {
        Verdict::InsufficientSamples
    } else if outside == 0 && (df == 0 || statistic < critical) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(FrequencyReport {
        mode,
        space,
        observed,
        outside,
        samples,
        expected,
        statistic,
        df,
        critical,
        verdict,
    })
}
