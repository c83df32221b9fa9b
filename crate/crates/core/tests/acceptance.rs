//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use formgen::counting::binomial;
use formgen::oracle::{
    enumerate_up_to, run_uniformity_trial, FrequencyReport, DEFAULT_ENUMERATION_CAP,
};
use formgen::{
    AtomSet, BigCount, CountCache, Error, Formula, Generator, Mode, RandomSource, Signature,
};
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

const FREQ_TOL: f64 = 0.01;
const SHORT_RUN: Duration = Duration::from_secs(30);

const TEST_SIGNATURES: [&str; 5] = [
    "and:2",
    "not:1,and:2",
    "not:1,and:2,or:2",
    "oplus:4",
    "not:1,oplus:3",
];

fn atoms(p: usize) -> AtomSet {
    AtomSet::new((1..=p).map(|i| format!("p{i}"))).unwrap()
}

fn generator(sig: &str, atoms: &str) -> Generator {
    Generator::new(
        Signature::parse_inline(sig).unwrap(),
        AtomSet::parse_list(atoms).unwrap(),
    )
    .unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_freq(report: &FrequencyReport, formula: &str, target: f64) -> Result<(), String> {
    let f = report
        .frequency_of(formula)
        .ok_or_else(|| format!("{formula} missing from space"))?;
    ensure((f - target).abs() <= FREQ_TOL, || {
        format!("{formula}: frequency {f:.4}, expected {target} ± {FREQ_TOL}")
    })
}

fn check_all_freq(report: &FrequencyReport, target: f64) -> Result<(), String> {
    for f in &report.space {
        check_freq(report, &f.to_prefix(), target)?;
    }
    Ok(())
}

fn ac1_counts_match_oracle() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for sig_text in TEST_SIGNATURES {
        let sig = Signature::parse_inline(sig_text).unwrap();
        let counts = CountCache::new(&sig);
        for p in 1..=3 {
            let atoms = atoms(p);
            for n in 0..=3u32 {
                let listing = match enumerate_up_to(n, &atoms, &sig, DEFAULT_ENUMERATION_CAP) {
                    Ok(l) => l,
                    Err(Error::Capacity { .. }) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e.to_string()),
                };
                let exact: Vec<&Formula> = listing.iter().filter(|f| f.depth() == n).collect();
                let all = exact.iter().filter(|f| f.atoms_used().len() == p).count();
                let pairs = [
                    ("q_us", counts.q_us(n.into(), p), listing.len()),
                    ("q_es", counts.q_es(n, p), exact.len()),
                    ("q_ea", counts.q_ea(n, p), all),
                ];
                for (name, formula, oracle) in pairs {
                    ensure(formula == BigCount::from(oracle), || {
                        format!("{sig_text} n={n} p={p}: {name}={formula}, oracle {oracle}")
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} configurations exact, {skipped} above the 10^6 cap"
    ))
}

fn ac2_biased_two_atoms() -> Outcome {
    let g = generator("not:1,and:2", "p1,p2");
    let r = run_uniformity_trial(&g, Mode::EsBiased, 1, 200_000, 1, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    for f in ["not(p1)", "not(p2)"] {
        check_freq(&r, f, 0.25)?;
    }
    for f in ["and(p1,p1)", "and(p1,p2)", "and(p2,p1)", "and(p2,p2)"] {
        check_freq(&r, f, 0.125)?;
    }
    Ok(format!(
        "not(p1)={:.4} and(p1,p2)={:.4}",
        r.frequency_of("not(p1)").unwrap(),
        r.frequency_of("and(p1,p2)").unwrap()
    ))
}

fn ac3_biased_nested_and() -> Outcome {
    let g = generator("and:2", "p1");
    let r = run_uniformity_trial(&g, Mode::EsBiased, 2, 200_000, 2, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    check_freq(&r, "and(and(p1,p1),p1)", 0.25)?;
    check_freq(&r, "and(p1,and(p1,p1))", 0.25)?;
    check_freq(&r, "and(and(p1,p1),and(p1,p1))", 0.5)?;
    Ok(format!(
        "frequencies {:.4}/{:.4}/{:.4}",
        r.frequency(0),
        r.frequency(1),
        r.frequency(2)
    ))
}

fn ac4_uniform_exact_depth() -> Outcome {
    let g = generator("not:1,and:2", "p1,p2");
    let a = run_uniformity_trial(&g, Mode::Es, 1, 120_000, 3, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    ensure(a.space.len() == 6, || {
        format!("space of {} formulae", a.space.len())
    })?;
    check_all_freq(&a, 1.0 / 6.0)?;
    ensure(a.passed(), || a.summary())?;

    let g = generator("and:2", "p1");
    let b = run_uniformity_trial(&g, Mode::Es, 2, 60_000, 4, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    ensure(b.space.len() == 3, || {
        format!("space of {} formulae", b.space.len())
    })?;
    check_all_freq(&b, 1.0 / 3.0)?;
    ensure(b.passed(), || b.summary())?;
    Ok(format!(
        "chi2 {:.2} < {:.2} and {:.2} < {:.2}",
        a.statistic, a.critical, b.statistic, b.critical
    ))
}

fn ac5_exact_all_single_atom() -> Outcome {
    let g = generator("not:1,and:2", "p");
    let expected = g.counts().q_es(2, 1);
    ensure(expected == BigCount::from(10u32), || {
        format!("q_es(2,1) = {expected}")
    })?;
    let r = run_uniformity_trial(&g, Mode::Ea, 2, 200_000, 5, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    ensure(r.space.len() == 10, || {
        format!("oracle space of {}", r.space.len())
    })?;
    check_all_freq(&r, 0.1)?;
    let (lo, hi) = (0..10)
        .map(|i| r.frequency(i))
        .fold((1.0f64, 0.0f64), |(l, h), f| (l.min(f), h.max(f)));
    Ok(format!("10 formulae, frequencies in [{lo:.4}, {hi:.4}]"))
}

fn ac6_up_to_uniformity() -> Outcome {
    let g = generator("not:1,and:2", "p1,p2");
    let r = run_uniformity_trial(&g, Mode::Us, 2, 200 * 74, 6, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    ensure(r.space.len() == 74, || {
        format!("space of {}", r.space.len())
    })?;
    ensure(r.df == 73, || format!("df {}", r.df))?;
    ensure(r.passed(), || r.summary())?;
    Ok(format!(
        "chi2 {:.2} < {:.2} (df 73)",
        r.statistic, r.critical
    ))
}

fn ac7_infeasibility_guard() -> Outcome {
    let mut cases = 0;
    for k in 1..=4usize {
        let single = format!("op:{k}");
        let ladder = (1..=k)
            .map(|a| format!("c{a}:{a}"))
            .collect::<Vec<_>>()
            .join(",");
        for sig_text in [single, ladder] {
            let sig = Signature::parse_inline(&sig_text).unwrap();
            let counts = CountCache::new(&sig);
            for n in 0..=3u32 {
                for p in 1..=6usize {
                    let infeasible = p > k.pow(n);
                    let q = counts.q_ea(n, p);
                    ensure(q.is_zero() == infeasible, || {
                        format!("{sig_text} n={n} p={p}: q_ea={q}, p > k^n is {infeasible}")
                    })?;
                    let g = Generator::new(sig.clone(), atoms(p)).unwrap();
                    let mut rng = RandomSource::from_seed((k * 100 + n as usize * 10 + p) as u64);
                    match g.ea(n, &mut rng) {
                        Err(Error::Infeasible { .. }) if infeasible => {}
                        Ok(f) if !infeasible => {
                            ensure(f.depth() == n && f.atoms_used().len() == p, || {
                                format!("{sig_text} n={n} p={p}: bad formula {f}")
                            })?;
                        }
                        other => {
                            return Err(format!("{sig_text} n={n} p={p}: unexpected {other:?}"))
                        }
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (signature, n, p) cases"))
}

struct RandomConfig {
    sig: Signature,
    atoms: AtomSet,
    n: u32,
}

fn random_config(rng: &mut RandomSource) -> RandomConfig {
    let n = rng.below(5) as u32;
    let p = 1 + rng.below_usize(4);
    let connectives = rng.below_usize(5);
    let sig = Signature::new((0..connectives).map(|i| (format!("c{i}"), 1 + rng.below_usize(3))))
        .unwrap();
    RandomConfig {
        sig,
        atoms: AtomSet::new((0..p).map(|i| format!("a{i}"))).unwrap(),
        n,
    }
}

fn check_postcondition(
    mode: Mode,
    config: &RandomConfig,
    result: &Result<Formula, Error>,
) -> Result<(), String> {
    let n = config.n;
    let p = config.atoms.len();
    let all: BTreeSet<_> = config.atoms.to_set();
    let describe = || format!("{} n={n} sig={} p={p}: {result:?}", mode.name(), config.sig);
    let empty_exact = n > 0 && config.sig.is_empty();
    let k = config.sig.max_arity();
    let infeasible = BigCount::from(p) > BigCount::from(k).pow(n);
    match (mode, result) {
        (Mode::EsBiased | Mode::Es, Err(Error::EmptySpace { .. })) if empty_exact => Ok(()),
        (Mode::EsBiased | Mode::Es, Ok(f)) if !empty_exact => {
            ensure(f.depth() == n && f.atoms_used().is_subset(&all), describe)
        }
        (Mode::Us, Ok(f)) => ensure(f.depth() <= n && f.atoms_used().is_subset(&all), describe),
        (Mode::Ea, Err(Error::Infeasible { .. })) if infeasible => Ok(()),
        (Mode::Ea, Ok(f)) if !infeasible => {
            ensure(f.depth() == n && f.atoms_used() == all, describe)
        }
        _ => Err(describe()),
    }
    .and_then(|()| match result {
        Ok(f) => f
            .validate(&config.sig, &config.atoms)
            .map_err(|e| e.to_string()),
        Err(_) => Ok(()),
    })
}

fn ac8_property_suite() -> Outcome {
    let mut configs = RandomSource::from_seed(0x5eed);
    let mut formulae = 0;
    for i in 0..10_000u64 {
        let config = random_config(&mut configs);
        let g = Generator::new(config.sig.clone(), config.atoms.clone()).unwrap();
        for (j, mode) in [Mode::EsBiased, Mode::Es, Mode::Us, Mode::Ea]
            .into_iter()
            .enumerate()
        {
            let seed = i * 4 + j as u64;
            let first = g.generate(mode, config.n, &mut RandomSource::from_seed(seed));
            check_postcondition(mode, &config, &first)?;
            let again = g.generate(mode, config.n, &mut RandomSource::from_seed(seed));
            let bytes = |r: &Result<Formula, Error>| {
                r.as_ref()
                    .map(Formula::to_prefix)
                    .map_err(|e| e.to_string())
            };
            ensure(bytes(&first) == bytes(&again), || {
                format!("seed {seed} not reproducible for {}", mode.name())
            })?;
            if first.is_ok() {
                formulae += 1;
            }
        }
    }
    Ok(format!(
        "10000 configurations, {formulae} formulae checked and replayed"
    ))
}

fn ac9_identities() -> Outcome {
    let mut checked = 0;
    for sig_text in TEST_SIGNATURES {
        let counts = CountCache::new(&Signature::parse_inline(sig_text).unwrap());
        for n in 0..=6u32 {
            for p in 1..=5usize {
                let telescoped: BigCount = (0..=n).map(|d| counts.q_es(d, p)).sum();
                ensure(telescoped == counts.q_us(n.into(), p), || {
                    format!("{sig_text} n={n} p={p}: telescoping fails")
                })?;
                let partitioned: BigCount =
                    (1..=p).map(|i| binomial(p, i) * counts.q_ea(n, i)).sum();
                ensure(partitioned == counts.q_es(n, p), || {
                    format!("{sig_text} n={n} p={p}: partition fails")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (signature, n, p) triples"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "AC1",
            "count/oracle equivalence",
            ac1_counts_match_oracle,
            Duration::from_secs(60),
        ),
        (
            "AC2",
            "biased generator, two atoms",
            ac2_biased_two_atoms,
            SHORT_RUN,
        ),
        (
            "AC3",
            "biased generator, nested and",
            ac3_biased_nested_and,
            SHORT_RUN,
        ),
        (
            "AC4",
            "uniform exact-depth generator",
            ac4_uniform_exact_depth,
            SHORT_RUN,
        ),
        (
            "AC5",
            "uniform exact-depth all-atoms generator",
            ac5_exact_all_single_atom,
            SHORT_RUN,
        ),
        (
            "AC6",
            "uniform up-to-depth generator",
            ac6_up_to_uniformity,
            SHORT_RUN,
        ),
        (
            "AC7",
            "infeasibility guard",
            ac7_infeasibility_guard,
            SHORT_RUN,
        ),
        (
            "AC8",
            "property suite",
            ac8_property_suite,
            Duration::from_secs(120),
        ),
        ("AC9", "identity suite", ac9_identities, SHORT_RUN),
    ];
    let mut failures = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("[FAIL] {id} {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
