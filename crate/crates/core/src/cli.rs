//! Command-line front end.
//!
//! Every failure prints one line `error[<kind>]: <message>` on stderr and
//! exits with 1 (usage), 2 (infeasible or empty space) or 3 (capacity).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::counting::CountCache;
use crate::error::{Error, ErrorKind};
use crate::format::{render, Format};
use crate::generators::{Generator, Mode};
use crate::lang::{AtomSet, Signature};
use crate::oracle::{enumerate_space, run_uniformity_trial, DEFAULT_ENUMERATION_CAP};
use crate::random::RandomSource;

#[derive(Debug, Parser)]
#[command(
    name = "formgen",
    version,
    about = "Count, enumerate and uniformly sample propositional formulae"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact sizes q_us, q_es and q_ea
    Count(LangArgs),
    /// Generate random formulae, one per line
    Gen {
        #[command(flatten)]
        lang: LangArgs,
        #[arg(long, default_value = "es")]
        mode: Mode,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "prefix")]
        format: Format,
    },
    /// List a whole formula space in deterministic order
    Enumerate {
        #[command(flatten)]
        lang: LangArgs,
        #[arg(long, default_value = "es")]
        mode: Mode,
        #[arg(long, default_value = "prefix")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Sample a generator and test its frequencies against the uniform law
    Stats {
        #[command(flatten)]
        lang: LangArgs,
        #[arg(long, default_value = "es")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
}

#[derive(Debug, Args)]
struct LangArgs {
    #[arg(short = 'd', long)]
    depth: u32,
    /// Comma-separated atoms, e.g. p1,p2
    #[arg(long)]
    atoms: String,
    /// Inline signature, e.g. not:1,and:2
    #[arg(long)]
    connectives: Option<String>,
    /// File with one `name:arity` per line
    #[arg(long)]
    signature_file: Option<PathBuf>,
}

/// Validated language and depth for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub depth: u32,
    pub atoms: AtomSet,
    pub signature: Signature,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl LangArgs {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let signature = match (&self.connectives, &self.signature_file) {
            (Some(_), Some(_)) => {
                return Err(Failure::Usage(
                    "--connectives and --signature-file are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Failure::Usage(
                    "a signature is required (--connectives or --signature-file)".into(),
                ))
            }
            (Some(inline), None) => Signature::parse_inline(inline)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                Signature::parse_file(&text)?
            }
        };
        let atoms = AtomSet::parse_list(&self.atoms)?;
        atoms.check_disjoint(&signature)?;
        Ok(RunConfig {
            depth: self.depth,
            atoms,
            signature,
        })
    }
}

fn source(seed: Option<u64>, err: &mut dyn Write) -> RandomSource {
    match seed {
        Some(s) => RandomSource::from_seed(s),
        None => {
            let rng = RandomSource::from_entropy();
            let _ = writeln!(err, "seed={}", rng.seed());
            rng
        }
    }
}

/// Rejects `ea` requests that no formula can satisfy before any sampling.
fn precheck(mode: Mode, config: &RunConfig, counts: &CountCache) -> Result<(), Error> {
    if mode == Mode::Ea && !counts.fits(config.depth, config.atoms.len()) {
        return Err(Error::Infeasible {
            atoms: config.atoms.len(),
            depth: config.depth,
            bound: counts.max_atoms(config.depth),
        });
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("write failed: {e}"));
    match command {
        Command::Count(lang) => {
            let config = lang.resolve()?;
            let counts = CountCache::new(&config.signature);
            let p = config.atoms.len();
            let n = config.depth;
            writeln!(
                out,
                "q_us={} q_es={} q_ea={}",
                counts.q_us(i64::from(n), p),
                counts.q_es(n, p),
                counts.q_ea(n, p)
            )
            .map_err(io)?;
        }
        Command::Gen {
            lang,
            mode,
            count,
            seed,
            format,
        } => {
            let config = lang.resolve()?;
            let generator = Generator::new(config.signature.clone(), config.atoms.clone())?;
            precheck(mode, &config, generator.counts())?;
            let mut rng = source(seed, err);
            for _ in 0..count {
                let f = generator.generate(mode, config.depth, &mut rng)?;
                writeln!(out, "{}", render(&f, format)).map_err(io)?;
            }
        }
        Command::Enumerate {
            lang,
            mode,
            format,
            cap,
        } => {
            let config = lang.resolve()?;
            let counts = CountCache::new(&config.signature);
            precheck(mode, &config, &counts)?;
            let space = enumerate_space(mode, config.depth, &config.atoms, &config.signature, cap)?;
            for f in &space {
                writeln!(out, "{}", render(f, format)).map_err(io)?;
            }
        }
        Command::Stats {
            lang,
            mode,
            samples,
            seed,
            cap,
        } => {
            let config = lang.resolve()?;
            let generator = Generator::new(config.signature.clone(), config.atoms.clone())?;
            precheck(mode, &config, generator.counts())?;
            let seed = source(seed, err).seed();
            let report = run_uniformity_trial(&generator, mode, config.depth, samples, seed, cap)?;
            out.write_all(report.to_tsv().as_bytes()).map_err(io)?;
            if samples == 0 {
                let _ = writeln!(err, "warning: insufficient samples (0 requested)");
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as Clap;
            if matches!(e.kind(), Clap::DisplayHelp | Clap::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {first}");
            return ErrorKind::Usage.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error[usage]: {msg}");
            ErrorKind::Usage.exit_code()
        }
        Err(Failure::Run(e)) => {
            let kind = e.kind();
            let _ = writeln!(err, "error[{}]: {e}", kind.tag());
            kind.exit_code()
        }
    }
}
