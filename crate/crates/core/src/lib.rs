//! Uniform random generation of propositional formulae.
//!
//! Given a signature (connectives with arities), a set of atoms and a depth,
//! this crate counts, enumerates and uniformly samples three formula spaces:
//!
//! * depth at most `n`, some atoms ([`Generator::us`]),
//! * depth exactly `n`, some atoms ([`Generator::es_uniform`]),
//! * depth exactly `n`, all atoms ([`Generator::ea`]).
//!
//! ```
//! use formgen::{AtomSet, Generator, RandomSource, Signature};
//!
//! let sig = Signature::parse_inline("not:1,and:2").unwrap();
//! let atoms = AtomSet::parse_list("p,q").unwrap();
//! let gen = Generator::new(sig, atoms).unwrap();
//! let mut rng = RandomSource::from_seed(7);
//! let f = gen.ea(2, &mut rng).unwrap();
//! assert_eq!(f.depth(), 2);
//! assert_eq!(f.atoms_used().len(), 2);
//! ```

pub mod cli;
pub mod counting;
pub mod error;
pub mod format;
pub mod generators;
pub mod lang;
pub mod oracle;
pub mod random;
pub mod stats;

pub use counting::{BigCount, CountCache};
pub use error::{Error, ErrorKind, Result};
pub use format::Format;
pub use generators::{
    sample_exact_depth_vector, DepthVector, EaDistribution, EaSlot, Generator, Mode,
};
pub use lang::{parse_prefix, AtomSet, Connective, Formula, Signature, Symbol};
pub use oracle::{FrequencyReport, Verdict};
pub use random::{RandomSource, WeightTable};
