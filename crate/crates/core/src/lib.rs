//! Permutation statistics over shuffle sets.
//!
//! * [`perm`]: permutations over sets of positive integers, standardization,
//!   space labels and constructors for prescribed descent or peak profiles.
//! * [`stats`]: descent, peak and valley statistics and their distributions.
//! * [`shuffle`]: shuffle sets, shuffle words and the relabelling bijections.
//! * [`reduce`]: statistic-preserving bijections and canonical-form pipelines.
//! * [`qpoly`]: exact q-polynomials and the closed forms for maj over shuffles.
//! * [`verify`]: exhaustive compatibility, identity and audit checks.
//! * [`cli`]: the `shufcompat` command line.

pub mod cli;
pub mod error;
pub mod perm;
pub mod qpoly;
pub mod reduce;
pub mod shuffle;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use qpoly::QPoly;
pub use reduce::{canonicalize, ReductionTrace, Side};
pub use shuffle::{shuffles, ShuffleWord};
pub use stats::{Distribution, StatValue, Statistic};
pub use verify::{Limits, Outcome, Report};
