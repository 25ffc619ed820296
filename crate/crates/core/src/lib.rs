//! Quasi group codes over Z_{p^r}.
//!
//! The crate is layered bottom-up:
//!
//! * [`zring`]: ring, subgroup and projection arithmetic.
//! * [`prob`]: distributions, entropies, circular convolution.
//! * [`typical`]: letter-typical sets and the typicality-based index sets.
//! * [`qgc`]: shifted group codes, quasi group codes and nested binning.
//! * [`regions`]: achievable-rate evaluators and the auxiliary-law optimizer.
//! * [`mcsim`]: Monte Carlo simulation of the coding schemes.
//! * [`oracle`]: exhaustive checks of the supporting lemmas on small instances.
//! * [`cli`]: configuration files and the `qgc` command-line front end.

pub mod cli;
pub mod error;
pub mod mcsim;
pub mod oracle;
pub mod prob;
pub mod qgc;
pub mod regions;
pub mod rng;
pub mod typical;
pub mod zring;

pub use error::{Error, Result};
