//! Single-layer wavelet-based network (WBNN) learning of univariate functions.
//!
//! The crate is `no_std` with `alloc`. It covers:
//!
//! * [`filter`]: Daubechies filter generation and cascade evaluation of φ and ψ,
//! * [`transform`]: the orthonormal fast wavelet transform between sample grids
//!   and telescopic coefficient trees,
//! * [`besov`]: Besov index bookkeeping and the wavelet-coefficient quasinorm,
//! * [`activation`]: shrinkage operators, including the decreasing-rearrangement
//!   threshold and top-k activations,
//! * [`learner`]: the analyze → activate → synthesize pipeline, error metrics and
//!   the swarm runner,
//! * [`density`]: Haar empirical density estimation and the risk-rate experiment,
//! * [`corpus`]: the four benchmark targets with their Besov registrations.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod activation;
pub mod besov;
pub mod corpus;
pub mod density;
mod error;
pub mod filter;
pub mod learner;
mod math;
pub mod transform;

pub use activation::{RankedCoefficients, RankedEntry, ShrinkageRule};
pub use besov::BesovParams;
pub use corpus::{CorpusEntry, CorpusId};
pub use density::EmpiricalDensity;
pub use error::{Error, Result};
pub use filter::FilterPair;
pub use learner::{LearnConfig, LearnReport, RuleSpec};
pub use transform::{CoefficientTree, Interval, SampleGrid};
