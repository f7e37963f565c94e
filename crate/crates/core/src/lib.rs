//! Minimum-distance verification for regular LDPC codes.
//!
//! * [`gf2`]: packed GF(2) vectors and matrices.
//! * [`ensembles`]: seeded samplers for the `A(ℓ,m)` and `B(ℓ,m)` ensembles.
//! * [`spectra`]: weight-spectrum exponents, thresholds `δ*`, `θ*`, and
//!   complexity exponents, generic over the float type.
//! * [`distance`]: exhaustive, sliding-window, matching-bipartition and
//!   covering-set distance search.

pub mod distance;
pub mod ensembles;
pub mod error;
pub mod gf2;
pub mod scalar;
pub mod seed;
pub mod spectra;

pub use distance::{Certificate, Code, Counters, DistanceResult};
pub use ensembles::{Ensemble, EnsembleSpec};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use scalar::Real;
pub use seed::Seed;
pub use spectra::SpectrumParams;

pub type ThresholdReport = spectra::ThresholdReport<f64>;
pub type ThresholdReportF32 = spectra::ThresholdReport<f32>;
pub type GenericExponents = spectra::GenericExponents<f64>;
pub type ExtendedReal = spectra::ExtendedReal<f64>;
pub type ExtendedRealF32 = spectra::ExtendedReal<f32>;
