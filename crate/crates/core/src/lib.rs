//! Gowers uniformity norms on finite abelian groups, intervals and Euclidean grids,
//! with decoders for their near-extremisers and checks of the sharp constants.

pub mod config;
pub mod coset;
pub mod decoder;
pub mod domains;
pub mod error;
pub mod euclid;
pub mod fft;
pub mod generate;
pub mod engine;
pub mod nil;
pub mod numeric;
pub mod rng;
pub mod selftest;

pub use config::Tolerances;
pub use domains::{DomainSpec, PolyPhase, Signal};
pub use error::{Error, Result};
pub use num_complex::Complex64;
