//! Entanglement between two quantum masses coupled by a central force.
//!
//! The toolkit combines an exact analytic Gaussian engine (closed-form
//! covariance dynamics for the quadratic truncation of the potential)
//! with a high-accuracy pentadiagonal Crank-Nicolson propagator for the
//! relative-coordinate wave function (cubic order and beyond), plus
//! closed-form correction predictors and non-Gaussianity diagnostics.

pub mod bipartite;
pub mod config;
pub mod corrections;
pub mod entanglement;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod potential;
pub mod scenario;
pub mod solver;
pub mod trace;
pub mod units;

pub use config::{characteristic_frequencies, radius_from_mass, ExperimentConfig, Separation};
pub use error::{Error, Result};
