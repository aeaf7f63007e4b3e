//! Stepdown multiple-testing procedures controlling the k-FWER, the false
//! discovery proportion and the false discovery rate.
//!
//! [`constants`] builds critical sequences, [`procedures`] applies them to
//! p-values, [`scenarios`] draws adversarial and benign p-value laws and
//! [`simulation`] estimates error rates by seeded Monte Carlo.

pub mod constants;
pub mod error;
pub mod metrics;
pub mod normal;
pub mod params;
pub mod procedures;
pub mod reproduce;
pub mod rng;
pub mod scenarios;
pub mod simulation;

pub use constants::{build, CriticalSequence, DResult, Recipe};
pub use error::{Error, Result};
pub use metrics::TruthMask;
pub use params::{ControlParams, Gamma, Rational};
pub use procedures::{Mode, PValueSet, RejectionOutcome};
pub use scenarios::{AltLaw, Sample, Scenario};
pub use simulation::{Estimate, SimulationConfig, SimulationReport};
