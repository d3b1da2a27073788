//! Finite-temperature dynamics of a dressed atom, treated as a harmonic
//! oscillator, coupled linearly to the modes of a spherical cavity.
//!
//! The pipeline is: build a [`CavityScenario`], check the small-cavity
//! regime, solve the [`ModeSpectrum`], assemble a [`CouplingMatrix`], then
//! evaluate the occupation number of the atom over time or its lower bound.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod spectrum;
pub mod units;

pub use coupling::{CouplingMatrix, ElementMethod, FiniteOracle};
pub use dynamics::{EvolutionSeries, StabilityReport};
pub use error::{Error, Result};
pub use spectrum::{ModeSpectrum, NormalMode, RegimeReport, SolveMethod};
pub use units::{build_scenario, CavityScenario, PhysicalConstants};
