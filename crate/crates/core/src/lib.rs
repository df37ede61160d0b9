//! Supermode structure, oscillation threshold and squeezing spectra of a
//! degenerate synchronously pumped optical parametric oscillator below
//! threshold.
//!
//! The pipeline is: [`comb::PumpSpectrum`] and [`phase_matching`] feed
//! [`coupling::CouplingMatrix`], which [`supermodes::decompose`] turns into
//! supermodes. [`squeezing`] evaluates output quadrature spectra from the
//! eigenvalues; [`verify`] recomputes the same quantities by independent
//! routes.
//!
//! `no_std`; needs `alloc`.

#![no_std]
// `num_traits::Float` supplies the float methods on bare no_std builds; whenever std is
// linked the inherent methods win and the import goes unused.
#![allow(unused_imports)]

extern crate alloc;

pub mod comb;
pub mod coupling;
pub mod error;
pub mod params;
pub mod phase_matching;
pub mod squeezing;
pub mod supermodes;
pub mod verify;

pub use comb::{ModeWindow, PumpSpectrum};
pub use coupling::CouplingMatrix;
pub use error::{Error, Result};
pub use params::{cw_threshold_power, pump_strength, pumping_rate, PhysicalParams, PumpDrive};
pub use phase_matching::{mismatch_angle, pm_factor, DispersionParams, PhaseMatchModel};
pub use squeezing::{
    branch_variance, homodyne_variance, lo_projection, min_variance, transfer_function,
    variance_spectrum, Branch, FrequencyGrid, HomodyneLO, VarianceSpectrum,
};
pub use supermodes::{
    branch_rates, decompose, is_below_threshold, spopo_threshold, BranchRates, SupermodeSet,
};
