//! Spatial differentiation of optical beams by reflection at the Brewster
//! angle of an air/dielectric interface.
//!
//! A TM-polarized beam incident at the Brewster angle reflects each of its
//! plane-wave components with a coefficient that vanishes at the beam axis
//! and grows linearly to first order, so the reflected field approximates
//! the first derivative of the incident profile. The crate provides
//!
//! - [`optics`]: Fresnel coefficients, the Brewster angle and the rotated-frame
//!   spectral mappings,
//! - [`greens`]: sampled spectral Green's functions (exact, Taylor, ideal,
//!   rotated, cascaded),
//! - [`field`]: sampled beams, their spectra and spectral filtering,
//! - [`analysis`]: error metrics, bandwidth searches and full experiments.

pub mod analysis;
pub mod error;
pub mod field;
pub mod greens;
pub mod optics;

pub use error::{Error, Result};
