use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("transverse wavenumber {ky_over_k0} k0 is evanescent (|ky| > k0)")]
    Evanescent { ky_over_k0: f64 },

    #[error("rotation window is empty for bandwidth {w_over_k0} k0 (requires W < k0/sqrt(2))")]
    EmptyWindow { w_over_k0: f64 },

    #[error("rotation angle {theta} rad lies outside the admissible window [{min}, {max}]")]
    OutsideWindow { theta: f64, min: f64, max: f64 },

    #[error("grid point ky = {ky_over_k0} k0 drives the incidence angle past grazing")]
    PastGrazing { ky_over_k0: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between Green's functions")]
    GridMismatch,

    #[error("reference has zero norm on the evaluation band")]
    ZeroReference,

    #[error("spectrum is identically zero")]
    ZeroSpectrum,

    #[error("grid under-resolves the signal: {0}")]
    Undersampled(String),

    #[error("error is not monotone in bandwidth: e_G({w_hi}) = {e_hi} < e_G({w_lo}) = {e_lo}")]
    NonMonotone {
        w_lo: f64,
        e_lo: f64,
        w_hi: f64,
        e_hi: f64,
    },

    #[error("bisection did not converge within {0} steps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
