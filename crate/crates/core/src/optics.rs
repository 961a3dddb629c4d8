//! Plane-wave reflection at a planar dielectric interface and the spectral
//! mappings between the beam frame and the frame of a rotated structure.
//!
//! Angles are radians. Wavenumbers passed to the mapping functions are in
//! the same length unit as [`OpticalConfig::lambda0`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    /// Electric field transverse to the plane of incidence (s).
    TE,
    /// Magnetic field transverse to the plane of incidence (p).
    TM,
}

/// Media and geometry of a single air/dielectric interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalConfig {
    /// Index of the incidence medium.
    pub n1: f64,
    /// Index of the second medium.
    pub n2: f64,
    /// Free-space wavelength.
    pub lambda0: f64,
    /// Rotation angle of the structure, equal to the incidence angle of the
    /// central plane wave.
    pub theta: f64,
}

impl OpticalConfig {
    pub fn new(n1: f64, n2: f64, lambda0: f64, theta: f64) -> Result<Self> {
        if !(n1.is_finite() && n1 >= 1.0) {
            return Err(Error::Domain(format!("n1 = {n1} must be finite and >= 1")));
        }
        if !(n2.is_finite() && n2 > n1) {
            return Err(Error::Domain(format!("n2 = {n2} must be finite and > n1 = {n1}")));
        }
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(Error::Domain(format!("lambda0 = {lambda0} must be positive")));
        }
        if !(theta.is_finite() && (0.0..FRAC_PI_2).contains(&theta)) {
            return Err(Error::Domain(format!("theta = {theta} rad outside [0, pi/2)")));
        }
        Ok(Self { n1, n2, lambda0, theta })
    }

    /// Air-to-dielectric interface rotated to the Brewster angle of `n2`,
    /// with lengths measured in units of the wavelength.
    pub fn at_brewster(n2: f64) -> Result<Self> {
        let theta = brewster_angle(n2)?;
        Self::new(1.0, n2, 1.0, theta)
    }

    /// Free-space wavenumber `2π/λ0`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda0
    }

    /// Relative index `n2/n1`.
    pub fn relative_index(&self) -> f64 {
        self.n2 / self.n1
    }

    /// Brewster angle of this interface, `atan(n2/n1)`.
    pub fn brewster(&self) -> f64 {
        self.relative_index().atan()
    }
}

/// Brewster angle for incidence from air onto a medium of index `n2`.
pub fn brewster_angle(n2: f64) -> Result<f64> {
    if !(n2.is_finite() && n2 > 0.0) {
        return Err(Error::Domain(format!("refractive index {n2} must be finite and positive")));
    }
    Ok(n2.atan())
}

/// Fresnel amplitude reflection coefficient at incidence angle `theta_inc`.
///
/// The TM coefficient is `(n² cosθ − √(n² − sin²θ)) / (n² cosθ + √(n² − sin²θ))`
/// with `n = n2/n1`, which vanishes at the Brewster angle and has slope
/// `−(n/2 − 1/(2n³))` per radian there. TE uses the matching
/// `(cosθ − √(n² − sin²θ)) / (cosθ + √(n² − sin²θ))`.
pub fn fresnel_reflection(cfg: &OpticalConfig, pol: Polarization, theta_inc: f64) -> Result<Complex64> {
    if !(theta_inc.is_finite() && (0.0..FRAC_PI_2).contains(&theta_inc)) {
        return Err(Error::Domain(format!("incidence angle {theta_inc} rad outside [0, pi/2)")));
    }
    let n = cfg.relative_index();
    let (sin, cos) = theta_inc.sin_cos();
    // n > 1 keeps the radicand positive: no total internal reflection.
    let root = (n * n - sin * sin).sqrt();
    let r = match pol {
        Polarization::TM => (n * n * cos - root) / (n * n * cos + root),
        Polarization::TE => (cos - root) / (cos + root),
    };
    Ok(Complex64::new(r, 0.0))
}

/// Transverse wavenumber seen in the rotated frame,
/// `k0 sin(θ + asin(ky/k0))`.
pub fn map_ky_to_rotated(cfg: &OpticalConfig, ky: f64) -> Result<f64> {
    let k0 = cfg.k0();
    let s = ky / k0;
    if !s.is_finite() || s.abs() > 1.0 {
        return Err(Error::Evanescent { ky_over_k0: s });
    }
    Ok(k0 * (cfg.theta + s.asin()).sin())
}

/// Inverse of [`map_ky_to_rotated`] on the admissible window,
/// `k0 sin(asin(|ky'|/k0) − θ)`.
pub fn map_rotated_to_ky(cfg: &OpticalConfig, ky_prime: f64) -> Result<f64> {
    let k0 = cfg.k0();
    let s = ky_prime.abs() / k0;
    if !s.is_finite() || s > 1.0 {
        return Err(Error::Domain(format!(
            "rotated-frame wavenumber {} k0 exceeds k0",
            ky_prime / k0
        )));
    }
    Ok(k0 * (s.asin() - cfg.theta).sin())
}

/// Range of rotation angles `[asin(W/k0), acos(W/k0)]` for which a band
/// `[−W, W]` maps entirely into `[0, k0]` of the rotated frame.
pub fn rotation_window(w: f64, k0: f64) -> Result<(f64, f64)> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::Domain(format!("k0 = {k0} must be positive")));
    }
    let s = w / k0;
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::Domain(format!("bandwidth {w} must be non-negative")));
    }
    if s >= std::f64::consts::FRAC_1_SQRT_2 {
        return Err(Error::EmptyWindow { w_over_k0: s });
    }
    Ok((s.asin(), s.acos()))
}
