//! Sampled spectral Green's functions.
//!
//! A [`GreensFunction`] is a transfer coefficient sampled on a uniform grid
//! of normalized transverse frequencies `ky/k0`. Outside the sampled band the
//! response is zero.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{self, OpticalConfig, Polarization};

const UNIFORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreensFunction {
    samples: Vec<Complex64>,
    grid: Vec<f64>,
    label: String,
}

impl GreensFunction {
    pub fn new(samples: Vec<Complex64>, grid: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples on a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        validate_grid(&grid)?;
        Ok(Self {
            samples,
            grid,
            label: label.into(),
        })
    }

    /// Unit response on `grid`.
    pub fn ones(grid: Vec<f64>) -> Result<Self> {
        let samples = vec![Complex64::new(1.0, 0.0); grid.len()];
        Self::new(samples, grid, "identity")
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    /// `(min, max)` of the sampled band in units of k0.
    pub fn band(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    /// Largest `|ky/k0|` on the grid.
    pub fn half_width(&self) -> f64 {
        let (lo, hi) = self.band();
        lo.abs().max(hi.abs())
    }

    /// Linear interpolation at `ky/k0`; zero outside the sampled band.
    pub fn eval(&self, ky_over_k0: f64) -> Complex64 {
        let (lo, hi) = self.band();
        let h = self.spacing();
        let slack = 1e-9 * h;
        if !(ky_over_k0 >= lo - slack && ky_over_k0 <= hi + slack) {
            return Complex64::new(0.0, 0.0);
        }
        let x = ((ky_over_k0 - lo) / h).clamp(0.0, (self.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.len() - 2);
        let t = x - i as f64;
        self.samples[i] * (1.0 - t) + self.samples[i + 1] * t
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Uniform grid of `points` samples spanning `[−half_width, half_width]`,
/// exactly antisymmetric (`grid[N−1−i] == −grid[i]`).
pub fn symmetric_grid(half_width: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid(format!("{points} points, need at least 2")));
    }
    if !(half_width.is_finite() && half_width > 0.0 && half_width <= 1.0) {
        return Err(Error::InvalidGrid(format!("half width {half_width} outside (0, 1]")));
    }
    let m = (points - 1) as f64;
    Ok((0..points)
        .map(|i| half_width * (2.0 * i as f64 - m) / m)
        .collect())
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    let n = grid.len();
    if n < 2 {
        return Err(Error::InvalidGrid(format!("{n} points, need at least 2")));
    }
    if grid.iter().any(|k| !k.is_finite() || k.abs() > 1.0) {
        return Err(Error::InvalidGrid("frequencies must lie in [-1, 1] (propagating band)".into()));
    }
    let (first, last) = (grid[0], grid[n - 1]);
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    let step = (last - first) / (n - 1) as f64;
    let scale = first.abs().max(last.abs());
    for (i, &k) in grid.iter().enumerate() {
        if (k - (first + i as f64 * step)).abs() > UNIFORM_TOL * scale {
            return Err(Error::InvalidGrid(format!("non-uniform spacing at index {i}")));
        }
    }
    Ok(())
}

/// Scale factor `n/2 − 1/(2n³)` of the Brewster differentiator.
pub fn differentiator_scale(n: f64) -> f64 {
    n / 2.0 - 1.0 / (2.0 * n.powi(3))
}

/// Largest symmetric band `|ky/k0| < limit` over which the local incidence
/// angle `θ + asin(ky/k0)` stays inside `[0, π/2)`.
pub fn grazing_band_limit(cfg: &OpticalConfig) -> f64 {
    cfg.theta.cos().min(cfg.theta.sin())
}

/// TM reflection coefficient seen by each plane-wave component of a beam
/// incident at the Brewster angle, `G(ky) = r_TM(θ_B + asin(ky/k0))`.
pub fn exact_brewster_green(cfg: &OpticalConfig, grid: &[f64]) -> Result<GreensFunction> {
    let theta_b = cfg.brewster();
    if (cfg.theta - theta_b).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "rotation angle {} rad is not the Brewster angle {} rad",
            cfg.theta, theta_b
        )));
    }
    let samples = grid
        .iter()
        .map(|&s| {
            if s.is_nan() || s.abs() > 1.0 {
                return Err(Error::Evanescent { ky_over_k0: s });
            }
            let incidence = cfg.theta + s.asin();
            if !(0.0..FRAC_PI_2).contains(&incidence) {
                return Err(Error::PastGrazing { ky_over_k0: s });
            }
            optics::fresnel_reflection(cfg, Polarization::TM, incidence)
        })
        .collect::<Result<Vec<_>>>()?;
    GreensFunction::new(samples, grid.to_vec(), format!("exact TM reflection, n = {}", cfg.n2))
}

/// Express `g` in the frame of a structure rotated by `cfg.theta`:
/// `G'(ky') = G(k0 sin(asin(|ky'|/k0) − θ))`.
///
/// The result is sampled on a uniform grid over `[−k'max, k'max]`, the
/// mirrored image of `g`'s band, with as many points as `g`. It is even in
/// `ky'` by construction.
pub fn transform_green_to_rotated(g: &GreensFunction, cfg: &OpticalConfig) -> Result<GreensFunction> {
    let w = g.half_width();
    let k0 = cfg.k0();
    let (min, max) = optics::rotation_window(w * k0, k0)?;
    if cfg.theta < min || cfg.theta > max {
        return Err(Error::OutsideWindow {
            theta: cfg.theta,
            min,
            max,
        });
    }
    rotate_unchecked(g, cfg)
}

fn rotate_unchecked(g: &GreensFunction, cfg: &OpticalConfig) -> Result<GreensFunction> {
    let k0 = cfg.k0();
    let image_max = optics::map_ky_to_rotated(cfg, g.half_width() * k0)? / k0;
    let grid = symmetric_grid(image_max.min(1.0), g.len())?;
    let samples = grid
        .iter()
        .map(|&kp| optics::map_rotated_to_ky(cfg, kp * k0).map(|ky| g.eval(ky / k0)))
        .collect::<Result<Vec<_>>>()?;
    GreensFunction::new(samples, grid, format!("{} (rotated frame)", g.label()))
}

/// First-order Taylor model of the Brewster response,
/// `G(ky) = −(n/2 − 1/(2n³)) ky/k0`.
pub fn taylor_green(cfg: &OpticalConfig, grid: &[f64]) -> Result<GreensFunction> {
    let c = differentiator_scale(cfg.relative_index());
    let samples = grid.iter().map(|&s| Complex64::new(-c * s, 0.0)).collect();
    GreensFunction::new(samples, grid.to_vec(), format!("first-order Taylor, n = {}", cfg.n2))
}

/// Ideal differentiator `G(ky) = scale · i ky/k0`.
///
/// With `scale = i·(n/2 − 1/(2n³))` this coincides with [`taylor_green`].
pub fn ideal_differentiator_green(scale: Complex64, grid: &[f64]) -> Result<GreensFunction> {
    let samples = grid
        .iter()
        .map(|&s| scale * Complex64::new(0.0, s))
        .collect();
    GreensFunction::new(samples, grid.to_vec(), format!("ideal differentiator x ({scale})"))
}

/// Series composition: pointwise product of two responses on the same grid.
pub fn cascade(g1: &GreensFunction, g2: &GreensFunction) -> Result<GreensFunction> {
    if g1.grid != g2.grid {
        return Err(Error::GridMismatch);
    }
    let samples = g1
        .samples
        .iter()
        .zip(&g2.samples)
        .map(|(a, b)| a * b)
        .collect();
    GreensFunction::new(samples, g1.grid.clone(), format!("{} * {}", g1.label, g2.label))
}
