//! Sampled one-dimensional beam profiles and their angular spectra.
//!
//! Positions are in units of λ0 and spatial frequencies in units of k0, so
//! the Fourier kernel is `exp(∓2πi·κ·y)` with `κ = ky/k0`. The transform
//! pair is
//!
//! ```text
//! F(κ) = Σ f(y) exp(−i ky y) Δy,     f(y) = Σ F(κ) exp(+i ky y) Δky / 2π
//! ```
//!
//! which under this normalization makes `d/dy` act as multiplication by
//! `i·ky = 2πi·κ`.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::GreensFunction;

pub const MIN_POINTS: usize = 256;

/// Amplitude cutoff used for [`Spectrum::bandwidth`].
pub const DEFAULT_BANDWIDTH_CUTOFF: f64 = 1e-2;

/// Amplitude cutoff defining a generator's signal band for the sampling check.
const SIGNAL_BAND_CUTOFF: f64 = 1e-6;

/// Fraction of spectral energy that may fall outside a Green's function's
/// band before `apply_green` warns about zero-filling it.
const OUT_OF_BAND_WARN: f64 = 1e-6;

/// Number of samples and total extent (in λ0) of a periodic spatial grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub span: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 1 << 14,
            span: 512.0,
        }
    }
}

impl GridSpec {
    pub fn new(points: usize, span: f64) -> Result<Self> {
        let spec = Self { points, span };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.points < MIN_POINTS || !self.points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "{} points; need a power of two >= {MIN_POINTS}",
                self.points
            )));
        }
        if !(self.span.is_finite() && self.span > 0.0) {
            return Err(Error::InvalidGrid(format!("span {} must be positive", self.span)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.span / self.points as f64
    }

    /// Check that a signal band `w` (units of k0) is sampled at least four
    /// times above Nyquist, `π/Δy ≥ 4·W·k0`.
    pub fn check_nyquist(&self, w: f64) -> Result<()> {
        let nyquist = 1.0 / (2.0 * self.spacing());
        if nyquist < 4.0 * w {
            return Err(Error::Undersampled(format!(
                "Nyquist frequency {nyquist} k0 is below 4x the signal band {w} k0"
            )));
        }
        Ok(())
    }
}

/// Complex field on a centered uniform grid, `y_j = (j − N/2)·Δy`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    values: Vec<Complex64>,
    spacing: f64,
}

impl SampledField {
    pub fn new(values: Vec<Complex64>, spacing: f64) -> Result<Self> {
        GridSpec {
            points: values.len(),
            span: spacing * values.len() as f64,
        }
        .validate()?;
        Ok(Self { values, spacing })
    }

    /// Build from explicit `(y, value)` samples, which must lie on a centered
    /// uniform grid.
    pub fn from_samples(y: &[f64], values: Vec<Complex64>) -> Result<Self> {
        let n = y.len();
        if n != values.len() {
            return Err(Error::InvalidGrid(format!("{n} positions for {} values", values.len())));
        }
        if n < 2 {
            return Err(Error::InvalidGrid("need at least two samples".into()));
        }
        let spacing = (y[n - 1] - y[0]) / (n - 1) as f64;
        let scale = y[0].abs().max(y[n - 1].abs());
        for (j, &yj) in y.iter().enumerate() {
            let expected = (j as f64 - (n / 2) as f64) * spacing;
            if yj.is_nan() || (yj - expected).abs() > 1e-9 * scale {
                return Err(Error::InvalidGrid(format!(
                    "position {yj} at index {j} is off the centered uniform grid (expected {expected})"
                )));
            }
        }
        Self::new(values, spacing)
    }

    /// Sample `f` at each grid position.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        grid.validate()?;
        let spacing = grid.spacing();
        let half = (grid.points / 2) as f64;
        let values = (0..grid.points)
            .map(|j| f((j as f64 - half) * spacing))
            .collect();
        Self::new(values, spacing)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn span(&self) -> f64 {
        self.spacing * self.len() as f64
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            points: self.len(),
            span: self.span(),
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - (self.len() / 2) as f64) * self.spacing
    }

    pub fn y_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.y(j)).collect()
    }

    /// `Σ|f|²·Δy`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing
    }

    /// Mirror about `y = 0` on the periodic grid, `h(y) ← h(−y)`.
    pub fn mirrored(&self) -> Self {
        let n = self.len();
        let values = (0..n).map(|j| self.values[(n - j) % n]).collect();
        Self {
            values,
            spacing: self.spacing,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            spacing: self.spacing,
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.spacing == other.spacing
    }
}

/// DFT of a [`SampledField`] on the conjugate grid `κ_m = (m − N/2)·Δκ`,
/// with `Δκ = 1/(N·Δy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    spacing: f64,
    bandwidth_w: f64,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, spacing: f64) -> Result<Self> {
        GridSpec {
            points: values.len(),
            span: 1.0 / spacing,
        }
        .validate()?;
        let mut spectrum = Self {
            values,
            spacing,
            bandwidth_w: 0.0,
        };
        spectrum.bandwidth_w = measured_bandwidth(&spectrum, DEFAULT_BANDWIDTH_CUTOFF).unwrap_or(0.0);
        Ok(spectrum)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Frequency step in units of k0.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn ky(&self, m: usize) -> f64 {
        (m as f64 - (self.len() / 2) as f64) * self.spacing
    }

    pub fn ky_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.ky(m)).collect()
    }

    /// Bandwidth at the default amplitude cutoff, in units of k0.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth_w
    }

    /// `Σ|F|²·Δky/2π`, equal to the spatial energy by Parseval.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing
    }
}

/// Gaussian beam `exp(−(y/w)²)` with `w = beamwidth/2`: `beamwidth` is the
/// full width at 1/e amplitude, in λ0.
pub fn make_gaussian(beamwidth: f64, grid: GridSpec) -> Result<SampledField> {
    if !(beamwidth.is_finite() && beamwidth > 0.0) {
        return Err(Error::Domain(format!("beamwidth {beamwidth} must be positive")));
    }
    grid.validate()?;
    let w = beamwidth / 2.0;
    // |F| ∝ exp(−(π w κ)²)
    let band = (1.0 / SIGNAL_BAND_CUTOFF).ln().sqrt() / (PI * w);
    grid.check_nyquist(band)?;
    if grid.span / 2.0 < 4.0 * w {
        return Err(Error::Undersampled(format!(
            "grid half-span {} λ0 truncates a beam of 1/e half-width {w} λ0",
            grid.span / 2.0
        )));
    }
    SampledField::from_fn(grid, |y| Complex64::new((-(y / w).powi(2)).exp(), 0.0))
}

/// Band-limited `sin(W k0 y)/(W k0 y)`, whose spectrum is a rectangle on
/// `[−W, W]`.
pub fn make_sinc(w: f64, grid: GridSpec) -> Result<SampledField> {
    if !(w.is_finite() && w > 0.0 && w < 0.5) {
        return Err(Error::Domain(format!("sinc bandwidth {w} k0 outside (0, 0.5)")));
    }
    grid.validate()?;
    grid.check_nyquist(w)?;
    let a = 2.0 * PI * w;
    SampledField::from_fn(grid, |y| {
        let x = a * y;
        Complex64::new(if x == 0.0 { 1.0 } else { x.sin() / x }, 0.0)
    })
}

/// Centered FFT: treats index `N/2` as the origin on both sides.
fn centered_fft(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    let half = n / 2;
    let mut buf: Vec<Complex64> = (0..n).map(|q| input[(q + half) % n]).collect();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    fft.process(&mut buf);
    (0..n).map(|m| buf[(m + half) % n]).collect()
}

pub fn to_spectrum(f: &SampledField) -> Spectrum {
    let dy = f.spacing();
    let values = centered_fft(f.values(), false)
        .into_iter()
        .map(|v| v * dy)
        .collect();
    Spectrum::new(values, 1.0 / (f.len() as f64 * dy)).expect("grid validated by SampledField")
}

pub fn to_field(spectrum: &Spectrum) -> SampledField {
    let dk = spectrum.spacing();
    let values = centered_fft(spectrum.values(), true)
        .into_iter()
        .map(|v| v * dk)
        .collect();
    SampledField::new(values, 1.0 / (spectrum.len() as f64 * dk)).expect("grid validated by Spectrum")
}

/// Filter `f` by `g`: `h = IDFT(G·DFT(f))`, with `G` linearly interpolated
/// onto the spectrum grid and zero outside its band. With `flip_output` the
/// result is mirrored, `h(y) ← h(−y)`.
pub fn apply_green(f: &SampledField, g: &GreensFunction, flip_output: bool) -> SampledField {
    let spectrum = to_spectrum(f);
    let (lo, hi) = g.band();

    if g.spacing() > 0.5 * spectrum.spacing() {
        warn!(
            "Green's function '{}' grid step {} k0 is coarser than half the spectrum step {} k0",
            g.label(),
            g.spacing(),
            spectrum.spacing()
        );
    }
    let total = spectrum.energy();
    let mut outside = 0.0;
    let mut evanescent = 0.0;
    for (m, v) in spectrum.values().iter().enumerate() {
        let k = spectrum.ky(m);
        if k < lo || k > hi {
            outside += v.norm_sqr();
        }
        if k.abs() > 1.0 {
            evanescent += v.norm_sqr();
        }
    }
    let dk = spectrum.spacing();
    if total > 0.0 && evanescent * dk > OUT_OF_BAND_WARN * total {
        warn!(
            "input carries {:.3e} of its energy in evanescent components (|ky| > k0); zeroed",
            evanescent * dk / total
        );
    }
    if total > 0.0 && outside * dk > OUT_OF_BAND_WARN * total {
        warn!(
            "{:.3e} of the input energy lies outside the band [{lo}, {hi}] k0 of '{}'; zero-filled",
            outside * dk / total,
            g.label()
        );
    }

    let filtered: Vec<Complex64> = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(m, v)| g.eval(spectrum.ky(m)) * v)
        .collect();
    let h = to_field(&Spectrum::new(filtered, spectrum.spacing()).expect("same grid as input"));
    if flip_output {
        h.mirrored()
    } else {
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivativeMethod {
    /// Multiplication by `i·ky` in the Fourier domain.
    Spectral,
    /// Second-order central difference on the periodic grid.
    CentralDifference,
}

/// `df/dy` with `y` in λ0.
pub fn derivative_oracle(f: &SampledField, method: DerivativeMethod) -> SampledField {
    match method {
        DerivativeMethod::Spectral => {
            let spectrum = to_spectrum(f);
            let n = spectrum.len();
            let values = spectrum
                .values()
                .iter()
                .enumerate()
                // The Nyquist bin has no partner, so its derivative is ambiguous.
                .map(|(m, v)| if m == 0 { Complex64::new(0.0, 0.0) } else { v * Complex64::new(0.0, 2.0 * PI * spectrum.ky(m)) })
                .collect::<Vec<_>>();
            debug_assert_eq!(values.len(), n);
            to_field(&Spectrum::new(values, spectrum.spacing()).expect("same grid"))
        }
        DerivativeMethod::CentralDifference => {
            let n = f.len();
            let v = f.values();
            let inv = 1.0 / (2.0 * f.spacing());
            let values = (0..n)
                .map(|j| (v[(j + 1) % n] - v[(j + n - 1) % n]) * inv)
                .collect();
            SampledField::new(values, f.spacing()).expect("same grid")
        }
    }
}

/// Smallest `W` (units of k0) such that `|F(κ)| ≤ ε·max|F|` for every
/// `|κ| > W`.
pub fn measured_bandwidth(spectrum: &Spectrum, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("cutoff {epsilon} outside (0, 1]")));
    }
    let peak = spectrum
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let threshold = epsilon * peak;
    Ok(spectrum
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > threshold)
        .map(|(m, _)| spectrum.ky(m).abs())
        .fold(0.0, f64::max))
}
