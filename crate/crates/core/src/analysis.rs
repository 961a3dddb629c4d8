//! Error metrics and bandwidth searches for the Brewster differentiator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    self, apply_green, measured_bandwidth, to_spectrum, GridSpec, SampledField, Spectrum,
};
use crate::greens::{self, exact_brewster_green, symmetric_grid, taylor_green, GreensFunction};
use crate::optics::OpticalConfig;

/// Samples across `[−W, W]` for each bisection probe of `max_bandwidth`.
pub const PROBE_POINTS: usize = 2001;

/// Bisection bracket for `max_bandwidth`, in units of k0.
pub const BRACKET: (f64, f64) = (1e-4, 0.7);

/// Bisection stops once the bracket is narrower than this (units of k0).
pub const RESOLUTION: f64 = 1e-4;

pub const MAX_BISECTION_STEPS: usize = 64;

/// Maximum allowed `|e_G − e_f|` for a flat-spectrum input.
pub const PARSEVAL_IDENTITY_TOL: f64 = 0.01;

/// Cutoffs at which experiment reports list the measured input bandwidth.
pub const REPORT_CUTOFFS: [f64; 4] = [0.5, 1e-1, 1e-2, 1e-3];

/// Relative L2 distance between `g` and `g_ref` over the samples with
/// `|ky/k0| ≤ w`, normalized by `g_ref` on the same samples.
pub fn spectral_error(g: &GreensFunction, g_ref: &GreensFunction, w: f64) -> Result<f64> {
    if g.grid() != g_ref.grid() {
        return Err(Error::GridMismatch);
    }
    let (lo, hi) = g.band();
    let slack = 1e-12 * w.max(f64::MIN_POSITIVE);
    if w.is_nan() || w < 0.0 || lo > -w + slack || hi < w - slack {
        return Err(Error::InvalidGrid(format!(
            "grid [{lo}, {hi}] does not cover the evaluation band [-{w}, {w}]"
        )));
    }
    let (mut diff, mut norm) = (0.0, 0.0);
    for ((a, b), &k) in g.samples().iter().zip(g_ref.samples()).zip(g.grid()) {
        if k.abs() <= w + slack {
            diff += (a - b).norm_sqr();
            norm += b.norm_sqr();
        }
    }
    if norm == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((diff / norm).sqrt())
}

/// Relative L2 distance between two fields on the same grid.
pub fn spatial_error(h: &SampledField, h_ref: &SampledField) -> Result<f64> {
    if !h.same_grid(h_ref) {
        return Err(Error::InvalidGrid("fields are sampled on different grids".into()));
    }
    let (mut diff, mut norm) = (0.0, 0.0);
    for (a, b) in h.values().iter().zip(h_ref.values()) {
        diff += (a - b).norm_sqr();
        norm += b.norm_sqr();
    }
    if norm == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((diff / norm).sqrt())
}

/// `e_G` of the exact Brewster response against its first-order Taylor
/// model over `[−w, w]`.
pub fn brewster_taylor_error(n2: f64, w: f64) -> Result<f64> {
    let cfg = OpticalConfig::at_brewster(n2)?;
    let grid = symmetric_grid(w, PROBE_POINTS)?;
    let exact = exact_brewster_green(&cfg, &grid)?;
    let taylor = taylor_green(&cfg, &grid)?;
    spectral_error(&exact, &taylor, w)
}

/// Outcome of a bandwidth bisection, with every probe kept for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSearch {
    pub w: f64,
    pub probes: Vec<(f64, f64)>,
}

/// Largest band `W` with `e_G(W) ≤ tol` for the Brewster/Taylor pair.
pub fn max_bandwidth(n2: f64, tol: f64) -> Result<f64> {
    max_bandwidth_search(n2, tol).map(|s| s.w)
}

pub fn max_bandwidth_search(n2: f64, tol: f64) -> Result<BandwidthSearch> {
    if !(n2.is_finite() && n2 > 1.0) {
        return Err(Error::Domain(format!("n2 = {n2} must exceed 1")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance {tol} outside (0, 1)")));
    }
    let cfg = OpticalConfig::at_brewster(n2)?;
    // Stay strictly below grazing incidence at the band edge.
    let upper = BRACKET.1.min(greens::grazing_band_limit(&cfg) * (1.0 - 1e-9));
    let mut probes = Vec::new();
    let probe = |w: f64, probes: &mut Vec<(f64, f64)>| -> Result<f64> {
        let e = brewster_taylor_error(n2, w)?;
        probes.push((w, e));
        check_monotone(probes)?;
        Ok(e)
    };

    let (mut lo, mut hi) = (BRACKET.0, upper);
    if probe(lo, &mut probes)? > tol {
        return Ok(BandwidthSearch { w: 0.0, probes });
    }
    if probe(hi, &mut probes)? <= tol {
        return Ok(BandwidthSearch { w: hi, probes });
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= RESOLUTION {
            return Ok(BandwidthSearch { w: lo, probes });
        }
        let mid = 0.5 * (lo + hi);
        if probe(mid, &mut probes)? <= tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(MAX_BISECTION_STEPS))
}

fn check_monotone(probes: &[(f64, f64)]) -> Result<()> {
    let mut sorted = probes.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in sorted.windows(2) {
        let ((w_lo, e_lo), (w_hi, e_hi)) = (pair[0], pair[1]);
        if e_hi < e_lo - 1e-12 {
            return Err(Error::NonMonotone { w_lo, e_lo, w_hi, e_hi });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: f64,
    /// `None` when the search failed for this index.
    pub w: Option<f64>,
    pub error: Option<String>,
}

/// `max_bandwidth` over `n_min, n_min + step, …, ≤ n_max`. A failure at one
/// index is recorded in its row and the sweep continues.
pub fn sweep_bandwidth(n_min: f64, n_max: f64, n_step: f64, tol: f64) -> Result<Vec<SweepRow>> {
    if !(n_min > 1.0 && n_max > n_min && n_step > 0.0) || !n_max.is_finite() {
        return Err(Error::Domain(format!(
            "sweep range [{n_min}, {n_max}] step {n_step} needs 1 < n_min < n_max and step > 0"
        )));
    }
    let count = ((n_max - n_min) / n_step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let n = n_min + i as f64 * n_step;
            match max_bandwidth(n, tol) {
                Ok(w) => SweepRow { n, w: Some(w), error: None },
                Err(e) => SweepRow {
                    n,
                    w: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

/// `(e_G, e_f)` for an input with a flat spectrum on `[−W, W]`, where `W`
/// is read off the input spectrum at half amplitude. Under Parseval the two
/// agree to within [`PARSEVAL_IDENTITY_TOL`].
pub fn parseval_error_identity_check(
    f: &SampledField,
    g: &GreensFunction,
    g_ref: &GreensFunction,
) -> Result<(f64, f64)> {
    let w = measured_bandwidth(&to_spectrum(f), 0.5)?;
    let e_g = spectral_error(g, g_ref, w)?;
    let h = apply_green(f, g, false);
    let h_ref = apply_green(f, g_ref, false);
    let e_f = spatial_error(&h, &h_ref)?;
    Ok((e_g, e_f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub points: usize,
    pub span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub beamwidth: String,
    pub flip_output: bool,
    pub dft_sign: String,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthMeasurement {
    pub cutoff: f64,
    #[serde(rename = "W")]
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    #[serde(rename = "e_G")]
    pub e_g: f64,
    pub e_f: f64,
    pub n2: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub grid: GridMetadata,
    pub conventions: Conventions,
    pub signal: String,
    pub measured_bandwidth: Vec<BandwidthMeasurement>,
}

pub const BEAMWIDTH_CONVENTION: &str = "full width at 1/e amplitude: f(y) = exp(-(y/w)^2), w = beamwidth/2";
pub const DFT_CONVENTION: &str = "F(ky) = sum f(y) exp(-i ky y) dy; f(y) = sum F(ky) exp(+i ky y) dky/(2 pi)";
pub const REFERENCE_CONVENTION: &str =
    "ideal differentiator i(n/2 - 1/(2n^3)) i ky/k0 applied over the same band as the exact response";

/// Input profile for [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    /// Full width at 1/e amplitude, in λ0.
    Gaussian { beamwidth: f64 },
    /// Rectangular spectrum on `[−W, W]`, W in units of k0.
    Sinc { bandwidth: f64 },
    /// User-supplied samples.
    Samples { field: SampledField, description: String },
}

impl Signal {
    pub fn describe(&self) -> String {
        match self {
            Signal::Gaussian { beamwidth } => format!("gaussian, beamwidth {beamwidth} lambda0"),
            Signal::Sinc { bandwidth } => format!("sinc, bandwidth {bandwidth} k0"),
            Signal::Samples { description, .. } => description.clone(),
        }
    }

    pub fn sample(&self, grid: GridSpec) -> Result<SampledField> {
        match self {
            Signal::Gaussian { beamwidth } => field::make_gaussian(*beamwidth, grid),
            Signal::Sinc { bandwidth } => field::make_sinc(*bandwidth, grid),
            Signal::Samples { field, .. } => Ok(field.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSetup {
    pub signal: Signal,
    pub n2: f64,
    pub lambda0: f64,
    /// Evaluation band W (units of k0); also the band of the Green's functions.
    pub band: f64,
    pub grid: GridSpec,
    pub flip_output: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub input: SampledField,
    pub output: SampledField,
    pub reference: SampledField,
    pub exact: GreensFunction,
    pub taylor: GreensFunction,
    pub report: ErrorReport,
}

/// Reflect the signal off a Brewster interface and compare the reflected
/// field with the scaled ideal derivative.
pub fn run_experiment(setup: &ExperimentSetup) -> Result<Experiment> {
    let cfg = OpticalConfig::new(1.0, setup.n2, setup.lambda0, crate::optics::brewster_angle(setup.n2)?)?;
    let limit = greens::grazing_band_limit(&cfg);
    if !(setup.band > 0.0 && setup.band < limit) {
        return Err(Error::Domain(format!(
            "evaluation band {} k0 must lie in (0, {limit}) for n2 = {}",
            setup.band, setup.n2
        )));
    }
    let input = setup.signal.sample(setup.grid)?;
    setup.grid.check_nyquist(setup.band)?;

    let green_points = green_points(setup.band, input.span());
    let grid = symmetric_grid(setup.band, green_points)?;
    let exact = exact_brewster_green(&cfg, &grid)?;
    let taylor = greens::ideal_differentiator_green(
        Complex64::new(0.0, greens::differentiator_scale(cfg.relative_index())),
        &grid,
    )?
    .with_label(format!("ideal differentiator, n = {}", setup.n2));

    let output = apply_green(&input, &exact, setup.flip_output);
    let reference = apply_green(&input, &taylor, setup.flip_output);
    let e_f = spatial_error(&output, &reference)?;
    let e_g = spectral_error(&exact, &taylor, setup.band)?;

    let spectrum = to_spectrum(&input);
    let report = ErrorReport {
        e_g,
        e_f,
        n2: setup.n2,
        w: setup.band,
        grid: GridMetadata {
            points: input.len(),
            span: input.span(),
        },
        conventions: Conventions {
            beamwidth: BEAMWIDTH_CONVENTION.into(),
            flip_output: setup.flip_output,
            dft_sign: DFT_CONVENTION.into(),
            reference: REFERENCE_CONVENTION.into(),
        },
        signal: setup.signal.describe(),
        measured_bandwidth: bandwidth_table(&spectrum)?,
    };
    Ok(Experiment {
        input,
        output,
        reference,
        exact,
        taylor,
        report,
    })
}

/// Odd sample count giving a Green's-function step at most a quarter of the
/// spectrum step `1/span`.
fn green_points(band: f64, span: f64) -> usize {
    let needed = (8.0 * band * span).ceil() as usize + 1;
    needed.max(2049) | 1
}

fn bandwidth_table(spectrum: &Spectrum) -> Result<Vec<BandwidthMeasurement>> {
    REPORT_CUTOFFS
        .iter()
        .map(|&cutoff| {
            Ok(BandwidthMeasurement {
                cutoff,
                w: measured_bandwidth(spectrum, cutoff)?,
            })
        })
        .collect()
}
