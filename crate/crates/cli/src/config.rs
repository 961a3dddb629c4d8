//! Experiment configuration: flat TOML files merged with command-line flags.
//!
//! Every key is optional in the file; a flag given on the command line wins
//! over the file, and the file wins over the built-in default. Unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use brewster_core::field::GridSpec;
use brewster_core::greens::grazing_band_limit;
use brewster_core::optics::OpticalConfig;
use clap::{Args, ValueEnum};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Gaussian,
    Sinc,
    File,
}

pub fn load_file<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

/// Keys accepted by `simulate`, both as TOML keys and as `--flags`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    /// Input profile
    #[arg(long, value_enum)]
    pub signal: Option<SignalKind>,
    /// Gaussian full width at 1/e amplitude, in wavelengths
    #[arg(long)]
    pub beamwidth: Option<f64>,
    /// Sinc half-bandwidth, in units of k0
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// CSV profile (`y_over_lambda0,re,im`) for `signal = "file"`
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Refractive index of the reflecting medium
    #[arg(long)]
    pub n2: Option<f64>,
    /// Free-space wavelength (sets the length unit)
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Grid points (power of two, >= 256)
    #[arg(long)]
    pub points: Option<usize>,
    /// Grid span, in wavelengths
    #[arg(long)]
    pub span: Option<f64>,
    /// Evaluation band W in units of k0 (defaults to 0.1, or the sinc bandwidth)
    #[arg(long)]
    pub band: Option<f64>,
    /// Pass threshold on e_f
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Mirror the output, h(y) <- h(-y)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub flip_output: Option<bool>,
    /// Directory receiving input.csv, output.csv, reference.csv and report.json
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub signal: SignalKind,
    pub beamwidth: f64,
    pub bandwidth: f64,
    pub input: Option<PathBuf>,
    pub n2: f64,
    pub wavelength: f64,
    pub points: usize,
    pub span: f64,
    pub band: f64,
    pub tolerance: f64,
    pub flip_output: bool,
    pub output_dir: PathBuf,
}

macro_rules! merge {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        SimulateArgs { $($field: $flags.$field.clone().or_else(|| $file.$field.clone()),)* }
    };
}

impl ExperimentConfig {
    pub fn resolve(flags: SimulateArgs, file: SimulateArgs) -> Result<Self, CliError> {
        let m = merge!(
            flags, file, signal, beamwidth, bandwidth, input, n2, wavelength, points, span, band,
            tolerance, flip_output, output_dir
        );
        let signal = m.signal.unwrap_or(SignalKind::Gaussian);
        let bandwidth = m.bandwidth.unwrap_or(0.09);
        let default_band = match signal {
            SignalKind::Sinc => bandwidth,
            _ => 0.1,
        };
        let cfg = Self {
            signal,
            beamwidth: m.beamwidth.unwrap_or(32.0),
            bandwidth,
            input: m.input,
            n2: m.n2.unwrap_or(2.1),
            wavelength: m.wavelength.unwrap_or(1.0),
            points: m.points.unwrap_or(1 << 14),
            span: m.span.unwrap_or(512.0),
            band: m.band.unwrap_or(default_band),
            tolerance: m.tolerance.unwrap_or(0.10),
            flip_output: m.flip_output.unwrap_or(false),
            output_dir: m.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let optics = brewster_optics(self.n2, self.wavelength)?;
        if self.signal != SignalKind::File {
            GridSpec::new(self.points, self.span).map_err(usage)?;
        }
        match self.signal {
            SignalKind::Gaussian => positive("beamwidth", self.beamwidth)?,
            SignalKind::Sinc => {
                if !(self.bandwidth > 0.0 && self.bandwidth < 0.5) {
                    return Err(CliError::Usage(format!(
                        "bandwidth {} must lie in (0, 0.5) k0",
                        self.bandwidth
                    )));
                }
            }
            SignalKind::File => {
                if self.input.is_none() {
                    return Err(CliError::Usage("signal = \"file\" requires input".into()));
                }
            }
        }
        check_band(self.band, &optics)?;
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::Usage(format!("tolerance {} must lie in (0, 1)", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct GreenCompareArgs {
    /// Refractive index of the reflecting medium
    #[arg(long)]
    pub n2: Option<f64>,
    /// Half-width of the frequency band, in units of k0
    #[arg(long)]
    pub band: Option<f64>,
    /// Number of samples across the band
    #[arg(long)]
    pub points: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenCompareConfig {
    pub n2: f64,
    pub band: f64,
    pub points: usize,
    pub output: PathBuf,
}

impl GreenCompareConfig {
    pub fn resolve(flags: GreenCompareArgs, file: GreenCompareArgs) -> Result<Self, CliError> {
        let cfg = Self {
            n2: flags.n2.or(file.n2).unwrap_or(2.1),
            band: flags.band.or(file.band).unwrap_or(0.3),
            points: flags.points.or(file.points).unwrap_or(601),
            output: flags.output.or(file.output).unwrap_or_else(|| PathBuf::from("green.csv")),
        };
        let optics = brewster_optics(cfg.n2, 1.0)?;
        check_band(cfg.band, &optics)?;
        if cfg.points < 2 {
            return Err(CliError::Usage(format!("points {} must be at least 2", cfg.points)));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    /// Smallest refractive index
    #[arg(long)]
    pub n_min: Option<f64>,
    /// Largest refractive index
    #[arg(long)]
    pub n_max: Option<f64>,
    /// Index step
    #[arg(long)]
    pub n_step: Option<f64>,
    /// Error bound on e_G
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output CSV path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n_min: f64,
    pub n_max: f64,
    pub n_step: f64,
    pub tol: f64,
    pub output: PathBuf,
}

impl SweepConfig {
    pub fn resolve(flags: SweepArgs, file: SweepArgs) -> Result<Self, CliError> {
        let cfg = Self {
            n_min: flags.n_min.or(file.n_min).unwrap_or(1.5),
            n_max: flags.n_max.or(file.n_max).unwrap_or(3.5),
            n_step: flags.n_step.or(file.n_step).unwrap_or(0.1),
            tol: flags.tol.or(file.tol).unwrap_or(0.10),
            output: flags.output.or(file.output).unwrap_or_else(|| PathBuf::from("sweep.csv")),
        };
        if !(cfg.n_min > 1.0 && cfg.n_max > cfg.n_min && cfg.n_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "index range [{}, {}] needs 1 < n_min < n_max",
                cfg.n_min, cfg.n_max
            )));
        }
        positive("n_step", cfg.n_step)?;
        if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
            return Err(CliError::Usage(format!("tol {} must lie in (0, 1)", cfg.tol)));
        }
        Ok(cfg)
    }
}

fn usage(e: brewster_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn positive(name: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} = {value} must be positive")))
    }
}

fn brewster_optics(n2: f64, wavelength: f64) -> Result<OpticalConfig, CliError> {
    if !(n2.is_finite() && n2 > 1.0) {
        return Err(CliError::Usage(format!("n2 = {n2} must exceed 1")));
    }
    positive("wavelength", wavelength)?;
    let theta = n2.atan();
    OpticalConfig::new(1.0, n2, wavelength, theta).map_err(usage)
}

fn check_band(band: f64, optics: &OpticalConfig) -> Result<(), CliError> {
    let limit = grazing_band_limit(optics);
    if !(band > 0.0 && band < limit) {
        return Err(CliError::Usage(format!(
            "band {band} k0 must lie in (0, {limit:.6}) for n2 = {} (grazing incidence)",
            optics.n2
        )));
    }
    Ok(())
}
