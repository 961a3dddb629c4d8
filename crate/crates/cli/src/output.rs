//! CSV/JSON rendering and all-or-nothing file writes.

use std::fs;
use std::path::{Path, PathBuf};

use brewster_core::analysis::{BEAMWIDTH_CONVENTION, DFT_CONVENTION, REFERENCE_CONVENTION};
use brewster_core::field::SampledField;
use num_complex::Complex64;
use serde::Serialize;

use crate::CliError;

/// 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub const FIELD_COLUMNS: [&str; 3] = ["y_over_lambda0", "re", "im"];

pub fn field_csv(f: &SampledField) -> Result<Vec<u8>, CliError> {
    csv_bytes(
        &FIELD_COLUMNS,
        f.values()
            .iter()
            .enumerate()
            .map(|(j, v)| vec![fmt(f.y(j)), fmt(v.re), fmt(v.im)]),
    )
}

/// Parse a `y_over_lambda0,re,im` profile.
pub fn read_field_csv(path: &Path) -> Result<SampledField, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != FIELD_COLUMNS {
        return Err(CliError::Usage(format!(
            "{}: expected columns {}, found {}",
            path.display(),
            FIELD_COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut y = Vec::new();
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let parse = |i: usize| -> Result<f64, CliError> {
            record[i].parse::<f64>().map_err(|e| {
                CliError::Usage(format!("{} row {}: column {}: {e}", path.display(), line + 1, FIELD_COLUMNS[i]))
            })
        };
        y.push(parse(0)?);
        values.push(Complex64::new(parse(1)?, parse(2)?));
    }
    SampledField::from_samples(&y, values).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
pub struct Conventions {
    pub beamwidth: &'static str,
    pub dft_sign: &'static str,
    pub reference: &'static str,
    pub flip_output: Option<bool>,
    pub angles: &'static str,
    pub frequencies: &'static str,
    pub lengths: &'static str,
}

impl Conventions {
    pub fn new(flip_output: Option<bool>) -> Self {
        Self {
            beamwidth: BEAMWIDTH_CONVENTION,
            dft_sign: DFT_CONVENTION,
            reference: REFERENCE_CONVENTION,
            flip_output,
            angles: "radians internally; degrees only where a column says so",
            frequencies: "ky/k0",
            lengths: "y/lambda0",
        }
    }
}

/// Sidecar `<file>.meta.json` describing a data file.
#[derive(Debug, Serialize)]
pub struct Sidecar<'a, P: Serialize> {
    pub file: String,
    pub command: &'a str,
    pub description: &'a str,
    pub columns: Vec<&'a str>,
    pub parameters: &'a P,
    pub conventions: Conventions,
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

/// Write every file or none: contents go to temporary siblings first and
/// are renamed into place only after all of them were written.
pub fn write_all(files: &[(PathBuf, Vec<u8>)]) -> Result<(), CliError> {
    for (path, _) in files {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    let tmp = |p: &Path| {
        let mut name = p.file_name().unwrap_or_default().to_os_string();
        name.push(".partial");
        p.with_file_name(name)
    };
    let mut staged = Vec::new();
    let result = (|| {
        for (path, bytes) in files {
            let t = tmp(path);
            fs::write(&t, bytes).map_err(|e| CliError::Io(format!("{}: {e}", t.display())))?;
            staged.push(t);
        }
        for (path, _) in files {
            fs::rename(tmp(path), path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    })();
    if result.is_err() {
        for t in &staged {
            let _ = fs::remove_file(t);
        }
    }
    result
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}
