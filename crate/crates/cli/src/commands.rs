use std::path::PathBuf;

use brewster_core::analysis::{run_experiment, sweep_bandwidth, ExperimentSetup, Signal};
use brewster_core::field::GridSpec;
use brewster_core::greens::{exact_brewster_green, symmetric_grid, taylor_green};
use brewster_core::optics::OpticalConfig;

use crate::config::{ExperimentConfig, GreenCompareConfig, SignalKind, SweepConfig};
use crate::output::{self, fmt, Conventions, Sidecar};
use crate::CliError;

#[allow(clippy::too_many_arguments)]
fn with_sidecar<P: serde::Serialize>(
    files: &mut Vec<(PathBuf, Vec<u8>)>,
    path: PathBuf,
    bytes: Vec<u8>,
    command: &str,
    description: &str,
    columns: &[&str],
    params: &P,
    flip_output: Option<bool>,
) -> Result<(), CliError> {
    let sidecar = Sidecar {
        file: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
        command,
        description,
        columns: columns.to_vec(),
        parameters: params,
        conventions: Conventions::new(flip_output),
    };
    files.push((output::sidecar_path(&path), output::json_bytes(&sidecar)?));
    files.push((path, bytes));
    Ok(())
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let signal = match cfg.signal {
        SignalKind::Gaussian => Signal::Gaussian { beamwidth: cfg.beamwidth },
        SignalKind::Sinc => Signal::Sinc { bandwidth: cfg.bandwidth },
        SignalKind::File => {
            let path = cfg.input.as_ref().expect("validated");
            Signal::Samples {
                field: output::read_field_csv(path)?,
                description: format!("file {}", path.display()),
            }
        }
    };
    let grid = match &signal {
        Signal::Samples { field, .. } => field.grid(),
        _ => GridSpec::new(cfg.points, cfg.span).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    let run = run_experiment(&ExperimentSetup {
        signal,
        n2: cfg.n2,
        lambda0: cfg.wavelength,
        band: cfg.band,
        grid,
        flip_output: cfg.flip_output,
    })?;

    let dir = &cfg.output_dir;
    let flip = Some(cfg.flip_output);
    let mut files = Vec::new();
    for (name, field, what) in [
        ("input.csv", &run.input, "input profile f(y)"),
        ("output.csv", &run.output, "field reflected at the Brewster angle"),
        ("reference.csv", &run.reference, "ideal scaled derivative i(n/2 - 1/(2n^3))/k0 f'(y)"),
    ] {
        with_sidecar(
            &mut files,
            dir.join(name),
            output::field_csv(field)?,
            "simulate",
            what,
            &output::FIELD_COLUMNS,
            cfg,
            flip,
        )?;
    }
    files.push((dir.join("report.json"), output::json_bytes(&run.report)?));
    output::write_all(&files)?;

    let r = &run.report;
    println!("signal        {}", r.signal);
    println!("n2            {}", r.n2);
    println!("band W        {} k0", r.w);
    println!("e_G           {:.6}", r.e_g);
    println!("e_f           {:.6}", r.e_f);
    for m in &r.measured_bandwidth {
        println!("bandwidth     {:.6} k0 at cutoff {}", m.w, m.cutoff);
    }
    let verdict = if r.e_f <= cfg.tolerance { "within" } else { "exceeds" };
    println!("e_f {verdict} tolerance {}", cfg.tolerance);
    println!("wrote {}", dir.display());
    Ok(())
}

pub fn green_compare(cfg: &GreenCompareConfig) -> Result<(), CliError> {
    let optics = OpticalConfig::at_brewster(cfg.n2)?;
    let grid = symmetric_grid(cfg.band, cfg.points)?;
    let exact = exact_brewster_green(&optics, &grid)?;
    let taylor = taylor_green(&optics, &grid)?;
    let columns = ["ky_over_k0", "exact_re", "exact_im", "taylor_re", "taylor_im"];
    let rows = grid
        .iter()
        .zip(exact.samples().iter().zip(taylor.samples()))
        .map(|(k, (e, t))| vec![fmt(*k), fmt(e.re), fmt(e.im), fmt(t.re), fmt(t.im)]);
    let mut files = Vec::new();
    with_sidecar(
        &mut files,
        cfg.output.clone(),
        output::csv_bytes(&columns, rows)?,
        "green-compare",
        "exact TM reflection at the Brewster angle vs its first-order Taylor model",
        &columns,
        cfg,
        None,
    )?;
    output::write_all(&files)?;
    println!(
        "theta_B = {:.4} deg; wrote {} samples to {}",
        optics.theta.to_degrees(),
        cfg.points,
        cfg.output.display()
    );
    Ok(())
}

pub fn sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    let rows = sweep_bandwidth(cfg.n_min, cfg.n_max, cfg.n_step, cfg.tol)?;
    let columns = ["n", "W_over_k0"];
    let mut failed = 0;
    for row in &rows {
        if let Some(e) = &row.error {
            failed += 1;
            eprintln!("n = {}: {e}", row.n);
        }
    }
    let csv_rows = rows
        .iter()
        .map(|r| vec![fmt(r.n), r.w.map_or_else(|| "NaN".to_string(), fmt)]);
    let mut files = Vec::new();
    with_sidecar(
        &mut files,
        cfg.output.clone(),
        output::csv_bytes(&columns, csv_rows)?,
        "sweep-bandwidth",
        "largest band W with e_G(W) <= tol for each index n; NaN marks a failed search",
        &columns,
        cfg,
        None,
    )?;
    output::write_all(&files)?;
    println!("wrote {} rows to {}", rows.len(), cfg.output.display());
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} of {} rows failed", rows.len())));
    }
    Ok(())
}
