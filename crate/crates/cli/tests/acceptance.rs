//! Acceptance suite. Every criterion runs at its stated tolerance and prints
//! one PASS/FAIL line; the test fails if any criterion does.
//!
//! Run with `cargo test -p brewster-cli --test acceptance -- --nocapture`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use brewster_core::analysis::{max_bandwidth, max_bandwidth_search, run_experiment, sweep_bandwidth, ExperimentSetup, Signal};
use brewster_core::field::{
    apply_green, derivative_oracle, to_field, to_spectrum, DerivativeMethod, GridSpec, SampledField,
};
use brewster_core::greens::{
    cascade, exact_brewster_green, grazing_band_limit, symmetric_grid, taylor_green,
    transform_green_to_rotated,
};
use brewster_core::optics::{fresnel_reflection, map_ky_to_rotated, map_rotated_to_ky, OpticalConfig, Polarization};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const INDICES: [f64; 3] = [1.5, 2.1, 3.0];

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration) -> Verdict {
    ensure(elapsed < limit, format!("runtime {:.3} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

fn brewster_zero() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in INDICES {
        let cfg = OpticalConfig::at_brewster(n).map_err(|e| e.to_string())?;
        let r = fresnel_reflection(&cfg, Polarization::TM, n.atan()).map_err(|e| e.to_string())?;
        worst = worst.max(r.norm());
    }
    ensure(worst < 1e-12, format!("max |r_TM(theta_B)| = {worst:.3e} (< 1e-12)"))
}

fn slope_check() -> Verdict {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for n in INDICES {
        let cfg = OpticalConfig::at_brewster(n).map_err(|e| e.to_string())?;
        let k0 = cfg.k0();
        let g = exact_brewster_green(&cfg, &[-h, 0.0, h]).map_err(|e| e.to_string())?;
        let s = g.samples();
        let fd = (s[2].re - s[0].re) / (2.0 * h * k0);
        let expected = -(n / 2.0 - 1.0 / (2.0 * n.powi(3))) / k0;
        worst = worst.max(((fd - expected) / expected).abs());
    }
    ensure(worst < 1e-6, format!("max relative slope error {worst:.3e} (< 1e-6)"))
}

fn setup(signal: Signal, band: f64) -> ExperimentSetup {
    ExperimentSetup {
        signal,
        n2: 2.1,
        lambda0: 1.0,
        band,
        grid: GridSpec::default(),
        flip_output: false,
    }
}

fn gaussian_experiment() -> Verdict {
    let start = Instant::now();
    let run = run_experiment(&setup(Signal::Gaussian { beamwidth: 32.0 }, 0.1)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r = &run.report;
    let bands: Vec<String> = r.measured_bandwidth.iter().map(|m| format!("{:.4}@{}", m.w, m.cutoff)).collect();
    let detail = format!("e_f = {:.4} in [0.02, 0.08]; measured bandwidth {} k0", r.e_f, bands.join(" "));
    let time = within(elapsed, Duration::from_secs(1));
    match (ensure((0.02..=0.08).contains(&r.e_f), detail), time) {
        (Ok(d), Ok(t)) => Ok(format!("{d}; {t}")),
        (a, b) => Err(format!("{}; {}", a.unwrap_or_else(|e| e), b.unwrap_or_else(|e| e))),
    }
}

fn sinc_experiment() -> Verdict {
    let start = Instant::now();
    let run = run_experiment(&setup(Signal::Sinc { bandwidth: 0.09 }, 0.09)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r = &run.report;
    let ok = (r.e_f - 0.10).abs() <= 0.03 && (r.e_g - r.e_f).abs() <= 0.01;
    let detail = format!("e_f = {:.4} (0.10 +/- 0.03), |e_G - e_f| = {:.4} (<= 0.01)", r.e_f, (r.e_g - r.e_f).abs());
    match (ensure(ok, detail), within(elapsed, Duration::from_secs(1))) {
        (Ok(d), Ok(t)) => Ok(format!("{d}; {t}")),
        (a, b) => Err(format!("{}; {}", a.unwrap_or_else(|e| e), b.unwrap_or_else(|e| e))),
    }
}

fn bandwidth_anchor() -> Verdict {
    let start = Instant::now();
    let w = max_bandwidth(2.1, 0.10).map_err(|e| e.to_string())?;
    // The search rejects any non-monotone probe sequence, so a row without
    // an error had monotone e_G(W) at every probe.
    let rows = sweep_bandwidth(1.5, 3.5, 0.1, 0.10).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let failed: Vec<String> = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("n={}: {e}", r.n)))
        .collect();
    let probes = max_bandwidth_search(2.1, 0.10).map_err(|e| e.to_string())?.probes.len();
    let ok = w >= 0.09 && failed.is_empty() && rows.len() == 21;
    let detail = format!(
        "max_bandwidth(2.1, 0.10) = {w:.5} k0 (>= 0.09); {} sweep rows, {} failed, {probes} probes at n=2.1{}",
        rows.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(": {}", failed.join("; ")) }
    );
    match (ensure(ok, detail), within(elapsed, Duration::from_secs(10))) {
        (Ok(d), Ok(t)) => Ok(format!("{d}; {t}")),
        (a, b) => Err(format!("{}; {}", a.unwrap_or_else(|e| e), b.unwrap_or_else(|e| e))),
    }
}

fn beam(params: &[(f64, f64, f64, f64)]) -> SampledField {
    SampledField::from_fn(GridSpec::new(512, 128.0).unwrap(), |y| {
        params
            .iter()
            .map(|&(amp, center, width, chirp)| {
                let u = (y - center) / width;
                Complex64::from_polar(amp * (-u * u).exp(), chirp * u)
            })
            .sum()
    })
    .unwrap()
}

fn beam_params() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((0.1f64..2.0, -10.0f64..10.0, 4.0f64..10.0, -2.0f64..2.0), 1..4)
}

fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases: 64, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suite() -> Verdict {
    property("FFT round trip 1e-12 / Parseval 1e-10", beam_params(), |p| {
        let f = beam(&p);
        let s = to_spectrum(&f);
        let back = to_field(&s);
        prop_assert!(max_diff(back.values(), f.values()) <= 1e-12 * max_abs(f.values()).max(1.0));
        prop_assert!((s.energy() - f.energy()).abs() <= 1e-10 * f.energy());
        Ok(())
    })?;

    let cfg = OpticalConfig::at_brewster(2.1).unwrap();
    let exact = exact_brewster_green(&cfg, &symmetric_grid(0.4, 4001).unwrap()).unwrap();
    property(
        "apply_green linearity 1e-12",
        (beam_params(), beam_params(), (-2.0f64..2.0, -2.0f64..2.0), (-2.0f64..2.0, -2.0f64..2.0), any::<bool>()),
        |(p1, p2, a, b, flip)| {
            let (alpha, beta) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
            let (f1, f2) = (beam(&p1), beam(&p2));
            let combo = SampledField::new(
                f1.values().iter().zip(f2.values()).map(|(x, y)| alpha * x + beta * y).collect(),
                f1.spacing(),
            )
            .unwrap();
            let lhs = apply_green(&combo, &exact, flip);
            let (h1, h2) = (apply_green(&f1, &exact, flip), apply_green(&f2, &exact, flip));
            let rhs: Vec<Complex64> = h1.values().iter().zip(h2.values()).map(|(x, y)| alpha * x + beta * y).collect();
            prop_assert!(max_diff(lhs.values(), &rhs) <= 1e-12);
            Ok(())
        },
    )?;

    property(
        "parity 1e-10",
        (prop::collection::vec((0.1f64..2.0, 4.0f64..10.0), 1..4), 1.5f64..3.5),
        |(amps, n2)| {
            let params: Vec<_> = amps.iter().map(|&(a, w)| (a, 0.0, w, 0.0)).collect();
            let f = beam(&params);
            let cfg = OpticalConfig::at_brewster(n2).unwrap();
            let w = 0.9 * grazing_band_limit(&cfg);
            let odd = taylor_green(&cfg, &symmetric_grid(w, 4001).unwrap()).unwrap();
            let h = apply_green(&f, &odd, false);
            let n = h.len();
            for j in 0..n {
                prop_assert!((h.values()[j] + h.values()[(n - j) % n]).norm() <= 1e-10);
            }
            Ok(())
        },
    )?;

    property("rotated-frame map round trip 1e-12", (1.5f64..3.5, -1.0f64..1.0), |(n2, t)| {
        let cfg = OpticalConfig::at_brewster(n2).unwrap();
        let k0 = cfg.k0();
        let ky = t * grazing_band_limit(&cfg) * k0;
        let back = map_rotated_to_ky(&cfg, map_ky_to_rotated(&cfg, ky).unwrap()).unwrap();
        prop_assert!((back - ky).abs() <= 1e-12 * k0);
        Ok(())
    })?;

    property("G' evenness exact", (1.5f64..3.5, 0.05f64..0.95), |(n2, frac)| {
        let cfg = OpticalConfig::at_brewster(n2).unwrap();
        let w = frac * grazing_band_limit(&cfg);
        let g = exact_brewster_green(&cfg, &symmetric_grid(w, 301).unwrap()).unwrap();
        let rotated = transform_green_to_rotated(&g, &cfg).unwrap();
        let s = rotated.samples();
        for i in 0..s.len() {
            prop_assert_eq!(s[i], s[s.len() - 1 - i]);
        }
        Ok(())
    })?;

    property("cascade(taylor, taylor) even quadratic", (1.5f64..3.5, 0.01f64..0.25), |(n2, w)| {
        let cfg = OpticalConfig::at_brewster(n2).unwrap();
        let grid = symmetric_grid(w, 201).unwrap();
        let t = taylor_green(&cfg, &grid).unwrap();
        let sq = cascade(&t, &t).unwrap();
        let c = n2 / 2.0 - 1.0 / (2.0 * n2.powi(3));
        let s = sq.samples();
        for (i, k) in grid.iter().enumerate() {
            prop_assert_eq!(s[i], s[s.len() - 1 - i]);
            let expected = c * c * k * k;
            prop_assert!((s[i].re - expected).abs() <= 1e-15 * c * c * w * w);
            prop_assert!(s[i].im.abs() <= 1e-15 * c * c * w * w);
        }
        Ok(())
    })?;

    // Central differences carry an O(Δy²) error against the spectral
    // derivative: halving Δy must cut their discrepancy by ~4.
    let discrepancy = |points: usize| {
        let grid = GridSpec::new(points, 128.0).unwrap();
        let f = SampledField::from_fn(grid, |y| Complex64::new((-(y / 3.0).powi(2)).exp(), 0.0)).unwrap();
        max_diff(
            derivative_oracle(&f, DerivativeMethod::Spectral).values(),
            derivative_oracle(&f, DerivativeMethod::CentralDifference).values(),
        )
    };
    let ratio = discrepancy(256) / discrepancy(512);
    if !(3.8..4.2).contains(&ratio) {
        return Err(format!("derivative oracles: refinement ratio {ratio:.3}, expected ~4"));
    }
    Ok(format!(
        "6 properties x 64 deterministic cases hold; derivative oracle refinement ratio {ratio:.3}"
    ))
}

fn run_cli(args: &[&str], cwd: &Path) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_brewster"))
        .args(args)
        .current_dir(cwd)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.push((path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Verdict {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let cfg = |name: &str| configs.join(name).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["simulate".into(), "--config".into(), cfg("gaussian.toml")],
        vec!["simulate".into(), "--config".into(), cfg("sinc.toml"), "--flip-output".into()],
        vec!["green-compare".into(), "--config".into(), cfg("green_compare.toml")],
        vec!["sweep-bandwidth".into(), "--config".into(), cfg("sweep.toml")],
    ];
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        for args in &runs {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            run_cli(&args, tmp.path())?;
        }
        snapshots.push(snapshot(tmp.path()));
    }
    let (a, b) = (&snapshots[0], &snapshots[1]);
    ensure(
        !a.is_empty() && a == b,
        format!("{} output files across {} commands, identical bytes over two runs: {}", a.len(), runs.len(), a == b),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("brewster zero", brewster_zero),
        ("taylor slope", slope_check),
        ("gaussian experiment", gaussian_experiment),
        ("sinc experiment", sinc_experiment),
        ("bandwidth anchor and sweep", bandwidth_anchor),
        ("property suite", property_suite),
        ("cli determinism", determinism),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name:<28} {detail}"),
            Err(detail) => {
                println!("FAIL  {name:<28} {detail}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
