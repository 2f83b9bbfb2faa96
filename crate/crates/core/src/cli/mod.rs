//! Command-line front end: configuration files, experiment dispatch and
//! deterministic CSV/JSON artifacts.

mod config;
mod output;

pub use config::{parse_config, RunConfig, KEYS};
pub use output::{diagnostics_csv, format_number, read_column, report_json};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::besov::{besov_norm, Band, BesovSpec};
use crate::decay::{
    fit_decay_exponent, lower_bound_from_rows, nonlinear_decay_from_rows, run_kernel_lower_probe,
    run_linear_decay, weighted_decay_from_rows, BoundednessReport, DecayReport, DecaySeries,
    FitResult, Verdict,
};
use crate::error::{Error, Result};
use crate::radial::{lp_norm, make_grid, spectral_l2_norm, RadialScalarField};
use crate::solver::{initial_data_gaussian, simulate, DiagnosticsRow};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "radial-cns", version, about = "Decay experiments for radial compressible Navier-Stokes flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `key = value` configuration file; missing keys keep reference values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Transform round trip and Parseval check on the configured grid.
    GridCheck,
    /// Exact linear evolution and fitted L^p decay exponents.
    LinearDecay,
    /// Full simulation; writes diagnostics.csv.
    Simulate,
    /// Full simulation with fitted exponents of the total and nonlinear part.
    NonlinearDecay,
    /// Boundedness of t^2 ||(a, v)||_inf over the late window.
    LowerBound,
    /// Boundedness of (t + 1)^{3/4} || |x| (a, v) ||_inf.
    WeightedDecay,
    /// Anisotropic low-frequency kernel probe over t_list.
    KernelProbe,
    /// Besov norm of the configured Gaussian density perturbation.
    BesovNorm,
    /// Decay-exponent fit of one column of a diagnostics CSV.
    Fit,
}

struct Outcome {
    summary: Vec<String>,
    artifacts: Vec<(&'static str, String)>,
    verdict: Option<Verdict>,
}

impl Outcome {
    fn new(summary: Vec<String>, verdict: Option<Verdict>) -> Self {
        Self { summary, artifacts: Vec::new(), verdict }
    }

    fn with(mut self, name: &'static str, contents: String) -> Self {
        self.artifacts.push((name, contents));
        self
    }
}

pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::SolverAbort { .. } | Error::NumericDomain(_) => EXIT_ABORT,
        _ => EXIT_CONFIG,
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 pass, 1 experiment failure, 2 configuration or usage error,
/// 3 solver abort or non-finite output.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let config = match load_config(cli.config.as_ref()) {
        Ok(c) => c,
        Err(errors) => {
            for e in &errors {
                let _ = writeln!(stderr, "configuration error: {e}");
            }
            return EXIT_CONFIG;
        }
    };
    let outcome = execute(cli.command, &config).and_then(|outcome| {
        if let Some(dir) = &cli.out {
            for (name, contents) in &outcome.artifacts {
                output::write_artifact(dir, name, contents)?;
            }
        }
        Ok(outcome)
    });
    match outcome {
        Ok(outcome) => {
            if !cli.quiet {
                for line in &outcome.summary {
                    let _ = writeln!(stdout, "{line}");
                }
            }
            match outcome.verdict {
                Some(Verdict::Fail) => EXIT_FAIL,
                _ => EXIT_PASS,
            }
        }
        Err(e) => {
            if !cli.quiet {
                let _ = writeln!(stdout, "{e}");
            }
            let _ = writeln!(stderr, "{e}");
            exit_code_for(&e)
        }
    }
}

fn load_config(path: Option<&PathBuf>) -> std::result::Result<RunConfig, Vec<String>> {
    match path {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| vec![format!("cannot read {}: {e}", path.display())])?;
            parse_config(&text)
        }
    }
}

fn execute(command: Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::GridCheck => grid_check(config),
        Command::LinearDecay => {
            let report = run_linear_decay(&config.solver, &config.p_list)?;
            Ok(decay_outcome(&report)?)
        }
        Command::Simulate => {
            let rows = simulate(&config.solver)?.rows;
            let last = rows.last().expect("initial row");
            let summary = vec![format!(
                "simulate: {} rows, t = {}: l2 = {:.6e}, linf = {:.6e}, nonlinear l2 = {:.6e}",
                rows.len(),
                last.t,
                last.l2_av,
                last.linf_av,
                last.nl_l2
            )];
            Ok(Outcome::new(summary, None).with("diagnostics.csv", diagnostics_csv(&rows)?))
        }
        Command::NonlinearDecay => {
            let rows = simulate(&config.solver)?.rows;
            let report = nonlinear_decay_from_rows(&rows, &config.p_list)?;
            Ok(decay_outcome(&report)?.with("diagnostics.csv", diagnostics_csv(&rows)?))
        }
        Command::LowerBound => {
            let rows = simulate(&config.solver)?.rows;
            let report = lower_bound_from_rows(&rows)?;
            boundedness_outcome(&report, &rows)
        }
        Command::WeightedDecay => {
            let rows = simulate(&config.solver)?.rows;
            let report = weighted_decay_from_rows(&rows)?;
            boundedness_outcome(&report, &rows)
        }
        Command::KernelProbe => {
            let report = run_kernel_lower_probe(&config.t_list)?;
            let mut summary: Vec<String> = report
                .samples
                .iter()
                .map(|s| {
                    format!(
                        "kernel-probe: t = {}: sup = {:.6e}, t^2 sup = {:.6e}, frame norm = {:.6e}, nodes = {}, refinement change = {:.1e}",
                        s.t, s.sup, s.scaled, s.frame_norm, s.nodes_per_axis, s.refinement_change
                    )
                })
                .collect();
            summary.push(format!(
                "kernel-probe: ratio {:.4} (threshold {}) {}",
                report.ratio, report.threshold, report.verdict
            ));
            Ok(Outcome::new(summary, Some(report.verdict)).with("report.json", report_json(&report)?))
        }
        Command::BesovNorm => besov(config),
        Command::Fit => fit(config),
    }
}

fn decay_outcome(report: &DecayReport) -> Result<Outcome> {
    let mut summary: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            format!(
                "{}: {} p = {}: fitted {:.4}, target {} +- {}, r2 {:.5} {}",
                report.experiment, c.quantity, c.p, c.fitted_exponent, c.target_exponent, c.tolerance, c.r2, c.verdict
            )
        })
        .collect();
    if report.empty {
        summary.push(format!("{}: data identically zero, nothing fitted", report.experiment));
    }
    summary.push(format!("{}: {}", report.experiment, report.verdict));
    Ok(Outcome::new(summary, Some(report.verdict)).with("report.json", report_json(report)?))
}

fn boundedness_outcome(report: &BoundednessReport, rows: &[DiagnosticsRow]) -> Result<Outcome> {
    let mut summary = vec![format!(
        "{}: window [{}, {}], min {:.6e}, max {:.6e}, ratio {:.4} (threshold {}) {}",
        report.experiment, report.window.0, report.window.1, report.min, report.max, report.ratio, report.threshold, report.verdict
    )];
    if report.empty {
        summary.push(format!("{}: data identically zero", report.experiment));
    }
    Ok(Outcome::new(summary, Some(report.verdict))
        .with("report.json", report_json(report)?)
        .with("diagnostics.csv", diagnostics_csv(rows)?))
}

#[derive(Serialize)]
struct GridCheckReport {
    n: usize,
    outer_radius: f64,
    roundtrip_error: f64,
    parseval_error: f64,
    verdict: Verdict,
}

fn grid_check(config: &RunConfig) -> Result<Outcome> {
    let grid = make_grid(config.solver.n, config.solver.outer_radius)?;
    let width = config.solver.width;
    let f = RadialScalarField::from_fn(grid, |r| (-(r / width).powi(2)).exp() * (1.0 + 0.5 * r.cos()))?;
    let spectral = f.to_spectral()?;
    let back = spectral.to_physical()?;
    let scale = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let roundtrip = back.values().iter().zip(f.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
    let physical = lp_norm(&f, 2.0)?;
    let parseval = (spectral_l2_norm(&spectral)? - physical).abs() / physical;
    let verdict = Verdict::from_bool(roundtrip <= 1e-12 && parseval <= 1e-10);
    let report = GridCheckReport {
        n: config.solver.n,
        outer_radius: config.solver.outer_radius,
        roundtrip_error: roundtrip,
        parseval_error: parseval,
        verdict,
    };
    let summary = vec![format!(
        "grid-check: N = {}, R = {}: round trip {:.2e} (<= 1e-12), Parseval {:.2e} (<= 1e-10) {}",
        report.n, report.outer_radius, roundtrip, parseval, verdict
    )];
    Ok(Outcome::new(summary, Some(verdict)).with("report.json", report_json(&report)?))
}

#[derive(Serialize)]
struct BesovReport {
    s: f64,
    p: String,
    q: String,
    band: String,
    value: f64,
}

fn exponent_label(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

fn besov(config: &RunConfig) -> Result<Outcome> {
    let grid = make_grid(config.solver.n, config.solver.outer_radius)?;
    let (a0, _) = initial_data_gaussian(config.solver.amplitude, config.solver.width, &grid)?;
    let spec = BesovSpec::new(config.besov_s, config.besov_p, config.besov_q, config.besov_band)?;
    let value = besov_norm(&a0, &spec)?;
    let band = match spec.band {
        Band::Full => "full".to_string(),
        Band::Low { j0 } => format!("low (j <= {j0})"),
        Band::High { j0 } => format!("high (j >= {j0})"),
    };
    let report = BesovReport {
        s: spec.s,
        p: exponent_label(spec.p),
        q: exponent_label(spec.q),
        band,
        value,
    };
    let summary = vec![format!(
        "besov-norm: s = {}, p = {}, q = {}, band {}: {}",
        report.s,
        report.p,
        report.q,
        report.band,
        format_number(value)
    )];
    Ok(Outcome::new(summary, None).with("report.json", report_json(&report)?))
}

#[derive(Serialize)]
struct FitReport {
    column: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_exponent: Option<f64>,
    fitted_exponent: f64,
    r2: f64,
    window: (f64, f64),
    fit: FitResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
}

fn fit(config: &RunConfig) -> Result<Outcome> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("fit needs 'input' (a diagnostics CSV)".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
    let (times, values) = read_column(&text, &config.column)?;
    let series = DecaySeries::new(times, values)?;
    let result = fit_decay_exponent(&series, config.fit_window)?;
    let verdict = config.target.map(|target| {
        Verdict::from_bool((result.slope - target).abs() <= config.tolerance && result.r2 >= config.min_r2)
    });
    let report = FitReport {
        column: config.column.clone(),
        target_exponent: config.target,
        fitted_exponent: result.slope,
        r2: result.r2,
        window: result.window,
        fit: result,
        verdict,
    };
    let mut line = format!(
        "fit: {} over [{}, {}]: exponent {:.4}, r2 {:.5}",
        report.column, result.window.0, result.window.1, result.slope, result.r2
    );
    if let (Some(target), Some(v)) = (config.target, verdict) {
        line.push_str(&format!(", target {target} +- {} {v}", config.tolerance));
    }
    Ok(Outcome::new(vec![line], verdict).with("report.json", report_json(&report)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_command_is_a_usage_error() {
        let (code, _, err) = run_capture(&["radial-cns", "frobnicate"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("Usage"), "{err}");
        let (code, _, _) = run_capture(&["radial-cns"]);
        assert_eq!(code, EXIT_CONFIG);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_capture(&["radial-cns", "--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("kernel-probe") && out.contains("grid-check"));
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code_for(&Error::Config("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code_for(&Error::Fit("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code_for(&Error::NumericDomain("x".into())), EXIT_ABORT);
        assert_eq!(
            exit_code_for(&Error::SolverAbort { time: 1.0, mode: None, reason: "x".into() }),
            EXIT_ABORT
        );
    }
}
