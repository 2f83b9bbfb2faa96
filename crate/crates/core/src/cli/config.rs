use std::collections::BTreeSet;

use crate::besov::Band;
use crate::radial::MIN_MODES;
use crate::solver::SolverConfig;

/// Typed run parameters. Every key is optional; missing keys keep the
/// reference values.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub solver: SolverConfig,
    /// Lebesgue exponents for the decay experiments.
    pub p_list: Vec<f64>,
    /// Times for the kernel probe.
    pub t_list: Vec<f64>,
    pub besov_s: f64,
    pub besov_p: f64,
    pub besov_q: f64,
    pub besov_band: Band,
    /// Diagnostics CSV read by the `fit` command.
    pub input: Option<String>,
    pub column: String,
    pub fit_window: (f64, f64),
    pub target: Option<f64>,
    pub tolerance: f64,
    pub min_r2: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            p_list: vec![2.0, f64::INFINITY],
            t_list: vec![16.0, 64.0, 256.0],
            besov_s: 0.0,
            besov_p: 2.0,
            besov_q: 1.0,
            besov_band: Band::Full,
            input: None,
            column: "l2_av".into(),
            fit_window: (10.0, 200.0),
            target: None,
            tolerance: 0.05,
            min_r2: 0.0,
        }
    }
}

pub const KEYS: [&str; 25] = [
    "N", "R", "dt", "T", "output_every", "gamma", "c", "w", "dealias", "density_floor",
    "nonlinear", "p_list", "t_list", "besov_s", "besov_p", "besov_q", "besov_band", "j0",
    "input", "column", "fit_lo", "fit_hi", "target", "tolerance", "min_r2",
];

fn parse_number(raw: &str) -> Result<f64, String> {
    let lowered = raw.to_ascii_lowercase();
    if lowered == "inf" || lowered == "infinity" {
        return Ok(f64::INFINITY);
    }
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("cannot parse '{raw}' as a number")),
    }
}

fn parse_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(|s| parse_number(s.trim())).collect()
}

fn require(ok: bool, message: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message.into())
    }
}

/// Parses `key = value` lines (`#` starts a comment). Every problem is
/// collected, each tagged with its line number; checks that involve several
/// keys run once the lines parse.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<String>> {
    let mut config = RunConfig::default();
    let mut errors = Vec::new();
    let mut seen = BTreeSet::new();
    let mut j0 = None;
    let mut band_name = None;
    let mut fit_lo = None;
    let mut fit_hi = None;
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("expected 'key = value' (line {line_no})"));
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            errors.push(format!("unknown key '{key}' (line {line_no})"));
            continue;
        }
        if !seen.insert(key.to_string()) {
            errors.push(format!("duplicate key '{key}' (line {line_no})"));
            continue;
        }
        let result: Result<(), String> = (|| {
            let number = || parse_number(value).map_err(|e| format!("{e} for {key}"));
            match key {
                "N" => {
                    let v = number()?;
                    require(v.fract() == 0.0 && v >= 0.0, format!("N must be a whole number (got {value})"))?;
                    require(v >= MIN_MODES as f64, format!("N below minimum {MIN_MODES}"))?;
                    config.solver.n = v as usize;
                }
                "R" => {
                    let v = number()?;
                    require(v > 0.0 && v.is_finite(), format!("R must be positive (got {value})"))?;
                    config.solver.outer_radius = v;
                }
                "dt" => {
                    let v = number()?;
                    require(v > 0.0 && v.is_finite(), format!("dt must be positive (got {value})"))?;
                    config.solver.dt = v;
                }
                "T" => {
                    let v = number()?;
                    require(v >= 0.0 && v.is_finite(), format!("T must be non-negative (got {value})"))?;
                    config.solver.t_final = v;
                }
                "output_every" => {
                    let v = number()?;
                    require(v > 0.0 && v.is_finite(), format!("output_every must be positive (got {value})"))?;
                    config.solver.output_every = v;
                }
                "gamma" => {
                    let v = number()?;
                    require(v > 1.0 && v.is_finite(), format!("gamma must exceed 1 (got {value})"))?;
                    config.solver.gamma = v;
                }
                "c" => {
                    let v = number()?;
                    require(v >= 0.0 && v.is_finite(), format!("c must be non-negative (got {value})"))?;
                    config.solver.amplitude = v;
                }
                "w" => {
                    let v = number()?;
                    require(v > 0.0 && v.is_finite(), format!("w must be positive (got {value})"))?;
                    config.solver.width = v;
                }
                "dealias" => {
                    let v = number()?;
                    require(v > 0.0 && v <= 1.0, format!("dealias must lie in (0, 1] (got {value})"))?;
                    config.solver.dealias = v;
                }
                "density_floor" => {
                    let v = number()?;
                    require((0.0..1.0).contains(&v), format!("density_floor must lie in [0, 1) (got {value})"))?;
                    config.solver.density_floor = v;
                }
                "nonlinear" => {
                    config.solver.nonlinear = match value {
                        "true" | "yes" | "1" => true,
                        "false" | "no" | "0" => false,
                        _ => return Err(format!("cannot parse '{value}' as a boolean for nonlinear")),
                    };
                }
                "p_list" => {
                    let ps = parse_list(value).map_err(|e| format!("{e} for p_list"))?;
                    require(!ps.is_empty() && ps.iter().all(|&p| p >= 2.0), "p_list entries must lie in [2, inf]")?;
                    config.p_list = ps;
                }
                "t_list" => {
                    let ts = parse_list(value).map_err(|e| format!("{e} for t_list"))?;
                    require(
                        !ts.is_empty() && ts.iter().all(|&t| t >= 4.0 && t.is_finite()),
                        "t_list entries must be finite and at least 4",
                    )?;
                    config.t_list = ts;
                }
                "besov_s" => {
                    let v = number()?;
                    require(v.is_finite(), "besov_s must be finite")?;
                    config.besov_s = v;
                }
                "besov_p" => {
                    let v = number()?;
                    require(v >= 1.0, format!("besov_p must lie in [1, inf] (got {value})"))?;
                    config.besov_p = v;
                }
                "besov_q" => {
                    let v = number()?;
                    require(v >= 1.0, format!("besov_q must lie in [1, inf] (got {value})"))?;
                    config.besov_q = v;
                }
                "besov_band" => {
                    require(
                        matches!(value, "full" | "low" | "high"),
                        format!("besov_band must be full, low or high (got '{value}')"),
                    )?;
                    band_name = Some(value.to_string());
                }
                "j0" => {
                    let v = number()?;
                    require(v.fract() == 0.0 && v.abs() < 64.0, format!("j0 must be a small integer (got {value})"))?;
                    j0 = Some(v as i32);
                }
                "input" => config.input = Some(value.to_string()),
                "column" => {
                    require(
                        crate::solver::DiagnosticsRow::CSV_COLUMNS[1..].contains(&value),
                        format!("unknown column '{value}'"),
                    )?;
                    config.column = value.to_string();
                }
                "fit_lo" => {
                    let v = number()?;
                    require(v > 0.0 && v.is_finite(), format!("fit_lo must be positive (got {value})"))?;
                    fit_lo = Some(v);
                }
                "fit_hi" => {
                    let v = number()?;
                    require(v > 0.0, format!("fit_hi must be positive (got {value})"))?;
                    fit_hi = Some(v);
                }
                "target" => {
                    let v = number()?;
                    require(v.is_finite(), "target must be finite")?;
                    config.target = Some(v);
                }
                "tolerance" => {
                    let v = number()?;
                    require(v >= 0.0 && v.is_finite(), format!("tolerance must be non-negative (got {value})"))?;
                    config.tolerance = v;
                }
                "min_r2" => {
                    let v = number()?;
                    require((0.0..=1.0).contains(&v), format!("min_r2 must lie in [0, 1] (got {value})"))?;
                    config.min_r2 = v;
                }
                _ => unreachable!("key list"),
            }
            Ok(())
        })();
        if let Err(message) = result {
            errors.push(format!("{message} (line {line_no})"));
        }
    }
    config.besov_band = match (band_name.as_deref(), j0) {
        (None | Some("full"), _) => Band::Full,
        (Some("low"), Some(j0)) => Band::Low { j0 },
        (Some("high"), Some(j0)) => Band::High { j0 },
        (Some(_), _) => {
            errors.push("besov_band low or high needs j0".into());
            Band::Full
        }
    };
    let (lo, hi) = (fit_lo.unwrap_or(config.fit_window.0), fit_hi.unwrap_or(config.fit_window.1));
    if lo >= hi {
        errors.push(format!("fit window [{lo}, {hi}] is empty"));
    }
    config.fit_window = (lo, hi);
    if errors.is_empty() {
        errors.extend(config.solver.problems());
    }
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_text_parses() {
        let config = parse_config("N = 16384\nR = 500\ndt = 0.05\nT = 200\ngamma = 1.4\nc = 0.01").unwrap();
        assert_eq!(config.solver, SolverConfig::default());
    }

    #[test]
    fn range_error_carries_line() {
        assert_eq!(parse_config("N = 3"), Err(vec!["N below minimum 8 (line 1)".to_string()]));
    }

    #[test]
    fn parse_error_carries_line() {
        let errors = parse_config("# comment\ngamma = banana").unwrap_err();
        assert_eq!(errors, vec!["cannot parse 'banana' as a number for gamma (line 2)".to_string()]);
    }

    #[test]
    fn all_errors_are_collected() {
        let text = "N = 3\nfoo = 1\ngamma = banana\nc = -1\nnot a pair\nN = 10";
        let errors = parse_config(text).unwrap_err();
        assert_eq!(errors.len(), 6, "{errors:?}");
        assert!(errors[1].contains("unknown key 'foo' (line 2)"));
        assert!(errors[4].contains("line 5"));
        assert!(errors[5].contains("duplicate key 'N' (line 6)"));
    }

    #[test]
    fn lists_bands_and_cross_checks() {
        let config = parse_config("p_list = 2, 4, inf\nt_list = 16,64\nbesov_band = high # comment\nj0 = -1\nnonlinear = false").unwrap();
        assert_eq!(config.p_list, vec![2.0, 4.0, f64::INFINITY]);
        assert_eq!(config.t_list, vec![16.0, 64.0]);
        assert_eq!(config.besov_band, Band::High { j0: -1 });
        assert!(!config.solver.nonlinear);
        assert!(parse_config("besov_band = low").is_err());
        let errors = parse_config("R = 100").unwrap_err();
        assert!(errors[0].contains("acoustic front"), "{errors:?}");
        assert!(parse_config("p_list = 1, 2").is_err());
        assert!(parse_config("fit_lo = 50\nfit_hi = 20").is_err());
    }
}
