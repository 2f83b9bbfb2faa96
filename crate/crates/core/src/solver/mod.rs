//! Time integration of the radially symmetric `(a, v)` system with the full
//! nonlinear terms: exact per-mode propagation of the linear part and
//! second-order exponential time differencing of the Duhamel integral.

mod config;
mod rhs;

pub use config::{PressureLaw, SolverConfig};
pub use rhs::{nonlinear_rhs, reconstruct_velocity, NonlinearTerms};

use std::sync::Arc;

use serde::Serialize;

use crate::besov::{besov_norms_pair, BesovSpec};
use crate::error::{Error, Result};
use crate::radial::{
    lp_norm_pair, make_grid, weighted_sup_norm_pair, RadialGrid, RadialScalarField, Space,
};
use crate::semigroup::{apply_semigroup, etd_coefficients, EtdCoefficients};

/// `a0(r) = c exp(-(r/w)^2)`, `v0 = 0`, both in physical space.
pub fn initial_data_gaussian(
    amplitude: f64,
    width: f64,
    grid: &Arc<RadialGrid>,
) -> Result<(RadialScalarField, RadialScalarField)> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::Config(format!("amplitude must be non-negative (got {amplitude})")));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Config(format!("width must be positive (got {width})")));
    }
    let a = RadialScalarField::from_fn(grid.clone(), |r| amplitude * (-(r / width).powi(2)).exp())?;
    Ok((a, RadialScalarField::zeros(grid.clone(), Space::Physical)))
}

/// Spectral state of a run. The linear pair is the initial data carried by
/// the exact propagator alone.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub a_hat: RadialScalarField,
    pub v_hat: RadialScalarField,
    pub a_lin: RadialScalarField,
    pub v_lin: RadialScalarField,
}

impl SolverState {
    pub fn new(a0: &RadialScalarField, v0: &RadialScalarField) -> Result<Self> {
        if !a0.same_grid(v0) {
            return Err(Error::Usage("initial fields live on different grids".into()));
        }
        let a_hat = a0.clone().into_spectral();
        let v_hat = v0.clone().into_spectral();
        Ok(Self {
            t: 0.0,
            a_lin: a_hat.clone(),
            v_lin: v_hat.clone(),
            a_hat,
            v_hat,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.a_hat.grid()
    }

    /// Checks finiteness and `1 + a > floor`.
    pub fn check(&self, density_floor: f64) -> Result<()> {
        for field in [&self.a_hat, &self.v_hat] {
            if let Some(k) = field.values().iter().position(|v| !v.is_finite()) {
                return Err(Error::SolverAbort {
                    time: self.t,
                    mode: Some(k),
                    reason: "non-finite spectral coefficient".into(),
                });
            }
        }
        let a = self.a_hat.to_physical()?;
        rhs::check_density(a.values(), density_floor, self.t)
    }
}

/// `(a, v) - e^{tM}(a0, v0)` in physical space: the Duhamel integral of the
/// nonlinear forcing.
pub fn nonlinear_part(state: &SolverState) -> Result<(RadialScalarField, RadialScalarField)> {
    Ok((
        state.a_hat.sub(&state.a_lin)?.into_physical(),
        state.v_hat.sub(&state.v_lin)?.into_physical(),
    ))
}

/// ETD2 integrator with per-mode weights for a fixed step.
#[derive(Debug, Clone)]
pub struct Stepper {
    dt: f64,
    weights: Vec<EtdCoefficients>,
    terms: Option<NonlinearTerms>,
}

impl Stepper {
    /// `terms = None` integrates the linear system, where a step is the
    /// exact propagator.
    pub fn new(grid: &RadialGrid, dt: f64, terms: Option<NonlinearTerms>) -> Result<Self> {
        let weights = grid
            .rho()
            .iter()
            .map(|&rho| etd_coefficients(rho, dt))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dt, weights, terms })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn forcing(&self, grid: &Arc<RadialGrid>, a: &[f64], v: &[f64], t: f64) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
        match &self.terms {
            None => Ok(None),
            Some(terms) => terms.evaluate(grid, a, v, t).map(Some),
        }
    }

    /// Advances `state` by one step, ending at `t_next`. Passing the end time
    /// explicitly keeps `t = n dt` free of accumulated rounding.
    pub fn step_to(&self, state: &SolverState, t_next: f64) -> Result<SolverState> {
        let grid = state.grid().clone();
        let h = self.dt;
        let a = state.a_hat.values();
        let v = state.v_hat.values();
        let n = a.len();
        let mut a_new = Vec::with_capacity(n);
        let mut v_new = Vec::with_capacity(n);
        let first = self.forcing(&grid, a, v, state.t)?;
        for k in 0..n {
            let (mut x, mut y) = self.weights[k].propagator.apply(a[k], v[k]);
            if let Some((fa, fv)) = &first {
                let (p, q) = self.weights[k].phi1.apply(fa[k], fv[k]);
                x += h * p;
                y += h * q;
            }
            a_new.push(x);
            v_new.push(y);
        }
        if let Some((fa, fv)) = &first {
            let (ga, gv) = self
                .forcing(&grid, &a_new, &v_new, state.t + h)?
                .expect("forcing present");
            for k in 0..n {
                let (p, q) = self.weights[k].phi2.apply(ga[k] - fa[k], gv[k] - fv[k]);
                a_new[k] += h * p;
                v_new[k] += h * q;
            }
        }
        let mut a_lin = Vec::with_capacity(n);
        let mut v_lin = Vec::with_capacity(n);
        for (k, (x, y)) in state.a_lin.values().iter().zip(state.v_lin.values()).enumerate() {
            let (p, q) = self.weights[k].propagator.apply(*x, *y);
            a_lin.push(p);
            v_lin.push(q);
        }
        let next = SolverState {
            t: t_next,
            a_hat: RadialScalarField::from_parts(grid.clone(), a_new, Space::Spectral),
            v_hat: RadialScalarField::from_parts(grid.clone(), v_new, Space::Spectral),
            a_lin: RadialScalarField::from_parts(grid.clone(), a_lin, Space::Spectral),
            v_lin: RadialScalarField::from_parts(grid, v_lin, Space::Spectral),
        };
        let floor = self.terms.as_ref().map_or(0.0, |t| t.density_floor);
        next.check(floor)?;
        Ok(next)
    }

    pub fn step(&self, state: &SolverState) -> Result<SolverState> {
        self.step_to(state, state.t + self.dt)
    }
}

/// One ETD2 step of the full system.
pub fn step_etd2(state: &SolverState, dt: f64, terms: &NonlinearTerms) -> Result<SolverState> {
    Stepper::new(state.grid(), dt, Some(terms.clone()))?.step(state)
}

/// One output sample of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub l2_av: f64,
    pub linf_av: f64,
    pub besov0_21: f64,
    pub besov0_inf1: f64,
    pub nl_l2: f64,
    pub nl_besov_inf1: f64,
    pub weighted_sup: f64,
    pub energy: f64,
}

impl DiagnosticsRow {
    pub const CSV_COLUMNS: [&'static str; 8] = [
        "t",
        "l2_av",
        "linf_av",
        "besov0_21",
        "besov0_inf1",
        "nl_l2",
        "nl_besov_inf1",
        "weighted_sup",
    ];

    pub fn csv_values(&self) -> [f64; 8] {
        [
            self.t,
            self.l2_av,
            self.linf_av,
            self.besov0_21,
            self.besov0_inf1,
            self.nl_l2,
            self.nl_besov_inf1,
            self.weighted_sup,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.csv_values().iter().all(|v| v.is_finite()) && self.energy.is_finite()
    }
}

pub fn diagnostics(state: &SolverState) -> Result<DiagnosticsRow> {
    let a = state.a_hat.to_physical()?;
    let v = state.v_hat.to_physical()?;
    let (na, nv) = nonlinear_part(state)?;
    let b21 = BesovSpec::full(0.0, 2.0, 1.0)?;
    let binf1 = BesovSpec::full(0.0, f64::INFINITY, 1.0)?;
    let total = besov_norms_pair(&a, &v, &[b21, binf1])?;
    let l2_av = lp_norm_pair(&a, &v, 2.0)?;
    let row = DiagnosticsRow {
        t: state.t,
        l2_av,
        linf_av: lp_norm_pair(&a, &v, f64::INFINITY)?,
        besov0_21: total[0],
        besov0_inf1: total[1],
        nl_l2: lp_norm_pair(&na, &nv, 2.0)?,
        nl_besov_inf1: besov_norms_pair(&na, &nv, &[binf1])?[0],
        weighted_sup: weighted_sup_norm_pair(&a, &v)?,
        energy: l2_av * l2_av,
    };
    if !row.is_finite() {
        return Err(Error::SolverAbort {
            time: state.t,
            mode: None,
            reason: "non-finite diagnostic".into(),
        });
    }
    Ok(row)
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub rows: Vec<DiagnosticsRow>,
    pub final_state: SolverState,
}

/// Runs the configured experiment, recording a row at `t = 0` and every
/// `output_every` afterwards (plus the final time).
pub fn simulate(config: &SolverConfig) -> Result<Simulation> {
    simulate_with(config, |_| {})
}

/// [`simulate`] with a callback invoked on every recorded row.
pub fn simulate_with(config: &SolverConfig, mut on_row: impl FnMut(&DiagnosticsRow)) -> Result<Simulation> {
    config.validate()?;
    let grid = make_grid(config.n, config.outer_radius)?;
    let (a0, v0) = initial_data_gaussian(config.amplitude, config.width, &grid)?;
    let mut state = SolverState::new(&a0, &v0)?;
    let terms = config.nonlinear.then(|| config.terms());
    state.check(terms.as_ref().map_or(0.0, |t| t.density_floor))?;
    let mut rows = vec![diagnostics(&state)?];
    on_row(&rows[0]);
    let steps = config.step_count();
    if steps == 0 {
        return Ok(Simulation { rows, final_state: state });
    }
    let stepper = Stepper::new(&grid, config.dt, terms)?;
    let cadence = config.output_stride();
    for n in 1..=steps {
        state = stepper.step_to(&state, n as f64 * config.dt)?;
        if n % cadence == 0 || n == steps {
            let row = diagnostics(&state)?;
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(Simulation { rows, final_state: state })
}

/// Linear evolution sampled at arbitrary times with the exact propagator.
pub fn linear_rows(config: &SolverConfig, times: &[f64]) -> Result<Vec<DiagnosticsRow>> {
    config.validate()?;
    let grid = make_grid(config.n, config.outer_radius)?;
    let (a0, v0) = initial_data_gaussian(config.amplitude, config.width, &grid)?;
    let a0 = a0.into_spectral();
    let v0 = v0.into_spectral();
    times
        .iter()
        .map(|&t| {
            let (a, v) = apply_semigroup(&a0, &v0, t)?;
            diagnostics(&SolverState {
                t,
                a_lin: a.clone(),
                v_lin: v.clone(),
                a_hat: a,
                v_hat: v,
            })
        })
        .collect()
}
