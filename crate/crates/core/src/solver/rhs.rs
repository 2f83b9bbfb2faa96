use std::sync::Arc;

use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialScalarField, RadialVectorProfile, Space};

use super::config::PressureLaw;
use super::SolverState;

/// Parameters of the nonlinear forcing `(f, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearTerms {
    pub law: PressureLaw,
    pub dealias: f64,
    pub density_floor: f64,
}

pub(crate) fn check_density(a: &[f64], floor: f64, t: f64) -> Result<()> {
    let (lowest, highest) = a
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if a.is_empty() {
        return Ok(());
    }
    if 1.0 + lowest <= floor {
        return Err(Error::SolverAbort {
            time: t,
            mode: None,
            reason: format!("density floor breached: min(1 + a) = {} <= {floor}", 1.0 + lowest),
        });
    }
    if highest >= 1.0 {
        return Err(Error::SolverAbort {
            time: t,
            mode: None,
            reason: format!("perturbation left the small-data regime: max a = {highest}"),
        });
    }
    Ok(())
}

/// `U = -d/dr (|D|^{-1} v)`, the radial profile of the velocity `u = U x/r`.
pub fn reconstruct_velocity(v: &RadialScalarField) -> Result<RadialVectorProfile> {
    let v_hat = v.clone().into_spectral();
    let grid = v_hat.grid();
    let potential: Vec<f64> = v_hat.values().iter().zip(grid.rho()).map(|(v, rho)| v / rho).collect();
    let profile = grid.radial_derivative(&potential).into_iter().map(|x| -x).collect();
    RadialVectorProfile::new(grid.clone(), profile)
}

fn divergence_of(grid: &RadialGrid, profile: &[f64]) -> Vec<f64> {
    let coeffs = grid.odd_coefficients(profile);
    let derivative = grid.odd_derivative_from_coefficients(&coeffs);
    derivative
        .iter()
        .zip(profile)
        .zip(grid.r())
        .map(|((dp, p), r)| dp + 2.0 * p / r)
        .collect()
}

impl NonlinearTerms {
    fn kept_modes(&self, n: usize) -> usize {
        ((self.dealias * n as f64) + 1e-9).floor() as usize
    }

    fn truncate(&self, values: &mut [f64]) {
        let keep = self.kept_modes(values.len());
        values[keep..].iter_mut().for_each(|v| *v = 0.0);
    }

    /// Spectral `(f, h)` for spectral `(a, v)`:
    /// `f = -div(a u)` and `h = |D|^{-1} div G` with
    /// `G = -grad(U^2/2) - a/(1+a) grad(|D| v) - beta(a) grad a`.
    pub(crate) fn evaluate(
        &self,
        grid: &Arc<RadialGrid>,
        a_hat: &[f64],
        v_hat: &[f64],
        t: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let rho = grid.rho();
        let r = grid.r();
        let mut a_hat = a_hat.to_vec();
        let mut v_hat = v_hat.to_vec();
        self.truncate(&mut a_hat);
        self.truncate(&mut v_hat);

        let a = grid.inverse(&a_hat);
        check_density(&a, self.density_floor, t)?;
        let potential: Vec<f64> = v_hat.iter().zip(rho).map(|(v, k)| v / k).collect();
        let velocity: Vec<f64> = grid.radial_derivative(&potential).into_iter().map(|x| -x).collect();
        let w_hat: Vec<f64> = v_hat.iter().zip(rho).map(|(v, k)| v * k).collect();
        let w_r = grid.radial_derivative(&w_hat);
        let a_r = grid.radial_derivative(&a_hat);

        let flux: Vec<f64> = a.iter().zip(&velocity).map(|(a, u)| a * u).collect();
        let f: Vec<f64> = divergence_of(grid, &flux).into_iter().map(|x| -x).collect();
        let mut f_hat = grid.forward(&f);
        self.truncate(&mut f_hat);

        let kinetic: Vec<f64> = velocity.iter().map(|u| 0.5 * u * u).collect();
        let mut kinetic_hat = grid.forward(&kinetic);
        self.truncate(&mut kinetic_hat);
        let kinetic_r = grid.radial_derivative(&kinetic_hat);

        let force: Vec<f64> = (0..r.len())
            .map(|m| {
                let a = a[m];
                -kinetic_r[m] - a / (1.0 + a) * w_r[m] - self.law.beta(a) * a_r[m]
            })
            .collect();
        let mut h_hat = grid.forward(&divergence_of(grid, &force));
        h_hat.iter_mut().zip(rho).for_each(|(h, k)| *h /= k);
        self.truncate(&mut h_hat);
        Ok((f_hat, h_hat))
    }
}

/// Spectral nonlinear forcing `(f^, h^)` at the given state.
pub fn nonlinear_rhs(
    state: &SolverState,
    terms: &NonlinearTerms,
) -> Result<(RadialScalarField, RadialScalarField)> {
    let grid = state.grid().clone();
    let (f, h) = terms.evaluate(&grid, state.a_hat.values(), state.v_hat.values(), state.t)?;
    Ok((
        RadialScalarField::from_parts(grid.clone(), f, Space::Spectral),
        RadialScalarField::from_parts(grid, h, Space::Spectral),
    ))
}
