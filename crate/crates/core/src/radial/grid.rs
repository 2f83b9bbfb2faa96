use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustdct::{Dct1, DctPlanner, Dst1};

use crate::error::{Error, Result};

/// Smallest admissible number of radial modes.
pub const MIN_MODES: usize = 8;

/// Paired physical/spectral node sets for a 3D radial field on `[0, R]`.
///
/// Physical nodes are `r_m = m dr` with `dr = R / (N + 1)` and spectral nodes
/// `rho_k = k drho` with `drho = pi / R`, for `m, k = 1..=N`. With this pairing
/// `r_m rho_k = m k pi / (N + 1)`, so the radial Fourier transform becomes a
/// type-I discrete sine transform, which is an exact involution up to scaling.
/// Neither node set contains zero.
pub struct RadialGrid {
    modes: usize,
    outer_radius: f64,
    dr: f64,
    drho: f64,
    r: Vec<f64>,
    rho: Vec<f64>,
    dst: Arc<dyn Dst1<f64>>,
    dct: Arc<dyn Dct1<f64>>,
}

impl fmt::Debug for RadialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGrid")
            .field("modes", &self.modes)
            .field("outer_radius", &self.outer_radius)
            .field("dr", &self.dr)
            .field("drho", &self.drho)
            .finish()
    }
}

impl PartialEq for RadialGrid {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.outer_radius == other.outer_radius
    }
}

/// Builds a shared grid with `modes` nodes on `[0, outer_radius]`.
pub fn make_grid(modes: usize, outer_radius: f64) -> Result<Arc<RadialGrid>> {
    RadialGrid::new(modes, outer_radius).map(Arc::new)
}

impl RadialGrid {
    pub fn new(modes: usize, outer_radius: f64) -> Result<Self> {
        if modes < MIN_MODES {
            return Err(Error::Config(format!(
                "N below minimum {MIN_MODES} (got {modes})"
            )));
        }
        if !(outer_radius.is_finite() && outer_radius > 0.0) {
            return Err(Error::Config(format!(
                "outer radius must be positive and finite (got {outer_radius})"
            )));
        }
        let dr = outer_radius / (modes as f64 + 1.0);
        let drho = PI / outer_radius;
        let r = (1..=modes).map(|m| m as f64 * dr).collect();
        let rho = (1..=modes).map(|k| k as f64 * drho).collect();
        let mut planner = DctPlanner::new();
        let dst = planner.plan_dst1(modes);
        // The cosine sums run over k = 1..=N; padding with zero end points
        // turns them into a DCT-I of length N + 2.
        let dct = planner.plan_dct1(modes + 2);
        Ok(Self {
            modes,
            outer_radius,
            dr,
            drho,
            r,
            rho,
            dst,
            dct,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// Physical spacing `dr = R / (N + 1)`.
    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// Spectral spacing `drho = pi / R`.
    pub fn drho(&self) -> f64 {
        self.drho
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn rho_max(&self) -> f64 {
        self.rho[self.modes - 1]
    }

    /// `out_k = sum_m x_m sin(m k pi / (N + 1))`, in place.
    pub fn sine_sum_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.modes);
        self.dst.process_dst1(x);
    }

    pub fn sine_sum(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        self.sine_sum_in_place(&mut out);
        out
    }

    /// `out_m = sum_k x_k cos(m k pi / (N + 1))` for `m = 1..=N`.
    pub fn cosine_sum(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.modes);
        let mut buf = Vec::with_capacity(self.modes + 2);
        buf.push(0.0);
        buf.extend_from_slice(x);
        buf.push(0.0);
        self.dct.process_dct1(&mut buf);
        buf.truncate(self.modes + 1);
        buf.remove(0);
        buf
    }

    /// Spectral samples `f^(rho_k)` of the physical samples `f(r_m)`:
    /// `rho_k f^(rho_k) = sqrt(2/pi) dr sum_m r_m f(r_m) sin(r_m rho_k)`.
    pub fn forward(&self, f: &[f64]) -> Vec<f64> {
        let scale = (2.0 / PI).sqrt() * self.dr;
        let mut g: Vec<f64> = f.iter().zip(&self.r).map(|(v, r)| v * r).collect();
        self.sine_sum_in_place(&mut g);
        g.iter_mut()
            .zip(&self.rho)
            .for_each(|(v, rho)| *v *= scale / rho);
        g
    }

    /// Inverse of [`RadialGrid::forward`]; the same formula with `r` and `rho`
    /// exchanged.
    pub fn inverse(&self, f_hat: &[f64]) -> Vec<f64> {
        let mut g = self.inverse_weighted(f_hat);
        g.iter_mut().zip(&self.r).for_each(|(v, r)| *v /= r);
        g
    }

    /// `g(r_m) = r_m f(r_m)` from spectral samples of `f`.
    fn inverse_weighted(&self, f_hat: &[f64]) -> Vec<f64> {
        let scale = (2.0 / PI).sqrt() * self.drho;
        let mut g: Vec<f64> = f_hat
            .iter()
            .zip(&self.rho)
            .map(|(v, rho)| v * rho)
            .collect();
        self.sine_sum_in_place(&mut g);
        g.iter_mut().for_each(|v| *v *= scale);
        g
    }

    /// Radial derivative `f'(r_m)` of a radial scalar given by its spectral
    /// samples. With `g = r f` expanded in sines, `g'` is the matching cosine
    /// sum and `f' = g'/r - g/r^2`.
    pub fn radial_derivative(&self, f_hat: &[f64]) -> Vec<f64> {
        let g = self.inverse_weighted(f_hat);
        let scale = (2.0 / PI).sqrt() * self.drho;
        let coeffs: Vec<f64> = f_hat
            .iter()
            .zip(&self.rho)
            .map(|(v, rho)| v * rho * rho)
            .collect();
        let gp = self.cosine_sum(&coeffs);
        gp.iter()
            .zip(&g)
            .zip(&self.r)
            .map(|((gp, g), r)| scale * gp / r - g / (r * r))
            .collect()
    }

    /// Sine coefficients `c_k` of an odd profile, normalised so that
    /// `G(r_m) = sqrt(2/pi) drho sum_k c_k sin(r_m rho_k)`.
    pub fn odd_coefficients(&self, profile: &[f64]) -> Vec<f64> {
        let scale = (2.0 / PI).sqrt() * self.dr;
        let mut c = profile.to_vec();
        self.sine_sum_in_place(&mut c);
        c.iter_mut().for_each(|v| *v *= scale);
        c
    }

    /// Derivative `G'(r_m)` of the odd profile with sine coefficients `coeffs`.
    pub fn odd_derivative_from_coefficients(&self, coeffs: &[f64]) -> Vec<f64> {
        let scale = (2.0 / PI).sqrt() * self.drho;
        let weighted: Vec<f64> = coeffs
            .iter()
            .zip(&self.rho)
            .map(|(c, rho)| c * rho)
            .collect();
        let mut out = self.cosine_sum(&weighted);
        out.iter_mut().for_each(|v| *v *= scale);
        out
    }
}
