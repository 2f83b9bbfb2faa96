use crate::error::{Error, Result};
use crate::radial::MIN_MODES;

use super::rhs::NonlinearTerms;

/// Barotropic law `P(rho) = rho^gamma / gamma`, normalised so `P'(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    gamma: f64,
}

impl PressureLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must exceed 1 (got {gamma})")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn pressure(&self, density: f64) -> f64 {
        density.powf(self.gamma) / self.gamma
    }

    pub fn pressure_derivative(&self, density: f64) -> f64 {
        density.powf(self.gamma - 1.0)
    }

    /// `P'(1 + a)/(1 + a) - P'(1) = (1 + a)^{gamma - 2} - 1`.
    pub fn beta(&self, a: f64) -> f64 {
        if self.gamma == 2.0 {
            0.0
        } else {
            (1.0 + a).powf(self.gamma - 2.0) - 1.0
        }
    }
}

impl Default for PressureLaw {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub outer_radius: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Time between diagnostics rows; a multiple of `dt`.
    pub output_every: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub width: f64,
    /// Fraction of spectral modes kept around products.
    pub dealias: f64,
    /// Abort once `min(1 + a)` falls to this value.
    pub density_floor: f64,
    pub nonlinear: bool,
}

impl Default for SolverConfig {
    /// The reference run.
    fn default() -> Self {
        Self {
            n: 16384,
            outer_radius: 500.0,
            dt: 0.05,
            t_final: 200.0,
            output_every: 1.0,
            gamma: 1.4,
            amplitude: 0.01,
            width: 1.0,
            dealias: 2.0 / 3.0,
            density_floor: 0.5,
            nonlinear: true,
        }
    }
}

fn is_multiple(x: f64, step: f64) -> bool {
    let ratio = x / step;
    (ratio - ratio.round()).abs() <= 1e-9 * ratio.abs().max(1.0)
}

impl SolverConfig {
    /// Every violated precondition, in a fixed order.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n < MIN_MODES {
            out.push(format!("N below minimum {MIN_MODES} (got {})", self.n));
        }
        if !(self.outer_radius > 0.0 && self.outer_radius.is_finite()) {
            out.push(format!("R must be positive (got {})", self.outer_radius));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            out.push(format!("dt must be positive (got {})", self.dt));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            out.push(format!("T must be non-negative (got {})", self.t_final));
        } else if self.dt > 0.0 && self.t_final > 0.0 {
            if self.t_final < self.dt {
                out.push(format!("T = {} is shorter than dt = {}", self.t_final, self.dt));
            } else if !is_multiple(self.t_final, self.dt) {
                out.push(format!("T = {} is not a multiple of dt = {}", self.t_final, self.dt));
            }
        }
        if !(self.output_every > 0.0 && self.output_every.is_finite()) {
            out.push(format!("output_every must be positive (got {})", self.output_every));
        } else if self.dt > 0.0 && (self.output_every < self.dt || !is_multiple(self.output_every, self.dt)) {
            out.push(format!("output_every = {} is not a multiple of dt = {}", self.output_every, self.dt));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            out.push(format!("gamma must exceed 1 (got {})", self.gamma));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            out.push(format!("c must be non-negative (got {})", self.amplitude));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            out.push(format!("w must be positive (got {})", self.width));
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            out.push(format!("dealias must lie in (0, 1] (got {})", self.dealias));
        }
        if !(self.density_floor >= 0.0 && self.density_floor < 1.0) {
            out.push(format!("density_floor must lie in [0, 1) (got {})", self.density_floor));
        }
        let needed = 2.0 * self.t_final + 10.0 * self.width;
        if self.outer_radius < needed {
            out.push(format!(
                "R = {} cannot contain the acoustic front: need R >= 2T + 10w = {needed}",
                self.outer_radius
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    pub fn law(&self) -> PressureLaw {
        PressureLaw { gamma: self.gamma }
    }

    pub fn terms(&self) -> NonlinearTerms {
        NonlinearTerms {
            law: self.law(),
            dealias: self.dealias,
            density_floor: self.density_floor,
        }
    }

    pub fn step_count(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn output_stride(&self) -> usize {
        ((self.output_every / self.dt).round() as usize).max(1)
    }
}
