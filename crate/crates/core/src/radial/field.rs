use std::sync::Arc;

use super::grid::RadialGrid;
use crate::error::{Error, Result};

/// Which node set a field's samples live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Physical,
    Spectral,
}

/// A radial scalar sampled at either the physical or the spectral nodes of
/// its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialScalarField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    space: Space,
}

impl RadialScalarField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, space: Space) -> Result<Self> {
        if values.len() != grid.modes() {
            return Err(Error::Usage(format!(
                "field has {} samples but grid has {} modes",
                values.len(),
                grid.modes()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericDomain(format!(
                "non-finite sample {} at index {i}",
                values[i]
            )));
        }
        Ok(Self {
            grid,
            values,
            space,
        })
    }

    pub fn physical(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values, Space::Physical)
    }

    pub fn spectral(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values, Space::Spectral)
    }

    pub fn zeros(grid: Arc<RadialGrid>, space: Space) -> Self {
        let values = vec![0.0; grid.modes()];
        Self {
            grid,
            values,
            space,
        }
    }

    /// Samples `f(r_m)` of a radial profile.
    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.r().iter().map(|&r| f(r)).collect();
        Self::physical(grid, values)
    }

    /// Spectral samples `f^(rho_k)` from a profile in the frequency variable.
    pub fn from_spectral_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.rho().iter().map(|&rho| f(rho)).collect();
        Self::spectral(grid, values)
    }

    /// Unchecked constructor for internal hot paths whose inputs are already
    /// known to be finite and correctly sized.
    pub(crate) fn from_parts(grid: Arc<RadialGrid>, values: Vec<f64>, space: Space) -> Self {
        debug_assert_eq!(values.len(), grid.modes());
        Self {
            grid,
            values,
            space,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Weighted DST-I from physical to spectral samples.
    pub fn to_spectral(&self) -> Result<Self> {
        if self.space != Space::Physical {
            return Err(Error::Usage("to_spectral expects a physical field".into()));
        }
        let values = self.grid.forward(&self.values);
        Ok(Self::from_parts(self.grid.clone(), values, Space::Spectral))
    }

    pub fn to_physical(&self) -> Result<Self> {
        if self.space != Space::Spectral {
            return Err(Error::Usage("to_physical expects a spectral field".into()));
        }
        let values = self.grid.inverse(&self.values);
        Ok(Self::from_parts(self.grid.clone(), values, Space::Physical))
    }

    /// Converts to spectral space if needed.
    pub fn into_spectral(self) -> Self {
        match self.space {
            Space::Spectral => self,
            Space::Physical => {
                let values = self.grid.forward(&self.values);
                Self::from_parts(self.grid, values, Space::Spectral)
            }
        }
    }

    /// Converts to physical space if needed.
    pub fn into_physical(self) -> Self {
        match self.space {
            Space::Physical => self,
            Space::Spectral => {
                let values = self.grid.inverse(&self.values);
                Self::from_parts(self.grid, values, Space::Physical)
            }
        }
    }

    /// Radial Fourier multiplier `F^{-1}[m(|xi|) f^]`.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> f64) -> Result<Self> {
        if self.space != Space::Spectral {
            return Err(Error::Usage(
                "multipliers act on spectral fields".into(),
            ));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for (v, &rho) in self.values.iter().zip(self.grid.rho()) {
            let factor = m(rho);
            if !factor.is_finite() {
                return Err(Error::NumericDomain(format!(
                    "multiplier is {factor} at rho = {rho}"
                )));
            }
            values.push(v * factor);
        }
        Ok(Self::from_parts(self.grid.clone(), values, Space::Spectral))
    }

    /// `grad w = w'(r) x/r` as a radial profile.
    pub fn gradient_profile(&self) -> RadialVectorProfile {
        let derivative = match self.space {
            Space::Spectral => self.grid.radial_derivative(&self.values),
            Space::Physical => self.grid.radial_derivative(&self.grid.forward(&self.values)),
        };
        RadialVectorProfile {
            grid: self.grid.clone(),
            values: derivative,
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.same_grid(other) {
            return Err(Error::Usage("fields live on different grids".into()));
        }
        if self.space != other.space {
            return Err(Error::Usage("fields live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.grid.clone(), values, self.space))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.grid.clone(), values, self.space))
    }

    pub fn scale(&self, factor: f64) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::from_parts(self.grid.clone(), values, self.space)
    }
}

/// Radial vector field `U(r) x/r`, stored as its profile `U` at the physical
/// nodes. Every such field is a gradient, so it has no divergence-free part:
/// the Helmholtz projection onto curl-free fields is the identity on this
/// type and the solenoidal projection is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialVectorProfile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialVectorProfile {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.modes() {
            return Err(Error::Usage(format!(
                "profile has {} samples but grid has {} modes",
                values.len(),
                grid.modes()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericDomain(format!(
                "non-finite profile sample at index {i}"
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.r().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `div(G(r) x/r) = G' + 2G/r`, with `G'` from the sine expansion of the
    /// odd extension of `G`.
    pub fn divergence(&self) -> RadialScalarField {
        let coeffs = self.grid.odd_coefficients(&self.values);
        let derivative = self.grid.odd_derivative_from_coefficients(&coeffs);
        let values = derivative
            .iter()
            .zip(&self.values)
            .zip(self.grid.r())
            .map(|((gp, g), r)| gp + 2.0 * g / r)
            .collect();
        RadialScalarField::from_parts(self.grid.clone(), values, Space::Physical)
    }

    /// The identically zero divergence-free part of the field.
    pub fn solenoidal_part(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: vec![0.0; self.values.len()],
        }
    }

    /// The curl-free part, which is the field itself.
    pub fn gradient_part(&self) -> Self {
        self.clone()
    }

    /// Magnitude `|U|` as a physical scalar, so Lebesgue norms of the 3D
    /// vector field equal those of this scalar.
    pub fn magnitude(&self) -> RadialScalarField {
        let values = self.values.iter().map(|v| v.abs()).collect();
        RadialScalarField::from_parts(self.grid.clone(), values, Space::Physical)
    }
}
