use std::f64::consts::PI;

use super::field::{RadialScalarField, Space};
use crate::error::{Error, Result};

fn require_physical(field: &RadialScalarField) -> Result<()> {
    match field.space() {
        Space::Physical => Ok(()),
        Space::Spectral => Err(Error::Usage("norm expects a physical field".into())),
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Config(format!("Lebesgue exponent must lie in [1, inf] (got {p})")));
    }
    Ok(())
}

/// `||f||_p = (4 pi int |f|^p r^2 dr)^{1/p}` by the rectangle rule on the
/// physical nodes; `p = f64::INFINITY` is the maximum over nodes.
pub fn lp_norm(field: &RadialScalarField, p: f64) -> Result<f64> {
    require_physical(field)?;
    check_exponent(p)?;
    Ok(lp_of_magnitudes(field.grid().r(), field.grid().dr(), field.values().iter().map(|v| v.abs()), p))
}

/// Lebesgue norm of the pointwise Euclidean magnitude of several radial
/// components, e.g. `||(a, v)||_p`.
pub fn lp_norm_pair(a: &RadialScalarField, b: &RadialScalarField, p: f64) -> Result<f64> {
    require_physical(a)?;
    a.check_compatible(b)?;
    check_exponent(p)?;
    let magnitudes = a.values().iter().zip(b.values()).map(|(x, y)| x.hypot(*y));
    Ok(lp_of_magnitudes(a.grid().r(), a.grid().dr(), magnitudes, p))
}

pub(crate) fn lp_of_magnitudes(
    r: &[f64],
    dr: f64,
    magnitudes: impl Iterator<Item = f64>,
    p: f64,
) -> f64 {
    if p.is_infinite() {
        return magnitudes.fold(0.0, f64::max);
    }
    let sum: f64 = if p == 2.0 {
        magnitudes.zip(r).map(|(m, r)| m * m * r * r).sum()
    } else if p == 1.0 {
        magnitudes.zip(r).map(|(m, r)| m * r * r).sum()
    } else {
        magnitudes.zip(r).map(|(m, r)| m.powf(p) * r * r).sum()
    };
    (4.0 * PI * dr * sum).powf(1.0 / p)
}

/// `sup_r r |f(r)|`, which for radial `f` equals `|| |x| f ||_inf` and also
/// `|| x_k f ||_inf` for each coordinate `k`.
pub fn weighted_sup_norm(field: &RadialScalarField) -> Result<f64> {
    require_physical(field)?;
    Ok(field
        .values()
        .iter()
        .zip(field.grid().r())
        .map(|(v, r)| r * v.abs())
        .fold(0.0, f64::max))
}

/// `sup_r r |(a, b)(r)|` for a pair of components.
pub fn weighted_sup_norm_pair(a: &RadialScalarField, b: &RadialScalarField) -> Result<f64> {
    require_physical(a)?;
    a.check_compatible(b)?;
    Ok(a.values()
        .iter()
        .zip(b.values())
        .zip(a.grid().r())
        .map(|((x, y), r)| r * x.hypot(*y))
        .fold(0.0, f64::max))
}

/// Spectral-side L2 norm `(4 pi drho sum rho_k^2 f^(rho_k)^2)^{1/2}`, equal to
/// the physical-side norm by the weighted-DST isometry.
pub fn spectral_l2_norm(field: &RadialScalarField) -> Result<f64> {
    if field.space() != Space::Spectral {
        return Err(Error::Usage("spectral_l2_norm expects a spectral field".into()));
    }
    let grid = field.grid();
    let sum: f64 = field
        .values()
        .iter()
        .zip(grid.rho())
        .map(|(v, rho)| v * v * rho * rho)
        .sum();
    Ok((4.0 * PI * grid.drho() * sum).sqrt())
}

/// Discrete form of `4 pi int |f^(rho)| rho drho`, which bounds
/// `sup_r r |f(r)|` from above.
pub fn spectral_weighted_l1(field: &RadialScalarField) -> Result<f64> {
    if field.space() != Space::Spectral {
        return Err(Error::Usage("spectral_weighted_l1 expects a spectral field".into()));
    }
    let grid = field.grid();
    let sum: f64 = field
        .values()
        .iter()
        .zip(grid.rho())
        .map(|(v, rho)| v.abs() * rho)
        .sum();
    Ok(4.0 * PI * grid.drho() * sum)
}
