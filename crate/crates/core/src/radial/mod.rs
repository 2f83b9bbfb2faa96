//! Radial grids, the weighted sine transform, Fourier multipliers, radial
//! differential operators and Lebesgue norms for 3D radially symmetric fields
//! represented by 1D profiles.

mod field;
mod grid;
mod norms;

pub use field::{RadialScalarField, RadialVectorProfile, Space};
pub use grid::{make_grid, RadialGrid, MIN_MODES};
pub use norms::{
    lp_norm, lp_norm_pair, spectral_l2_norm, spectral_weighted_l1, weighted_sup_norm,
    weighted_sup_norm_pair,
};
pub(crate) use norms::lp_of_magnitudes;
