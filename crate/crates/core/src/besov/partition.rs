use crate::radial::RadialGrid;

/// `e^{-1/s}` for `s > 0`, zero otherwise.
fn ramp(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth transition profile: `1` on `[0, 1]`, `0` on `[2, inf)`, and the
/// normalised C-infinity ramp in between.
pub fn theta(rho: f64) -> f64 {
    if rho <= 1.0 {
        1.0
    } else if rho >= 2.0 {
        0.0
    } else {
        let up = ramp(2.0 - rho);
        up / (up + ramp(rho - 1.0))
    }
}

/// Block profile `phi_j(rho) = theta(2^{-j} rho) - theta(2^{-j+1} rho)`,
/// supported in `[2^{j-1}, 2^{j+1}]`.
pub fn block_profile(j: i32, rho: f64) -> f64 {
    let scaled = rho * 2f64.powi(-j);
    theta(scaled) - theta(2.0 * scaled)
}

/// `sum_{lo <= j <= hi} phi_j(rho)` by telescoping.
pub fn band_profile(lo: i32, hi: i32, rho: f64) -> f64 {
    if lo > hi {
        return 0.0;
    }
    theta(rho * 2f64.powi(-hi)) - theta(rho * 2f64.powi(1 - lo))
}

/// The Littlewood-Paley blocks a grid can represent: those whose support
/// meets `[rho_1, rho_N]`. Over this range the blocks sum to one at every
/// spectral node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicPartition {
    pub fn for_grid(grid: &RadialGrid) -> Self {
        let lowest = grid.rho()[0];
        let highest = grid.rho_max();
        let mut j_min = lowest.log2().floor() as i32;
        // keep 2^{j_min + 1} > rho_1 and 2^{j_min} <= rho_1 under rounding
        while 2f64.powi(j_min) > lowest {
            j_min -= 1;
        }
        while 2f64.powi(j_min + 1) <= lowest {
            j_min += 1;
        }
        let mut j_max = highest.log2().ceil() as i32;
        while 2f64.powi(j_max - 1) >= highest {
            j_max -= 1;
        }
        while 2f64.powi(j_max) < highest {
            j_max += 1;
        }
        Self { j_min, j_max }
    }

    pub fn contains(&self, j: i32) -> bool {
        (self.j_min..=self.j_max).contains(&j)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }
}
