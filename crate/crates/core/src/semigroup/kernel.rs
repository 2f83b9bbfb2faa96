use num_complex::Complex64;
use rayon::prelude::*;

use super::mode::{eigenvalues, Branch};
use super::quadrature::gauss_legendre_on;
use crate::besov::{band_profile, block_profile, theta};
use crate::error::{Error, Result};
use crate::radial::{lp_of_magnitudes, make_grid};

/// Number of octaves kept above `j0` for the (otherwise unbounded) high band.
pub const HIGH_BAND_OCTAVES: i32 = 4;

/// Frequency window selecting part of the semigroup kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelBand {
    /// `sum_{j <= j0} phi_j = theta(2^{-j0} rho)`.
    Low { j0: i32 },
    /// A single block `phi_j`.
    Block { j: i32 },
    /// `sum_{|j - center| <= 2} phi_j`.
    Frame { center: i32 },
    /// `sum_{j0 <= j <= j0 + HIGH_BAND_OCTAVES} phi_j`.
    High { j0: i32 },
}

impl KernelBand {
    fn multiplier(&self, rho: f64) -> f64 {
        match *self {
            KernelBand::Low { j0 } => theta(rho * 2f64.powi(-j0)),
            KernelBand::Block { j } => block_profile(j, rho),
            KernelBand::Frame { center } => band_profile(center - 2, center + 2, rho),
            KernelBand::High { j0 } => band_profile(j0, j0 + HIGH_BAND_OCTAVES, rho),
        }
    }

    /// `(lowest block index, upper edge of the support)`.
    fn extent(&self) -> (i32, f64) {
        match *self {
            KernelBand::Low { j0 } => (j0 - 6, 2f64.powi(j0 + 1)),
            KernelBand::Block { j } => (j, 2f64.powi(j + 1)),
            KernelBand::Frame { center } => (center - 2, 2f64.powi(center + 3)),
            KernelBand::High { j0 } => (j0, 2f64.powi(j0 + HIGH_BAND_OCTAVES + 1)),
        }
    }
}

/// `|| F^{-1}[m_band(rho) e^{t lambda(rho)}] ||_p` for the chosen eigenvalue
/// branch. The kernel is complex; its norm is taken of the pointwise modulus.
/// A grid is built to hold the acoustic front (`r ~ t`), the spread of the
/// band cutoff, and twice the band's top frequency.
pub fn kernel_band_norm(t: f64, band: KernelBand, branch: Branch, p: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("kernel time must be positive (got {t})")));
    }
    let (j_low, rho_top) = band.extent();
    let outer = 4.0 * t + 40.0 * 2f64.powi(1 - j_low) + 20.0;
    let modes = ((2.0 * rho_top * outer / std::f64::consts::PI).ceil() as usize).max(64);
    let grid = make_grid(modes, outer)?;
    let mut re = Vec::with_capacity(modes);
    let mut im = Vec::with_capacity(modes);
    for &rho in grid.rho() {
        let m = band.multiplier(rho);
        if m == 0.0 {
            re.push(0.0);
            im.push(0.0);
            continue;
        }
        let value = (eigenvalues(rho)?.get(branch) * t).exp() * m;
        re.push(value.re);
        im.push(value.im);
    }
    let re = grid.inverse(&re);
    let im = grid.inverse(&im);
    let magnitudes = re.iter().zip(&im).map(|(a, b)| a.hypot(*b));
    if p.is_nan() || p < 1.0 {
        return Err(Error::Config(format!("Lebesgue exponent must lie in [1, inf] (got {p})")));
    }
    Ok(lp_of_magnitudes(grid.r(), grid.dr(), magnitudes, p))
}

/// Even, nonnegative C-infinity bump on R^3 supported in
/// `{1/2 < |xi| < 1, |xi_1| >= 1/2}`:
/// `amplitude * b((|xi| - 3/4)/(1/8)) * b((|xi_1| - 3/4)/(1/4))`
/// with `b(s) = exp(-1/(1 - s^2))` on `|s| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPsi {
    amplitude: f64,
}

impl Default for CutoffPsi {
    fn default() -> Self {
        Self::standard()
    }
}

fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

impl CutoffPsi {
    pub fn standard() -> Self {
        Self { amplitude: 1.0 }
    }

    pub fn scaled(amplitude: f64) -> Self {
        Self { amplitude }
    }

    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        self.amplitude * bump((norm - 0.75) / 0.125) * bump((xi[0].abs() - 0.75) / 0.25)
    }

    /// Half-widths of a box containing the support: `|xi_1|` in
    /// `[first.0, first.1]`, `|xi_2|, |xi_3| <= transverse`.
    pub fn support_box(&self) -> ((f64, f64), f64) {
        let outer: f64 = 0.875;
        ((0.5, outer), (outer * outer - 0.25).sqrt())
    }
}

/// Result of an adaptive kernel probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    /// `|K(x)|` at each probe point.
    pub values: Vec<f64>,
    pub sup: f64,
    /// Gauss-Legendre nodes per axis at the accepted level.
    pub nodes_per_axis: usize,
    /// Largest relative change of a probe value at the last doubling.
    pub last_relative_change: f64,
}

pub const PROBE_START_NODES: usize = 32;
pub const PROBE_MAX_NODES: usize = 512;
pub const PROBE_REFINEMENT_TOL: f64 = 1e-6;

/// Default probe set: `x_1` on `t [0, 4]` and each transverse axis on
/// `t^{3/4} [0, 4]`, 256 points per axis.
pub fn default_probe_points(t: f64) -> Vec<[f64; 3]> {
    let count = 256;
    let mut pts = Vec::with_capacity(3 * count);
    for scale_axis in 0..3 {
        let extent = if scale_axis == 0 { 4.0 * t } else { 4.0 * t.powf(0.75) };
        for i in 0..count {
            let mut x = [0.0; 3];
            x[scale_axis] = extent * i as f64 / (count - 1) as f64;
            pts.push(x);
        }
    }
    pts
}

fn check_probe_args(t: f64, points: &[[f64; 3]]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Usage("kernel probe needs at least one point".into()));
    }
    if !(t.is_finite() && t >= 4.0) {
        return Err(Error::Domain(format!("kernel probe needs t >= 4 (got {t})")));
    }
    Ok(())
}

/// `max_x |int e^{i x.xi} e^{t lambda(|xi|)} Psi(t^{1/2} xi_t) dxi|` with
/// `xi_t = (xi_1, t^{1/4} xi_2, t^{1/4} xi_3)`, by tensor Gauss-Legendre
/// quadrature over the two boxes `+-xi_1 > 0` holding the support. The node
/// count starts at 32 per axis and doubles until no probe value moves by
/// more than `1e-6` relative.
pub fn kernel_probe(
    t: f64,
    psi: &CutoffPsi,
    branch: Branch,
    points: &[[f64; 3]],
) -> Result<ProbeResult> {
    check_probe_args(t, points)?;
    let mut nodes = PROBE_START_NODES;
    let mut prev = kernel_probe_fixed(t, psi, branch, points, nodes)?;
    loop {
        let next_nodes = nodes * 2;
        let next = kernel_probe_fixed(t, psi, branch, points, next_nodes)?;
        let scale = next.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| {
                let denom = b.norm().max(1e-3 * scale);
                if denom == 0.0 {
                    0.0
                } else {
                    (a - b).norm() / denom
                }
            })
            .fold(0.0, f64::max);
        nodes = next_nodes;
        prev = next;
        if change < PROBE_REFINEMENT_TOL || nodes >= PROBE_MAX_NODES {
            let values: Vec<f64> = prev.iter().map(|z| z.norm()).collect();
            let sup = values.iter().copied().fold(0.0, f64::max);
            return Ok(ProbeResult {
                values,
                sup,
                nodes_per_axis: nodes,
                last_relative_change: change,
            });
        }
    }
}

#[derive(Clone, Copy)]
enum ProbeKind {
    Axis(usize, f64),
    Origin,
    General,
}

fn classify(x: &[f64; 3]) -> ProbeKind {
    let nonzero: Vec<usize> = (0..3).filter(|&i| x[i] != 0.0).collect();
    match nonzero.as_slice() {
        [] => ProbeKind::Origin,
        [i] => ProbeKind::Axis(*i, x[*i]),
        _ => ProbeKind::General,
    }
}

/// Complex kernel values at `points` with `nodes` Gauss-Legendre nodes per
/// axis (per box along `xi_1`).
pub fn kernel_probe_fixed(
    t: f64,
    psi: &CutoffPsi,
    branch: Branch,
    points: &[[f64; 3]],
    nodes: usize,
) -> Result<Vec<Complex64>> {
    check_probe_args(t, points)?;
    let ((lo, hi), transverse) = psi.support_box();
    let s1 = t.powf(-0.5);
    let s23 = t.powf(-0.75);
    let (pos, pos_w) = gauss_legendre_on(nodes, lo * s1, hi * s1);
    let mut axis1: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    axis1.extend_from_slice(&pos);
    let mut w1: Vec<f64> = pos_w.iter().rev().copied().collect();
    w1.extend_from_slice(&pos_w);
    let (axis23, w23) = gauss_legendre_on(nodes, -transverse * s23, transverse * s23);

    let kinds: Vec<ProbeKind> = points.iter().map(classify).collect();
    let general: Vec<usize> = (0..points.len())
        .filter(|&i| matches!(kinds[i], ProbeKind::General))
        .collect();

    let quarter = t.powf(0.25);
    let half = t.sqrt();
    let n23 = axis23.len();

    struct Partial {
        m1: Complex64,
        m2: Vec<Complex64>,
        m3: Vec<Complex64>,
        general: Vec<Complex64>,
    }

    let partials: Vec<Partial> = (0..axis1.len())
        .into_par_iter()
        .map(|a| -> Result<Partial> {
            let xi1 = axis1[a];
            let mut m1 = Complex64::new(0.0, 0.0);
            let mut m2 = vec![Complex64::new(0.0, 0.0); n23];
            let mut m3 = vec![Complex64::new(0.0, 0.0); n23];
            let mut gen = vec![Complex64::new(0.0, 0.0); general.len()];
            for b in 0..n23 {
                let xi2 = axis23[b];
                for c in 0..n23 {
                    let xi3 = axis23[c];
                    let cutoff = psi.eval([half * xi1, half * quarter * xi2, half * quarter * xi3]);
                    if cutoff == 0.0 {
                        continue;
                    }
                    let rho = (xi1 * xi1 + xi2 * xi2 + xi3 * xi3).sqrt();
                    let lambda = eigenvalues(rho)?.get(branch);
                    let w = (lambda * t).exp() * (cutoff * w1[a] * w23[b] * w23[c]);
                    m1 += w;
                    m2[b] += w;
                    m3[c] += w;
                    for (slot, &i) in gen.iter_mut().zip(&general) {
                        let x = points[i];
                        let phase = x[0] * xi1 + x[1] * xi2 + x[2] * xi3;
                        *slot += w * Complex64::from_polar(1.0, phase);
                    }
                }
            }
            Ok(Partial { m1, m2, m3, general: gen })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut m1 = vec![Complex64::new(0.0, 0.0); axis1.len()];
    let mut m2 = vec![Complex64::new(0.0, 0.0); n23];
    let mut m3 = vec![Complex64::new(0.0, 0.0); n23];
    let mut gen = vec![Complex64::new(0.0, 0.0); general.len()];
    for (a, p) in partials.into_iter().enumerate() {
        m1[a] = p.m1;
        m2.iter_mut().zip(&p.m2).for_each(|(a, b)| *a += b);
        m3.iter_mut().zip(&p.m3).for_each(|(a, b)| *a += b);
        gen.iter_mut().zip(&p.general).for_each(|(a, b)| *a += b);
    }
    let total: Complex64 = m1.iter().sum();

    let along = |marginal: &[Complex64], axis: &[f64], x: f64| -> Complex64 {
        marginal
            .iter()
            .zip(axis)
            .map(|(w, xi)| w * Complex64::from_polar(1.0, x * xi))
            .sum()
    };

    let mut general_iter = gen.into_iter();
    Ok(kinds
        .iter()
        .map(|kind| match *kind {
            ProbeKind::Origin => total,
            ProbeKind::Axis(0, x) => along(&m1, &axis1, x),
            ProbeKind::Axis(1, x) => along(&m2, &axis23, x),
            ProbeKind::Axis(_, x) => along(&m3, &axis23, x),
            ProbeKind::General => general_iter.next().expect("general probe slot"),
        })
        .collect())
}
