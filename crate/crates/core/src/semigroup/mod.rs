//! Exact per-frequency propagators `exp(t M_rho)` of the linearised `(a, v)`
//! system, their eigenstructure and ETD weights, band-limited kernel norms,
//! and the anisotropic low-frequency kernel probe.

mod kernel;
mod mode;
mod quadrature;

pub use kernel::{
    default_probe_points, kernel_band_norm, kernel_probe, kernel_probe_fixed, CutoffPsi,
    KernelBand, ProbeResult, HIGH_BAND_OCTAVES, PROBE_MAX_NODES, PROBE_REFINEMENT_TOL,
    PROBE_START_NODES,
};
pub use mode::{
    eigenvalues, etd_coefficients, hi_freq_exponent_split, hi_freq_identity_check,
    mode_exponential, Branch, EigenPair, EtdCoefficients, ModeMatrix,
};
pub use quadrature::{gauss_legendre, gauss_legendre_on};

use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialScalarField, Space};

/// `exp(t M_rho_k)` for every spectral node of `grid`.
pub fn propagator_table(grid: &RadialGrid, t: f64) -> Result<Vec<ModeMatrix>> {
    grid.rho().iter().map(|&rho| mode_exponential(rho, t)).collect()
}

/// Applies the homogeneous propagator mode by mode to a spectral pair.
pub fn apply_semigroup(
    a_hat: &RadialScalarField,
    v_hat: &RadialScalarField,
    t: f64,
) -> Result<(RadialScalarField, RadialScalarField)> {
    if a_hat.space() != Space::Spectral || v_hat.space() != Space::Spectral {
        return Err(Error::Usage("apply_semigroup expects spectral fields".into()));
    }
    if !a_hat.same_grid(v_hat) {
        return Err(Error::Usage("apply_semigroup: grid mismatch".into()));
    }
    let table = propagator_table(a_hat.grid(), t)?;
    let (a, v) = apply_table(&table, a_hat.values(), v_hat.values());
    Ok((
        RadialScalarField::spectral(a_hat.grid().clone(), a)?,
        RadialScalarField::spectral(a_hat.grid().clone(), v)?,
    ))
}

pub(crate) fn apply_table(table: &[ModeMatrix], a: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut out_a = Vec::with_capacity(a.len());
    let mut out_v = Vec::with_capacity(v.len());
    for ((m, &x), &y) in table.iter().zip(a).zip(v) {
        let (p, q) = m.apply(x, y);
        out_a.push(p);
        out_v.push(q);
    }
    (out_a, out_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn gaussian_pair(n: usize, r: f64) -> (RadialScalarField, RadialScalarField) {
        let g = make_grid(n, r).unwrap();
        let a = RadialScalarField::from_spectral_fn(g.clone(), |rho| (-rho * rho / 4.0).exp()).unwrap();
        let v = RadialScalarField::from_spectral_fn(g, |rho| rho * (-rho * rho / 2.0).exp()).unwrap();
        (a, v)
    }

    #[test]
    fn zero_time_is_identity() {
        let (a, v) = gaussian_pair(128, 20.0);
        let (a1, v1) = apply_semigroup(&a, &v, 0.0).unwrap();
        assert_eq!(a1, a);
        assert_eq!(v1, v);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let (a, _) = gaussian_pair(128, 20.0);
        let (_, v) = gaussian_pair(64, 20.0);
        assert!(matches!(apply_semigroup(&a, &v, 1.0), Err(Error::Usage(_))));
        let phys = a.clone().into_physical();
        assert!(matches!(apply_semigroup(&phys, &phys, 1.0), Err(Error::Usage(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn semigroup_law_on_fields(s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let (a, v) = gaussian_pair(256, 30.0);
            let (a1, v1) = apply_semigroup(&a, &v, s).unwrap();
            let (a2, v2) = apply_semigroup(&a1, &v1, t).unwrap();
            let (a3, v3) = apply_semigroup(&a, &v, s + t).unwrap();
            let scale = a3.values().iter().chain(v3.values()).fold(0.0f64, |m, x| m.max(x.abs()));
            for (x, y) in a2.values().iter().chain(v2.values()).zip(a3.values().iter().chain(v3.values())) {
                prop_assert!((x - y).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn single_mode_is_a_two_by_two_product() {
        let g = make_grid(64, 10.0).unwrap();
        let k = 17;
        let mut a = vec![0.0; 64];
        let mut v = vec![0.0; 64];
        a[k] = 0.3;
        v[k] = -1.1;
        let a = RadialScalarField::spectral(g.clone(), a).unwrap();
        let v = RadialScalarField::spectral(g.clone(), v).unwrap();
        let t = 0.7;
        let (a1, v1) = apply_semigroup(&a, &v, t).unwrap();
        let m = mode_exponential(g.rho()[k], t).unwrap();
        let expected = (m.m11 * 0.3 + m.m12 * -1.1, m.m21 * 0.3 + m.m22 * -1.1);
        assert_eq!((a1.values()[k], v1.values()[k]), expected);
        assert!(a1.values().iter().enumerate().all(|(i, x)| i == k || *x == 0.0));
        assert!(v1.values().iter().enumerate().all(|(i, x)| i == k || *x == 0.0));
    }

    #[test]
    fn low_band_l2_decays_at_three_quarters() {
        let ts = [16.0f64, 64.0, 256.0];
        let norms: Vec<f64> = ts
            .iter()
            .map(|&t| kernel_band_norm(t, KernelBand::Low { j0: 0 }, Branch::Plus, 2.0).unwrap())
            .collect();
        let slope = least_squares_slope(&ts.map(f64::ln), &norms.iter().map(|v| v.ln()).collect::<Vec<_>>());
        assert!((slope + 0.75).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn low_band_linf_decays_at_two() {
        let ts = [16.0f64, 64.0, 256.0];
        let norms: Vec<f64> = ts
            .iter()
            .map(|&t| kernel_band_norm(t, KernelBand::Low { j0: 0 }, Branch::Plus, f64::INFINITY).unwrap())
            .collect();
        let slope = least_squares_slope(&ts.map(f64::ln), &norms.iter().map(|v| v.ln()).collect::<Vec<_>>());
        assert!((slope + 2.0).abs() < 0.15, "slope {slope}");
    }

    fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        sxy / sxx
    }

    #[test]
    fn high_band_decays_exponentially() {
        for branch in [Branch::Plus, Branch::Minus] {
            let n4 = kernel_band_norm(4.0, KernelBand::High { j0: 2 }, branch, 2.0).unwrap();
            let n8 = kernel_band_norm(8.0, KernelBand::High { j0: 2 }, branch, 2.0).unwrap();
            assert!(n8 / n4 <= (-0.5f64 * 4.0).exp(), "{branch:?}: {n4} -> {n8}");
        }
    }

    #[test]
    fn low_band_is_bounded_near_zero_time() {
        let at_small = kernel_band_norm(1e-6, KernelBand::Low { j0: 0 }, Branch::Plus, f64::INFINITY).unwrap();
        // |K(x)| <= (2 pi)^{-3/2} int theta d^3 xi <= (2 pi)^{-3/2} (4/3) pi 2^3
        let bound = (2.0 * PI).powf(-1.5) * 4.0 / 3.0 * PI * 8.0;
        assert!(at_small.is_finite() && at_small <= bound);
    }

    #[test]
    fn cutoff_support_and_symmetry() {
        let psi = CutoffPsi::standard();
        let mut nonzero = 0;
        let steps = 40;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let xi = [
                        -1.2 + 2.4 * i as f64 / steps as f64,
                        -1.2 + 2.4 * j as f64 / steps as f64,
                        -1.2 + 2.4 * k as f64 / steps as f64,
                    ];
                    let v = psi.eval(xi);
                    assert!(v >= 0.0);
                    assert_eq!(v, psi.eval([-xi[0], -xi[1], -xi[2]]));
                    if v > 0.0 {
                        nonzero += 1;
                        let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                        assert!(norm > 0.5 && norm < 1.0 && xi[0].abs() >= 0.5);
                        let ((lo, hi), tr) = psi.support_box();
                        assert!(xi[0].abs() >= lo && xi[0].abs() <= hi && xi[1].abs() <= tr && xi[2].abs() <= tr);
                    }
                }
            }
        }
        assert!(nonzero > 0);
    }

    /// Independent evaluation of `int e^{t lambda} Psi(t^{1/2} xi_t) dxi` in
    /// cylindrical coordinates about the `xi_1` axis, with composite Simpson
    /// rules in both variables.
    fn origin_value_oracle(t: f64, branch: Branch) -> num_complex::Complex64 {
        let psi = CutoffPsi::standard();
        let simpson = |n: usize, a: f64, b: f64, f: &dyn Fn(f64) -> num_complex::Complex64| {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * (h / 3.0)
        };
        // in scaled variables eta = t^{1/2} xi_t; dxi = t^{-2} deta
        let inner = |eta1: f64| {
            simpson(2000, 0.0, 1.0, &|s: f64| {
                let c = psi.eval([eta1, s, 0.0]);
                if c == 0.0 {
                    return num_complex::Complex64::new(0.0, 0.0);
                }
                let xi1 = eta1 / t.sqrt();
                let xi_perp = s * t.powf(-0.75);
                let rho = (xi1 * xi1 + xi_perp * xi_perp).sqrt();
                (eigenvalues(rho).unwrap().get(branch) * t).exp() * (c * 2.0 * PI * s)
            })
        };
        let half = simpson(2000, 0.5, 1.0, &inner);
        half * 2.0 / (t * t)
    }

    #[test]
    fn probe_at_origin_matches_cylindrical_quadrature() {
        for branch in [Branch::Plus, Branch::Minus] {
            let got = kernel_probe_fixed(16.0, &CutoffPsi::standard(), branch, &[[0.0; 3]], 128).unwrap()[0];
            let oracle = origin_value_oracle(16.0, branch);
            assert!((got - oracle).norm() < 1e-7 * oracle.norm(), "{got} vs {oracle}");
        }
    }

    #[test]
    fn probe_of_zero_cutoff_vanishes() {
        let pts = default_probe_points(16.0);
        let r = kernel_probe(16.0, &CutoffPsi::scaled(0.0), Branch::Plus, &pts).unwrap();
        assert_eq!(r.sup, 0.0);
    }

    #[test]
    fn probe_rejects_bad_arguments() {
        let psi = CutoffPsi::standard();
        assert!(matches!(kernel_probe(16.0, &psi, Branch::Plus, &[]), Err(Error::Usage(_))));
        assert!(matches!(kernel_probe(2.0, &psi, Branch::Plus, &[[0.0; 3]]), Err(Error::Domain(_))));
    }

    #[test]
    fn general_points_agree_with_axis_marginals() {
        let psi = CutoffPsi::standard();
        let t = 16.0;
        // a point off all axes, compared with a tiny perturbation of an axis point
        let axis = kernel_probe_fixed(t, &psi, Branch::Minus, &[[5.0, 0.0, 0.0], [0.0, 0.0, 3.0]], 48).unwrap();
        let off = kernel_probe_fixed(t, &psi, Branch::Minus, &[[5.0, 1e-12, 0.0], [1e-12, 0.0, 3.0]], 48).unwrap();
        assert!((axis[0] - off[0]).norm() < 1e-12 * axis[0].norm().max(1e-30));
        assert!((axis[1] - off[1]).norm() < 1e-12 * axis[1].norm().max(1e-30));
    }
}
