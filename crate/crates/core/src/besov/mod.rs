//! Littlewood-Paley blocks on the radial grid, homogeneous Besov norms over
//! the full, low or high frequency band, the `p = 2` weighted Besov norm and
//! the time-dependent cutoff index.

mod partition;

pub use partition::{band_profile, block_profile, theta, DyadicPartition};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::radial::{lp_norm, lp_norm_pair, RadialScalarField};

/// Which dyadic indices a norm sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Full,
    /// `j <= j0`
    Low { j0: i32 },
    /// `j >= j0`
    High { j0: i32 },
}

impl Band {
    fn admits(&self, j: i32) -> bool {
        match *self {
            Band::Full => true,
            Band::Low { j0 } => j <= j0,
            Band::High { j0 } => j >= j0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub band: Band,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, q: f64, band: Band) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Config(format!("regularity must be finite (got {s})")));
        }
        for (name, v) in [("p", p), ("q", q)] {
            if v.is_nan() || v < 1.0 {
                return Err(Error::Config(format!("{name} must lie in [1, inf] (got {v})")));
            }
        }
        Ok(Self { s, p, q, band })
    }

    pub fn full(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(s, p, q, Band::Full)
    }

    pub fn with_band(self, band: Band) -> Self {
        Self { band, ..self }
    }
}

/// A Besov norm together with bookkeeping about indices the grid cannot
/// represent.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovEvaluation {
    pub value: f64,
    pub blocks_used: usize,
    /// Indices named by a band cutoff that lie beyond the resolved range.
    /// They contribute nothing.
    pub unresolved_blocks: usize,
}

fn range_check(partition: &DyadicPartition, j: i32) -> Result<()> {
    if partition.contains(j) {
        Ok(())
    } else {
        Err(Error::Range {
            j,
            min: partition.j_min,
            max: partition.j_max,
        })
    }
}

/// `Delta_j f`, returned in physical space.
pub fn block(field: &RadialScalarField, j: i32) -> Result<RadialScalarField> {
    range_check(&DyadicPartition::for_grid(field.grid()), j)?;
    let spectral = field.clone().into_spectral();
    Ok(spectral
        .apply_multiplier(|rho| block_profile(j, rho))?
        .into_physical())
}

/// Smooth low-pass `S_j f` with multiplier `theta(2^{-j} rho)`, in physical space.
pub fn low_cutoff(field: &RadialScalarField, j: i32) -> Result<RadialScalarField> {
    let spectral = field.clone().into_spectral();
    let scale = 2f64.powi(-j);
    Ok(spectral
        .apply_multiplier(|rho| theta(rho * scale))?
        .into_physical())
}

fn unresolved_count(band: Band, partition: &DyadicPartition) -> usize {
    match band {
        Band::Full => 0,
        Band::Low { j0 } => (j0 - partition.j_max).max(0) as usize,
        Band::High { j0 } => (partition.j_min - j0).max(0) as usize,
    }
}

fn combine(weighted: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        weighted.iter().copied().fold(0.0, f64::max)
    } else {
        weighted.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

fn evaluate(
    fields: &[&RadialScalarField],
    spec: &BesovSpec,
    block_norm: impl Fn(&[RadialScalarField]) -> Result<f64> + Sync,
) -> Result<BesovEvaluation> {
    let spectral: Vec<RadialScalarField> = fields.iter().map(|f| (*f).clone().into_spectral()).collect();
    let partition = DyadicPartition::for_grid(spectral[0].grid());
    let indices: Vec<i32> = partition.indices().filter(|&j| spec.band.admits(j)).collect();
    let weighted = indices
        .par_iter()
        .map(|&j| {
            let blocks = spectral
                .iter()
                .map(|f| Ok(f.apply_multiplier(|rho| block_profile(j, rho))?.into_physical()))
                .collect::<Result<Vec<_>>>()?;
            Ok(2f64.powf(spec.s * j as f64) * block_norm(&blocks)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(BesovEvaluation {
        value: combine(&weighted, spec.q),
        blocks_used: indices.len(),
        unresolved_blocks: unresolved_count(spec.band, &partition),
    })
}

pub fn besov_norm_detailed(field: &RadialScalarField, spec: &BesovSpec) -> Result<BesovEvaluation> {
    evaluate(&[field], spec, |b| lp_norm(&b[0], spec.p))
}

/// `(sum_j 2^{sqj} ||Delta_j f||_p^q)^{1/q}` over the resolved blocks in the band.
pub fn besov_norm(field: &RadialScalarField, spec: &BesovSpec) -> Result<f64> {
    Ok(besov_norm_detailed(field, spec)?.value)
}

/// Besov norm of the pair `(a, v)`, each block measured by the Lebesgue norm
/// of the pointwise Euclidean magnitude.
pub fn besov_norm_pair(a: &RadialScalarField, v: &RadialScalarField, spec: &BesovSpec) -> Result<f64> {
    a.check_compatible(v)?;
    Ok(evaluate(&[a, v], spec, |b| lp_norm_pair(&b[0], &b[1], spec.p))?.value)
}

/// Several Besov norms of the pair `(a, v)` from one pass over the blocks.
pub fn besov_norms_pair(
    a: &RadialScalarField,
    v: &RadialScalarField,
    specs: &[BesovSpec],
) -> Result<Vec<f64>> {
    a.check_compatible(v)?;
    let a = a.clone().into_spectral();
    let v = v.clone().into_spectral();
    let partition = DyadicPartition::for_grid(a.grid());
    let indices: Vec<i32> = partition.indices().collect();
    let per_block = indices
        .par_iter()
        .map(|&j| {
            let ba = a.apply_multiplier(|rho| block_profile(j, rho))?.into_physical();
            let bv = v.apply_multiplier(|rho| block_profile(j, rho))?.into_physical();
            specs
                .iter()
                .map(|spec| Ok(2f64.powf(spec.s * j as f64) * lp_norm_pair(&ba, &bv, spec.p)?))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let weighted: Vec<f64> = indices
                .iter()
                .zip(&per_block)
                .filter(|(&j, _)| spec.band.admits(j))
                .map(|(_, row)| row[i])
                .collect();
            combine(&weighted, spec.q)
        })
        .collect())
}

/// Besov norm of `x_k f` at `p = 2`, from
/// `||Delta_j (x_k f)||_2^2 = (4 pi / 3) int phi_j^2 (f_hat')^2 rho^2 drho`.
/// The axis does not change the value for radial `f`.
pub fn weighted_besov_norm_p2(field: &RadialScalarField, axis: usize, spec: &BesovSpec) -> Result<f64> {
    if spec.p != 2.0 {
        return Err(Error::Unsupported(format!(
            "weighted Besov norm only at p = 2 (got p = {})",
            spec.p
        )));
    }
    if !(1..=3).contains(&axis) {
        return Err(Error::Config(format!("axis must be 1, 2 or 3 (got {axis})")));
    }
    let spectral = field.clone().into_spectral();
    let grid = spectral.grid();
    let rho = grid.rho();
    let f = spectral.values();
    let h = grid.drho();
    let n = f.len();
    let derivative: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (f[1] - f[0]) / h
            } else if k == n - 1 {
                (f[n - 1] - f[n - 2]) / h
            } else {
                (f[k + 1] - f[k - 1]) / (2.0 * h)
            }
        })
        .collect();
    let partition = DyadicPartition::for_grid(grid);
    let weighted: Vec<f64> = partition
        .indices()
        .filter(|&j| spec.band.admits(j))
        .map(|j| {
            let integral: f64 = rho
                .iter()
                .zip(&derivative)
                .map(|(&r, &d)| {
                    let phi = block_profile(j, r);
                    phi * phi * d * d * r * r
                })
                .sum::<f64>()
                * h;
            2f64.powf(spec.s * j as f64) * (4.0 * std::f64::consts::PI / 3.0 * integral).sqrt()
        })
        .collect();
    Ok(combine(&weighted, spec.q))
}

/// `j0(t) = 1 - floor(log2(t) / 2)`.
pub fn j0_for_time(t: f64) -> Result<i32> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("cutoff index needs t >= 1 (got {t})")));
    }
    Ok(1 - (0.5 * t.log2()).floor() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_grid, RadialGrid};
    use proptest::prelude::*;
    use std::f64::consts::PI;
    use std::sync::Arc;

    const P_LIST: [f64; 4] = [1.0, 2.0, 3.0, f64::INFINITY];

    /// Random spectral data confined to the band where the partition sums to one.
    fn band_limited(grid: &Arc<RadialGrid>, coeffs: &[f64]) -> RadialScalarField {
        let p = DyadicPartition::for_grid(grid);
        let lo = 2f64.powi(p.j_min + 1);
        let hi = 2f64.powi(p.j_max);
        let mut values = vec![0.0; grid.modes()];
        let mut c = coeffs.iter().cycle();
        for (v, &rho) in values.iter_mut().zip(grid.rho()) {
            let next = *c.next().unwrap();
            if rho >= lo && rho <= hi {
                *v = next;
            }
        }
        RadialScalarField::spectral(grid.clone(), values).unwrap()
    }

    #[test]
    fn blocks_reconstruct_band_limited_fields() {
        let g = make_grid(512, 40.0).unwrap();
        let coeffs: Vec<f64> = (0..97).map(|i| ((i * 37 % 23) as f64 - 11.0) / 7.0).collect();
        let f = band_limited(&g, &coeffs).into_physical();
        let p = DyadicPartition::for_grid(&g);
        let mut sum = vec![0.0; 512];
        for j in p.indices() {
            for (s, v) in sum.iter_mut().zip(block(&f, j).unwrap().values()) {
                *s += v;
            }
        }
        let scale = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (s, v) in sum.iter().zip(f.values()) {
            assert!((s - v).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn block_errors_and_zero() {
        let g = make_grid(256, 20.0).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let zero = RadialScalarField::zeros(g.clone(), crate::radial::Space::Physical);
        assert!(block(&zero, p.j_min).unwrap().is_zero());
        assert_eq!(
            block(&zero, p.j_max + 1),
            Err(Error::Range { j: p.j_max + 1, min: p.j_min, max: p.j_max })
        );
        assert!(matches!(block(&zero, p.j_min - 1), Err(Error::Range { .. })));
    }

    #[test]
    fn disjoint_blocks_vanish() {
        let g = make_grid(1024, 100.0).unwrap();
        let j = 1;
        let f = RadialScalarField::from_spectral_fn(g.clone(), |rho| block_profile(j, rho) * rho.sin()).unwrap();
        for jp in DyadicPartition::for_grid(&g).indices() {
            if (jp - j).abs() >= 2 {
                assert!(block(&f, jp).unwrap().is_zero(), "block {jp}");
            }
        }
    }

    /// Inverse transform and Lebesgue norm by direct summation.
    fn direct_block_norm(grid: &RadialGrid, f_hat: &[f64], j: i32, p: f64) -> f64 {
        let n = grid.modes();
        let r = grid.r();
        let rho = grid.rho();
        let c = (2.0 / PI).sqrt() * grid.drho();
        let values: Vec<f64> = (0..n)
            .map(|m| {
                let s: f64 = (0..n)
                    .map(|k| rho[k] * block_profile(j, rho[k]) * f_hat[k] * (rho[k] * r[m]).sin())
                    .sum();
                c * s / r[m]
            })
            .collect();
        if p.is_infinite() {
            values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        } else {
            let s: f64 = values.iter().zip(r).map(|(v, r)| v.abs().powf(p) * r * r).sum();
            (4.0 * PI * grid.dr() * s).powf(1.0 / p)
        }
    }

    #[test]
    fn annulus_bump_matches_direct_sum() {
        let g = make_grid(512, 100.0).unwrap();
        let f = RadialScalarField::from_spectral_fn(g.clone(), |rho| block_profile(0, rho)).unwrap();
        for p in P_LIST {
            for s in [-1.0, 0.0, 0.5] {
                let spec = BesovSpec::full(s, p, 1.0).unwrap();
                let got = besov_norm(&f, &spec).unwrap();
                let oracle: f64 = (-1..=1)
                    .map(|j| 2f64.powf(s * j as f64) * direct_block_norm(&g, f.values(), j, p))
                    .sum();
                assert!((got - oracle).abs() <= 1e-10 * oracle, "p={p} s={s}: {got} vs {oracle}");
            }
        }
    }

    #[test]
    fn dilation_covariance() {
        let n = 4096;
        let r = 200.0;
        let g = make_grid(n, r).unwrap();
        let half = make_grid(n, r / 2.0).unwrap();
        let profile = |x: f64| (-x * x).exp() * (1.0 + 0.3 * x.cos());
        let f = RadialScalarField::from_fn(g.clone(), profile).unwrap();
        // the same samples on the half-size grid are g(x) = f(2x)
        let dilated = RadialScalarField::physical(half, f.values().to_vec()).unwrap();
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            for s in [0.0, 0.5, -0.5] {
                for q in [1.0, 2.0, f64::INFINITY] {
                    let spec = BesovSpec::full(s, p, q).unwrap();
                    let ratio = besov_norm(&dilated, &spec).unwrap() / besov_norm(&f, &spec).unwrap();
                    let expected = 2f64.powf(s - 3.0 / p);
                    assert!((ratio / expected - 1.0).abs() < 0.01, "s={s} p={p} q={q}: {ratio} vs {expected}");
                }
            }
        }
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let g = make_grid(128, 20.0).unwrap();
        let zero = RadialScalarField::zeros(g, crate::radial::Space::Spectral);
        for p in P_LIST {
            for band in [Band::Full, Band::Low { j0: 0 }, Band::High { j0: 0 }] {
                let spec = BesovSpec::new(0.3, p, 2.0, band).unwrap();
                assert_eq!(besov_norm(&zero, &spec).unwrap(), 0.0);
            }
        }
        let spec = BesovSpec::full(0.0, 2.0, 1.0).unwrap();
        assert_eq!(weighted_besov_norm_p2(&zero, 1, &spec).unwrap(), 0.0);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(BesovSpec::full(0.0, 0.5, 1.0), Err(Error::Config(_))));
        assert!(matches!(BesovSpec::full(0.0, 2.0, f64::NAN), Err(Error::Config(_))));
        assert!(BesovSpec::full(0.0, f64::INFINITY, f64::INFINITY).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn triangle_embedding(coeffs in prop::collection::vec(-1.0f64..1.0, 64)) {
            let g = make_grid(256, 30.0).unwrap();
            let f = band_limited(&g, &coeffs);
            for p in P_LIST {
                let lp = lp_norm(&f.to_physical().unwrap(), p).unwrap();
                let b = besov_norm(&f, &BesovSpec::full(0.0, p, 1.0).unwrap()).unwrap();
                prop_assert!(lp <= b + 1e-9, "p={}: {} > {}", p, lp, b);
            }
        }

        #[test]
        fn almost_orthogonality(coeffs in prop::collection::vec(-1.0f64..1.0, 64)) {
            let g = make_grid(256, 30.0).unwrap();
            let f = band_limited(&g, &coeffs);
            let total = lp_norm(&f.to_physical().unwrap(), 2.0).unwrap().powi(2);
            let blocks = besov_norm(&f, &BesovSpec::full(0.0, 2.0, 2.0).unwrap()).unwrap().powi(2);
            prop_assert!(blocks <= 3.0 * total + 1e-12);
            prop_assert!(blocks >= total / 3.0);
        }

        #[test]
        fn band_additivity(coeffs in prop::collection::vec(-1.0f64..1.0, 32), j0 in -4i32..4, q in 1.0f64..4.0) {
            let g = make_grid(256, 30.0).unwrap();
            let f = band_limited(&g, &coeffs);
            let spec = BesovSpec::full(0.25, 2.0, q).unwrap();
            let low = besov_norm(&f, &spec.with_band(Band::Low { j0 })).unwrap();
            let high = besov_norm(&f, &spec.with_band(Band::High { j0: j0 + 1 })).unwrap();
            let full = besov_norm(&f, &spec).unwrap();
            prop_assert!((low.powf(q) + high.powf(q) - full.powf(q)).abs() <= 1e-12 * full.powf(q).max(1e-300));
        }
    }

    #[test]
    fn multi_spec_matches_single_evaluations() {
        let g = make_grid(512, 40.0).unwrap();
        let a = RadialScalarField::from_fn(g.clone(), |r| (-r * r).exp()).unwrap();
        let v = RadialScalarField::from_fn(g.clone(), |r| r * (-r * r / 2.0).exp()).unwrap();
        let specs = [
            BesovSpec::full(0.0, 2.0, 1.0).unwrap(),
            BesovSpec::full(0.0, f64::INFINITY, 1.0).unwrap(),
            BesovSpec::new(0.5, 3.0, 2.0, Band::High { j0: 0 }).unwrap(),
        ];
        let multi = besov_norms_pair(&a, &v, &specs).unwrap();
        for (spec, m) in specs.iter().zip(&multi) {
            assert_eq!(*m, besov_norm_pair(&a, &v, spec).unwrap());
        }
        let zero = RadialScalarField::zeros(g, crate::radial::Space::Physical);
        let single = besov_norm(&a, &specs[1]).unwrap();
        assert!((besov_norm_pair(&a, &zero, &specs[1]).unwrap() - single).abs() <= 1e-15 * single);
    }

    #[test]
    fn unresolved_cutoffs_are_counted() {
        let g = make_grid(256, 30.0).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let f = RadialScalarField::from_fn(g.clone(), |r| (-r * r).exp()).unwrap();
        let spec = BesovSpec::full(0.0, 2.0, 1.0).unwrap();
        let low = besov_norm_detailed(&f, &spec.with_band(Band::Low { j0: p.j_max + 3 })).unwrap();
        assert_eq!(low.unresolved_blocks, 3);
        assert_eq!(low.blocks_used, (p.j_max - p.j_min + 1) as usize);
        let high = besov_norm_detailed(&f, &spec.with_band(Band::High { j0: p.j_max + 1 })).unwrap();
        assert_eq!((high.value, high.blocks_used, high.unresolved_blocks), (0.0, 0, 0));
        assert_eq!(besov_norm_detailed(&f, &spec).unwrap().unresolved_blocks, 0);
    }

    #[test]
    fn low_cutoff_properties() {
        let g = make_grid(512, 40.0).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let f = RadialScalarField::from_fn(g.clone(), |r| (-r * r / 2.0).exp() * (1.0 + r)).unwrap();
        let full = low_cutoff(&f, p.j_max).unwrap();
        let scale = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in full.values().iter().zip(f.values()) {
            assert!((a - b).abs() <= 1e-10 * scale);
        }
        let high = RadialScalarField::from_spectral_fn(g.clone(), |rho| block_profile(3, rho)).unwrap();
        assert!(low_cutoff(&high, 1).unwrap().is_zero());
        // S_j f + sum_{j' > j} Delta_j' f = f on the resolved band
        let coeffs: Vec<f64> = (0..31).map(|i| (i as f64 * 0.7).sin()).collect();
        let band = band_limited(&g, &coeffs).into_physical();
        let j = 0;
        let mut sum = low_cutoff(&band, j).unwrap().into_values();
        for jp in (j + 1)..=p.j_max {
            for (s, v) in sum.iter_mut().zip(block(&band, jp).unwrap().values()) {
                *s += v;
            }
        }
        let scale = band.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (s, v) in sum.iter().zip(band.values()) {
            assert!((s - v).abs() <= 1e-10 * scale);
        }
    }

    fn simpson(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn weighted_norm_of_gaussian() {
        let g = make_grid(8192, PI * 1024.0).unwrap();
        let f = RadialScalarField::from_spectral_fn(g.clone(), |rho| (-rho * rho / 2.0).exp()).unwrap();
        for j in [-1, 0, 1, 2] {
            let spec = BesovSpec::new(0.0, 2.0, 1.0, Band::Low { j0: j }).unwrap();
            let below = weighted_besov_norm_p2(&f, 2, &spec.with_band(Band::Low { j0: j - 1 })).unwrap();
            let got = weighted_besov_norm_p2(&f, 2, &spec).unwrap() - below;
            let lo = 2f64.powi(j - 1);
            let hi = 2f64.powi(j + 1);
            let oracle = (4.0 * PI / 3.0
                * simpson(20000, lo, hi, |r| block_profile(j, r).powi(2) * r.powi(4) * (-r * r).exp()))
            .sqrt();
            assert!((got / oracle - 1.0).abs() < 1e-6, "j={j}: {got} vs {oracle}");
        }
    }

    #[test]
    fn weighted_norm_constant_block_and_errors() {
        let g = make_grid(2048, 200.0).unwrap();
        // f_hat constant across the support of block 1
        let f = RadialScalarField::from_spectral_fn(g.clone(), |rho| theta(rho / 8.0)).unwrap();
        let spec = BesovSpec::new(0.0, 2.0, 1.0, Band::High { j0: 1 }).unwrap();
        let only_one = spec.with_band(Band::Low { j0: 1 });
        let upto_zero = spec.with_band(Band::Low { j0: 0 });
        let block_one = weighted_besov_norm_p2(&f, 1, &only_one).unwrap() - weighted_besov_norm_p2(&f, 1, &upto_zero).unwrap();
        assert_eq!(block_one, 0.0);
        assert!(weighted_besov_norm_p2(&f, 1, &spec).unwrap() > 0.0);
        let p3 = BesovSpec::full(0.0, 3.0, 1.0).unwrap();
        assert!(matches!(weighted_besov_norm_p2(&f, 1, &p3), Err(Error::Unsupported(_))));
        assert!(matches!(weighted_besov_norm_p2(&f, 4, &spec), Err(Error::Config(_))));
    }

    #[test]
    fn cutoff_index() {
        assert_eq!(j0_for_time(1.0).unwrap(), 1);
        assert_eq!(j0_for_time(4.0).unwrap(), 0);
        assert_eq!(j0_for_time(16.0).unwrap(), -1);
        assert!(matches!(j0_for_time(0.5), Err(Error::Domain(_))));
        assert!(matches!(j0_for_time(f64::NAN), Err(Error::Domain(_))));
        for k in 0..=20 {
            let t = 2f64.powi(k);
            let j0 = j0_for_time(t).unwrap();
            let (lo, hi) = (t.powf(-0.5) / 2.0, t.powf(-0.5));
            // at every t the annulus sits inside (2^{j0-3}, 2^{j0+2})
            assert!(2f64.powi(j0 - 3) < lo && hi < 2f64.powi(j0 + 2), "t={t}");
            // the tighter lower end 2^{j0-2} holds exactly when log2 t is even
            assert_eq!(2f64.powi(j0 - 2) <= lo, k % 2 == 0, "t={t}");
        }
    }
}
