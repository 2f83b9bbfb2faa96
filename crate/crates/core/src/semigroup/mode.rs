use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this `|t delta|` the cosh/sinhc pair is evaluated by power series.
const SERIES_THRESHOLD: f64 = 1e-3;

/// Which eigenvalue branch of the mode generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `-(rho^2/2)(1 + sqrt(1 - 4/rho^2))`, the fast root above `rho = 2`.
    Plus,
    /// `-(rho^2/2)(1 - sqrt(1 - 4/rho^2))`, the slow root above `rho = 2`.
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Eigenvalues of `M_rho = [[0, -rho], [rho, -rho^2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl EigenPair {
    pub fn get(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }

    /// Largest real part, the decay rate of `exp(tM)`.
    pub fn spectral_abscissa(&self) -> f64 {
        self.plus.re.max(self.minus.re)
    }
}

fn require_frequency(rho: f64) -> Result<()> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive (got {rho})")));
    }
    Ok(())
}

/// Closed-form eigenvalues; complex conjugate below `rho = 2`, real negative
/// above, coalescing at `-2` for `rho = 2`.
pub fn eigenvalues(rho: f64) -> Result<EigenPair> {
    require_frequency(rho)?;
    let half = rho * rho / 2.0;
    let radicand = 1.0 - 4.0 / (rho * rho);
    let pair = if radicand < 0.0 {
        let im = half * (-radicand).sqrt();
        EigenPair {
            plus: Complex64::new(-half, -im),
            minus: Complex64::new(-half, im),
        }
    } else {
        let root = radicand.sqrt();
        EigenPair {
            plus: Complex64::new(-half * (1.0 + root), 0.0),
            minus: Complex64::new(-half * (1.0 - root), 0.0),
        }
    };
    Ok(pair)
}

/// A real 2x2 matrix acting on the pair `(a^, v^)` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl ModeMatrix {
    pub const IDENTITY: Self = Self {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub const ZERO: Self = Self {
        m11: 0.0,
        m12: 0.0,
        m21: 0.0,
        m22: 0.0,
    };

    /// The generator `M_rho`.
    pub fn generator(rho: f64) -> Self {
        Self {
            m11: 0.0,
            m12: -rho,
            m21: rho,
            m22: -rho * rho,
        }
    }

    #[inline]
    pub fn apply(&self, a: f64, v: f64) -> (f64, f64) {
        (self.m11 * a + self.m12 * v, self.m21 * a + self.m22 * v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m11: self.m11 * s,
            m12: self.m12 * s,
            m21: self.m21 * s,
            m22: self.m22 * s,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            m11: self.m11 + other.m11,
            m12: self.m12 + other.m12,
            m21: self.m21 + other.m21,
            m22: self.m22 + other.m22,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    /// `c I + s (M_rho - mu I)` with `mu = -rho^2/2`.
    fn from_split(rho: f64, c: f64, s: f64) -> Self {
        let half = rho * rho / 2.0;
        Self {
            m11: c + s * half,
            m12: -s * rho,
            m21: s * rho,
            m22: c - s * half,
        }
    }
}

/// `exp(t M_rho)` as `exp(t mu) (cosh(t delta) I + t sinhc(t delta) (M - mu I))`
/// with `mu = -rho^2/2` and `delta^2 = rho^4/4 - rho^2`.
///
/// The form has no division by the eigenvalue gap, so it stays accurate
/// through the coalescence at `rho = 2`. Above `rho = 2` the hyperbolic
/// functions are recombined with the eigenvalues so that large `t rho^2`
/// neither overflows nor cancels.
pub fn mode_exponential(rho: f64, t: f64) -> Result<ModeMatrix> {
    require_frequency(rho)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative (got {t})")));
    }
    let mu = -rho * rho / 2.0;
    let delta_sq = rho * rho * (rho * rho / 4.0 - 1.0);
    let x = t * t * delta_sq;
    let (c, s) = if x.abs() < SERIES_THRESHOLD * SERIES_THRESHOLD {
        let decay = (t * mu).exp();
        let cosh = 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
        let sinhc = 1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0;
        (decay * cosh, decay * t * sinhc)
    } else if delta_sq < 0.0 {
        let omega = (-delta_sq).sqrt();
        let decay = (t * mu).exp();
        (decay * (t * omega).cos(), decay * (t * omega).sin() / omega)
    } else {
        let delta = delta_sq.sqrt();
        let slow = (t * (mu + delta)).exp();
        let fast = (t * (mu - delta)).exp();
        ((slow + fast) / 2.0, -slow * (-2.0 * t * delta).exp_m1() / (2.0 * delta))
    };
    Ok(ModeMatrix::from_split(rho, c, s))
}

/// Scalar `phi_k(z) = sum_n z^n / (n + k)!` for `k = 0, 1, 2`.
fn phi_scalar(k: usize, z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0 / factorial(k), 0.0);
        let mut sum = term;
        for n in 1..30 {
            term = term * z / (n + k) as f64;
            sum += term;
        }
        return sum;
    }
    let e = z.exp();
    match k {
        0 => e,
        1 => (e - 1.0) / z,
        2 => (e - 1.0 - z) / (z * z),
        _ => unreachable!("phi order"),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `phi_k(h M_rho)` for `k = 0, 1, 2`: the propagator and the two ETD2
/// weights, all of the form `f0 I + f1 h (M - mu I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtdCoefficients {
    pub propagator: ModeMatrix,
    pub phi1: ModeMatrix,
    pub phi2: ModeMatrix,
}

/// Evaluates `phi_k(h M_rho)` through the symmetric functions of the
/// eigenvalues `z_+-` of `h M_rho`. For moderate `|z|` the power series is
/// summed with real recurrences for `(z_+^n + z_-^n)/2` and the divided
/// differences `(z_+^n - z_-^n)/(z_+ - z_-)`, which are smooth through the
/// coalescence point. Larger `|z|` use closed forms in complex arithmetic.
pub fn etd_coefficients(rho: f64, h: f64) -> Result<EtdCoefficients> {
    require_frequency(rho)?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!("step must be positive (got {h})")));
    }
    let mu = -rho * rho / 2.0;
    let delta_sq = rho * rho * (rho * rho / 4.0 - 1.0);
    let delta = Complex64::new(delta_sq, 0.0).sqrt();
    let z_plus = (mu + delta) * h;
    let z_minus = (mu - delta) * h;
    let gap = 2.0 * h * delta.norm();
    let radius = z_plus.norm().max(z_minus.norm());

    let split = |k: usize| -> (f64, f64) {
        if radius <= 4.0 || gap < 1e-6 {
            series_split(k, h * mu, h * h * rho * rho)
        } else {
            let fp = phi_scalar(k, z_plus);
            let fm = phi_scalar(k, z_minus);
            let f0 = 0.5 * (fp + fm);
            let f1 = (fp - fm) / (z_plus - z_minus);
            (f0.re, f1.re)
        }
    };
    let build = |k: usize| {
        let (f0, f1) = split(k);
        ModeMatrix::from_split(rho, f0, f1 * h)
    };
    Ok(EtdCoefficients {
        propagator: mode_exponential(rho, h)?,
        phi1: build(1),
        phi2: build(2),
    })
}

/// `(f0, f1)` for `phi_k` from the series, where `half_sum = (z_+ + z_-)/2`
/// and `product = z_+ z_-`.
fn series_split(k: usize, half_sum: f64, product: f64) -> (f64, f64) {
    let sum = 2.0 * half_sum;
    let mut coeff = 1.0 / factorial(k);
    // e_n = (z+^n + z-^n)/2, d_n = (z+^{n+1} - z-^{n+1})/(z+ - z-)
    let (mut e_prev, mut e_cur) = (1.0, half_sum);
    let (mut d_prev, mut d_cur) = (1.0, sum);
    let mut f0 = coeff;
    let mut f1 = 0.0;
    for n in 1..80 {
        coeff /= (n + k) as f64;
        f0 += coeff * e_cur;
        f1 += coeff * d_prev;
        let e_next = sum * e_cur - product * e_prev;
        e_prev = e_cur;
        e_cur = e_next;
        let d_next = sum * d_cur - product * d_prev;
        d_prev = d_cur;
        d_cur = d_next;
    }
    (f0, f1)
}

/// Both sides of the high-frequency exponent identity
/// `-t (rho^2/2)(1 +- s) = -2t (1 -+ s)^{-1}`, `s = sqrt(1 - 4/rho^2)`.
pub fn hi_freq_identity_check(rho: f64, t: f64, branch: Branch) -> Result<(f64, f64)> {
    let s = hi_freq_root(rho, t)?;
    let sign = branch.sign();
    let lhs = -t * (rho * rho / 2.0) * (1.0 + sign * s);
    let rhs = -2.0 * t / (1.0 - sign * s);
    Ok((lhs, rhs))
}

/// The third form of the same exponent, `-t - (4t/rho^2)(1 -+ s)^{-2}`,
/// which separates the uniform `e^{-t}` factor.
pub fn hi_freq_exponent_split(rho: f64, t: f64, branch: Branch) -> Result<f64> {
    let s = hi_freq_root(rho, t)?;
    let denom = 1.0 - branch.sign() * s;
    Ok(-t - 4.0 * t / (rho * rho) / (denom * denom))
}

fn hi_freq_root(rho: f64, t: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 2.0) {
        return Err(Error::Domain(format!(
            "high-frequency identity needs rho > 2 (got {rho})"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative (got {t})")));
    }
    Ok((1.0 - 4.0 / (rho * rho)).sqrt())
}
