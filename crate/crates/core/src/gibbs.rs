//! Strictly positive distributions on `{-1,+1}^n` and damping of the
//! higher-degree parts of their energy.
//!
//! Index `x` encodes spin `i` in bit `i`, with a set bit meaning `-1`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::walsh::fwht;

pub const SPIN_CAP: usize = 16;
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinDistribution {
    n: usize,
    probs: Vec<f64>,
}

fn spin(x: usize, i: usize) -> f64 {
    if x >> i & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > SPIN_CAP {
        return Err(Error::OverCap { what: "spins", requested: n, cap: SPIN_CAP });
    }
    Ok(())
}

impl SpinDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        if probs.len() != 1usize << n {
            return Err(Error::SizeMismatch { expected: 1 << n, found: probs.len() });
        }
        if let Some(&p) = probs.iter().find(|&&p| !(p > 0.0)) {
            return Err(Error::NonPositiveProbability(p));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(invalid(alloc::format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { n, probs })
    }

    pub fn from_unnormalized(n: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        Self::new(n, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_n(n)?;
        Self::new(n, vec![1.0 / (1usize << n) as f64; 1usize << n])
    }

    /// Independent spins with `E[x_i] = means[i]`, each in `(-1, 1)`.
    pub fn product(means: &[f64]) -> Result<Self> {
        if means.iter().any(|m| !(m.abs() < 1.0)) {
            return Err(invalid("product-measure means must lie in (-1, 1)"));
        }
        let n = means.len();
        check_n(n)?;
        let probs = (0..1usize << n)
            .map(|x| means.iter().enumerate().map(|(i, m)| (1.0 + m * spin(x, i)) / 2.0).product())
            .collect();
        Self::from_unnormalized(n, probs)
    }

    /// `mu(x) ∝ exp(theta x_0 x_1)` on two spins.
    pub fn two_spin(theta: f64) -> Self {
        let w = (0..4).map(|x| libm::exp(theta * spin(x, 0) * spin(x, 1))).collect();
        Self::from_unnormalized(2, w).expect("two-spin weights are positive")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.probs.iter().enumerate().map(|(x, p)| p * spin(x, i)).sum()
    }

    /// Exact `Cov[x_i, x_j]`.
    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let means: Vec<f64> = (0..n).map(|i| self.mean(i)).collect();
        DMatrix::from_fn(n, n, |i, j| {
            let second: f64 = self.probs.iter().enumerate().map(|(x, p)| p * spin(x, i) * spin(x, j)).sum();
            second - means[i] * means[j]
        })
    }

    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, found: other.n });
        }
        Ok(0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Fourier coefficients of `H(x) = -log mu(x)`, with the constant term
/// dropped (it only sets the normalization).
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianDecomposition {
    n: usize,
    coeffs: Vec<f64>,
}

impl HamiltonianDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of `prod_{i in S} x_i`, indexed by subset mask.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree_component(&self, k: usize) -> Vec<f64> {
        self.coeffs.iter().enumerate().map(|(s, &c)| if s.count_ones() as usize == k { c } else { 0.0 }).collect()
    }

    /// Sum of squared coefficients per degree.
    pub fn degree_norms(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            out[s.count_ones() as usize] += c * c;
        }
        out
    }

    /// Gibbs distribution of `sum_k scale(k) H_k`.
    pub fn scaled_distribution(&self, scale: impl Fn(usize) -> f64) -> SpinDistribution {
        let mut energy: Vec<f64> =
            self.coeffs.iter().enumerate().map(|(s, c)| c * scale(s.count_ones() as usize)).collect();
        fwht(&mut energy);
        let floor = energy.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = energy.iter().map(|e| libm::exp(floor - e)).collect();
        let total: f64 = w.iter().sum();
        SpinDistribution { n: self.n, probs: w.into_iter().map(|x| x / total).collect() }
    }

    pub fn to_distribution(&self) -> SpinDistribution {
        self.scaled_distribution(|_| 1.0)
    }

    /// The product measure of the degree-one part alone.
    pub fn product_limit(&self) -> SpinDistribution {
        self.scaled_distribution(|k| if k == 1 { 1.0 } else { 0.0 })
    }
}

pub fn gibbs_decompose(mu: &SpinDistribution) -> HamiltonianDecomposition {
    let mut coeffs: Vec<f64> = mu.probs.iter().map(|p| -libm::log(*p)).collect();
    fwht(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    coeffs[0] = 0.0;
    HamiltonianDecomposition { n: mu.n, coeffs }
}

/// `c(k, t) = exp(-(k - 1) t)`.
pub fn default_schedule(k: usize, t: f64) -> f64 {
    libm::exp(-((k as f64) - 1.0) * t)
}

fn check_schedule(n: usize, t: f64, c: &dyn Fn(usize, f64) -> f64) -> Result<()> {
    for tt in [0.0, t / 2.0, t] {
        if c(1, tt) != 1.0 {
            return Err(invalid(alloc::format!("schedule has c(1, {tt}) = {}, not 1", c(1, tt))));
        }
    }
    for k in 1..=n {
        let (c0, ch, ct) = (c(k, 0.0), c(k, t / 2.0), c(k, t));
        if !(ct.is_finite() && ct >= 0.0 && ct <= ch && ch <= c0) {
            return Err(invalid(alloc::format!("schedule increases in t at degree {k}")));
        }
        if k > 1 && ct > c(k - 1, t) {
            return Err(invalid(alloc::format!("schedule increases in k at degree {k}")));
        }
    }
    Ok(())
}

/// Damps degree `k` of the energy by [`default_schedule`].
pub fn damp(mu: &SpinDistribution, t: f64) -> Result<SpinDistribution> {
    damp_with(mu, t, &default_schedule)
}

/// Damps degree `k` by `schedule(k, t)`; the schedule must fix degree one
/// and not increase in `k` or `t`.
pub fn damp_with(mu: &SpinDistribution, t: f64, schedule: &dyn Fn(usize, f64) -> f64) -> Result<SpinDistribution> {
    if !(t >= 0.0) {
        return Err(invalid(alloc::format!("damping time {t} is negative")));
    }
    check_schedule(mu.n, t, schedule)?;
    if t == 0.0 {
        return Ok(mu.clone());
    }
    Ok(gibbs_decompose(mu).scaled_distribution(|k| schedule(k, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn two_spin_decomposition_and_damping() {
        let mu = SpinDistribution::two_spin(1.0);
        let h = gibbs_decompose(&mu);
        assert!((h.coefficients()[3] + 1.0).abs() < 1e-12);
        assert!(h.coefficients()[1].abs() < 1e-12 && h.coefficients()[2].abs() < 1e-12);
        let cov = mu.covariance_matrix();
        assert!((cov[(0, 1)] - libm::tanh(1.0)).abs() < 1e-12);
        let damped = damp(&mu, libm::log(2.0)).unwrap();
        assert!((damped.covariance_matrix()[(0, 1)] - libm::tanh(0.5)).abs() < 1e-12);
    }

    #[test]
    fn uniform_has_no_energy() {
        let u = SpinDistribution::uniform(4).unwrap();
        assert!(gibbs_decompose(&u).coefficients().iter().all(|c| c.abs() < 1e-14));
        let cov = u.covariance_matrix();
        assert!((cov.clone() - DMatrix::identity(4, 4)).iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn round_trip_and_limit() {
        let mut rng = seeded(11);
        let w: Vec<f64> = (0..32).map(|_| rng.random::<f64>() + 0.05).collect();
        let mu = SpinDistribution::from_unnormalized(5, w).unwrap();
        let h = gibbs_decompose(&mu);
        assert!(h.to_distribution().max_abs_diff(&mu) < 1e-12);
        let far = damp(&mu, 20.0).unwrap();
        assert!(far.total_variation(&h.product_limit()).unwrap() < 1e-6);
        for i in 0..5 {
            let m = mu.mean(i);
            assert!((mu.covariance_matrix()[(i, i)] - (1.0 - m * m)).abs() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(SpinDistribution::new(1, vec![0.0, 1.0]).is_err());
        assert!(SpinDistribution::new(1, vec![0.5, 0.6]).is_err());
        assert!(SpinDistribution::new(17, vec![]).is_err());
        let mu = SpinDistribution::two_spin(0.3);
        assert!(damp(&mu, -1.0).is_err());
        assert!(damp_with(&mu, 1.0, &|k, t| libm::exp(-(k as f64) * t)).is_err());
        assert!(damp_with(&mu, 1.0, &|k, t| if k == 1 { 1.0 } else { libm::exp(t) }).is_err());
        assert!(damp_with(&mu, 1.0, &|k, _| if k == 1 { 1.0 } else { 0.5 }).is_ok());
    }
}
