use alloc::vec;
use alloc::vec::Vec;

use super::BooleanFunction;
use crate::walsh::fwht;

/// Coefficients `f^(S)`, indexed by subset mask `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierExpansion {
    n: usize,
    coeffs: Vec<f64>,
}

pub fn wht(f: &BooleanFunction) -> FourierExpansion {
    let mut coeffs: Vec<f64> = f.table().iter().map(|&v| f64::from(v)).collect();
    fwht(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierExpansion { n: f.n(), coeffs }
}

impl FourierExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, subset: usize) -> f64 {
        self.coeffs[subset]
    }

    /// `W_k = sum_{|S| = k} f^(S)^2` for `k = 0..=n`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Values `f(x) = sum_S f^(S) chi_S(x)`.
    pub fn inverse(&self) -> Vec<f64> {
        let mut values = self.coeffs.clone();
        fwht(&mut values);
        values
    }

    pub fn noise_stability(&self, rho: f64) -> f64 {
        self.level_weights().iter().enumerate().map(|(k, w)| w * libm::pow(rho, k as f64)).sum()
    }
}

/// `sum_S rho^|S| f^(S)^2`.
pub fn noise_stability(f: &BooleanFunction, rho: f64) -> f64 {
    wht(f).noise_stability(rho)
}

/// Level weights of recursive majority of threes at depth `d`, from the
/// composition rule for level-weight polynomials of block compositions of a
/// balanced function: `P_{d+1}(z) = P_1(P_d(z))` with `P_1(z) = 3z/4 + z^3/4`.
pub fn rec_maj3_level_weights(d: usize) -> Vec<f64> {
    // Coefficients of P_d in z, starting from P_0(z) = z.
    let mut p = vec![0.0, 1.0];
    for _ in 0..d {
        let cube = poly_mul(&poly_mul(&p, &p), &p);
        let mut next = vec![0.0; cube.len()];
        for (k, c) in p.iter().enumerate() {
            next[k] += 0.75 * c;
        }
        for (k, c) in cube.iter().enumerate() {
            next[k] += 0.25 * c;
        }
        p = next;
    }
    p
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{bent_ip, majority, parity, rec_maj3};

    #[test]
    fn maj3_coefficients() {
        let e = wht(&majority(3).unwrap());
        for s in [1, 2, 4] {
            assert!((e.coefficient(s) - 0.5).abs() < 1e-15);
        }
        assert!((e.coefficient(7) + 0.5).abs() < 1e-15);
        let w = e.level_weights();
        assert!((w[1] - 0.75).abs() < 1e-15 && (w[3] - 0.25).abs() < 1e-15);
        assert!((e.noise_stability(0.8) - 0.728).abs() < 1e-12);
    }

    #[test]
    fn parity_and_bent() {
        let e = wht(&parity(5).unwrap());
        assert!((e.coefficient(31).abs() - 1.0).abs() < 1e-15);
        assert!((noise_stability(&parity(5).unwrap(), 0.7) - 0.7f64.powi(5)).abs() < 1e-12);
        let b = wht(&bent_ip(4).unwrap());
        assert!(b.coefficients().iter().all(|c| (c * c - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn recursion_matches_transform_at_depth_two() {
        let direct = wht(&rec_maj3(9).unwrap()).level_weights();
        let recursive = rec_maj3_level_weights(2);
        assert_eq!(direct.len(), recursive.len());
        for (a, b) in direct.iter().zip(&recursive) {
            assert!((a - b).abs() < 1e-12);
        }
        let deep: f64 = rec_maj3_level_weights(3).iter().sum();
        assert!((deep - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_restores_table() {
        let f = rec_maj3(9).unwrap();
        let back = wht(&f).inverse();
        for (v, b) in f.table().iter().zip(&back) {
            assert_eq!(f64::from(*v), *b);
        }
    }
}
