//! Weight spectra of channels and their classification.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::pauli::index_height;
use crate::stats::linear_fit;
use crate::DEFAULT_QUBIT_CAP;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightSpectrum {
    pub n: usize,
    /// `w[k]`: chi-diagonal mass at height `k`.
    pub w: Vec<f64>,
    pub e_total: f64,
    pub e_per_qubit: Vec<f64>,
    pub hs_noise: f64,
}

impl WeightSpectrum {
    /// Builds the spectrum from a chi diagonal indexed by base-4 Pauli index.
    pub fn from_chi_diagonal(n: usize, chi: &[f64]) -> Result<Self> {
        if chi.len() != 1usize << (2 * n) {
            return Err(Error::SizeMismatch { expected: 1 << (2 * n), found: chi.len() });
        }
        let mut w = vec![0.0; n + 1];
        let mut e_per_qubit = vec![0.0; n];
        for (v, &a) in chi.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            w[index_height(v, n)] += a;
            for (q, e) in e_per_qubit.iter_mut().enumerate() {
                if (v >> (2 * (n - 1 - q))) & 3 != 0 {
                    *e += a;
                }
            }
        }
        let e_total = w.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
        let trace: f64 = chi.iter().sum();
        // Minimum over operator-sum representations of the distance of the
        // coefficient array to that of the identity map.
        let hs_sq = 1.0 + trace - 2.0 * libm::sqrt(chi[0].max(0.0));
        Ok(Self { n, w, e_total, e_per_qubit, hs_noise: libm::sqrt(hs_sq.max(0.0)) })
    }

    /// Spectrum given directly by height weights, with per-qubit rates
    /// spread evenly (exact for permutation-invariant channels).
    pub fn from_height_weights(w: Vec<f64>) -> Self {
        let n = w.len().saturating_sub(1);
        let e_total: f64 = w.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
        let per = if n == 0 { 0.0 } else { e_total / n as f64 };
        Self { n, e_per_qubit: vec![per; n], hs_noise: f64::NAN, e_total, w }
    }

    pub fn total(&self) -> f64 {
        self.w.iter().sum()
    }

    /// `sum_{j >= k} w_j`.
    pub fn mass_at_or_above(&self, k: usize) -> f64 {
        self.w.iter().skip(k).sum()
    }

    pub fn max_qubit_rate(&self) -> f64 {
        self.e_per_qubit.iter().copied().fold(0.0, f64::max)
    }

    /// Mean height under the normalized weights.
    pub fn mean_height(&self) -> f64 {
        self.e_total / self.total()
    }
}

pub fn weight_spectrum(ch: &Channel) -> Result<WeightSpectrum> {
    if ch.n() > DEFAULT_QUBIT_CAP {
        return Err(Error::OverCap { what: "qubits for a weight spectrum", requested: ch.n(), cap: DEFAULT_QUBIT_CAP });
    }
    WeightSpectrum::from_chi_diagonal(ch.n(), &ch.chi_diagonal()?)
}

/// Every qubit's error rate is at most `eps`.
pub fn is_eps_noise(ch: &Channel, eps: f64) -> Result<bool> {
    Ok(weight_spectrum(ch)?.max_qubit_rate() <= eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumClass {
    pub devastating: bool,
    pub alarming: bool,
    pub powerlaw_exponent: Option<f64>,
    /// Fit quality of the log-log regression, when one was possible.
    pub r_squared: Option<f64>,
}

pub const DEVASTATING_FRACTION_PERCENT: usize = 74;
pub const ALARMING_MIN_R2: f64 = 0.9;
pub const ALARMING_MAX_EXPONENT: f64 = 4.0;

/// `ceil(0.74 n)` in exact integer arithmetic.
pub fn devastating_height(n: usize) -> usize {
    (DEVASTATING_FRACTION_PERCENT * n).div_ceil(100)
}

pub fn classify_spectrum(ws: &WeightSpectrum, eps: f64) -> SpectrumClass {
    let devastating = ws.mass_at_or_above(devastating_height(ws.n)) >= eps / 2.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        (2..=ws.n).filter(|&k| ws.w[k] > 0.0).map(|k| (libm::log(k as f64), libm::log(ws.w[k]))).unzip();
    let fit = if xs.len() >= 3 { linear_fit(&xs, &ys) } else { None };
    let (alarming, beta, r2) = match fit {
        Some(f) => {
            let beta = -f.slope;
            let ok = f.r_squared >= ALARMING_MIN_R2 && beta > 0.0 && beta <= ALARMING_MAX_EXPONENT;
            (ok, beta, Some(f.r_squared))
        }
        None => (false, f64::NAN, None),
    };
    SpectrumClass { devastating, alarming, powerlaw_exponent: alarming.then_some(beta), r_squared: r2 }
}
