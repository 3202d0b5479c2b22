use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::code::StabilizerCode;
use crate::channel::{Channel, ChannelKind};
use crate::error::{invalid, Error, Result};
use crate::pauli::Pauli;
use crate::stats::{Estimate, Z95};

/// Distribution of Pauli errors over base-4 indices.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorModel {
    Table {
        n: usize,
        probs: Vec<f64>,
        cumulative: Vec<f64>,
    },
    /// Independent qubits, `(I, X, Y, Z)` probabilities each.
    Product(Vec<[f64; 4]>),
}

impl ErrorModel {
    pub fn from_probabilities(n: usize, probs: Vec<f64>) -> Result<Self> {
        // Validates length, signs and normalization.
        Channel::pauli_diagonal(n, probs.clone())?;
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self::Table { n, probs, cumulative })
    }

    /// Pauli-diagonal channels only; twirl anything else first.
    pub fn from_channel(ch: &Channel) -> Result<Self> {
        if ch.kind() != ChannelKind::PauliDiagonal {
            return Err(Error::NotPauliDiagonal);
        }
        Self::from_probabilities(ch.n(), ch.pauli_probabilities().expect("diagonal").to_vec())
    }

    pub fn product(per_qubit: Vec<[f64; 4]>) -> Result<Self> {
        for p in &per_qubit {
            let total: f64 = p.iter().sum();
            if p.iter().any(|x| !(*x >= 0.0)) || (total - 1.0).abs() > 1e-9 {
                return Err(invalid(format!("bad single-qubit distribution {p:?}")));
            }
        }
        Ok(Self::Product(per_qubit))
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Table { n, .. } => *n,
            Self::Product(q) => q.len(),
        }
    }

    pub fn probability(&self, v: usize) -> f64 {
        match self {
            Self::Table { probs, .. } => probs[v],
            Self::Product(q) => {
                let n = q.len();
                (0..n).map(|i| q[i][(v >> (2 * (n - 1 - i))) & 3]).product()
            }
        }
    }

    /// Draws a base-4 error index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Self::Table { cumulative, .. } => {
                let u: f64 = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
            }
            Self::Product(q) => q.iter().fold(0usize, |acc, p| {
                let u: f64 = rng.random();
                let d = if u < p[0] {
                    0
                } else if u < p[0] + p[1] {
                    1
                } else if u < p[0] + p[1] + p[2] {
                    2
                } else {
                    3
                };
                (acc << 2) | d
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QecResult {
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    /// Half-width of the 95% normal interval.
    pub ci95: f64,
    pub fidelity: Option<f64>,
}

impl QecResult {
    pub fn from_failures(failures: u64, trials: u64) -> Self {
        let e = Estimate::from_count(failures, trials);
        Self { trials, failures, rate: e.mean, ci95: Z95 * e.std_error, fidelity: None }
    }

    pub fn standard_error(&self) -> f64 {
        self.ci95 / Z95
    }
}

fn check_size(code: &StabilizerCode, model: &ErrorModel) -> Result<()> {
    if model.n() != code.n() {
        return Err(Error::SizeMismatch { expected: code.n(), found: model.n() });
    }
    Ok(())
}

impl StabilizerCode {
    /// One decoding trial: draws an error and returns its residual logical.
    pub fn sample_residual<R: Rng + ?Sized>(&self, model: &ErrorModel, rng: &mut R) -> Pauli {
        self.residual_of_index(model.sample(rng))
    }
}

/// Monte Carlo logical error rate.
pub fn logical_error_rate<R: Rng + ?Sized>(
    code: &StabilizerCode,
    model: &ErrorModel,
    trials: u64,
    rng: &mut R,
) -> Result<QecResult> {
    check_size(code, model)?;
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let failures = (0..trials).filter(|_| code.sample_residual(model, rng) != Pauli::I).count() as u64;
    Ok(QecResult::from_failures(failures, trials))
}

/// `sum_v P(v) [decoding v leaves a logical error]`, by enumeration.
pub fn exact_failure_probability(code: &StabilizerCode, model: &ErrorModel) -> Result<f64> {
    check_size(code, model)?;
    Ok((0..1usize << (2 * code.n()))
        .map(|v| {
            let p = model.probability(v);
            if p > 0.0 && code.residual_of_index(v) != Pauli::I {
                p
            } else {
                0.0
            }
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{baseline, BaselineKind};
    use crate::qec::builtin_code;
    use crate::rng::seeded;

    fn bit_flip(eps: f64, n: usize) -> ErrorModel {
        ErrorModel::product(alloc::vec![[1.0 - eps, eps, 0.0, 0.0]; n]).unwrap()
    }

    #[test]
    fn rep3_closed_form() {
        let code = builtin_code("rep3").unwrap();
        for eps in [0.02, 0.05, 0.1] {
            let exact = exact_failure_probability(&code, &bit_flip(eps, 3)).unwrap();
            let closed = 3.0 * eps * eps - 2.0 * eps * eps * eps;
            assert!((exact - closed).abs() < 1e-15);
        }
        let r = logical_error_rate(&code, &bit_flip(0.1, 3), 100_000, &mut seeded(5)).unwrap();
        assert!((r.rate - 0.028).abs() < 3.0 * r.standard_error(), "{r:?}");
    }

    #[test]
    fn zero_noise_never_fails() {
        for name in ["rep3", "steane7", "shor9"] {
            let code = builtin_code(name).unwrap();
            let model = bit_flip(0.0, code.n());
            let r = logical_error_rate(&code, &model, 1000, &mut seeded(1)).unwrap();
            assert_eq!(r.failures, 0);
        }
    }

    #[test]
    fn table_and_product_agree() {
        let code = builtin_code("steane7").unwrap();
        let ch = baseline(BaselineKind::Depolarizing, 7, 0.05).unwrap();
        let table = ErrorModel::from_channel(&ch).unwrap();
        let product = ErrorModel::product(alloc::vec![[0.95, 0.05 / 3.0, 0.05 / 3.0, 0.05 / 3.0]; 7]).unwrap();
        let a = exact_failure_probability(&code, &table).unwrap();
        let b = exact_failure_probability(&code, &product).unwrap();
        assert!((a - b).abs() < 1e-12);
        let r = logical_error_rate(&code, &table, 20_000, &mut seeded(9)).unwrap();
        assert!((r.rate - a).abs() < 3.0 * r.standard_error() + 1e-12);
    }

    #[test]
    fn non_diagonal_channels_rejected() {
        let ch = Channel::identity(3);
        assert!(matches!(ErrorModel::from_channel(&ch), Err(Error::NotPauliDiagonal)));
        let code = builtin_code("rep3").unwrap();
        assert!(logical_error_rate(&code, &bit_flip(0.1, 4), 10, &mut seeded(1)).is_err());
    }
}
