use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample as sample_indices;
use rand::Rng;

use crate::channel::Channel;
use crate::error::{invalid, Result};
use crate::linalg::{apply_local_left, expm_hermitian, gates, random_unit_hermitian, CMatrix, DenseOperator};
use crate::noise::unitary_e_total;
use crate::noise::walk::WALK_QUBIT_CAP;

/// Operator family of one tiny factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TinyFamily {
    /// `R_X(+-delta)` on one qubit or `R_CX(+-delta)` on two.
    Rotation,
    /// `exp(-i delta H)` with `H` random Hermitian of spectral norm 1.
    HaarTiny,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SiteEntry {
    pub family: TinyFamily,
    pub size: usize,
    pub weight: f64,
}

/// Distribution `mu` over (family, subset size).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SiteDistribution {
    entries: Vec<SiteEntry>,
}

impl Default for SiteDistribution {
    fn default() -> Self {
        Self::with_rotation_fraction(0.5).expect("valid default")
    }
}

impl SiteDistribution {
    pub const MAX_SIZE: usize = 3;

    pub fn new(entries: Vec<SiteEntry>) -> Result<Self> {
        let d = Self { entries };
        d.validate()?;
        Ok(d)
    }

    /// Sizes 1, 2, 3 with probabilities 0.9, 0.09, 0.01; sizes 1 and 2 split
    /// between rotations (`fraction`) and Haar-tiny unitaries.
    pub fn with_rotation_fraction(fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(invalid(format!("rotation fraction {fraction} outside [0, 1]")));
        }
        let mut entries = Vec::new();
        for (size, p) in [(1usize, 0.9), (2, 0.09)] {
            entries.push(SiteEntry { family: TinyFamily::Rotation, size, weight: p * fraction });
            entries.push(SiteEntry { family: TinyFamily::HaarTiny, size, weight: p * (1.0 - fraction) });
        }
        entries.push(SiteEntry { family: TinyFamily::HaarTiny, size: 3, weight: 0.01 });
        Self::new(entries)
    }

    /// Point mass on one (family, size).
    pub fn single(family: TinyFamily, size: usize) -> Result<Self> {
        Self::new(vec![SiteEntry { family, size, weight: 1.0 }])
    }

    pub fn entries(&self) -> &[SiteEntry] {
        &self.entries
    }

    pub fn max_size(&self) -> usize {
        self.entries.iter().filter(|e| e.weight > 0.0).map(|e| e.size).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = 0.0;
        for e in &self.entries {
            if !(e.weight >= 0.0) || !e.weight.is_finite() {
                return Err(invalid(format!("site weight {} is not a probability", e.weight)));
            }
            if e.size == 0 || e.size > Self::MAX_SIZE {
                return Err(invalid(format!("site size {} outside [1, 3]", e.size)));
            }
            if e.family == TinyFamily::Rotation && e.size > 2 && e.weight > 0.0 {
                return Err(invalid("rotations act on one or two qubits"));
            }
            total += e.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("site weights sum to {total}")));
        }
        Ok(())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SiteEntry {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = self.entries[0];
        for e in &self.entries {
            if e.weight <= 0.0 {
                continue;
            }
            acc += e.weight;
            last = *e;
            if u < acc {
                return *e;
            }
        }
        last
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlsFactor {
    pub family: TinyFamily,
    pub targets: Vec<usize>,
    pub gate: DenseOperator,
    pub e_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlsSample {
    pub channel: Channel,
    pub factors: Vec<IlsFactor>,
    /// `sum_i e(T_i)`.
    pub factor_noise_sum: f64,
    /// `e(T)` of the composite.
    pub e_total: f64,
}

/// Product of `m` tiny unitaries on random qubit subsets drawn from `mu`.
/// With `mirror`, the inverses follow in reverse order, giving `2m`
/// factors whose product is the identity.
pub fn sample_ils<R: Rng + ?Sized>(
    n: usize,
    mu: &SiteDistribution,
    m: usize,
    delta: f64,
    mirror: bool,
    rng: &mut R,
) -> Result<IlsSample> {
    mu.validate()?;
    if m == 0 {
        return Err(invalid("ILS needs at least one factor"));
    }
    if !(delta.abs() <= core::f64::consts::PI) {
        return Err(invalid(format!("delta {delta} outside [-pi, pi]")));
    }
    if n > WALK_QUBIT_CAP || mu.max_size() > n {
        return Err(invalid(format!("ILS on {n} qubits with subsets up to {}", mu.max_size())));
    }
    let mut factors = Vec::with_capacity(if mirror { 2 * m } else { m });
    for _ in 0..m {
        let entry = mu.sample(rng);
        let targets = sample_indices(rng, n, entry.size).into_vec();
        let matrix: CMatrix = match (entry.family, entry.size) {
            (TinyFamily::Rotation, 1) => gates::rx(if rng.random_bool(0.5) { delta } else { -delta }),
            (TinyFamily::Rotation, _) => gates::rcx(if rng.random_bool(0.5) { delta } else { -delta }),
            (TinyFamily::HaarTiny, size) => expm_hermitian(&random_unit_hermitian(size, rng), delta),
        };
        let gate = DenseOperator::new(matrix)?;
        let e_total = unitary_e_total(&gate)?;
        factors.push(IlsFactor { family: entry.family, targets, gate, e_total });
    }
    if mirror {
        let inverses: Vec<IlsFactor> =
            factors.iter().rev().map(|f| IlsFactor { gate: f.gate.adjoint(), ..f.clone() }).collect();
        factors.extend(inverses);
    }
    let dim = 1usize << n;
    let mut u = CMatrix::identity(dim, dim);
    for f in &factors {
        apply_local_left(&mut u, f.gate.matrix(), &f.targets, n);
    }
    let u = DenseOperator::new(u)?;
    let e_total = unitary_e_total(&u)?;
    Ok(IlsSample {
        channel: Channel::unitary(u)?,
        factor_noise_sum: factors.iter().map(|f| f.e_total).sum(),
        factors,
        e_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::spectrum::weight_spectrum;

    #[test]
    fn mirrored_product_cancels() {
        let delta = 0.2f64;
        let mu = SiteDistribution::single(TinyFamily::Rotation, 1).unwrap();
        let s = sample_ils(3, &mu, 1, delta, true, &mut seeded(1)).unwrap();
        assert_eq!(s.factors.len(), 2);
        assert!(s.e_total < 1e-12);
        let expected = 2.0 * libm::sin(delta / 2.0).powi(2);
        assert!((s.factor_noise_sum - expected).abs() < 1e-14);
    }

    #[test]
    fn single_rotation_weight() {
        let delta = 0.4f64;
        let mu = SiteDistribution::single(TinyFamily::Rotation, 1).unwrap();
        let s = sample_ils(2, &mu, 1, delta, false, &mut seeded(2)).unwrap();
        let ws = weight_spectrum(&s.channel).unwrap();
        assert!((ws.w[1] - libm::sin(delta / 2.0).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn zero_angle_is_identity() {
        let s = sample_ils(4, &SiteDistribution::default(), 25, 0.0, false, &mut seeded(3)).unwrap();
        assert!(s.e_total < 1e-20);
    }

    #[test]
    fn default_mu() {
        let mu = SiteDistribution::default();
        let by_size = |k| mu.entries().iter().filter(|e| e.size == k).map(|e| e.weight).sum::<f64>();
        assert!((by_size(1) - 0.9).abs() < 1e-15);
        assert!((by_size(2) - 0.09).abs() < 1e-15);
        assert!((by_size(3) - 0.01).abs() < 1e-15);
        assert!(SiteDistribution::single(TinyFamily::Rotation, 3).is_err());
        assert!(sample_ils(2, &mu, 3, 0.1, false, &mut seeded(1)).is_err());
    }

    #[test]
    fn reproducible() {
        let mu = SiteDistribution::default();
        let a = sample_ils(4, &mu, 10, 0.1, false, &mut seeded(7)).unwrap();
        let b = sample_ils(4, &mu, 10, 0.1, false, &mut seeded(7)).unwrap();
        assert_eq!(a, b);
    }
}
