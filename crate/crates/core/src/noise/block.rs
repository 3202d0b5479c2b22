use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::{compose_capped, embed, Channel};
use crate::error::{check_probability, invalid, Result};
use crate::layered::LocalBlock;
use crate::linalg::{haar_unitary, DenseOperator, C64};
use crate::noise::unitary_spectrum;

/// How each block's channel is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BlockFill {
    /// `rho -> (1 - lambda) rho + lambda U rho U^dagger`, `U` Haar on the block.
    #[default]
    Haar,
    /// Uniform mixture of the non-identity Pauli strings on the block.
    Depolarizing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSample {
    pub n: usize,
    pub k: usize,
    pub partition: Vec<Vec<usize>>,
    pub blocks: Vec<LocalBlock>,
    /// Mixing weight chosen for each block.
    pub lambdas: Vec<f64>,
    /// Some block could not reach the requested rate even at `lambda = 1`.
    pub saturated: bool,
}

impl BlockSample {
    /// Tensor product of the block channels on all `n` qubits.
    pub fn to_channel(&self) -> Result<Channel> {
        let mut factors = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            factors.push(embed(&b.channel, &b.targets, self.n)?);
        }
        compose_capped(&factors, usize::MAX)
    }
}

/// Uniformly random permutation cut into consecutive blocks of `k`; the
/// last block may be smaller.
pub fn random_partition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm.chunks(k.max(1)).map(<[usize]>::to_vec).collect()
}

/// Random element of `L(k)` whose largest per-qubit rate is `t`.
pub fn sample_block_model<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    t: f64,
    fill: BlockFill,
    rng: &mut R,
) -> Result<BlockSample> {
    if k == 0 || k > n {
        return Err(invalid(format!("block size {k} outside [1, {n}]")));
    }
    check_probability("t", t)?;
    let partition = random_partition(n, k, rng);
    let mut blocks = Vec::with_capacity(partition.len());
    let mut lambdas = Vec::with_capacity(partition.len());
    let mut saturated = false;
    for targets in &partition {
        let (channel, lambda, sat) = match fill {
            BlockFill::Haar => haar_block(targets.len(), t, rng)?,
            BlockFill::Depolarizing => depolarizing_block(targets.len(), t)?,
        };
        saturated |= sat;
        lambdas.push(lambda);
        blocks.push(LocalBlock { targets: targets.clone(), channel });
    }
    Ok(BlockSample { n, k, partition, blocks, lambdas, saturated })
}

fn clamp_lambda(t: f64, per_unit: f64) -> (f64, bool) {
    if per_unit <= 0.0 {
        return (0.0, t > 0.0);
    }
    let lambda = t / per_unit;
    if lambda > 1.0 {
        (1.0, true)
    } else {
        (lambda, false)
    }
}

/// Per-qubit rates are linear in `lambda`, so the calibration is exact.
fn haar_block<R: Rng + ?Sized>(b: usize, t: f64, rng: &mut R) -> Result<(Channel, f64, bool)> {
    let u = haar_unitary(b, rng);
    let max_rate = unitary_spectrum(&u)?.max_qubit_rate();
    let (lambda, sat) = clamp_lambda(t, max_rate);
    let channel = if lambda == 0.0 {
        Channel::identity(b)
    } else if lambda == 1.0 {
        Channel::unitary(u)?
    } else {
        Channel::from_kraus(vec![
            DenseOperator::identity(b).scale(C64::new(libm::sqrt(1.0 - lambda), 0.0)),
            u.scale(C64::new(libm::sqrt(lambda), 0.0)),
        ])?
    };
    Ok((channel, lambda, sat))
}

fn depolarizing_block(b: usize, t: f64) -> Result<(Channel, f64, bool)> {
    let size = 1usize << (2 * b);
    let others = (size - 1) as f64;
    // Fraction of non-identity strings touching a given qubit.
    let per_unit = (3 * (size / 4)) as f64 / others;
    let (lambda, sat) = clamp_lambda(t, per_unit);
    let mut probs = vec![lambda / others; size];
    probs[0] = 1.0 - lambda;
    Ok((Channel::pauli_diagonal(b, probs)?, lambda, sat))
}

/// Distribution `D` of the block size; `probs[j]` is the probability of
/// size `j + 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockSizeDistribution {
    probs: Vec<f64>,
}

impl BlockSizeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(invalid("block-size probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("block-size probabilities sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn from_unnormalized(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(invalid("block-size weights must be nonnegative with a positive sum"));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn point(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("block size 0"));
        }
        let mut probs = vec![0.0; k];
        probs[k - 1] = 1.0;
        Self::new(probs)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Largest block size with positive probability.
    pub fn max_size(&self) -> usize {
        self.probs.iter().rposition(|&p| p > 0.0).map_or(0, |j| j + 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (j, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return j + 1;
            }
        }
        self.max_size()
    }
}

/// Draws `k ~ D`, then a block model with that `k`.
pub fn sample_random_blocksize_model<R: Rng + ?Sized>(
    n: usize,
    d: &BlockSizeDistribution,
    strength: f64,
    fill: BlockFill,
    rng: &mut R,
) -> Result<BlockSample> {
    if d.max_size() > n {
        return Err(invalid(format!("block-size support reaches {} on {n} qubits", d.max_size())));
    }
    let k = d.sample(rng);
    sample_block_model(n, k, strength, fill, rng)
}
