//! Products of layers, each layer a tensor product of channels on disjoint
//! qubit blocks.
//!
//! Composite Kraus lists of such products grow as the product of the block
//! Kraus counts, far beyond what fits in memory at `n = 8`. The chi
//! diagonal is instead accumulated by a depth-first walk over Kraus tuples,
//! applying each local operator in place and expanding one product at a
//! time.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{compose_capped, embed, Channel, ChannelKind, DensityMatrix};
use crate::error::{invalid, Error, Result};
use crate::expand::pauli_expand;
use crate::linalg::{apply_local_left, validate_targets, CMatrix, DenseOperator, C64, ONE};
use crate::spectrum::WeightSpectrum;

/// Largest number of Kraus tuples the streaming spectrum will visit.
pub const TUPLE_CAP: u64 = 1 << 20;
const SCALAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlock {
    pub targets: Vec<usize>,
    pub channel: Channel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredChannel {
    n: usize,
    layers: Vec<Vec<LocalBlock>>,
}

enum LocalOp {
    Scalar(C64),
    Gate(CMatrix),
}

struct Step<'a> {
    targets: &'a [usize],
    ops: Vec<LocalOp>,
}

impl LayeredChannel {
    pub fn new(n: usize) -> Self {
        Self { n, layers: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<LocalBlock>] {
        &self.layers
    }

    /// Appends a layer applied after all existing ones. Blocks must be
    /// pairwise disjoint.
    pub fn push_layer(&mut self, blocks: Vec<LocalBlock>) -> Result<()> {
        let mut seen: Vec<usize> = Vec::new();
        for b in &blocks {
            validate_targets(&b.targets, self.n)?;
            if b.targets.len() != b.channel.n() {
                return Err(Error::SizeMismatch { expected: b.channel.n(), found: b.targets.len() });
            }
            for &t in &b.targets {
                if seen.contains(&t) {
                    return Err(Error::DuplicateQubit(t));
                }
                seen.push(t);
            }
        }
        self.layers.push(blocks);
        Ok(())
    }

    /// Number of Kraus tuples of the composite (saturating).
    pub fn tuple_count(&self) -> u64 {
        self.layers.iter().flatten().fold(1u64, |acc, b| acc.saturating_mul(b.channel.kraus_count() as u64))
    }

    fn is_pauli(&self) -> bool {
        self.layers.iter().flatten().all(|b| b.channel.kind() == ChannelKind::PauliDiagonal)
    }

    fn embedded_factors(&self) -> Result<Vec<Channel>> {
        let mut out = Vec::new();
        for b in self.layers.iter().flatten() {
            out.push(embed(&b.channel, &b.targets, self.n)?);
        }
        if out.is_empty() {
            out.push(Channel::identity(self.n));
        }
        Ok(out)
    }

    /// Dense composite, compressed whenever the Kraus count passes `cap`.
    pub fn to_channel(&self, kraus_cap: usize) -> Result<Channel> {
        compose_capped(&self.embedded_factors()?, kraus_cap)
    }

    /// Applies each block in order without forming the composite.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut state = rho.clone();
        for b in self.layers.iter().flatten() {
            state = embed(&b.channel, &b.targets, self.n)?.apply(&state)?;
        }
        Ok(state)
    }

    pub fn chi_diagonal(&self) -> Result<Vec<f64>> {
        if self.is_pauli() {
            return self.to_channel(usize::MAX)?.chi_diagonal();
        }
        let tuples = self.tuple_count();
        if tuples > TUPLE_CAP {
            return Err(Error::OverCap {
                what: "Kraus tuples for a streamed spectrum",
                requested: tuples as usize,
                cap: TUPLE_CAP as usize,
            });
        }
        let mut steps = Vec::new();
        for b in self.layers.iter().flatten() {
            let kraus = b.channel.kraus_operators()?;
            let ops = kraus
                .iter()
                .filter(|e| e.normalized_hs_norm() > SCALAR_TOL)
                .map(|e| match e.scalar_multiple_of_identity(SCALAR_TOL) {
                    Some(s) => LocalOp::Scalar(s),
                    None => LocalOp::Gate(e.matrix().clone()),
                })
                .collect();
            steps.push(Step { targets: &b.targets, ops });
        }
        let dim = 1usize << self.n;
        let mut chi = vec![0.0; dim * dim];
        let start = CMatrix::identity(dim, dim);
        self.walk(&steps, 0, &start, ONE, &mut chi)?;
        Ok(chi)
    }

    fn walk(&self, steps: &[Step<'_>], depth: usize, current: &CMatrix, scalar: C64, chi: &mut [f64]) -> Result<()> {
        let Some(step) = steps.get(depth) else {
            let weight = scalar.norm_sqr();
            let c = pauli_expand(&DenseOperator::new(current.clone())?)?;
            for (acc, a) in chi.iter_mut().zip(c.as_slice()) {
                *acc += weight * a.norm_sqr();
            }
            return Ok(());
        };
        for op in &step.ops {
            match op {
                LocalOp::Scalar(s) => self.walk(steps, depth + 1, current, scalar * s, chi)?,
                LocalOp::Gate(g) => {
                    let mut next = current.clone();
                    apply_local_left(&mut next, g, step.targets, self.n);
                    self.walk(steps, depth + 1, &next, scalar, chi)?;
                }
            }
        }
        Ok(())
    }

    pub fn weight_spectrum(&self) -> Result<WeightSpectrum> {
        if self.layers.is_empty() {
            return Err(invalid("layered channel has no layers"));
        }
        WeightSpectrum::from_chi_diagonal(self.n, &self.chi_diagonal()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use crate::rng::seeded;
    use crate::spectrum::weight_spectrum;

    fn mix(u: DenseOperator, lambda: f64) -> Channel {
        let k = u.n();
        Channel::from_kraus(vec![
            DenseOperator::identity(k).scale(C64::new((1.0 - lambda).sqrt(), 0.0)),
            u.scale(C64::new(lambda.sqrt(), 0.0)),
        ])
        .unwrap()
    }

    #[test]
    fn streamed_spectrum_matches_dense_composite() {
        let mut rng = seeded(8);
        let n = 4;
        let mut lc = LayeredChannel::new(n);
        lc.push_layer(vec![
            LocalBlock { targets: vec![0, 2], channel: mix(haar_unitary(2, &mut rng), 0.3) },
            LocalBlock { targets: vec![3, 1], channel: mix(haar_unitary(2, &mut rng), 0.1) },
        ])
        .unwrap();
        lc.push_layer(vec![
            LocalBlock { targets: vec![1, 0], channel: mix(haar_unitary(2, &mut rng), 0.2) },
            LocalBlock { targets: vec![2], channel: mix(haar_unitary(1, &mut rng), 0.4) },
        ])
        .unwrap();
        let streamed = lc.weight_spectrum().unwrap();
        let dense = weight_spectrum(&lc.to_channel(4096).unwrap()).unwrap();
        for (a, b) in streamed.w.iter().zip(&dense.w) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((streamed.total() - 1.0).abs() < 1e-12);
        let rho = DensityMatrix::basis(n, 5);
        let a = lc.apply(&rho).unwrap();
        let b = lc.to_channel(4096).unwrap().apply(&rho).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn overlapping_blocks_rejected() {
        let mut lc = LayeredChannel::new(3);
        let one = Channel::identity(1);
        let err = lc.push_layer(vec![
            LocalBlock { targets: vec![1], channel: one.clone() },
            LocalBlock { targets: vec![1], channel: one },
        ]);
        assert!(matches!(err, Err(Error::DuplicateQubit(1))));
    }
}
