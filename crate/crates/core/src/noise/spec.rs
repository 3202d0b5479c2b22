use alloc::format;
use alloc::vec::Vec;

use crate::channel::Channel;
use crate::error::{check_probability, invalid, Error, Result};
use crate::noise::{
    baseline, sample_block_model, sample_graph_walk, sample_ils, sample_random_blocksize_model,
    sample_random_pauli_channel, BaselineKind, BlockFill, BlockSizeDistribution, GraphSpec, SiteDistribution,
    TinyGeneratorSet,
};
use crate::rng::seeded;

/// Declarative description of one noise draw.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct NoiseModelSpec {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    pub model: NoiseModel,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields))]
pub enum NoiseModel {
    BlockModel {
        k: usize,
        t: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        fill: BlockFill,
    },
    RandomBlockSize {
        /// Unnormalized weights of block sizes `1, 2, ...`.
        d: Vec<f64>,
        strength: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        fill: BlockFill,
    },
    Ils {
        m: usize,
        delta: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        mu: SiteDistribution,
        #[cfg_attr(feature = "serde", serde(default))]
        mirror: bool,
    },
    GraphWalk {
        /// Complete graph with loops when absent.
        #[cfg_attr(feature = "serde", serde(default))]
        graph: Option<GraphSpec>,
        delta: f64,
        /// Stop once the recorded `e(T)` reaches `eps * n`.
        eps: f64,
        max_m: usize,
    },
    RandomPauliBall,
    Depolarizing {
        p: f64,
    },
    Dephasing {
        p: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseMetadata {
    None,
    Block { k: usize, partition: Vec<Vec<usize>>, lambdas: Vec<f64>, saturated: bool },
    Ils { factor_e_totals: Vec<f64>, factor_noise_sum: f64, e_total: f64 },
    Walk { m: usize, reached: bool, estimates: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSample {
    pub channel: Channel,
    pub metadata: NoiseMetadata,
}

impl NoiseModelSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        match &self.model {
            NoiseModel::BlockModel { k, t, .. } => {
                check_probability("t", *t)?;
                if *k == 0 || *k > n {
                    return Err(invalid(format!("block size {k} outside [1, {n}]")));
                }
            }
            NoiseModel::RandomBlockSize { d, strength, .. } => {
                check_probability("strength", *strength)?;
                if BlockSizeDistribution::from_unnormalized(d)?.max_size() > n {
                    return Err(invalid("block-size support exceeds n"));
                }
            }
            NoiseModel::Ils { m, delta, mu, .. } => {
                mu.validate()?;
                if *m == 0 || !(delta.abs() <= core::f64::consts::PI) {
                    return Err(invalid("ILS needs m >= 1 and |delta| <= pi"));
                }
            }
            NoiseModel::GraphWalk { graph, eps, .. } => {
                if let Some(g) = graph {
                    if g.n() != n {
                        return Err(Error::SizeMismatch { expected: n, found: g.n() });
                    }
                }
                if !(*eps >= 0.0) {
                    return Err(invalid("eps must be nonnegative"));
                }
            }
            NoiseModel::RandomPauliBall => {}
            NoiseModel::Depolarizing { p } | NoiseModel::Dephasing { p } => {
                check_probability("p", *p)?;
            }
        }
        Ok(())
    }

    /// Draws the channel; identical specs give identical channels.
    pub fn sample(&self) -> Result<NoiseSample> {
        self.validate()?;
        let n = self.n;
        let mut rng = seeded(self.seed);
        let block = |s: crate::noise::BlockSample| -> Result<NoiseSample> {
            Ok(NoiseSample {
                channel: s.to_channel()?,
                metadata: NoiseMetadata::Block {
                    k: s.k,
                    partition: s.partition,
                    lambdas: s.lambdas,
                    saturated: s.saturated,
                },
            })
        };
        match &self.model {
            NoiseModel::BlockModel { k, t, fill } => block(sample_block_model(n, *k, *t, *fill, &mut rng)?),
            NoiseModel::RandomBlockSize { d, strength, fill } => {
                let d = BlockSizeDistribution::from_unnormalized(d)?;
                block(sample_random_blocksize_model(n, &d, *strength, *fill, &mut rng)?)
            }
            NoiseModel::Ils { m, delta, mu, mirror } => {
                let s = sample_ils(n, mu, *m, *delta, *mirror, &mut rng)?;
                Ok(NoiseSample {
                    metadata: NoiseMetadata::Ils {
                        factor_e_totals: s.factors.iter().map(|f| f.e_total).collect(),
                        factor_noise_sum: s.factor_noise_sum,
                        e_total: s.e_total,
                    },
                    channel: s.channel,
                })
            }
            NoiseModel::GraphWalk { graph, delta, eps, max_m } => {
                let g = graph.clone().unwrap_or_else(|| GraphSpec::complete_with_loops(n));
                let s = sample_graph_walk(&g, &TinyGeneratorSet::new(*delta), eps * n as f64, *max_m, &mut rng)?;
                Ok(NoiseSample {
                    metadata: NoiseMetadata::Walk { m: s.m, reached: s.reached, estimates: s.estimates },
                    channel: s.channel,
                })
            }
            NoiseModel::RandomPauliBall => {
                Ok(NoiseSample { channel: sample_random_pauli_channel(n, &mut rng)?, metadata: NoiseMetadata::None })
            }
            NoiseModel::Depolarizing { p } => {
                Ok(NoiseSample { channel: baseline(BaselineKind::Depolarizing, n, *p)?, metadata: NoiseMetadata::None })
            }
            NoiseModel::Dephasing { p } => {
                Ok(NoiseSample { channel: baseline(BaselineKind::Dephasing, n, *p)?, metadata: NoiseMetadata::None })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_channel() {
        let spec =
            NoiseModelSpec { n: 3, seed: 42, model: NoiseModel::BlockModel { k: 2, t: 0.1, fill: BlockFill::Haar } };
        assert_eq!(spec.sample().unwrap(), spec.sample().unwrap());
        let other = NoiseModelSpec { seed: 43, ..spec.clone() };
        assert_ne!(spec.sample().unwrap(), other.sample().unwrap());
    }

    #[test]
    fn validation_errors() {
        let bad = NoiseModelSpec { n: 2, seed: 0, model: NoiseModel::Depolarizing { p: 2.0 } };
        assert!(bad.validate().is_err());
        let bad = NoiseModelSpec {
            n: 2,
            seed: 0,
            model: NoiseModel::RandomBlockSize { d: alloc::vec![1.0, 1.0, 1.0], strength: 0.1, fill: BlockFill::Haar },
        };
        assert!(bad.sample().is_err());
    }
}
