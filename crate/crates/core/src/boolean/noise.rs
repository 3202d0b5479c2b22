use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::BooleanFunction;
use crate::error::{check_probability, invalid, Result};
use crate::stats::Estimate;

/// Monte Carlo `E[f(x) f(y)]` with `x` uniform and `y` flipping each bit of
/// `x` independently with probability `delta`.
pub fn empirical_flip_correlation<R: Rng + ?Sized>(
    f: &BooleanFunction,
    delta: f64,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    check_probability("delta", delta)?;
    let n = f.n();
    let mask = (1usize << n) - 1;
    let mut sum = 0.0;
    for _ in 0..trials {
        let x = rng.random::<u64>() as usize & mask;
        let mut flips = 0usize;
        for i in 0..n {
            if rng.random::<f64>() < delta {
                flips |= 1 << i;
            }
        }
        sum += f64::from(f.eval(x) * f.eval(x ^ flips));
    }
    // Products are +-1, so the second moment equals the trial count.
    Ok(Estimate::from_sums(sum, trials as f64, trials))
}

fn check_repair(copies: u64, flip_p: f64) -> Result<()> {
    if copies % 2 == 0 {
        return Err(invalid(alloc::format!("majority repair needs an odd copy count, got {copies}")));
    }
    if !(0.0..0.5).contains(&flip_p) {
        return Err(invalid(alloc::format!("flip probability {flip_p} is not in [0, 1/2)")));
    }
    Ok(())
}

/// Fraction of trials in which majority decoding of `copies` independently
/// flipped copies returns the encoded bit.
pub fn majority_repair<R: Rng + ?Sized>(copies: u64, flip_p: f64, trials: u64, rng: &mut R) -> Result<Estimate> {
    check_repair(copies, flip_p)?;
    let binomial = Binomial::new(copies, flip_p).map_err(|e| invalid(alloc::format!("{e}")))?;
    let hits = (0..trials).filter(|_| binomial.sample(rng) <= copies / 2).count();
    Ok(Estimate::from_count(hits as u64, trials))
}

/// `P(Binomial(copies, flip_p) <= (copies - 1) / 2)`, summed in log space.
pub fn majority_repair_exact(copies: u64, flip_p: f64) -> Result<f64> {
    check_repair(copies, flip_p)?;
    if flip_p == 0.0 {
        return Ok(1.0);
    }
    let n = copies as f64;
    let (lp, lq) = (libm::log(flip_p), libm::log1p(-flip_p));
    let ln_fact_n = libm::lgamma(n + 1.0);
    let log_pmf = |k: f64| ln_fact_n - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0) + k * lp + (n - k) * lq;
    // The mode lies below the cut, so summing the upper tail is shorter and
    // loses nothing to cancellation when subtracted from one.
    let tail: f64 = (copies / 2 + 1..=copies).map(|k| libm::exp(log_pmf(k as f64))).sum();
    Ok(1.0 - tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClusterRule {
    Majority,
    RecMaj3,
}

impl ClusterRule {
    /// Spin-convention value on a bitmask input: bit set means spin `-1`.
    fn eval(self, x: u64, n: usize) -> i32 {
        match self {
            Self::Majority => {
                if 2 * (x.count_ones() as usize) < n {
                    1
                } else {
                    -1
                }
            }
            Self::RecMaj3 => {
                let mut level: alloc::vec::Vec<i32> = (0..n).map(|i| 1 - 2 * (x >> i & 1) as i32).collect();
                while level.len() > 1 {
                    level = level.chunks(3).map(|t| (t[0] + t[1] + t[2]).signum()).collect();
                }
                level[0]
            }
        }
    }

    fn check(self, n: usize) -> Result<()> {
        let ok = match self {
            Self::Majority => n % 2 == 1,
            Self::RecMaj3 => {
                let mut m = n;
                while m > 1 && m % 3 == 0 {
                    m /= 3;
                }
                m == 1 && n > 1
            }
        };
        if !ok || n > 63 {
            return Err(invalid(alloc::format!("cluster rule {self:?} cannot act on {n} spins")));
        }
        Ok(())
    }
}

/// With probability `delta` collapses `x` to the constant string agreeing
/// with `rule(x)`: all spins `+1` (mask 0) or all `-1`. Otherwise returns `x`.
pub fn cluster_noise<R: Rng + ?Sized>(x: u64, n: usize, delta: f64, rule: ClusterRule, rng: &mut R) -> Result<u64> {
    check_probability("delta", delta)?;
    rule.check(n)?;
    if rng.random::<f64>() >= delta {
        return Ok(x);
    }
    Ok(if rule.eval(x, n) == 1 { 0 } else { (1u64 << n) - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{majority, noise_stability, parity};
    use crate::rng::seeded;

    #[test]
    fn small_repair_oracle() {
        assert!((majority_repair_exact(3, 0.1).unwrap() - 0.972).abs() < 1e-12);
        assert_eq!(majority_repair_exact(101, 0.0).unwrap(), 1.0);
        let est = majority_repair(3, 0.0, 100, &mut seeded(1)).unwrap();
        assert_eq!(est.mean, 1.0);
        assert!(majority_repair(4, 0.1, 10, &mut seeded(1)).is_err());
        assert!(majority_repair(3, 0.5, 10, &mut seeded(1)).is_err());
    }

    #[test]
    fn flip_correlation_tracks_stability() {
        let mut rng = seeded(4);
        for f in [majority(3).unwrap(), parity(8).unwrap()] {
            let est = empirical_flip_correlation(&f, 0.1, 40_000, &mut rng).unwrap();
            assert!(est.within_sigmas(noise_stability(&f, 0.8), 3.0), "{est:?}");
        }
        let exact = empirical_flip_correlation(&parity(4).unwrap(), 0.0, 50, &mut rng).unwrap();
        assert_eq!(exact.mean, 1.0);
    }

    #[test]
    fn cluster_extremes() {
        let mut rng = seeded(2);
        assert_eq!(cluster_noise(0b10110, 5, 0.0, ClusterRule::Majority, &mut rng).unwrap(), 0b10110);
        // Three of five spins are -1.
        assert_eq!(cluster_noise(0b10110, 5, 1.0, ClusterRule::Majority, &mut rng).unwrap(), 0b11111);
        assert_eq!(cluster_noise(0b000_001_010, 9, 1.0, ClusterRule::RecMaj3, &mut rng).unwrap(), 0);
        assert!(cluster_noise(0, 4, 0.5, ClusterRule::Majority, &mut rng).is_err());
    }
}
