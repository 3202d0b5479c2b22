//! Community elections: `a` communities of `b` voters each receive uniform
//! private signals; a community whose internal lead is decisive votes as a
//! bloc, otherwise every member votes their own signal.

use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{check_probability, invalid, Result};
use crate::stats::Estimate;

/// Smallest achievable lead `L >= 1` with `P(lead >= L) <= q` for `b`
/// uniform signals, where lead is `#(+1) - #(-1)`. `None` means no lead is
/// ever decisive. Tails are compared exactly in integer arithmetic.
pub fn decisive_threshold(b: usize, q: f64) -> Result<Option<usize>> {
    if b == 0 {
        return Err(invalid("community size must be positive"));
    }
    if !(q > 0.0 && q < 0.5) {
        return Err(invalid(alloc::format!("q = {q} is not in (0, 1/2)")));
    }
    // q = mantissa * 2^exp exactly.
    let bits = q.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let (mantissa, exp) = if raw_exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), raw_exp - 1075)
    };
    // tail / 2^b <= mantissa * 2^exp  <=>  tail * 2^{-exp} <= mantissa * 2^b.
    let rhs = BigUint::from(mantissa) << b;
    let shift = usize::try_from(-exp).map_err(|_| invalid("q too large"))?;
    let mut binom = BigUint::from(1u32);
    let mut tail = BigUint::from(0u32);
    let mut best = None;
    // Walk k = b, b - 1, ... accumulating the upper tail; lead = 2k - b.
    for k in (0..=b).rev() {
        if k < b {
            binom = binom * (k + 1) / (b - k);
        }
        tail += &binom;
        let lead = 2 * k as i64 - b as i64;
        if lead < 1 {
            break;
        }
        if (&tail << shift) <= rhs {
            best = Some(lead as usize);
        } else {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElectionSpec {
    pub a: usize,
    pub b: usize,
    pub q: f64,
    /// Probability that a member of a decisive community follows the bloc.
    pub influence_fraction: f64,
    threshold: Option<usize>,
}

impl ElectionSpec {
    pub fn new(a: usize, b: usize, q: f64) -> Result<Self> {
        Self::with_influence(a, b, q, 1.0)
    }

    pub fn with_influence(a: usize, b: usize, q: f64, influence_fraction: f64) -> Result<Self> {
        if a == 0 || (a * b) % 2 == 0 {
            return Err(invalid(alloc::format!("electorate a*b = {} must be odd", a * b)));
        }
        check_probability("influence_fraction", influence_fraction)?;
        let threshold = decisive_threshold(b, q)?;
        Ok(Self { a, b, q, influence_fraction, threshold })
    }

    pub fn n(&self) -> usize {
        self.a * self.b
    }

    pub fn threshold(&self) -> Option<usize> {
        self.threshold
    }

    /// Votes for given signals (`+1`/`-1`, community-major order).
    pub fn votes<R: Rng + ?Sized>(&self, signals: &[i8], rng: &mut R) -> Result<Vec<i8>> {
        if signals.len() != self.n() {
            return Err(crate::error::Error::SizeMismatch { expected: self.n(), found: signals.len() });
        }
        let mut votes = signals.to_vec();
        let Some(l) = self.threshold else {
            return Ok(votes);
        };
        for block in votes.chunks_mut(self.b) {
            let lead: i64 = block.iter().map(|&s| i64::from(s)).sum();
            if lead.unsigned_abs() as usize >= l {
                let side = lead.signum() as i8;
                for v in block.iter_mut() {
                    if *v != side && (self.influence_fraction >= 1.0 || rng.random::<f64>() < self.influence_fraction) {
                        *v = side;
                    }
                }
            }
        }
        Ok(votes)
    }

    pub fn outcome_from_signals<R: Rng + ?Sized>(&self, signals: Vec<i8>, rng: &mut R) -> Result<ElectionOutcome> {
        let votes = self.votes(&signals, rng)?;
        let sum = vote_sum(&votes);
        Ok(ElectionOutcome { signals, votes, winner: sum.signum() as i8, gap: sum.unsigned_abs() })
    }
}

fn vote_sum(votes: &[i8]) -> i64 {
    votes.iter().map(|&v| i64::from(v)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionOutcome {
    pub signals: Vec<i8>,
    pub votes: Vec<i8>,
    pub winner: i8,
    pub gap: u64,
}

pub fn uniform_signals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let word = rng.random::<u64>();
        let take = (n - out.len()).min(64);
        out.extend((0..take).map(|i| if word >> i & 1 == 0 { 1i8 } else { -1 }));
    }
    out
}

pub fn simulate<R: Rng + ?Sized>(spec: &ElectionSpec, rng: &mut R) -> ElectionOutcome {
    let signals = uniform_signals(spec.n(), rng);
    spec.outcome_from_signals(signals, rng).expect("signal length matches the electorate")
}

fn flip_each<R: Rng + ?Sized>(values: &mut [i8], p: f64, rng: &mut R) {
    for v in values.iter_mut() {
        if rng.random::<f64>() < p {
            *v = -*v;
        }
    }
}

/// `E[winner(s) winner(s')]`, with `s'` flipping each signal with
/// probability `delta`. Winners are symmetric, so this is their correlation.
pub fn signal_sensitivity<R: Rng + ?Sized>(
    spec: &ElectionSpec,
    delta: f64,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(invalid(alloc::format!("delta = {delta} is not in [0, 1/2]")));
    }
    let mut sum = 0.0;
    for _ in 0..trials {
        let first = simulate(spec, rng);
        let mut noisy = first.signals.clone();
        flip_each(&mut noisy, delta, rng);
        let second = spec.outcome_from_signals(noisy, rng)?;
        sum += f64::from(first.winner * second.winner);
    }
    Ok(Estimate::from_sums(sum, trials as f64, trials))
}

/// Probability that flipping each recorded vote with probability
/// `miscount` reverses the winner.
pub fn count_stability<R: Rng + ?Sized>(
    spec: &ElectionSpec,
    miscount: f64,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if !(0.0..0.5).contains(&miscount) {
        return Err(invalid(alloc::format!("miscount fraction {miscount} is not in [0, 1/2)")));
    }
    let mut reversals = 0u64;
    for _ in 0..trials {
        let mut out = simulate(spec, rng);
        flip_each(&mut out.votes, miscount, rng);
        if vote_sum(&out.votes).signum() as i8 != out.winner {
            reversals += 1;
        }
    }
    Ok(Estimate::from_count(reversals, trials))
}

/// Mean of `|#votes(+1) - #votes(-1)|`.
pub fn mean_gap<R: Rng + ?Sized>(spec: &ElectionSpec, trials: u64, rng: &mut R) -> Estimate {
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..trials {
        let g = simulate(spec, rng).gap as f64;
        s += g;
        s2 += g * g;
    }
    Estimate::from_sums(s, s2, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    /// Direct oracle: binomial tail counts in u128.
    fn threshold_oracle(b: usize, q: f64) -> Option<usize> {
        let choose = |k: usize| (0..k).fold(1u128, |acc, i| acc * (b - i) as u128 / (i + 1) as u128);
        (1..=b).filter(|l| (b + l) % 2 == 0).find(|&l| {
            let tail: u128 = ((b + l) / 2..=b).map(choose).sum();
            (tail as f64) / libm::pow(2.0, b as f64) <= q
        })
    }

    #[test]
    fn thresholds() {
        assert_eq!(decisive_threshold(9, 0.1).unwrap(), Some(5));
        assert_eq!(decisive_threshold(1, 0.4).unwrap(), None);
        // All nine agree has probability 1/512.
        assert_eq!(decisive_threshold(9, 1.0 / 512.0).unwrap(), Some(9));
        assert_eq!(decisive_threshold(9, 0.9 / 512.0).unwrap(), None);
        assert!(decisive_threshold(9, 0.5).is_err());
        for b in 1..60 {
            for q in [0.01, 0.05, 0.1, 0.177, 0.3, 0.49] {
                assert_eq!(decisive_threshold(b, q).unwrap(), threshold_oracle(b, q), "b={b} q={q}");
            }
        }
    }

    #[test]
    fn unanimity_and_pass_through() {
        let spec = ElectionSpec::new(3, 5, 0.1).unwrap();
        let out = spec.outcome_from_signals(alloc::vec![-1; 15], &mut seeded(0)).unwrap();
        assert_eq!((out.winner, out.gap), (-1, 15));
        let single = ElectionSpec::new(1, 9, 0.1).unwrap();
        let s = alloc::vec![1, 1, 1, 1, 1, -1, -1, -1, -1];
        assert_eq!(single.votes(&s, &mut seeded(0)).unwrap(), s);
        let strong = alloc::vec![1, 1, 1, 1, 1, 1, 1, -1, -1];
        assert_eq!(single.votes(&strong, &mut seeded(0)).unwrap(), alloc::vec![1; 9]);
        assert!(ElectionSpec::new(2, 5, 0.1).is_err());
    }

    #[test]
    fn negating_signals_negates_winner() {
        let spec = ElectionSpec::new(5, 7, 0.1).unwrap();
        let mut rng = seeded(3);
        for _ in 0..200 {
            let out = simulate(&spec, &mut rng);
            let neg: Vec<i8> = out.signals.iter().map(|s| -s).collect();
            let mirrored = spec.outcome_from_signals(neg, &mut rng).unwrap();
            assert_eq!(mirrored.winner, -out.winner);
            assert_eq!(mirrored.gap, out.gap);
        }
    }

    #[test]
    fn noise_limits() {
        let spec = ElectionSpec::new(9, 9, 0.1).unwrap();
        let mut rng = seeded(5);
        assert_eq!(signal_sensitivity(&spec, 0.0, 200, &mut rng).unwrap().mean, 1.0);
        let half = signal_sensitivity(&spec, 0.5, 4000, &mut rng).unwrap();
        assert!(half.within_sigmas(0.0, 4.0));
        assert_eq!(count_stability(&spec, 0.0, 200, &mut rng).unwrap().mean, 0.0);
    }
}
