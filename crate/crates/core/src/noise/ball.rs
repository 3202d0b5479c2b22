use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::channel::Channel;
use crate::error::{invalid, Error, Result};

pub const BALL_QUBIT_CAP: usize = 8;

fn check_cap(n: usize) -> Result<()> {
    if n > BALL_QUBIT_CAP {
        return Err(Error::OverCap {
            what: "qubits for a random Pauli-ball channel",
            requested: n,
            cap: BALL_QUBIT_CAP,
        });
    }
    Ok(())
}

fn ball_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_cap(n)?;
    // A normalized Gaussian vector is uniform on the sphere.
    let mut t: Vec<f64> = (0..1usize << (2 * n)).map(|_| rng.sample(StandardNormal)).collect();
    let norm_sq: f64 = t.iter().map(|x| x * x).sum();
    for x in &mut t {
        *x = *x * *x / norm_sq;
    }
    Ok(t)
}

/// Pauli channel with probabilities `a_v = t_v^2`, `t` uniform on the unit
/// sphere of `R^{4^n}`.
pub fn sample_random_pauli_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Channel> {
    Channel::pauli_diagonal(n, ball_probabilities(n, rng)?)
}

/// Height weights of one draw, without building the channel.
///
/// The mass of a uniform point on the sphere over a block of `m`
/// coordinates is `X_m / sum_j X_j` with independent `X_m ~ chi^2(m)`, so
/// one chi-square draw per height replaces `4^n` Gaussians. The law matches
/// [`sample_random_pauli_channel`]; the random stream does not.
pub fn ball_height_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_cap(n)?;
    let mut binom = 1.0f64;
    let mut w = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n + 1 - k) as f64 / k as f64;
        }
        let dof = binom * libm::pow(3.0, k as f64);
        let chi = ChiSquared::new(dof).map_err(|e| invalid(alloc::format!("{e}")))?;
        w.push(chi.sample(rng));
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::spectrum::weight_spectrum;

    #[test]
    fn normalized_and_consistent() {
        let ch = sample_random_pauli_channel(1, &mut seeded(9)).unwrap();
        let total: f64 = ch.pauli_probabilities().unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        // Same law: compare mean height weights of both samplers.
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        let mut rng = seeded(10);
        let draws = 3000;
        for _ in 0..draws {
            let ws = weight_spectrum(&sample_random_pauli_channel(3, &mut rng).unwrap()).unwrap();
            let hw = ball_height_weights(3, &mut rng).unwrap();
            for k in 0..4 {
                a[k] += ws.w[k] / draws as f64;
                b[k] += hw[k] / draws as f64;
            }
        }
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 0.01, "{a:?} {b:?}");
        }
        assert!(ball_height_weights(9, &mut rng).is_err());
        assert!(sample_random_pauli_channel(9, &mut seeded(1)).is_err());
    }

    #[test]
    fn mean_height_is_three_quarters() {
        let mut rng = seeded(11);
        let n = 4;
        let draws = 2000;
        let mut mean = 0.0;
        for _ in 0..draws {
            let w = ball_height_weights(n, &mut rng).unwrap();
            mean += w.iter().enumerate().map(|(k, x)| k as f64 * x).sum::<f64>();
        }
        mean /= draws as f64;
        assert!((mean - 3.0).abs() < 0.05, "{mean}");
    }
}
