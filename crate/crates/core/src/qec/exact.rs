use alloc::vec;
use alloc::vec::Vec;

use super::code::StabilizerCode;
use super::sampling::QecResult;
use crate::channel::{Channel, ChannelKind};
use crate::error::{invalid, Error, Result};
use crate::linalg::{CVector, C64, ZERO};
use crate::pauli::{Pauli, PauliString};

/// Largest code length for the state-vector backend.
pub const EXACT_QUBIT_CAP: usize = 10;

fn project(psi: &mut [C64], p: &PauliString) {
    let mut image = psi.to_vec();
    p.apply_to_vector(&mut image);
    for (a, b) in psi.iter_mut().zip(image) {
        *a = (*a + b) * 0.5;
    }
}

fn normalize(psi: &mut [C64]) -> f64 {
    let norm = libm::sqrt(psi.iter().map(C64::norm_sqr).sum::<f64>());
    if norm > 0.0 {
        for a in psi.iter_mut() {
            *a /= norm;
        }
    }
    norm
}

/// Logical `|0>, |1>, |+>, |->, |+i>, |-i>` as state vectors.
pub fn logical_states(code: &StabilizerCode) -> Result<[Vec<C64>; 6]> {
    let n = code.n();
    if n > EXACT_QUBIT_CAP {
        return Err(Error::OverCap { what: "code length for state vectors", requested: n, cap: EXACT_QUBIT_CAP });
    }
    let dim = 1usize << n;
    let mut zero = None;
    for b in 0..dim {
        let mut psi = vec![ZERO; dim];
        psi[b] = C64::new(1.0, 0.0);
        for g in code.generators() {
            project(&mut psi, g);
        }
        project(&mut psi, code.logical_z());
        if normalize(&mut psi) > 1e-6 {
            zero = Some(psi);
            break;
        }
    }
    let zero = zero.ok_or_else(|| invalid("code space is empty"))?;
    let mut one = zero.clone();
    code.logical_x().apply_to_vector(&mut one);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let i = C64::new(0.0, 1.0);
    let combine = |c: C64| -> Vec<C64> { zero.iter().zip(&one).map(|(a, b)| (a + c * b) * s).collect() };
    let plus = combine(C64::new(1.0, 0.0));
    let minus = combine(C64::new(-1.0, 0.0));
    let plus_i = combine(i);
    let minus_i = combine(-i);
    Ok([zero.clone(), one.clone(), plus, minus, plus_i, minus_i])
}

/// Worst fidelity over the six logical Pauli eigenstates after `ch`
/// followed by ideal syndrome measurement and lookup correction.
pub fn recovery_fidelity(code: &StabilizerCode, ch: &Channel) -> Result<QecResult> {
    if ch.n() != code.n() {
        return Err(Error::SizeMismatch { expected: code.n(), found: ch.n() });
    }
    if code.n() > EXACT_QUBIT_CAP {
        return Err(Error::OverCap {
            what: "code length for exact recovery",
            requested: code.n(),
            cap: EXACT_QUBIT_CAP,
        });
    }
    let fidelity = if ch.kind() == ChannelKind::PauliDiagonal {
        pauli_fidelity(code, ch.pauli_probabilities().expect("diagonal"))
    } else {
        kraus_fidelity(code, ch)?
    };
    Ok(QecResult { trials: 0, failures: 0, rate: 1.0 - fidelity, ci95: 0.0, fidelity: Some(fidelity) })
}

/// Each error leaves a logical Pauli; `|0_L>` survives `I` and `Z`, `|+_L>`
/// survives `I` and `X`, `|+i_L>` survives `I` and `Y`.
fn pauli_fidelity(code: &StabilizerCode, probs: &[f64]) -> f64 {
    let mut mass = [0.0f64; 4];
    for (v, &a) in probs.iter().enumerate() {
        if a > 0.0 {
            mass[usize::from(code.residual_of_index(v).digit())] += a;
        }
    }
    let [i, x, y, z] = mass;
    (i + z).min(i + x).min(i + y)
}

fn kraus_fidelity(code: &StabilizerCode, ch: &Channel) -> Result<f64> {
    let n = code.n();
    let states = logical_states(code)?;
    let kraus = ch.kraus_operators()?;
    let gens = code.generators();
    let mut worst = f64::INFINITY;
    for psi in &states {
        let psi_v = CVector::from_column_slice(psi);
        let mut f = 0.0;
        for e in kraus.iter() {
            let phi: Vec<C64> = (e.matrix() * &psi_v).iter().copied().collect();
            // Split phi into syndrome components, one generator at a time.
            let mut parts: Vec<(usize, Vec<C64>)> = vec![(0, phi)];
            for (i, g) in gens.iter().enumerate() {
                let mut next = Vec::with_capacity(parts.len() * 2);
                for (s, v) in parts {
                    let mut image = v.clone();
                    g.apply_to_vector(&mut image);
                    let plus: Vec<C64> = v.iter().zip(&image).map(|(a, b)| (a + b) * 0.5).collect();
                    let minus: Vec<C64> = v.iter().zip(&image).map(|(a, b)| (a - b) * 0.5).collect();
                    next.push((s, plus));
                    next.push((s | (1 << i), minus));
                }
                parts = next;
            }
            for (s, mut v) in parts {
                if v.iter().all(|a| a.norm_sqr() < 1e-30) {
                    continue;
                }
                code.correction(s).apply_to_vector(&mut v);
                let amp: C64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                f += amp.norm_sqr();
            }
        }
        worst = worst.min(f);
    }
    debug_assert!(n <= EXACT_QUBIT_CAP);
    Ok(worst)
}

/// Pauli twirl: keeps the chi diagonal, drops the rest.
pub fn twirl(ch: &Channel) -> Result<Channel> {
    if ch.kind() == ChannelKind::PauliDiagonal {
        return Ok(ch.clone());
    }
    let chi = ch.chi_diagonal()?;
    let total: f64 = chi.iter().sum();
    Channel::pauli_diagonal(ch.n(), chi.into_iter().map(|a| a.max(0.0) / total).collect())
}

/// Residual logical of a given error, exposed for diagnostics.
pub fn residual_logical(code: &StabilizerCode, error: &PauliString) -> Result<Pauli> {
    Ok(code.syndrome_correct(error)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gates, DenseOperator};
    use crate::noise::{baseline, sample_block_model, BaselineKind, BlockFill};
    use crate::qec::builtin_code;
    use crate::rng::seeded;
    use crate::spectrum::weight_spectrum;

    #[test]
    fn logical_states_are_codewords() {
        for name in ["rep3", "steane7", "shor9"] {
            let code = builtin_code(name).unwrap();
            let states = logical_states(&code).unwrap();
            for psi in &states {
                for g in code.generators() {
                    let mut image = psi.clone();
                    g.apply_to_vector(&mut image);
                    let diff: f64 = image.iter().zip(psi).map(|(a, b)| (a - b).norm()).sum();
                    assert!(diff < 1e-12, "{name}");
                }
            }
            let overlap: C64 = states[0].iter().zip(&states[1]).map(|(a, b)| a.conj() * b).sum();
            assert!(overlap.norm() < 1e-12);
        }
    }

    #[test]
    fn identity_and_correctable_errors_give_unit_fidelity() {
        for name in ["rep3", "steane7", "shor9"] {
            let code = builtin_code(name).unwrap();
            let f = recovery_fidelity(&code, &Channel::identity(code.n())).unwrap();
            assert!((f.fidelity.unwrap() - 1.0).abs() < 1e-9, "{name}");
        }
        let code = builtin_code("rep3").unwrap();
        let flip = "IXI".parse::<PauliString>().unwrap().to_dense();
        let f = recovery_fidelity(&code, &Channel::unitary(flip).unwrap()).unwrap();
        assert!((f.fidelity.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fast_and_dense_paths_agree() {
        let code = builtin_code("rep3").unwrap();
        let ch = baseline(BaselineKind::Depolarizing, 3, 0.2).unwrap();
        let fast = recovery_fidelity(&code, &ch).unwrap().fidelity.unwrap();
        let kraus = Channel::from_kraus(ch.kraus_operators().unwrap().into_owned()).unwrap();
        let dense = recovery_fidelity(&code, &kraus).unwrap().fidelity.unwrap();
        assert!((fast - dense).abs() < 1e-12, "{fast} vs {dense}");
    }

    #[test]
    fn coherent_error_on_steane() {
        let code = builtin_code("steane7").unwrap();
        let u = DenseOperator::new(gates::cnot()).unwrap().embed(&[0, 3], 7).unwrap();
        let f = recovery_fidelity(&code, &Channel::unitary(u).unwrap()).unwrap().fidelity.unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&f));
        let mut rng = seeded(12);
        let s = sample_block_model(7, 2, 0.05, BlockFill::Haar, &mut rng).unwrap();
        let f = recovery_fidelity(&code, &s.to_channel().unwrap()).unwrap().fidelity.unwrap();
        assert!(f > 0.9 && f <= 1.0 + 1e-9, "{f}");
    }

    #[test]
    fn twirl_keeps_the_spectrum() {
        let delta = 0.7f64;
        let r = Channel::unitary(DenseOperator::new(gates::rx(delta)).unwrap()).unwrap();
        let t = twirl(&r).unwrap();
        let p = t.pauli_probabilities().unwrap();
        assert!((p[0] - libm::cos(delta / 2.0).powi(2)).abs() < 1e-12);
        assert!((p[1] - libm::sin(delta / 2.0).powi(2)).abs() < 1e-12);
        let again = twirl(&t).unwrap();
        assert_eq!(again, t);
        let a = weight_spectrum(&r).unwrap();
        let b = weight_spectrum(&t).unwrap();
        assert!((a.e_total - b.e_total).abs() < 1e-10);
    }
}
