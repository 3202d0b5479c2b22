use approx::assert_abs_diff_eq;
use qnoise_core::linalg::{haar_unitary, CMatrix, C64};
use qnoise_core::noise::{baseline, BaselineKind};
use qnoise_core::qec::{
    builtin_code, exact_failure_probability, logical_error_rate, recovery_fidelity, twirl, ErrorModel,
};
use qnoise_core::rng::seeded;
use qnoise_core::{pauli_expand, weight_spectrum, Channel, DenseOperator, Pauli, PauliString};
use statrs::distribution::{Binomial, Discrete};

/// `tr(P_v^dagger A) / 2^n` by dense matrix products.
fn trace_coefficient(a: &CMatrix, v: &PauliString) -> C64 {
    let p = v.to_dense();
    (p.matrix().adjoint() * a).trace() / a.nrows() as f64
}

#[test]
fn fast_expansion_matches_dense_traces() {
    let mut rng = seeded(31);
    for n in 1..=3 {
        let u = haar_unitary(n, &mut rng);
        let c = pauli_expand(&u).unwrap();
        for v in 0..1usize << (2 * n) {
            let s = PauliString::from_index(n, v);
            let want = trace_coefficient(u.matrix(), &s);
            assert!((c.get(&s) - want).norm() < 1e-12, "n={n} v={v}");
        }
        assert_abs_diff_eq!(c.norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(c.resum().max_abs_diff(&u) < 1e-12);
    }
}

#[test]
fn depolarizing_spectrum_is_binomial() {
    let (n, p) = (5, 0.07);
    let ws = weight_spectrum(&baseline(BaselineKind::Depolarizing, n, p).unwrap()).unwrap();
    let binom = Binomial::new(p, n as u64).unwrap();
    for (k, w) in ws.w.iter().enumerate() {
        assert_abs_diff_eq!(*w, binom.pmf(k as u64), epsilon = 1e-14);
    }
    assert_abs_diff_eq!(ws.e_total, n as f64 * p, epsilon = 1e-13);
}

#[test]
fn haar_spectrum_matches_counting_on_average() {
    let n = 3;
    let mut rng = seeded(32);
    let draws = 400;
    let mut mean = vec![0.0; n + 1];
    for _ in 0..draws {
        let ws = weight_spectrum(&Channel::unitary(haar_unitary(n, &mut rng)).unwrap()).unwrap();
        mean.iter_mut().zip(&ws.w).for_each(|(m, w)| *m += w / draws as f64);
    }
    // E|tr(P U)|^2 = 1 for every Pauli string, so the mean is the counting measure.
    let binom = Binomial::new(0.75, n as u64).unwrap();
    for (k, m) in mean.iter().enumerate() {
        assert!((m - binom.pmf(k as u64)).abs() < 0.02, "height {k}: {m}");
    }
}

#[test]
fn steane_sampling_agrees_with_enumeration() {
    let code = builtin_code("steane7").unwrap();
    let p = 0.05;
    let model = ErrorModel::product(vec![[1.0 - p, p / 3.0, p / 3.0, p / 3.0]; 7]).unwrap();
    let exact = exact_failure_probability(&code, &model).unwrap();
    // Every weight-one error is corrected, so failures need two or more errors.
    let two_plus = 1.0 - (1.0 - p).powi(7) - 7.0 * p * (1.0 - p).powi(6);
    assert!(exact > 0.0 && exact <= two_plus + 1e-15);
    let mc = logical_error_rate(&code, &model, 200_000, &mut seeded(33)).unwrap();
    let sigma = (exact * (1.0 - exact) / 200_000.0).sqrt();
    assert!((mc.rate - exact).abs() <= 4.0 * sigma, "{} vs {exact}", mc.rate);
}

#[test]
fn correctable_channels_recover_perfectly() {
    let code = builtin_code("steane7").unwrap();
    let identity = recovery_fidelity(&code, &Channel::identity(7)).unwrap();
    assert_abs_diff_eq!(identity.fidelity.unwrap(), 1.0, epsilon = 1e-12);
    let x0 = PauliString::single(7, 0, Pauli::X).to_dense().scale(C64::new(0.4f64.sqrt(), 0.0));
    let keep = DenseOperator::identity(7).scale(C64::new(0.6f64.sqrt(), 0.0));
    let flip = Channel::from_kraus(vec![keep, x0]).unwrap();
    assert_abs_diff_eq!(recovery_fidelity(&code, &flip).unwrap().fidelity.unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn twirling_keeps_the_chi_diagonal() {
    let mut rng = seeded(34);
    let ch = Channel::unitary(haar_unitary(2, &mut rng)).unwrap();
    let t = twirl(&ch).unwrap();
    for (a, b) in ch.chi_diagonal().unwrap().iter().zip(t.chi_diagonal().unwrap()) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
    }
}
