use proptest::prelude::*;
use qnoise_core::boolean::{g_code_search, verify_unique_decoding, wht, BooleanFunction, SearchMode};
use qnoise_core::channel::{compose, embed};
use qnoise_core::linalg::haar_unitary;
use qnoise_core::locality::{n_eps_filter, truncate_m};
use qnoise_core::rng::seeded;
use qnoise_core::walsh::{fwht, xor_convolve};
use qnoise_core::{pauli_expand, weight_spectrum, Channel, PauliString};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fwht_twice_scales_by_length(values in proptest::collection::vec(-100i64..100, 16)) {
        let mut t = values.clone();
        fwht(&mut t);
        fwht(&mut t);
        prop_assert!(t.iter().zip(&values).all(|(a, b)| *a == 16 * b));
    }

    #[test]
    fn xor_convolution_preserves_mass(a in proptest::collection::vec(0.0f64..1.0, 8), b in proptest::collection::vec(0.0f64..1.0, 8)) {
        let c = xor_convolve(&a, &b);
        let lhs: f64 = c.iter().sum();
        let rhs = a.iter().sum::<f64>() * b.iter().sum::<f64>();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pauli_products_multiply_like_matrices(a in 0usize..64, b in 0usize..64) {
        let (p, q) = (PauliString::from_index(3, a), PauliString::from_index(3, b));
        let prod = p.mul(&q).unwrap().to_dense();
        let direct = p.to_dense().mul(&q.to_dense()).unwrap();
        prop_assert!(prod.max_abs_diff(&direct) < 1e-14);
        prop_assert_eq!(p.commutes_with(&q), {
            let qp = q.to_dense().mul(&p.to_dense()).unwrap();
            qp.max_abs_diff(&direct) < 1e-12
        });
    }

    #[test]
    fn unitary_spectra_are_normalized(seed in 0u64..1000) {
        let mut rng = seeded(seed);
        let u = Channel::unitary(haar_unitary(3, &mut rng)).unwrap();
        let ws = weight_spectrum(&u).unwrap();
        prop_assert!((ws.total() - 1.0).abs() < 1e-10);
        let s: f64 = ws.e_per_qubit.iter().sum();
        prop_assert!((s - ws.e_total).abs() < 1e-10);
    }

    #[test]
    fn embedding_commutes_with_composition(seed in 0u64..1000) {
        let mut rng = seeded(seed);
        let a = Channel::unitary(haar_unitary(1, &mut rng)).unwrap();
        let b = Channel::unitary(haar_unitary(1, &mut rng)).unwrap();
        let joint = compose(&[embed(&a, &[0], 2).unwrap(), embed(&b, &[1], 2).unwrap()]).unwrap();
        let ws = weight_spectrum(&joint).unwrap();
        let (wa, wb) = (weight_spectrum(&a).unwrap(), weight_spectrum(&b).unwrap());
        // Disjoint unitaries: height weights convolve.
        let expect = [wa.w[0] * wb.w[0], wa.w[0] * wb.w[1] + wa.w[1] * wb.w[0], wa.w[1] * wb.w[1]];
        prop_assert!(ws.w.iter().zip(expect).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn truncation_and_filter_shrink_norms(seed in 0u64..1000, k in 0usize..=3, eps in 0.0f64..1.0) {
        let mut rng = seeded(seed);
        let u = haar_unitary(3, &mut rng);
        let (t, r) = truncate_m(&u, k).unwrap();
        let kept = pauli_expand(&t).unwrap().norm_sqr();
        prop_assert!((kept + r * r - 1.0).abs() < 1e-10);
        let f = pauli_expand(&n_eps_filter(&u, eps).unwrap()).unwrap().norm_sqr();
        prop_assert!(f <= 1.0 + 1e-12);
    }

    #[test]
    fn parseval_for_any_table(bits in proptest::collection::vec(any::<bool>(), 64)) {
        let f = BooleanFunction::from_table(6, bits.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
        prop_assert!((wht(&f).total_weight() - 1.0).abs() < 1e-12);
        prop_assert_eq!(BooleanFunction::from_hex(6, &f.to_hex()).unwrap(), BooleanFunction::from_table(6, f.table().to_vec()).unwrap());
    }

    #[test]
    fn code_search_results_decode_uniquely(bits in proptest::collection::vec(any::<bool>(), 32)) {
        let g = BooleanFunction::from_table(5, bits.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
        let greedy = g_code_search(&g, SearchMode::Greedy).unwrap();
        let exact = g_code_search(&g, SearchMode::Exact).unwrap();
        prop_assert!(greedy.verified && exact.verified);
        prop_assert!(verify_unique_decoding(&g, &exact.codewords));
        prop_assert!(exact.size() >= greedy.size());
        prop_assert!(exact.size() <= exact.ratio_bound);
    }
}
