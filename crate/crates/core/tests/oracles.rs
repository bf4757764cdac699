//! Library results checked against independent computations in
//! `common` and against reference worked examples.

mod common;

use exterior_core::derivative::{demo, fd_gradient, omega_field_form};
use exterior_core::stokes::{dphi_example, phi_field_form};
use exterior_core::{
    hat, omega_gradient, FieldForm64, KForm64, KTensor64, Matrix64, MultiIndex, ScalarField64, SplitMix64,
};

use common::*;

fn key(v: &[usize]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

fn assert_terms(got: &KForm64, want: &[(&[usize], f64)]) {
    let got = dense_of_form(got);
    let want: Dense = want.iter().map(|(k, c)| (k.to_vec(), *c)).collect();
    assert_eq!(got, want);
}

#[test]
fn triple_wedge_matches_reference_output() {
    let f1 = KForm64::from_rows(&[vec![3, 4, 5], vec![4, 6, 1], vec![3, 2, 1]], &[1.0, 1.0, 1.0]).unwrap();
    let f2_rows: Vec<Vec<usize>> = (1..=6).map(|i| vec![i, i + 2]).collect();
    let f2 = KForm64::from_rows(&f2_rows, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    let f3 = KForm64::general(&(1..=8).collect::<Vec<_>>(), 2, &[1.0; 28]).unwrap();
    let left = f1.wedge(&f2).wedge(&f3);
    let right = f1.wedge(&f2.wedge(&f3));
    let reference: [(&[usize], f64); 8] = [
        (&[1, 2, 3, 4, 5, 7, 8], -5.0),
        (&[1, 3, 4, 5, 6, 7, 8], -2.0),
        (&[1, 2, 3, 5, 6, 7, 8], 11.0),
        (&[1, 2, 3, 4, 5, 6, 8], 1.0),
        (&[2, 3, 4, 5, 6, 7, 8], 6.0),
        (&[1, 2, 3, 4, 6, 7, 8], 2.0),
        (&[1, 2, 3, 4, 5, 6, 7], 1.0),
        (&[1, 2, 4, 5, 6, 7, 8], -5.0),
    ];
    assert_terms(&left, &reference);
    assert_terms(&right, &reference);
    assert!(left.sub(&right).unwrap().is_zero());
}

#[test]
fn form_evaluation_matches_expanded_tensor() {
    let mut rng = SplitMix64::new(11);
    for _ in 0..50 {
        let n = 3 + rng.below(5) as usize;
        let form = random_form(&mut rng, 3, n, 8);
        let frame = rng.normal_matrix::<f64>(n, 3);
        let direct = form.evaluate(&frame).unwrap();
        let via_tensor = eval_dense(&expand(&form), &frame);
        assert!(rel_err(direct, via_tensor) < 1e-10, "{direct} vs {via_tensor}");
        assert!(rel_err(direct, eval_form(&form, &frame)) < 1e-10);
        // the library's own expansion agrees with the oracle's
        assert!(max_diff(&dense_of_tensor(&form.expand().unwrap()), &expand(&form)) == 0.0);
    }
}

#[test]
fn tensor_evaluation_matches_dense_array() {
    // full n^k coefficient array, contracted slot by slot
    let mut rng = SplitMix64::new(12);
    for _ in 0..30 {
        let (k, n) = (1 + rng.below(3) as usize, 2 + rng.below(4) as usize);
        let t = random_tensor(&mut rng, k, n, 10);
        let mut array = vec![0.0; n.pow(k as u32)];
        for (key, c) in t.terms() {
            let flat = key.iter().fold(0, |acc, i| acc * n + (i - 1));
            array[flat] += c;
        }
        let frame = rng.normal_matrix::<f64>(n, k);
        let mut expected = 0.0;
        for (flat, c) in array.iter().enumerate() {
            let mut rest = flat;
            let mut prod = *c;
            for slot in (0..k).rev() {
                prod *= frame[(rest % n, slot)];
                rest /= n;
            }
            expected += prod;
        }
        assert!(rel_err(t.evaluate(&frame).unwrap(), expected) < 1e-12);
    }
}

#[test]
fn repeated_column_frames_vanish() {
    let mut rng = SplitMix64::new(13);
    for _ in 0..20 {
        let form = random_form(&mut rng, 3, 6, 10);
        let mut frame = rng.normal_matrix::<f64>(6, 3);
        let c = frame.column(0).to_vec();
        frame.set_column(2, &c);
        assert!(form.evaluate(&frame).unwrap().abs() < 1e-12);
    }
}

#[test]
fn wedge_matches_shuffle_formula_on_frames() {
    // (a ^ b)(v) = sum over (k, l)-shuffles of sgn * a(v_A) * b(v_B)
    let mut rng = SplitMix64::new(14);
    for _ in 0..40 {
        let n = 2 + rng.below(5) as usize;
        let k = 1 + rng.below(2) as usize;
        let l = 1 + rng.below(2) as usize;
        let a = random_form(&mut rng, k, n, 5);
        let b = random_form(&mut rng, l, n, 5);
        let frame = rng.normal_matrix::<f64>(n, k + l);
        let cols = |idx: &[usize]| Matrix64::from_fn(n, idx.len(), |i, j| frame[(i, idx[j])]);
        let mut expected = 0.0;
        for mask in 0u32..(1 << (k + l)) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let first: Vec<usize> = (0..k + l).filter(|j| mask >> j & 1 == 1).collect();
            let second: Vec<usize> = (0..k + l).filter(|j| mask >> j & 1 == 0).collect();
            let order: Vec<usize> = first.iter().chain(&second).copied().collect();
            expected += inversion_sign(&order) * eval_form(&a, &cols(&first)) * eval_form(&b, &cols(&second));
        }
        let got = a.wedge(&b).evaluate(&frame).unwrap();
        assert!(rel_err(got, expected) < 1e-10, "{got} vs {expected}");
    }
}

#[test]
fn pullback_identity_and_functoriality() {
    let mut rng = SplitMix64::new(15);
    for n in [3, 4] {
        for _ in 0..10 {
            let k = 1 + rng.below(n as u64 - 1) as usize;
            let omega = random_form(&mut rng, k, n, 4);
            assert_eq!(omega.pullback(&Matrix64::identity(n)).unwrap().zap(0.0), omega);
            let a = rng.normal_matrix::<f64>(n, n);
            let b = rng.normal_matrix::<f64>(n, n);
            let ab = a.matmul(&b).unwrap();
            let once = omega.pullback(&ab).unwrap();
            let twice = omega.pullback(&a).unwrap().pullback(&b).unwrap();
            assert!(max_diff(&dense_of_form(&once), &dense_of_form(&twice)) < 1e-8);
        }
    }
}

#[test]
fn pullback_coefficients_are_leibniz_minors() {
    let mut rng = SplitMix64::new(16);
    let m = rng.normal_matrix::<f64>(4, 4);
    let rows = matrix_rows(&m);
    let omega = KForm64::from_rows(&[vec![1, 3]], &[2.5]).unwrap();
    let p = omega.pullback(&m).unwrap();
    for (j1, j2) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
        let minor = vec![vec![rows[0][j1 - 1], rows[0][j2 - 1]], vec![rows[2][j1 - 1], rows[2][j2 - 1]]];
        assert!((p.coeff(&key(&[j1, j2])) - 2.5 * leibniz_det(&minor)).abs() < 1e-12);
    }
}

#[test]
fn contraction_examples() {
    let mut rng = SplitMix64::new(17);
    let omega = random_form(&mut rng, 3, 6, 12);
    let v = rng.normal_matrix::<f64>(6, 3);
    let full = omega.contract_matrix(&v, true).unwrap().value().unwrap();
    assert!(rel_err(full, eval_form(&omega, &v)) < 1e-10);
    let kept = omega.contract_matrix(&v, false).unwrap();
    assert!(rel_err(kept.value().unwrap(), full) < 1e-15);
    let none = omega.contract_matrix(&Matrix64::zeros(6, 0), true).unwrap();
    assert_eq!(none.value(), None);

    let dx12 = KForm64::elementary_wedge(&[1, 2]).unwrap();
    assert_eq!(dx12.contract(&[0.0, 1.0]).unwrap(), KForm64::elementary(1).unwrap().scale(-1.0));
}

#[test]
fn double_sum_exterior_derivative() {
    // d(sum f_j dx_I_j) = sum_j sum_a D_a f_j dx_a ^ dx_I_j, assembled row by
    // row and canonicalized by the constructor
    let phi = demo::phi::<f64>();
    let x = demo::point::<f64>();
    let mut rows = Vec::new();
    let mut coeffs = Vec::new();
    for (field, idx) in phi.terms() {
        let g = fd_gradient(field, &x, None).unwrap();
        for (a, d) in g.iter().enumerate() {
            let mut row = vec![a + 1];
            row.extend(idx.iter());
            rows.push(row);
            coeffs.push(*d);
        }
    }
    let oracle = KForm64::from_rows(&rows, &coeffs).unwrap();
    let fd = phi.numeric_only().exterior_d(&x).unwrap();
    assert!(max_diff(&dense_of_form(&fd), &dense_of_form(&oracle)) < 1e-8);
    let analytic = phi.exterior_d(&x).unwrap();
    assert!(max_diff(&dense_of_form(&analytic), &dense_of_form(&oracle)) < 1e-6);
}

#[test]
fn reference_derivative_values() {
    let x = demo::point::<f64>();
    let g = fd_gradient(&demo::f1::<f64>(), &x, None).unwrap();
    for (got, want) in g.iter().zip([24.0, 13.0, 35.0, 6.0]) {
        assert!((got - want).abs() < 1e-6);
    }
    let g2 = fd_gradient(&demo::f2::<f64>(), &x, None).unwrap();
    let c1 = 1f64.cos();
    for (got, want) in g2.iter().zip([48.0 + c1 + 1.0, 12.0, 8.0, 7.0]) {
        assert!((got - want).abs() < 1e-6);
    }
    for f in [demo::f1::<f64>(), demo::f2(), demo::f3()] {
        assert!(f.derivative_mismatch(&x).unwrap() < 1e-5);
    }
}

#[test]
fn constant_field_derivatives_vanish() {
    let c = ScalarField64::new(3, |_| 2.5);
    assert!(fd_gradient(&c, &[0.3, 1.0, -4.0], None).unwrap().iter().all(|v| v.abs() < 1e-9));
    let form = FieldForm64::new(1).with(c, &[2]).unwrap();
    assert!(form.exterior_d(&[0.3, 1.0, -4.0]).unwrap().zap(1e-8).is_zero());
}

#[test]
fn omega_gradient_reference_values() {
    let x: Vec<f64> = (1..=5).map(f64::from).collect();
    let df = omega_gradient(&x).unwrap();
    for (i, want) in [4.05e-5, -2.84e-5, 8.10e-6, 2.03e-5, -5.67e-5].into_iter().enumerate() {
        let got = df.coeff(&key(&[i + 1]));
        // printed to three significant figures
        assert!((got - want).abs() <= 0.006 * want.abs(), "{got} vs {want}");
    }
    let two = omega_gradient(&[1.0, 0.0]).unwrap();
    assert_eq!(two.coeff(&key(&[1])), -1.0);
    assert_eq!(two.coeff(&key(&[2])), -1.0);
}

#[test]
fn omega_gradient_is_the_numeric_exterior_derivative() {
    // d omega_n = omega_gradient ^ hat(n) up to FD error, computed from
    // the field form on a different code path
    let mut rng = SplitMix64::new(18);
    for n in 3..=6 {
        let x: Vec<f64> = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let numeric = omega_field_form::<f64>(n).unwrap().exterior_d(&x).unwrap();
        let closed = omega_gradient(&x).unwrap().wedge(&hat(n).unwrap());
        assert!(max_diff(&dense_of_form(&numeric), &dense_of_form(&closed)) < 1e-6);
    }
}

#[test]
fn dphi_example_is_the_numeric_exterior_derivative() {
    let mut rng = SplitMix64::new(19);
    for n in 2..=6 {
        let x: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let numeric = phi_field_form::<f64>(n).unwrap().exterior_d(&x).unwrap();
        let exact = dphi_example(&x).unwrap();
        assert!(max_diff(&dense_of_form(&numeric), &dense_of_form(&exact)) < 1e-4);
    }
}

#[test]
fn hat_picks_out_complementary_minors() {
    let mut rng = SplitMix64::new(20);
    let h = hat::<f64>(5).unwrap();
    let frame = rng.normal_matrix::<f64>(5, 4);
    let rows = matrix_rows(&frame);
    let expected: f64 = (0..5)
        .map(|skip| {
            let minor: Vec<Vec<f64>> = (0..5).filter(|&r| r != skip).map(|r| rows[r].clone()).collect();
            leibniz_det(&minor)
        })
        .sum();
    assert!(rel_err(h.evaluate(&frame).unwrap(), expected) < 1e-12);
}

#[test]
fn tensor_alt_and_product_reference_examples() {
    let s1 = KTensor64::from_rows(&[vec![1, 2], vec![2, 3], vec![3, 4]], &[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(dense_of_tensor(&s1.alt().unwrap()), alt(&dense_of_tensor(&s1), 2));
    let s2 = KTensor64::from_rows(&[vec![1], vec![5]], &[4.0, -1.0]).unwrap();
    assert_eq!(dense_of_tensor(&s1.tensor_product(&s2)), tensor_product(&dense_of_tensor(&s1), &dense_of_tensor(&s2)));
}
