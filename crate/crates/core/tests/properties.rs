use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use subhardy::hypothesis::{check_condition_i, check_condition_ii, check_shimorin};
use subhardy::{
    beta_from_weights, weights_from_beta, CoeffVector, DiagonalSpace, GramSpace, InnerProductSpace,
    OperatorOnSpace, Tolerances, WeightSequence,
};

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)), len)
}

fn beta_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.3f64..2.0, len)
}

// Monomials with G = XᴴX + I.
fn random_gram_space(dim: usize, entries: &[Complex64]) -> GramSpace {
    let x = DMatrix::from_column_slice(dim, dim, entries);
    let g = x.adjoint() * &x + DMatrix::identity(dim, dim);
    let basis = (0..dim).map(|k| CoeffVector::monomial(k, dim).unwrap()).collect();
    GramSpace::new(dim, basis, g).unwrap()
}

fn shifted(f: &CoeffVector, k: usize) -> CoeffVector {
    f.shift_by(k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_inner_product_is_hermitian(f in complex_vec(7), g in complex_vec(7), beta in beta_vec(7)) {
        let s = DiagonalSpace::from_beta(beta).unwrap();
        let (f, g) = (CoeffVector::new(f).unwrap(), CoeffVector::new(g).unwrap());
        let fg = s.inner(&f, &g).unwrap();
        let gf = s.inner(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
        let ff = s.inner(&f, &f).unwrap();
        prop_assert!(ff.im.abs() <= 1e-12 * ff.re.abs().max(1e-300));
        prop_assert!(ff.re >= 0.0);
    }

    #[test]
    fn gram_inner_product_is_hermitian(x in complex_vec(25), f in complex_vec(5), g in complex_vec(5)) {
        let s = random_gram_space(5, &x);
        let (f, g) = (CoeffVector::new(f).unwrap(), CoeffVector::new(g).unwrap());
        let fg = s.inner(&f, &g).unwrap();
        let gf = s.inner(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
        let ff = s.inner(&f, &f).unwrap();
        prop_assert!(ff.re > 0.0 || f.is_zero());
    }

    #[test]
    fn weight_round_trips(w in prop::collection::vec(0.1f64..3.0, 1..20), scale in 0.1f64..10.0) {
        let beta = beta_from_weights(&w).unwrap();
        let back = weights_from_beta(&beta);
        for (a, b) in w.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }
        let scaled = WeightSequence::new(beta.beta().iter().map(|b| b * scale).collect()).unwrap();
        let again = beta_from_weights(&weights_from_beta(&scaled)).unwrap();
        for (a, b) in beta.beta().iter().zip(again.beta()) {
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn monomial_norms_are_weights(beta in beta_vec(9)) {
        let s = DiagonalSpace::from_beta(beta.clone()).unwrap();
        for (n, b) in beta.iter().enumerate() {
            let z = CoeffVector::monomial(n, 9).unwrap();
            prop_assert!((s.norm(&z).unwrap() - b).abs() <= 4.0 * f64::EPSILON * b);
        }
    }

    #[test]
    fn adjoint_contract(x in complex_vec(36), u in complex_vec(6), v in complex_vec(6)) {
        let s = random_gram_space(6, &x);
        let op = OperatorOnSpace::new(s.clone()).unwrap();
        let (u, v) = (DVector::from_vec(u), DVector::from_vec(v));
        let lhs = s.inner_coords(&(op.matrix() * &u), &v);
        let rhs = s.inner_coords(&u, &(op.adjoint() * &v));
        let scale = s.norm_coords(&u) * s.norm_coords(&v) * (1.0 + op.adjoint().norm());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn basis_coordinates_are_unit_vectors(x in complex_vec(16)) {
        let s = random_gram_space(4, &x);
        for j in 0..4 {
            let c = s.coordinates(&s.basis()[j]).unwrap();
            for i in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((c[i] - Complex64::new(expected, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fast_paths_agree_with_generic(beta in beta_vec(8)) {
        let s = DiagonalSpace::from_beta(beta).unwrap();
        let fast = OperatorOnSpace::from_diagonal(&s).unwrap();
        let slow = fast.generic();
        let tol = Tolerances::default();
        for n in 1..4 {
            let a = fast.power_singular_values(n).unwrap();
            let b = slow.power_singular_values(n).unwrap();
            prop_assert!((a.sigma_min - b.sigma_min).abs() < 1e-10);
            prop_assert!((a.sigma_max - b.sigma_max).abs() < 1e-10);
        }
        let (f1, f2) = check_shimorin(&fast, &tol).unwrap();
        let (g1, g2) = check_shimorin(&slow, &tol).unwrap();
        prop_assert_eq!(f1.holds, g1.holds);
        prop_assert_eq!(f2.holds, g2.holds);
        prop_assert!((f1.min_eigenvalue - g1.min_eigenvalue).abs() < 1e-9);
        prop_assert!((f2.min_eigenvalue - g2.min_eigenvalue).abs() < 1e-9);
    }

    #[test]
    fn diagonal_spaces_satisfy_condition_ii(beta in beta_vec(24)) {
        let s = DiagonalSpace::from_beta(beta).unwrap();
        let op = OperatorOnSpace::from_diagonal(&s).unwrap();
        let r = check_condition_ii(&op.generic(), 8, &Tolerances::default()).unwrap();
        prop_assert!(r.holds, "residual {}", r.max_residual);
    }

    #[test]
    fn witnesses_violate_their_inequality(beta in beta_vec(8)) {
        let s = DiagonalSpace::from_beta(beta).unwrap();
        let op = OperatorOnSpace::from_diagonal(&s).unwrap();
        let tol = Tolerances::default();
        let n = |f: &CoeffVector| s.norm(f).unwrap();

        let c1 = check_condition_i(&op, Some(0.5), &tol).unwrap();
        if let Some(x) = &c1.witness {
            let r = n(&shifted(x, 1)) / n(x);
            prop_assert!(r > 1.0 + tol.bound || r < 0.5 - tol.bound);
        }
        prop_assert_eq!(c1.holds, c1.witness.is_none());

        let (s1, s2) = check_shimorin(&op, &tol).unwrap();
        if let Some(x) = &s1.witness {
            let lhs = n(&shifted(x, 2)).powi(2) + n(x).powi(2);
            let rhs = 2.0 * n(&shifted(x, 1)).powi(2);
            prop_assert!(lhs > rhs);
            prop_assert!((lhs - s1.lhs).abs() < 1e-9 && (rhs - s1.rhs).abs() < 1e-9);
        }
        prop_assert_eq!(s1.holds, s1.witness.is_none());
        if let Some((x, y)) = &s2.witness {
            let tx = shifted(x, 1);
            let sum = CoeffVector::new(tx.coeffs().iter().zip(y.coeffs()).map(|(a, b)| a + b).collect()).unwrap();
            let lhs = n(&sum).powi(2);
            let rhs = 2.0 * (n(x).powi(2) + n(&shifted(y, 1)).powi(2));
            prop_assert!(lhs > rhs);
        }
        prop_assert_eq!(s2.holds, s2.witness.is_none());
    }
}
