use num_complex::Complex64;
use subhardy::catalog::{self, random_monotone_beta};
use subhardy::hypothesis::check_condition_i;
use subhardy::structure::{check_closedness, deflate, detect_vanishing_order, verify_contraction, verify_decomposition};
use subhardy::{
    beta_from_weights, extract_generator, AnalysisOptions, CoeffVector, DiagonalSpace, Error, HypothesisReport,
    OperatorOnSpace, Tolerances,
};

fn run(op: &OperatorOnSpace) -> (HypothesisReport, subhardy::Result<subhardy::StructureReport>) {
    let opts = AnalysisOptions::default();
    let hyp = HypothesisReport::evaluate(op, &opts).unwrap();
    let s = extract_generator(op, &hyp, &opts);
    (hyp, s)
}

#[test]
fn random_monotone_spaces_have_generator_one() {
    for seed in 0..10 {
        let beta = random_monotone_beta(seed, 32, 0.2).unwrap();
        let op = OperatorOnSpace::from_diagonal(&DiagonalSpace::new(beta.clone())).unwrap();
        let (hyp, s) = run(&op);
        assert!(hyp.theorem_hypotheses_hold());
        let s = s.unwrap();
        assert_eq!(s.b.degree(), Some(0));
        assert!((s.b[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for (w, expected) in s.shift_weights.iter().zip(beta.shift_weights()) {
            assert!((w - expected).abs() < 1e-12);
        }
        assert!(s.closedness.consistent);
    }
}

#[test]
fn blaschke_model_is_isometric() {
    let op = catalog::builtin("blaschke-model", 32).unwrap().operator().unwrap();
    let (_, s) = run(&op);
    let s = s.unwrap();
    let zero = Complex64::new(0.5, 0.0);
    let b = catalog::blaschke_coeffs(&[zero], catalog::blaschke_length(&[zero])).unwrap();
    for k in 0..16 {
        assert!((s.b[k] - b[k]).norm() < 1e-10, "coefficient {k}");
    }
    assert!(s.generator_norms.iter().all(|n| (n - 1.0).abs() < 1e-10));
    assert!(s.contraction.identity_residual < 1e-10, "{}", s.contraction.identity_residual);
}

#[test]
fn deflation_keeps_verdicts() {
    let space = match catalog::builtin("vanishing-order", 32).unwrap() {
        catalog::Space::Gram(g) => g,
        catalog::Space::Diagonal(_) => unreachable!(),
    };
    assert_eq!(detect_vanishing_order(&space), 2);
    let inner = deflate(&space, 2).unwrap();
    let outer = OperatorOnSpace::new(space).unwrap();
    let inner = OperatorOnSpace::new(inner).unwrap();
    let (a, s) = run(&outer);
    let (b, _) = run(&inner);
    assert_eq!(a.cond_i.holds, b.cond_i.holds);
    assert_eq!(a.cond_ii.holds, b.cond_ii.holds);
    assert!((a.cond_i.delta_max - b.cond_i.delta_max).abs() < 1e-12);
    let s = s.unwrap();
    assert_eq!(s.vanishing_order, 2);
    assert_eq!(s.b.order(), Some(2));
}

#[test]
fn breaker_is_refused() {
    let op = catalog::builtin("cond2-breaker", 12).unwrap().operator().unwrap();
    let (hyp, s) = run(&op);
    assert!(hyp.cond_i.holds && !hyp.cond_ii.holds);
    assert!(hyp.cond_ii.max_residual > 0.1);
    assert!(hyp.cond_ii.witness.is_some());
    assert!(matches!(s, Err(Error::HypothesesNotVerified)));
    // the decomposition genuinely breaks
    let d = verify_decomposition(&op, 1, &Tolerances::default()).unwrap();
    assert!(d.residual > 1e-3);
}

#[test]
fn weights_rebuild_the_space() {
    let op = catalog::builtin("paper-n3", 40).unwrap().operator().unwrap();
    let (hyp, s) = run(&op);
    let s = s.unwrap();
    let rebuilt = DiagonalSpace::new(beta_from_weights(&s.shift_weights).unwrap());
    let op2 = OperatorOnSpace::from_diagonal(&rebuilt).unwrap();
    let c = check_condition_i(&op2, None, &Tolerances::default()).unwrap();
    assert!((c.delta_max - hyp.cond_i.delta_max).abs() < 1e-12);
}

#[test]
fn contraction_and_closedness_inputs() {
    let op = catalog::builtin("paper-alternating", 24).unwrap().operator().unwrap();
    let tol = Tolerances::default();
    let zero = CoeffVector::zeros(24).unwrap();
    assert!(matches!(verify_contraction(&op, &zero, 3, 1, &tol), Err(Error::ZeroGenerator)));
    let one = CoeffVector::monomial(0, 24).unwrap();
    let c = check_closedness(&op, &one, 8, 1e-2, &tol).unwrap();
    assert_eq!(c.c_low, 1.0 / 16.0);
    assert!(c.consistent);
}
