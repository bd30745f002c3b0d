use std::f64::consts::TAU;

use cliffordlab::harmonics::{
    ambient_harmonicity_residual, evaluate, evaluate_profile, monomial_norm_sq,
    monomial_supnorm_ratio, orthonormality_defect, orthonormality_defect_quadrature, sup_norm,
    HarmonicSpec, SupNormParams,
};
use cliffordlab::hopf::HopfPoint;
use cliffordlab::quadrature::QuadratureGrid;
use cliffordlab::rudin_shapiro::Branch;
use cliffordlab::Error;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

fn ratio_of(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn spec_rejects_out_of_range_index() {
    assert!(HarmonicSpec::new(4, 4, Branch::P).is_ok());
    assert!(matches!(
        HarmonicSpec::new(4, 5, Branch::P),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn monomial_norms_match_the_factorial_ratio() {
    let cases = [(1u32, 0u32, 1i64, 2i64), (2, 1, 1, 6), (4, 2, 1, 30), (3, 3, 1, 4)];
    for (n, j, num, den) in cases {
        let norm = monomial_norm_sq(n, j).unwrap();
        let exact = norm.exact.expect("small degrees carry the exact value");
        assert_eq!(exact, ratio_of(num, den), "({n},{j})");
        let expected_ln = (num as f64 / den as f64).ln();
        assert!((norm.ln - expected_ln).abs() <= 1e-13, "({n},{j}) log field");
    }
    assert!(monomial_norm_sq(64, 30).unwrap().exact.is_some());
    assert!(monomial_norm_sq(65, 30).unwrap().exact.is_none());
    assert!(monomial_norm_sq(65, 30).unwrap().ln.is_finite());
    assert!(matches!(
        monomial_norm_sq(3, 4),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn evaluate_matches_hand_expansion_at_degree_one() {
    // P sign pattern at length 2 is [1, 1]; with k = 0 all phases are 1, so
    // the function is sqrt(1-rho) e^{i theta2} + sqrt(rho) e^{i theta1}.
    let spec = HarmonicSpec::new(1, 0, Branch::P).unwrap();
    let p = HopfPoint::new(0.25, TAU / 6.0, TAU / 14.0).unwrap();
    let expected = 0.75f64.sqrt() * Complex64::from_polar(1.0, p.theta2)
        + 0.25f64.sqrt() * Complex64::from_polar(1.0, p.theta1);
    let got = evaluate(&spec, &p);
    assert!((got - expected).norm() <= 1e-15, "got {got}, expected {expected}");
}

#[test]
fn evaluate_matches_hand_expansion_at_degree_two() {
    // Q sign pattern at length 3 is [1, 1, -1]; k = 1 twists term j by
    // e^{2 pi i j/3}.
    let spec = HarmonicSpec::new(2, 1, Branch::Q).unwrap();
    let rho = 0.3;
    let p = HopfPoint::new(rho, 1.1, 2.7).unwrap();
    let w = |j: f64| Complex64::from_polar(1.0, TAU * j / 3.0);
    let expected = (1.0 - rho) * w(0.0) * Complex64::from_polar(1.0, 2.0 * p.theta2)
        + (2.0 * rho * (1.0 - rho)).sqrt()
            * w(1.0)
            * Complex64::from_polar(1.0, p.theta1 + p.theta2)
        - rho * w(2.0) * Complex64::from_polar(1.0, 2.0 * p.theta1);
    let got = evaluate(&spec, &p);
    assert!((got - expected).norm() <= 1e-15, "got {got}, expected {expected}");
}

#[test]
fn evaluate_has_unit_modulus_at_the_poles() {
    for branch in [Branch::P, Branch::Q] {
        for (n, k) in [(1u32, 1u32), (7, 3), (40, 0)] {
            let spec = HarmonicSpec::new(n, k, branch).unwrap();
            for rho in [0.0, 1.0] {
                let p = HopfPoint::new(rho, 0.9, 1.7).unwrap();
                let m = evaluate(&spec, &p).norm();
                assert!((m - 1.0).abs() <= 1e-14, "N={n} rho={rho}: |value| = {m}");
            }
        }
    }
}

#[test]
fn profile_agrees_with_pointwise_evaluation() {
    let spec = HarmonicSpec::new(3, 2, Branch::Q).unwrap();
    let rho = 0.3;
    let m = 16;
    let profile = evaluate_profile(&spec, rho, m).unwrap();
    assert_eq!(profile.len(), m);
    for (i, &g) in profile.iter().enumerate() {
        let phi = TAU * i as f64 / m as f64;
        let p = HopfPoint::new(rho, phi, 0.0).unwrap();
        let direct = evaluate(&spec, &p);
        assert!((g - direct).norm() <= 1e-13, "grid point {i}");
    }
}

#[test]
fn profile_rejects_coarse_grids() {
    let spec = HarmonicSpec::new(3, 0, Branch::P).unwrap();
    assert!(matches!(
        evaluate_profile(&spec, 0.5, 15),
        Err(Error::InvalidArgument(_))
    ));
    assert!(evaluate_profile(&spec, 0.5, 16).is_ok());
}

#[test]
fn sup_norm_reproduces_small_degree_maxima() {
    let params = SupNormParams::default();

    // Degree 1: both coefficients are +1, so the modulus peaks at
    // sqrt(rho) + sqrt(1-rho) with aligned angles, giving sqrt(2) at rho = 1/2.
    let (sup1, arg1) = sup_norm(&HarmonicSpec::new(1, 0, Branch::P).unwrap(), &params);
    assert!((sup1 - 2f64.sqrt()).abs() <= 1e-8, "sup at degree 1: {sup1}");
    assert!((arg1.rho - 0.5).abs() <= 5e-3, "argmax rho: {}", arg1.rho);

    // Degree 2, signs [1, 1, 1]: the aligned maximum is 1 + sqrt(2)/2.
    let (sup2, _) = sup_norm(&HarmonicSpec::new(2, 0, Branch::P).unwrap(), &params);
    let exact2 = 1.0 + 0.5 * 2f64.sqrt();
    assert!(sup2 <= exact2 + 1e-12, "search cannot exceed the true sup");
    assert!(sup2 >= exact2 - 1e-4, "sup at degree 2: {sup2} vs {exact2}");

    // Degree 3 has no aligned closed form; pin the converged search value.
    let (sup3, arg3) = sup_norm(&HarmonicSpec::new(3, 0, Branch::P).unwrap(), &params);
    assert!((sup3 - 1.556276).abs() <= 1e-5, "sup at degree 3: {sup3}");
    assert!((arg3.rho - 0.212).abs() <= 5e-3, "argmax rho: {}", arg3.rho);
}

#[test]
fn sup_norm_is_independent_of_the_basis_index() {
    let params = SupNormParams::default();
    let sups: Vec<f64> = [0u32, 2, 5]
        .iter()
        .map(|&k| sup_norm(&HarmonicSpec::new(5, k, Branch::P).unwrap(), &params).0)
        .collect();
    let spread = sups.iter().cloned().fold(f64::MIN, f64::max)
        - sups.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        spread <= 1e-12 * sups[0],
        "index shifts the sup: {sups:?} (spread {spread:e})"
    );
}

#[test]
fn monomial_supnorm_ratios_match_closed_forms() {
    let r21 = monomial_supnorm_ratio(2, 1).unwrap();
    assert!((r21 - 6f64.sqrt() / 2.0).abs() <= 1e-14, "(2,1): {r21}");
    let r42 = monomial_supnorm_ratio(4, 2).unwrap();
    assert!((r42 - 30f64.sqrt() / 4.0).abs() <= 1e-14, "(4,2): {r42}");
    let r_mid = monomial_supnorm_ratio(100, 50).unwrap();
    assert!((r_mid - 2.835227).abs() <= 1e-5, "(100,50): {r_mid}");
    for n in [1u32, 2, 9, 64] {
        let expected = ((n + 1) as f64).sqrt();
        for j in [0, n] {
            let r = monomial_supnorm_ratio(n, j).unwrap();
            assert!((r - expected).abs() <= 1e-12, "({n},{j}) extreme: {r}");
        }
    }
    assert!(matches!(
        monomial_supnorm_ratio(4, 5),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn interior_monomial_ratios_track_the_quarter_power_law() {
    let n = 64u32;
    for j in 1..n {
        let r = monomial_supnorm_ratio(n, j).unwrap();
        let scale = ((n + 1) as f64).sqrt() * (j.min(n - j) as f64).powf(-0.25);
        let q = r / scale;
        assert!((0.25..=4.0).contains(&q), "j = {j}: ratio/scale = {q}");
    }
}

#[test]
fn coefficient_orthonormality_defect_is_machine_small() {
    for branch in [Branch::P, Branch::Q] {
        for n in [1u32, 2, 3, 17, 64, 257] {
            let d = orthonormality_defect(n, branch);
            assert!(d <= 1e-13, "N = {n} {branch:?}: defect {d:e}");
        }
    }
}

#[test]
fn quadrature_orthonormality_defect_is_small_at_low_degree() {
    for n in 1u32..=6 {
        let grid = QuadratureGrid::for_degree(n);
        let d = orthonormality_defect_quadrature(n, Branch::P, &grid);
        assert!(d <= 1e-8, "N = {n}: defect {d:e}");
    }
}

#[test]
fn monomials_are_ambient_harmonic() {
    let point = [0.3, -0.4, 0.5, 0.2];
    let h = 1e-3;
    assert!(ambient_harmonicity_residual(1, 0, point, h).unwrap() <= 1e-9);
    assert!(ambient_harmonicity_residual(2, 1, point, h).unwrap() <= 1e-8);
    // higher degree: the finite-difference truncation error scales like
    // h^2 (N+1)^4 times the local magnitude
    let n = 20u32;
    for j in [0u32, 7, 13, 20] {
        let res = ambient_harmonicity_residual(n, j, point, h).unwrap();
        let budget = 10.0 * h * h * ((n + 1) as f64).powi(4);
        assert!(res <= budget, "({n},{j}): residual {res:e} > {budget:e}");
    }
}

#[test]
fn harmonicity_probe_validates_input() {
    assert!(matches!(
        ambient_harmonicity_residual(2, 3, [1.0, 0.0, 0.0, 0.0], 1e-3),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        ambient_harmonicity_residual(2, 1, [1.0, 0.0, 0.0, 0.0], 0.0),
        Err(Error::InvalidArgument(_))
    ));
}
