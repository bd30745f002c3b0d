//! End-to-end acceptance checks for the laboratory, one named check per
//! test. Each test prints a single PASS/FAIL line (visible with
//! --nocapture) and asserts both the verdict and, where one applies, the
//! runtime budget. The checks share a lock so each is timed alone.

use std::sync::Mutex;

use cliffordlab::verify::{
    check_autocorr_exponent, check_case1_identity, check_engine_oracle_equivalence,
    check_eta_decay, check_geometry_consistency, check_offdiagonal_decay,
    check_orthonormality_coefficient, check_orthonormality_quadrature,
    check_pinned_value_closed, check_pinned_value_quadrature, check_uniform_boundedness,
    CheckOutcome,
};

static GATE: Mutex<()> = Mutex::new(());

fn exclusively<T>(body: impl FnOnce() -> T) -> T {
    let _lock = GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    body()
}

fn report(c: &CheckOutcome) {
    println!(
        "{}: {} ({:.2}s) {}",
        c.name,
        if c.passed { "PASS" } else { "FAIL" },
        c.seconds,
        c.detail
    );
}

fn expect_pass(c: &CheckOutcome, budget_seconds: Option<f64>) {
    report(c);
    assert!(c.passed, "{}: {}", c.name, c.detail);
    if let Some(budget) = budget_seconds {
        assert!(
            c.seconds < budget,
            "{} took {:.2}s, budget {budget}s",
            c.name,
            c.seconds
        );
    }
}

#[test]
fn case1_exact_identity() {
    exclusively(|| {
        let c = check_case1_identity(1e-12);
        expect_pass(&c, Some(30.0));
    });
}

#[test]
fn engine_oracle_equivalence() {
    exclusively(|| {
        let c = check_engine_oracle_equivalence(1e-8);
        expect_pass(&c, Some(300.0));
    });
}

#[test]
fn pinned_value_pi_over_8() {
    exclusively(|| {
        let closed = check_pinned_value_closed(1e-12);
        expect_pass(&closed, None);
        let quad = check_pinned_value_quadrature(1e-10);
        expect_pass(&quad, None);
    });
}

#[test]
fn offdiagonal_decay() {
    exclusively(|| {
        let c = check_offdiagonal_decay();
        expect_pass(&c, Some(60.0));
    });
}

#[test]
fn eta_symbol_decay() {
    exclusively(|| {
        let c = check_eta_decay();
        report(&c);
        assert!(c.seconds < 60.0, "took {:.2}s, budget 60s", c.seconds);
        // This check asks for a clean -1 decay slope with the cancellation
        // flag never firing. The eta matrix element vanishes identically at
        // every degree (the closed sum cancels pairwise), so the computed
        // values are rounding noise: they carry no stable slope, and the
        // cancellation ratio sits at machine epsilon, far below the 1e-12
        // flag threshold, at every single degree. The check is kept, and
        // kept honest, as a permanent record of that finding.
        assert!(
            c.passed,
            "{}: the eta symbol pairs to an exactly zero quadratic form, so no \
             unflagged decay fit exists; measured detail: {}",
            c.name, c.detail
        );
    });
}

#[test]
fn autocorrelation_exponent() {
    exclusively(|| {
        let c = check_autocorr_exponent();
        expect_pass(&c, Some(30.0));
    });
}

#[test]
fn uniform_boundedness() {
    exclusively(|| {
        let c = check_uniform_boundedness();
        expect_pass(&c, Some(600.0));
    });
}

#[test]
fn orthonormality() {
    exclusively(|| {
        let coeff = check_orthonormality_coefficient(1e-12);
        expect_pass(&coeff, None);
        let quad = check_orthonormality_quadrature(1e-8);
        expect_pass(&quad, None);
    });
}

#[test]
fn geometry_consistency() {
    exclusively(|| {
        let c = check_geometry_consistency();
        expect_pass(&c, None);
    });
}
