//! The verification suites: exact identities, oracle equivalence, decay
//! rates, and uniform boundedness, each packaged as a timed check with a
//! one-line human-readable outcome.
//!
//! Every check pins its tolerance and its sweep ranges in code so that a
//! bare `run_suite` call reproduces the canonical experiment. Checks
//! return their findings rather than panicking; the caller decides what a
//! failure means (the CLI maps it to an exit code, the test suite to an
//! assertion).

use std::f64::consts::FRAC_PI_8;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::harmonics::{
    orthonormality_defect, orthonormality_defect_quadrature, sup_norm, HarmonicSpec,
    SupNormParams,
};
use crate::hopf::{cometric_norm_sq, torus_average, xi_rho, CliffordTorus, HopfPoint};
use crate::numerics::linear_fit;
use crate::quadrature::{integrate_s3, matrix_element_quadrature, psi_nodes, QuadratureGrid};
use crate::rudin_shapiro::{autocorr_growth_exponent, autocorr_spectrum, generate, Branch};
use crate::semiclassical::{
    clifford_limit, convergence_study, matrix_element, KPolicy, MonomialSymbol,
};

/// Result of one verification check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// True when a precision flag (cancellation below threshold) fired
    /// anywhere in the check, independently of pass/fail.
    pub flagged: bool,
    pub detail: String,
    pub seconds: f64,
}

fn outcome(
    name: &'static str,
    started: Instant,
    passed: bool,
    flagged: bool,
    detail: String,
) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        flagged,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn distinct_indices(n: u32) -> Vec<u32> {
    let mut ks = vec![0, n / 2, n];
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Position symbols rho^g average to exactly 1/(g+1) at every degree: the
/// closed sum telescopes. Sweeps N up to 2048, three basis indices, g up
/// to 5.
pub fn check_case1_identity(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let (worst, cases) = (1u32..=2048)
        .into_par_iter()
        .map(|n| {
            let mut worst = 0.0f64;
            let mut cases = 0usize;
            for gamma in 0..=5u32 {
                let s = MonomialSymbol::from_powers(gamma, 0, 0, 0, 0, 0);
                let expect = 1.0 / (gamma as f64 + 1.0);
                for k in distinct_indices(n) {
                    let rep = matrix_element(n, k, &s, Branch::P).expect("valid inputs");
                    worst = worst.max((rep.value - expect).norm());
                    cases += 1;
                }
            }
            (worst, cases)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    outcome(
        "case1_identity",
        started,
        worst <= tol,
        false,
        format!("worst |value - 1/(g+1)| = {worst:.3e} over {cases} cases (tolerance {tol:.1e})"),
    )
}

/// The closed sum and the independent quadrature must agree for every
/// small symbol at every small degree.
pub fn check_engine_oracle_equivalence(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let mut symbols = Vec::new();
    for gamma in 0..=2u32 {
        for b1 in -2i64..=2 {
            for b2 in -2i64..=2 {
                for a in 0..=2u32 {
                    for x1 in 0..=2u32 {
                        for x2 in 0..=2u32 {
                            symbols.push(MonomialSymbol::from_powers(gamma, b1, b2, a, x1, x2));
                        }
                    }
                }
            }
        }
    }
    let cases: Vec<(u32, MonomialSymbol)> = (1u32..=12)
        .flat_map(|n| symbols.iter().map(move |&s| (n, s)))
        .collect();
    let (worst, count) = cases
        .par_iter()
        .map(|&(n, s)| {
            let grid = QuadratureGrid::for_matrix_element(n, &s);
            let mut worst = 0.0f64;
            let mut count = 0usize;
            for k in distinct_indices(n) {
                let closed = matrix_element(n, k, &s, Branch::P).expect("valid inputs").value;
                let quad =
                    matrix_element_quadrature(n, k, &s, &grid, Branch::P).expect("valid inputs");
                worst = worst.max((quad - closed).norm() / (1.0 + closed.norm()));
                count += 1;
            }
            (worst, count)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    outcome(
        "engine_oracle_equivalence",
        started,
        worst <= tol,
        false,
        format!("worst relative deviation = {worst:.3e} over {count} cases (tolerance {tol:.1e})"),
    )
}

fn pinned_symbol() -> MonomialSymbol {
    MonomialSymbol::from_powers(0, 1, -1, 0, 0, 0)
}

/// At N = 1 the off-diagonal symbol has the single-term value pi/8, an
/// analytically checkable anchor for the closed sum.
pub fn check_pinned_value_closed(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let rep = matrix_element(1, 0, &pinned_symbol(), Branch::P).expect("valid inputs");
    let dev = (rep.value - Complex64::new(FRAC_PI_8, 0.0)).norm();
    outcome(
        "pinned_value_closed",
        started,
        dev <= tol,
        false,
        format!(
            "closed sum at N=1: value = {:.15}, |value - pi/8| = {dev:.3e} (tolerance {tol:.1e})",
            rep.value.re
        ),
    )
}

/// The same anchor through the quadrature path.
pub fn check_pinned_value_quadrature(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let s = pinned_symbol();
    let grid = QuadratureGrid::for_matrix_element(1, &s);
    let value = matrix_element_quadrature(1, 0, &s, &grid, Branch::P).expect("valid inputs");
    let dev = (value - Complex64::new(FRAC_PI_8, 0.0)).norm();
    outcome(
        "pinned_value_quadrature",
        started,
        dev <= tol,
        false,
        format!(
            "quadrature at N=1: value = {:.15}, |value - pi/8| = {dev:.3e} (tolerance {tol:.1e})",
            value.re
        ),
    )
}

const DECAY_DEGREES: [u32; 7] = [128, 256, 512, 1024, 2048, 4096, 8192];

/// Off-diagonal (oscillating) symbols must decay: fitted slope at most
/// -0.25 and large-N values strictly below the first one.
pub fn check_offdiagonal_decay() -> CheckOutcome {
    let started = Instant::now();
    let study = convergence_study(&pinned_symbol(), &DECAY_DEGREES, KPolicy::Half, Branch::P)
        .expect("valid inputs");
    let slope = study.slope.map(|(m, _)| m).unwrap_or(f64::NAN);
    let first = study.rows[0].deviation;
    let tail_below = study
        .rows
        .iter()
        .filter(|r| r.n >= 1024)
        .all(|r| r.deviation < first);
    let passed = slope <= -0.25 && tail_below;
    outcome(
        "offdiagonal_decay",
        started,
        passed,
        false,
        format!(
            "fitted slope = {slope:.4} (required <= -0.25); every N >= 1024 value below the \
             N = 128 value: {tail_below}; |value| range {:.3e} down to {:.3e}",
            first,
            study.rows.last().map(|r| r.deviation).unwrap_or(f64::NAN),
        ),
    )
}

/// Decay check for the pure momentum symbol eta. The check demands a
/// fitted slope of -1 within 0.15 from unflagged values; it cannot pass,
/// and the detail string reports why: the closed sum for this symbol is
/// identically zero at every degree (the summand is antisymmetric about
/// the window midpoint, so terms cancel pairwise and exactly), the
/// computed magnitudes are pure floating-point cancellation residue, and
/// every degree raises the cancellation flag. A slope fitted to noise is
/// not a decay rate; the honest outcome is a failure with the measurement
/// attached.
pub fn check_eta_decay() -> CheckOutcome {
    let started = Instant::now();
    let s = MonomialSymbol::from_powers(0, 0, 0, 1, 0, 0);
    let limit = clifford_limit(&s);
    let mut rows = Vec::new();
    let mut any_flagged = false;
    for &n in &DECAY_DEGREES {
        let rep = matrix_element(n, n / 2, &s, Branch::P).expect("valid inputs");
        any_flagged |= rep.precision_flagged();
        rows.push((n, (rep.value - limit).norm(), rep.cancellation_ratio));
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|&&(_, dev, _)| dev > 1e-300)
        .map(|&(n, dev, _)| ((n as f64).ln(), dev.ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        linear_fit(&xs, &ys).0
    } else {
        f64::NAN
    };
    let slope_ok = (-1.15..=-0.85).contains(&slope);
    let worst_ratio = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let max_dev = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
    let passed = slope_ok && !any_flagged;
    outcome(
        "eta_decay",
        started,
        passed,
        any_flagged,
        format!(
            "matrix elements of the eta symbol vanish identically (pairwise term cancellation \
             at every degree); measured |value| <= {max_dev:.3e} is floating-point residue, \
             worst cancellation ratio {worst_ratio:.3e} flags every degree, fitted noise slope \
             {slope:.3}; a decay exponent cannot be certified from flagged noise"
        ),
    )
}

/// Autocorrelation growth of the sign sequences: the dyadic ladder must
/// stay below 8 n^0.74 pointwise and fit a smaller exponent.
pub fn check_autocorr_exponent() -> CheckOutcome {
    let started = Instant::now();
    let lengths: Vec<usize> = (6..=15).map(|m| 1usize << m).collect();
    let per_length: Vec<(usize, i64)> = lengths
        .par_iter()
        .map(|&n| {
            let seq = generate(n, Branch::P).expect("positive length");
            let spectrum = autocorr_spectrum(&seq).expect("fft path");
            let max = spectrum[1..]
                .iter()
                .map(|&v| v.abs())
                .max()
                .unwrap_or(0);
            (n, max)
        })
        .collect();
    let bound_ok = per_length
        .iter()
        .all(|&(n, max)| (max as f64) <= 8.0 * (n as f64).powf(0.74));
    let (exponent, _) = autocorr_growth_exponent(&lengths, Branch::P).expect("dyadic ladder");
    let passed = bound_ok && exponent < 0.74;
    let table: Vec<String> = per_length
        .iter()
        .map(|&(n, max)| format!("{n}:{max}"))
        .collect();
    outcome(
        "autocorr_exponent",
        started,
        passed,
        false,
        format!(
            "fitted exponent = {exponent:.4} (required < 0.74); pointwise bound 8 n^0.74 \
             holds at every length: {bound_ok}; max |autocorrelation| per length: {}",
            table.join(" ")
        ),
    )
}

/// Sup norms across a dyadic ladder of degrees: uniformly small, flat in
/// N, and independent of the basis index k.
pub fn check_uniform_boundedness() -> CheckOutcome {
    let started = Instant::now();
    let degrees: Vec<u32> = (6..=12).map(|m| (1u32 << m) - 1).collect();
    let params = SupNormParams::default();
    let per_degree: Vec<(u32, f64, f64)> = degrees
        .iter()
        .map(|&n| {
            let sups: Vec<f64> = distinct_indices(n)
                .into_par_iter()
                .map(|k| {
                    let spec = HarmonicSpec::new(n, k, Branch::P).expect("k <= n");
                    sup_norm(&spec, &params).0
                })
                .collect();
            let max = sups.iter().cloned().fold(f64::MIN, f64::max);
            let min = sups.iter().cloned().fold(f64::MAX, f64::min);
            (n, max, (max - min) / max)
        })
        .collect();
    let worst_sup = per_degree.iter().map(|r| r.1).fold(0.0f64, f64::max);
    let worst_spread = per_degree.iter().map(|r| r.2).fold(0.0f64, f64::max);
    let (xs, ys): (Vec<f64>, Vec<f64>) = per_degree
        .iter()
        .map(|&(n, sup, _)| (((n + 1) as f64).ln(), sup.ln()))
        .unzip();
    let (slope, _) = linear_fit(&xs, &ys);
    let passed = worst_sup <= 10.0 && worst_spread <= 1e-6 && (-0.05..=0.05).contains(&slope);
    let table: Vec<String> = per_degree
        .iter()
        .map(|&(n, sup, _)| format!("{}:{sup:.4}", n + 1))
        .collect();
    outcome(
        "uniform_boundedness",
        started,
        passed,
        false,
        format!(
            "worst sup = {worst_sup:.4} (required <= 10); worst relative k-spread = \
             {worst_spread:.3e} (required <= 1e-6); growth slope = {slope:.4} in [-0.05, 0.05]; \
             sup per dimension: {}",
            table.join(" ")
        ),
    )
}

/// Orthonormality through the coefficient identity, at every degree up to
/// 512.
pub fn check_orthonormality_coefficient(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let worst = (1u32..=512)
        .into_par_iter()
        .map(|n| orthonormality_defect(n, Branch::P))
        .reduce(|| 0.0, f64::max);
    outcome(
        "orthonormality_coefficient",
        started,
        worst <= tol,
        false,
        format!("worst Gram defect = {worst:.3e} over N <= 512 (tolerance {tol:.1e})"),
    )
}

/// Orthonormality re-derived by quadrature over S3 at small degrees.
pub fn check_orthonormality_quadrature(tol: f64) -> CheckOutcome {
    let started = Instant::now();
    let worst = (1u32..=8)
        .into_par_iter()
        .map(|n| orthonormality_defect_quadrature(n, Branch::P, &QuadratureGrid::for_degree(n)))
        .reduce(|| 0.0, f64::max);
    outcome(
        "orthonormality_quadrature",
        started,
        worst <= tol,
        false,
        format!("worst Gram defect = {worst:.3e} over N <= 8 (tolerance {tol:.1e})"),
    )
}

/// Geometric self-consistency: the distinguished covector is unit-length
/// across the whole rho range, and integration over S3 disintegrates into
/// torus averages.
pub fn check_geometry_consistency() -> CheckOutcome {
    let started = Instant::now();
    let mut worst_norm = 0.0f64;
    for i in 1..1000 {
        let rho = i as f64 / 1000.0;
        let p = HopfPoint::new(rho, 0.7, 1.3).expect("interior point");
        let v = xi_rho(rho).expect("interior rho");
        let norm = cometric_norm_sq(&p, &v).expect("interior point");
        worst_norm = worst_norm.max((norm - 1.0).abs());
    }
    let norm_ok = worst_norm <= 1e-14;

    let grid = QuadratureGrid::new(16, 16).expect("positive sizes");
    let (rho_nodes, w_nodes) = psi_nodes(16);
    let mut worst_fubini = 0.0f64;
    for gamma in 0..=3i32 {
        for beta1 in -3i64..=3 {
            for beta2 in -3i64..=3 {
                let g = |p: &HopfPoint| -> Complex64 {
                    Complex64::from_polar(
                        p.rho.powi(gamma),
                        beta1 as f64 * p.theta1 + beta2 as f64 * p.theta2,
                    )
                };
                let volume = integrate_s3(&grid, g);
                let mut disintegrated = Complex64::new(0.0, 0.0);
                for (&rho, &w) in rho_nodes.iter().zip(&w_nodes) {
                    let torus = CliffordTorus::new(rho).expect("rho in [0,1]");
                    let avg = torus_average(torus, 16, &g).expect("positive grid");
                    disintegrated += w * avg;
                }
                worst_fubini = worst_fubini.max((volume - disintegrated).norm());
            }
        }
    }
    let fubini_ok = worst_fubini <= 1e-10;
    outcome(
        "geometry_consistency",
        started,
        norm_ok && fubini_ok,
        false,
        format!(
            "worst | |xi_rho|^2 - 1 | = {worst_norm:.3e} on the interior rho grid (required \
             <= 1e-14); worst Fubini defect = {worst_fubini:.3e} over separable test functions \
             (required <= 1e-10)"
        ),
    )
}

/// Named groups of checks, matching the CLI verify subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Exact,
    Oracle,
    Decay,
    Bounded,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::Oracle => "oracle",
            Suite::Decay => "decay",
            Suite::Bounded => "bounded",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        match name {
            "exact" => Some(Suite::Exact),
            "oracle" => Some(Suite::Oracle),
            "decay" => Some(Suite::Decay),
            "bounded" => Some(Suite::Bounded),
            _ => None,
        }
    }
}

/// Run one suite. `tol` overrides each member check's headline tolerance
/// where one applies; decay and boundedness checks have fixed acceptance
/// windows and ignore it.
pub fn run_suite(suite: Suite, tol: Option<f64>) -> Vec<CheckOutcome> {
    match suite {
        Suite::Exact => vec![
            check_case1_identity(tol.unwrap_or(1e-12)),
            check_pinned_value_closed(tol.unwrap_or(1e-12)),
            check_orthonormality_coefficient(tol.unwrap_or(1e-12)),
            check_geometry_consistency(),
        ],
        Suite::Oracle => vec![
            check_engine_oracle_equivalence(tol.unwrap_or(1e-8)),
            check_pinned_value_quadrature(tol.unwrap_or(1e-10)),
            check_orthonormality_quadrature(tol.unwrap_or(1e-8)),
        ],
        Suite::Decay => vec![
            check_offdiagonal_decay(),
            check_eta_decay(),
            check_autocorr_exponent(),
        ],
        Suite::Bounded => vec![check_uniform_boundedness()],
    }
}
