//! Hopf coordinates on the unit 3-sphere, the round cometric, Clifford tori,
//! and the two reference measures.
//!
//! A point of S3 in C^2 is z = sqrt(rho) e^{i theta1}, w = sqrt(1-rho)
//! e^{i theta2} with rho in [0, 1]. The normalized volume element is
//! (1/4 pi^2) drho dtheta1 dtheta2, and each Clifford torus T_rho (the level
//! set |z|^2 = rho) carries the probability measure (1/4 pi^2) dtheta1
//! dtheta2, so that volume integration disintegrates as a plain rho-integral
//! of torus averages.
//!
//! The round metric in these coordinates is
//! drho^2 / (4 rho (1-rho)) + rho dtheta1^2 + (1-rho) dtheta2^2, with dual
//! cometric |(eta, xi1, xi2)|^2 = 4 rho (1-rho) eta^2 + xi1^2/rho
//! + xi2^2/(1-rho). The distinguished covector field xi_rho = (0, rho, 1-rho)
//! has unit cometric norm on every torus.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_s3, QuadratureGrid};

/// A point of S3 in Hopf coordinates; angles are stored reduced mod 2 pi.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopfPoint {
    pub rho: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl HopfPoint {
    pub fn new(rho: f64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidArgument(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(HopfPoint {
            rho,
            theta1: theta1.rem_euclid(TAU),
            theta2: theta2.rem_euclid(TAU),
        })
    }
}

/// A covector (eta, xi1, xi2) dual to (rho, theta1, theta2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CotangentVector {
    pub eta: f64,
    pub xi1: f64,
    pub xi2: f64,
}

/// The Clifford torus |z|^2 = rho, carrying its probability area measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CliffordTorus {
    pub rho: f64,
}

impl CliffordTorus {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidArgument(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        Ok(CliffordTorus { rho })
    }
}

/// The ambient embedding into R^4:
/// (sqrt(rho) cos t1, sqrt(rho) sin t1, sqrt(1-rho) cos t2, sqrt(1-rho) sin t2).
pub fn embed(p: &HopfPoint) -> [f64; 4] {
    let r1 = p.rho.sqrt();
    let r2 = (1.0 - p.rho).sqrt();
    [
        r1 * p.theta1.cos(),
        r1 * p.theta1.sin(),
        r2 * p.theta2.cos(),
        r2 * p.theta2.sin(),
    ]
}

/// Squared cometric norm 4 rho (1-rho) eta^2 + xi1^2/rho + xi2^2/(1-rho).
///
/// At the poles rho = 0 or 1 the angular directions degenerate: a nonzero
/// angular covector there is a coordinate singularity and is reported as an
/// error rather than a silent infinity.
pub fn cometric_norm_sq(p: &HopfPoint, v: &CotangentVector) -> Result<f64> {
    let radial = 4.0 * p.rho * (1.0 - p.rho) * v.eta * v.eta;
    let mut total = radial;
    if v.xi1 != 0.0 {
        if p.rho == 0.0 {
            return Err(Error::SingularCoordinate(
                "xi1 covector at the rho = 0 circle".into(),
            ));
        }
        total += v.xi1 * v.xi1 / p.rho;
    }
    if v.xi2 != 0.0 {
        if p.rho == 1.0 {
            return Err(Error::SingularCoordinate(
                "xi2 covector at the rho = 1 circle".into(),
            ));
        }
        total += v.xi2 * v.xi2 / (1.0 - p.rho);
    }
    Ok(total)
}

/// The unit-norm covector field (0, rho, 1-rho) conormal to the torus family.
pub fn xi_rho(rho: f64) -> Result<CotangentVector> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!(
            "rho must lie in [0, 1], got {rho}"
        )));
    }
    Ok(CotangentVector {
        eta: 0.0,
        xi1: rho,
        xi2: 1.0 - rho,
    })
}

/// Integral of g over S3 against the normalized volume element, using the
/// product quadrature rule from [`crate::quadrature`].
pub fn volume_integral(
    grid: &QuadratureGrid,
    g: impl Fn(&HopfPoint) -> Complex64 + Sync,
) -> Complex64 {
    integrate_s3(grid, g)
}

/// Mean of g over the Clifford torus T_rho with respect to its probability
/// measure, by the trapezoid rule on an n_theta x n_theta angular grid.
pub fn torus_average(
    torus: CliffordTorus,
    n_theta: usize,
    g: impl Fn(&HopfPoint) -> Complex64,
) -> Result<Complex64> {
    if n_theta == 0 {
        return Err(Error::InvalidArgument(
            "torus average needs at least one angular node".into(),
        ));
    }
    let m = n_theta;
    let mut samples = Vec::with_capacity(m * m);
    for i in 0..m {
        let t1 = TAU * i as f64 / m as f64;
        for j in 0..m {
            let t2 = TAU * j as f64 / m as f64;
            samples.push(g(&HopfPoint {
                rho: torus.rho,
                theta1: t1,
                theta2: t2,
            }));
        }
    }
    Ok(crate::numerics::pairwise_sum(&samples) / (m * m) as f64)
}
