//! The degree-N basis functions on S3 built from Rudin-Shapiro signs, and
//! their diagnostics: monomial norms, pointwise and profile evaluation,
//! sup-norm scans, orthonormality defects, and an ambient-harmonicity check.
//!
//! With z = sqrt(rho) e^{i theta1}, w = sqrt(1-rho) e^{i theta2}, the basis
//! function indexed by (N, k) is
//!
//! (N+1)^{-1/2} sum_j sigma_j e^{2 pi i j k/(N+1)} z^j w^{N-j} / ||z^j w^{N-j}||,
//!
//! where sigma is the Rudin-Shapiro sign sequence of the chosen branch and
//! ||z^j w^{N-j}||^2 = j! (N-j)! / (N+1)!. The combined normalization
//! collapses to sqrt(binomial(N, j)) per monomial, which this module keeps in
//! the log domain so degrees in the tens of thousands stay finite.
//!
//! Since e^{i j theta1} e^{i (N-j) theta2} = e^{i N theta2} e^{i j (theta1 -
//! theta2)}, the modulus is a function of (rho, phi) with phi = theta1 -
//! theta2 alone; the profile and sup-norm routines work on that reduction and
//! recover the full function by one FFT per rho.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hopf::HopfPoint;
use crate::numerics::{ln_gamma, NeumaierComplexSum};
use crate::quadrature::{self, QuadratureGrid};
use crate::rudin_shapiro::{generate, Branch};

/// Index data for one basis function: degree, angular index, sign branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarmonicSpec {
    pub n: u32,
    pub k: u32,
    pub branch: Branch,
}

impl HarmonicSpec {
    pub fn new(n: u32, k: u32, branch: Branch) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!(
                "basis index k = {k} exceeds degree N = {n}"
            )));
        }
        Ok(HarmonicSpec { n, k, branch })
    }
}

/// ||z^j w^{N-j}||^2 = j! (N-j)! / (N+1)!, as a log value always and as an
/// exact big-integer rational for N <= 64.
#[derive(Clone, Debug)]
pub struct MonomialNormSq {
    pub ln: f64,
    pub exact: Option<BigRational>,
}

pub fn monomial_norm_sq(n: u32, j: u32) -> Result<MonomialNormSq> {
    if j > n {
        return Err(Error::InvalidArgument(format!(
            "monomial exponent j = {j} exceeds degree N = {n}"
        )));
    }
    let ln = ln_gamma(j as f64 + 1.0) + ln_gamma((n - j) as f64 + 1.0) - ln_gamma(n as f64 + 2.0);
    let exact = (n <= 64).then(|| {
        let fact = |m: u32| -> BigInt {
            let mut p = BigInt::from(1u32);
            for i in 2..=m {
                p *= i;
            }
            p
        };
        BigRational::new(fact(j) * fact(n - j), fact(n + 1))
    });
    Ok(MonomialNormSq { ln, exact })
}

/// Half the log of binomial(n, j) for j = 0..=n; the log-domain coefficient
/// magnitudes of the basis expansion.
fn half_ln_binomials(n: u32) -> Vec<f64> {
    let ln_n1 = ln_gamma(n as f64 + 1.0);
    (0..=n)
        .map(|j| {
            0.5 * (ln_n1 - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0))
        })
        .collect()
}

/// The unit-modulus coefficient factors sigma_j e^{2 pi i j k/(N+1)}.
fn sign_phases(spec: &HarmonicSpec) -> Vec<Complex64> {
    let seq = generate(spec.n as usize + 1, spec.branch).expect("length n+1 >= 1");
    let m = spec.n as u64 + 1;
    seq.values()
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let angle = TAU * ((j as u64 * spec.k as u64) % m) as f64 / m as f64;
            Complex64::from_polar(s as f64, angle)
        })
        .collect()
}

/// rho^{j/2} (1-rho)^{(n-j)/2} sqrt(binomial(n, j)), combined in one exp so
/// huge binomials and tiny powers cancel before leaving the log domain.
/// The 0^0 = 1 convention applies at the poles.
fn amplitude(n: u32, j: u32, half_ln_binom: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    if rho == 1.0 {
        return if j == n { 1.0 } else { 0.0 };
    }
    (half_ln_binom + 0.5 * (j as f64) * rho.ln() + 0.5 * ((n - j) as f64) * (1.0 - rho).ln())
        .exp()
}

/// Pointwise value of the basis function at a Hopf point.
pub fn evaluate(spec: &HarmonicSpec, p: &HopfPoint) -> Complex64 {
    let phases = sign_phases(spec);
    let hlb = half_ln_binomials(spec.n);
    let mut acc = NeumaierComplexSum::default();
    for j in 0..=spec.n {
        let amp = amplitude(spec.n, j, hlb[j as usize], p.rho);
        if amp == 0.0 {
            continue;
        }
        let angle = j as f64 * p.theta1 + (spec.n - j) as f64 * p.theta2;
        acc.add(phases[j as usize] * Complex64::from_polar(amp, angle));
    }
    acc.value()
}

/// Values of the reduced profile G(rho, phi) = sum_j d_j(rho) e^{i j phi} on
/// a uniform phi grid, by one FFT of the coefficient vector. |G(rho, theta1 -
/// theta2)| equals the modulus of the basis function at (rho, theta1,
/// theta2); at theta2 = 0 the profile IS the basis function.
pub fn evaluate_profile(
    spec: &HarmonicSpec,
    rho: f64,
    phi_grid_size: usize,
) -> Result<Vec<Complex64>> {
    let min = 4 * (spec.n as usize + 1);
    if phi_grid_size < min {
        return Err(Error::InvalidArgument(format!(
            "phi grid of {phi_grid_size} points is below the minimum {min} for degree {}",
            spec.n
        )));
    }
    let phases = sign_phases(spec);
    let hlb = half_ln_binomials(spec.n);
    let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); phi_grid_size];
    for j in 0..=spec.n as usize {
        buf[j] = phases[j] * amplitude(spec.n, j as u32, hlb[j], rho);
    }
    // unnormalized inverse transform: entry m becomes sum_j d_j e^{2 pi i j m / M}
    FftPlanner::new()
        .plan_fft_inverse(phi_grid_size)
        .process(&mut buf);
    Ok(buf)
}

/// Knobs for the sup-norm search. The defaults match the documented scan:
/// a 4N x 4(N+1) grid in (psi, phi) followed by 20 golden-section
/// iterations per coordinate, repeated for a few alternating passes.
#[derive(Clone, Copy, Debug)]
pub struct SupNormParams {
    pub golden_iters: u32,
    pub passes: u32,
}

impl Default for SupNormParams {
    fn default() -> Self {
        SupNormParams {
            golden_iters: 20,
            passes: 3,
        }
    }
}

/// Supremum of the modulus over S3 and a point attaining it.
///
/// The scan works on the (rho, phi) reduction: rho = sin^2 psi on a uniform
/// midpoint psi grid (which concentrates resolution where the amplitudes
/// live), phi by FFT, then local golden-section refinement of |G|^2 around
/// the best grid cell.
pub fn sup_norm(spec: &HarmonicSpec, params: &SupNormParams) -> (f64, HopfPoint) {
    if spec.n == 0 {
        let p = HopfPoint {
            rho: 0.5,
            theta1: 0.0,
            theta2: 0.0,
        };
        return (1.0, p);
    }
    let n = spec.n;
    let phases = sign_phases(spec);
    let hlb = half_ln_binomials(n);

    let n_psi = 4 * n as usize;
    let m = 4 * (n as usize + 1);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let dpsi = half_pi / n_psi as f64;

    let fft = FftPlanner::new().plan_fft_inverse(m);
    let rows: Vec<(f64, usize)> = (0..n_psi)
        .into_par_iter()
        .map(|i| {
            let psi = (i as f64 + 0.5) * dpsi;
            let rho = psi.sin().powi(2);
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for j in 0..=n as usize {
                buf[j] = phases[j] * amplitude(n, j as u32, hlb[j], rho);
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(&mut buf, &mut scratch);
            let (best_m, best) = buf
                .iter()
                .map(|v| v.norm_sqr())
                .enumerate()
                .fold((0usize, f64::MIN), |(bi, bv), (i, v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                });
            (best, best_m)
        })
        .collect();

    let (best_row, &(_, best_m)) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("grid is nonempty");

    let g2 = |psi: f64, phi: f64| -> f64 {
        let rho = psi.sin().powi(2);
        let rot = Complex64::from_polar(1.0, phi);
        let mut z = Complex64::new(1.0, 0.0);
        let mut acc = NeumaierComplexSum::default();
        for j in 0..=n as usize {
            let amp = amplitude(n, j as u32, hlb[j], rho);
            acc.add(phases[j] * amp * z);
            z *= rot;
        }
        acc.value().norm_sqr()
    };

    let psi0 = (best_row as f64 + 0.5) * dpsi;
    let dphi = TAU / m as f64;
    let phi0 = best_m as f64 * dphi;

    let mut psi_c = psi0;
    let mut phi_c = phi0;
    let (mut psi_lo, mut psi_hi) = ((psi0 - dpsi).max(0.0), (psi0 + dpsi).min(half_pi));
    let (mut phi_lo, mut phi_hi) = (phi0 - dphi, phi0 + dphi);
    let shrink = 0.618f64.powi(params.golden_iters as i32);
    for _ in 0..params.passes {
        let (phi_best, _) =
            crate::numerics::golden_section_max(|phi| g2(psi_c, phi), phi_lo, phi_hi, params.golden_iters);
        phi_c = phi_best;
        let w = (phi_hi - phi_lo) * shrink;
        phi_lo = phi_c - w;
        phi_hi = phi_c + w;

        let (psi_best, _) =
            crate::numerics::golden_section_max(|psi| g2(psi, phi_c), psi_lo, psi_hi, params.golden_iters);
        psi_c = psi_best;
        let w = (psi_hi - psi_lo) * shrink;
        psi_lo = (psi_c - w).max(0.0);
        psi_hi = (psi_c + w).min(half_pi);
    }

    let value = g2(psi_c, phi_c).sqrt();
    let argmax = HopfPoint {
        rho: psi_c.sin().powi(2),
        theta1: phi_c.rem_euclid(TAU),
        theta2: 0.0,
    };
    (value, argmax)
}

/// max_rho of the normalized monomial modulus rho^{j/2} (1-rho)^{(N-j)/2}
/// / ||z^j w^{N-j}||. For 0 < j < N the profile is log-concave with its
/// maximum at rho = j/N; at j = 0 or N the maximum sits at the pole and the
/// ratio is sqrt(N+1).
pub fn monomial_supnorm_ratio(n: u32, j: u32) -> Result<f64> {
    if j > n {
        return Err(Error::InvalidArgument(format!(
            "monomial exponent j = {j} exceeds degree N = {n}"
        )));
    }
    if j == 0 || j == n {
        return Ok(((n + 1) as f64).sqrt());
    }
    let (jf, nf) = (j as f64, n as f64);
    let half_ln_norm_inv =
        0.5 * (ln_gamma(nf + 2.0) - ln_gamma(jf + 1.0) - ln_gamma(nf - jf + 1.0));
    let ln_peak = 0.5 * jf * (jf / nf).ln() + 0.5 * (nf - jf) * ((nf - jf) / nf).ln();
    Ok((half_ln_norm_inv + ln_peak).exp())
}

/// Worst deviation of the Gram matrix from the identity, via the exact
/// coefficient identity: the inner product of the basis functions k and l is
/// (N+1)^{-1} sum_j sigma_j^2 e^{2 pi i j (k-l)/(N+1)}, a pure geometric sum.
/// The defect depends on k - l only, so all pairs reduce to N+1 sums.
pub fn orthonormality_defect(n: u32, branch: Branch) -> f64 {
    let seq = generate(n as usize + 1, branch).expect("length n+1 >= 1");
    let m = n as u64 + 1;
    let mut worst: f64 = 0.0;
    for d in 0..=n as u64 {
        let mut acc = NeumaierComplexSum::default();
        for (j, &s) in seq.values().iter().enumerate() {
            let angle = TAU * ((j as u64 * d) % m) as f64 / m as f64;
            let s2 = (s as f64) * (s as f64);
            acc.add(Complex64::from_polar(s2, angle));
        }
        let inner = acc.value() / m as f64;
        let dev = if d == 0 {
            (inner - Complex64::new(1.0, 0.0)).norm()
        } else {
            inner.norm()
        };
        worst = worst.max(dev);
    }
    worst
}

/// Independent cross-check of the Gram matrix by full quadrature over S3,
/// evaluating every pair of basis functions pointwise. Intended for small N.
pub fn orthonormality_defect_quadrature(n: u32, branch: Branch, grid: &QuadratureGrid) -> f64 {
    let specs: Vec<HarmonicSpec> = (0..=n)
        .map(|k| HarmonicSpec { n, k, branch })
        .collect();
    let dim = specs.len();
    let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (k, spec_k) in specs.iter().enumerate() {
        for (l, spec_l) in specs.iter().enumerate() {
            gram[k * dim + l] = quadrature::integrate_s3(grid, |p| {
                evaluate(spec_k, p) * evaluate(spec_l, p).conj()
            });
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..dim {
        for l in 0..dim {
            let expect = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((gram[k * dim + l] - expect).norm());
        }
    }
    worst
}

/// Finite-difference residual of the 4D Laplacian of z^j w^{N-j} at an
/// ambient point: the monomial is a harmonic homogeneous polynomial, so the
/// residual is pure discretization noise, O(h^2) times a local scale.
/// Returns the larger of the real- and imaginary-part residuals.
pub fn ambient_harmonicity_residual(n: u32, j: u32, point: [f64; 4], h: f64) -> Result<f64> {
    if j > n {
        return Err(Error::InvalidArgument(format!(
            "monomial exponent j = {j} exceeds degree N = {n}"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let f = |x: [f64; 4]| -> Complex64 {
        Complex64::new(x[0], x[1]).powu(j) * Complex64::new(x[2], x[3]).powu(n - j)
    };
    let center = f(point);
    let mut lap = NeumaierComplexSum::default();
    for d in 0..4 {
        let mut plus = point;
        plus[d] += h;
        let mut minus = point;
        minus[d] -= h;
        lap.add(f(plus) - 2.0 * center + f(minus));
    }
    let v = lap.value() / (h * h);
    Ok(v.re.abs().max(v.im.abs()))
}
