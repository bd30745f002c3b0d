//! Brute-force quadrature on S3: the independent verification path.
//!
//! Everything here works in the substituted variable rho = sin^2 psi, which
//! turns the half-integer-power amplitudes rho^{j/2}(1-rho)^{(N-j)/2} into
//! trigonometric polynomials in psi. Gauss-Legendre in psi is then
//! spectrally accurate with a handful of guard nodes, and one scheme covers
//! even and odd angular frequencies alike. The angles use the trapezoid
//! rule, which is exact for trigonometric polynomials below the Nyquist
//! degree of the grid.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hopf::HopfPoint;
use crate::numerics::{binomial, gauss_legendre, pairwise_sum, NeumaierComplexSum, NeumaierSum};
use crate::rudin_shapiro::{generate, Branch};
use crate::semiclassical::{leibniz_coeffs, term_integrable, MonomialSymbol};

/// Node counts for the product rule on S3: Gauss-Legendre on psi in
/// [0, pi/2] (rho = sin^2 psi), uniform trapezoid on each angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureGrid {
    n_psi: usize,
    n_theta: usize,
}

impl QuadratureGrid {
    pub fn new(n_psi: usize, n_theta: usize) -> Result<Self> {
        if n_psi == 0 || n_theta == 0 {
            return Err(Error::InvalidArgument(format!(
                "quadrature grid needs at least one node per direction, got {n_psi} x {n_theta}"
            )));
        }
        Ok(QuadratureGrid { n_psi, n_theta })
    }

    pub fn n_psi(&self) -> usize {
        self.n_psi
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Smallest grid certified for the matrix element of the given symbol
    /// at degree N: the integrand has trigonometric degree about
    /// 2N + 2g + 2a in psi and 2N + |b1| + |b2| per angle, plus guard nodes.
    pub fn for_matrix_element(n: u32, s: &MonomialSymbol) -> Self {
        let n_psi = 2 * n as usize + 2 * s.rho_power as usize + 2 * s.eta_power as usize + 8;
        let n_theta =
            2 * (2 * n as usize + s.theta1_freq.unsigned_abs() as usize
                + s.theta2_freq.unsigned_abs() as usize)
                + 4;
        QuadratureGrid { n_psi, n_theta }
    }

    /// Grid sized for products of two degree-N basis functions (Gram
    /// matrices, norms): angular degree up to 2N, psi degree about 2N + 2.
    pub fn for_degree(n: u32) -> Self {
        QuadratureGrid {
            n_psi: n as usize + 8,
            n_theta: 2 * n as usize + 8,
        }
    }
}

/// Gauss-Legendre nodes mapped to psi = (x+1) pi/4: returns (rho, weight)
/// with rho = sin^2 psi and the weight carrying the full drho = sin(2 psi)
/// dpsi Jacobian, so sum_r w_r f(rho_r) approximates the integral of f
/// over rho in [0, 1].
pub(crate) fn psi_nodes(n_psi: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n_psi);
    let mut rho = Vec::with_capacity(n_psi);
    let mut w = Vec::with_capacity(n_psi);
    for (&x, &wx) in xs.iter().zip(&ws) {
        let psi = (x + 1.0) * FRAC_PI_4;
        rho.push(psi.sin().powi(2));
        w.push(wx * FRAC_PI_4 * (2.0 * psi).sin());
    }
    (rho, w)
}

/// Integral of g over S3 against the normalized volume element
/// (2 pi^2)^{-1} dS = (1/4 pi^2) drho dtheta1 dtheta2.
pub fn integrate_s3(grid: &QuadratureGrid, g: impl Fn(&HopfPoint) -> Complex64 + Sync) -> Complex64 {
    let (rho, w) = psi_nodes(grid.n_psi);
    let m = grid.n_theta;
    let row_means: Vec<Complex64> = (0..rho.len())
        .into_par_iter()
        .map(|r| {
            let mut samples = Vec::with_capacity(m * m);
            for i1 in 0..m {
                let theta1 = TAU * i1 as f64 / m as f64;
                for i2 in 0..m {
                    let theta2 = TAU * i2 as f64 / m as f64;
                    samples.push(g(&HopfPoint {
                        rho: rho[r],
                        theta1,
                        theta2,
                    }));
                }
            }
            pairwise_sum(&samples) / (m * m) as f64
        })
        .collect();
    let weighted: Vec<Complex64> = row_means.iter().zip(&w).map(|(v, &wr)| v * wr).collect();
    pairwise_sum(&weighted)
}

/// i^{-a} as an exact complex unit.
fn inverse_i_power(a: u32) -> Complex64 {
    match a % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Matrix element of the quantized symbol by quadrature, sharing nothing
/// with the closed-sum engine past the sign sequence itself.
///
/// The operator image of the basis function is assembled term-wise: each
/// monomial picks up the quantization factor j^{x1}(N-j)^{x2}/(i^a N^{a+x1+x2})
/// and its amplitude is replaced by the analytic a-th rho-derivative via the
/// Leibniz expansion. The image is then multiplied by the position factor
/// rho^g e^{i b1 theta1} e^{i b2 theta2} and integrated against the
/// conjugated basis function over S3. (Pairing the symbol's oscillation
/// with the unconjugated image is what reproduces the bilinear form: the
/// theta1 trapezoid sum then selects exactly the column l = j + b1, which
/// is the pairing the closed sum is built on.)
///
/// The triple grid sum factorizes exactly over (psi, theta1, theta2) for
/// each monomial pair (j, l), so the implementation regroups it as
/// value = sum_{j,l} cG_j conj(c_l) T_{jl} Theta1_{jl} Theta2_{jl}
/// with T the weighted radial sum and Theta the plain trapezoid phase
/// sums. The regrouping is an algebraic identity; the trapezoid and
/// Gauss-Legendre rules themselves are honest (no analytic shortcuts).
pub fn matrix_element_quadrature(
    n: u32,
    k: u32,
    s: &MonomialSymbol,
    grid: &QuadratureGrid,
    branch: Branch,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "degree N = 0 leaves the quantization weights j/N undefined".into(),
        ));
    }
    if n > 64 {
        return Err(Error::InvalidArgument(format!(
            "quadrature oracle is restricted to N <= 64 (exact-coefficient regime), got N = {n}"
        )));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "basis index k = {k} exceeds degree N = {n}"
        )));
    }
    let required = QuadratureGrid::for_matrix_element(n, s);
    if grid.n_psi < required.n_psi || grid.n_theta < required.n_theta {
        return Err(Error::InvalidArgument(format!(
            "grid {} x {} is below the certified minimum {} x {} for this symbol at N = {n}",
            grid.n_psi, grid.n_theta, required.n_psi, required.n_theta
        )));
    }

    let (gamma, a) = (s.rho_power, s.eta_power);
    let (x1, x2) = (s.xi1_power, s.xi2_power);
    let (b1, b2) = (s.theta1_freq, s.theta2_freq);
    let nf = n as f64;
    let dim = n as usize + 1;

    // unit-modulus coefficient times the exact sqrt-binomial normalization
    let sigma = generate(dim, branch)?;
    let base: Vec<Complex64> = (0..dim)
        .map(|j| {
            let angle = TAU * ((j as u64 * k as u64) % (n as u64 + 1)) as f64 / (nf + 1.0);
            Complex64::from_polar(sigma.values()[j] as f64, angle) * binomial(n, j as u32).sqrt()
        })
        .collect();

    // image coefficients: quantization weight and i^{-a} N^{-a}
    let quant = |j: usize| -> f64 {
        (j as f64).powi(x1 as i32) * (nf - j as f64).powi(x2 as i32)
            / nf.powi((x1 + x2) as i32)
    };
    let scale = inverse_i_power(a) / nf.powi(a as i32);
    let coef_image: Vec<Complex64> = (0..dim).map(|j| base[j] * quant(j) * scale).collect();

    let (rho, w) = psi_nodes(grid.n_psi);
    let nr = rho.len();

    // plain amplitudes amp[r][l] and Leibniz-derivative amplitudes damp[r][j]
    let mut amp = vec![0.0f64; nr * dim];
    for (r, &rh) in rho.iter().enumerate() {
        for l in 0..dim {
            amp[r * dim + l] =
                rh.powf(l as f64 / 2.0) * (1.0 - rh).powf((n as usize - l) as f64 / 2.0);
        }
    }
    let selection = b1 == -b2;
    let mut damp = vec![0.0f64; nr * dim];
    for j in 0..dim {
        if selection && !term_integrable(j as u32, n, gamma, b1, a) {
            continue; // pole term whose divergent splits cancel in the form
        }
        let cs = leibniz_coeffs(j as u32, n, a);
        for (r, &rh) in rho.iter().enumerate() {
            let mut v = 0.0;
            for (a1, &c) in cs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                v += c
                    * rh.powf(j as f64 / 2.0 - a1 as f64)
                    * (1.0 - rh).powf((n as usize - j) as f64 / 2.0 - (a as usize - a1) as f64);
            }
            damp[r * dim + j] = v;
        }
    }

    // radial factor T[j][l] = sum_r w_r rho_r^g damp_{rj} amp_{rl}
    let mut t = vec![0.0f64; dim * dim];
    for j in 0..dim {
        for l in 0..dim {
            let mut acc = NeumaierSum::default();
            for r in 0..nr {
                acc.add(w[r] * rho[r].powi(gamma as i32) * damp[r * dim + j] * amp[r * dim + l]);
            }
            t[j * dim + l] = acc.value();
        }
    }

    // trapezoid phase sums (1/M) sum_m e^{2 pi i m d / M}, via exact
    // integer index reduction into a table of M-th roots of unity
    let m = grid.n_theta;
    let roots: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(1.0, TAU * i as f64 / m as f64))
        .collect();
    let theta_sum = |d: i64| -> Complex64 {
        let step = d.rem_euclid(m as i64) as usize;
        let mut idx = 0usize;
        let mut acc = NeumaierComplexSum::default();
        for _ in 0..m {
            acc.add(roots[idx]);
            idx += step;
            if idx >= m {
                idx -= m;
            }
        }
        acc.value() / m as f64
    };

    let mut total = NeumaierComplexSum::default();
    for j in 0..dim {
        if coef_image[j] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for l in 0..dim {
            let radial = t[j * dim + l];
            if radial == 0.0 {
                continue;
            }
            let phase1 = theta_sum(j as i64 + b1 - l as i64);
            let phase2 = theta_sum(l as i64 - j as i64 + b2);
            total.add(coef_image[j] * base[l].conj() * radial * phase1 * phase2);
        }
    }
    Ok(s.coeff * total.value())
}
