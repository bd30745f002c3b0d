//! Matrix elements of quantized torus symbols against the Rudin-Shapiro
//! basis, their Clifford-torus limit, and convergence diagnostics.
//!
//! A monomial symbol rho^g e^{i b1 theta1} e^{i b2 theta2} eta^a xi1^x1
//! xi2^x2 pairs two basis monomials only when their angular frequencies
//! match, which forces theta2_freq = -theta1_freq and collapses the matrix
//! element to a single sum over j:
//!
//! value = coeff e^{-2 pi i k beta/(N+1)} (N!/(i^a N^a)) sum_j sigma_j
//!   sigma_{j+beta} [j!(N-j)!(j+beta)!(N-j-beta)!]^{-1/2} (j/N)^{x1}
//!   (1-j/N)^{x2} I_j,
//!
//! with beta = theta1_freq and I_j the rho-integral defined at
//! [`rho_integral`]. Three regimes need three numerical treatments:
//!
//! * a = 0, beta = 0 (`Case1`): every factor is a small-integer ratio; the
//!   sum telescopes exactly and is computed with plain f64 products.
//! * a = 0, beta != 0 (`Case2`): one log-gamma anchor at the window edge,
//!   then an exact multiplicative recurrence in j, so no per-term exp noise.
//! * a >= 1 (`Case3`): terms are O(1) but cancel to O(1/N); each term is
//!   assembled in the log domain and the sum is compensated, double-double
//!   for a >= 3. The report carries |value| / sum |terms| so downstream
//!   code can tell a genuine small value from cancellation noise.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    falling, linear_fit, ln_gamma, DoubleDouble, LogMagnitude, NeumaierSum,
};
use crate::rudin_shapiro::{generate, Branch};

/// Ratio below which a case-3 closed sum is considered to have lost all
/// significant digits to cancellation.
pub const CANCELLATION_FLAG_THRESHOLD: f64 = 1e-12;

/// One monomial symbol on the cotangent fibers over the torus coordinates:
/// rho^rho_power e^{i theta1_freq theta1} e^{i theta2_freq theta2}
/// eta^eta_power xi1^xi1_power xi2^xi2_power, times coeff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonomialSymbol {
    pub rho_power: u32,
    pub theta1_freq: i64,
    pub theta2_freq: i64,
    pub eta_power: u32,
    pub xi1_power: u32,
    pub xi2_power: u32,
    pub coeff: Complex64,
}

impl MonomialSymbol {
    /// Unit-coefficient symbol from the six exponents.
    pub fn from_powers(
        rho_power: u32,
        theta1_freq: i64,
        theta2_freq: i64,
        eta_power: u32,
        xi1_power: u32,
        xi2_power: u32,
    ) -> Self {
        MonomialSymbol {
            rho_power,
            theta1_freq,
            theta2_freq,
            eta_power,
            xi1_power,
            xi2_power,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    /// The constant symbol 1.
    pub fn unit() -> Self {
        Self::from_powers(0, 0, 0, 0, 0, 0)
    }
}

/// A finite sum of monomial symbols.
#[derive(Clone, Debug, Default)]
pub struct SymbolPolynomial {
    pub terms: Vec<MonomialSymbol>,
}

/// Which branch of the reduced sum produced a matrix element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    ZeroSelection,
    Case1,
    Case2,
    Case3,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::ZeroSelection => "zero_selection",
            CaseTag::Case1 => "case1",
            CaseTag::Case2 => "case2",
            CaseTag::Case3 => "case3",
        }
    }
}

/// How a matrix element was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedSum,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedSum => "closed_sum",
            Method::Quadrature => "quadrature",
        }
    }
}

/// A matrix element together with the diagnostics needed to judge it.
#[derive(Clone, Copy, Debug)]
pub struct MatrixElementReport {
    pub value: Complex64,
    pub case: CaseTag,
    pub n: u32,
    pub k: u32,
    pub max_term_magnitude: f64,
    pub cancellation_ratio: f64,
    pub method: Method,
}

impl MatrixElementReport {
    /// True when a case-3 sum cancelled below the reliability threshold.
    pub fn precision_flagged(&self) -> bool {
        self.case == CaseTag::Case3 && self.cancellation_ratio < CANCELLATION_FLAG_THRESHOLD
    }
}

/// N -> infinity limit of the matrix element: the symbol integrated over
/// the Clifford-torus family against its invariant measure, which kills
/// every oscillating or eta-carrying monomial and leaves a Beta integral.
pub fn clifford_limit(s: &MonomialSymbol) -> Complex64 {
    if s.eta_power != 0 || s.theta1_freq != 0 || s.theta2_freq != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let top = s.rho_power + s.xi1_power + s.xi2_power;
    // (g+x1)! x2! / (g+x1+x2+1)! == 1 / ((top+1) * binomial(top, x2))
    let beta_integral = if top <= 128 {
        1.0 / ((top as f64 + 1.0) * crate::numerics::binomial(top, s.xi2_power))
    } else {
        (ln_gamma((s.rho_power + s.xi1_power) as f64 + 1.0) + ln_gamma(s.xi2_power as f64 + 1.0)
            - ln_gamma(top as f64 + 2.0))
        .exp()
    };
    s.coeff * beta_integral
}

/// Leibniz coefficients of the a-th rho-derivative of
/// rho^{j/2}(1-rho)^{(N-j)/2}: the split a = a1 + a2 contributes
/// C(a, a1) (-1)^{a2} fall(j/2, a1) fall((N-j)/2, a2) times the monomial
/// with exponents lowered by (a1, a2). The falling factorials vanish on
/// integer half-exponents, so the nonzero entries form one contiguous run.
pub(crate) fn leibniz_coeffs(j: u32, n: u32, a: u32) -> Vec<f64> {
    let jh = j as f64 / 2.0;
    let mh = (n - j) as f64 / 2.0;
    (0..=a)
        .map(|a1| {
            let a2 = a - a1;
            let sign = if a2 % 2 == 0 { 1.0 } else { -1.0 };
            crate::numerics::binomial(a, a1) * sign * falling(jh, a1) * falling(mh, a2)
        })
        .collect()
}

/// True when every Leibniz split with a nonzero coefficient has strictly
/// positive Gamma arguments, i.e. the lowered monomial is still integrable.
/// Splits whose coefficient vanishes contribute nothing and impose no
/// constraint; this matters exactly at the window edges, where the
/// surviving splits carry the pole contributions.
pub(crate) fn term_integrable(j: u32, n: u32, gamma: u32, beta: i64, a: u32) -> bool {
    let cs = leibniz_coeffs(j, n, a);
    let bh = beta as f64 / 2.0;
    for (a1, &c) in cs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let a2 = (a as usize - a1) as f64;
        let arg_rho = j as f64 + gamma as f64 + bh - a1 as f64 + 1.0;
        let arg_one_minus = (n - j) as f64 - bh - a2 + 1.0;
        if arg_rho <= 0.0 || arg_one_minus <= 0.0 {
            return false;
        }
    }
    true
}

/// The rho-integral I_j: the a-th rho-derivative of
/// rho^{j/2}(1-rho)^{(N-j)/2}, integrated against
/// rho^{j/2 + g + beta/2}(1-rho)^{(N-j)/2 - beta/2} over [0, 1].
///
/// Each Leibniz split is a Beta value Gamma(A - a1)Gamma(B - a2) /
/// Gamma(N+g-a+2) with A = j+g+beta/2+1, B = N-j-beta/2+1. The splits
/// share the denominator, and consecutive numerators differ by the exact
/// rational ratio (B-a+a1-1)/(A-a1), so one log-gamma anchor plus a running
/// ratio covers the whole contiguous nonzero run without per-split rounding.
/// Returned as a signed log-magnitude: the linear-domain value can
/// underflow f64 even though the full matrix-element term is O(1).
pub fn rho_integral(j: u32, n: u32, gamma: u32, beta: i64, a: u32) -> Result<LogMagnitude> {
    if j > n {
        return Err(Error::InvalidArgument(format!(
            "monomial exponent j = {j} exceeds degree N = {n}"
        )));
    }
    let cs = leibniz_coeffs(j, n, a);
    let bh = beta as f64 / 2.0;
    let a_full = j as f64 + gamma as f64 + bh + 1.0;
    let b_full = (n - j) as f64 - bh + 1.0;

    let nz: Vec<usize> = cs
        .iter()
        .enumerate()
        .filter_map(|(a1, &c)| (c != 0.0).then_some(a1))
        .collect();
    let (&anchor, &last) = match (nz.first(), nz.last()) {
        (Some(first), Some(last)) => (first, last),
        _ => return Ok(LogMagnitude::ZERO),
    };
    for &a1 in &nz {
        let a2 = (a as usize - a1) as f64;
        if a_full - a1 as f64 <= 0.0 || b_full - a2 <= 0.0 {
            return Err(Error::Domain(format!(
                "divergent rho-integral: split {a1}+{} of j = {j}, N = {n}, \
                 rho exponent {gamma}, frequency {beta} has a nonpositive Gamma argument",
                a as usize - a1
            )));
        }
    }

    let denom_arg = (n + gamma) as f64 - a as f64 + 2.0;
    let ln_anchor = ln_gamma(a_full - anchor as f64)
        + ln_gamma(b_full - (a as usize - anchor) as f64)
        - ln_gamma(denom_arg);

    let mut total = NeumaierSum::default();
    let mut rel = 1.0;
    for (a1, &c) in cs.iter().enumerate().take(last + 1).skip(anchor) {
        if a1 > anchor {
            rel *= (b_full - a as f64 + (a1 as f64 - 1.0)) / (a_full - a1 as f64);
        }
        total.add(c * rel);
    }
    let total = total.value();
    if total == 0.0 {
        return Ok(LogMagnitude::ZERO);
    }
    Ok(LogMagnitude {
        sign: if total > 0.0 { 1 } else { -1 },
        ln_abs: total.abs().ln() + ln_anchor,
    })
}

/// (j/N)^{x1} (1 - j/N)^{x2}, the quantization weight of the xi powers,
/// with the 0^0 = 1 convention at the window edges.
fn xi_weight(j: u32, n: u32, x1: u32, x2: u32) -> f64 {
    let r = j as f64 / n as f64;
    r.powi(x1 as i32) * (1.0 - r).powi(x2 as i32)
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

/// e^{-2 pi i k beta / (N+1)} with the angle reduced exactly mod N+1
/// before any floating-point arithmetic.
fn selection_phase(n: u32, k: u32, beta: i64) -> Complex64 {
    let modulus = n as i128 + 1;
    let r = (k as i128 * beta as i128).rem_euclid(modulus);
    Complex64::from_polar(1.0, -TAU * r as f64 / modulus as f64)
}

/// The diagonal matrix element of the quantized symbol against the basis
/// function (N, k) of the given branch, by the reduced closed sum.
pub fn matrix_element(
    n: u32,
    k: u32,
    s: &MonomialSymbol,
    branch: Branch,
) -> Result<MatrixElementReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "degree N = 0 leaves the quantization weights j/N undefined".into(),
        ));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "basis index k = {k} exceeds degree N = {n}"
        )));
    }

    let report = |value, case, max_term: f64, ratio: f64| MatrixElementReport {
        value,
        case,
        n,
        k,
        max_term_magnitude: max_term,
        cancellation_ratio: ratio.clamp(0.0, 1.0),
        method: Method::ClosedSum,
    };

    if s.theta1_freq != -s.theta2_freq {
        return Ok(report(
            Complex64::new(0.0, 0.0),
            CaseTag::ZeroSelection,
            0.0,
            1.0,
        ));
    }
    let beta = s.theta1_freq;
    let (gamma, a) = (s.rho_power, s.eta_power);
    let (x1, x2) = (s.xi1_power, s.xi2_power);
    let case = match (a, beta) {
        (0, 0) => CaseTag::Case1,
        (0, _) => CaseTag::Case2,
        _ => CaseTag::Case3,
    };

    // window: both j and j + beta must index valid monomials
    let j_lo_signed = (-beta).max(0);
    let j_hi_signed = (n as i64).min(n as i64 - beta);
    if j_lo_signed > j_hi_signed {
        return Ok(report(Complex64::new(0.0, 0.0), case, 0.0, 1.0));
    }
    let (j_lo, j_hi) = (j_lo_signed as u32, j_hi_signed as u32);

    let seq = generate(n as usize + 1, branch)?;
    let sigma = seq.values();
    let pair_sign = |j: u32| -> f64 { (sigma[j as usize] * sigma[(j as i64 + beta) as usize]) as f64 };

    let nf = n as f64;
    let gf = gamma as f64;
    let bh = beta as f64 / 2.0;

    let mut abs_sum = 0.0f64;
    let mut max_term = 0.0f64;

    let raw_sum = match case {
        CaseTag::Case1 => {
            // (N!/ (N+g+1)!) * (j+g)!/j!  ==  prod_{t=1..g+1} 1/(N+t) * prod_{t=1..g} (j+t):
            // exact small-integer products, all terms nonnegative.
            let mut cn = 1.0f64;
            for t in 1..=gamma + 1 {
                cn /= nf + t as f64;
            }
            let mut acc = NeumaierSum::default();
            for j in j_lo..=j_hi {
                let mut u = cn;
                for t in 1..=gamma {
                    u *= (j + t) as f64;
                }
                let t = u * xi_weight(j, n, x1, x2);
                acc.add(t);
                abs_sum += t.abs();
                max_term = max_term.max(t.abs());
            }
            Complex64::new(acc.value(), 0.0)
        }
        CaseTag::Case2 => {
            // one log-gamma anchor at j_lo, then the exact term ratio
            // m_{j+1}/m_j = (j+g+beta/2+1)/(N-j-beta/2)
            //              * sqrt((N-j)(N-j-beta) / ((j+1)(j+1+beta)))
            let jl = j_lo as f64;
            let ln_anchor = ln_gamma(nf + 1.0) + ln_gamma(jl + gf + bh + 1.0)
                + ln_gamma(nf - jl - bh + 1.0)
                - ln_gamma(nf + gf + 2.0)
                - 0.5 * (ln_gamma(jl + 1.0)
                    + ln_gamma(nf - jl + 1.0)
                    + ln_gamma(jl + beta as f64 + 1.0)
                    + ln_gamma(nf - jl - beta as f64 + 1.0));
            let mut m = ln_anchor.exp();
            let mut acc = NeumaierSum::default();
            for j in j_lo..=j_hi {
                let jf = j as f64;
                let t = pair_sign(j) * xi_weight(j, n, x1, x2) * m;
                acc.add(t);
                abs_sum += t.abs();
                max_term = max_term.max(t.abs());
                if j < j_hi {
                    m *= (jf + gf + bh + 1.0) / (nf - jf - bh)
                        * ((nf - jf) * (nf - jf - beta as f64)
                            / ((jf + 1.0) * (jf + 1.0 + beta as f64)))
                        .sqrt();
                }
            }
            Complex64::new(acc.value(), 0.0)
        }
        CaseTag::Case3 => {
            // per-term log assembly; N!/N^a and the inverse norms fold into
            // the exponent so nothing overflows at large N
            let ln_fact = ln_gamma(nf + 1.0) - a as f64 * nf.ln();
            let mut acc = NeumaierSum::default();
            let mut acc_dd = DoubleDouble::default();
            for j in j_lo..=j_hi {
                if !term_integrable(j, n, gamma, beta, a) {
                    continue;
                }
                let integral = rho_integral(j, n, gamma, beta, a)?;
                if integral.sign == 0 {
                    continue;
                }
                let jf = j as f64;
                let ln_norms = 0.5
                    * (ln_gamma(jf + 1.0)
                        + ln_gamma(nf - jf + 1.0)
                        + ln_gamma(jf + beta as f64 + 1.0)
                        + ln_gamma(nf - jf - beta as f64 + 1.0));
                let t = pair_sign(j)
                    * integral.sign as f64
                    * xi_weight(j, n, x1, x2)
                    * (integral.ln_abs + ln_fact - ln_norms).exp();
                if a >= 3 {
                    acc_dd.add(t);
                } else {
                    acc.add(t);
                }
                abs_sum += t.abs();
                max_term = max_term.max(t.abs());
            }
            let total = if a >= 3 { acc_dd.value() } else { acc.value() };
            Complex64::new(total, 0.0)
        }
        CaseTag::ZeroSelection => unreachable!("handled above"),
    };

    let value = s.coeff * selection_phase(n, k, beta) * inverse_i_power(a) * raw_sum;
    let ratio = if abs_sum == 0.0 {
        1.0
    } else {
        raw_sum.norm() / abs_sum
    };
    Ok(report(value, case, max_term * s.coeff.norm(), ratio))
}

/// Matrix element of a polynomial symbol, by linearity.
pub fn matrix_element_poly(
    n: u32,
    k: u32,
    p: &SymbolPolynomial,
    branch: Branch,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for term in &p.terms {
        total += matrix_element(n, k, term, branch)?.value;
    }
    Ok(total)
}

/// How to pick the basis index k at each degree of a convergence sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KPolicy {
    Zero,
    Half,
    Max,
    Fixed(u32),
}

impl KPolicy {
    pub fn index_for(self, n: u32) -> Result<u32> {
        match self {
            KPolicy::Zero => Ok(0),
            KPolicy::Half => Ok(n / 2),
            KPolicy::Max => Ok(n),
            KPolicy::Fixed(k) if k <= n => Ok(k),
            KPolicy::Fixed(k) => Err(Error::InvalidArgument(format!(
                "fixed basis index k = {k} exceeds degree N = {n}"
            ))),
        }
    }
}

/// One degree of a convergence sweep.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: u32,
    pub k: u32,
    pub value: Complex64,
    pub deviation: f64,
}

/// A convergence sweep toward the Clifford-torus limit.
#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// (slope, intercept) of the log-log fit of deviation against N, over
    /// the degrees large enough to sit in the asymptotic regime; None when
    /// fewer than two usable points remain (e.g. exact-zero deviations).
    pub slope: Option<(f64, f64)>,
    /// True for non-oscillating position symbols whose deviations are all
    /// below 1e-12: the sum telescopes and the limit is attained exactly.
    pub exact: bool,
}

/// Smallest degree counted toward the fitted slope; smaller N sit in the
/// pre-asymptotic regime and contaminate the exponent.
const FIT_MIN_DEGREE: u32 = 64;

/// Evaluate the matrix element along a ladder of degrees and fit the
/// log-log decay rate of the deviation from the Clifford-torus limit.
pub fn convergence_study(
    s: &MonomialSymbol,
    degrees: &[u32],
    k_policy: KPolicy,
    branch: Branch,
) -> Result<ConvergenceStudy> {
    if degrees.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "convergence study needs at least 3 degrees, got {}",
            degrees.len()
        )));
    }
    let limit = clifford_limit(s);
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let k = k_policy.index_for(n)?;
        let rep = matrix_element(n, k, s, branch)?;
        rows.push(ConvergenceRow {
            n,
            k,
            value: rep.value,
            deviation: (rep.value - limit).norm(),
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= FIT_MIN_DEGREE && r.deviation > 1e-300)
        .map(|r| ((r.n as f64).ln(), r.deviation.ln()))
        .collect();
    let slope = (pts.len() >= 2).then(|| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        linear_fit(&xs, &ys)
    });
    let exact = s.eta_power == 0
        && s.theta1_freq == 0
        && s.theta2_freq == 0
        && s.xi1_power == 0
        && s.xi2_power == 0
        && rows.iter().all(|r| r.deviation < 1e-12);
    Ok(ConvergenceStudy { rows, slope, exact })
}

/// Largest normalized case-3 term magnitude
/// |[j!(N-j)!(j+beta)!(N-j-beta)!]^{-1/2} I_j| * (N+g-a+1)! * N / max(j,1)^g
/// over the summation window. Finiteness certifies the cancellation
/// Lemma's per-term bound with a measured constant. Computed entirely in
/// the log domain: the factorial alone overflows f64 from N ~ 171.
pub fn case3_term_bound_check(n: u32, s: &MonomialSymbol) -> Result<f64> {
    if s.eta_power == 0 {
        return Err(Error::InvalidArgument(
            "term bound check applies to symbols with at least one eta power".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("degree N must be positive".into()));
    }
    let (gamma, a) = (s.rho_power, s.eta_power);
    let beta = s.theta1_freq;
    let denom_arg = (n + gamma) as f64 - a as f64 + 2.0;
    if denom_arg <= 0.0 {
        return Err(Error::Domain(format!(
            "eta power {a} exceeds N + rho power + 1 = {}; the Lemma scale (N+g-a+1)! is undefined",
            n + gamma + 1
        )));
    }
    let ln_scale = ln_gamma(denom_arg) + (n as f64).ln();

    let j_lo_signed = (-beta).max(0);
    let j_hi_signed = (n as i64).min(n as i64 - beta);
    if j_lo_signed > j_hi_signed {
        return Ok(0.0);
    }
    let nf = n as f64;
    let mut worst = 0.0f64;
    for j in j_lo_signed as u32..=j_hi_signed as u32 {
        if !term_integrable(j, n, gamma, beta, a) {
            continue;
        }
        let integral = rho_integral(j, n, gamma, beta, a)?;
        if integral.sign == 0 {
            continue;
        }
        let jf = j as f64;
        let ln_norms = 0.5
            * (ln_gamma(jf + 1.0)
                + ln_gamma(nf - jf + 1.0)
                + ln_gamma(jf + beta as f64 + 1.0)
                + ln_gamma(nf - jf - beta as f64 + 1.0));
        let ratio =
            (integral.ln_abs + ln_scale - ln_norms - gamma as f64 * jf.max(1.0).ln()).exp();
        worst = worst.max(ratio);
    }
    Ok(worst)
}
