//! Rudin-Shapiro sign sequences and their autocorrelation growth.
//!
//! The pair (P_m, Q_m) doubles by P_{m+1} = P_m ++ Q_m and
//! Q_{m+1} = P_m ++ (-Q_m), starting from P_0 = Q_0 = [1]. A sequence of
//! length n is the first n signs of the shortest doubled pair of length at
//! least n. On the P branch the recursion extends and never rewrites, so
//! P prefixes agree across all lengths. Q_{m+1} instead begins with P_m,
//! so Q snapshots of different dyadic sizes genuinely differ; a length-n Q
//! sequence is a prefix of its covering dyadic snapshot only.
//!
//! Autocorrelations use the truncated window, both indices inside [0, n-1],
//! which is exactly the index window that appears in the reduced matrix
//! element sums, so the two modules stay bit-compatible.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numerics::linear_fit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    P,
    Q,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::P => "P",
            Branch::Q => "Q",
        }
    }
}

/// A finite Rudin-Shapiro sign sequence. Every entry is -1 or +1 and the
/// first entry is +1 on both branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsSequence {
    branch: Branch,
    values: Vec<i8>,
}

impl RsSequence {
    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// First n signs of the requested branch, by unrolling the doubling rule from
/// P_0 = Q_0 = [1] to the smallest power of two not below n.
pub fn generate(n: usize, branch: Branch) -> Result<RsSequence> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sequence length must be at least 1".into(),
        ));
    }
    let cap = n.next_power_of_two();
    let mut p: Vec<i8> = vec![1];
    let mut q: Vec<i8> = vec![1];
    while p.len() < cap {
        let mut np = Vec::with_capacity(p.len() * 2);
        np.extend_from_slice(&p);
        np.extend_from_slice(&q);
        let mut nq = Vec::with_capacity(p.len() * 2);
        nq.extend_from_slice(&p);
        nq.extend(q.iter().map(|s| -s));
        p = np;
        q = nq;
    }
    let mut values = match branch {
        Branch::P => p,
        Branch::Q => q,
    };
    values.truncate(n);
    Ok(RsSequence { branch, values })
}

/// Closed form for the P branch: the sign at index j is (-1) raised to the
/// number of "11" blocks in the binary expansion of j.
pub fn direct_sign(j: u64) -> i8 {
    if (j & (j >> 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn autocorrelation_slice(values: &[i8], beta: i64) -> i64 {
    let n = values.len() as i64;
    let lo = 0.max(-beta);
    let hi = (n - 1).min(n - 1 - beta);
    let mut acc = 0i64;
    for j in lo..=hi {
        acc += values[j as usize] as i64 * values[(j + beta) as usize] as i64;
    }
    acc
}

/// Truncated-window autocorrelation: the sum of sigma_j sigma_{j+beta} over
/// all j with both indices inside the sequence. Symmetric in beta.
pub fn autocorrelation(seq: &RsSequence, beta: i64) -> Result<i64> {
    if beta.unsigned_abs() as usize >= seq.len() {
        return Err(Error::InvalidArgument(format!(
            "shift {beta} out of range for length {}",
            seq.len()
        )));
    }
    Ok(autocorrelation_slice(seq.values(), beta))
}

fn spectrum_slice(values: &[i8]) -> Result<Vec<i64>> {
    let n = values.len();
    let m = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = values
        .iter()
        .map(|&s| Complex64::new(s as f64, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(m)
        .collect();
    planner.plan_fft_forward(m).process(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex64::new(v.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut out = Vec::with_capacity(n);
    let mut drift: f64 = 0.0;
    for v in buf.iter().take(n) {
        let x = v.re * scale;
        let r = x.round();
        drift = drift.max((x - r).abs());
        out.push(r as i64);
    }
    // the true values are integers; anything near a half-integer means the
    // transform has lost them
    if drift > 0.25 {
        return Err(Error::Precision(format!(
            "autocorrelation spectrum rounding drift {drift:.3e} exceeds 0.25"
        )));
    }
    Ok(out)
}

/// All truncated-window autocorrelations at once, indexed by beta = 0..n-1,
/// via one zero-padded FFT convolution (O(n log n)) with integer rounding.
pub fn autocorr_spectrum(seq: &RsSequence) -> Result<Vec<i64>> {
    spectrum_slice(seq.values())
}

fn growth_exponent_impl(
    lengths: &[usize],
    make: impl Fn(usize) -> Result<Vec<i8>>,
) -> Result<(f64, f64)> {
    let mut distinct: Vec<usize> = lengths.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidArgument(
            "growth-exponent fit needs at least 3 distinct lengths".into(),
        ));
    }
    let mut ln_n = Vec::with_capacity(distinct.len());
    let mut ln_max = Vec::with_capacity(distinct.len());
    for &n in &distinct {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "growth-exponent fit needs lengths of at least 2".into(),
            ));
        }
        let values = make(n)?;
        let spectrum = spectrum_slice(&values)?;
        let max = spectrum[1..]
            .iter()
            .map(|a| a.unsigned_abs())
            .max()
            .unwrap_or(0);
        if max == 0 {
            return Err(Error::InvalidArgument(format!(
                "all autocorrelations vanish at length {n}; nothing to fit"
            )));
        }
        ln_n.push((n as f64).ln());
        ln_max.push((max as f64).ln());
    }
    Ok(linear_fit(&ln_n, &ln_max))
}

/// Least-squares fit of log max_{0<beta<n} |autocorrelation| against log n
/// over the given lengths; returns (slope, intercept).
pub fn autocorr_growth_exponent(lengths: &[usize], branch: Branch) -> Result<(f64, f64)> {
    growth_exponent_impl(lengths, |n| Ok(generate(n, branch)?.values))
}

/// Same fit for an arbitrary sign-sequence family; the seam that lets tests
/// measure reference families (for example the all-ones sequence, whose
/// exponent is exactly 1).
pub fn autocorr_growth_exponent_of(
    lengths: &[usize],
    make: impl Fn(usize) -> Result<Vec<i8>>,
) -> Result<(f64, f64)> {
    growth_exponent_impl(lengths, make)
}
