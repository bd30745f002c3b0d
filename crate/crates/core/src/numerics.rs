//! Shared numerical building blocks: log-gamma, compensated and pairwise
//! summation, a signed log-domain scalar, Gauss-Legendre nodes, golden-section
//! maximization, and least-squares line fits.

use num_complex::Complex64;

/// Natural log of the Gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma expects a positive argument, got {x}");
    libm::lgamma(x)
}

/// Falling factorial x (x-1) ... (x-m+1); the empty product is 1.
pub fn falling(x: f64, m: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..m {
        p *= x - i as f64;
    }
    p
}

/// Exact binomial coefficient as f64 (exact through n = 64, where the largest
/// value still fits an u128 without overflow).
pub fn binomial(n: u32, j: u32) -> f64 {
    assert!(j <= n && n <= 128);
    let j = j.min(n - j);
    let mut c: u128 = 1;
    for i in 0..j {
        // multiply first, then divide; the intermediate is always an integer
        c = c * (n - j + i + 1) as u128 / (i + 1) as u128;
    }
    c as f64
}

/// A nonzero real carried as sign and log of absolute value, with an explicit
/// zero state. Keeps quantities like Gamma-function ratios representable far
/// beyond f64 range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMagnitude {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogMagnitude {
                sign: if v > 0.0 { 1 } else { -1 },
                ln_abs: v.abs().ln(),
            }
        }
    }

    pub fn value(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    /// The value after multiplying by exp(ln_scale), evaluated in one exp.
    pub fn scaled_value(self, ln_scale: f64) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * (self.ln_abs + ln_scale).exp()
        }
    }
}

/// Neumaier's compensated accumulator: exact to one rounding for sums whose
/// terms vary wildly in magnitude or cancel.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex Neumaier accumulator (componentwise).
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl NeumaierComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Double-double accumulator (roughly 32 significant digits); used where a
/// sum cancels by many orders of magnitude.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = two_sum(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Deterministic pairwise summation; the reduction tree depends only on the
/// slice length, never on thread scheduling.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        let mut s = Complex64::new(0.0, 0.0);
        for x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Real variant of [`pairwise_sum`].
pub fn pairwise_sum_real(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_real(&xs[..mid]) + pairwise_sum_real(&xs[mid..])
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 2..=n {
        let mf = m as f64;
        let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on (-1, 1), by Newton iteration on the
/// Legendre recurrence. Nodes are returned in increasing order and the rule
/// is exactly symmetric about 0.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // standard starting guess, accurate enough for global convergence
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal function on [a, b].
/// Returns the best abscissa and value after `iters` interval reductions.
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: u32) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Unweighted least-squares line through (xs, ys); returns (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
