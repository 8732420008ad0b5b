//! Small numeric helpers shared by the analysis modules.
//!
//! Everything is computed in log space where overflow is a concern:
//! binomial coefficients with arguments around `m ~ 1000` do not fit in
//! `f64` directly, but their logarithms do.

use alloc::vec::Vec;

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// ln(1+x), accurate near zero.
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn round(x: f64) -> f64 {
    libm::round(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

/// Cached table of ln(n!) for n = 0..=n_max.
#[derive(Clone, Debug)]
pub struct LogFactorial {
    table: Vec<f64>,
}

impl LogFactorial {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for n in 1..=n_max {
            acc += ln(n as f64);
            table.push(acc);
        }
        Self { table }
    }

    pub fn ln_factorial(&self, n: usize) -> f64 {
        self.table[n]
    }

    /// ln C(n, k); returns `f64::NEG_INFINITY` outside the support.
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }

    /// C(n, k) as f64 (may be inf for huge arguments; callers that care
    /// stay in log space).
    pub fn binomial(&self, n: usize, k: usize) -> f64 {
        exp(self.ln_binomial(n, k))
    }
}

/// Exact binomial coefficient in 128-bit arithmetic. Panics on overflow;
/// intended for code parameters (n <= 127 or small k).
pub fn binomial_i128(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: i128 = 1;
    for i in 0..k {
        num = num
            .checked_mul((n - i) as i128)
            .expect("binomial_i128 overflow");
        num /= (i + 1) as i128;
    }
    num
}
