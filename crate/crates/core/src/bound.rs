//! Upper bound on the ML decoding failure probability of a Raptor code,
//! from the weight enumerator of the outer code and the inner degree
//! distribution.

use crate::degree::DegreeDistribution;
use crate::math::{self, LogFactorial};

/// Probability that a random inner row (degree drawn from `dist`, neighbors
/// uniform over h intermediates) is orthogonal to a fixed weight-l codeword:
/// pi_l = sum_j Omega_j * sum_{i even} C(l, i) C(h - l, j - i) / C(h, j).
pub fn pi_l(h: usize, l: usize, dist: &DegreeDistribution, lf: &LogFactorial) -> f64 {
    debug_assert!(l >= 1 && l <= h);
    let mut total = 0.0;
    for &(j, p) in dist.entries() {
        let j = j.min(h);
        let ln_den = lf.ln_binomial(h, j);
        let mut even = 0.0;
        let mut i = 0usize;
        while i <= j.min(l) {
            let ln_c = lf.ln_binomial(l, i) + lf.ln_binomial(h - l, j - i);
            if ln_c > f64::NEG_INFINITY {
                even += math::exp(ln_c - ln_den);
            }
            i += 2;
        }
        total += p * even;
    }
    total.clamp(0.0, 1.0)
}

/// Inputs to the failure bound: the outer weight enumerator A_l over h
/// positions, the inner degree distribution, and the receiver overhead
/// delta (m = k + delta received symbols).
#[derive(Clone, Debug)]
pub struct BoundInput<'a> {
    pub weight_enumerator: &'a [u128],
    pub dist: &'a DegreeDistribution,
    pub h: usize,
    pub k: usize,
    pub delta: usize,
}

/// Union bound P_f <= sum_{l=1}^{h} A_l * pi_l^(k + delta), evaluated in log
/// space and clipped to 1.
pub fn failure_upper_bound(input: &BoundInput<'_>) -> f64 {
    let BoundInput {
        weight_enumerator,
        dist,
        h,
        k,
        delta,
    } = *input;
    debug_assert_eq!(weight_enumerator.len(), h + 1);
    let lf = LogFactorial::new(h);
    let m = (k + delta) as f64;
    let mut total = 0.0;
    for l in 1..=h {
        let a = weight_enumerator[l];
        if a == 0 {
            continue;
        }
        let pi = pi_l(h, l, dist, &lf);
        if pi <= 0.0 {
            continue;
        }
        let ln_term = math::ln(a as f64) + m * math::ln(pi);
        total += math::exp(ln_term);
    }
    total.min(1.0)
}
