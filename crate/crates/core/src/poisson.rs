//! Fast approximate analysis: the populations of reduced-degree-d output
//! symbols are modelled as independent Poisson variables whose parameters
//! follow a simple recursion in u. Much cheaper than the exact recursion,
//! at the cost of a known divergence in the last decoding stages.

use alloc::vec;
use alloc::vec::Vec;

use crate::degree::DegreeDistribution;
use crate::math;

/// Poisson parameters lambda_{u,d} for d = 1..=d_max at one step.
#[derive(Clone, Debug)]
pub struct LambdaState {
    pub u: usize,
    /// lambda[d - 1] is the parameter of the reduced-degree-d population.
    pub lambda: Vec<f64>,
}

impl LambdaState {
    pub fn lambda_d(&self, d: usize) -> f64 {
        self.lambda.get(d - 1).copied().unwrap_or(0.0)
    }
}

/// Initial condition lambda_{k,d} = m * Omega_d.
pub fn init_lambda(k: usize, m: usize, dist: &DegreeDistribution) -> LambdaState {
    let d_max = dist.d_max().min(k);
    let mut lambda = vec![0.0; d_max];
    for &(d, p) in dist.entries() {
        // the encoder caps degrees at k
        let d = d.min(k);
        lambda[d - 1] += m as f64 * p;
    }
    LambdaState { u: k, lambda }
}

/// Probability that a reduced-degree-d symbol (d >= 2) drops to
/// degree d-1 in the transition from u to u-1 active inputs.
pub fn transition_prob_d(u: usize, d: usize) -> f64 {
    debug_assert!(d >= 2 && u >= 1);
    (d as f64 / u as f64).min(1.0)
}

/// One transition u -> u-1 of the lambda recursion. The d >= 2 rows follow
/// the linear flow balance; the d = 1 row subtracts the expected ripple
/// departures, including the (1 - 1/u)(1 - e^{-lambda_1}) resolution term.
/// lambda_1 is clamped at zero: the subtracted term is an expectation under
/// an approximation and can overshoot.
pub fn step_lambda(state: &LambdaState) -> LambdaState {
    let u = state.u;
    debug_assert!(u >= 1);
    let uf = u as f64;
    let d_max = state.lambda.len();
    let mut next = vec![0.0; d_max];
    let get = |d: usize| -> f64 {
        if d >= 1 && d <= d_max {
            state.lambda[d - 1]
        } else {
            0.0
        }
    };
    for d in 2..=d_max {
        next[d - 1] = (1.0 - d as f64 / uf) * get(d) + (d + 1) as f64 / uf * get(d + 1);
    }
    if d_max >= 1 {
        let l1 = get(1);
        let v = (1.0 - 1.0 / uf) * l1 + 2.0 / uf * get(2)
            - (1.0 - 1.0 / uf) * (1.0 - math::exp(-l1));
        next[0] = v.max(0.0);
    }
    LambdaState { u: u - 1, lambda: next }
}

/// Approximate E[T] = sum over u = 1..k of e^{-lambda_{u,1}}.
pub fn approx_expected_inactivations(k: usize, m: usize, dist: &DegreeDistribution) -> f64 {
    let mut state = init_lambda(k, m, dist);
    let mut total = 0.0;
    for u in (1..=k).rev() {
        debug_assert_eq!(state.u, u);
        total += math::exp(-state.lambda_d(1));
        state = step_lambda(&state);
    }
    total
}

/// Full lambda trajectory, for tracing / CSV output: entry i is the state
/// at u = k - i.
pub fn lambda_trajectory(k: usize, m: usize, dist: &DegreeDistribution) -> Vec<LambdaState> {
    let mut out = Vec::with_capacity(k + 1);
    let mut state = init_lambda(k, m, dist);
    out.push(state.clone());
    for _ in (1..=k).rev() {
        state = step_lambda(&state);
        out.push(state.clone());
    }
    out
}
