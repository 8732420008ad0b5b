//! Exact dynamic-programming analysis of the triangulation process.
//!
//! The decoder is modelled as a finite state machine whose state at step u
//! (u active input symbols left) is the pair (cloud size, ripple size), or
//! the triple including the running inactivation count for the PMF variant.
//! Transition kernels are binomial; everything is evaluated in log space
//! with a cached log-factorial table, and states below a pruning threshold
//! are dropped with the lost mass tracked and reported.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::degree::DegreeDistribution;
use crate::math::{self, LogFactorial};

/// Mass below this is pruned from the state map after each transition.
const PRUNE_EPS: f64 = 1e-12;
/// Binomial kernel weights below this are truncated.
const KERNEL_EPS: f64 = 1e-15;

/// Folds any distribution mass at degrees above k onto degree k, matching
/// the encoder's cap (neighbors are distinct, so an output symbol degree
/// can never exceed k).
fn truncate_to_k(dist: &DegreeDistribution, k: usize) -> DegreeDistribution {
    if dist.d_max() <= k {
        return dist.clone();
    }
    let mut tail = 0.0;
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for &(d, p) in dist.entries() {
        if d >= k {
            tail += p;
        } else {
            entries.push((d, p));
        }
    }
    entries.push((k, tail));
    DegreeDistribution::new(&entries).expect("truncation preserves validity")
}

/// Probability that a degree-d output symbol is in the cloud at
/// step u and enters the ripple at step u-1.
pub fn joint_cloud_to_ripple(u: usize, k: usize, d: usize) -> f64 {
    joint_cloud_to_ripple_with(&LogFactorial::new(k), u, k, d)
}

fn joint_cloud_to_ripple_with(lf: &LogFactorial, u: usize, k: usize, d: usize) -> f64 {
    if d < 2 || d > k || u < 1 || d > k - u + 2 {
        return 0.0;
    }
    (u as f64 - 1.0) * math::exp(lf.ln_binomial(k - u, d - 2) - lf.ln_binomial(k, d))
}

/// Probability that a randomly chosen output symbol is in the cloud
/// when u input symbols are still active.
pub fn cloud_prob(u: usize, k: usize, dist: &DegreeDistribution) -> f64 {
    cloud_prob_with(&LogFactorial::new(k), u, k, &truncate_to_k(dist, k))
}

fn cloud_prob_with(lf: &LogFactorial, u: usize, k: usize, dist: &DegreeDistribution) -> f64 {
    let mut in_ripple = 0.0;
    let mut red_zero = 0.0;
    for &(d, p) in dist.entries() {
        debug_assert!(d <= k);
        let ln_ckd = lf.ln_binomial(k, d);
        if d <= k - u + 1 {
            in_ripple += p * math::exp(lf.ln_binomial(k - u, d - 1) - ln_ckd);
        }
        if d <= k - u {
            red_zero += p * math::exp(lf.ln_binomial(k - u, d) - ln_ckd);
        }
    }
    (1.0 - u as f64 * in_ripple - red_zero).clamp(0.0, 1.0)
}

/// Probability that a cloud symbol enters the ripple in the
/// transition from u to u-1 active symbols. Returns 0 when the cloud is
/// empty (the binomial drift over an empty cloud is degenerate, so the 0/0
/// convention is harmless).
pub fn p_u(u: usize, k: usize, dist: &DegreeDistribution) -> f64 {
    let lf = LogFactorial::new(k);
    p_u_with(&lf, u, k, &truncate_to_k(dist, k))
}

fn p_u_with(lf: &LogFactorial, u: usize, k: usize, dist: &DegreeDistribution) -> f64 {
    let den = cloud_prob_with(lf, u, k, dist);
    if den <= 1e-14 {
        return 0.0;
    }
    let mut num = 0.0;
    for &(d, p) in dist.entries() {
        num += p * joint_cloud_to_ripple_with(lf, u, k, d);
    }
    (num / den).clamp(0.0, 1.0)
}

/// Joint probability mass over decoder states at one step.
#[derive(Clone, Debug)]
pub struct StateDistribution {
    pub u: usize,
    /// (cloud size, ripple size) -> probability.
    pub mass: HashMap<(u32, u32), f64>,
}

/// Initial state at u = k: r_k ~ Binomial(m, Omega_1), c_k = m - r_k.
pub fn init(k: usize, m: usize, dist: &DegreeDistribution) -> StateDistribution {
    let lf = LogFactorial::new(m.max(k));
    let omega1 = truncate_to_k(dist, k).prob(1);
    let mut mass = HashMap::new();
    for_each_binomial(&lf, m, omega1, |r, w| {
        mass.insert(((m - r) as u32, r as u32), w);
    });
    StateDistribution { u: k, mass }
}

/// Walks the Binomial(n, p) PMF outward from its mode, invoking `f(j, w)`
/// for every non-negligible weight.
fn for_each_binomial<F: FnMut(usize, f64)>(lf: &LogFactorial, n: usize, p: f64, mut f: F) {
    if n == 0 || p <= 0.0 {
        f(0, 1.0);
        return;
    }
    if p >= 1.0 {
        f(n, 1.0);
        return;
    }
    let mode = (((n + 1) as f64) * p) as usize;
    let mode = mode.min(n);
    let ln_w = lf.ln_binomial(n, mode)
        + mode as f64 * math::ln(p)
        + (n - mode) as f64 * math::ln_1p(-p);
    let w_mode = math::exp(ln_w);
    f(mode, w_mode);
    let ratio = p / (1.0 - p);
    // upward
    let mut w = w_mode;
    let mut j = mode;
    while j < n {
        w *= (n - j) as f64 / (j + 1) as f64 * ratio;
        j += 1;
        if w < KERNEL_EPS {
            break;
        }
        f(j, w);
    }
    // downward
    w = w_mode;
    j = mode;
    while j > 0 {
        w *= j as f64 / (n - j + 1) as f64 / ratio;
        j -= 1;
        if w < KERNEL_EPS {
            break;
        }
        f(j, w);
    }
}

/// Output of a full recursion run.
#[derive(Clone, Debug)]
pub struct AnalysisResult {
    pub expected_inactivations: f64,
    /// Pr{R_u = 0} for u = k down to 1 (index 0 is u = k).
    pub ripple_empty_trace: Vec<(usize, f64)>,
    /// f_T(t) for t = 0..=t_cap (PMF mode only).
    pub pmf: Option<Vec<f64>>,
    /// Mass that escaped past t_cap (PMF mode only).
    pub overflow: f64,
    /// Total probability mass lost to pruning.
    pub pruning_loss: f64,
}

/// One transition of the mean-mode recursion: consumes the state at `u`,
/// produces the state at `u - 1`. Returns (next state, Pr{R_u = 0}, mass
/// lost to pruning in this step).
pub fn step(
    state: &StateDistribution,
    pu: f64,
    lf: &LogFactorial,
) -> (StateDistribution, f64, f64) {
    let u = state.u;
    debug_assert!(u >= 1);
    let mut ripple_empty = 0.0;
    let mut loss = 0.0;

    // Pass 1: ripple departures. A_u - 1 ~ Binomial(r - 1, 1/u) when r > 0;
    // nothing leaves when the ripple is empty (an inactivation happens
    // instead).
    let mut mid: HashMap<(u32, u32), f64> = HashMap::with_capacity(state.mass.len() * 2);
    for (&(c, r), &p) in &state.mass {
        if r == 0 {
            ripple_empty += p;
            *mid.entry((c, 0)).or_insert(0.0) += p;
        } else {
            let mut covered = 0.0;
            for_each_binomial(lf, (r - 1) as usize, 1.0 / u as f64, |am1, w| {
                covered += w;
                let a = am1 + 1;
                *mid.entry((c, r - a as u32)).or_insert(0.0) += p * w;
            });
            loss += p * (1.0 - covered).max(0.0);
        }
    }

    // Pass 2: cloud drift, b ~ Binomial(c, P_u); the b departures enter the
    // ripple.
    let mut next: HashMap<(u32, u32), f64> = HashMap::with_capacity(mid.len() * 2);
    for (&(c, s), &p) in &mid {
        let mut covered = 0.0;
        for_each_binomial(lf, c as usize, pu, |b, w| {
            covered += w;
            *next.entry((c - b as u32, s + b as u32)).or_insert(0.0) += p * w;
        });
        loss += p * (1.0 - covered).max(0.0);
    }

    next.retain(|_, p| {
        if *p < PRUNE_EPS {
            loss += *p;
            false
        } else {
            true
        }
    });

    (
        StateDistribution { u: u - 1, mass: next },
        ripple_empty,
        loss,
    )
}

/// E[T] = sum over u of Pr{S_u = (c, 0)}: every visit to an empty-ripple
/// state costs exactly one inactivation.
pub fn expected_inactivations(k: usize, m: usize, dist: &DegreeDistribution) -> AnalysisResult {
    let dist = truncate_to_k(dist, k);
    let lf = LogFactorial::new(m.max(k) + 1);
    let pu_table: Vec<f64> = (0..=k).map(|u| p_u_with(&lf, u, k, &dist)).collect();
    let mut state = init(k, m, &dist);
    let mut trace = Vec::with_capacity(k);
    let mut expected = 0.0;
    let mut loss_total = 0.0;
    for u in (1..=k).rev() {
        debug_assert_eq!(state.u, u);
        let (next, ripple_empty, loss) = step(&state, pu_table[u], &lf);
        trace.push((u, ripple_empty));
        expected += ripple_empty;
        loss_total += loss;
        state = next;
    }
    AnalysisResult {
        expected_inactivations: expected,
        ripple_empty_trace: trace,
        pmf: None,
        overflow: 0.0,
        pruning_loss: loss_total,
    }
}

pub fn default_t_cap(k: usize) -> usize {
    3 * (math::ceil(math::sqrt(k as f64)) as usize)
}

/// Extended recursion carrying the inactivation count in the state; yields
/// the full PMF of T up to `t_cap` plus an overflow bucket.
pub fn inactivation_pmf(
    k: usize,
    m: usize,
    dist: &DegreeDistribution,
    t_cap: usize,
) -> AnalysisResult {
    let dist = truncate_to_k(dist, k);
    let lf = LogFactorial::new(m.max(k) + 1);
    let pu_table: Vec<f64> = (0..=k).map(|u| p_u_with(&lf, u, k, &dist)).collect();
    let overflow_t = (t_cap + 1) as u32;

    let mut mass: HashMap<(u32, u32, u32), f64> = HashMap::new();
    {
        let base = init(k, m, &dist);
        for (&(c, r), &p) in &base.mass {
            mass.insert((c, r, 0), p);
        }
    }

    let mut trace = Vec::with_capacity(k);
    let mut loss_total = 0.0;
    for u in (1..=k).rev() {
        let pu = pu_table[u];
        let mut ripple_empty = 0.0;
        let mut loss = 0.0;

        let mut mid: HashMap<(u32, u32, u32), f64> = HashMap::with_capacity(mass.len() * 2);
        for (&(c, r, t), &p) in &mass {
            if r == 0 {
                ripple_empty += p;
                let t_next = (t + 1).min(overflow_t);
                *mid.entry((c, 0, t_next)).or_insert(0.0) += p;
            } else {
                let mut covered = 0.0;
                for_each_binomial(&lf, (r - 1) as usize, 1.0 / u as f64, |am1, w| {
                    covered += w;
                    let a = am1 + 1;
                    *mid.entry((c, r - a as u32, t)).or_insert(0.0) += p * w;
                });
                loss += p * (1.0 - covered).max(0.0);
            }
        }

        let mut next: HashMap<(u32, u32, u32), f64> = HashMap::with_capacity(mid.len() * 2);
        for (&(c, s, t), &p) in &mid {
            let mut covered = 0.0;
            for_each_binomial(&lf, c as usize, pu, |b, w| {
                covered += w;
                *next
                    .entry((c - b as u32, s + b as u32, t))
                    .or_insert(0.0) += p * w;
            });
            loss += p * (1.0 - covered).max(0.0);
        }

        next.retain(|_, p| {
            if *p < PRUNE_EPS {
                loss += *p;
                false
            } else {
                true
            }
        });

        trace.push((u, ripple_empty));
        loss_total += loss;
        mass = next;
    }

    let mut pmf = alloc::vec![0.0; t_cap + 1];
    let mut overflow = 0.0;
    for (&(_c, _r, t), &p) in &mass {
        if t >= overflow_t {
            overflow += p;
        } else {
            pmf[t as usize] += p;
        }
    }
    let expected: f64 = trace.iter().map(|&(_, p)| p).sum();
    AnalysisResult {
        expected_inactivations: expected,
        ripple_empty_trace: trace,
        pmf: Some(pmf),
        overflow,
        pruning_loss: loss_total,
    }
}
