//! Degree-distribution design: simulated annealing over a fixed degree
//! support, minimizing expected inactivations subject to an upper-bound
//! constraint on the decoding failure probability.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::bound::{failure_upper_bound, BoundInput};
use crate::degree::DegreeDistribution;
use crate::fsm;
use crate::math;
use crate::outer::{weight_enumerator, OuterCode, OuterError};
use crate::rng::{derive_seed, prng_from_seed};

pub const DEFAULT_SUPPORT: [usize; 7] = [1, 2, 3, 4, 10, 11, 40];
pub const DEFAULT_AVG_DEGREE: f64 = 4.63;
pub const DEFAULT_TOL_AVG: f64 = 0.01;
pub const DEFAULT_PENALTY_B: f64 = 1e4;

const STREAM_DESIGN: u64 = 7;

#[derive(Clone, Copy, Debug)]
pub struct SaSchedule {
    /// Starting temperature; `None` calibrates one from a prefix of random
    /// moves so ~80% of uphill moves are initially accepted.
    pub initial_temperature: Option<f64>,
    pub cooling: f64,
    pub levels: usize,
    pub moves_per_level: usize,
}

impl Default for SaSchedule {
    fn default() -> Self {
        Self {
            initial_temperature: None,
            cooling: 0.95,
            levels: 200,
            moves_per_level: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DesignSpec {
    pub support: Vec<usize>,
    pub avg_degree_target: f64,
    pub tol_avg: f64,
    pub outer: OuterCode,
    /// Receiver overhead used both in the failure bound and as the overhead
    /// of the inner expected-inactivation evaluation (k = h, m = h + delta).
    pub delta_star: usize,
    pub pf_target: f64,
    pub penalty_b: f64,
    pub schedule: SaSchedule,
    pub seed: u64,
}

impl DesignSpec {
    pub fn standard(outer: OuterCode, pf_target: f64, seed: u64) -> Self {
        Self {
            support: DEFAULT_SUPPORT.to_vec(),
            avg_degree_target: DEFAULT_AVG_DEGREE,
            tol_avg: DEFAULT_TOL_AVG,
            outer,
            delta_star: 15,
            pf_target,
            penalty_b: DEFAULT_PENALTY_B,
            schedule: SaSchedule::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        if self.support.is_empty() || self.support.iter().any(|&d| d == 0) {
            return Err(DesignError::InvalidSpec("support must be nonempty, degrees >= 1"));
        }
        if !(self.pf_target > 0.0 && self.pf_target < 1.0) {
            return Err(DesignError::InvalidSpec("pf_target must be in (0,1)"));
        }
        if !(self.penalty_b > 0.0) {
            return Err(DesignError::InvalidSpec("penalty_b must be > 0"));
        }
        if !(self.tol_avg > 0.0) {
            return Err(DesignError::InvalidSpec("tol_avg must be > 0"));
        }
        let lo = *self.support.iter().min().unwrap() as f64;
        let hi = *self.support.iter().max().unwrap() as f64;
        if self.avg_degree_target < lo || self.avg_degree_target > hi {
            return Err(DesignError::InvalidSpec(
                "average-degree target outside the support range",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignError {
    InvalidSpec(&'static str),
    /// No distribution meeting the failure-probability target was found
    /// within the annealing budget.
    FailedFeasibility,
    Outer(OuterError),
}

impl fmt::Display for DesignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignError::InvalidSpec(w) => write!(f, "invalid design spec: {w}"),
            DesignError::FailedFeasibility => {
                write!(f, "no feasible distribution found within the annealing budget")
            }
            DesignError::Outer(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DesignError {}

impl From<OuterError> for DesignError {
    fn from(e: OuterError) -> Self {
        DesignError::Outer(e)
    }
}

/// Penalty phi: 0 when the bound meets the target, b(1 - target/bound)
/// above it (continuous at the threshold).
pub fn penalty(pf_bar: f64, pf_target: f64, b: f64) -> f64 {
    if pf_bar <= pf_target {
        0.0
    } else {
        b * (1.0 - pf_target / pf_bar)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ObjectiveBreakdown {
    pub eta: f64,
    pub expected_inactivations: f64,
    pub pf_bar: f64,
    pub penalty: f64,
}

fn objective_with_enumerator(
    dist: &DegreeDistribution,
    spec: &DesignSpec,
    enumerator: &[u128],
) -> ObjectiveBreakdown {
    let h = spec.outer.h;
    let et = fsm::expected_inactivations(h, h + spec.delta_star, dist).expected_inactivations;
    let pf_bar = failure_upper_bound(&BoundInput {
        weight_enumerator: enumerator,
        dist,
        h,
        k: spec.outer.k,
        delta: spec.delta_star,
    });
    let pen = penalty(pf_bar, spec.pf_target, spec.penalty_b);
    ObjectiveBreakdown {
        eta: et + pen,
        expected_inactivations: et,
        pf_bar,
        penalty: pen,
    }
}

/// eta = E[T] + phi(failure bound), with E[T] the exact expected
/// inactivations of the inner code at k = h, m = h + delta_star.
pub fn objective(
    dist: &DegreeDistribution,
    spec: &DesignSpec,
) -> Result<ObjectiveBreakdown, DesignError> {
    let enumerator = weight_enumerator(&spec.outer)?;
    Ok(objective_with_enumerator(dist, spec, &enumerator))
}

fn probs_on_support(dist: &DegreeDistribution, support: &[usize]) -> Vec<f64> {
    support.iter().map(|&d| dist.prob(d)).collect()
}

fn dist_from_probs(support: &[usize], probs: &[f64]) -> Option<DegreeDistribution> {
    let entries: Vec<(usize, f64)> = support
        .iter()
        .copied()
        .zip(probs.iter().copied())
        .filter(|&(_, p)| p > 0.0)
        .collect();
    DegreeDistribution::new_with_tolerance(&entries, 1e-6).ok()
}

fn average(support: &[usize], probs: &[f64]) -> f64 {
    support
        .iter()
        .zip(probs)
        .map(|(&d, &p)| d as f64 * p)
        .sum()
}

/// A feasible starting point: two-point distribution hitting the average
/// degree target between the nearest support degrees around it.
pub fn initial_distribution(spec: &DesignSpec) -> Result<DegreeDistribution, DesignError> {
    let target = spec.avg_degree_target;
    let mut lo = None;
    let mut hi = None;
    for &d in &spec.support {
        let df = d as f64;
        if df <= target && lo.map_or(true, |l: usize| (l as f64) < df) {
            lo = Some(d);
        }
        if df >= target && hi.map_or(true, |h: usize| (h as f64) > df) {
            hi = Some(d);
        }
    }
    let (lo, hi) = (lo.ok_or(DesignError::InvalidSpec("target below support"))?,
                    hi.ok_or(DesignError::InvalidSpec("target above support"))?);
    if lo == hi {
        return Ok(DegreeDistribution::point_mass(lo));
    }
    let p_hi = (target - lo as f64) / (hi as f64 - lo as f64);
    dist_from_probs(&spec.support, &{
        let mut v = alloc::vec![0.0; spec.support.len()];
        for (i, &d) in spec.support.iter().enumerate() {
            if d == lo {
                v[i] = 1.0 - p_hi;
            } else if d == hi {
                v[i] = p_hi;
            }
        }
        v
    })
    .ok_or(DesignError::InvalidSpec("degenerate initial distribution"))
}

/// SA move: transfer a random sliver of mass between two support degrees,
/// then restore the average-degree constraint with a second transfer.
pub fn neighbor<R: Rng + ?Sized>(
    dist: &DegreeDistribution,
    rng: &mut R,
    spec: &DesignSpec,
) -> DegreeDistribution {
    let support = &spec.support;
    let n = support.len();
    if n < 2 {
        return dist.clone();
    }
    let base = probs_on_support(dist, support);
    for _ in 0..200 {
        let mut p = base.clone();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let amount = (0.05 * rng.gen::<f64>()).min(p[i]);
        p[i] -= amount;
        p[j] += amount;
        // restore the mean with a transfer across a random degree pair
        let mut a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let drift = spec.avg_degree_target - average(support, &p);
        let gap = support[b] as f64 - support[a] as f64;
        if gap == 0.0 {
            continue;
        }
        let mut x = drift / gap; // mass moved from a to b
        if x < 0.0 {
            core::mem::swap(&mut a, &mut b);
            x = -x;
        }
        if x > p[a] {
            continue;
        }
        p[a] -= x;
        p[b] += x;
        if math::abs(average(support, &p) - spec.avg_degree_target) > spec.tol_avg {
            continue;
        }
        if let Some(d) = dist_from_probs(support, &p) {
            return d;
        }
    }
    dist.clone()
}

#[derive(Clone, Copy, Debug)]
pub struct TracePoint {
    pub iteration: usize,
    pub temperature: f64,
    pub eta: f64,
    pub best_eta: f64,
}

/// Simulated annealing with geometric cooling and best-feasible tracking.
/// Deterministic for a fixed spec (all randomness flows from `spec.seed`).
pub fn anneal(spec: &DesignSpec) -> Result<(DegreeDistribution, Vec<TracePoint>), DesignError> {
    spec.validate()?;
    let enumerator = weight_enumerator(&spec.outer)?;
    let mut rng = prng_from_seed(derive_seed(spec.seed, STREAM_DESIGN));

    let mut current = initial_distribution(spec)?;
    let mut cur_obj = objective_with_enumerator(&current, spec, &enumerator);

    let mut best: Option<(DegreeDistribution, f64)> = None;
    let consider = |d: &DegreeDistribution, o: &ObjectiveBreakdown,
                        best: &mut Option<(DegreeDistribution, f64)>| {
        if o.pf_bar <= spec.pf_target
            && best.as_ref().map_or(true, |(_, e)| o.eta < *e)
        {
            *best = Some((d.clone(), o.eta));
        }
    };
    consider(&current, &cur_obj, &mut best);

    let t0 = match spec.schedule.initial_temperature {
        Some(t) => t,
        None => {
            // calibration prefix: aim at ~80% acceptance of uphill moves
            let mut uphill_sum = 0.0;
            let mut uphill_n = 0usize;
            for _ in 0..32 {
                let cand = neighbor(&current, &mut rng, spec);
                let o = objective_with_enumerator(&cand, spec, &enumerator);
                consider(&cand, &o, &mut best);
                if o.eta > cur_obj.eta {
                    uphill_sum += o.eta - cur_obj.eta;
                    uphill_n += 1;
                }
            }
            if uphill_n == 0 {
                1.0
            } else {
                (uphill_sum / uphill_n as f64) / math::ln(1.0 / 0.8)
            }
        }
    };

    let mut temperature = t0;
    let mut trace = Vec::with_capacity(spec.schedule.levels + 1);
    let mut iteration = 0usize;
    for _ in 0..spec.schedule.levels {
        for _ in 0..spec.schedule.moves_per_level {
            iteration += 1;
            let cand = neighbor(&current, &mut rng, spec);
            let o = objective_with_enumerator(&cand, spec, &enumerator);
            consider(&cand, &o, &mut best);
            let delta = o.eta - cur_obj.eta;
            if delta <= 0.0 || rng.gen::<f64>() < math::exp(-delta / temperature) {
                current = cand;
                cur_obj = o;
            }
        }
        trace.push(TracePoint {
            iteration,
            temperature,
            eta: cur_obj.eta,
            best_eta: best.as_ref().map_or(f64::INFINITY, |(_, e)| *e),
        });
        temperature *= spec.schedule.cooling;
    }

    match best {
        Some((d, _)) => Ok((d, trace)),
        None => Err(DesignError::FailedFeasibility),
    }
}

/// Reference low-inactivation design for a (63,57) outer code at overhead
/// 15 and failure-bound target 1e-3, on the default support.
pub fn tuned_distribution_1e3() -> DegreeDistribution {
    DegreeDistribution::new_with_tolerance(
        &[
            (1, 0.0097),
            (2, 0.3588),
            (3, 0.2268),
            (4, 0.1548),
            (10, 0.1765),
            (11, 0.0723),
            (40, 0.0011),
        ],
        1e-6,
    )
    .expect("coefficients sum to one")
}

/// Reference design for failure-bound target 1e-2 (same setting).
pub fn tuned_distribution_1e2() -> DegreeDistribution {
    DegreeDistribution::new_with_tolerance(
        &[
            (1, 0.0823),
            (2, 0.4141),
            (3, 0.1957),
            (4, 0.1272),
            (10, 0.0797),
            (11, 0.0762),
            (40, 0.0248),
        ],
        1e-6,
    )
    .expect("coefficients sum to one")
}
