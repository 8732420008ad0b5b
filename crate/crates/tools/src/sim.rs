//! Monte Carlo harness: deterministic parallel trials over an overhead
//! grid, for LT and Raptor structure-only decoding.

use std::time::Instant;

use fountain_core::degree::DegreeDistribution;
use fountain_core::inactivation::decode_structure;
use fountain_core::lt::{receive_structure, LtConfig};
use fountain_core::outer::OuterCode;
use fountain_core::raptor::raptor_decode_structure;
use fountain_core::rng::{derive_seed, mix64, trial_seed};
use rayon::prelude::*;

/// Trials per parallel batch. Batches are always consumed whole, so results
/// are independent of the worker count.
const BATCH: u64 = 512;

/// Stream id separating per-delta seeds from the encoder/decoder streams.
const STREAM_SIM_POINT: u64 = 0x51_0000;

#[derive(Clone, Copy, Debug)]
pub enum SimMode {
    FixedTrials(u64),
    /// Stop once `target` decoding failures are collected, or at
    /// `max_trials`, whichever comes first.
    UntilFailures { target: u64, max_trials: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct SimRecord {
    pub delta: usize,
    pub trials: u64,
    pub failures: u64,
    pub pf: f64,
    pub mean_t: f64,
    pub stderr_t: f64,
    /// Wall time is reported out-of-band (stderr), never in CSV, so equal
    /// seeds give byte-identical files.
    pub wall_secs: f64,
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub seed: u64,
    pub code_id: u64,
    pub records: Vec<SimRecord>,
}

/// Cheap stable identity hash over a parameter description string.
pub fn code_identity(desc: &str) -> u64 {
    desc.bytes().fold(0x5EED_CAFE_u64, |acc, b| mix64(acc ^ b as u64))
}

/// Runs one grid point. `trial(seed) -> (success, inactivations)`.
fn run_point<F>(delta: usize, point_seed: u64, mode: SimMode, trial: F) -> SimRecord
where
    F: Fn(u64) -> (bool, usize) + Sync,
{
    let start = Instant::now();
    let mut trials = 0u64;
    let mut failures = 0u64;
    let mut sum_t = 0.0f64;
    let mut sum_t2 = 0.0f64;
    let (stop_failures, max_trials) = match mode {
        SimMode::FixedTrials(n) => (u64::MAX, n),
        SimMode::UntilFailures { target, max_trials } => (target, max_trials),
    };
    while trials < max_trials && failures < stop_failures {
        let batch = BATCH.min(max_trials - trials);
        let results: Vec<(bool, usize)> = (trials..trials + batch)
            .into_par_iter()
            .map(|i| trial(trial_seed(point_seed, i)))
            .collect();
        for (ok, t) in results {
            if !ok {
                failures += 1;
            }
            sum_t += t as f64;
            sum_t2 += (t as f64) * (t as f64);
        }
        trials += batch;
    }
    let (pf, mean_t, stderr_t) = if trials == 0 {
        (0.0, 0.0, 0.0)
    } else {
        let n = trials as f64;
        let mean = sum_t / n;
        let var = (sum_t2 / n - mean * mean).max(0.0);
        (failures as f64 / n, mean, (var / n).sqrt())
    };
    SimRecord {
        delta,
        trials,
        failures,
        pf,
        mean_t,
        stderr_t,
        wall_secs: start.elapsed().as_secs_f64(),
    }
}

fn point_seed(master: u64, grid_index: usize) -> u64 {
    derive_seed(master, STREAM_SIM_POINT + grid_index as u64)
}

/// LT simulation: per trial, collect m = k + delta fresh output symbols and
/// run structure-only inactivation decoding.
pub fn simulate_lt(
    k: usize,
    dist: &DegreeDistribution,
    deltas: &[usize],
    mode: SimMode,
    seed: u64,
) -> SimReport {
    let records = deltas
        .iter()
        .enumerate()
        .map(|(gi, &delta)| {
            run_point(delta, point_seed(seed, gi), mode, |s| {
                let cfg = LtConfig {
                    k,
                    dist: dist.clone(),
                    seed: s,
                };
                let sys = receive_structure(&cfg, k + delta);
                decode_structure(&sys, &mut cfg.decoder_rng())
            })
        })
        .collect();
    SimReport {
        seed,
        code_id: code_identity(&format!("lt k={k} dmax={}", dist.d_max())),
        records,
    }
}

/// Raptor simulation: m = k + delta received symbols over h intermediates,
/// plus the parity constraint rows; k is the outer code dimension.
pub fn simulate_raptor(
    outer: &OuterCode,
    dist: &DegreeDistribution,
    deltas: &[usize],
    mode: SimMode,
    seed: u64,
) -> SimReport {
    let records = deltas
        .iter()
        .enumerate()
        .map(|(gi, &delta)| {
            run_point(delta, point_seed(seed, gi), mode, |s| {
                let cfg = LtConfig {
                    k: outer.h,
                    dist: dist.clone(),
                    seed: s,
                };
                let rows = fountain_core::lt::encode_structure(&cfg, outer.k + delta);
                raptor_decode_structure(outer, rows, &mut cfg.decoder_rng())
            })
        })
        .collect();
    SimReport {
        seed,
        code_id: code_identity(&format!(
            "raptor h={} k={} dmax={}",
            outer.h,
            outer.k,
            dist.d_max()
        )),
        records,
    }
}
