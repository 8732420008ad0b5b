//! Experiment reproduction: emits the CSV bundles behind each study figure.
//! Everything is a pure function of (seed, scale flags).

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use fountain_core::degree::{lrfc_distribution, r10_distribution, robust_soliton_with_mean, DegreeDistribution};
use fountain_core::design::{tuned_distribution_1e2, tuned_distribution_1e3};
use fountain_core::fsm;
use fountain_core::lt::{encode_structure, LtConfig};
use fountain_core::outer::{hamming_outer, weight_enumerator};
use fountain_core::poisson;
use fountain_core::rng::{derive_seed, prng_from_seed, trial_seed};
use rand::Rng;
use rayon::prelude::*;

use crate::csvout::{fmt_f64, CsvFile};
use crate::sim::{simulate_lt, simulate_raptor, SimMode};

/// Global scale knob: 1.0 runs the full published trial counts; smaller
/// values shrink every Monte Carlo budget proportionally (min 50 trials).
#[derive(Clone, Copy, Debug)]
pub struct ReproduceOptions {
    pub seed: u64,
    pub scale: f64,
}

impl ReproduceOptions {
    fn trials(&self, base: u64) -> u64 {
        ((base as f64 * self.scale) as u64).max(50)
    }
}

pub fn reproduce(id: &str, out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    match id {
        "fig4" => fig4(out, opts),
        "fig5" => fig5(out, opts),
        "fig6" => fig6(out, opts),
        "fig7" => fig7(out, opts),
        "fig8" => fig8(out, opts),
        "fig10" => fig10(out, opts),
        "fig11" => fig11(out, opts),
        other => bail!("unknown figure id '{other}' (expected fig4|fig5|fig6|fig7|fig8|fig10|fig11)"),
    }
}

fn rsd_mean12(k: usize) -> DegreeDistribution {
    robust_soliton_with_mean(k, 0.01, 12.0, 0.01)
        .expect("mean-12 RSD exists at k=1000")
        .1
}

/// Exact E[T] vs Monte Carlo, k=1000, standard-Raptor inner distribution.
fn fig4(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let k = 1000usize;
    let dist = r10_distribution();
    let deltas: Vec<usize> = (0..=5).map(|i| i * 10).collect(); // eps 0..0.05
    let mut csv = CsvFile::create(
        out,
        "fig4.csv",
        "k=1000 LT: exact expected inactivations vs Monte Carlo mean",
        &["eps", "delta", "exact_mean", "mc_mean", "mc_stderr", "trials"],
    )?;
    let report = simulate_lt(
        k,
        &dist,
        &deltas,
        SimMode::FixedTrials(opts.trials(1000)),
        opts.seed,
    );
    for rec in &report.records {
        let exact = fsm::expected_inactivations(k, k + rec.delta, &dist).expected_inactivations;
        csv.row(&crate::csv_row![
            fmt_f64(rec.delta as f64 / k as f64),
            rec.delta,
            fmt_f64(exact),
            fmt_f64(rec.mean_t),
            fmt_f64(rec.stderr_t),
            rec.trials
        ])?;
    }
    Ok(vec![csv.finish()?])
}

/// Inactivation PMF vs empirical histogram, k=300, eps=0.02.
fn fig5(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let k = 300usize;
    let m = k + 6; // eps = 0.02
    let dist = r10_distribution();
    let t_cap = fsm::default_t_cap(k);
    let analysis = fsm::inactivation_pmf(k, m, &dist, t_cap);
    let pmf = analysis.pmf.as_ref().expect("pmf requested");

    let trials = opts.trials(10_000);
    let master = derive_seed(opts.seed, 0xF1_6005);
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let cfg = LtConfig {
                k,
                dist: dist.clone(),
                seed: trial_seed(master, i),
            };
            let sys = fountain_core::lt::receive_structure(&cfg, m);
            fountain_core::inactivation::decode_structure(&sys, &mut cfg.decoder_rng()).1
        })
        .collect();
    let mut hist = vec![0u64; t_cap + 1];
    let mut over = 0u64;
    for t in counts {
        if t <= t_cap {
            hist[t] += 1;
        } else {
            over += 1;
        }
    }

    let mut csv = CsvFile::create(
        out,
        "fig5.csv",
        "k=300 eps=0.02: predicted inactivation PMF vs empirical frequency",
        &["t", "predicted", "empirical"],
    )?;
    for t in 0..=t_cap {
        csv.row(&crate::csv_row![
            t,
            fmt_f64(pmf[t]),
            fmt_f64(hist[t] as f64 / trials as f64)
        ])?;
    }
    csv.row(&crate::csv_row![
        "overflow",
        fmt_f64(analysis.overflow),
        fmt_f64(over as f64 / trials as f64)
    ])?;
    Ok(vec![csv.finish()?])
}

/// Mean inactivations: two Raptor codes vs two standalone LT codes.
fn fig6(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let outer = hamming_outer(6)?;
    let d1 = r10_distribution();
    let d2 = DegreeDistribution::new(&[
        (1, 0.05),
        (2, 0.2),
        (3, 0.4),
        (4, 0.3),
        (40, 0.05),
    ])?;
    let deltas: Vec<usize> = (0..=30).step_by(3).collect();
    let mode = SimMode::FixedTrials(opts.trials(1000));
    let lt1 = simulate_lt(63, &d1, &deltas, mode, derive_seed(opts.seed, 1));
    let lt2 = simulate_lt(63, &d2, &deltas, mode, derive_seed(opts.seed, 2));
    let rp1 = simulate_raptor(&outer, &d1, &deltas, mode, derive_seed(opts.seed, 3));
    let rp2 = simulate_raptor(&outer, &d2, &deltas, mode, derive_seed(opts.seed, 4));
    let mut csv = CsvFile::create(
        out,
        "fig6.csv",
        "(63,57) Raptor vs k=63 LT mean inactivations, two inner distributions",
        &[
            "delta",
            "lt_dist1",
            "raptor_dist1",
            "lt_dist2",
            "raptor_dist2",
        ],
    )?;
    for i in 0..deltas.len() {
        csv.row(&crate::csv_row![
            deltas[i],
            fmt_f64(lt1.records[i].mean_t),
            fmt_f64(rp1.records[i].mean_t),
            fmt_f64(lt2.records[i].mean_t),
            fmt_f64(rp2.records[i].mean_t)
        ])?;
    }
    Ok(vec![csv.finish()?])
}

fn raptor_bound(dist: &DegreeDistribution, delta: usize) -> f64 {
    let outer = hamming_outer(6).expect("r=6 valid");
    let a = weight_enumerator(&outer).expect("closed form");
    fountain_core::bound::failure_upper_bound(&fountain_core::bound::BoundInput {
        weight_enumerator: &a,
        dist,
        h: outer.h,
        k: outer.k,
        delta,
    })
}

/// Failure probability: simulation markers vs upper-bound curves.
fn fig7(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let outer = hamming_outer(6)?;
    let dists = [
        ("dist1", r10_distribution()),
        ("dist3", tuned_distribution_1e3()),
        ("dist4", tuned_distribution_1e2()),
    ];
    let deltas: Vec<usize> = (0..=25).step_by(5).collect();
    let mut csv = CsvFile::create(
        out,
        "fig7.csv",
        "(63,57) Raptor: simulated failure probability vs upper bound",
        &["dist", "delta", "trials", "failures", "pf_sim", "pf_bound"],
    )?;
    for (si, (name, dist)) in dists.iter().enumerate() {
        let mode = SimMode::UntilFailures {
            target: opts.trials(200),
            max_trials: opts.trials(600_000),
        };
        let rep = simulate_raptor(&outer, dist, &deltas, mode, derive_seed(opts.seed, 10 + si as u64));
        for rec in &rep.records {
            csv.row(&crate::csv_row![
                name,
                rec.delta,
                rec.trials,
                rec.failures,
                fmt_f64(rec.pf),
                fmt_f64(raptor_bound(dist, rec.delta))
            ])?;
        }
    }
    Ok(vec![csv.finish()?])
}

/// Mean inactivations for the three (63,57) Raptor codes of fig7.
fn fig8(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let outer = hamming_outer(6)?;
    let dists = [
        ("dist1", r10_distribution()),
        ("dist3", tuned_distribution_1e3()),
        ("dist4", tuned_distribution_1e2()),
    ];
    let deltas: Vec<usize> = (0..=25).step_by(5).collect();
    let mode = SimMode::FixedTrials(opts.trials(1000));
    let mut csv = CsvFile::create(
        out,
        "fig8.csv",
        "(63,57) Raptor mean inactivations for the three inner distributions",
        &["dist", "delta", "mean_t", "stderr_t"],
    )?;
    for (si, (name, dist)) in dists.iter().enumerate() {
        let rep = simulate_raptor(&outer, dist, &deltas, mode, derive_seed(opts.seed, 20 + si as u64));
        for rec in &rep.records {
            csv.row(&crate::csv_row![
                name,
                rec.delta,
                fmt_f64(rec.mean_t),
                fmt_f64(rec.stderr_t)
            ])?;
        }
    }
    Ok(vec![csv.finish()?])
}

/// One triangulation pass recording the reduced-degree-d population counts
/// (d = 1..=3) at the requested u checkpoints. Random resolution / random
/// inactivation, matching the decoder's triangulation step.
fn reduced_degree_counts(
    k: usize,
    rows: &[Vec<usize>],
    u_targets: &[usize],
    rng: &mut impl Rng,
) -> Vec<[usize; 3]> {
    let mut active = vec![true; k];
    let mut reduced: Vec<usize> = rows.iter().map(Vec::len).collect();
    let mut by_input: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, row) in rows.iter().enumerate() {
        for &i in row {
            by_input[i].push(j);
        }
    }
    let mut out = vec![[0usize; 3]; u_targets.len()];
    let mut actives: Vec<usize> = (0..k).collect();
    for u in (1..=k).rev() {
        if let Some(pos) = u_targets.iter().position(|&t| t == u) {
            let mut counts = [0usize; 3];
            for &r in &reduced {
                if (1..=3).contains(&r) {
                    counts[r - 1] += 1;
                }
            }
            out[pos] = counts;
        }
        // pick from the ripple if possible, else inactivate at random
        let ripple: Vec<usize> = (0..rows.len()).filter(|&j| reduced[j] == 1).collect();
        let v = if ripple.is_empty() {
            let idx = rng.gen_range(0..u);
            actives[idx]
        } else {
            let j = ripple[rng.gen_range(0..ripple.len())];
            *rows[j].iter().find(|&&i| active[i]).expect("reduced degree 1")
        };
        active[v] = false;
        let pos = actives.iter().position(|&a| a == v).expect("active");
        actives.swap_remove(pos);
        for &j in &by_input[v] {
            reduced[j] -= 1;
        }
    }
    out
}

/// Reduced-degree population distributions vs the recursion's predicted
/// parameters, mean-12 RSD at k=1000.
fn fig10(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let k = 1000usize;
    let m = k; // zero overhead checkpoint run
    let dist = rsd_mean12(k);
    let u_targets = [1000usize, 500, 20];

    // predicted parameters at the checkpoints
    let traj = poisson::lambda_trajectory(k, m, &dist);
    let mut lambda_csv = CsvFile::create(
        out,
        "fig10_lambda.csv",
        "predicted reduced-degree population parameters at u checkpoints",
        &["u", "d", "lambda"],
    )?;
    for &u in &u_targets {
        let state = &traj[k - u];
        for d in 1..=3usize {
            lambda_csv.row(&crate::csv_row![u, d, fmt_f64(state.lambda_d(d))])?;
        }
    }

    let trials = opts.trials(2000);
    let master = derive_seed(opts.seed, 0xF1_6010);
    let all: Vec<Vec<[usize; 3]>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let cfg = LtConfig {
                k,
                dist: dist.clone(),
                seed: trial_seed(master, i),
            };
            let rows = encode_structure(&cfg, m);
            let mut rng = prng_from_seed(trial_seed(master, i ^ 0xABCD));
            reduced_degree_counts(k, &rows, &u_targets, &mut rng)
        })
        .collect();

    let mut emp_csv = CsvFile::create(
        out,
        "fig10_empirical.csv",
        "empirical distribution of reduced-degree population sizes",
        &["u", "d", "count", "frequency"],
    )?;
    for (ui, &u) in u_targets.iter().enumerate() {
        for d in 1..=3usize {
            let mut hist = std::collections::BTreeMap::new();
            for trial in &all {
                *hist.entry(trial[ui][d - 1]).or_insert(0u64) += 1;
            }
            for (count, freq) in hist {
                emp_csv.row(&crate::csv_row![
                    u,
                    d,
                    count,
                    fmt_f64(freq as f64 / trials as f64)
                ])?;
            }
        }
    }
    Ok(vec![lambda_csv.finish()?, emp_csv.finish()?])
}

/// Fast approximation vs Monte Carlo, mean-degree-12 RSD and LRFC-style
/// binomial distribution, k=1000.
fn fig11(out: &Path, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    let k = 1000usize;
    // a binomial-type distribution with mean ~12 (n=24, p=1/2); the true
    // k=1000 variant has mean 500 and is not what the mean-12 study uses
    let dists = [("rsd", rsd_mean12(k)), ("lrfc", lrfc_distribution(24)?)];
    let deltas: Vec<usize> = (0..=5).map(|i| i * 10).collect();
    let mode = SimMode::FixedTrials(opts.trials(1000));
    let mut csv = CsvFile::create(
        out,
        "fig11.csv",
        "k=1000 mean-degree-12 codes: fast approximation vs Monte Carlo",
        &["dist", "delta", "approx_mean", "mc_mean", "mc_stderr"],
    )?;
    for (si, (name, dist)) in dists.iter().enumerate() {
        let rep = simulate_lt(k, dist, &deltas, mode, derive_seed(opts.seed, 30 + si as u64));
        for rec in &rep.records {
            let approx = poisson::approx_expected_inactivations(k, k + rec.delta, dist);
            csv.row(&crate::csv_row![
                name,
                rec.delta,
                fmt_f64(approx),
                fmt_f64(rec.mean_t),
                fmt_f64(rec.stderr_t)
            ])?;
        }
    }
    Ok(vec![csv.finish()?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn unknown_figure_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let opts = ReproduceOptions { seed: 1, scale: 0.01 };
        assert!(reproduce("fig99", dir.path(), &opts).is_err());
    }

    #[test]
    fn fig5_small_scale_runs() {
        let dir = tempfile::tempdir().unwrap();
        let opts = ReproduceOptions { seed: 1, scale: 0.005 };
        let files = reproduce("fig5", dir.path(), &opts).unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with("# fountain-csv v1"));
        assert!(text.lines().count() > 3);
    }

    #[test]
    fn reduced_degree_counts_conserves_rows() {
        // at u=k nothing is removed yet: counts match the raw degrees
        let k = 12;
        let rows = vec![vec![0], vec![1, 2], vec![3, 4, 5], vec![0, 1, 2, 3]];
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let counts = reduced_degree_counts(k, &rows, &[k], &mut rng);
        assert_eq!(counts[0], [1, 1, 1]);
    }
}
