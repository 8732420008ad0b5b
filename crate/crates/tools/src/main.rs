//! `fountain`: CLI for the LT/Raptor toolkit — encoding, decoding, decoder
//! analysis, failure bounds, degree-distribution design, Monte Carlo
//! simulation and experiment reproduction.

mod csvout;
mod formats;
mod reproduce;
mod sim;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use fountain_core::design::{anneal, DesignError, DesignSpec, SaSchedule};
use fountain_core::lt::LtConfig;
use fountain_core::outer::weight_enumerator;
use fountain_core::{fsm, poisson};

use csvout::{fmt_f64, CsvFile};
use formats::{
    bytes_to_symbols, parse_grid, resolve_distribution, resolve_outer, symbols_to_bytes,
    EncodedFile,
};
use sim::{SimMode, SimReport};

#[derive(Parser)]
#[command(name = "fountain", version, about)]
struct Cli {
    /// Master seed; every random decision derives from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for Monte Carlo simulation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for CSV and data files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Split a file into symbols and LT-encode it into a symbol container.
    Encode {
        input: PathBuf,
        /// Output container path (default: <input>.fcw in the out dir).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Symbol size in bytes.
        #[arg(long, default_value_t = 1024)]
        symbol_size: usize,
        /// Degree distribution: preset (r10 | rsd[:c,delta] | rsd-mean:m |
        /// lrfc[:n]) or a file path.
        #[arg(long, default_value = "r10")]
        dist: String,
        /// Number of output symbols to generate (default: k + delta).
        #[arg(long)]
        count: Option<usize>,
        /// Absolute overhead when --count is not given.
        #[arg(long, default_value_t = 20)]
        delta: usize,
    },
    /// Decode a symbol container back into the original file.
    Decode {
        input: PathBuf,
        /// Recovered-file path (default: <input>.dec in the out dir).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Dump the triangulation (u, cloud, ripple) trajectory as CSV.
        #[arg(long)]
        trace: bool,
    },
    /// Exact decoder analysis: expected inactivations or the full PMF.
    Analyze {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: Option<usize>,
        /// Relative overhead; m = round(k (1 + eps)).
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value = "r10")]
        dist: String,
        /// mean | pmf
        #[arg(long, default_value = "mean")]
        mode: String,
        /// PMF support cap (default 3 ceil(sqrt(k))).
        #[arg(long)]
        t_cap: Option<usize>,
    },
    /// Fast approximate analysis via the reduced-degree recursion.
    Approx {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value = "r10")]
        dist: String,
    },
    /// Failure-probability upper bound over an overhead grid.
    Bound {
        #[arg(long)]
        outer: String,
        #[arg(long, default_value = "r10")]
        dist: String,
        #[arg(long, default_value = "0:25")]
        delta_grid: String,
    },
    /// Design a degree distribution by simulated annealing.
    Optimize {
        #[arg(long, default_value = "hamming:6")]
        outer: String,
        #[arg(long, default_value_t = 15)]
        delta_star: usize,
        #[arg(long, default_value_t = 1e-3)]
        pf_target: f64,
        #[arg(long, default_value_t = 4.63)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0.01)]
        tol_avg: f64,
        #[arg(long, default_value = "1,2,3,4,10,11,40")]
        support: String,
        #[arg(long, default_value_t = 200)]
        levels: usize,
        #[arg(long, default_value_t = 50)]
        moves: usize,
        #[arg(long, default_value_t = 0.95)]
        cooling: f64,
        /// Initial temperature (default: auto-calibrated).
        #[arg(long)]
        t0: Option<f64>,
    },
    /// Monte Carlo LT decoding over an overhead grid.
    SimulateLt {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "r10")]
        dist: String,
        #[arg(long, default_value = "0:20:5")]
        delta_grid: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Stop-at-N-failures mode (overrides --trials as the stop rule;
        /// --max-trials caps the budget).
        #[arg(long)]
        target_failures: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_trials: u64,
    },
    /// Monte Carlo Raptor decoding over an overhead grid.
    #[command(visible_alias = "raptor-sim")]
    SimulateRaptor {
        #[arg(long, default_value = "hamming:6")]
        outer: String,
        #[arg(long, default_value = "r10")]
        dist: String,
        #[arg(long, default_value = "0:25:5")]
        delta_grid: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        target_failures: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_trials: u64,
    },
    /// Regenerate the CSV bundle behind a study figure.
    Reproduce {
        /// fig4 | fig5 | fig6 | fig7 | fig8 | fig10 | fig11
        figure: String,
        /// Monte Carlo budget multiplier (1.0 = full published budgets).
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

fn sim_mode(trials: u64, target_failures: Option<u64>, max_trials: u64) -> SimMode {
    match target_failures {
        Some(target) => SimMode::UntilFailures { target, max_trials },
        None => SimMode::FixedTrials(trials),
    }
}

fn write_sim_report(out: &Path, name: &str, description: &str, report: &SimReport) -> Result<()> {
    let mut csv = CsvFile::create(
        out,
        name,
        &format!(
            "{description} seed={} code={:016x}",
            report.seed, report.code_id
        ),
        &["delta", "trials", "failures", "pf", "mean_t", "stderr_t"],
    )?;
    for r in &report.records {
        csv.row(&csv_row![
            r.delta,
            r.trials,
            r.failures,
            fmt_f64(r.pf),
            fmt_f64(r.mean_t),
            fmt_f64(r.stderr_t)
        ])?;
        eprintln!(
            "delta={}: {} trials, {} failures, {:.2}s",
            r.delta, r.trials, r.failures, r.wall_secs
        );
    }
    let path = csv.finish()?;
    println!("{}", path.display());
    Ok(())
}

fn resolve_m(k: usize, m: Option<usize>, eps: Option<f64>) -> Result<usize> {
    match (m, eps) {
        (Some(m), None) => Ok(m),
        (None, Some(e)) => Ok((k as f64 * (1.0 + e)).round() as usize),
        (None, None) => Ok(k),
        (Some(_), Some(_)) => bail!("give either --m or --eps, not both"),
    }
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }
    let out = &cli.out;
    match cli.cmd {
        Cmd::Encode {
            input,
            output,
            symbol_size,
            dist,
            count,
            delta,
        } => {
            anyhow::ensure!(symbol_size > 0, "--symbol-size must be positive");
            let data = std::fs::read(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let symbols = bytes_to_symbols(&data, symbol_size);
            let k = symbols.len();
            let d = resolve_distribution(&dist, Some(k))?;
            let n = count.unwrap_or(k + delta);
            let cfg = LtConfig {
                k,
                dist: d.clone(),
                seed: cli.seed,
            };
            let cw = fountain_core::lt::encode(&cfg, &symbols, n)
                .map_err(|e| anyhow!("encoding: {e}"))?;
            let ef = EncodedFile {
                k: k as u32,
                symbol_len: symbol_size as u32,
                seed: cli.seed,
                orig_len: data.len() as u64,
                dist_text: formats::distribution_to_text(&d),
                records: cw
                    .symbols
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i as u32, s.as_bytes().to_vec()))
                    .collect(),
            };
            let path = output.unwrap_or_else(|| {
                out.join(format!(
                    "{}.fcw",
                    input.file_name().unwrap_or_default().to_string_lossy()
                ))
            });
            std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
            ef.save(&path)?;
            println!("{}", path.display());
            Ok(0)
        }
        Cmd::Decode {
            input,
            output,
            trace,
        } => {
            let ef = EncodedFile::load(&input)?;
            let k = ef.k as usize;
            let d = ef.distribution()?;
            let n_total = ef
                .records
                .iter()
                .map(|&(i, _)| i as usize + 1)
                .max()
                .ok_or_else(|| anyhow!("container holds no symbols"))?;
            let cfg = LtConfig {
                k,
                dist: d,
                seed: ef.seed,
            };
            let columns = fountain_core::lt::encode_structure(&cfg, n_total);
            let rows: Vec<Vec<usize>> = ef
                .records
                .iter()
                .map(|&(i, _)| columns[i as usize].clone())
                .collect();
            let sys = fountain_core::lt::ReceivedSystem::from_rows(
                k,
                rows,
                ef.payload_symbols(),
            );
            let outcome =
                fountain_core::inactivation::decode(&sys, &mut cfg.decoder_rng(), trace);
            if trace {
                let mut csv = CsvFile::create(
                    out,
                    "decode_trace.csv",
                    "triangulation trajectory",
                    &["u", "cloud", "ripple"],
                )?;
                for &(u, c, r) in outcome.report.trajectory.as_deref().unwrap_or(&[]) {
                    csv.row(&csv_row![u, c, r])?;
                }
                println!("{}", csv.finish()?.display());
            }
            eprintln!(
                "inactivations: {} (success: {})",
                outcome.report.inactivations, outcome.report.success
            );
            let Some(symbols) = outcome.symbols else {
                eprintln!("decoding failed: received symbols do not determine the input");
                return Ok(2);
            };
            let bytes = symbols_to_bytes(&symbols, ef.orig_len as usize);
            let path = output.unwrap_or_else(|| {
                out.join(format!(
                    "{}.dec",
                    input.file_name().unwrap_or_default().to_string_lossy()
                ))
            });
            std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
            std::fs::write(&path, bytes)?;
            println!("{}", path.display());
            Ok(0)
        }
        Cmd::Analyze {
            k,
            m,
            eps,
            dist,
            mode,
            t_cap,
        } => {
            let d = resolve_distribution(&dist, Some(k))?;
            let m = resolve_m(k, m, eps)?;
            match mode.as_str() {
                "mean" => {
                    let res = fsm::expected_inactivations(k, m, &d);
                    let mut csv = CsvFile::create(
                        out,
                        "analyze.csv",
                        &format!("k={k} m={m}: ripple-empty probability per step"),
                        &["u", "pr_ripple_empty"],
                    )?;
                    for &(u, p) in &res.ripple_empty_trace {
                        csv.row(&csv_row![u, fmt_f64(p)])?;
                    }
                    println!("{}", csv.finish()?.display());
                    println!("expected_inactivations,{}", fmt_f64(res.expected_inactivations));
                    println!("pruning_loss,{}", fmt_f64(res.pruning_loss));
                }
                "pmf" => {
                    let cap = t_cap.unwrap_or_else(|| fsm::default_t_cap(k));
                    let res = fsm::inactivation_pmf(k, m, &d, cap);
                    let pmf = res.pmf.as_ref().expect("pmf mode");
                    let mut csv = CsvFile::create(
                        out,
                        "analyze.csv",
                        &format!("k={k} m={m}: inactivation count PMF (cap {cap})"),
                        &["t", "f_T"],
                    )?;
                    for (t, &p) in pmf.iter().enumerate() {
                        csv.row(&csv_row![t, fmt_f64(p)])?;
                    }
                    csv.row(&csv_row!["overflow", fmt_f64(res.overflow)])?;
                    println!("{}", csv.finish()?.display());
                    println!("expected_inactivations,{}", fmt_f64(res.expected_inactivations));
                }
                other => bail!("--mode must be mean or pmf, got '{other}'"),
            }
            Ok(0)
        }
        Cmd::Approx { k, eps, dist } => {
            let d = resolve_distribution(&dist, Some(k))?;
            let m = (k as f64 * (1.0 + eps)).round() as usize;
            let traj = poisson::lambda_trajectory(k, m, &d);
            let d_max = traj[0].lambda.len();
            let mut cols: Vec<String> = vec!["u".into()];
            cols.extend((1..=d_max).map(|d| format!("lambda_{d}")));
            cols.push("exp_inact_partial".into());
            let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
            let mut csv = CsvFile::create(
                out,
                "approx.csv",
                &format!("k={k} m={m}: reduced-degree population parameters"),
                &col_refs,
            )?;
            let mut partial = 0.0;
            for (i, s) in traj.iter().enumerate() {
                let u = k - i;
                if u == 0 {
                    break;
                }
                partial += (-s.lambda_d(1)).exp();
                let mut row = vec![u.to_string()];
                row.extend(s.lambda.iter().map(|&l| fmt_f64(l)));
                row.push(fmt_f64(partial));
                csv.row(&row)?;
            }
            println!("{}", csv.finish()?.display());
            println!(
                "approx_expected_inactivations,{}",
                fmt_f64(poisson::approx_expected_inactivations(k, m, &d))
            );
            Ok(0)
        }
        Cmd::Bound {
            outer,
            dist,
            delta_grid,
        } => {
            let oc = resolve_outer(&outer)?;
            let d = resolve_distribution(&dist, Some(oc.h))?;
            let a = weight_enumerator(&oc)
                .map_err(|e| anyhow!("weight enumerator unavailable: {e}"))?;
            let grid = parse_grid(&delta_grid)?;
            let mut csv = CsvFile::create(
                out,
                "bound.csv",
                &format!("({},{}) failure-probability upper bound", oc.h, oc.k),
                &["delta", "pf_bound"],
            )?;
            for &delta in &grid {
                let b = fountain_core::bound::failure_upper_bound(
                    &fountain_core::bound::BoundInput {
                        weight_enumerator: &a,
                        dist: &d,
                        h: oc.h,
                        k: oc.k,
                        delta,
                    },
                );
                csv.row(&csv_row![delta, fmt_f64(b)])?;
            }
            println!("{}", csv.finish()?.display());
            Ok(0)
        }
        Cmd::Optimize {
            outer,
            delta_star,
            pf_target,
            avg_degree,
            tol_avg,
            support,
            levels,
            moves,
            cooling,
            t0,
        } => {
            let oc = resolve_outer(&outer)?;
            let support: Vec<usize> = support
                .split(',')
                .map(|t| t.trim().parse().context("bad support entry"))
                .collect::<Result<_>>()?;
            let spec = DesignSpec {
                support,
                avg_degree_target: avg_degree,
                tol_avg,
                outer: oc,
                delta_star,
                pf_target,
                penalty_b: fountain_core::design::DEFAULT_PENALTY_B,
                schedule: SaSchedule {
                    initial_temperature: t0,
                    cooling,
                    levels,
                    moves_per_level: moves,
                },
                seed: cli.seed,
            };
            match anneal(&spec) {
                Ok((best, trace)) => {
                    let dist_path = out.join("optimized_dist.txt");
                    std::fs::create_dir_all(out)?;
                    formats::write_distribution(&dist_path, &best)?;
                    let mut csv = CsvFile::create(
                        out,
                        "optimize_trace.csv",
                        "annealing trace",
                        &["iteration", "temperature", "eta", "best_eta"],
                    )?;
                    for p in &trace {
                        csv.row(&csv_row![
                            p.iteration,
                            fmt_f64(p.temperature),
                            fmt_f64(p.eta),
                            fmt_f64(p.best_eta)
                        ])?;
                    }
                    let obj = fountain_core::design::objective(&best, &spec)
                        .map_err(|e| anyhow!("{e}"))?;
                    println!("{}", dist_path.display());
                    println!("{}", csv.finish()?.display());
                    println!("expected_inactivations,{}", fmt_f64(obj.expected_inactivations));
                    println!("pf_bound,{}", fmt_f64(obj.pf_bar));
                    Ok(0)
                }
                Err(DesignError::FailedFeasibility) => {
                    eprintln!("design infeasible: no distribution met the failure target");
                    Ok(2)
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Cmd::SimulateLt {
            k,
            dist,
            delta_grid,
            trials,
            target_failures,
            max_trials,
        } => {
            let d = resolve_distribution(&dist, Some(k))?;
            let grid = parse_grid(&delta_grid)?;
            let report = sim::simulate_lt(
                k,
                &d,
                &grid,
                sim_mode(trials, target_failures, max_trials),
                cli.seed,
            );
            write_sim_report(
                out,
                "simulate_lt.csv",
                &format!("LT k={k} Monte Carlo"),
                &report,
            )?;
            Ok(0)
        }
        Cmd::SimulateRaptor {
            outer,
            dist,
            delta_grid,
            trials,
            target_failures,
            max_trials,
        } => {
            let oc = resolve_outer(&outer)?;
            let d = resolve_distribution(&dist, Some(oc.h))?;
            let grid = parse_grid(&delta_grid)?;
            let report = sim::simulate_raptor(
                &oc,
                &d,
                &grid,
                sim_mode(trials, target_failures, max_trials),
                cli.seed,
            );
            write_sim_report(
                out,
                "simulate_raptor.csv",
                &format!("Raptor ({},{}) Monte Carlo", oc.h, oc.k),
                &report,
            )?;
            Ok(0)
        }
        Cmd::Reproduce { figure, scale } => {
            let opts = reproduce::ReproduceOptions {
                seed: cli.seed,
                scale,
            };
            let files = reproduce::reproduce(&figure, out, &opts)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code: u8 = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
