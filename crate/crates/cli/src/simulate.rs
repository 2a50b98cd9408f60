//! `simulate`: seeded Monte Carlo run of one advantage-distillation variant
//! on the channel's Alice–Bob difference process, reported side by side with
//! the analytic post-selection statistics and z-scores.
//!
//! Trials are partitioned into fixed-size chunks that are simulated
//! independently (in parallel when a thread pool is available) and summed;
//! per-trial seeding makes the result identical for any partition or thread
//! count.

use std::path::Path;

use clap::ValueEnum;
use keydist_core::cad::{cad_statistics_d, simulate_cad_chunk, CadVariant};
use keydist_core::states::{fidelity_disturbances, qber};
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{self, ChannelFile, LoadedChannel};
use crate::error::{internal, usage, CliError};
use crate::json::{fmt_sig9, to_json_line};

/// Trials per independently simulated chunk; fixed so the partition (and
/// therefore the byte-exact result) does not depend on the thread count.
const CHUNK: u64 = 1 << 16;

/// 99% two-sided normal quantile, for confidence intervals.
const Z99: f64 = 2.575_829_303_548_901;

/// Distillation variant selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Alice reuses positions where her raw symbols already agree.
    Cad1,
    /// Alice announces offsets of a fresh random secret.
    Cad2,
}

/// Acceptance-statistics section: observed vs. predicted with a z-score.
#[derive(Serialize)]
struct AcceptanceDoc {
    /// Accepted fraction of all trials.
    observed: f64,
    /// Analytic acceptance probability p_ok.
    predicted: f64,
    /// (observed − predicted) in binomial standard deviations.
    z: Option<f64>,
    /// 99% normal-approximation confidence interval around `observed`.
    ci99: [f64; 2],
}

/// Per-difference-class section among accepted blocks.
#[derive(Serialize)]
struct ClassDoc {
    /// Difference class (0 = Alice and Bob agree).
    class: usize,
    /// Accepted blocks falling in this class.
    count: u64,
    /// Fraction of accepted blocks (absent when nothing was accepted).
    observed: Option<f64>,
    /// Analytic post-selection probability (F_N for class 0, D'_j else).
    predicted: f64,
    /// (observed − predicted) in binomial standard deviations.
    z: Option<f64>,
    /// 99% confidence interval around `observed` (absent without samples).
    ci99: Option<[f64; 2]>,
}

/// Complete simulation document.
#[derive(Serialize)]
struct SimulateDoc {
    /// Echo of the parsed input.
    input: ChannelFile,
    /// Variant simulated ("cad1" or "cad2").
    variant: &'static str,
    /// Block size.
    n: u32,
    /// Number of simulated blocks.
    trials: u64,
    /// Master seed.
    seed: u64,
    /// Number of accepted blocks.
    accepted: u64,
    /// Accepted blocks per difference class (index 0 = correct).
    error_counts: Vec<u64>,
    /// Acceptance statistics vs. the analytic p_ok.
    acceptance: AcceptanceDoc,
    /// Per-class statistics vs. the analytic post-selection distribution.
    classes: Vec<ClassDoc>,
}

/// Binomial z-score of `count` successes in `n` draws at probability `p`.
fn binomial_z(count: u64, n: u64, p: f64) -> Option<f64> {
    if n == 0 || p <= 0.0 || p >= 1.0 {
        return None;
    }
    let n_f = n as f64;
    let sd = (n_f * p * (1.0 - p)).sqrt();
    Some((count as f64 - n_f * p) / sd)
}

/// 99% normal-approximation interval for an observed fraction.
fn ci99(count: u64, n: u64) -> [f64; 2] {
    let n_f = n as f64;
    let p_hat = count as f64 / n_f;
    let half = Z99 * (p_hat * (1.0 - p_hat) / n_f).sqrt();
    [(p_hat - half).max(0.0), (p_hat + half).min(1.0)]
}

/// Runs the `simulate` command and prints its document.
pub fn run(
    channel_file: &Path,
    n: u32,
    trials: u64,
    variant_arg: VariantArg,
    seed: u64,
    pretty: bool,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let (input, loaded) = channel::load(channel_file)?;
    let (f, disturbances) = match &loaded {
        LoadedChannel::Qubit(state) => {
            let eps = qber(state);
            (1.0 - eps, vec![eps])
        }
        LoadedChannel::Qudit(ch) => fidelity_disturbances(ch),
    };
    let stats = cad_statistics_d(f, &disturbances, n).map_err(|e| usage(e.to_string()))?;
    let (variant, variant_name) = match variant_arg {
        VariantArg::Cad1 => (CadVariant::Cad1, "cad1"),
        VariantArg::Cad2 => (CadVariant::Cad2, "cad2"),
    };

    let chunk_count = trials.div_ceil(CHUNK);
    let counts: Vec<u64> = (0..chunk_count)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(trials - start);
            simulate_cad_chunk(f, &disturbances, n, variant, seed, start, len)
        })
        .try_reduce(
            || vec![0u64; disturbances.len() + 1],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(&part) {
                    *a += p;
                }
                Ok(acc)
            },
        )
        .map_err(internal)?;
    let accepted: u64 = counts.iter().sum();

    let acceptance = AcceptanceDoc {
        observed: accepted as f64 / trials as f64,
        predicted: stats.p_ok,
        z: binomial_z(accepted, trials, stats.p_ok),
        ci99: ci99(accepted, trials),
    };
    let classes: Vec<ClassDoc> = counts
        .iter()
        .enumerate()
        .map(|(j, &count)| {
            let predicted = if j == 0 {
                stats.fidelity_after
            } else {
                stats.disturbances_after[j - 1]
            };
            ClassDoc {
                class: j,
                count,
                observed: (accepted > 0).then(|| count as f64 / accepted as f64),
                predicted,
                z: binomial_z(count, accepted, predicted),
                ci99: (accepted > 0).then(|| ci99(count, accepted)),
            }
        })
        .collect();

    let doc = SimulateDoc {
        input,
        variant: variant_name,
        n,
        trials,
        seed,
        accepted,
        error_counts: counts,
        acceptance,
        classes,
    };
    if pretty {
        print!("{}", render_pretty(&doc));
    } else {
        println!("{}", to_json_line(&doc));
    }
    Ok(())
}

/// Human-oriented text rendering.
fn render_pretty(doc: &SimulateDoc) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "simulated {} blocks of N={} ({}, seed {})",
        doc.trials, doc.n, doc.variant, doc.seed
    );
    let _ = writeln!(
        out,
        "accepted: {} (observed {}, predicted {}, z {})",
        doc.accepted,
        fmt_sig9(doc.acceptance.observed),
        fmt_sig9(doc.acceptance.predicted),
        doc.acceptance
            .z
            .map_or_else(|| "n/a".to_string(), fmt_sig9)
    );
    for c in &doc.classes {
        let _ = writeln!(
            out,
            "  class {}: count {} (observed {}, predicted {}, z {})",
            c.class,
            c.count,
            c.observed.map_or_else(|| "n/a".to_string(), fmt_sig9),
            fmt_sig9(c.predicted),
            c.z.map_or_else(|| "n/a".to_string(), fmt_sig9)
        );
    }
    out
}
