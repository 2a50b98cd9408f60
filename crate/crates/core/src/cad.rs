//! Two-way advantage distillation on blocks of N symbols: Bob accepts a
//! block only when all N of his derived symbols coincide, which trades raw
//! key for a sharply reduced error rate.
//!
//! The module provides the analytic post-selection statistics (acceptance
//! probability and the distribution of the surviving error class), the
//! classical relabeling Eve applies to her records when Alice announces her
//! block offsets, and a seeded Monte Carlo simulator of both protocol
//! variants operating on the per-symbol Alice–Bob difference process:
//!
//! - variant 1: Alice picks N positions where her symbols agree and asks Bob
//!   whether his do;
//! - variant 2: Alice announces offsets X_j = s − α_j of a fresh random
//!   secret s, and Bob accepts when all β_j + X_j coincide.
//!
//! Both variants induce the same accepted-block statistics; the simulator
//! exercises the two distinct message paths.

use crate::error::{Error, Result};
use crate::math;

use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct evaluation of F^N switches to log-space ratio evaluation once F^N
/// drops below this threshold.
const DIRECT_POWER_FLOOR: f64 = 1e-280;

/// Post-distillation statistics for block size N.
#[derive(Debug, Clone, PartialEq)]
pub struct CadStatistics {
    /// Block size.
    pub n: u32,
    /// Probability that a block is accepted: F^N + Σ_j D_j^N.
    pub p_ok: f64,
    /// Probability the accepted symbol is correct: F^N / p_ok.
    pub fidelity_after: f64,
    /// Probability the accepted symbol differs by j: D_j^N / p_ok.
    pub disturbances_after: Vec<f64>,
}

/// Alice–Bob error rate after distillation on blocks of N bits:
///
/// `ε_N = ε^N / (ε^N + (1−ε)^N)`,
///
/// evaluated through the log of the odds ratio so that it stays accurate
/// when either power underflows. Satisfies `ε_N ≤ (ε/(1−ε))^N` for ε < 1/2.
#[must_use]
pub fn cad_error(eps: f64, n: u32) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    if eps == 0.5 {
        return 0.5;
    }
    if eps < 0.5 {
        // r = (ε/(1−ε))^N ≤ 1.
        let r = math::exp(n as f64 * (math::ln(eps) - math::ln_1p(-eps)));
        r / (1.0 + r)
    } else {
        // s = ((1−ε)/ε)^N ≤ 1.
        let s = math::exp(n as f64 * (math::ln_1p(-eps) - math::ln(eps)));
        1.0 / (1.0 + s)
    }
}

/// Post-distillation acceptance probability and error-class distribution for
/// a d-dimensional channel with fidelity `F` and disturbances `D_j`.
///
/// Once F^N underflows the working range (below 1e-280) the ratios are
/// evaluated in log space relative to the largest class weight, so the
/// returned distribution stays exact even when `p_ok` itself is subnormal
/// or underflows to zero outright.
///
/// # Errors
/// [`Error::OutOfRange`] for N = 0; [`Error::NegativeCoefficient`] /
/// [`Error::NotNormalized`] on an invalid (F, D) profile;
/// [`Error::DegenerateChannel`] when F = 0 (no block is ever accepted).
pub fn cad_statistics_d(f: f64, disturbances: &[f64], n: u32) -> Result<CadStatistics> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0.0,
        });
    }
    let (f, dist) = validated_profile(f, disturbances)?;
    if f == 0.0 {
        return Err(Error::DegenerateChannel);
    }

    let fn_direct = math::powi(f, n);
    if fn_direct >= DIRECT_POWER_FLOOR {
        let powers: Vec<f64> = dist.iter().map(|&dj| math::powi(dj, n)).collect();
        let p_ok = fn_direct + powers.iter().sum::<f64>();
        Ok(CadStatistics {
            n,
            p_ok,
            fidelity_after: fn_direct / p_ok,
            disturbances_after: powers.iter().map(|&p| p / p_ok).collect(),
        })
    } else {
        // Ratios relative to the largest class weight never overflow.
        let w_max = dist.iter().fold(f, |a, &b| if b > a { b } else { a });
        let ratio = |w: f64| -> f64 {
            if w <= 0.0 {
                0.0
            } else if w == w_max {
                1.0
            } else {
                math::exp(n as f64 * (math::ln(w) - math::ln(w_max)))
            }
        };
        let s0 = ratio(f);
        let sj: Vec<f64> = dist.iter().map(|&dj| ratio(dj)).collect();
        let denom = s0 + sj.iter().sum::<f64>();
        let p_ok = math::exp(n as f64 * math::ln(w_max)) * denom;
        Ok(CadStatistics {
            n,
            p_ok,
            fidelity_after: s0 / denom,
            disturbances_after: sj.iter().map(|&s| s / denom).collect(),
        })
    }
}

/// Validates and exactly renormalizes a fidelity/disturbance profile.
fn validated_profile(f: f64, disturbances: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut all = Vec::with_capacity(1 + disturbances.len());
    all.push(f);
    all.extend_from_slice(disturbances);
    for (i, v) in all.iter_mut().enumerate() {
        if *v < -1e-12 {
            return Err(Error::NegativeCoefficient {
                index: i,
                value: *v,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = all.iter().sum();
    if math::abs(sum - 1.0) > 1e-9 {
        return Err(Error::NotNormalized { sum });
    }
    for v in &mut all {
        *v /= sum;
    }
    let f = all[0];
    all.remove(0);
    Ok((f, all))
}

/// Applies Eve's classical record relabeling for announced offsets `x`:
/// her label pair (α_j, β_j) becomes (α_j + x_j, β_j + x_j) mod d. After the
/// relabeling, her record's joint distribution with the accepted symbol no
/// longer depends on the announcement.
///
/// # Errors
/// [`Error::LengthMismatch`] when the sequences differ in length;
/// [`Error::OutOfRange`] when a symbol is not reduced mod d.
pub fn eve_relabel(
    d: usize,
    x: &[usize],
    labels: &[(usize, usize)],
) -> Result<Vec<(usize, usize)>> {
    if x.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: labels.len(),
        });
    }
    for &s in x {
        if s >= d {
            return Err(Error::OutOfRange {
                name: "announcement symbol",
                value: s as f64,
            });
        }
    }
    let mut out = Vec::with_capacity(labels.len());
    for (&xj, &(alpha, beta)) in x.iter().zip(labels) {
        if alpha >= d || beta >= d {
            return Err(Error::OutOfRange {
                name: "label symbol",
                value: alpha.max(beta) as f64,
            });
        }
        out.push(((alpha + xj) % d, (beta + xj) % d));
    }
    Ok(out)
}

/// Which distillation variant a simulation ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CadVariant {
    /// Alice reuses positions where her raw symbols already coincide.
    Cad1,
    /// Alice announces offsets of a fresh random secret.
    Cad2,
}

/// Outcome of a Monte Carlo run: acceptance and per-error-class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimReport {
    /// Protocol variant simulated.
    pub variant: CadVariant,
    /// Number of blocks simulated.
    pub trials: u64,
    /// Number of accepted blocks.
    pub accepted: u64,
    /// Accepted blocks by difference class (index 0 = correct);
    /// sums to `accepted`.
    pub error_counts: Vec<u64>,
    /// Master seed the run was keyed on.
    pub seed: u64,
}

/// Derives the per-trial generator seed from the master seed, so results are
/// identical no matter how trials are scheduled or partitioned.
fn trial_seed(master: u64, trial: u64) -> u64 {
    math::splitmix64(master.wrapping_add(math::splitmix64(
        trial.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1),
    )))
}

/// Uniform f64 in [0, 1) with 53 random bits.
fn next_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Uniform integer in [0, d) via widening multiply.
fn next_index(rng: &mut ChaCha8Rng, d: usize) -> usize {
    ((rng.next_u64() as u128 * d as u128) >> 64) as usize
}

/// Draws one Alice–Bob difference symbol: 0 with probability F, class j with
/// probability D_j.
fn draw_difference(rng: &mut ChaCha8Rng, f: f64, dist: &[f64]) -> usize {
    let mut u = next_f64(rng);
    if u < f {
        return 0;
    }
    u -= f;
    for (j, &dj) in dist.iter().enumerate() {
        if u < dj {
            return j + 1;
        }
        u -= dj;
    }
    dist.len() // numerically possible only at the very top of the CDF
}

/// Simulates a contiguous range of trials and returns accepted counts per
/// difference class. Partitioning the trial range across workers and summing
/// the outputs reproduces [`simulate_cad`] exactly.
///
/// # Errors
/// [`Error::OutOfRange`] when `n` is 0; [`Error::DegenerateChannel`] /
/// [`Error::NotNormalized`] when the profile is invalid.
pub fn simulate_cad_chunk(
    f: f64,
    disturbances: &[f64],
    n: u32,
    variant: CadVariant,
    seed: u64,
    trial_start: u64,
    trial_count: u64,
) -> Result<Vec<u64>> {
    let (f, dist) = validated_profile(f, disturbances)?;
    let d = dist.len() + 1;
    let mut counts = vec![0u64; d];
    let mut alphas: Vec<usize> = Vec::with_capacity(n as usize);
    let mut deltas: Vec<usize> = Vec::with_capacity(n as usize);
    for t in trial_start..trial_start + trial_count {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        match variant {
            CadVariant::Cad1 => {
                let first = draw_difference(&mut rng, f, &dist);
                let mut ok = true;
                for _ in 1..n {
                    if draw_difference(&mut rng, f, &dist) != first {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    counts[first] += 1;
                }
            }
            CadVariant::Cad2 => {
                // Draw order: Alice's raw symbol α_j and the channel
                // difference δ_j per position, then her secret s.
                alphas.clear();
                deltas.clear();
                for _ in 0..n {
                    alphas.push(next_index(&mut rng, d));
                    deltas.push(draw_difference(&mut rng, f, &dist));
                }
                let s = next_index(&mut rng, d);
                let mut derived_first = 0usize;
                let mut ok = true;
                for j in 0..n as usize {
                    let x = (s + d - alphas[j]) % d;
                    let beta = (alphas[j] + deltas[j]) % d;
                    let derived = (beta + x) % d;
                    if j == 0 {
                        derived_first = derived;
                    } else if derived != derived_first {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    counts[(derived_first + d - s) % d] += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Runs a seeded Monte Carlo simulation of advantage distillation and
/// reports acceptance and error-class counts. Identical inputs (including
/// the seed) produce identical reports.
///
/// # Errors
/// [`Error::OutOfRange`] for N = 0 or trials = 0; profile validation errors
/// as in [`cad_statistics_d`].
pub fn simulate_cad(
    f: f64,
    disturbances: &[f64],
    n: u32,
    trials: u64,
    variant: CadVariant,
    seed: u64,
) -> Result<SimReport> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0.0,
        });
    }
    if trials == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let error_counts = simulate_cad_chunk(f, disturbances, n, variant, seed, 0, trials)?;
    let accepted = error_counts.iter().sum();
    Ok(SimReport {
        variant,
        trials,
        accepted,
        error_counts,
        seed,
    })
}
