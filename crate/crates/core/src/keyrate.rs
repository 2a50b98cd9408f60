//! Achievable secret-key rates for the distillation protocol: the exact and
//! large-block qubit rates, the exact qudit mutual information and Holevo
//! bound, rates under noisy pre-processing, a coherent-receiver cross-check,
//! and the search for the smallest block size with positive rate.
//!
//! Every rate is a difference of two informations about the accepted symbol
//! A: what Bob learns, `i_ab`, minus what Eve can learn, `i_ae` (a Holevo
//! bound over her conditional states). Logarithms are base 2 throughout, so
//! all quantities are in bits.

use crate::cad;
use crate::error::{Error, Result};
use crate::eve::{self, EveEnsembleD, EveEnsembleQubit, SpectrumReport};
use crate::linalg;
use crate::math;

use alloc::vec::Vec;

const LN_2: f64 = core::f64::consts::LN_2;

/// The large-block approximation is accepted only while every residual
/// scale (post-distillation error rate and overlap powers) stays below this.
const ASYMPTOTIC_GUARD: f64 = 0.1;

/// Block-size cap for the explicit coherent-receiver construction, which
/// materializes vectors with 4^N coordinates.
const COHERENT_BUDGET: u32 = 8;

/// How a [`KeyRateReport`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    /// Exact finite-block evaluation.
    Exact,
    /// Large-block approximation (valid only inside its guard region).
    Asymptotic,
}

/// An achievable-rate evaluation at block size N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateReport {
    /// Block size the rate refers to.
    pub n: u32,
    /// Bits per accepted block that Bob learns about Alice's symbol.
    pub i_ab: f64,
    /// Holevo bound, in bits per accepted block, on what Eve learns.
    pub i_ae: f64,
    /// Achievable key bits per accepted block: `i_ab − i_ae`.
    pub rate: f64,
    /// Evaluation method.
    pub method: RateMethod,
}

/// Binary entropy h(p) = −p·log₂ p − (1−p)·log₂(1−p) in bits.
///
/// # Errors
/// [`Error::OutOfRange`] when `p` is outside [0, 1].
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "probability",
            value: p,
        });
    }
    Ok(math::h2(p))
}

/// Binary entropy with full relative accuracy for extreme arguments: no
/// small-term floor, and the (1−p)-term goes through `ln_1p` so that values
/// like h(1e-200) come out exact instead of drowning in rounding.
fn h2_precise(p: f64) -> f64 {
    if p.is_nan() || p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let p = if p > 0.5 { 1.0 - p } else { p };
    (p * -math::ln(p) + (1.0 - p) * -math::ln_1p(-p)) / LN_2
}

/// Entropy deficit of an overlap-t two-level split:
///
/// `D(t) = 1 − h((1−t)/2) = [(1−t)·ln(1−t) + (1+t)·ln(1+t)] / (2 ln 2)`
///
/// for t ∈ [0, 1], evaluated with full relative accuracy at both endpoints
/// (series below 1e-5, `ln_1p` form elsewhere, exact 1 at t = 1). Rate
/// formulas are assembled from deficits rather than from entropies near 1,
/// so their sign survives even when the rate itself is far below the
/// floating-point resolution of `1 − h(·)`.
fn entropy_deficit(t: f64) -> f64 {
    if t >= 1.0 {
        return 1.0;
    }
    if t <= 0.0 {
        return 0.0;
    }
    if t < 1e-5 {
        return t * t * (1.0 + t * t / 6.0) / (2.0 * LN_2);
    }
    ((1.0 - t) * math::ln_1p(-t) + (1.0 + t) * math::ln_1p(t)) / (2.0 * LN_2)
}

/// Exact qubit key rate after distillation on blocks of N:
///
/// `rate = 1 − h(ε_N) − (1−ε_N)·h((1−Λ_eq^N)/2) − ε_N·h((1−Λ_dif^N)/2)`
///
/// with `ε_N` the post-distillation error rate. `i_ab = 1 − h(ε_N)` is what
/// Bob learns; the two conditional terms are Eve's Holevo information, split
/// over blocks Bob accepted correctly (overlap `Λ_eq^N`) and incorrectly
/// (overlap `Λ_dif^N`); `i_ae` is the remainder `i_ab − rate`.
///
/// The rate is evaluated in the algebraically identical deficit arrangement
///
/// `rate = (1−ε_N)·D(Λ_eq^N) + ε_N·D(Λ_dif^N) − h(ε_N)`,
///
/// `D(t) = 1 − h((1−t)/2)`, which never subtracts entropies near 1: the
/// sign of the rate stays correct at any block size, even where the rate's
/// magnitude (≈ 1e-20 near the security boundary at large N) is far below
/// what the textbook expression can resolve in double precision.
#[must_use]
pub fn rate_post_cad_qubit(ens: &EveEnsembleQubit, n: u32) -> KeyRateReport {
    let eps_n = cad::cad_error(ens.eps(), n);
    let t_eq = math::powi(ens.lambda_eq(), n);
    let t_dif = math::powi(ens.lambda_dif(), n);
    let h_eps = h2_precise(eps_n);
    let i_ab = 1.0 - h_eps;
    let rate =
        (1.0 - eps_n) * entropy_deficit(t_eq) + eps_n * entropy_deficit(t_dif) - h_eps;
    let i_ae = (i_ab - rate).max(0.0);
    KeyRateReport {
        n,
        i_ab,
        i_ae,
        rate,
        method: RateMethod::Exact,
    }
}

/// Large-block qubit rate:
///
/// `i_ab = 1 + ε_N·log₂ ε_N`, `i_ae = 1 − Λ_eq^{2N}/ln 4`.
///
/// Valid only while `ε_N`, `Λ_eq^N` (and, when error blocks survive at all,
/// `Λ_dif^N`) are each below 0.1. A channel with `ε_N = 0` has no error
/// branch, so `Λ_dif` — which is 1 by convention for an error-free channel —
/// is exempt from the guard there.
///
/// The rate is returned as the direct difference of the two correction
/// terms, `Λ_eq^{2N}/ln 4 − (−ε_N·log₂ ε_N)`: deep in the asymptotic regime
/// both terms sit far below the resolution of floats near 1, where the
/// literal `i_ab − i_ae` would collapse to 0, yet their ordering — and with
/// it the sign of the rate — is still sharply defined.
///
/// # Errors
/// [`Error::OutsideAsymptoticRegime`] when the guard fails; the reported
/// value is the largest offending scale.
pub fn rate_asymptotic_qubit(ens: &EveEnsembleQubit, n: u32) -> Result<KeyRateReport> {
    let eps_n = cad::cad_error(ens.eps(), n);
    let t_eq = math::powi(ens.lambda_eq(), n);
    let t_dif = math::powi(ens.lambda_dif(), n);
    let dif_scale = if eps_n == 0.0 { 0.0 } else { t_dif };
    if eps_n >= ASYMPTOTIC_GUARD || t_eq >= ASYMPTOTIC_GUARD || dif_scale >= ASYMPTOTIC_GUARD {
        return Err(Error::OutsideAsymptoticRegime {
            value: eps_n.max(t_eq).max(dif_scale),
        });
    }
    let bob_deficit = if eps_n > 0.0 {
        -eps_n * math::log2(eps_n)
    } else {
        0.0
    };
    let eve_deficit = t_eq * t_eq / (2.0 * LN_2);
    Ok(KeyRateReport {
        n,
        i_ab: 1.0 - bob_deficit,
        i_ae: 1.0 - eve_deficit,
        rate: eve_deficit - bob_deficit,
        method: RateMethod::Asymptotic,
    })
}

/// Smallest block size `N ≤ n_max` with a strictly positive exact qubit
/// rate, or `None` when no block size up to the cap achieves one.
#[must_use]
pub fn minimal_block_size(ens: &EveEnsembleQubit, n_max: u32) -> Option<u32> {
    (1..=n_max).find(|&n| rate_post_cad_qubit(ens, n).rate > 0.0)
}

/// Exact qudit key rate after distillation on blocks of N.
///
/// `i_ab = log₂ d − H({accepted-symbol distribution})` from the
/// post-distillation class weights. For `i_ae`, Eve's accepted-block states
/// are pure and orthogonal across error classes once Alice's symbol is
/// fixed, so her conditional entropy equals the class-weight entropy and
/// cancels it inside the Holevo quantity; what survives is the weighted
/// within-class entropy, one circulant spectrum per surviving class:
///
/// `i_ae = Σ_j weight_j · S(class-j spectrum at N)`.
///
/// Cost is O(d²) per class — no d^N-dimensional object is ever built.
///
/// # Errors
/// [`Error::OutOfRange`] for N = 0, [`Error::DegenerateChannel`] for F = 0,
/// [`Error::NotPositiveSemidefinite`] if an overlap table fails to describe
/// a valid state (propagated from the spectrum computation).
pub fn holevo_post_cad_d(ens: &EveEnsembleD, n: u32) -> Result<KeyRateReport> {
    let d = ens.dim();
    let stats = cad::cad_statistics_d(ens.fidelity(), ens.disturbances(), n)?;
    let mut outcome_entropy = math::neg_xlog2x(stats.fidelity_after);
    for &w in &stats.disturbances_after {
        outcome_entropy += math::neg_xlog2x(w);
    }
    let i_ab = math::log2(d as f64) - outcome_entropy;

    let mut i_ae = 0.0;
    for j in 0..d {
        let weight = if j == 0 {
            stats.fidelity_after
        } else {
            stats.disturbances_after[j - 1]
        };
        if weight <= 0.0 {
            continue;
        }
        let Some(table) = ens.class_overlaps(j) else {
            continue;
        };
        i_ae += weight * eve::gu_eigenvalues(table, d, n)?.entropy_bits;
    }
    Ok(KeyRateReport {
        n,
        i_ab,
        i_ae,
        rate: i_ab - i_ae,
        method: RateMethod::Exact,
    })
}

/// Parameters of noisy pre-processing: Alice flips each raw bit with
/// probability q before distillation.
///
/// `omega` is the effective Alice–Bob error rate, and `u` (resp. `v = 1−u`)
/// is the probability that a position of a correctly accepted block carries
/// an agreeing (resp. disagreeing) underlying pair:
///
/// `ω = (1−q)ε + q(1−ε)`, `u = (1−q)(1−ε) / (qε + (1−q)(1−ε))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocParams {
    /// Flip probability applied to Alice's raw bits.
    pub q: f64,
    /// Agreeing-pair probability within the no-error branch.
    pub u: f64,
    /// Disagreeing-pair probability within the no-error branch: `1 − u`.
    pub v: f64,
    /// Effective error rate seen by distillation.
    pub omega: f64,
}

/// Derives the pre-processing parameters for flip probability `q`.
///
/// When the no-error branch has zero probability (`ω = 1`) the convention
/// `u = 1` applies.
///
/// # Errors
/// [`Error::OutOfRange`] when `q` is outside [0, 1/2].
pub fn preproc_params(ens: &EveEnsembleQubit, q: f64) -> Result<PreprocParams> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
        });
    }
    let eps = ens.eps();
    let omega = (1.0 - q) * eps + q * (1.0 - eps);
    let denom = q * eps + (1.0 - q) * (1.0 - eps);
    let u = if denom > 0.0 {
        (1.0 - q) * (1.0 - eps) / denom
    } else {
        1.0
    };
    Ok(PreprocParams {
        q,
        u,
        v: 1.0 - u,
        omega,
    })
}

/// Spectrum of Eve's equal-mixture state over Alice's two pre-processed
/// symbols, `σ_E = (ρ₀^{⊗N} + ρ₁^{⊗N})/2`.
///
/// Positions split into agreeing pairs (probability `u`, overlap `Λ_eq`)
/// and disagreeing pairs (probability `v`, overlap `Λ_dif`), giving the
/// closed-form levels
///
/// `u^r·v^{N−r}·(1 ± Λ_eq^r·Λ_dif^{N−r})/2`, degeneracy `C(N,r)`,
///
/// for r = 0..N: 2(N+1) levels of total multiplicity 2^{N+1}, summing to 1.
#[must_use]
pub fn preproc_spectrum(pp: &PreprocParams, ens: &EveEnsembleQubit, n: u32) -> SpectrumReport {
    let mut levels = Vec::with_capacity(2 * (n as usize + 1));
    for r in 0..=n {
        let w = math::powi(pp.u, r) * math::powi(pp.v, n - r);
        let t = math::powi(ens.lambda_eq(), r) * math::powi(ens.lambda_dif(), n - r);
        let c = math::binomial_f64(n, r);
        levels.push((w * (1.0 + t) / 2.0, c));
        levels.push((w * (1.0 - t) / 2.0, c));
    }
    SpectrumReport::from_levels(levels)
}

/// ln(x) extended with ln(0) = −∞ for branch weights that vanish exactly.
fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        math::ln(x)
    } else {
        f64::NEG_INFINITY
    }
}

/// Exact qubit key rate with noisy pre-processing at flip probability `q`,
/// after distillation on blocks of N.
///
/// `i_ab = 1 − h(ω_N)` with `ω_N` the post-distillation effective error
/// rate. For `i_ae`, condition on Alice's secret bit: an accepted block is
/// either correct (probability `1−ω_N`; positions agree with probability
/// `u`) or wrong (probability `ω_N`; positions agree with probability
/// `q(1−ε)/ω`), and the two branches attach Eve vectors whose overlap on a
/// pattern with r agreeing positions is `t_r = Λ_eq^r·Λ_dif^{N−r}`. Each
/// pattern therefore contributes a 2×2 block with branch weights
///
/// `a_r = (1−ω_N)·u^r·v^{N−r}`, `b_r = ω_N·(q(1−ε)/ω)^r·((1−q)ε/ω)^{N−r}`,
///
/// whose levels are `w(1±s)/2` given the bit and `w(1±t)/2` unconditioned,
/// with `w = a+b` and `s = √((a−b)² + 4abt²)/w ≥ t`. The `−w·log₂ w` parts
/// of each level pair cancel between the two, leaving the pattern's Holevo
/// share as `w·[D(s) − D(t)]` with `D` the two-level entropy deficit, and
/// (via `Σ C(N,r)·w_r = 1`) the rate as
///
/// `rate = Σ_r C(N,r)·w_r·[h((1−s_r)/2) + D(t_r)] − h(ω_N)`.
///
/// Weights are carried in log space and `1−s_r` in the product form
/// `4ab(1−t²)/(w²(1+s))`, so the rate's sign stays correct at any block
/// size even when its magnitude is below the resolution of entropies near
/// one. At `q = 0` this reduces exactly to [`rate_post_cad_qubit`]; `i_ae`
/// is the remainder `i_ab − rate`.
///
/// # Errors
/// [`Error::OutOfRange`] when `q` is outside [0, 1/2].
pub fn rate_preprocessed(ens: &EveEnsembleQubit, q: f64, n: u32) -> Result<KeyRateReport> {
    let pp = preproc_params(ens, q)?;
    let eps = ens.eps();
    let omega_n = cad::cad_error(pp.omega, n);
    let h_omega = h2_precise(omega_n);
    let i_ab = 1.0 - h_omega;

    // Agreeing/disagreeing-pair probabilities within the error branch.
    let (agree_err, disagree_err) = if pp.omega > 0.0 {
        (q * (1.0 - eps) / pp.omega, (1.0 - q) * eps / pp.omega)
    } else {
        (1.0, 0.0)
    };
    let ln_ok = ln_or_neg_inf(1.0 - omega_n);
    let ln_err = ln_or_neg_inf(omega_n);
    let leq = ens.lambda_eq();
    let ldif = ens.lambda_dif();

    let mut gain = 0.0; // Σ_r C(N,r)·w_r·[h((1−s_r)/2) + D(t_r)]
    for r in 0..=n {
        let ln_c = math::ln_binomial(n, r);
        let ln_a = ln_ok + math::ln_pow(pp.u, r) + math::ln_pow(pp.v, n - r);
        let ln_b = ln_err + math::ln_pow(agree_err, r) + math::ln_pow(disagree_err, n - r);
        let scale = if ln_a >= ln_b { ln_a } else { ln_b };
        if scale == f64::NEG_INFINITY {
            continue;
        }
        let a = math::exp(ln_a - scale);
        let b = math::exp(ln_b - scale);
        let w = a + b;
        let t = math::powi(leq, r) * math::powi(ldif, n - r);

        let diff = a - b;
        let s = math::sqrt(diff * diff + 4.0 * a * b * t * t) / w;
        let one_minus_s = 4.0 * a * b * (1.0 - t) * (1.0 + t) / (w * w * (1.0 + s));
        let mass = math::exp(ln_c + scale) * w;
        gain += mass * (h2_precise(one_minus_s / 2.0) + entropy_deficit(t));
    }
    let rate = gain - h_omega;
    let i_ae = (i_ab - rate).max(0.0);
    Ok(KeyRateReport {
        n,
        i_ab,
        i_ae,
        rate,
        method: RateMethod::Exact,
    })
}

/// Whether pre-processing at flip probability `q` leaves the channel
/// distillable by some block size: true iff
///
/// `u·Λ_eq² + v·Λ_dif² > ω/(1−ω)`.
///
/// At `q = 0` this is exactly the plain security predicate
/// `Λ_eq² > ε/(1−ε)`. An effective error rate `ω = 1` fails for every
/// left-hand side.
///
/// # Errors
/// [`Error::OutOfRange`] when `q` is outside [0, 1/2].
pub fn preproc_condition(ens: &EveEnsembleQubit, q: f64) -> Result<bool> {
    let pp = preproc_params(ens, q)?;
    let leq = ens.lambda_eq();
    let ldif = ens.lambda_dif();
    let lhs = pp.u * leq * leq + pp.v * ldif * ldif;
    let denom = 1.0 - pp.omega;
    if denom <= 0.0 {
        return Ok(false);
    }
    Ok(lhs > pp.omega / denom)
}

/// `base^{⊗n}` as a dense vector of 4^n coordinates.
fn product_vector(base: &[f64; 4], n: u32) -> Vec<f64> {
    let mut v = Vec::with_capacity(4usize.pow(n));
    v.push(1.0);
    for _ in 0..n {
        let mut next = Vec::with_capacity(v.len() * 4);
        for &x in &v {
            for &c in base {
                next.push(x * c);
            }
        }
        v = next;
    }
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn entropy_of_symmetric(matrix: &[f64], dim: usize) -> f64 {
    math::entropy_bits(&linalg::symmetric_eigenvalues(matrix, dim))
}

/// Qubit key rate when Bob delays measuring: he keeps his N received qubits
/// coherent, projects onto the two-dimensional subspace consistent with
/// Alice's announcement, and holds the resulting logical qubit.
///
/// The accepted state is built explicitly: for each of Alice's bit values,
/// the block vector attached to a logical outcome is a 4^N-coordinate
/// product of single-copy purification coordinates. Both informations are
/// evaluated from dense Gram matrices of these vectors — `i_ab` from Bob's
/// 2×2 reductions, `i_ae` from Eve's 4×4 Gram — with no overlap shortcuts,
/// making this an independent cross-check: the result equals
/// [`rate_post_cad_qubit`] to within numerical precision (the projection
/// commutes with Bob's measurement because agreeing and disagreeing
/// purification coordinates are orthogonal).
///
/// # Errors
/// [`Error::OutOfRange`] for N = 0; [`Error::BudgetExceeded`] for N > 8.
pub fn coherent_bob_rate(ens: &EveEnsembleQubit, n: u32) -> Result<KeyRateReport> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0.0,
        });
    }
    if n > COHERENT_BUDGET {
        return Err(Error::BudgetExceeded {
            name: "N",
            limit: COHERENT_BUDGET,
            requested: n,
        });
    }
    let [l1, l2, l3, l4] = ens.representative_lambdas();
    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    let s1 = math::sqrt(l1) * inv_sqrt2;
    let s2 = math::sqrt(l2) * inv_sqrt2;
    let s3 = math::sqrt(l3) * inv_sqrt2;
    let s4 = math::sqrt(l4) * inv_sqrt2;
    // Single-copy purification coordinates e_{t,b} for Alice symbol t and
    // Bob symbol b; agreeing pairs span the first two coordinates,
    // disagreeing pairs the last two.
    let e00 = [s1, s2, 0.0, 0.0];
    let e11 = [s1, -s2, 0.0, 0.0];
    let e01 = [0.0, 0.0, s3, s4];
    let e10 = [0.0, 0.0, s3, -s4];
    // Block vectors indexed by (Alice bit a, Bob logical outcome c), for the
    // all-zeros announcement: c = a means Bob's string matched Alice's.
    let blocks = [
        product_vector(&e00, n), // a = 0, c = 0
        product_vector(&e01, n), // a = 0, c = 1
        product_vector(&e10, n), // a = 1, c = 0
        product_vector(&e11, n), // a = 1, c = 1
    ];
    let mut gram = [[0.0; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            gram[k][l] = dot(&blocks[k], &blocks[l]);
        }
    }
    // Acceptance normalization per Alice bit.
    let s_a = [gram[0][0] + gram[1][1], gram[2][2] + gram[3][3]];

    // Conditioned on Alice's bit, the accepted state is pure across Bob and
    // Eve, so both reductions share the spectrum of the same 2×2 Gram.
    let mut s_cond = [0.0; 2];
    let mut rho_b = [0.0; 4]; // Bob's unconditioned logical qubit.
    for a in 0..2 {
        let base = 2 * a;
        let m = [
            gram[base][base] / s_a[a],
            gram[base][base + 1] / s_a[a],
            gram[base + 1][base] / s_a[a],
            gram[base + 1][base + 1] / s_a[a],
        ];
        s_cond[a] = entropy_of_symmetric(&m, 2);
        for (acc, v) in rho_b.iter_mut().zip(m) {
            *acc += v / 2.0;
        }
    }
    let i_ab = entropy_of_symmetric(&rho_b, 2) - (s_cond[0] + s_cond[1]) / 2.0;

    // Eve's unconditioned state: four vectors, each carrying half of its
    // branch's acceptance-normalized weight.
    let mut eve_gram = [0.0; 16];
    for k in 0..4 {
        for l in 0..4 {
            eve_gram[4 * k + l] =
                gram[k][l] / (2.0 * math::sqrt(s_a[k / 2]) * math::sqrt(s_a[l / 2]));
        }
    }
    let i_ae = entropy_of_symmetric(&eve_gram, 4) - (s_cond[0] + s_cond[1]) / 2.0;

    Ok(KeyRateReport {
        n,
        i_ab,
        i_ae,
        rate: i_ab - i_ae,
        method: RateMethod::Exact,
    })
}
