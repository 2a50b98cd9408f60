//! Security predicates and attack-side analysis: when is a channel
//! distillable at *some* block size, when is it provably broken, and where
//! are the critical error rates of the standard protocols.
//!
//! The two-way security predicate compares Eve's best overlap advantage
//! against the channel's error odds; its boundary, traced over a protocol's
//! attack family, is the protocol's critical error rate. The attack side
//! plays Eve's optimal collective strategy against one-way reconciliation
//! at every block size and reports when no block size can help.

use crate::cad;
use crate::error::{Error, Result};
use crate::eve::{self, EveEnsembleD, EveEnsembleQubit};
use crate::keyrate;
use crate::math;
use crate::states::{self, ProtocolFamily};

use alloc::vec::Vec;
use core::ops::RangeInclusive;

/// Slack allowed when verifying the measurement-advantage inequality on a
/// grid: tiny negative excursions are floating-point noise, not violations.
const TIGHTNESS_SLACK: f64 = 1e-12;

/// Outcome of a security predicate.
///
/// `margin` is the signed distance of the defining inequality (positive on
/// the secure side); `secure` holds exactly when `margin > 0` — a channel
/// sitting on the boundary is treated as not secure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityVerdict {
    /// Whether the distillability condition holds strictly.
    pub secure: bool,
    /// Signed distance of the defining inequality.
    pub margin: f64,
}

/// One row of an [`AttackReport`]: Eve's and Bob's error rates at block
/// size N, and the resulting one-way rate `h(eps_eq) − h(eps_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackRecord {
    /// Block size.
    pub n: u32,
    /// Bob's post-distillation error rate.
    pub eps_b: f64,
    /// Eve's error rate under optimal two-state discrimination.
    pub eps_eq: f64,
    /// One-way reconciliation rate `h(eps_eq) − h(eps_b)` in bits.
    pub oneway_rate: f64,
}

/// Whether the attack provably defeats one-way reconciliation at every
/// examined block size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackVerdict {
    /// Eve's error never exceeds Bob's anywhere in the examined range.
    Broken,
    /// Some examined block size leaves Eve worse off than Bob.
    Undecided,
}

/// Per-block-size record of Eve's discrimination attack against one-way
/// reconciliation, with the aggregate verdict over the examined range.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    /// One record per examined block size, in increasing order.
    pub records: Vec<AttackRecord>,
    /// `Broken` iff `eps_eq ≤ eps_b` for every examined block size.
    pub verdict: AttackVerdict,
}

/// Protocols with a critical error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Two-basis qubit protocol (attack family parametrized by x).
    Bb84,
    /// Three-basis qubit protocol (symmetric one-parameter attack).
    SixState,
    /// Two-basis d-dimensional protocol (attack family parametrized by y).
    TwoBases {
        /// Alphabet dimension.
        d: usize,
    },
    /// (d+1)-basis d-dimensional protocol (fully symmetric attack).
    DPlusOneBases {
        /// Alphabet dimension.
        d: usize,
    },
}

/// Which reconciliation the critical rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Two-way distillation with unbounded block size.
    TwoWay,
    /// One-way reconciliation at block size 1.
    OneWayN1,
}

/// Two-way security predicate for a qubit channel:
///
/// `margin = Λ_eq² − ε/(1−ε)`, secure iff strictly positive
///
/// (equivalently `(λ₁+λ₂)(λ₃+λ₄) < (λ₁−λ₂)²`). A positive margin
/// guarantees some finite block size distills key; the boundary itself
/// does not.
#[must_use]
pub fn qubit_security(ens: &EveEnsembleQubit) -> SecurityVerdict {
    let leq = ens.lambda_eq();
    let eps = ens.eps();
    let odds = if eps < 1.0 {
        eps / (1.0 - eps)
    } else {
        f64::INFINITY
    };
    let margin = leq * leq - odds;
    SecurityVerdict {
        secure: margin > 0.0,
        margin,
    }
}

/// Two-way security predicate for a d-dimensional channel:
///
/// `margin = max_{m≠0} |o₀(m)|² − max_j D_j/F`, secure iff positive.
///
/// # Errors
/// [`Error::DegenerateChannel`] when F = 0 (no correct-class overlap table
/// exists).
pub fn qudit_security(ens: &EveEnsembleD) -> Result<SecurityVerdict> {
    let table = ens.class_overlaps(0).ok_or(Error::DegenerateChannel)?;
    let mut best_overlap = 0.0f64;
    for entry in table.iter().skip(1) {
        best_overlap = best_overlap.max(entry.norm_sqr());
    }
    let mut worst_odds = 0.0f64;
    for &dj in ens.disturbances() {
        worst_odds = worst_odds.max(dj / ens.fidelity());
    }
    let margin = best_overlap - worst_odds;
    Ok(SecurityVerdict {
        secure: margin > 0.0,
        margin,
    })
}

/// Eve's collective discrimination attack against one-way reconciliation,
/// examined at every block size in `n_range`.
///
/// For each N, Bob's error is the post-distillation rate `ε_N` while Eve —
/// who knows which blocks were accepted — discriminates two states of
/// overlap `Λ_eq^N` at the Helstrom limit. The channel is `Broken` when Eve
/// is at least as accurate as Bob throughout the range.
#[must_use]
pub fn attack_oneway_check(ens: &EveEnsembleQubit, n_range: RangeInclusive<u32>) -> AttackReport {
    let mut records = Vec::new();
    let mut eve_always_wins = true;
    for n in n_range {
        let eps_b = cad::cad_error(ens.eps(), n);
        let eps_eq = eve::helstrom_error(ens.lambda_eq(), n);
        if eps_eq > eps_b {
            eve_always_wins = false;
        }
        records.push(AttackRecord {
            n,
            eps_b,
            eps_eq,
            oneway_rate: math::h2(eps_eq) - math::h2(eps_b),
        });
    }
    let verdict = if eve_always_wins && !records.is_empty() {
        AttackVerdict::Broken
    } else {
        AttackVerdict::Undecided
    };
    AttackReport { records, verdict }
}

/// Security margin of the two-basis qubit family member `(q, x)`, with `x`
/// clamped into its feasible interval so optimizer endpoints never stray.
fn bb84_margin(q: f64, x: f64) -> f64 {
    let x = x.max(0.0).min(q);
    match states::bb84_attack_state(q, x) {
        Ok(s) => qubit_security(&eve::qubit_ensemble(&s)).margin,
        Err(_) => f64::INFINITY,
    }
}

/// Worst-case (Eve-optimal) margin of the two-basis qubit family at error
/// rate `q`: minimized over the free parameter x ∈ [0, q].
fn bb84_min_margin(q: f64) -> f64 {
    math::golden_min(|x| bb84_margin(q, x), 0.0, q).1
}

/// Security margin of the two-basis d-dimensional family at disturbance
/// `dist` and attack parameter `y` (clamped into feasibility).
fn two_bases_margin(d: usize, dist: f64, y: f64, y_max: f64) -> f64 {
    let y = y.clamp(0.0, y_max);
    let Ok(channel) = states::protocol_channel_d(ProtocolFamily::TwoBases, d, 1.0 - dist, Some(y))
    else {
        return f64::INFINITY;
    };
    match qudit_security(&eve::qudit_ensemble(&channel)) {
        Ok(v) => v.margin,
        Err(_) => f64::INFINITY,
    }
}

/// Worst-case margin of the two-basis d-dimensional family at disturbance
/// `dist`, minimized over y.
fn two_bases_min_margin(d: usize, dist: f64) -> f64 {
    let y_max = math::sqrt(dist.max(0.0)) / (d as f64 - 1.0);
    math::golden_min(|y| two_bases_margin(d, dist, y, y_max), 0.0, y_max).1
}

/// Margin of the fully symmetric (d+1)-basis family at disturbance `dist`.
fn d_plus_one_margin(d: usize, dist: f64) -> f64 {
    let Ok(channel) = states::protocol_channel_d(ProtocolFamily::DPlusOneBases, d, 1.0 - dist, None)
    else {
        return f64::INFINITY;
    };
    match qudit_security(&eve::qudit_ensemble(&channel)) {
        Ok(v) => v.margin,
        Err(_) => f64::INFINITY,
    }
}

/// Critical error rate of a protocol: the error rate at which the relevant
/// predicate changes sign, located by bisection to 1e-10.
///
/// Two-way mode traces the security margin of the protocol's attack family,
/// minimizing over the family's free parameter (x for the two-basis qubit
/// protocol, y for the two-basis d-dimensional one) at each error rate.
/// One-way mode locates the zero of the block-size-1 rate against the
/// family's one-way-optimal member; it is defined only for the qubit
/// protocols.
///
/// # Errors
/// [`Error::UnsupportedCombination`] for one-way mode on a d-dimensional
/// protocol; [`Error::OutOfRange`] for a dimension below 2.
pub fn critical_rate(protocol: Protocol, mode: Mode) -> Result<f64> {
    if let Protocol::TwoBases { d } | Protocol::DPlusOneBases { d } = protocol {
        if d < 2 {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
            });
        }
    }
    match (protocol, mode) {
        (Protocol::Bb84, Mode::TwoWay) => Ok(math::bisect(bb84_min_margin, 0.0, 0.25)),
        (Protocol::SixState, Mode::TwoWay) => Ok(math::bisect(
            |q| match states::sixstate_attack_state(q) {
                Ok(s) => qubit_security(&eve::qubit_ensemble(&s)).margin,
                Err(_) => f64::INFINITY,
            },
            0.0,
            1.0 / 3.0,
        )),
        (Protocol::TwoBases { d }, Mode::TwoWay) => {
            Ok(math::bisect(|dist| two_bases_min_margin(d, dist), 0.0, 0.5))
        }
        (Protocol::DPlusOneBases { d }, Mode::TwoWay) => Ok(math::bisect(
            |dist| d_plus_one_margin(d, dist),
            0.0,
            (d as f64 - 1.0) / d as f64,
        )),
        (Protocol::Bb84, Mode::OneWayN1) => Ok(math::bisect(
            |q| match states::bb84_attack_state(q, q * q) {
                Ok(s) => keyrate::rate_post_cad_qubit(&eve::qubit_ensemble(&s), 1).rate,
                Err(_) => f64::NEG_INFINITY,
            },
            0.0,
            0.25,
        )),
        (Protocol::SixState, Mode::OneWayN1) => Ok(math::bisect(
            |q| match states::sixstate_attack_state(q) {
                Ok(s) => keyrate::rate_post_cad_qubit(&eve::qubit_ensemble(&s), 1).rate,
                Err(_) => f64::NEG_INFINITY,
            },
            0.0,
            1.0 / 3.0,
        )),
        (Protocol::TwoBases { .. } | Protocol::DPlusOneBases { .. }, Mode::OneWayN1) => {
            Err(Error::UnsupportedCombination {
                detail: "one-way analysis at block size 1 is defined only for the qubit protocols",
            })
        }
    }
}

/// Closed-form critical disturbance of the d-dimensional protocol families:
///
/// - (d+1)-basis: `(d−1)(2d+1−√5) / (2(d²+d−1))`
/// - two-basis:   `(d−1)(4d−1−√(4d+1)) / (2d(4d−3))`
///
/// Both reduce at d = 2 to the qubit thresholds (0.2763932… and 0.2).
#[must_use]
pub fn closed_form_bound(kind: ProtocolFamily, d: usize) -> f64 {
    let dd = d as f64;
    match kind {
        ProtocolFamily::DPlusOneBases => {
            (dd - 1.0) * (2.0 * dd + 1.0 - math::sqrt(5.0)) / (2.0 * (dd * dd + dd - 1.0))
        }
        ProtocolFamily::TwoBases => {
            (dd - 1.0) * (4.0 * dd - 1.0 - math::sqrt(4.0 * dd + 1.0))
                / (2.0 * dd * (4.0 * dd - 3.0))
        }
    }
}

/// Single-copy success probability of the square-root measurement on the
/// symmetric d-state family with uniform pairwise overlap `s`.
fn srm_symmetric_single(d: f64, s: f64) -> f64 {
    let a = math::sqrt(1.0 + (d - 1.0) * s) + (d - 1.0) * math::sqrt(1.0 - s);
    (a / d) * (a / d)
}

/// Eve's success probability when guessing Alice's symbol from N copies of
/// the symmetric d-state family with pairwise overlap `t` (clamped to
/// [0, 1]):
///
/// `(1/d²)·(√(1+(d−1)t^N) + (d−1)·√(1−t^N))²`.
///
/// At d = 2 this equals `1 − helstrom_error(t, N)` — the square-root
/// measurement is optimal for this family.
#[must_use]
pub fn srm_attack_success_symmetric(d: usize, t: f64, n: u32) -> f64 {
    let t = t.clamp(0.0, 1.0);
    srm_symmetric_single(d as f64, math::powi(t, n))
}

/// Verifies on a grid that the square-root measurement beats the
/// pretty-good lower bound needed for the attack analysis:
///
/// `(1/d²)(√(1+(d−1)t^N) + (d−1)√(1−t^N))² ≥ 1/(1+(d−1)t^{2N}) − 1e-12`
///
/// for every `t` in `t_grid` and every N in `n_range`. Every N-copy point
/// is the single-copy inequality evaluated at `s = t^N ∈ [0, 1]`, so the
/// routine also runs the explicit single-copy pass over the grid (the
/// load-bearing reduction) and confirms each `t^N` stays inside [0, 1].
/// Grid points outside [0, 1] fail the check.
#[must_use]
pub fn tightness_check(d: usize, t_grid: &[f64], n_range: RangeInclusive<u32>) -> bool {
    let dd = d as f64;
    let holds_at = |s: f64| -> bool {
        srm_symmetric_single(dd, s) >= 1.0 / (1.0 + (dd - 1.0) * s * s) - TIGHTNESS_SLACK
    };
    for &t in t_grid {
        if !(0.0..=1.0).contains(&t) {
            return false;
        }
        // Single-copy (N = 1) pass: the case every other N reduces to.
        if !holds_at(t) {
            return false;
        }
        for n in n_range.clone() {
            let s = math::powi(t, n);
            if !(0.0..=1.0).contains(&s) || !holds_at(s) {
                return false;
            }
        }
    }
    true
}
