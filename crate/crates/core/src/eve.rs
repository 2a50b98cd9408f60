//! Eve's side of the channel: the geometry of her conditional states
//! (pairwise overlaps per error class), their spectra, and her optimal
//! measurements — Helstrom two-state discrimination and the square-root
//! measurement for geometrically uniform ensembles.
//!
//! All physics is carried by scalar overlaps ⟨e|e'⟩ between Eve's pure
//! conditional states; the states themselves are never materialized. For a
//! qubit channel the two relevant overlap moduli are
//!
//! - Λ_eq  = |λ₁−λ₂|/(λ₁+λ₂) — Eve's states when Alice and Bob agree,
//! - Λ_dif = |λ₃−λ₄|/(λ₃+λ₄) — Eve's states when they disagree,
//!
//! and for a d-dimensional channel each error class j carries a circulant
//! family of d states with overlaps given by a discrete Fourier transform of
//! row j of the flip-probability table.

use crate::error::{Error, Result};
use crate::math;
use crate::states::{BellDiagonalState, GeneralizedPauliChannel};

use alloc::vec::Vec;
pub use num_complex::Complex64;

/// Imaginary residue allowed on quantities that must be real (Fourier sums
/// of conjugate-symmetric data); larger residues indicate invalid input.
const IMAG_TOL: f64 = 1e-10;

/// Eigenvalues may undershoot zero by at most this before the input is
/// rejected as not describing a valid state; small negatives are clamped.
const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Eve's state geometry for a qubit channel: the error rate and the two
/// overlap moduli of her conditional states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveEnsembleQubit {
    eps: f64,
    lambda_eq: f64,
    lambda_dif: f64,
}

impl EveEnsembleQubit {
    /// Alice–Bob error rate ε = λ₃ + λ₄.
    #[must_use]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Overlap modulus Λ_eq of Eve's states on agreeing rounds.
    #[must_use]
    pub fn lambda_eq(&self) -> f64 {
        self.lambda_eq
    }

    /// Overlap modulus Λ_dif of Eve's states on disagreeing rounds.
    #[must_use]
    pub fn lambda_dif(&self) -> f64 {
        self.lambda_dif
    }

    /// A Bell-coefficient vector realizing this ensemble:
    /// `((1−ε)(1+Λ_eq)/2, (1−ε)(1−Λ_eq)/2, ε(1+Λ_dif)/2, ε(1−Λ_dif)/2)`.
    ///
    /// Every rate and security quantity depends on the state only through
    /// (ε, Λ_eq, Λ_dif), so this representative is interchangeable with the
    /// original state for all operations in this crate.
    #[must_use]
    pub fn representative_lambdas(&self) -> [f64; 4] {
        let se = 1.0 - self.eps;
        [
            se * (1.0 + self.lambda_eq) / 2.0,
            se * (1.0 - self.lambda_eq) / 2.0,
            self.eps * (1.0 + self.lambda_dif) / 2.0,
            self.eps * (1.0 - self.lambda_dif) / 2.0,
        ]
    }
}

/// Derives Eve's qubit ensemble from a Bell-diagonal state.
///
/// Zero-weight branches use the convention Λ = 1 (the branch never occurs,
/// and the limit of indistinguishable states keeps every downstream formula
/// continuous).
#[must_use]
pub fn qubit_ensemble(s: &BellDiagonalState) -> EveEnsembleQubit {
    let [l1, l2, l3, l4] = s.lambdas();
    let same = l1 + l2;
    let diff = l3 + l4;
    EveEnsembleQubit {
        eps: diff,
        lambda_eq: if same > 0.0 {
            math::abs(l1 - l2) / same
        } else {
            1.0
        },
        lambda_dif: if diff > 0.0 {
            math::abs(l3 - l4) / diff
        } else {
            1.0
        },
    }
}

/// Eve's state geometry for a d-dimensional channel: fidelity, disturbances,
/// and per-error-class overlap tables o_j(m) = ⟨e_{m,m+j}|e_{0,j}⟩.
///
/// Classes of zero weight carry no overlap table (they never occur).
/// Invariants: o_j(0) = 1, |o_j(m)| ≤ 1, o_j(−m) = o_j(m)*.
#[derive(Debug, Clone, PartialEq)]
pub struct EveEnsembleD {
    d: usize,
    fidelity: f64,
    disturbances: Vec<f64>,
    overlaps: Vec<Option<Vec<Complex64>>>,
}

impl EveEnsembleD {
    /// Channel dimension d.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Channel fidelity F (weight of error class 0).
    #[must_use]
    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    /// Disturbances D_j for j = 1..d−1.
    #[must_use]
    pub fn disturbances(&self) -> &[f64] {
        &self.disturbances
    }

    /// Weight of error class j (F for j = 0, else D_j).
    #[must_use]
    pub fn class_weight(&self, j: usize) -> f64 {
        if j == 0 {
            self.fidelity
        } else {
            self.disturbances[j - 1]
        }
    }

    /// The overlap table of class j, or `None` when the class has zero
    /// weight. Entry m is o_j(m) for m = 0..d−1.
    #[must_use]
    pub fn class_overlaps(&self, j: usize) -> Option<&[Complex64]> {
        self.overlaps[j].as_deref()
    }
}

/// Derives Eve's per-class state overlaps from a generalized Pauli channel.
///
/// Class j = 0 (no shift) uses o₀(m) = (1/F)·Σ_n p₀,ₙ·e^{+2πi·m·n/d};
/// classes j ≠ 0 use o_j(m) = (1/D_j)·Σ_n p_{j,n}·e^{−2πi·m·n/d}. The sign
/// conventions fix the global phases so o_j(0) = 1; every spectrum and
/// success probability downstream is invariant under conjugating a table.
#[must_use]
pub fn qudit_ensemble(ch: &GeneralizedPauliChannel) -> EveEnsembleD {
    let d = ch.dim();
    let (fidelity, disturbances) = crate::states::fidelity_disturbances(ch);
    let mut overlaps: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(d);
    for j in 0..d {
        let weight = if j == 0 {
            fidelity
        } else {
            disturbances[j - 1]
        };
        if weight <= 0.0 {
            overlaps.push(None);
            continue;
        }
        let sign = if j == 0 { 1.0 } else { -1.0 };
        let mut table = Vec::with_capacity(d);
        for m in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..d {
                let theta = sign * core::f64::consts::TAU * (m * n) as f64 / d as f64;
                acc += ch.prob(j, n) * Complex64::new(math::cos(theta), math::sin(theta));
            }
            table.push(acc / weight);
        }
        overlaps.push(Some(table));
    }
    EveEnsembleD {
        d,
        fidelity,
        disturbances,
        overlaps,
    }
}

/// Minimum error probability for discriminating two equiprobable pure states
/// whose N-copy overlap modulus is `overlap_abs^N`:
///
/// `1/2 − (1/2)·√(1 − overlap_abs^{2N})`.
///
/// Evaluated stably for `overlap_abs^{2N}` near 0 and 1 via
/// `t/(2(1+√(1−t)))`. Inputs are clamped to [0, 1].
#[must_use]
pub fn helstrom_error(overlap_abs: f64, n: u32) -> f64 {
    let c = overlap_abs.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    // t = c^(2N), via the log for large N.
    let t = if c == 1.0 {
        1.0
    } else {
        math::exp(2.0 * n as f64 * math::ln(c))
    };
    t / (2.0 * (1.0 + math::sqrt(1.0 - t)))
}

/// The spectrum of a density operator, as distinct eigenvalue levels with
/// (possibly huge) multiplicities, plus its von Neumann entropy in bits.
///
/// Invariants: levels are nonnegative, Σ multiplicity·level = 1 within 1e-9,
/// `entropy_bits = −Σ multiplicity·level·log₂(level)` with 0·log 0 = 0.
/// Multiplicities are exact integers up to 2⁵³ and nearest-double beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Distinct eigenvalue levels.
    pub eigenvalues: Vec<f64>,
    /// Multiplicity of each level (parallel to `eigenvalues`).
    pub multiplicities: Vec<f64>,
    /// Von Neumann entropy −Σ m·λ·log₂ λ in bits.
    pub entropy_bits: f64,
}

impl SpectrumReport {
    /// Builds a report from (level, multiplicity) pairs, computing the
    /// entropy with the 0·log 0 = 0 convention.
    pub(crate) fn from_levels(levels: Vec<(f64, f64)>) -> SpectrumReport {
        let mut eigenvalues = Vec::with_capacity(levels.len());
        let mut multiplicities = Vec::with_capacity(levels.len());
        let mut entropy = 0.0;
        for (value, mult) in levels {
            entropy += mult * math::neg_xlog2x(value);
            eigenvalues.push(value);
            multiplicities.push(mult);
        }
        SpectrumReport {
            eigenvalues,
            multiplicities,
            entropy_bits: entropy,
        }
    }

    /// Σ multiplicity·level — 1 for a valid density-operator spectrum.
    #[must_use]
    pub fn total_weight(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .map(|(v, m)| v * m)
            .sum()
    }
}

/// Validates that a Fourier eigenvalue is numerically real and nonnegative,
/// returning the clamped real part.
fn real_nonnegative(z: Complex64) -> Result<f64> {
    if math::abs(z.im) > IMAG_TOL {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: z.im });
    }
    if z.re < -EIGENVALUE_CLAMP {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: z.re });
    }
    Ok(z.re.max(0.0))
}

/// Spectrum of the uniform mixture of d geometrically uniform N-copy states
/// with single-copy overlap table `overlap` (entry m is ⟨e_k|e_{k+m}⟩, the
/// same for every k).
///
/// The eigenvalues are the Fourier coefficients
/// `A_η = (1/d²)·Σ_{k,k'} e^{2πi·η(k−k')/d}·⟨e_k|e_{k'}⟩^N`, η = 0..d−1,
/// reported in descending order.
///
/// # Errors
/// [`Error::LengthMismatch`] if the table length is not d;
/// [`Error::NotPositiveSemidefinite`] if any A_η is negative beyond −1e-12
/// or carries imaginary residue above 1e-10.
pub fn gu_eigenvalues(overlap: &[Complex64], d: usize, n: u32) -> Result<SpectrumReport> {
    if overlap.len() != d {
        return Err(Error::LengthMismatch {
            left: overlap.len(),
            right: d,
        });
    }
    let mut powers = Vec::with_capacity(d);
    for m in 0..d {
        powers.push(overlap[m].powu(n));
    }
    let mut values = Vec::with_capacity(d);
    for eta in 0..d {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..d {
            for kp in 0..d {
                // ⟨e_k|e_k'⟩ = overlap(k'−k), index taken mod d.
                let m = (kp + d - k) % d;
                let theta = core::f64::consts::TAU * (eta as f64)
                    * ((k as f64 - kp as f64) / d as f64);
                acc += Complex64::new(math::cos(theta), math::sin(theta)) * powers[m];
            }
        }
        values.push(real_nonnegative(acc / (d * d) as f64)?);
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    Ok(SpectrumReport::from_levels(
        values.into_iter().map(|v| (v, 1.0)).collect(),
    ))
}

/// Success probability of the square-root measurement on d equiprobable
/// geometrically uniform N-copy states:
///
/// `(1/d²)·(Σ_η √(1+Y_η))²` with `Y_η = Σ_{m≠0} e^{2πi·η·m/d}·overlap(m)^N`.
///
/// # Errors
/// As [`gu_eigenvalues`]; additionally rejects 1+Y_η < −1e-12.
pub fn srm_success(overlap: &[Complex64], d: usize, n: u32) -> Result<f64> {
    if overlap.len() != d {
        return Err(Error::LengthMismatch {
            left: overlap.len(),
            right: d,
        });
    }
    let mut powers = Vec::with_capacity(d);
    for m in 0..d {
        powers.push(overlap[m].powu(n));
    }
    let mut root_sum = 0.0;
    for eta in 0..d {
        let mut y = Complex64::new(0.0, 0.0);
        for m in 1..d {
            let theta = core::f64::consts::TAU * (eta * m) as f64 / d as f64;
            y += Complex64::new(math::cos(theta), math::sin(theta)) * powers[m];
        }
        let v = real_nonnegative(Complex64::new(1.0 + y.re, y.im))?;
        root_sum += math::sqrt(v);
    }
    let s = root_sum / d as f64;
    Ok(s * s)
}

/// [`srm_success`] applied to the class-j overlap table of an ensemble.
///
/// # Errors
/// [`Error::OutOfRange`] for j ≥ d; [`Error::EmptyClass`] when class j has
/// zero weight; otherwise as [`srm_success`].
pub fn srm_success_error_class(ens: &EveEnsembleD, j: usize, n: u32) -> Result<f64> {
    if j >= ens.dim() {
        return Err(Error::OutOfRange {
            name: "class",
            value: j as f64,
        });
    }
    match ens.class_overlaps(j) {
        Some(table) => srm_success(table, ens.dim(), n),
        None => Err(Error::EmptyClass { class: j }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        bb84_attack_state, make_bell_diagonal, protocol_channel_d, sixstate_attack_state,
        GeneralizedPauliChannel, ProtocolFamily,
    };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn qubit_ensemble_examples() {
        let ebit = qubit_ensemble(&make_bell_diagonal([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert_eq!(ebit.eps(), 0.0);
        assert_eq!(ebit.lambda_eq(), 1.0);
        assert_eq!(ebit.lambda_dif(), 1.0);

        let six = qubit_ensemble(&sixstate_attack_state(0.2).unwrap());
        assert!(close(six.eps(), 0.2, 1e-15));
        assert!(close(six.lambda_eq(), 0.75, 1e-12));
        assert!(close(six.lambda_dif(), 0.0, 1e-15));

        let bb = qubit_ensemble(&bb84_attack_state(0.2, 0.0).unwrap());
        assert!(close(bb.eps(), 0.2, 1e-15));
        assert!(close(bb.lambda_eq(), 0.5, 1e-12));
        assert_eq!(bb.lambda_dif(), 1.0);
    }

    #[test]
    fn representative_state_round_trips() {
        let s = make_bell_diagonal([0.55, 0.25, 0.15, 0.05]).unwrap();
        let ens = qubit_ensemble(&s);
        let r = make_bell_diagonal(ens.representative_lambdas()).unwrap();
        let back = qubit_ensemble(&r);
        assert!(close(back.eps(), ens.eps(), 1e-12));
        assert!(close(back.lambda_eq(), ens.lambda_eq(), 1e-12));
        assert!(close(back.lambda_dif(), ens.lambda_dif(), 1e-12));
    }

    #[test]
    fn qudit_ensemble_reduces_to_qubit_at_d2() {
        let s = sixstate_attack_state(0.2).unwrap();
        let ch = GeneralizedPauliChannel::new(
            2,
            &[s.lambda(0), s.lambda(1), s.lambda(2), s.lambda(3)],
        )
        .unwrap();
        let ens = qudit_ensemble(&ch);
        let q = qubit_ensemble(&s);
        let o0 = ens.class_overlaps(0).unwrap();
        let o1 = ens.class_overlaps(1).unwrap();
        assert!(close(o0[1].norm(), q.lambda_eq(), 1e-12));
        assert!(close(o0[1].re, 0.75, 1e-12));
        assert!(close(o1[1].norm(), q.lambda_dif(), 1e-12));
        assert!(close(o0[0].re, 1.0, 1e-15));
        assert!(close(o1[0].re, 1.0, 1e-15));
    }

    #[test]
    fn qudit_ensemble_identity_channel() {
        let mut p = alloc::vec![0.0; 9];
        p[0] = 1.0;
        let ch = GeneralizedPauliChannel::new(3, &p).unwrap();
        let ens = qudit_ensemble(&ch);
        let o0 = ens.class_overlaps(0).unwrap();
        for m in 0..3 {
            assert!(close(o0[m].re, 1.0, 1e-15));
            assert!(close(o0[m].im, 0.0, 1e-15));
        }
        assert!(ens.class_overlaps(1).is_none());
        assert!(ens.class_overlaps(2).is_none());
    }

    #[test]
    fn qudit_ensemble_symmetric_family_overlap() {
        // For the all-bases family the class-0 off-origin overlap is the
        // probability contrast (v² − x²)/F.
        let ch = protocol_channel_d(ProtocolFamily::DPlusOneBases, 3, 0.7, None).unwrap();
        let ens = qudit_ensemble(&ch);
        let want = (ch.prob(0, 0) - ch.prob(0, 1)) / 0.7;
        let o0 = ens.class_overlaps(0).unwrap();
        for m in 1..3 {
            assert!(close(o0[m].re, want, 1e-12));
            assert!(close(o0[m].im, 0.0, 1e-12));
        }
    }

    #[test]
    fn helstrom_anchor_values() {
        assert_eq!(helstrom_error(0.0, 1), 0.0);
        assert_eq!(helstrom_error(1.0, 1), 0.5);
        assert_eq!(helstrom_error(1.0, 17), 0.5);
        // overlap √0.5 at N=2: 1/2 − √3/4.
        assert!(close(
            helstrom_error(0.5_f64.sqrt(), 2),
            0.5 - 3.0_f64.sqrt() / 4.0,
            1e-12
        ));
        assert!(close(helstrom_error(0.5_f64.sqrt(), 2), 0.0669873, 1e-7));
    }

    #[test]
    fn helstrom_nonincreasing_in_n() {
        for i in 0..=10 {
            let c = i as f64 / 10.0;
            let mut prev = helstrom_error(c, 1);
            for n in 2..=64 {
                let cur = helstrom_error(c, n);
                assert!(cur <= prev + 1e-15);
                prev = cur;
            }
        }
    }

    #[test]
    fn gu_d2_closed_form() {
        for &c in &[0.0, 0.3, 0.75, 1.0] {
            for n in [1u32, 2, 5] {
                let table = [Complex64::new(1.0, 0.0), Complex64::new(c, 0.0)];
                let rep = gu_eigenvalues(&table, 2, n).unwrap();
                let cn = c.powi(n as i32);
                assert!(close(rep.eigenvalues[0], (1.0 + cn) / 2.0, 1e-12));
                assert!(close(rep.eigenvalues[1], (1.0 - cn) / 2.0, 1e-12));
                assert!(close(rep.total_weight(), 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn gu_identical_states_are_pure() {
        let table = alloc::vec![Complex64::new(1.0, 0.0); 5];
        let rep = gu_eigenvalues(&table, 5, 3).unwrap();
        assert!(close(rep.eigenvalues[0], 1.0, 1e-12));
        for v in &rep.eigenvalues[1..] {
            assert!(close(*v, 0.0, 1e-12));
        }
        assert!(close(rep.entropy_bits, 0.0, 1e-10));
    }

    #[test]
    fn gu_rejects_invalid_gram_generator() {
        // overlap(1) = −1 with overlap(2) = +1 cannot come from actual
        // states: an eigenvalue goes negative.
        let table = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(
            gu_eigenvalues(&table, 3, 1),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn srm_matches_helstrom_at_d2() {
        for &c in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            for n in [1u32, 3, 16] {
                let table = [Complex64::new(1.0, 0.0), Complex64::new(c, 0.0)];
                let srm = srm_success(&table, 2, n).unwrap();
                assert!(close(srm, 1.0 - helstrom_error(c, n), 1e-12));
            }
        }
    }

    #[test]
    fn srm_orthogonal_states_always_win() {
        let table = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(close(srm_success(&table, 4, 1).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn srm_uniform_amplitude_row_is_fourier_orthogonal() {
        // A uniform probability row makes Eve's d states exactly orthogonal.
        let ch = GeneralizedPauliChannel::new(3, &[1.0 / 9.0; 9]).unwrap();
        let ens = qudit_ensemble(&ch);
        let p = srm_success_error_class(&ens, 0, 1).unwrap();
        assert!(close(p, 1.0, 1e-12));
    }

    #[test]
    fn srm_class_one_of_plain_bb84_attack_is_a_coin_toss() {
        let s = bb84_attack_state(0.2, 0.0).unwrap();
        let ch = GeneralizedPauliChannel::new(
            2,
            &[s.lambda(0), s.lambda(1), s.lambda(2), s.lambda(3)],
        )
        .unwrap();
        let ens = qudit_ensemble(&ch);
        let p = srm_success_error_class(&ens, 1, 7).unwrap();
        assert!(close(p, 0.5, 1e-12));
    }

    #[test]
    fn srm_classes_symmetric_for_all_bases_family() {
        let ch = protocol_channel_d(ProtocolFamily::DPlusOneBases, 3, 0.7, None).unwrap();
        let ens = qudit_ensemble(&ch);
        let p1 = srm_success_error_class(&ens, 1, 3).unwrap();
        let p2 = srm_success_error_class(&ens, 2, 3).unwrap();
        assert!(close(p1, p2, 1e-12));
    }

    #[test]
    fn srm_empty_class_is_rejected() {
        let mut p = alloc::vec![0.0; 9];
        p[0] = 1.0;
        let ch = GeneralizedPauliChannel::new(3, &p).unwrap();
        let ens = qudit_ensemble(&ch);
        assert!(matches!(
            srm_success_error_class(&ens, 1, 1),
            Err(Error::EmptyClass { class: 1 })
        ));
        assert!(matches!(
            srm_success_error_class(&ens, 3, 1),
            Err(Error::OutOfRange { .. })
        ));
    }
}
