//! Channel descriptions: qubit Bell-diagonal states and d-dimensional
//! generalized Pauli channels, together with the protocol-specific attack
//! families built on them.
//!
//! A Pauli channel acting on half of a maximally entangled pair produces a
//! Bell-diagonal state Σᵢ λᵢ |Φᵢ⟩⟨Φᵢ| with the basis convention
//!
//! - Φ₁ = (|00⟩+|11⟩)/√2, Φ₂ = (|00⟩−|11⟩)/√2 (no bit flip),
//! - Φ₃ = (|01⟩+|10⟩)/√2, Φ₄ = (|01⟩−|10⟩)/√2 (bit flip),
//!
//! so the bit error rate seen by the honest parties is λ₃+λ₄. The
//! d-dimensional analogue is a d×d matrix p_{m,n} giving the probability of
//! the shift-by-m, phase-by-n generalized Pauli operator; row m = 0 carries
//! the "no shift" events and its row sum is the channel fidelity F.
//!
//! All local unitary bookkeeping is done as index permutations on the
//! coefficients; no operator matrices are ever materialized.

use crate::error::{Error, Result};
use crate::math;

use alloc::vec::Vec;

/// Absolute slack below zero tolerated on probability inputs before they are
/// rejected; values in `[-NEGATIVITY_CLAMP, 0)` are clamped to `0`.
const NEGATIVITY_CLAMP: f64 = 1e-12;

/// Tolerance on |Σ coefficients − 1|; inputs inside it are accepted
/// verbatim, inputs outside it are rejected.
const NORMALIZATION_TOL: f64 = 1e-9;

/// A two-qubit Bell-diagonal state (equivalently, a qubit Pauli channel).
///
/// Invariants (enforced by [`make_bell_diagonal`]): every coefficient is
/// nonnegative and they sum to 1 within 1e-9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    lambdas: [f64; 4],
}

impl BellDiagonalState {
    /// The four Bell coefficients `[λ₁, λ₂, λ₃, λ₄]`.
    #[must_use]
    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    /// Coefficient λ_{i+1} (zero-based index).
    #[must_use]
    pub fn lambda(&self, i: usize) -> f64 {
        self.lambdas[i]
    }
}

/// A relabeling of the four Bell-basis indices, recording how a local unitary
/// permutes the coefficients of a [`BellDiagonalState`].
///
/// `map[i]` is the output slot of input index `i`: applying the permutation
/// to coefficients `c` yields `out[map[i]] = c[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BellPermutation {
    map: [usize; 4],
}

impl BellPermutation {
    /// The identity relabeling.
    #[must_use]
    pub fn identity() -> Self {
        BellPermutation { map: [0, 1, 2, 3] }
    }

    /// Builds a permutation from a destination map, checking bijectivity.
    ///
    /// # Errors
    /// [`Error::OutOfRange`] when `map` is not a permutation of 0..=3.
    pub fn new(map: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &t in &map {
            if t > 3 || seen[t] {
                return Err(Error::OutOfRange {
                    name: "permutation",
                    value: t as f64,
                });
            }
            seen[t] = true;
        }
        Ok(BellPermutation { map })
    }

    /// Destination slot of input index `i`.
    #[must_use]
    pub fn destination(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Applies the relabeling to a coefficient vector.
    #[must_use]
    pub fn apply(&self, c: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[self.map[i]] = c[i];
        }
        out
    }

    /// The inverse relabeling.
    #[must_use]
    pub fn inverse(&self) -> BellPermutation {
        let mut inv = [0usize; 4];
        for i in 0..4 {
            inv[self.map[i]] = i;
        }
        BellPermutation { map: inv }
    }

    /// True if this is the identity.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.map == [0, 1, 2, 3]
    }
}

/// Shrinking factors of the asymmetric-cloning interaction that produces a
/// symmetric (λ₂ = λ₃) Bell-diagonal state: Bob's and Eve's Bloch-plane and
/// y-axis contraction coefficients.
///
/// For states realizable by the cloning interaction all four values lie in
/// [0, 1]; the formulas are evaluated literally and are not clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloningReport {
    /// Bob's contraction in the x–z plane.
    pub eta_xz_bob: f64,
    /// Eve's contraction in the x–z plane.
    pub eta_xz_eve: f64,
    /// Bob's contraction along y.
    pub eta_y_bob: f64,
    /// Eve's contraction along y.
    pub eta_y_eve: f64,
}

/// Validates raw coefficients against nonnegativity (slack 1e-12, clamped)
/// and normalization (tolerance 1e-9). Accepted values are kept verbatim:
/// rescaling would shift boundary cases (a coefficient at exactly 1/2, a
/// family member at its separability point) by an ulp, and every consumer
/// is insensitive to a relative 1e-9 scale.
fn validated_distribution(values: &mut [f64]) -> Result<()> {
    for (i, v) in values.iter_mut().enumerate() {
        if *v < -NEGATIVITY_CLAMP {
            return Err(Error::NegativeCoefficient {
                index: i,
                value: *v,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = values.iter().sum();
    if math::abs(sum - 1.0) > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// Builds a validated Bell-diagonal state from four coefficients.
///
/// Coefficients may carry floating-point noise: values within 1e-12 below
/// zero are clamped to 0, and a total within 1e-9 of 1 is accepted as-is.
///
/// # Errors
/// [`Error::NegativeCoefficient`] or [`Error::NotNormalized`].
pub fn make_bell_diagonal(lambdas: [f64; 4]) -> Result<BellDiagonalState> {
    let mut l = lambdas;
    validated_distribution(&mut l)?;
    Ok(BellDiagonalState { lambdas: l })
}

/// Puts a state into canonical coefficient order and reports the relabeling.
///
/// The canonical order places the largest coefficient first and the smallest
/// second, then sorts the remaining two in descending order. Ties are broken
/// by preferring the lowest original index for slots 1 and 2, and by keeping
/// the original relative order for slots 3 and 4. Canonicalization is never
/// applied implicitly by any other operation: protocol analyses use states
/// exactly as constructed, because reordering changes which coefficient
/// plays the "error" role.
#[must_use]
pub fn canonicalize(s: &BellDiagonalState) -> (BellDiagonalState, BellPermutation) {
    let l = s.lambdas;
    // Largest coefficient, lowest index on ties.
    let mut i_max = 0;
    for i in 1..4 {
        if l[i] > l[i_max] {
            i_max = i;
        }
    }
    // Smallest among the rest, lowest index on ties.
    let mut i_min = usize::MAX;
    for i in 0..4 {
        if i == i_max {
            continue;
        }
        if i_min == usize::MAX || l[i] < l[i_min] {
            i_min = i;
        }
    }
    // The remaining pair in original order (j < k); the larger goes to slot 3
    // and on a tie j keeps it.
    let rest: Vec<usize> = (0..4).filter(|&i| i != i_max && i != i_min).collect();
    let (j, k) = (rest[0], rest[1]);
    let (third, fourth) = if l[j] >= l[k] { (j, k) } else { (k, j) };

    let mut map = [0usize; 4];
    map[i_max] = 0;
    map[i_min] = 1;
    map[third] = 2;
    map[fourth] = 3;
    let perm = BellPermutation { map };
    let out = perm.apply(l);
    (
        BellDiagonalState { lambdas: out },
        perm,
    )
}

/// True iff the state is entangled, i.e. its largest Bell coefficient
/// exceeds 1/2 (strictly; the boundary state is separable).
#[must_use]
pub fn is_entangled(s: &BellDiagonalState) -> bool {
    let l = s.lambdas;
    let max = l.iter().fold(f64::MIN, |a, &b| if b > a { b } else { a });
    max > 0.5
}

/// The bit error rate between the honest parties: λ₃ + λ₄.
#[must_use]
pub fn qber(s: &BellDiagonalState) -> f64 {
    s.lambdas[2] + s.lambdas[3]
}

/// The one-parameter-per-error-rate attack family against the two-basis
/// qubit protocol: coefficients `(1−2Q+x, Q−x, Q−x, x)`.
///
/// Every member produces bit error rate `Q` in both measured bases. The
/// two-way-optimal member has `x = 0`; the one-way-optimal (cloning) member
/// has `x = Q²`.
///
/// # Errors
/// [`Error::OutOfRange`] unless `0 ≤ x ≤ Q ≤ 1/2`.
pub fn bb84_attack_state(q: f64, x: f64) -> Result<BellDiagonalState> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::OutOfRange {
            name: "qber",
            value: q,
        });
    }
    if !(0.0..=q).contains(&x) {
        return Err(Error::OutOfRange { name: "x", value: x });
    }
    make_bell_diagonal([1.0 - 2.0 * q + x, q - x, q - x, x])
}

/// The symmetric attack against the three-basis qubit protocol:
/// coefficients `(1−3Q/2, Q/2, Q/2, Q/2)` for error rate `Q`.
///
/// # Errors
/// [`Error::OutOfRange`] unless `0 ≤ Q ≤ 2/3` (positivity of λ₁).
pub fn sixstate_attack_state(q: f64) -> Result<BellDiagonalState> {
    if !(0.0..=2.0 / 3.0).contains(&q) {
        return Err(Error::OutOfRange {
            name: "qber",
            value: q,
        });
    }
    make_bell_diagonal([1.0 - 1.5 * q, 0.5 * q, 0.5 * q, 0.5 * q])
}

/// A d-dimensional generalized Pauli channel: probabilities p_{m,n} of the
/// shift-m, phase-n error operator, stored row-major with row index m.
///
/// Invariants (enforced on construction): d ≥ 2, all entries nonnegative,
/// entries sum to 1 within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPauliChannel {
    d: usize,
    p: Vec<f64>,
}

impl GeneralizedPauliChannel {
    /// Builds a validated channel from dimension `d` and a row-major d×d
    /// probability table.
    ///
    /// # Errors
    /// [`Error::OutOfRange`] for `d < 2`, [`Error::LengthMismatch`] if the
    /// table is not d², [`Error::NegativeCoefficient`] /
    /// [`Error::NotNormalized`] on invalid probabilities.
    pub fn new(d: usize, probabilities: &[f64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
            });
        }
        if probabilities.len() != d * d {
            return Err(Error::LengthMismatch {
                left: probabilities.len(),
                right: d * d,
            });
        }
        let mut p = probabilities.to_vec();
        validated_distribution(&mut p)?;
        Ok(GeneralizedPauliChannel { d, p })
    }

    /// Channel dimension d.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Probability of the shift-m, phase-n error.
    #[must_use]
    pub fn prob(&self, m: usize, n: usize) -> f64 {
        self.p[m * self.d + n]
    }

    /// The full row-major probability table.
    #[must_use]
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

/// The two symmetric qudit protocol/attack families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolFamily {
    /// Two computational-type bases measured; amplitude `x` on the first row
    /// and column, `y` elsewhere, free parameter `y`.
    TwoBases,
    /// All d+1 mutually unbiased bases measured; symmetry forces a single
    /// amplitude on every non-(0,0) entry.
    DPlusOneBases,
}

/// Builds the symmetric attack channel for a protocol family at fidelity `F`.
///
/// Amplitude structure (probabilities are squared amplitudes): entry (0,0)
/// is `v`, the remaining first row and first column are `x`, and all other
/// entries are `y`, with `v² + 2(d−1)x² + (d−1)²y² = 1` and row-0 sum `F`.
/// For [`ProtocolFamily::TwoBases`] the parameter `y` may be chosen (default
/// 0, which is the strongest attack); for [`ProtocolFamily::DPlusOneBases`]
/// the extra basis constraints force `x = y` and `y` is ignored.
///
/// # Errors
/// [`Error::OutOfRange`] for `d < 2`, `F ∉ [1/d, 1]`, or negative `y`;
/// [`Error::InfeasibleFidelity`] when no nonnegative `(v, x, y)` solves the
/// constraints.
pub fn protocol_channel_d(
    kind: ProtocolFamily,
    d: usize,
    fidelity: f64,
    y: Option<f64>,
) -> Result<GeneralizedPauliChannel> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    let dd = d as f64;
    if !(1.0 / dd..=1.0).contains(&fidelity) {
        return Err(Error::OutOfRange {
            name: "fidelity",
            value: fidelity,
        });
    }
    let (v2, x2, y2) = match kind {
        ProtocolFamily::DPlusOneBases => {
            let v2 = ((dd + 1.0) * fidelity - 1.0) / dd;
            let xy2 = (1.0 - fidelity) / (dd * (dd - 1.0));
            (v2, xy2, xy2)
        }
        ProtocolFamily::TwoBases => {
            let y = y.unwrap_or(0.0);
            if y < 0.0 {
                return Err(Error::OutOfRange { name: "y", value: y });
            }
            let y2 = y * y;
            let x2 = (1.0 - fidelity) / (dd - 1.0) - (dd - 1.0) * y2;
            let v2 = 2.0 * fidelity - 1.0 + (dd - 1.0) * (dd - 1.0) * y2;
            if x2 < -NEGATIVITY_CLAMP || v2 < -NEGATIVITY_CLAMP {
                return Err(Error::InfeasibleFidelity { fidelity });
            }
            (v2.max(0.0), x2.max(0.0), y2)
        }
    };
    let mut p = alloc::vec![0.0; d * d];
    for m in 0..d {
        for n in 0..d {
            p[m * d + n] = match (m, n) {
                (0, 0) => v2,
                (0, _) | (_, 0) => x2,
                _ => y2,
            };
        }
    }
    GeneralizedPauliChannel::new(d, &p)
}

/// Fidelity and disturbance profile of a channel: `F` is the row-0 sum
/// (Alice's and Bob's symbols agree), `D_j` is the row-j sum (Bob's symbol
/// differs by j). `F + Σ D_j = 1`.
#[must_use]
pub fn fidelity_disturbances(ch: &GeneralizedPauliChannel) -> (f64, Vec<f64>) {
    let d = ch.dim();
    let mut f = 0.0;
    for n in 0..d {
        f += ch.prob(0, n);
    }
    let mut dist = Vec::with_capacity(d - 1);
    for m in 1..d {
        let mut s = 0.0;
        for n in 0..d {
            s += ch.prob(m, n);
        }
        dist.push(s);
    }
    (f, dist)
}

/// Shrinking factors of the asymmetric cloning interaction realizing a
/// symmetric Bell-diagonal state (λ₂ = λ₃ = λ):
///
/// - η_xz (Bob) = λ₁ − λ₄
/// - η_xz (Eve) = 2√λ·(√λ₁ + √λ₄)
/// - η_y  (Bob) = 1 − 4λ + 4λ₄
/// - η_y  (Eve) = 2·(λ + √(λ₄·λ₁))
///
/// # Errors
/// [`Error::AsymmetricState`] when |λ₂ − λ₃| > 1e-9.
pub fn cloning_report(s: &BellDiagonalState) -> Result<CloningReport> {
    let [l1, l2, l3, l4] = s.lambdas;
    if math::abs(l2 - l3) > 1e-9 {
        return Err(Error::AsymmetricState {
            lambda2: l2,
            lambda3: l3,
        });
    }
    let lam = l2;
    Ok(CloningReport {
        eta_xz_bob: l1 - l4,
        eta_xz_eve: 2.0 * math::sqrt(lam) * (math::sqrt(l1) + math::sqrt(l4)),
        eta_y_bob: 1.0 - 4.0 * lam + 4.0 * l4,
        eta_y_eve: 2.0 * (lam + math::sqrt(l4 * l1)),
    })
}
