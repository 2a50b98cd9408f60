//! Crate-wide error type. Every fallible operation returns [`Error`] so that
//! callers (including the CLI) can match on one enum and produce uniform
//! diagnostics.

use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building channel models or evaluating
/// rates and thresholds.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability-like coefficient was negative beyond numerical noise.
    NegativeCoefficient {
        /// Flat index of the offending entry.
        index: usize,
        /// The value found.
        value: f64,
    },
    /// A distribution did not sum to one within tolerance.
    NotNormalized {
        /// The sum that was found.
        sum: f64,
    },
    /// A scalar parameter fell outside its documented domain.
    OutOfRange {
        /// Name of the parameter.
        name: &'static str,
        /// The value supplied.
        value: f64,
    },
    /// A protocol family has no nonnegative amplitude solution for the
    /// requested fidelity / off-diagonal weight combination.
    InfeasibleFidelity {
        /// Requested channel fidelity.
        fidelity: f64,
    },
    /// An operation that requires λ₂ = λ₃ was given a state violating it.
    AsymmetricState {
        /// λ₂ of the state.
        lambda2: f64,
        /// λ₃ of the state.
        lambda3: f64,
    },
    /// A Gram spectrum came out with a negative (or non-real) eigenvalue
    /// beyond numerical noise, so the inputs do not describe a valid set of
    /// state overlaps.
    NotPositiveSemidefinite {
        /// The offending eigenvalue (or imaginary residue magnitude).
        eigenvalue: f64,
    },
    /// A per-class quantity was requested for an error class of zero weight.
    EmptyClass {
        /// The class index.
        class: usize,
    },
    /// The channel never accepts a block (zero fidelity), so post-selection
    /// statistics are undefined.
    DegenerateChannel,
    /// Two sequences that must be index-aligned had different lengths.
    LengthMismatch {
        /// Length of the first sequence.
        left: usize,
        /// Length of the second sequence.
        right: usize,
    },
    /// A parameter exceeded the supported computational budget.
    BudgetExceeded {
        /// Name of the bounded parameter.
        name: &'static str,
        /// Largest supported value.
        limit: u32,
        /// Value requested.
        requested: u32,
    },
    /// An asymptotic formula was evaluated where its controlling small
    /// parameters are not yet small.
    OutsideAsymptoticRegime {
        /// The largest controlling parameter.
        value: f64,
    },
    /// The requested option combination is not defined.
    UnsupportedCombination {
        /// Short description of the unsupported request.
        detail: &'static str,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeCoefficient { index, value } => {
                write!(f, "coefficient {index} is negative ({value:e})")
            }
            Error::NotNormalized { sum } => {
                write!(f, "coefficients sum to {sum:.12} instead of 1")
            }
            Error::OutOfRange { name, value } => {
                write!(f, "parameter `{name}` = {value} is outside its domain")
            }
            Error::InfeasibleFidelity { fidelity } => {
                write!(
                    f,
                    "no nonnegative amplitude solution exists for fidelity {fidelity}"
                )
            }
            Error::AsymmetricState { lambda2, lambda3 } => {
                write!(
                    f,
                    "state is not symmetric: λ₂ = {lambda2} but λ₃ = {lambda3}"
                )
            }
            Error::NotPositiveSemidefinite { eigenvalue } => {
                write!(
                    f,
                    "overlap data is not a valid Gram spectrum (eigenvalue {eigenvalue:e})"
                )
            }
            Error::EmptyClass { class } => {
                write!(f, "error class {class} has zero weight")
            }
            Error::DegenerateChannel => {
                write!(f, "channel fidelity is zero; no block is ever accepted")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "sequence lengths differ: {left} vs {right}")
            }
            Error::BudgetExceeded {
                name,
                limit,
                requested,
            } => {
                write!(
                    f,
                    "`{name}` = {requested} exceeds the supported limit of {limit}"
                )
            }
            Error::OutsideAsymptoticRegime { value } => {
                write!(
                    f,
                    "asymptotic expression invalid here: controlling parameter {value} ≥ 0.1"
                )
            }
            Error::UnsupportedCombination { detail } => {
                write!(f, "unsupported combination: {detail}")
            }
        }
    }
}

impl core::error::Error for Error {}
