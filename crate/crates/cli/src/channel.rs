//! Channel description files: a single JSON document declaring either a
//! qubit Bell-diagonal state or a d-dimensional flip-probability table.
//!
//! ```json
//! {"kind":"qubit","lambdas":[0.7,0.1,0.1,0.1]}
//! {"kind":"qudit","d":3,"p":[[0.9,0.02,0.02],[0.02,0.01,0.0],[0.02,0.0,0.01]]}
//! ```
//!
//! Parsing is strict (unknown fields rejected) and validation failures are
//! reported with the path of the offending field.

use std::path::Path;

use keydist_core::states::{make_bell_diagonal, BellDiagonalState, GeneralizedPauliChannel};
use keydist_core::Error;
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliError};

/// The on-disk schema, reused verbatim as the input echo in output
/// documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelFile {
    /// Bell-diagonal qubit channel with coefficients λ₁..λ₄.
    Qubit {
        /// The four Bell coefficients, in order.
        lambdas: [f64; 4],
    },
    /// Generalized Pauli channel as a d×d flip-probability table
    /// (row m = key-basis shift, column n = phase shift).
    Qudit {
        /// Alphabet dimension.
        d: usize,
        /// Row-major probability table, d rows of d entries.
        p: Vec<Vec<f64>>,
    },
}

/// A validated channel, ready for the library.
#[derive(Debug)]
pub enum LoadedChannel {
    /// Qubit Bell-diagonal state.
    Qubit(BellDiagonalState),
    /// d-dimensional generalized Pauli channel.
    Qudit(GeneralizedPauliChannel),
}

/// Reads, parses, and validates a channel file. All failures are usage
/// errors (exit 2) with the file path and the offending field.
pub fn load(path: &Path) -> Result<(ChannelFile, LoadedChannel), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("channel file {}: {e}", path.display())))?;
    let parsed: ChannelFile = serde_json::from_str(&text)
        .map_err(|e| usage(format!("channel file {}: parse error: {e}", path.display())))?;
    let loaded = validate(&parsed)
        .map_err(|msg| usage(format!("channel file {}: {msg}", path.display())))?;
    Ok((parsed, loaded))
}

/// Semantic validation, with field paths in every message.
fn validate(file: &ChannelFile) -> Result<LoadedChannel, String> {
    match file {
        ChannelFile::Qubit { lambdas } => {
            let state = make_bell_diagonal(*lambdas).map_err(|e| match e {
                Error::NegativeCoefficient { index, value } => {
                    format!("lambdas[{index}]: negative coefficient ({value:e})")
                }
                Error::NotNormalized { sum } => {
                    format!("lambdas: sum is {sum:.12}, expected 1 within 1e-9")
                }
                other => format!("lambdas: {other}"),
            })?;
            Ok(LoadedChannel::Qubit(state))
        }
        ChannelFile::Qudit { d, p } => {
            let d = *d;
            if d < 2 {
                return Err(format!("d: must be at least 2, found {d}"));
            }
            if p.len() != d {
                return Err(format!("p: expected {d} rows, found {}", p.len()));
            }
            for (m, row) in p.iter().enumerate() {
                if row.len() != d {
                    return Err(format!("p[{m}]: expected {d} entries, found {}", row.len()));
                }
            }
            let flat: Vec<f64> = p.iter().flatten().copied().collect();
            let channel = GeneralizedPauliChannel::new(d, &flat).map_err(|e| match e {
                Error::NegativeCoefficient { index, value } => {
                    format!(
                        "p[{}][{}]: negative coefficient ({value:e})",
                        index / d,
                        index % d
                    )
                }
                Error::NotNormalized { sum } => {
                    format!("p: sum is {sum:.12}, expected 1 within 1e-9")
                }
                other => format!("p: {other}"),
            })?;
            Ok(LoadedChannel::Qudit(channel))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_document_round_trip() {
        let text = r#"{"kind":"qubit","lambdas":[0.7,0.1,0.1,0.1]}"#;
        let parsed: ChannelFile = serde_json::from_str(text).unwrap();
        assert!(matches!(validate(&parsed), Ok(LoadedChannel::Qubit(_))));
        assert_eq!(crate::json::to_json_line(&parsed), text.replace("0.7", "0.700000000").replace("0.1", "0.100000000"));
    }

    #[test]
    fn field_paths_in_messages() {
        let bad: ChannelFile = serde_json::from_str(
            r#"{"kind":"qubit","lambdas":[0.9,0.2,-0.05,-0.05]}"#,
        )
        .unwrap();
        let msg = validate(&bad).unwrap_err();
        assert!(msg.contains("lambdas[2]"), "{msg}");

        let bad: ChannelFile =
            serde_json::from_str(r#"{"kind":"qudit","d":2,"p":[[0.9,0.1],[0.2]]}"#).unwrap();
        let msg = validate(&bad).unwrap_err();
        assert!(msg.contains("p[1]"), "{msg}");

        let bad: ChannelFile =
            serde_json::from_str(r#"{"kind":"qudit","d":2,"p":[[0.9,0.2],[-0.05,-0.05]]}"#)
                .unwrap();
        let msg = validate(&bad).unwrap_err();
        assert!(msg.contains("p[1][0]"), "{msg}");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(
            serde_json::from_str::<ChannelFile>(r#"{"kind":"qubit","lambda":[1,0,0,0]}"#).is_err()
        );
    }
}
