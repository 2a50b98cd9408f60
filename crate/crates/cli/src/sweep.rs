//! `sweep`: tabulate the security margin, verdict, and minimal distilling
//! block size of a protocol's canonical attack family across a range of
//! error rates, writing one CSV row per grid point.
//!
//! The canonical family member at each error rate is the two-way-optimal
//! attack: x = 0 for the two-basis qubit protocol, the symmetric state for
//! the three-basis one, y = 0 for the two-basis d-dimensional family, and
//! the fully symmetric channel for the (d+1)-basis family.

use std::io::Write;
use std::path::Path;

use keydist_core::eve::{qubit_ensemble, qudit_ensemble};
use keydist_core::keyrate::{holevo_post_cad_d, minimal_block_size, rate_post_cad_qubit};
use keydist_core::security::{qubit_security, qudit_security, Protocol};
use keydist_core::states::{
    bb84_attack_state, protocol_channel_d, sixstate_attack_state, ProtocolFamily,
};
use rayon::prelude::*;

use crate::critical::{resolve_protocol, ProtocolArg};
use crate::error::{internal, usage, CliError};
use crate::json::{fmt_sig9, to_json_line};

/// One evaluated grid point.
struct Row {
    error_rate: f64,
    margin: f64,
    secure: bool,
    minimal_n: Option<u32>,
    rate_at_minimal_n: Option<f64>,
}

/// Evaluates one grid point of the sweep.
fn evaluate(protocol: Protocol, error_rate: f64, n_max: u32) -> Result<Row, CliError> {
    let bad_rate = |e: keydist_core::Error| {
        usage(format!(
            "error rate {error_rate} is outside the protocol's domain: {e}"
        ))
    };
    match protocol {
        Protocol::Bb84 | Protocol::SixState => {
            let state = match protocol {
                Protocol::Bb84 => bb84_attack_state(error_rate, 0.0),
                _ => sixstate_attack_state(error_rate),
            }
            .map_err(bad_rate)?;
            let ens = qubit_ensemble(&state);
            let verdict = qubit_security(&ens);
            let minimal_n = minimal_block_size(&ens, n_max);
            Ok(Row {
                error_rate,
                margin: verdict.margin,
                secure: verdict.secure,
                minimal_n,
                rate_at_minimal_n: minimal_n.map(|n| rate_post_cad_qubit(&ens, n).rate),
            })
        }
        Protocol::TwoBases { d } | Protocol::DPlusOneBases { d } => {
            let family = match protocol {
                Protocol::TwoBases { .. } => ProtocolFamily::TwoBases,
                _ => ProtocolFamily::DPlusOneBases,
            };
            let channel = protocol_channel_d(family, d, 1.0 - error_rate, None).map_err(bad_rate)?;
            let ens = qudit_ensemble(&channel);
            let verdict = qudit_security(&ens).map_err(internal)?;
            let mut minimal_n = None;
            let mut rate_at = None;
            for n in 1..=n_max {
                let report = holevo_post_cad_d(&ens, n).map_err(internal)?;
                if report.rate > 0.0 {
                    minimal_n = Some(n);
                    rate_at = Some(report.rate);
                    break;
                }
            }
            Ok(Row {
                error_rate,
                margin: verdict.margin,
                secure: verdict.secure,
                minimal_n,
                rate_at_minimal_n: rate_at,
            })
        }
    }
}

/// Receipt document printed to standard output after the CSV is written.
#[derive(serde::Serialize)]
struct SweepReceipt<'a> {
    /// Protocol name as selected.
    protocol: &'static str,
    /// Alphabet dimension.
    d: usize,
    /// First error rate.
    from: f64,
    /// Last error rate.
    to: f64,
    /// Number of rows written.
    rows: usize,
    /// Output path as given.
    out: &'a str,
}

/// Runs the `sweep` command: writes the CSV and prints a receipt.
#[allow(clippy::too_many_arguments)]
pub fn run(
    protocol_arg: ProtocolArg,
    d: Option<usize>,
    from: f64,
    to: f64,
    steps: u32,
    out: &Path,
    n_max: u32,
    pretty: bool,
) -> Result<(), CliError> {
    let protocol = resolve_protocol(protocol_arg, d)?;
    if !(from.is_finite() && to.is_finite()) {
        return Err(usage("--from and --to must be finite"));
    }
    if from >= to {
        return Err(usage(format!(
            "--from must be strictly below --to (got {from} >= {to})"
        )));
    }
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, found {steps}")));
    }
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }

    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            let tau = f64::from(i) / f64::from(steps - 1);
            from * (1.0 - tau) + to * tau
        })
        .collect();
    let rows: Vec<Row> = grid
        .par_iter()
        .map(|&e| evaluate(protocol, e, n_max))
        .collect::<Result<_, _>>()?;

    let mut csv = String::from("error_rate,margin,secure,minimal_N,rate_at_minimal_N\n");
    for row in &rows {
        csv.push_str(&fmt_sig9(row.error_rate));
        csv.push(',');
        csv.push_str(&fmt_sig9(row.margin));
        csv.push(',');
        csv.push_str(if row.secure { "true" } else { "false" });
        csv.push(',');
        if let Some(n) = row.minimal_n {
            csv.push_str(&n.to_string());
        }
        csv.push(',');
        if let Some(r) = row.rate_at_minimal_n {
            csv.push_str(&fmt_sig9(r));
        }
        csv.push('\n');
    }
    let mut file = std::fs::File::create(out)
        .map_err(|e| internal(format!("cannot create {}: {e}", out.display())))?;
    file.write_all(csv.as_bytes())
        .map_err(|e| internal(format!("cannot write {}: {e}", out.display())))?;

    let out_path = out.display().to_string();
    let receipt = SweepReceipt {
        protocol: crate::critical::protocol_name(protocol_arg),
        d: crate::critical::protocol_dim(protocol),
        from,
        to,
        rows: rows.len(),
        out: &out_path,
    };
    if pretty {
        println!(
            "wrote {} rows ({} .. {}) to {}",
            receipt.rows,
            fmt_sig9(receipt.from),
            fmt_sig9(receipt.to),
            receipt.out
        );
    } else {
        println!("{}", to_json_line(&receipt));
    }
    Ok(())
}
