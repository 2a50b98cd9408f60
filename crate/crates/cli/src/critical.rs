//! `critical`: solve the critical error rate of a protocol by bisection and
//! report it next to the closed-form value when one exists.

use clap::ValueEnum;
use keydist_core::security::{closed_form_bound, critical_rate, Mode, Protocol};
use keydist_core::states::ProtocolFamily;
use serde::Serialize;

use crate::error::{usage, CliError};
use crate::json::{fmt_sig9, to_json_line};

/// Protocol selector shared by `critical` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    /// Two-basis qubit protocol.
    Bb84,
    /// Three-basis qubit protocol.
    Sixstate,
    /// Two-basis d-dimensional protocol (requires --d).
    #[value(name = "two-bases")]
    TwoBases,
    /// (d+1)-basis d-dimensional protocol (requires --d).
    #[value(name = "d-plus-1-bases")]
    DPlusOneBases,
}

/// Reconciliation mode selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Two-way distillation with unbounded block size.
    #[value(name = "two-way")]
    TwoWay,
    /// One-way reconciliation at block size 1.
    #[value(name = "one-way-N1", alias = "one-way-n1")]
    OneWayN1,
}

/// Resolves the CLI selectors into a core protocol, validating `--d`.
pub fn resolve_protocol(arg: ProtocolArg, d: Option<usize>) -> Result<Protocol, CliError> {
    match arg {
        ProtocolArg::Bb84 | ProtocolArg::Sixstate => {
            if d.is_some() {
                return Err(usage(
                    "--d applies only to two-bases and d-plus-1-bases protocols",
                ));
            }
            Ok(match arg {
                ProtocolArg::Bb84 => Protocol::Bb84,
                _ => Protocol::SixState,
            })
        }
        ProtocolArg::TwoBases | ProtocolArg::DPlusOneBases => {
            let d = d.ok_or_else(|| usage("this protocol requires --d"))?;
            if d < 2 {
                return Err(usage(format!("--d must be at least 2, found {d}")));
            }
            Ok(match arg {
                ProtocolArg::TwoBases => Protocol::TwoBases { d },
                _ => Protocol::DPlusOneBases { d },
            })
        }
    }
}

/// Canonical protocol name for output echoes.
pub fn protocol_name(arg: ProtocolArg) -> &'static str {
    match arg {
        ProtocolArg::Bb84 => "bb84",
        ProtocolArg::Sixstate => "sixstate",
        ProtocolArg::TwoBases => "two-bases",
        ProtocolArg::DPlusOneBases => "d-plus-1-bases",
    }
}

/// Effective dimension of a protocol selection.
pub fn protocol_dim(protocol: Protocol) -> usize {
    match protocol {
        Protocol::Bb84 | Protocol::SixState => 2,
        Protocol::TwoBases { d } | Protocol::DPlusOneBases { d } => d,
    }
}

/// The closed-form two-way bound matching a protocol, when defined.
fn closed_form_for(protocol: Protocol, mode: Mode) -> Option<f64> {
    if mode != Mode::TwoWay {
        return None;
    }
    Some(match protocol {
        Protocol::Bb84 => closed_form_bound(ProtocolFamily::TwoBases, 2),
        Protocol::SixState => closed_form_bound(ProtocolFamily::DPlusOneBases, 2),
        Protocol::TwoBases { d } => closed_form_bound(ProtocolFamily::TwoBases, d),
        Protocol::DPlusOneBases { d } => closed_form_bound(ProtocolFamily::DPlusOneBases, d),
    })
}

/// Critical-rate report document.
#[derive(Serialize)]
pub struct CriticalDoc {
    /// Protocol name as selected.
    pub protocol: &'static str,
    /// Alphabet dimension the selection resolves to.
    pub d: usize,
    /// Reconciliation mode.
    pub mode: &'static str,
    /// Bisection root of the security predicate.
    pub critical_rate: f64,
    /// Closed-form value, when one exists for this protocol and mode.
    pub closed_form: Option<f64>,
    /// critical_rate − closed_form, when the closed form exists.
    pub difference: Option<f64>,
}

/// Runs the `critical` command and prints its document.
pub fn run(
    protocol_arg: ProtocolArg,
    d: Option<usize>,
    mode_arg: ModeArg,
    pretty: bool,
) -> Result<(), CliError> {
    let protocol = resolve_protocol(protocol_arg, d)?;
    let (mode, mode_name) = match mode_arg {
        ModeArg::TwoWay => (Mode::TwoWay, "two-way"),
        ModeArg::OneWayN1 => (Mode::OneWayN1, "one-way-N1"),
    };
    let critical = critical_rate(protocol, mode).map_err(|e| usage(e.to_string()))?;
    let closed_form = closed_form_for(protocol, mode);
    let doc = CriticalDoc {
        protocol: protocol_name(protocol_arg),
        d: protocol_dim(protocol),
        mode: mode_name,
        critical_rate: critical,
        closed_form,
        difference: closed_form.map(|c| critical - c),
    };
    if pretty {
        println!(
            "protocol: {} (d={}), mode {}",
            doc.protocol, doc.d, doc.mode
        );
        println!("critical error rate: {}", fmt_sig9(doc.critical_rate));
        match (doc.closed_form, doc.difference) {
            (Some(c), Some(diff)) => {
                println!("closed form:         {}", fmt_sig9(c));
                println!("difference:          {}", fmt_sig9(diff));
            }
            _ => println!("closed form:         none for this mode"),
        }
    } else {
        println!("{}", to_json_line(&doc));
    }
    Ok(())
}
