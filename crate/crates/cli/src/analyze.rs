//! `analyze`: full report on one channel file — entanglement, error rates,
//! security verdict with its margin, the smallest distilling block size,
//! a key-rate table, and a summary of the discrimination attack on one-way
//! reconciliation.

use std::path::Path;

use keydist_core::eve::{qubit_ensemble, qudit_ensemble, EveEnsembleD, EveEnsembleQubit};
use keydist_core::keyrate::{
    holevo_post_cad_d, minimal_block_size, rate_post_cad_qubit, KeyRateReport, RateMethod,
};
use keydist_core::security::{attack_oneway_check, qubit_security, qudit_security, AttackVerdict};
use keydist_core::states::{canonicalize, fidelity_disturbances, is_entangled, qber};
use serde::Serialize;

use crate::channel::{self, ChannelFile, LoadedChannel};
use crate::error::{internal, usage, CliError};
use crate::json::{fmt_sig9, to_json_line};

/// Security verdict section.
#[derive(Serialize)]
pub struct SecurityDoc {
    /// Whether the two-way distillability condition holds strictly.
    pub secure: bool,
    /// Signed margin of the defining inequality (positive = secure).
    pub margin: f64,
}

/// One key-rate table row.
#[derive(Serialize)]
pub struct RateRow {
    /// Block size.
    pub n: u32,
    /// Alice–Bob mutual information per accepted block, bits.
    pub i_ab: f64,
    /// Eve's Holevo information per accepted block, bits.
    pub i_ae: f64,
    /// Achievable key rate per accepted block, bits.
    pub rate: f64,
    /// Evaluation method ("exact" or "asymptotic").
    pub method: &'static str,
}

/// The best (largest one-way rate) row of the attack scan.
#[derive(Serialize)]
pub struct AttackBest {
    /// Block size achieving the best one-way rate.
    pub n: u32,
    /// Bob's post-distillation error rate there.
    pub eps_b: f64,
    /// Eve's discrimination error rate there.
    pub eps_eq: f64,
    /// One-way rate h(eps_eq) − h(eps_b), bits.
    pub oneway_rate: f64,
}

/// Summary of the attack scan over block sizes 1..=n_max.
#[derive(Serialize)]
pub struct AttackDoc {
    /// "broken" when Eve's error never exceeds Bob's; otherwise "undecided".
    pub verdict: &'static str,
    /// Number of block sizes examined.
    pub n_examined: u32,
    /// The row with the largest one-way rate.
    pub best: AttackBest,
}

/// Canonical-form section (emitted when `--canonicalize` is given for a
/// qubit channel).
#[derive(Serialize)]
pub struct CanonicalDoc {
    /// Coefficients after the relabeling.
    pub lambdas: [f64; 4],
    /// Destination map: input position i moved to `permutation[i]`.
    pub permutation: [usize; 4],
}

/// Complete analysis document.
#[derive(Serialize)]
pub struct AnalyzeDoc {
    /// Echo of the parsed input.
    pub input: ChannelFile,
    /// Canonical form, when requested and applicable.
    pub canonical: Option<CanonicalDoc>,
    /// Entanglement flag (qubit channels only).
    pub entangled: Option<bool>,
    /// Alice–Bob symbol error rate (total disturbance).
    pub qber: f64,
    /// Channel fidelity (probability of the identity flip class).
    pub fidelity: f64,
    /// Per-class disturbances D_j, j = 1..d−1.
    pub disturbances: Vec<f64>,
    /// Security verdict and margin.
    pub security: SecurityDoc,
    /// Cap used for the minimal-block-size search and the attack scan.
    pub n_max: u32,
    /// Smallest block size with a positive key rate, if any within the cap.
    pub minimal_n: Option<u32>,
    /// Key rates at the requested block sizes.
    pub rates: Vec<RateRow>,
    /// Attack scan summary (qubit channels only).
    pub attack: Option<AttackDoc>,
}

fn method_name(m: RateMethod) -> &'static str {
    match m {
        RateMethod::Exact => "exact",
        RateMethod::Asymptotic => "asymptotic",
    }
}

fn rate_row(r: &KeyRateReport) -> RateRow {
    RateRow {
        n: r.n,
        i_ab: r.i_ab,
        i_ae: r.i_ae,
        rate: r.rate,
        method: method_name(r.method),
    }
}

fn validate_block_sizes(n_list: &[u32], n_max: u32) -> Result<(), CliError> {
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    if n_list.is_empty() {
        return Err(usage("--n-list must contain at least one block size"));
    }
    if n_list.contains(&0) {
        return Err(usage("--n-list entries must be at least 1"));
    }
    Ok(())
}

fn analyze_qubit(
    input: ChannelFile,
    state: &keydist_core::states::BellDiagonalState,
    canonicalize_flag: bool,
    n_list: &[u32],
    n_max: u32,
) -> AnalyzeDoc {
    let canonical = canonicalize_flag.then(|| {
        let (c, perm) = canonicalize(state);
        CanonicalDoc {
            lambdas: c.lambdas(),
            permutation: [
                perm.destination(0),
                perm.destination(1),
                perm.destination(2),
                perm.destination(3),
            ],
        }
    });
    let ens: EveEnsembleQubit = qubit_ensemble(state);
    let verdict = qubit_security(&ens);
    let eps = qber(state);
    let rates: Vec<RateRow> = n_list
        .iter()
        .map(|&n| rate_row(&rate_post_cad_qubit(&ens, n)))
        .collect();
    let attack = attack_oneway_check(&ens, 1..=n_max);
    let best = attack
        .records
        .iter()
        .max_by(|a, b| {
            a.oneway_rate
                .partial_cmp(&b.oneway_rate)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("nonempty scan range");
    AnalyzeDoc {
        input,
        canonical,
        entangled: Some(is_entangled(state)),
        qber: eps,
        fidelity: 1.0 - eps,
        disturbances: vec![eps],
        security: SecurityDoc {
            secure: verdict.secure,
            margin: verdict.margin,
        },
        n_max,
        minimal_n: minimal_block_size(&ens, n_max),
        rates,
        attack: Some(AttackDoc {
            verdict: match attack.verdict {
                AttackVerdict::Broken => "broken",
                AttackVerdict::Undecided => "undecided",
            },
            n_examined: n_max,
            best: AttackBest {
                n: best.n,
                eps_b: best.eps_b,
                eps_eq: best.eps_eq,
                oneway_rate: best.oneway_rate,
            },
        }),
    }
}

fn analyze_qudit(
    input: ChannelFile,
    channel: &keydist_core::states::GeneralizedPauliChannel,
    n_list: &[u32],
    n_max: u32,
) -> Result<AnalyzeDoc, CliError> {
    let (fidelity, disturbances) = fidelity_disturbances(channel);
    let ens: EveEnsembleD = qudit_ensemble(channel);
    let verdict = qudit_security(&ens).map_err(internal)?;
    let mut rates = Vec::with_capacity(n_list.len());
    for &n in n_list {
        rates.push(rate_row(&holevo_post_cad_d(&ens, n).map_err(internal)?));
    }
    let mut minimal_n = None;
    for n in 1..=n_max {
        if holevo_post_cad_d(&ens, n).map_err(internal)?.rate > 0.0 {
            minimal_n = Some(n);
            break;
        }
    }
    Ok(AnalyzeDoc {
        input,
        canonical: None,
        entangled: None,
        qber: disturbances.iter().sum(),
        fidelity,
        disturbances,
        security: SecurityDoc {
            secure: verdict.secure,
            margin: verdict.margin,
        },
        n_max,
        minimal_n,
        rates,
        attack: None,
    })
}

/// Runs the `analyze` command and prints its document.
pub fn run(
    channel_file: &Path,
    canonicalize_flag: bool,
    n_list: &[u32],
    n_max: u32,
    pretty: bool,
) -> Result<(), CliError> {
    validate_block_sizes(n_list, n_max)?;
    let (input, loaded) = channel::load(channel_file)?;
    let doc = match &loaded {
        LoadedChannel::Qubit(state) => {
            analyze_qubit(input, state, canonicalize_flag, n_list, n_max)
        }
        LoadedChannel::Qudit(channel) => analyze_qudit(input, channel, n_list, n_max)?,
    };
    if pretty {
        print!("{}", render_pretty(&doc));
    } else {
        println!("{}", to_json_line(&doc));
    }
    Ok(())
}

/// Human-oriented text rendering (same numbers, same determinism).
fn render_pretty(doc: &AnalyzeDoc) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    match &doc.input {
        ChannelFile::Qubit { lambdas } => {
            let parts: Vec<String> = lambdas.iter().map(|&l| fmt_sig9(l)).collect();
            let _ = writeln!(out, "channel: qubit [{}]", parts.join(", "));
        }
        ChannelFile::Qudit { d, .. } => {
            let _ = writeln!(out, "channel: qudit d={d}");
        }
    }
    if let Some(c) = &doc.canonical {
        let parts: Vec<String> = c.lambdas.iter().map(|&l| fmt_sig9(l)).collect();
        let _ = writeln!(
            out,
            "canonical: [{}] via permutation {:?}",
            parts.join(", "),
            c.permutation
        );
    }
    if let Some(e) = doc.entangled {
        let _ = writeln!(out, "entangled: {e}");
    }
    let _ = writeln!(out, "qber: {}", fmt_sig9(doc.qber));
    let _ = writeln!(out, "fidelity: {}", fmt_sig9(doc.fidelity));
    let _ = writeln!(
        out,
        "security: {} (margin {})",
        if doc.security.secure {
            "secure"
        } else {
            "not secure"
        },
        fmt_sig9(doc.security.margin)
    );
    match doc.minimal_n {
        Some(n) => {
            let _ = writeln!(out, "minimal block size: {n} (cap {})", doc.n_max);
        }
        None => {
            let _ = writeln!(
                out,
                "minimal block size: none within cap {}",
                doc.n_max
            );
        }
    }
    let _ = writeln!(out, "rates:");
    for r in &doc.rates {
        let _ = writeln!(
            out,
            "  N={:<4} i_ab={} i_ae={} rate={} ({})",
            r.n,
            fmt_sig9(r.i_ab),
            fmt_sig9(r.i_ae),
            fmt_sig9(r.rate),
            r.method
        );
    }
    if let Some(a) = &doc.attack {
        let _ = writeln!(
            out,
            "one-way attack scan: {} over N <= {} (best one-way rate {} at N={})",
            a.verdict,
            a.n_examined,
            fmt_sig9(a.best.oneway_rate),
            a.best.n
        );
    }
    out
}
