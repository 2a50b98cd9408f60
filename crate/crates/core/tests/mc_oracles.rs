//! Statistical validation of the seeded Monte Carlo simulator against the
//! analytic post-distillation statistics, plus its determinism and
//! partition-invariance contracts.

mod common;

use common::{binomial_z, chi_square_p};
use keydist_core::cad::{
    cad_statistics_d, simulate_cad, simulate_cad_chunk, CadVariant,
};

const PROFILES: [(&str, f64, &[f64]); 3] = [
    ("d2", 0.8, &[0.2]),
    ("d3", 0.75, &[0.15, 0.10]),
    ("d5", 0.6, &[0.1, 0.1, 0.1, 0.1]),
];

/// Acceptance rate and accepted-class counts stay within 3 binomial σ of
/// the analytic values across dimensions, block sizes, and both variants.
#[test]
fn simulation_tracks_analytics_over_grid() {
    const TRIALS: u64 = 200_000;
    for (name, f, dist) in PROFILES {
        for n in [1u32, 2, 3, 5] {
            let stats = cad_statistics_d(f, dist, n).unwrap();
            for (variant, seed) in [(CadVariant::Cad1, 11u64), (CadVariant::Cad2, 12u64)] {
                let report = simulate_cad(f, dist, n, TRIALS, variant, seed).unwrap();
                assert_eq!(report.trials, TRIALS);
                assert_eq!(
                    report.error_counts.iter().sum::<u64>(),
                    report.accepted,
                    "{name} N={n} {variant:?}: class counts must sum to accepted"
                );
                if stats.p_ok >= 1.0 {
                    assert_eq!(report.accepted, TRIALS, "{name} N={n} {variant:?}");
                } else {
                    let z_acc = binomial_z(report.accepted, TRIALS, stats.p_ok);
                    assert!(
                        z_acc.abs() <= 3.0,
                        "{name} N={n} {variant:?}: acceptance z = {z_acc}"
                    );
                }
                // Unconditional probability of an accepted block in class j.
                let class_probs: Vec<f64> = std::iter::once(stats.fidelity_after)
                    .chain(stats.disturbances_after.iter().copied())
                    .map(|w| w * stats.p_ok)
                    .collect();
                for (j, (&count, &p)) in report
                    .error_counts
                    .iter()
                    .zip(&class_probs)
                    .enumerate()
                {
                    if TRIALS as f64 * p < 25.0 || p >= 1.0 {
                        continue; // too rare (or degenerate) for a Gaussian bound
                    }
                    let z = binomial_z(count, TRIALS, p);
                    assert!(
                        z.abs() <= 3.0,
                        "{name} N={n} {variant:?} class {j}: z = {z}"
                    );
                }
            }
        }
    }
}

/// The two distillation variants produce statistically indistinguishable
/// outcome tables (classes plus rejection) at matched inputs.
#[test]
fn cad_variants_statistically_equivalent() {
    const TRIALS: u64 = 300_000;
    for (name, f, dist) in PROFILES {
        for n in [2u32, 3] {
            let r1 = simulate_cad(f, dist, n, TRIALS, CadVariant::Cad1, 21).unwrap();
            let r2 = simulate_cad(f, dist, n, TRIALS, CadVariant::Cad2, 22).unwrap();
            let row = |r: &keydist_core::cad::SimReport| {
                let mut v = r.error_counts.clone();
                v.push(r.trials - r.accepted);
                v
            };
            let p = chi_square_p(&[row(&r1), row(&r2)]);
            assert!(
                p > 0.001,
                "{name} N={n}: variants distinguishable, p = {p}"
            );
        }
    }
}

/// Identical inputs (including the seed) reproduce the identical report;
/// a different seed moves at least one count.
#[test]
fn simulation_is_deterministic_in_the_seed() {
    let a = simulate_cad(0.8, &[0.2], 3, 50_000, CadVariant::Cad2, 777).unwrap();
    let b = simulate_cad(0.8, &[0.2], 3, 50_000, CadVariant::Cad2, 777).unwrap();
    assert_eq!(a, b);
    let c = simulate_cad(0.8, &[0.2], 3, 50_000, CadVariant::Cad2, 778).unwrap();
    assert_ne!(a.error_counts, c.error_counts);
}

/// Splitting the trial range into uneven chunks and summing the counts
/// reproduces the monolithic run exactly, for both variants.
#[test]
fn chunked_partition_equals_monolithic() {
    const TRIALS: u64 = 10_000;
    let cuts = [0u64, 1, 3_333, 7_777, 9_999, TRIALS];
    for variant in [CadVariant::Cad1, CadVariant::Cad2] {
        let whole = simulate_cad(0.75, &[0.15, 0.10], 4, TRIALS, variant, 99).unwrap();
        let mut summed = vec![0u64; 3];
        for pair in cuts.windows(2) {
            let part =
                simulate_cad_chunk(0.75, &[0.15, 0.10], 4, variant, 99, pair[0], pair[1] - pair[0])
                    .unwrap();
            for (acc, v) in summed.iter_mut().zip(&part) {
                *acc += v;
            }
        }
        assert_eq!(summed, whole.error_counts, "{variant:?}");
    }
}
