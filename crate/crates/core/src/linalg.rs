//! Minimal dense linear algebra for the handful of tiny (≤ 8×8) symmetric
//! matrices built internally: a cyclic Jacobi eigenvalue solver. Independent
//! verification against a full-featured solver lives in the test suite.

use alloc::vec::Vec;

use crate::math;

/// Eigenvalues of a real symmetric n×n matrix (row-major), by cyclic Jacobi
/// rotations. Intended for the small Gram matrices this crate builds; cost
/// is O(n³) per sweep with at most 64 sweeps (convergence for these sizes is
/// typically reached in fewer than 10).
pub(crate) fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    let idx = |r: usize, c: usize| r * n + c;

    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[idx(p, q)] * a[idx(p, q)];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if math::abs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    let arp = a[idx(r, p)];
                    let arq = a[idx(r, q)];
                    a[idx(r, p)] = c * arp - s * arq;
                    a[idx(r, q)] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[idx(p, r)];
                    let aqr = a[idx(q, r)];
                    a[idx(p, r)] = c * apr - s * aqr;
                    a[idx(q, r)] = s * apr + c * aqr;
                }
            }
        }
    }
    (0..n).map(|i| a[idx(i, i)]).collect()
}
