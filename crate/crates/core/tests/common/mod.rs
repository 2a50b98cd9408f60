//! Shared machinery for the integration suites: independent dense-matrix
//! oracles built from first principles (explicit purification coordinates,
//! Gram-matrix diagonalization via nalgebra), a tiny deterministic sampler,
//! and classical statistics helpers.
//!
//! Nothing here calls back into the library's analytic spectrum or rate
//! formulas; the point is to re-derive the same quantities along a
//! different computational route.
#![allow(dead_code)]

use keydist_core::eve::Complex64;
use keydist_core::states::{make_bell_diagonal, BellDiagonalState};
use nalgebra::DMatrix;
use statrs::distribution::{ChiSquared, ContinuousCDF};

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// SplitMix64 step: the standard 64-bit finalizer over a Weyl sequence.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A tiny deterministic uniform generator for test-case construction.
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng {
            state: splitmix64(seed ^ 0xD1B5_4A32_D192_ED03),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        splitmix64(self.state)
    }

    /// Uniform f64 in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform f64 in (0, 1]: never exactly zero (safe as a log argument).
    pub fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// A point uniform on the probability simplex of the given dimension,
    /// via normalized exponential draws.
    pub fn simplex(&mut self, dim: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..dim).map(|_| -self.uniform_open().ln()).collect();
        let sum: f64 = v.iter().sum();
        for x in &mut v {
            *x /= sum;
        }
        v
    }
}

/// A Bell-diagonal state drawn uniformly from the coefficient simplex.
pub fn random_uniform_state(seed: u64) -> BellDiagonalState {
    let mut rng = TestRng::new(seed);
    let v = rng.simplex(4);
    make_bell_diagonal([v[0], v[1], v[2], v[3]]).unwrap()
}

/// A Bell-diagonal state from a sampler biased toward a dominant first
/// coefficient (odd seeds), mixed with uniform simplex draws (even seeds).
/// The bias keeps clearly-secure states well represented: uniform draws
/// land on the insecure side most of the time.
pub fn random_spread_state(seed: u64) -> BellDiagonalState {
    if seed.is_multiple_of(2) {
        return random_uniform_state(seed);
    }
    let mut rng = TestRng::new(seed);
    let l1 = 0.65 + 0.34 * rng.uniform();
    let mut rest = [rng.uniform(), rng.uniform(), rng.uniform()];
    let sum: f64 = rest.iter().sum();
    for x in &mut rest {
        *x *= (1.0 - l1) / sum;
    }
    make_bell_diagonal([l1, rest[0], rest[1], rest[2]]).unwrap()
}

// ---------------------------------------------------------------------------
// Entropy helpers (local; bits; 0·log 0 = 0)
// ---------------------------------------------------------------------------

pub fn neg_xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

pub fn h2(p: f64) -> f64 {
    neg_xlog2x(p) + neg_xlog2x(1.0 - p)
}

pub fn entropy_bits(eigs: &[f64]) -> f64 {
    eigs.iter().map(|&v| neg_xlog2x(v.max(0.0))).sum()
}

// ---------------------------------------------------------------------------
// Purification coordinates and dense Gram-matrix spectra
// ---------------------------------------------------------------------------

/// Explicit single-copy purification coordinates of the adversary's state
/// for each honest outcome pair, indexed `[2a + b]` for Alice bit `a` and
/// Bob bit `b`, as **normalized** vectors in R⁴.
///
/// From the purification `Σᵢ √λᵢ |Bᵢ⟩|fᵢ⟩` of a Bell-diagonal state with
/// orthonormal `fᵢ`, projecting the honest qubits onto computational pair
/// `(a, b)` leaves the adversary with
///
///   (a=b):  (√λ₁ |f₁⟩ ± √λ₂ |f₂⟩) / √(λ₁+λ₂)
///   (a≠b):  (√λ₃ |f₃⟩ ± √λ₄ |f₄⟩) / √(λ₃+λ₄)
///
/// with the − sign at a = 1. Pairs with zero total weight get a zero
/// vector (they never occur).
pub fn purification_slots(lambdas: [f64; 4]) -> [[f64; 4]; 4] {
    let [l1, l2, l3, l4] = lambdas;
    let s = [l1.sqrt(), l2.sqrt(), l3.sqrt(), l4.sqrt()];
    let w_eq = (l1 + l2).sqrt();
    let w_dif = (l3 + l4).sqrt();
    let norm = |v: [f64; 4], w: f64| {
        if w > 0.0 {
            [v[0] / w, v[1] / w, v[2] / w, v[3] / w]
        } else {
            [0.0; 4]
        }
    };
    [
        norm([s[0], s[1], 0.0, 0.0], w_eq),   // a=0, b=0
        norm([0.0, 0.0, s[2], s[3]], w_dif),  // a=0, b=1
        norm([0.0, 0.0, s[2], -s[3]], w_dif), // a=1, b=0
        norm([s[0], -s[1], 0.0, 0.0], w_eq),  // a=1, b=1
    ]
}

/// One mixture component: a weight and the slot-by-slot single-copy
/// vectors of a product state (one R⁴ vector per copy).
pub struct WeightedProduct {
    pub weight: f64,
    pub slots: Vec<[f64; 4]>,
}

/// Inner product of two product states, computed slot by slot.
pub fn product_overlap(a: &[[f64; 4]], b: &[[f64; 4]]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .product()
}

/// Spectrum (descending) of `Σᵢ wᵢ |ψᵢ⟩⟨ψᵢ|` computed densely: the nonzero
/// eigenvalues equal those of the weighted Gram matrix
/// `M[i][j] = √(wᵢwⱼ)·⟨ψᵢ|ψⱼ⟩`, which nalgebra diagonalizes directly.
/// Zero-weight components are kept as explicit zero rows so the returned
/// length always equals the component count.
pub fn mixture_spectrum(components: &[WeightedProduct]) -> Vec<f64> {
    let k = components.len();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let wi = components[i].weight.max(0.0);
            let wj = components[j].weight.max(0.0);
            m[(i, j)] =
                (wi * wj).sqrt() * product_overlap(&components[i].slots, &components[j].slots);
        }
    }
    let mut eigs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

/// Spectrum (descending) of the uniform mixture `(1/d)·Σ|e_k⟩⟨e_k|` of unit
/// vectors with prescribed pairwise inner products `gram[k][k']`, via dense
/// Hermitian diagonalization of the scaled Gram matrix.
pub fn gram_mixture_spectrum(gram: &[Vec<Complex64>]) -> Vec<f64> {
    let d = gram.len();
    let m = DMatrix::<nalgebra::Complex<f64>>::from_fn(d, d, |i, j| {
        nalgebra::Complex::new(gram[i][j].re / d as f64, gram[i][j].im / d as f64)
    });
    let mut eigs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

// ---------------------------------------------------------------------------
// Dense two-qubit density matrix and the partial-transpose test
// ---------------------------------------------------------------------------

/// The 4×4 two-qubit density matrix of a Bell-diagonal state in the
/// computational basis {|00⟩,|01⟩,|10⟩,|11⟩}, built from explicit Bell
/// projectors: Φ± = (|00⟩±|11⟩)/√2 carry λ₁, λ₂ and Ψ± = (|01⟩±|10⟩)/√2
/// carry λ₃, λ₄ (the error classes).
pub fn bell_density_matrix(lambdas: [f64; 4]) -> DMatrix<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let basis: [[f64; 4]; 4] = [
        [r, 0.0, 0.0, r],   // Φ⁺
        [r, 0.0, 0.0, -r],  // Φ⁻
        [0.0, r, r, 0.0],   // Ψ⁺
        [0.0, r, -r, 0.0],  // Ψ⁻
    ];
    let mut rho = DMatrix::<f64>::zeros(4, 4);
    for (l, vec) in lambdas.iter().zip(basis.iter()) {
        for i in 0..4 {
            for j in 0..4 {
                rho[(i, j)] += l * vec[i] * vec[j];
            }
        }
    }
    rho
}

/// Partial transpose over the second qubit: index (i₁i₂, j₁j₂) ↦ (i₁j₂, j₁i₂).
pub fn partial_transpose_b(rho: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::zeros(4, 4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    out[(2 * i1 + j2, 2 * j1 + i2)] = rho[(2 * i1 + i2, 2 * j1 + j2)];
                }
            }
        }
    }
    out
}

/// Smallest eigenvalue of the partial transpose: strictly negative iff the
/// state is entangled (the partial-transpose criterion is exact for two
/// qubits).
pub fn min_partial_transpose_eigenvalue(lambdas: [f64; 4]) -> f64 {
    let pt = partial_transpose_b(&bell_density_matrix(lambdas));
    pt.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

// ---------------------------------------------------------------------------
// Classical statistics
// ---------------------------------------------------------------------------

/// Pearson chi-square p-value for homogeneity of an r×c count table
/// (rows = samples, columns = categories). Columns whose total is zero are
/// dropped; degrees of freedom are (r−1)(c'−1) over the kept columns.
pub fn chi_square_p(table: &[Vec<u64>]) -> f64 {
    let rows = table.len();
    let cols = table[0].len();
    let mut col_tot = vec![0u64; cols];
    let mut row_tot = vec![0u64; rows];
    for (r, row) in table.iter().enumerate() {
        assert_eq!(row.len(), cols);
        for (c, &v) in row.iter().enumerate() {
            col_tot[c] += v;
            row_tot[r] += v;
        }
    }
    let grand: u64 = row_tot.iter().sum();
    assert!(grand > 0, "empty table");
    let kept: Vec<usize> = (0..cols).filter(|&c| col_tot[c] > 0).collect();
    let mut stat = 0.0;
    for r in 0..rows {
        for &c in &kept {
            let expected = row_tot[r] as f64 * col_tot[c] as f64 / grand as f64;
            let diff = table[r][c] as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    let dof = (rows - 1) * (kept.len() - 1);
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// z-score of an observed count against Binomial(n, p).
pub fn binomial_z(count: u64, n: u64, p: f64) -> f64 {
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - n as f64 * p) / sigma
}

// ---------------------------------------------------------------------------
// Dense oracle for the noisy pre-processing spectrum
// ---------------------------------------------------------------------------

/// Enumerates all 2^{N+1} weighted product states of the two-branch
/// pre-processing mixture explicitly, diagonalizes the dense Gram matrix,
/// and demands agreement with the closed-form level list expanded by
/// multiplicity. Panics on any mismatch beyond `tol`.
pub fn preproc_dense_check(lambdas: [f64; 4], q: f64, n: u32, tol: f64) {
    use keydist_core::eve::qubit_ensemble;
    use keydist_core::keyrate::{preproc_params, preproc_spectrum};

    let s = make_bell_diagonal(lambdas).unwrap();
    let ens = qubit_ensemble(&s);
    let pp = preproc_params(&ens, q).unwrap();

    // Direct arithmetic check of the branch weights.
    let eps = ens.eps();
    let denom = q * eps + (1.0 - q) * (1.0 - eps);
    assert!((pp.u - (1.0 - q) * (1.0 - eps) / denom).abs() < 1e-12);
    assert!((pp.u + pp.v - 1.0).abs() < 1e-12);
    assert!((pp.omega - ((1.0 - q) * eps + q * (1.0 - eps))).abs() < 1e-12);

    let slots = purification_slots(lambdas);
    // Branch vectors per Alice bit a: agreeing slot (weight u) and
    // disagreeing slot (weight v).
    let agree = [slots[0], slots[3]];
    let disagree = [slots[1], slots[2]];

    let mut components = Vec::with_capacity(2usize << n);
    for a in 0..2usize {
        for pattern in 0..(1u32 << n) {
            let mut weight = 0.5;
            let mut prod_slots = Vec::with_capacity(n as usize);
            for pos in 0..n {
                if pattern >> pos & 1 == 1 {
                    weight *= pp.u;
                    prod_slots.push(agree[a]);
                } else {
                    weight *= pp.v;
                    prod_slots.push(disagree[a]);
                }
            }
            components.push(WeightedProduct {
                weight,
                slots: prod_slots,
            });
        }
    }
    let dense = mixture_spectrum(&components);

    let report = preproc_spectrum(&pp, &ens, n);
    assert_eq!(report.eigenvalues.len(), 2 * (n as usize + 1));
    let mut expanded = Vec::with_capacity(2usize << n);
    for (value, mult) in report.eigenvalues.iter().zip(&report.multiplicities) {
        let m = *mult as usize;
        assert!((*mult - m as f64).abs() < 1e-9, "non-integer multiplicity");
        expanded.extend(std::iter::repeat_n(*value, m));
    }
    assert_eq!(expanded.len(), 2usize << n, "total multiplicity");
    expanded.sort_by(|a, b| b.partial_cmp(a).unwrap());

    assert_eq!(dense.len(), expanded.len());
    for (a, b) in expanded.iter().zip(&dense) {
        assert!(
            (a - b).abs() < tol,
            "lambdas {lambdas:?} q={q} N={n}: {a} vs {b}"
        );
    }
}
