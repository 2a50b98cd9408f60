//! Small numeric toolbox shared by the analysis modules: `no_std`-safe float
//! shims, entropy helpers, log-space binomials, and deterministic root/extremum
//! searches on one-dimensional functions.

/// Natural logarithm.
#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ln()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log(x)
    }
}

/// Base-2 logarithm.
#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.log2()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log2(x)
    }
}

/// `ln(1 + x)`, accurate near zero.
#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ln_1p()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log1p(x)
    }
}

/// Exponential.
#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.exp()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::exp(x)
    }
}

/// Square root.
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}

/// Cosine.
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.cos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::cos(x)
    }
}

/// Sine.
#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sin()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sin(x)
    }
}

/// Absolute value (available in `core`, wrapped for symmetry).
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    f64::abs(x)
}

/// Entropy terms below this threshold are dropped (`0·log 0 = 0` convention,
/// extended to strictly positive but negligible weights).
pub(crate) const ENTROPY_FLOOR: f64 = 1e-15;

/// `−w · log₂ w` with the `0·log 0 = 0` convention; weights below
/// [`ENTROPY_FLOOR`] contribute nothing.
#[inline]
pub(crate) fn neg_xlog2x(w: f64) -> f64 {
    if w < ENTROPY_FLOOR {
        0.0
    } else {
        -w * log2(w)
    }
}

/// Shannon entropy in bits of a weight vector (need not be normalized; callers
/// guarantee nonnegativity).
pub(crate) fn entropy_bits(weights: &[f64]) -> f64 {
    let mut s = 0.0;
    for &w in weights {
        s += neg_xlog2x(w);
    }
    s
}

/// Binary entropy `h(p) = −p·log₂ p − (1−p)·log₂(1−p)` in bits, with the
/// 0·log 0 = 0 convention. Callers guarantee `p ∈ [0, 1]`.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    neg_xlog2x(p) + neg_xlog2x(1.0 - p)
}

/// `ln(base^e)` with the conventions `anything^0 = 1` and `0^e = 0` (so the
/// log is −∞) — safe against the 0·∞ = NaN trap of `e·ln(base)`.
#[inline]
pub(crate) fn ln_pow(base: f64, e: u32) -> f64 {
    if e == 0 {
        0.0
    } else if base <= 0.0 {
        f64::NEG_INFINITY
    } else {
        e as f64 * ln(base)
    }
}

/// `C(n, r)` as f64: exact integer arithmetic (u128 ladder) for n ≤ 120,
/// log-space beyond (relative error ≲ 1e-13 there).
pub(crate) fn binomial_f64(n: u32, r: u32) -> f64 {
    debug_assert!(r <= n);
    if n <= 120 {
        let r = r.min(n - r);
        let mut c: u128 = 1;
        for k in 1..=u128::from(r) {
            c = c * (u128::from(n - r) + k) / k;
        }
        c as f64
    } else {
        exp(ln_binomial(n, r))
    }
}

/// `x^n` for nonnegative real base via exponentiation by squaring; `0^0 = 1`.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut e = n;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `ln C(n, r)` by direct summation of `ln((n−r+k)/k)`; exact enough
/// (relative error ≲ 1e-14) for every block size used here and overflow-free.
pub(crate) fn ln_binomial(n: u32, r: u32) -> f64 {
    debug_assert!(r <= n);
    let r = r.min(n - r);
    let mut s = 0.0;
    for k in 1..=r {
        s += ln((n - r + k) as f64) - ln(k as f64);
    }
    s
}

/// SplitMix64 output function; used to derive per-trial seeds from a master
/// seed so that simulation trials are independent of scheduling order.
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Bisection on `f` over `[lo, hi]`, assuming `f(lo)` and `f(hi)` have opposite
/// signs. Runs a fixed 80 halvings (interval below 1e-10 for any unit-scale
/// bracket) and returns the midpoint. The positive-side endpoint keeps its sign
/// role even if `f` evaluates to exactly zero inside the interval.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    let sign_lo = f(lo) > 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`. Deterministic
/// fixed iteration count; on plateaus the search drifts left, so ties resolve
/// toward the smaller argument.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut a = a;
    let mut b = b;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..90 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_std() {
        for &(x, n) in &[(0.3_f64, 7_u32), (1.7, 13), (0.0, 0), (0.0, 3), (1.0, 64)] {
            assert!((powi(x, n) - x.powi(n as i32)).abs() < 1e-12 * x.powi(n as i32).max(1.0));
        }
    }

    #[test]
    fn ln_binomial_small_cases() {
        assert!((ln_binomial(4, 2) - 6.0_f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(10, 0)).abs() < 1e-12);
        assert!((ln_binomial(64, 32) - 1.832624140942459e18_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn binomial_exact_small_and_smooth_large() {
        assert_eq!(binomial_f64(4, 2), 6.0);
        assert_eq!(binomial_f64(10, 0), 1.0);
        assert_eq!(binomial_f64(30, 15), 155_117_520.0);
        // Pascal's rule at the top of the exact range.
        assert_eq!(
            binomial_f64(120, 60),
            binomial_f64(119, 59) + binomial_f64(119, 60)
        );
        let big = binomial_f64(200, 100);
        assert!((big.ln() - ln_binomial(200, 100)).abs() < 1e-10 * big.ln());
    }

    #[test]
    fn ln_pow_conventions() {
        assert_eq!(ln_pow(0.0, 0), 0.0);
        assert_eq!(ln_pow(0.0, 3), f64::NEG_INFINITY);
        assert!((ln_pow(0.5, 4) - 4.0 * 0.5_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn binary_entropy_symmetry() {
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(h2(1.0), 0.0);
        assert!((h2(0.5) - 1.0).abs() < 1e-15);
        assert!((h2(0.2) - h2(0.8)).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((root - core::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn golden_min_quadratic() {
        let (x, fx) = golden_min(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx < 1e-15);
    }

    #[test]
    fn golden_min_plateau_prefers_left() {
        let (x, _) = golden_min(|_| 1.0, 0.0, 1.0);
        assert!(x < 1e-6);
    }

    #[test]
    fn entropy_of_uniform_pair_is_one_bit() {
        assert!((entropy_bits(&[0.5, 0.5]) - 1.0).abs() < 1e-12);
        assert_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
    }
}
