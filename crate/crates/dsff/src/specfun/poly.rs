//! Generalized Laguerre and Hermite polynomials in scaled arithmetic.

use super::scaled::{frexp, pow2, ScaledReal};
use crate::error::{domain, Result};

/// Pairs are rescaled once a recurrence value exceeds this magnitude, or less when the
/// recurrence coefficients are large enough that the next step could overflow.
const RESCALE_AT: f64 = 2.582_249_878_086_908_6e120; // 2^400
const HEADROOM: f64 = 1.071_508_607_186_267_3e301; // 2^1000

/// Runs `(k+1) L_{k+1} = (2k+1+nu-x) L_k - (k+nu) L_{k-1}` for `k = 0..=n` and hands
/// `(k, l, s)` to `visit`, where `L_k^{(nu)}(x) = l * 2^s`. The scale `s` never decreases
/// and `|l|` stays below `2^400`, so squares of visited values are finite.
pub(crate) fn laguerre_sweep(n: usize, nu: i64, x: f64, mut visit: impl FnMut(usize, f64, i64)) {
    let a = nu as f64;
    let mut l0 = 1.0;
    let mut scale = 0i64;
    visit(0, l0, scale);
    if n == 0 {
        return;
    }
    let limit = (HEADROOM / (1.0 + x + 2.0 * n as f64 + a.abs())).clamp(1.0, RESCALE_AT);
    let renorm = |l0: &mut f64, l1: &mut f64, scale: &mut i64| {
        if l1.abs() > limit {
            let shift = frexp(*l1).1;
            let f = pow2(-shift);
            *l0 *= f;
            *l1 *= f;
            *scale += shift;
        }
    };
    let mut l1 = 1.0 + a - x;
    renorm(&mut l0, &mut l1, &mut scale);
    visit(1, l1, scale);
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + a - x) * l1 - (kf + a) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
        renorm(&mut l0, &mut l1, &mut scale);
        visit(k + 1, l1, scale);
    }
}

/// `L_n^{(nu)}(x)` by forward recurrence for `nu >= -1`.
pub(crate) fn laguerre_direct(n: usize, nu: i64, x: f64) -> ScaledReal {
    let mut out = ScaledReal::ONE;
    laguerre_sweep(n, nu, x, |k, l, s| {
        if k == n {
            out = ScaledReal::new(l, s);
        }
    });
    out
}

/// Whether `L_n^{(nu)}` is defined by this kernel.
pub fn laguerre_supported(n: usize, nu: i64) -> bool {
    nu >= -1 || n as i64 + nu >= 0
}

/// Generalized Laguerre polynomial `L_n^{(nu)}(x)` for `x >= 0`.
///
/// Negative `nu` with `n + nu >= 0` goes through
/// `L_n^{(-m)}(x) = (-x)^m (n-m)!/n! L_{n-m}^{(m)}(x)`; `nu = -1` is also allowed at
/// `n = 0`, where the polynomial is the constant 1. Other negative superscripts are rejected.
pub fn laguerre(n: usize, nu: i64, x: f64) -> Result<ScaledReal> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("laguerre: argument {x} must be finite and non-negative"));
    }
    if nu >= 0 || (nu == -1 && n == 0) {
        return Ok(laguerre_direct(n, nu, x));
    }
    let m = (-nu) as usize;
    if n < m {
        return domain(format!("laguerre: superscript {nu} with degree {n} is outside the symmetry identity"));
    }
    let mut factor = ScaledReal::ONE;
    for i in (n - m + 1)..=n {
        factor = factor * (-x / i as f64);
    }
    Ok(factor * laguerre_direct(n - m, m as i64, x))
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> Result<ScaledReal> {
    if !x.is_finite() {
        return domain(format!("hermite: non-finite argument {x}"));
    }
    let mut h0 = 1.0;
    if n == 0 {
        return Ok(ScaledReal::ONE);
    }
    let mut h1 = 2.0 * x;
    let mut scale = 0i64;
    let limit = (HEADROOM / (1.0 + 2.0 * x.abs() + 2.0 * n as f64)).clamp(1.0, RESCALE_AT);
    for k in 1..n {
        if h1.abs() > limit {
            let shift = frexp(h1).1;
            let f = pow2(-shift);
            h0 *= f;
            h1 *= f;
            scale += shift;
        }
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    Ok(ScaledReal::new(h1, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn small_cases() {
        assert_eq!(laguerre(2, 1, 2.0).unwrap().to_f64(), -1.0);
        assert_eq!(laguerre(0, -1, 3.0).unwrap().to_f64(), 1.0);
        assert!((laguerre(2, -1, 3.0).unwrap().to_f64() - 1.5).abs() < 1e-15);
        assert_eq!(hermite(0, 0.3).unwrap().to_f64(), 1.0);
        assert_eq!(hermite(2, 1.0).unwrap().to_f64(), 2.0);
    }

    #[test]
    fn origin_is_binomial() {
        let mut binom = 1.0f64;
        for n in 0..30usize {
            if n > 0 {
                binom = binom * (n + 3) as f64 / n as f64;
            }
            assert!(rel(laguerre(n, 3, 0.0).unwrap().to_f64(), binom) < 1e-13);
        }
    }

    #[test]
    fn rejected_inputs() {
        assert!(laguerre(3, 1, -0.1).is_err());
        assert!(laguerre(2, -3, 1.0).is_err());
        assert!(laguerre(0, -2, 1.0).is_err());
        assert!(hermite(3, f64::INFINITY).is_err());
    }

    #[test]
    fn direct_and_symmetry_routes_agree() {
        for n in 1..40usize {
            for &x in &[0.3, 2.0, 17.0] {
                let a = laguerre(n, -1, x).unwrap().to_f64();
                let b = laguerre_direct(n, -1, x).to_f64();
                assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn huge_degree_stays_finite() {
        let n = 16384usize;
        let x = 8.0 * n as f64;
        let l = laguerre(n - 1, 1, x).unwrap();
        assert!(l.log2_abs().is_finite());
        assert!(l.log2_abs() > 1023.0);
        let damped = (l * l * ScaledReal::exp_neg(x)).to_f64();
        assert!(damped.is_finite());
    }

    #[test]
    fn huge_arguments_stay_finite() {
        for &x in &[1e100, 1e200, 1e300] {
            // leading term dominates: L_n^(nu)(x) ~ (-x)^n / n!
            let l = laguerre(5, 1, x).unwrap();
            let lead = 5.0 * x.log2() - (120f64).log2();
            assert!((l.log2_abs() - lead).abs() < 1e-9, "x={x}");
            assert!(l.signum() < 0.0);
            let h = hermite(6, x).unwrap();
            assert!((h.log2_abs() - (6.0 * (2.0 * x).log2())).abs() < 1e-9, "x={x}");
        }
    }
}
