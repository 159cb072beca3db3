//! Exact finite-N formulas: `f_N`, `rho_N`, `Psi_N`, `F_jk` and the DSFF itself.
//!
//! All scalar evaluators take the already scaled argument `x = |eta T|^2 / N`;
//! [`dsff_exact`] owns the scaling.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, DsffError, Result};
use crate::quad::integrate;
use crate::specfun::{laguerre, laguerre_sweep, ScaledReal, SquareSum};

/// Largest `N` accepted by the O(N^2) double-sum representation of `Psi_N`.
pub const DOUBLE_SUM_MAX_N: usize = 256;
/// Agreement demanded between the sum and Christoffel–Darboux forms of `rho_N`.
pub const RHO_CD_TOL: f64 = 1e-9;
/// Agreement demanded between `Psi_N` representations.
pub const PSI_METHOD_TOL: f64 = 1e-7;

/// Matrix size and non-Hermiticity of the elliptic Ginibre ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleParams {
    pub n: usize,
    pub tau: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, tau: f64) -> Result<Self> {
        if n == 0 {
            return domain("EnsembleParams: N must be positive");
        }
        if !(0.0..1.0).contains(&tau) {
            return domain(format!("EnsembleParams: tau = {tau} outside [0, 1)"));
        }
        Ok(EnsembleParams { n, tau })
    }

    /// `tau = 1 - kappa N^{-alpha}`.
    pub fn from_scaling(n: usize, alpha: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !(alpha >= 0.0) {
            return domain(format!("from_scaling: need kappa > 0 and alpha >= 0, got ({alpha}, {kappa})"));
        }
        Self::new(n, 1.0 - kappa * (n as f64).powf(-alpha))
    }
}

/// Complex time `T e^{i theta} = t + i s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexTime {
    pub magnitude: f64,
    pub theta: f64,
}

impl ComplexTime {
    pub fn new(magnitude: f64, theta: f64) -> Result<Self> {
        if !(magnitude >= 0.0) || !magnitude.is_finite() {
            return domain(format!("ComplexTime: T = {magnitude} must be finite and non-negative"));
        }
        if !theta.is_finite() {
            return domain("ComplexTime: theta must be finite");
        }
        Ok(ComplexTime { magnitude, theta: theta.rem_euclid(TAU) })
    }

    pub fn from_cartesian(t: f64, s: f64) -> Result<Self> {
        Self::new(t.hypot(s), s.atan2(t))
    }

    pub fn t(&self) -> f64 {
        self.magnitude * self.theta.cos()
    }

    pub fn s(&self) -> f64 {
        self.magnitude * self.theta.sin()
    }
}

/// `eta(tau, theta) = cos(theta)(1+tau)/2 + i sin(theta)(1-tau)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eta {
    pub value: Complex64,
}

impl Eta {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

pub fn eta(params: &EnsembleParams, theta: f64) -> Eta {
    eta_tau(params.tau, theta)
}

pub(crate) fn eta_tau(tau: f64, theta: f64) -> Eta {
    let (s, c) = theta.sin_cos();
    Eta { value: Complex64::new(c * (1.0 + tau) / 2.0, s * (1.0 - tau) / 2.0) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Asymptotic => "asymptotic",
            Provenance::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DsffValue {
    pub disconnected: f64,
    pub connected: f64,
    pub total: f64,
    pub provenance: Provenance,
}

impl DsffValue {
    pub fn new(disconnected: f64, connected: f64, provenance: Provenance) -> Self {
        DsffValue { disconnected, connected, total: disconnected + connected, provenance }
    }
}

fn check_x(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("{what}: x = {x} must be finite and non-negative"));
    }
    Ok(())
}

fn laguerre_last(n: usize, nu: i64, x: f64) -> ScaledReal {
    let mut out = ScaledReal::ONE;
    laguerre_sweep(n, nu, x, |k, l, s| {
        if k == n {
            out = ScaledReal::new(l, s);
        }
    });
    out
}

/// `e^{-x} L_{N-1}^{(1)}(x)^2` as a scaled value.
pub(crate) fn f_scaled(n: usize, x: f64) -> ScaledReal {
    let l = laguerre_last(n - 1, 1, x);
    l * l * ScaledReal::exp_neg(x)
}

/// `f_N(x) = e^{-x} [L_{N-1}^{(1)}(x)]^2`.
pub fn f_exact(n: usize, x: f64) -> Result<f64> {
    check_x(x, "f_exact")?;
    if n == 0 {
        return domain("f_exact: N must be positive");
    }
    Ok(f_scaled(n, x).to_f64())
}

/// Sum form `e^{-x} sum_{k<N} L_k^{(0)}(x)^2`.
pub(crate) fn rho_sum(n: usize, x: f64) -> ScaledReal {
    let mut acc = SquareSum::new();
    laguerre_sweep(n - 1, 0, x, |_, l, s| acc.add(1.0, l, s));
    acc.value() * ScaledReal::exp_neg(x)
}

/// Christoffel–Darboux form `N e^{-x} (L_{N-1} L_{N-1}^{(1)} - L_N L_{N-2}^{(1)})`.
pub(crate) fn rho_cd(n: usize, x: f64) -> ScaledReal {
    let mut l0 = [ScaledReal::ZERO; 2]; // L_{N-1}, L_N
    laguerre_sweep(n, 0, x, |k, l, s| {
        if k + 1 >= n {
            l0[k + 1 - n] = ScaledReal::new(l, s);
        }
    });
    let mut l1 = [ScaledReal::ZERO; 2]; // L_{N-2}^{(1)}, L_{N-1}^{(1)}
    laguerre_sweep(n - 1, 1, x, |k, l, s| {
        if k + 2 >= n {
            l1[k + 2 - n] = ScaledReal::new(l, s);
        }
    });
    (l0[0] * l1[1] - l0[1] * l1[0]) * ScaledReal::exp_neg(x) * (n as f64)
}

fn rel_diff(a: ScaledReal, b: ScaledReal) -> f64 {
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    if scale.is_zero() {
        return 0.0;
    }
    ((a - b) / scale).to_f64().abs()
}

/// Sum form and Christoffel–Darboux form of `rho_N(x)`, unchecked.
pub fn rho_forms(n: usize, x: f64) -> Result<(f64, f64)> {
    check_x(x, "rho_forms")?;
    if n == 0 {
        return domain("rho_forms: N must be positive");
    }
    Ok((rho_sum(n, x).to_f64(), rho_cd(n, x).to_f64()))
}

/// LUE one-point function `rho_N(x)`, cross-checked against its Christoffel–Darboux form.
pub fn rho_exact(n: usize, x: f64) -> Result<f64> {
    check_x(x, "rho_exact")?;
    if n == 0 {
        return domain("rho_exact: N must be positive");
    }
    let sum = rho_sum(n, x);
    let cd = rho_cd(n, x);
    let d = rel_diff(sum, cd);
    if d > RHO_CD_TOL {
        return Err(DsffError::Integrity(format!(
            "rho_exact(N={n}, x={x}): sum and Christoffel-Darboux forms differ by {d:e}"
        )));
    }
    Ok(sum.to_f64())
}

/// Representations of `Psi_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiMethod {
    DoubleSum,
    WeightedSum,
    Integral,
}

/// Weighted sum `e^{-x} sum_k (N-k) L_k^{(-1)}(x)^2`.
pub(crate) fn psi_weighted(n: usize, x: f64) -> ScaledReal {
    let mut acc = SquareSum::new();
    laguerre_sweep(n - 1, -1, x, |k, l, s| acc.add((n - k) as f64, l, s));
    acc.value() * ScaledReal::exp_neg(x)
}

/// Double sum over `(-1)^{j-k} L_j^{(k-j)} L_k^{(j-k)}`. With the symmetry identity each
/// off-diagonal pair equals `x^m j!/(j+m)! [L_j^{(m)}]^2`, `m = |j - k|`.
pub(crate) fn psi_double(n: usize, x: f64) -> ScaledReal {
    let mut total = ScaledReal::ZERO;
    for m in 0..n {
        // w_j = x^m j!/(j+m)!, starting from x^m/m!
        let mut w0 = ScaledReal::ONE;
        for i in 1..=m {
            w0 = w0 * (x / i as f64);
        }
        if w0.is_zero() {
            continue;
        }
        let mut acc = ScaledReal::ZERO;
        let mut w = w0;
        let last = n - 1 - m;
        laguerre_sweep(last, m as i64, x, |j, l, s| {
            let v = ScaledReal::new(l, s);
            acc = acc + w * v * v;
            w = w * ((j + 1) as f64 / (j + m + 1) as f64);
        });
        total = total + if m == 0 { acc } else { acc.mul_pow2(1) };
    }
    total * ScaledReal::exp_neg(x)
}

/// Integral form `N int_x^inf e^{-u} L_{N-1}(u)^2 du - N(N-1) e^{-x}(L_{N-1}^2 - L_{N-2} L_N)`.
pub(crate) fn psi_integral(n: usize, x: f64) -> ScaledReal {
    let nf = n as f64;
    let mut l = [ScaledReal::ZERO; 3]; // L_{N-2}, L_{N-1}, L_N
    laguerre_sweep(n, 0, x, |k, v, s| {
        if k + 2 >= n {
            l[k + 2 - n] = ScaledReal::new(v, s);
        }
    });
    let boundary = if n >= 2 {
        (l[1] * l[1] - l[0] * l[2]) * ScaledReal::exp_neg(x) * (nf * (nf - 1.0))
    } else {
        ScaledReal::ZERO
    };
    let tail = tail_integral(n, x);
    tail * nf - boundary
}

// int_x^inf e^{-u} L_{N-1}^{(0)}(u)^2 du, panel by panel until the tail past the
// turning point is negligible.
fn tail_integral(n: usize, x: f64) -> ScaledReal {
    let turning = 4.0 * n as f64 + 4.0 * (n as f64).sqrt() + 10.0;
    // past the turning point the integrand is tiny; rescale so it stays in f64 range
    let reference = if x > 4.0 * n as f64 {
        let l = laguerre_last(n - 1, 0, x);
        let v = l * l * ScaledReal::exp_neg(x);
        if v.is_zero() {
            0
        } else {
            v.exponent()
        }
    } else {
        0
    };
    let integrand = |u: f64| {
        let l = laguerre_last(n - 1, 0, u);
        (l * l * ScaledReal::exp_neg(u)).mul_pow2(-reference).to_f64()
    };
    let width = (n as f64).sqrt().max(1.0) * 2.0;
    let mut a = x;
    let mut total = 0.0;
    for _ in 0..100_000 {
        let b = a + width;
        let part = integrate(integrand, a, b, 1e-14, 0.0);
        total += part;
        a = b;
        if a > turning && part.abs() <= 1e-18 * total.abs() {
            break;
        }
    }
    ScaledReal::from_f64(total).mul_pow2(reference)
}

fn psi_scaled(n: usize, x: f64, method: PsiMethod) -> ScaledReal {
    match method {
        PsiMethod::DoubleSum => psi_double(n, x),
        PsiMethod::WeightedSum => psi_weighted(n, x),
        PsiMethod::Integral => psi_integral(n, x),
    }
}

/// `Psi_N(x)` by the chosen representation. Non-default representations are checked
/// against the weighted sum.
pub fn psi_exact(n: usize, x: f64, method: PsiMethod) -> Result<f64> {
    check_x(x, "psi_exact")?;
    if n == 0 {
        return domain("psi_exact: N must be positive");
    }
    if method == PsiMethod::DoubleSum && n > DOUBLE_SUM_MAX_N {
        return domain(format!("psi_exact: double sum limited to N <= {DOUBLE_SUM_MAX_N}, got {n}"));
    }
    let v = psi_scaled(n, x, method);
    if method != PsiMethod::WeightedSum {
        let reference = psi_weighted(n, x);
        let d = rel_diff(v, reference);
        if d > PSI_METHOD_TOL {
            return Err(DsffError::Integrity(format!(
                "psi_exact(N={n}, x={x}): {method:?} differs from weighted sum by {d:e}"
            )));
        }
    }
    Ok(v.to_f64())
}

/// `N - Psi_N(x)` without cancellation at small `x`.
pub(crate) fn psi_complement(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    if x * nf >= 1.0 {
        return nf - psi_weighted(n, x).to_f64();
    }
    // L_k^{(-1)} = -(x/k) L_{k-1}^{(1)}
    let mut acc = 0.0;
    if n >= 2 {
        laguerre_sweep(n - 2, 1, x, |j, l, _| {
            let k = (j + 1) as f64;
            let r = x / k * l;
            acc += (nf - k) * r * r;
        });
    }
    -nf * (-x).exp_m1() - (-x).exp() * acc
}

/// Exact DSFF from the closed-form Laguerre expressions. Times so large that `|eta T|^2`
/// overflows give NaN parts.
pub fn dsff_exact(params: &EnsembleParams, time: &ComplexTime) -> DsffValue {
    let n = params.n;
    let nf = n as f64;
    let tau = params.tau;
    let big_t = time.magnitude;
    let a = (1.0 - tau * tau) * big_t * big_t / (4.0 * nf);
    let e = eta(params, time.theta).abs();
    let x = (e * big_t).powi(2) / nf;
    if !(x.is_finite() && a.is_finite()) {
        return DsffValue::new(f64::NAN, f64::NAN, Provenance::Exact);
    }
    let l = laguerre_last(n - 1, 1, x);
    let disconnected = (l * l * ScaledReal::exp_neg(a + x)).to_f64();
    let psi = psi_weighted(n, x).to_f64();
    let connected = psi_complement(n, x) - (-a).exp_m1() * psi;
    DsffValue::new(disconnected, connected, Provenance::Exact)
}

/// [`dsff_exact`] over a grid, evaluated in parallel and returned in input order.
pub fn dsff_exact_grid(params: &EnsembleParams, times: &[ComplexTime]) -> Vec<DsffValue> {
    times.par_iter().map(|t| dsff_exact(params, t)).collect()
}

/// Matrix element `F_jk = int e^{itx+isy} phi_j conj(phi_k) omega dA` in closed form.
pub fn f_jk(params: &EnsembleParams, j: usize, k: usize, time: &ComplexTime) -> Result<Complex64> {
    let n = params.n;
    if j >= n || k >= n {
        return domain(format!("f_jk: indices ({j}, {k}) out of range for N = {n}"));
    }
    if j < k {
        // conj(F_jk) = (-1)^{j-k} F_kj
        let v = f_jk(params, k, j, time)?.conj();
        return Ok(if (k - j) % 2 == 1 { -v } else { v });
    }
    let nf = n as f64;
    let tau = params.tau;
    let big_t = time.magnitude;
    let et = eta(params, time.theta).value * big_t;
    let r = et.norm();
    let x = r * r / nf;
    let log_pref = -(1.0 - tau * tau) * big_t * big_t / (8.0 * nf) - x / 2.0;
    let m = j - k;
    // sqrt(k!/j!) (|eta T|/sqrt N)^m as a product, avoiding factorial overflow
    let mut mag = ScaledReal::exp_neg(-log_pref);
    for i in (k + 1)..=j {
        mag = mag * (r / (nf * i as f64).sqrt());
    }
    let lag = laguerre(k, m as i64, x)?;
    let modulus = (mag * lag).to_f64();
    // (i eta T / |eta T|)^m
    let phase = if r > 0.0 {
        let unit = Complex64::new(0.0, 1.0) * et / r;
        unit.powu(m as u32)
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(phase * modulus)
}

/// Matrix-element construction: `|sum_j F_jj|^2` and `N - sum_{jk} |F_jk|^2`.
pub fn dsff_from_fjk(params: &EnsembleParams, time: &ComplexTime) -> Result<DsffValue> {
    let n = params.n;
    let mut trace = Complex64::new(0.0, 0.0);
    let mut frob = 0.0;
    for j in 0..n {
        for k in 0..n {
            let v = f_jk(params, j, k, time)?;
            if j == k {
                trace += v;
            }
            frob += v.norm_sqr();
        }
    }
    Ok(DsffValue::new(trace.norm_sqr(), n as f64 - frob, Provenance::Exact))
}

/// Orthonormal polynomials of the elliptic weight, evaluated at `z` for degrees `0..n`.
/// Normalized against `omega(z) dA`, `dA = d^2 z / pi`.
pub fn orthonormal_polys(params: &EnsembleParams, z: Complex64) -> Vec<Complex64> {
    let n = params.n;
    let nf = n as f64;
    let tau = params.tau;
    let mut p = Vec::with_capacity(n);
    let sq = nf.sqrt();
    let mut p0 = Complex64::new(1.0, 0.0);
    let mut p1 = z * sq;
    // c_k^2 = N / (sqrt(1 - tau^2) k!)
    let base = nf / (1.0 - tau * tau).sqrt();
    let mut c2 = base;
    for k in 0..n {
        if k > 0 {
            c2 /= k as f64;
        }
        let pk = if k == 0 { p0 } else { p1 };
        p.push(pk * c2.sqrt());
        if k >= 1 {
            let next = z * sq * p1 - p0 * (k as f64 * tau);
            p0 = p1;
            p1 = next;
        }
    }
    p
}

/// Elliptic Ginibre weight `exp(-N x^2/(1+tau) - N y^2/(1-tau))`.
pub fn elliptic_weight(params: &EnsembleParams, z: Complex64) -> f64 {
    let nf = params.n as f64;
    (-nf * z.re * z.re / (1.0 + params.tau) - nf * z.im * z.im / (1.0 - params.tau)).exp()
}

/// Tensor Gauss–Legendre evaluation of the `F_jk` integral on the truncated box
/// `|x| <= 1+tau+10 sqrt((1+tau)/N)`, `|y| <= 1-tau+10 sqrt((1-tau)/N)`.
pub fn f_jk_quadrature(params: &EnsembleParams, time: &ComplexTime, nodes: usize) -> Vec<Vec<Complex64>> {
    let n = params.n;
    let nf = n as f64;
    let tau = params.tau;
    let lx = 1.0 + tau + 10.0 * ((1.0 + tau) / nf).sqrt();
    let ly = 1.0 - tau + 10.0 * ((1.0 - tau) / nf).sqrt();
    let (gx, gw) = crate::quad::gauss_legendre(nodes);
    let (t, s) = (time.t(), time.s());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (xi, wx) in gx.iter().zip(&gw) {
        let x = lx * xi;
        for (yi, wy) in gx.iter().zip(&gw) {
            let y = ly * yi;
            let z = Complex64::new(x, y);
            let w = wx * wy * lx * ly / PI * elliptic_weight(params, z);
            if w == 0.0 {
                continue;
            }
            let ph = Complex64::from_polar(w, t * x + s * y);
            let p = orthonormal_polys(params, z);
            for j in 0..n {
                let pj = p[j] * ph;
                for k in 0..n {
                    out[j][k] += pj * p[k].conj();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn eta_examples() {
        let p = EnsembleParams::new(4, 0.0).unwrap();
        for &th in &[0.0, 0.4, 2.0] {
            assert!((eta(&p, th).abs() - 0.5).abs() < 1e-15);
        }
        let e = eta(&EnsembleParams::new(4, 0.3).unwrap(), PI / 6.0).value;
        assert!((e.re - 0.65 * 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((e.im - 0.175).abs() < 1e-15);
        assert!((e.re - 0.5629165).abs() < 1e-7);
        let e = eta_tau(1.0 - 1e-15, 0.0).value;
        assert!((e.re - 1.0).abs() < 1e-14 && e.im == 0.0);
    }

    #[test]
    fn constructors_validate() {
        assert!(EnsembleParams::new(0, 0.3).is_err());
        assert!(EnsembleParams::new(3, 1.0).is_err());
        assert!(EnsembleParams::new(3, -0.1).is_err());
        assert!(ComplexTime::new(-1.0, 0.0).is_err());
        let c = ComplexTime::new(2.0, PI / 3.0).unwrap();
        let z = Complex64::new(c.t(), c.s());
        assert!((z - Complex64::from_polar(2.0, PI / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn f_examples() {
        for n in 1..20 {
            assert!(rel(f_exact(n, 0.0).unwrap(), (n * n) as f64) < 1e-15);
        }
        assert!(rel(f_exact(1, 2.5).unwrap(), (-2.5f64).exp()) < 1e-15);
        assert!(f_exact(3, -1.0).is_err());
    }

    #[test]
    fn rho_examples() {
        assert!(rel(rho_exact(1, 1.7).unwrap(), (-1.7f64).exp()) < 1e-15);
        for n in 1..10 {
            assert!(rel(rho_exact(n, 0.0).unwrap(), n as f64) < 1e-14);
        }
        let a = rho_sum(16, 30.0).to_f64();
        let b = rho_cd(16, 30.0).to_f64();
        assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn psi_examples() {
        for m in [PsiMethod::DoubleSum, PsiMethod::WeightedSum, PsiMethod::Integral] {
            assert!(rel(psi_exact(7, 0.0, m).unwrap(), 7.0) < 1e-12, "{m:?}");
            assert!(rel(psi_exact(1, 0.8, m).unwrap(), (-0.8f64).exp()) < 1e-12, "{m:?}");
        }
        let a = psi_exact(12, 5.5, PsiMethod::DoubleSum).unwrap();
        let b = psi_exact(12, 5.5, PsiMethod::WeightedSum).unwrap();
        let c = psi_exact(12, 5.5, PsiMethod::Integral).unwrap();
        assert!(rel(a, b) < 1e-9 && rel(c, b) < 1e-9 && rel(a, c) < 1e-9);
        assert!(psi_exact(300, 1.0, PsiMethod::DoubleSum).is_err());
    }

    #[test]
    fn complement_matches_direct() {
        for &n in &[2usize, 5, 40] {
            for &x in &[1e-6, 1e-3, 0.9 / n as f64] {
                let direct = n as f64 - psi_weighted(n, x).to_f64();
                let c = psi_complement(n, x);
                assert!((c - direct).abs() < 1e-12 * n as f64, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn dsff_at_zero_time() {
        let p = EnsembleParams::new(9, 0.4).unwrap();
        let v = dsff_exact(&p, &ComplexTime::new(0.0, 1.0).unwrap());
        assert_eq!(v.disconnected, 81.0);
        assert_eq!(v.connected, 0.0);
        assert_eq!(v.total, 81.0);
        assert_eq!(v.provenance, Provenance::Exact);
    }

    #[test]
    fn fjk_at_zero_time_is_identity() {
        let p = EnsembleParams::new(5, 0.3).unwrap();
        let t0 = ComplexTime::new(0.0, 0.3).unwrap();
        for j in 0..5 {
            for k in 0..5 {
                let v = f_jk(&p, j, k, &t0).unwrap();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-15);
            }
        }
        assert!(f_jk(&p, 5, 0, &t0).is_err());
    }

    #[test]
    fn fjk_conjugation_symmetry() {
        let p = EnsembleParams::new(7, 0.3).unwrap();
        let t = ComplexTime::new(2.3, 0.7).unwrap();
        for j in 0..7 {
            for k in 0..7 {
                let a = f_jk(&p, j, k, &t).unwrap().conj();
                let b = f_jk(&p, k, j, &t).unwrap() * if (j + k) % 2 == 1 { -1.0 } else { 1.0 };
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fjk_matches_quadrature_small_case() {
        let p = EnsembleParams::new(4, 0.3).unwrap();
        let t = ComplexTime::new(1.5, PI / 6.0).unwrap();
        let q = f_jk_quadrature(&p, &t, 200);
        let c = f_jk(&p, 2, 1, &t).unwrap();
        assert!((q[2][1] - c).norm() < 1e-8, "{} vs {}", q[2][1], c);
    }

    #[test]
    fn matrix_element_construction_matches_closed_form() {
        let p = EnsembleParams::new(8, 0.3).unwrap();
        let t = ComplexTime::new(2.0, PI / 6.0).unwrap();
        let a = dsff_exact(&p, &t);
        let b = dsff_from_fjk(&p, &t).unwrap();
        assert!(rel(a.disconnected, b.disconnected) < 1e-10);
        assert!(rel(a.connected, b.connected) < 1e-10);
    }

    #[test]
    fn factorial_ratio_beyond_gamma_overflow() {
        let p = EnsembleParams::new(400, 0.3).unwrap();
        let t = ComplexTime::new(25.0, 0.2).unwrap();
        let v = f_jk(&p, 390, 5, &t).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }

    #[test]
    fn grid_preserves_order() {
        let p = EnsembleParams::new(10, 0.2).unwrap();
        let ts: Vec<_> = (0..20).map(|i| ComplexTime::new(i as f64 * 0.7, 0.4).unwrap()).collect();
        let g = dsff_exact_grid(&p, &ts);
        for (t, v) in ts.iter().zip(&g) {
            assert_eq!(*v, dsff_exact(&p, t));
        }
    }

    #[test]
    fn far_times_reach_the_plateau_or_nan() {
        let params = EnsembleParams::new(8, 0.3).unwrap();
        let v = dsff_exact(&params, &ComplexTime::new(1e100, 0.4).unwrap());
        assert_eq!((v.disconnected, v.connected), (0.0, 8.0));
        let v = dsff_exact(&params, &ComplexTime::new(1e160, 0.4).unwrap());
        assert!(v.disconnected.is_nan() && v.connected.is_nan());
    }
}
