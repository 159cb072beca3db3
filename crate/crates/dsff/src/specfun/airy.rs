//! Airy function Ai and its derivative on the real line.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Maclaurin series is used for `|x| <= MACLAURIN_MAX`.
pub const MACLAURIN_MAX: f64 = 4.5;
/// Asymptotic expansions are used for `|x| >= ASYMPTOTIC_MIN`.
pub const ASYMPTOTIC_MIN: f64 = 12.0;

const AI0: f64 = 0.355_028_053_887_817_24; // 3^{-2/3}/Gamma(2/3)
const AIP0: f64 = -0.258_819_403_792_806_8; // -3^{-1/3}/Gamma(1/3)

const STEP: f64 = 0.5;

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return domain(format!("airy: non-finite argument {x}"));
    }
    Ok(airy_unchecked(x))
}

pub(crate) fn airy_unchecked(x: f64) -> (f64, f64) {
    let ax = x.abs();
    if ax <= MACLAURIN_MAX {
        airy_maclaurin(x, 80)
    } else if ax >= ASYMPTOTIC_MIN {
        airy_asymptotic(x)
    } else {
        // integrate Ai'' = x Ai from the asymptotic anchor inward
        let (x0, anchor) = if x > 0.0 { (ASYMPTOTIC_MIN, anchors().0) } else { (-ASYMPTOTIC_MIN, anchors().1) };
        taylor_walk(x0, anchor, x)
    }
}

fn anchors() -> ((f64, f64), (f64, f64)) {
    static A: OnceLock<((f64, f64), (f64, f64))> = OnceLock::new();
    *A.get_or_init(|| (airy_asymptotic(ASYMPTOTIC_MIN), airy_asymptotic(-ASYMPTOTIC_MIN)))
}

/// Power series about the origin with `terms` coefficients per solution.
pub fn airy_maclaurin(x: f64, terms: usize) -> (f64, f64) {
    // Ai = AI0 f + AIP0 g, f = sum a_n x^n, g = sum b_n x^n with a_{n+3} = a_n/((n+2)(n+3))
    taylor_sum(0.0, AI0, AIP0, x, 3 * terms)
}

// Taylor expansion of the solution of y'' = x y about x0, evaluated at x0 + h.
fn taylor_sum(x0: f64, y0: f64, yp0: f64, x: f64, max_terms: usize) -> (f64, f64) {
    let h = x - x0;
    let mut a_prev2 = 0.0; // a_{n-1}
    let mut a_prev = y0; // a_n, n = 0
    let mut a_cur = yp0; // a_{n+1}
    let mut val = y0 + yp0 * h;
    let mut der = yp0;
    let mut hp = h; // h^{n+1}
    let mut hp_d = 1.0; // h^n
    let mut small = 0;
    for n in 0..max_terms {
        // a_{n+2} = (x0 a_n + a_{n-1}) / ((n+1)(n+2))
        let a_next = (x0 * a_prev + a_prev2) / ((n + 1) as f64 * (n + 2) as f64);
        hp_d *= h;
        hp *= h;
        let tv = a_next * hp;
        let td = (n + 2) as f64 * a_next * hp_d;
        val += tv;
        der += td;
        if tv.abs() <= 1e-18 * val.abs() && td.abs() <= 1e-18 * der.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        a_prev2 = a_prev;
        a_prev = a_cur;
        a_cur = a_next;
    }
    (val, der)
}

fn taylor_walk(mut x0: f64, (mut y, mut yp): (f64, f64), x: f64) -> (f64, f64) {
    while (x - x0).abs() > STEP {
        let next = x0 + STEP * (x - x0).signum();
        let (a, b) = taylor_sum(x0, y, yp, next, 200);
        y = a;
        yp = b;
        x0 = next;
    }
    taylor_sum(x0, y, yp, x, 200)
}

/// Large-|x| expansions; accurate for `|x| >= 5` to roughly `1e-10` relative and to
/// full precision beyond `ASYMPTOTIC_MIN`.
pub fn airy_asymptotic(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let z = 2.0 / 3.0 * ax * ax.sqrt();
    let (u, v) = uv_coeffs();
    if x > 0.0 {
        // Ai ~ e^{-z}/(2 sqrt(pi) x^{1/4}) sum (-1)^k u_k z^{-k}
        let (mut s, mut sp) = (0.0, 0.0);
        let mut zk = 1.0;
        let mut prev = f64::INFINITY;
        for k in 0..u.len() {
            let tu = u[k] * zk;
            let tv = v[k] * zk;
            if tu.abs() > prev {
                break;
            }
            prev = tu.abs();
            let sg = if k % 2 == 0 { 1.0 } else { -1.0 };
            s += sg * tu;
            sp += sg * tv;
            if tu.abs() < 1e-17 * s.abs() {
                break;
            }
            zk /= z;
        }
        let e = (-z).exp() / (2.0 * PI.sqrt());
        (e / ax.powf(0.25) * s, -e * ax.powf(0.25) * sp)
    } else {
        let (mut p, mut q, mut pp, mut qq) = (0.0, 0.0, 0.0, 0.0);
        let mut zk = 1.0;
        let mut prev = f64::INFINITY;
        for k in 0..u.len() {
            let tu = u[k] * zk;
            if tu.abs() > prev {
                break;
            }
            prev = tu.abs();
            let tv = v[k] * zk;
            // even k feed the cosine sums, odd k the sine sums, alternating signs in pairs
            let sg = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sg * tu;
                pp += sg * tv;
            } else {
                q += sg * tu;
                qq += sg * tv;
            }
            if tu.abs() < 1e-17 {
                break;
            }
            zk /= z;
        }
        let (sn, cs) = (z - FRAC_PI_4).sin_cos();
        let amp = 1.0 / (PI.sqrt() * ax.powf(0.25));
        let ampd = ax.powf(0.25) / PI.sqrt();
        (amp * (cs * p + sn * q), ampd * (sn * pp - cs * qq))
    }
}

fn uv_coeffs() -> &'static (Vec<f64>, Vec<f64>) {
    static C: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    C.get_or_init(|| {
        let n = 60;
        let mut u = vec![1.0; n];
        let mut v = vec![1.0; n];
        for k in 1..n {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Airy envelope `envAi_p(y)`.
pub fn env_ai(p: f64, y: f64) -> f64 {
    if y >= 1.0 {
        y.powf(p) * (-2.0 / 3.0 * y * y.sqrt() + 2.0 / 3.0).exp()
    } else if y >= -1.0 {
        1.0
    } else {
        (-y).powf(p)
    }
}
