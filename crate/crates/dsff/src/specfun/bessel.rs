//! Bessel functions of the first and second kind for small integer order.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Highest order supported.
pub const MAX_ORDER: u32 = 3;

/// Below this argument J uses the power series.
pub const J_SERIES_MAX: f64 = 5.0;
/// At and above this argument J and Y use the Hankel expansion.
pub const HANKEL_MIN: f64 = 25.0;
/// Below this argument Y0, Y1 use the logarithmic series.
pub const Y_SERIES_MAX: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `J_nu(x)` for `nu` in `0..=3` and finite `x >= 0`.
pub fn bessel_j(nu: u32, x: f64) -> Result<f64> {
    if nu > MAX_ORDER {
        return domain(format!("bessel_j: order {nu} not supported"));
    }
    if !x.is_finite() || x < 0.0 {
        return domain(format!("bessel_j: argument {x} must be finite and non-negative"));
    }
    Ok(j_all(x)[nu as usize])
}

/// `Y_nu(x)` for `nu` in `0..=3` and finite `x > 0`.
pub fn bessel_y(nu: u32, x: f64) -> Result<f64> {
    if nu > MAX_ORDER {
        return domain(format!("bessel_y: order {nu} not supported"));
    }
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("bessel_y: argument {x} must be finite and positive"));
    }
    Ok(y_all(x)[nu as usize])
}

/// `[J_0, J_1, J_2, J_3](x)` for `x >= 0`.
pub(crate) fn j_all(x: f64) -> [f64; 4] {
    if x < J_SERIES_MAX {
        [series(0, x), series(1, x), series(2, x), series(3, x)]
    } else if x < HANKEL_MIN {
        miller(x)
    } else {
        let mut out = [0.0; 4];
        for (nu, o) in out.iter_mut().enumerate() {
            *o = hankel(nu as u32, x).0;
        }
        out
    }
}

/// `[Y_0, Y_1, Y_2, Y_3](x)` for `x > 0`.
pub(crate) fn y_all(x: f64) -> [f64; 4] {
    let (y0, y1) = if x < Y_SERIES_MAX {
        let j = j_all(x);
        (y0_series(x, j[0]), y1_series(x, j[1]))
    } else {
        (hankel(0, x).1, hankel(1, x).1)
    };
    let y2 = 2.0 / x * y1 - y0;
    let y3 = 4.0 / x * y2 - y1;
    [y0, y1, y2, y3]
}

fn series(nu: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=nu {
        term *= h / k as f64;
    }
    let q = -h * h;
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (k + nu) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

// Backward recurrence normalized by J0 + 2 sum J_{2k} = 1.
fn miller(x: f64) -> [f64; 4] {
    let m = 2 * ((x as usize + 50) / 2);
    let mut jp = 0.0; // J_{k+1}
    let mut jk = 1e-30; // J_k
    let mut norm = 0.0;
    let mut out = [0.0; 4];
    for k in (1..=m).rev() {
        let jm = 2.0 * k as f64 / x * jk - jp;
        jp = jk;
        jk = jm;
        let km = k - 1;
        if km <= 3 {
            out[km] = jk;
        }
        if km % 2 == 0 && km > 0 {
            norm += 2.0 * jk;
        }
        if jk.abs() > 1e250 {
            jk *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for o in out.iter_mut() {
                *o *= 1e-250;
            }
        }
    }
    norm += jk;
    for o in out.iter_mut() {
        *o /= norm;
    }
    out
}

/// Large-argument expansion; returns `(J_nu, Y_nu)`.
fn hankel(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev || term == 0.0 {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

fn y0_series(x: f64, j0: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..80 {
        term *= -q / (k * k) as f64;
        harmonic += 1.0 / k as f64;
        let t = -term * harmonic;
        sum += t;
        if t.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + sum)
}

fn y1_series(x: f64, j1: f64) -> f64 {
    // Y1 = (2/pi) ln(x/2) J1 - 2/(pi x) - (1/pi) sum (-1)^k (psi(k+1)+psi(k+2)) (x/2)^{2k+1}/(k!(k+1)!)
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = h;
    let mut hk = 0.0; // H_k
    let mut hk1 = 1.0; // H_{k+1}
    let mut sum = term * (2.0 * (-EULER_GAMMA) + hk + hk1);
    for k in 1..80 {
        term *= q / (k * (k + 1)) as f64;
        hk += 1.0 / k as f64;
        hk1 += 1.0 / (k + 1) as f64;
        let t = term * (2.0 * (-EULER_GAMMA) + hk + hk1);
        sum += t;
        if t.abs() < 1e-17 * sum.abs() && k > 2 {
            break;
        }
    }
    2.0 / PI * h.ln() * j1 - 2.0 / (PI * x) - sum / PI
}

/// First positive zero of `J_nu`, found once by bisection.
pub fn first_zero(nu: u32) -> f64 {
    static ZEROS: OnceLock<[f64; 4]> = OnceLock::new();
    ZEROS.get_or_init(|| {
        let mut z = [0.0; 4];
        for (nu, zz) in z.iter_mut().enumerate() {
            // the first zero of J_nu lies in (nu + 1.5, nu + 4) for nu <= 3
            let (mut lo, mut hi) = (nu as f64 + 1.5, nu as f64 + 4.0);
            let f = |t: f64| j_all(t)[nu];
            let flo = f(lo);
            while hi - lo > 1e-14 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            *zz = 0.5 * (lo + hi);
        }
        z
    })[nu as usize]
}

/// Envelope of `J_alpha`: `J_alpha` up to its first zero, `sqrt(J^2 + Y^2)` beyond.
pub fn env_j(alpha: u32, x: f64) -> f64 {
    let a = alpha.min(MAX_ORDER) as usize;
    if x < first_zero(a as u32) {
        j_all(x)[a]
    } else {
        let j = j_all(x)[a];
        let y = y_all(x)[a];
        j.hypot(y)
    }
}
