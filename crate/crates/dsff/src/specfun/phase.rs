//! Phase and turning-point functions of the Laguerre expansions.

use std::f64::consts::FRAC_PI_2;

/// Below this distance from 1, `zeta` switches to its Taylor series.
pub const ZETA_SERIES_RADIUS: f64 = 1e-3;

// zeta(1 + u) = 2^{-2/3} u sum_k c_k u^k
const ZETA_SERIES: [f64; 13] = [
    1.0,
    -0.2,
    0.09714285714285714,
    -0.06006349206349206,
    0.04181109049680478,
    -0.03125226265797695,
    0.024499517550728434,
    -0.01987336224277849,
    0.016540788593944745,
    -0.014046202652652617,
    0.012121498548845184,
    -0.010599639954093326,
    0.009371684352715608,
];

const TWO_POW_M23: f64 = 0.629_960_524_947_436_6;

/// `xi(x) = (sqrt(x - x^2) + arcsin sqrt(x)) / 2` on `[0, 1]`.
pub fn xi(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    0.5 * ((x * (1.0 - x)).sqrt() + x.sqrt().atan2((1.0 - x).sqrt()))
}

/// Airy turning-point variable, negative on `[0, 1)` and positive beyond.
pub fn zeta(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < ZETA_SERIES_RADIUS {
        return u * zeta_over_xm1(x);
    }
    if x <= 1.0 {
        let x = x.max(0.0);
        // arccos sqrt(x) written as atan2 to stay accurate near 1
        let w = 0.75 * ((1.0 - x).sqrt().atan2(x.sqrt()) - (x * (1.0 - x)).sqrt());
        -w.max(0.0).powf(2.0 / 3.0)
    } else {
        let s = (x * u).sqrt();
        // arccosh sqrt(x) = asinh sqrt(x - 1)
        let w = 0.75 * (s - u.sqrt().asinh());
        w.max(0.0).powf(2.0 / 3.0)
    }
}

/// `zeta(x) / (x - 1)`, positive and smooth through `x = 1`.
pub fn zeta_over_xm1(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < ZETA_SERIES_RADIUS {
        let mut s = 0.0;
        for c in ZETA_SERIES.iter().rev() {
            s = s * u + c;
        }
        TWO_POW_M23 * s
    } else {
        zeta(x) / u
    }
}

/// `varphi(x)`: `2 xi(x)` on `(0, 1)` and `sqrt(x^2 - x) - arccosh sqrt(x)` for `x >= 1`.
pub fn varphi(x: f64) -> f64 {
    if x < 1.0 {
        2.0 * xi(x)
    } else {
        let u = x - 1.0;
        (x * u).sqrt() - u.sqrt().asinh()
    }
}

/// Derivative of `varphi`: `sqrt(|1 - x| / x)`.
pub fn varphi_prime(x: f64) -> f64 {
    ((1.0 - x).abs() / x).sqrt()
}

/// Bundles the three phase maps.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseFunctions;

impl PhaseFunctions {
    pub fn xi(&self, x: f64) -> f64 {
        xi(x)
    }
    pub fn zeta(&self, x: f64) -> f64 {
        zeta(x)
    }
    pub fn varphi(&self, x: f64) -> f64 {
        varphi(x)
    }
}

/// Left limit of `varphi` at 1.
pub const VARPHI_LEFT_AT_ONE: f64 = FRAC_PI_2;
