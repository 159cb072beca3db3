//! Special-function kernel: Bessel J/Y, Airy, Laguerre, Hermite, phase functions.

mod airy;
mod bessel;
mod phase;
mod poly;
mod scaled;

pub use airy::{airy, airy_asymptotic, airy_maclaurin, env_ai, ASYMPTOTIC_MIN, MACLAURIN_MAX};
pub use bessel::{bessel_j, bessel_y, env_j, first_zero, HANKEL_MIN, J_SERIES_MAX, MAX_ORDER, Y_SERIES_MAX};
pub use phase::{varphi, varphi_prime, xi, zeta, zeta_over_xm1, PhaseFunctions, VARPHI_LEFT_AT_ONE, ZETA_SERIES_RADIUS};
pub use poly::{hermite, laguerre, laguerre_supported};
pub use scaled::{frexp, ldexp, ScaledReal};

pub(crate) use airy::airy_unchecked;
pub(crate) use bessel::j_all;
pub(crate) use poly::laguerre_sweep;
pub(crate) use scaled::SquareSum;

/// Airy envelope `envAi_p(y)`.
pub fn envelopes(p: f64, y: f64) -> f64 {
    env_ai(p, y)
}

/// Tolerances the kernel is tested against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AccuracyManifest {
    pub version: u32,
    /// Absolute, scaled by `max(1, |J|)`.
    pub bessel_j: f64,
    /// Absolute, scaled by `max(1, envAi_{1/4})`.
    pub airy: f64,
    /// Relative, for representable Laguerre values.
    pub laguerre: f64,
    /// Relative, for Hermite values.
    pub hermite: f64,
    /// Absolute, for the xi/zeta bridge on `[0.01, 0.99]`.
    pub phase_bridge: f64,
}

pub const ACCURACY: AccuracyManifest = AccuracyManifest {
    version: 1,
    bessel_j: 1e-12,
    airy: 1e-11,
    laguerre: 1e-12,
    hermite: 1e-12,
    phase_bridge: 1e-11,
};
