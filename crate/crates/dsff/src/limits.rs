//! Large-`N` limit profiles of the DSFF, plateau exponents, error-exponent tables and the
//! dip-ramp-plateau phase classifier.
//!
//! Time is scaled as `T = N^gamma * Tbase` and non-Hermiticity as `tau = 1 - kappa N^{-alpha}`.
//! At fixed `tau` (`alpha = 0`) profiles depend on `|eta Tbase|`; otherwise on
//! `tbase = Tbase cos(theta)`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::finite_n::{eta_tau, ComplexTime, EnsembleParams};
use crate::specfun::j_all;

/// Case boundaries in `gamma` (and the regime boundaries in `alpha`) are matched to this width.
pub const CASE_TOL: f64 = 1e-12;

fn at(a: f64, b: f64) -> bool {
    (a - b).abs() <= CASE_TOL
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub alpha: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// `Tbase`, the coefficient of `N^gamma` in `|T|`.
    pub t_base: f64,
    pub theta: f64,
}

impl ScalingPoint {
    pub fn new(alpha: f64, kappa: f64, gamma: f64, t_base: f64, theta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return domain(format!("ScalingPoint: alpha = {alpha} must be >= 0"));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return domain(format!("ScalingPoint: kappa = {kappa} must be > 0"));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return domain(format!("ScalingPoint: gamma = {gamma} must be >= 0"));
        }
        if !(t_base > 0.0 && t_base.is_finite()) {
            return domain(format!("ScalingPoint: Tbase = {t_base} must be > 0"));
        }
        if !theta.is_finite() {
            return domain("ScalingPoint: theta must be finite");
        }
        if at(alpha, 0.0) && kappa > 1.0 {
            return domain(format!("ScalingPoint: at alpha = 0, kappa = {kappa} gives tau < 0"));
        }
        Ok(Self { alpha, kappa, gamma, t_base, theta })
    }

    /// Fixed-`tau` point: `alpha = 0`, `kappa = 1 - tau`.
    pub fn strong(tau: f64, gamma: f64, t_base: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tau) {
            return domain(format!("ScalingPoint: tau = {tau} outside [0, 1)"));
        }
        Self::new(0.0, 1.0 - tau, gamma, t_base, theta)
    }

    /// `tbase = Tbase cos(theta)`.
    pub fn tbase(&self) -> f64 {
        self.t_base * self.theta.cos()
    }

    pub fn regime(&self) -> NonHermiticity {
        NonHermiticity::of(self.alpha)
    }

    pub fn tau(&self, n: usize) -> Result<f64> {
        let tau = 1.0 - self.kappa * (n as f64).powf(-self.alpha);
        if !(0.0..1.0).contains(&tau) {
            return domain(format!("ScalingPoint: tau(N={n}) = {tau} outside [0, 1)"));
        }
        Ok(tau)
    }

    /// Fixed `tau` of a strong-regime point.
    fn tau_fixed(&self) -> f64 {
        1.0 - self.kappa
    }

    /// `|eta(tau, theta) Tbase|` at fixed `tau`.
    fn eta_t(&self) -> f64 {
        eta_tau(self.tau_fixed(), self.theta).abs() * self.t_base
    }

    pub fn params(&self, n: usize) -> Result<EnsembleParams> {
        EnsembleParams::new(n, self.tau(n)?)
    }

    /// `T e^{i theta}` with `|T| = N^gamma Tbase`.
    pub fn time(&self, n: usize) -> Result<ComplexTime> {
        ComplexTime::new((n as f64).powf(self.gamma) * self.t_base, self.theta)
    }

    /// Variable the profiles oscillate in: `|eta Tbase|` at fixed `tau`, else `tbase`.
    pub fn profile_variable(&self) -> f64 {
        match self.regime() {
            NonHermiticity::Strong => self.eta_t(),
            _ => self.tbase(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonHermiticity {
    Strong,
    Mesoscopic,
    WeakCritical,
    WeakSub,
}

impl NonHermiticity {
    pub fn of(alpha: f64) -> Self {
        if at(alpha, 0.0) {
            Self::Strong
        } else if alpha < 1.0 - CASE_TOL {
            Self::Mesoscopic
        } else if at(alpha, 1.0) {
            Self::WeakCritical
        } else {
            Self::WeakSub
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Strong => "strong",
            Self::Mesoscopic => "mesoscopic",
            Self::WeakCritical => "weak_critical",
            Self::WeakSub => "weak_sub",
        }
    }

    fn is_weak(&self) -> bool {
        matches!(self, Self::WeakCritical | Self::WeakSub)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dominant {
    Disconnected,
    Connected,
    Crossover,
    Plateau,
}

impl Dominant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Disconnected => "disconnected",
            Self::Connected => "connected",
            Self::Crossover => "crossover",
            Self::Plateau => "plateau",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ramp {
    Quadratic,
    Linear,
    Mixed,
    None,
}

impl Ramp {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Quadratic => "quadratic",
            Self::Linear => "linear",
            Self::Mixed => "mixed",
            Self::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Universality {
    GinUE,
    GUE,
    Boundary,
}

impl Universality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::GinUE => "GinUE",
            Self::GUE => "GUE",
            Self::Boundary => "boundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseReport {
    pub alpha: f64,
    pub gamma: f64,
    pub regime: NonHermiticity,
    pub dominant: Dominant,
    /// Leading power of `N` in the full DSFF.
    pub exponent: f64,
    pub ramp: Ramp,
    pub gamma_dip: f64,
    pub gamma_heisenberg: f64,
    pub universality: Universality,
}

/// Thouless-time exponent `min{(2 + alpha)/5, 1/2}`.
pub fn gamma_dip(alpha: f64) -> f64 {
    ((2.0 + alpha) / 5.0).min(0.5)
}

/// Heisenberg-time exponent `min{(1 + alpha)/2, 1}`.
pub fn gamma_heisenberg(alpha: f64) -> f64 {
    ((1.0 + alpha) / 2.0).min(1.0)
}

/// Power of `N` multiplying the connected ramp profile.
pub fn connected_exponent(alpha: f64, gamma: f64) -> f64 {
    match NonHermiticity::of(alpha) {
        NonHermiticity::Strong => 2.0 * gamma,
        NonHermiticity::Mesoscopic => (2.0 * gamma - alpha).max(gamma),
        _ => gamma,
    }
}

/// Power of `N` multiplying the disconnected dip profile.
pub fn disconnected_exponent(gamma: f64) -> f64 {
    2.0 - 3.0 * gamma
}

fn bessel_pair(u: f64) -> (f64, f64) {
    let j = j_all(2.0 * u);
    (j[0], j[1])
}

/// `J1(2u)^2 / u^2`, equal to 1 at `u = 0`.
fn dip_bessel(u: f64) -> f64 {
    if u < 1e-8 {
        return 1.0 - u * u;
    }
    let (_, j1) = bessel_pair(u);
    j1 * j1 / (u * u)
}

/// `u^2 (2 J0(2u)^2 + 2 J1(2u)^2 - J0(2u) J1(2u) / u)`.
fn ramp_bessel(u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let (j0, j1) = bessel_pair(u);
    u * u * (2.0 * j0 * j0 + 2.0 * j1 * j1) - u * j0 * j1
}

/// `(1 - sin(phase)) / (2 pi u^3)`.
fn dip_oscillation(u: f64, phase: f64) -> f64 {
    (1.0 - phase.sin()) / (2.0 * PI * u.powi(3))
}

/// `t sqrt(4 - t^2) + 4 arcsin(t/2)` for `t < 2`.
fn semicircle_phase(t: f64) -> f64 {
    t * (4.0 - t * t).max(0.0).sqrt() + 4.0 * (t / 2.0).min(1.0).asin()
}

fn outside<T>(what: &str, p: &ScalingPoint) -> Result<T> {
    domain(format!(
        "{what}: (alpha={}, gamma={}) outside the dip-ramp case table of the {} regime",
        p.alpha,
        p.gamma,
        p.regime().as_str()
    ))
}

/// Disconnected dip-ramp profile; its prefactor is `N^{2 - 3 gamma}`.
/// Oscillating phases are evaluated at the supplied `N`; unspecified phase corrections are zero.
pub fn limit_disconnected(p: &ScalingPoint, n: usize) -> Result<f64> {
    let nf = n as f64;
    let g = p.gamma;
    let u = p.profile_variable();
    let osc = || dip_oscillation(u, 4.0 * nf.powf(g) * u);
    match p.regime() {
        NonHermiticity::Strong => {
            let a = (1.0 - p.tau_fixed().powi(2)) / 4.0 * p.t_base.powi(2);
            if at(g, 0.0) {
                Ok(dip_bessel(u))
            } else if g < 0.5 - CASE_TOL {
                Ok(osc())
            } else if at(g, 0.5) {
                Ok((-a).exp() * osc())
            } else {
                outside("limit_disconnected", p)
            }
        }
        NonHermiticity::Mesoscopic => {
            let gh = gamma_heisenberg(p.alpha);
            if at(g, 0.0) {
                Ok(dip_bessel(u))
            } else if g < gh - CASE_TOL {
                Ok(osc())
            } else if at(g, gh) {
                Ok((-p.kappa / 2.0 * p.t_base.powi(2)).exp() * osc())
            } else {
                outside("limit_disconnected", p)
            }
        }
        _ => {
            if at(g, 0.0) {
                Ok(dip_bessel(u))
            } else if g < 1.0 - CASE_TOL {
                Ok(osc())
            } else if at(g, 1.0) && u < 2.0 {
                let damp = (-nf.powf(1.0 - p.alpha) * p.kappa / 2.0 * p.t_base.powi(2)).exp();
                Ok(damp * dip_oscillation(u, nf * semicircle_phase(u)))
            } else {
                outside("limit_disconnected", p)
            }
        }
    }
}

/// Connected dip-ramp profile; its prefactor is `N^{connected_exponent}`.
pub fn limit_connected(p: &ScalingPoint, n: usize) -> Result<f64> {
    let nf = n as f64;
    let g = p.gamma;
    let u = p.profile_variable();
    match p.regime() {
        NonHermiticity::Strong => {
            let a = (1.0 - p.tau_fixed().powi(2)) / 4.0 * p.t_base.powi(2);
            if at(g, 0.0) {
                Ok(a + ramp_bessel(u))
            } else if g < 0.5 - CASE_TOL {
                Ok(a)
            } else if at(g, 0.5) {
                Ok(-(-a).exp_m1())
            } else {
                outside("limit_connected", p)
            }
        }
        NonHermiticity::Mesoscopic => {
            let (al, gh) = (p.alpha, gamma_heisenberg(p.alpha));
            let q = p.kappa / 2.0 * p.t_base.powi(2);
            if at(g, 0.0) {
                Ok(ramp_bessel(u))
            } else if at(g, al) {
                Ok(2.0 / PI * u + q)
            } else if g < al {
                Ok(2.0 / PI * u)
            } else if g < gh - CASE_TOL {
                Ok(q)
            } else if at(g, gh) {
                Ok(-(-q).exp_m1())
            } else {
                outside("limit_connected", p)
            }
        }
        _ => {
            if at(g, 0.0) {
                Ok(ramp_bessel(u))
            } else if g < 1.0 - CASE_TOL {
                Ok(2.0 / PI * u)
            } else if at(g, 1.0) && u < 2.0 {
                let q = nf.powf(1.0 - p.alpha) * p.kappa / 2.0 * p.t_base.powi(2);
                Ok(-(-q).exp_m1() + semicircle_phase(u) / (2.0 * PI))
            } else {
                outside("limit_connected", p)
            }
        }
    }
}

/// `N^{2 - 3 gamma}` times the disconnected profile.
pub fn predicted_disconnected(p: &ScalingPoint, n: usize) -> Result<f64> {
    Ok((n as f64).powf(disconnected_exponent(p.gamma)) * limit_disconnected(p, n)?)
}

/// `N^{connected_exponent}` times the connected profile.
pub fn predicted_connected(p: &ScalingPoint, n: usize) -> Result<f64> {
    Ok((n as f64).powf(connected_exponent(p.alpha, p.gamma)) * limit_connected(p, n)?)
}

/// `t sqrt(t^2 - 4) - 4 arccosh(t/2)` for `t >= 2`.
fn arccosh_phase(t: f64) -> f64 {
    t * (t * t - 4.0).max(0.0).sqrt() - 4.0 * (t / 2.0).max(1.0).acosh()
}

fn not_plateau<T>(p: &ScalingPoint) -> Result<T> {
    domain(format!(
        "plateau_exponent: (alpha={}, gamma={}, tbase={}) is not in the plateau regime of the {} regime",
        p.alpha,
        p.gamma,
        p.profile_variable(),
        p.regime().as_str()
    ))
}

/// Plateau rate `Phi`, with the disconnected part decaying as `exp(-N^{plateau_scale} Phi)`.
pub fn plateau_exponent(p: &ScalingPoint) -> Result<f64> {
    let g = p.gamma;
    let u = p.profile_variable();
    match p.regime() {
        NonHermiticity::Strong => {
            if g <= 0.5 + CASE_TOL {
                return not_plateau(p);
            }
            let a = (1.0 - p.tau_fixed().powi(2)) / 4.0 * p.t_base.powi(2);
            if g < 1.0 - CASE_TOL || (at(g, 1.0) && u < 2.0) {
                Ok(a)
            } else if at(g, 1.0) {
                Ok(a + arccosh_phase(u))
            } else {
                Ok(a + u * u)
            }
        }
        NonHermiticity::Mesoscopic => {
            if g <= gamma_heisenberg(p.alpha) + CASE_TOL {
                return not_plateau(p);
            }
            if g < 1.0 - CASE_TOL || (at(g, 1.0) && u < 2.0) {
                Ok(p.kappa / 2.0 * p.t_base.powi(2))
            } else if at(g, 1.0) {
                Ok(arccosh_phase(u))
            } else {
                Ok(u * u)
            }
        }
        _ => {
            if at(g, 1.0) && u >= 2.0 {
                Ok(arccosh_phase(u))
            } else if g > 1.0 + CASE_TOL {
                Ok(u * u)
            } else {
                not_plateau(p)
            }
        }
    }
}

/// Power of `N` in front of `Phi` in the plateau exponent.
pub fn plateau_scale(p: &ScalingPoint) -> Result<f64> {
    plateau_exponent(p)?;
    let g = p.gamma;
    let u = p.profile_variable();
    let slow = p.regime() == NonHermiticity::Mesoscopic && (g < 1.0 - CASE_TOL || (at(g, 1.0) && u < 2.0));
    Ok(if slow { 2.0 * g - 1.0 - p.alpha } else { 2.0 * g - 1.0 })
}

/// `exp(-N^{plateau_scale} Phi)`, the plateau prediction for the disconnected part.
pub fn predicted_plateau_disconnected(p: &ScalingPoint, n: usize) -> Result<f64> {
    let phi = plateau_exponent(p)?;
    Ok((-(n as f64).powf(plateau_scale(p)?) * phi).exp())
}

/// Correction rates: `eps1..eps6` are decay rates `O(N^{-eps})` of the
/// dip-ramp profiles; `e1..e3` are the error terms inside the plateau exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorExponent {
    Eps1,
    Eps2,
    Eps3,
    Eps4,
    Eps5,
    Eps6,
    E1,
    E2,
    E3,
}

impl ErrorExponent {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Eps1 => "eps1",
            Self::Eps2 => "eps2",
            Self::Eps3 => "eps3",
            Self::Eps4 => "eps4",
            Self::Eps5 => "eps5",
            Self::Eps6 => "eps6",
            Self::E1 => "e1",
            Self::E2 => "e2",
            Self::E3 => "e3",
        }
    }
}

/// `N^power (log N)^{log_power}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorTerm {
    pub power: f64,
    pub log_power: u32,
}

impl ErrorTerm {
    fn pow(power: f64) -> Self {
        Self { power, log_power: 0 }
    }

    fn log(power: f64) -> Self {
        Self { power, log_power: 1 }
    }

    pub fn eval(&self, n: usize) -> f64 {
        let nf = n as f64;
        nf.powf(self.power) * nf.ln().powi(self.log_power as i32)
    }
}

fn case_gap<T>(which: ErrorExponent, p: &ScalingPoint) -> Result<T> {
    domain(format!(
        "error_exponent: {} has no case for (alpha={}, gamma={}, tbase={})",
        which.as_str(),
        p.alpha,
        p.gamma,
        p.profile_variable()
    ))
}

/// The tabulated correction for `which` at `p`. For `eps*` the result is `N^{eps}` with
/// `eps` in `power` (the correction is `O(N^{-eps})`); for `e*` it is the error term itself.
pub fn error_term(p: &ScalingPoint, which: ErrorExponent) -> Result<ErrorTerm> {
    use ErrorExponent::*;
    let (a, g) = (p.alpha, p.gamma);
    let u = p.profile_variable();
    let regime = p.regime();
    let ok = match which {
        Eps1 | Eps2 | E1 => regime == NonHermiticity::Strong,
        Eps3 | Eps4 | E2 => regime == NonHermiticity::Mesoscopic,
        Eps5 | Eps6 | E3 => regime.is_weak(),
    };
    if !ok {
        return case_gap(which, p);
    }
    let gh = gamma_heisenberg(a);
    let v = match which {
        Eps1 if g <= 0.5 + CASE_TOL => ErrorTerm::pow(if g < 0.4 - CASE_TOL { 2.0 - 3.0 * g } else { 2.0 * g }),
        Eps2 if at(g, 0.0) => ErrorTerm::pow(1.0),
        Eps2 if g < 1.0 / 3.0 - CASE_TOL => ErrorTerm::pow(g),
        Eps2 if g < 0.5 - CASE_TOL => ErrorTerm::pow(1.0 - 2.0 * g),
        Eps2 if at(g, 0.5) => ErrorTerm::pow(0.5),
        Eps3 if g <= gh + CASE_TOL => ErrorTerm::pow(if g < a - CASE_TOL { a - g } else { a }),
        Eps4 if at(g, 0.0) => ErrorTerm::pow(a),
        Eps4 if at(g, a) => ErrorTerm::pow(a.min(1.0 - a)),
        Eps4 if g < a => ErrorTerm::pow((2.0 * g).min(a - g)),
        Eps4 if at(g, gh) => ErrorTerm::pow(a.min((1.0 - a) / 2.0)),
        Eps4 if g < gh => ErrorTerm::pow(a.min(g - a).min(1.0 + a - 2.0 * g)),
        Eps5 if g <= 1.0 + CASE_TOL => ErrorTerm::pow((2.0 - 3.0 * g).min(2.0 * g).min(a - g)),
        Eps6 if at(g, 0.0) => ErrorTerm::pow(a.min(2.0)),
        Eps6 if at(g, 1.0) => ErrorTerm::pow(1.0),
        Eps6 if g < 1.0 => ErrorTerm::pow((2.0 * g).min(2.0 - 2.0 * g).min(a - g)),
        E1 if g > 0.5 + CASE_TOL => {
            if g <= 1.0 + CASE_TOL {
                ErrorTerm::log(0.0)
            } else {
                ErrorTerm::log(1.0)
            }
        }
        E2 if g > gh + CASE_TOL => {
            if g < 1.0 - CASE_TOL || (at(g, 1.0) && u < 2.0) {
                ErrorTerm::log(0.0)
            } else if at(g, 1.0) {
                ErrorTerm::pow(1.0 - a)
            } else {
                ErrorTerm::pow(2.0 * g - 1.0 - a)
            }
        }
        E3 if at(g, 1.0) && u > 2.0 => ErrorTerm::log(0.0),
        E3 if g > 1.0 + CASE_TOL && g < (2.0 + a) / 2.0 - CASE_TOL => ErrorTerm::log(1.0),
        E3 if g > (2.0 + a) / 2.0 + CASE_TOL => ErrorTerm::pow(2.0 * g - 1.0 - a),
        _ => return case_gap(which, p),
    };
    Ok(v)
}

/// The power of `N` in [`error_term`]; for `eps*` this is `eps` itself.
pub fn error_exponent(p: &ScalingPoint, which: ErrorExponent) -> Result<f64> {
    Ok(error_term(p, which)?.power)
}

/// Dip-ramp-plateau classification of `(alpha, gamma)`.
///
/// On `gamma = gamma_dip` the report is `Crossover` with the common exponent of the two
/// neighbouring cases. At `alpha = 1/2` the two branches of `gamma_dip` coincide.
pub fn phase_classify(alpha: f64, gamma: f64) -> PhaseReport {
    let regime = NonHermiticity::of(alpha);
    let gd = gamma_dip(alpha);
    let gh = gamma_heisenberg(alpha);
    let (dominant, exponent) = if at(gamma, gd) {
        (Dominant::Crossover, disconnected_exponent(gd))
    } else if gamma < gd {
        (Dominant::Disconnected, disconnected_exponent(gamma))
    } else if gamma <= gh + CASE_TOL {
        (Dominant::Connected, connected_exponent(alpha, gamma))
    } else {
        (Dominant::Plateau, 1.0)
    };
    let ramp = if at(gamma, 0.0) || gamma > gh + CASE_TOL {
        Ramp::None
    } else {
        match regime {
            NonHermiticity::Strong => Ramp::Quadratic,
            NonHermiticity::Mesoscopic if at(gamma, alpha) => Ramp::Mixed,
            NonHermiticity::Mesoscopic if gamma < alpha => Ramp::Linear,
            NonHermiticity::Mesoscopic => Ramp::Quadratic,
            NonHermiticity::WeakCritical if at(gamma, 1.0) => Ramp::Mixed,
            _ => Ramp::Linear,
        }
    };
    let universality = match regime {
        NonHermiticity::Strong => Universality::GinUE,
        NonHermiticity::WeakSub => Universality::GUE,
        _ if at(gamma, alpha) => Universality::Boundary,
        _ if gamma < alpha => Universality::GUE,
        _ => Universality::GinUE,
    };
    PhaseReport {
        alpha,
        gamma,
        regime,
        dominant,
        exponent,
        ramp,
        gamma_dip: gd,
        gamma_heisenberg: gh,
        universality,
    }
}

/// `f(t) = (2/pi)(t sqrt(4 - t^2)/4 + arcsin(t/2))` for `|t| < 2`, 1 for `t >= 2`.
pub fn weak_plateau_profile(t: f64) -> f64 {
    if t >= 2.0 {
        1.0
    } else if t > -2.0 {
        semicircle_phase(t) / (2.0 * PI)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn weak_profile_values() {
        assert_eq!(weak_plateau_profile(0.0), 0.0);
        assert!((weak_plateau_profile(2.0 - 1e-15) - 1.0).abs() < 1e-7);
        assert_eq!(weak_plateau_profile(2.0), 1.0);
        let want = 2.0 / PI * (3f64.sqrt() / 4.0 + PI / 6.0);
        assert!((weak_plateau_profile(1.0) - want).abs() < 1e-15);
        assert!((weak_plateau_profile(1.0) - 0.60900).abs() < 5e-6);
    }

    #[test]
    fn plateau_exponent_examples() {
        // weak, gamma = 1, tbase = 2 via theta = 0
        let p = ScalingPoint::new(1.5, 1.0, 1.0, 2.0, 0.0).unwrap();
        assert!(plateau_exponent(&p).unwrap().abs() < 1e-15);
        let p = ScalingPoint::new(0.5, 1.0, 1.0, 3.0, 0.0).unwrap();
        let phi = plateau_exponent(&p).unwrap();
        assert!((phi - (3.0 * 5f64.sqrt() - 4.0 * 1.5f64.acosh())).abs() < 1e-14);
        assert!((phi - 2.858_509_332_022_541_6).abs() < 1e-14);
        let p = ScalingPoint::strong(0.3, 1.2, 1.5, FRAC_PI_6).unwrap();
        let u = eta_tau(0.3, FRAC_PI_6).abs() * 1.5;
        let want = (1.0 - 0.09) / 4.0 * 2.25 + u * u;
        assert!((plateau_exponent(&p).unwrap() - want).abs() < 1e-15);
        assert!(plateau_exponent(&ScalingPoint::strong(0.3, 0.4, 1.0, 0.0).unwrap()).is_err());
        assert!(plateau_exponent(&ScalingPoint::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn weak_plateau_rate_increases() {
        let mut prev = 0.0;
        for i in 1..400 {
            let t = 2.0 + i as f64 * 0.01;
            let p = ScalingPoint::new(2.0, 1.0, 1.0, t, 0.0).unwrap();
            let phi = plateau_exponent(&p).unwrap();
            assert!(phi > prev);
            let h = 1e-6;
            let d = (arccosh_phase(t + h) - arccosh_phase(t - h)) / (2.0 * h);
            assert!((d - 2.0 * (t * t - 4.0).sqrt()).abs() < 1e-6);
            prev = phi;
        }
    }

    #[test]
    fn disconnected_examples() {
        let p = ScalingPoint::strong(0.3, 0.0, 1e-9, FRAC_PI_6).unwrap();
        assert!((limit_disconnected(&p, 100).unwrap() - 1.0).abs() < 1e-15);
        // gamma = 0.3 with |eta Tbase| = 1
        let e = eta_tau(0.3, FRAC_PI_6).abs();
        let p = ScalingPoint::strong(0.3, 0.3, 1.0 / e, FRAC_PI_6).unwrap();
        let n = 1000;
        let want = (1.0 - (4.0 * (n as f64).powf(0.3)).sin()) / (2.0 * PI);
        assert!((limit_disconnected(&p, n).unwrap() - want).abs() < 1e-12);
        // weak gamma = 1, tbase = 1: damping exp(-N^{1-alpha} kappa T^2 / 2) -> 1
        let p = ScalingPoint::new(2.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let n = 4096;
        let nf = n as f64;
        let phase = nf * (3f64.sqrt() + 4.0 * (0.5f64).asin());
        let env = (1.0 - phase.sin()) / (2.0 * PI);
        let v = limit_disconnected(&p, n).unwrap();
        assert!((v - (-0.5 / nf).exp() * env).abs() < 1e-12);
        assert!(limit_disconnected(&ScalingPoint::strong(0.3, 0.7, 1.0, 0.0).unwrap(), 10).is_err());
    }

    #[test]
    fn connected_examples() {
        let p = ScalingPoint::strong(0.3, 0.25, 2.0, 0.4).unwrap();
        assert!((limit_connected(&p, 50).unwrap() - 0.91 / 4.0 * 4.0).abs() < 1e-15);
        let p = ScalingPoint::new(0.6, 0.7, 0.3, 2.0, FRAC_PI_6).unwrap();
        assert!((limit_connected(&p, 50).unwrap() - 2.0 / PI * p.tbase()).abs() < 1e-15);
        let p = ScalingPoint::new(0.6, 0.7, 0.6, 2.0, FRAC_PI_6).unwrap();
        let want = 2.0 / PI * p.tbase() + 0.35 * 4.0;
        assert!((limit_connected(&p, 50).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn error_exponent_examples() {
        let p = ScalingPoint::strong(0.3, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(error_exponent(&p, ErrorExponent::Eps1).unwrap(), 2.0);
        assert_eq!(error_exponent(&p, ErrorExponent::Eps2).unwrap(), 1.0);
        let p = ScalingPoint::new(0.6, 1.0, 0.3, 1.0, 0.0).unwrap();
        assert!((error_exponent(&p, ErrorExponent::Eps4).unwrap() - 0.3).abs() < 1e-15);
        assert!(error_exponent(&p, ErrorExponent::Eps1).is_err());
        let p = ScalingPoint::strong(0.3, 0.7, 3.0, 0.0).unwrap();
        assert_eq!(error_term(&p, ErrorExponent::E1).unwrap(), ErrorTerm { power: 0.0, log_power: 1 });
        let p = ScalingPoint::new(1.0, 1.0, 1.5, 1.0, 0.0).unwrap();
        assert!(error_term(&p, ErrorExponent::E3).is_err());
    }

    #[test]
    fn phase_examples() {
        let r = phase_classify(0.0, 0.3);
        assert_eq!(r.dominant, Dominant::Disconnected);
        assert!((r.exponent - 1.1).abs() < 1e-15);
        assert_eq!((r.gamma_dip, r.gamma_heisenberg), (0.4, 0.5));
        let r = phase_classify(0.0, 0.7);
        assert_eq!((r.dominant, r.exponent), (Dominant::Plateau, 1.0));
        let r = phase_classify(0.6, 0.55);
        assert_eq!(r.dominant, Dominant::Connected);
        assert!((r.exponent - 0.55).abs() < 1e-15);
        assert_eq!((r.ramp, r.universality), (Ramp::Linear, Universality::GUE));
        let r = phase_classify(0.0, 0.4);
        assert_eq!(r.dominant, Dominant::Crossover);
        assert!((r.exponent - 0.8).abs() < 1e-15);
        assert_eq!(phase_classify(0.3, 0.3).ramp, Ramp::Mixed);
        assert_eq!(phase_classify(1.5, 0.2).universality, Universality::GUE);
        assert_eq!(phase_classify(0.2, 0.0).ramp, Ramp::None);
    }

    #[test]
    fn crossover_exponent_matches_both_sides() {
        for i in 0..=30 {
            let a = i as f64 * 0.05;
            let gd = gamma_dip(a);
            let left = disconnected_exponent(gd);
            let right = connected_exponent(a, gd + 1e-9);
            assert!((left - right).abs() < 1e-8, "alpha={a}");
            assert!((phase_classify(a, gd).exponent - left).abs() < 1e-15);
        }
    }

    #[test]
    fn connected_profile_continuous_at_alpha_zero() {
        // Quadratic ramp with tau(N): (1 - tau^2)/4 N^{2 gamma} -> kappa/2 N^{2 gamma - alpha}.
        let (alpha, kappa, gamma, t) = (1e-3, 0.8, 0.3, 1.7);
        let meso = ScalingPoint::new(alpha, kappa, gamma, t, 0.0).unwrap();
        for n in [1usize << 10, 1 << 14, 1 << 18] {
            let tau = meso.tau(n).unwrap();
            let strong = ScalingPoint::strong(tau, gamma, t, 0.0).unwrap();
            let a = predicted_connected(&strong, n).unwrap();
            let b = predicted_connected(&meso, n).unwrap();
            let ratio = a / b;
            assert!((ratio - 1.0).abs() <= kappa * (n as f64).powf(-alpha), "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn envelopes_non_negative() {
        for i in 0..200 {
            let g = i as f64 * 0.0025;
            let p = ScalingPoint::strong(0.3, g, 0.5 + i as f64 * 0.01, FRAC_PI_6).unwrap();
            for n in [10usize, 1000] {
                assert!(limit_disconnected(&p, n).unwrap() >= 0.0);
                assert!(limit_connected(&p, n).unwrap() >= 0.0);
            }
        }
    }
}
