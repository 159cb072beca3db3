use dsff::asymptotics::{
    error_envelope, f_in, psi_in, rho_asym, rho_in, AsymValue, Quantity, Region, RegimePartition,
};
use dsff::finite_n::{dsff_exact, dsff_from_fjk, psi_exact, rho_exact, ComplexTime, EnsembleParams, PsiMethod};
use dsff::limits::{
    gamma_heisenberg, limit_disconnected, predicted_connected, weak_plateau_profile, ScalingPoint,
};
use dsff::montecarlo::{
    estimate_from_samples, sample_eginue, sample_spectra, spectrum, z_n, SamplerConfig,
};
use dsff::specfun::{airy, bessel_j, laguerre, xi, zeta, ScaledReal};
use proptest::prelude::*;
use std::f64::consts::PI;

fn lag(n: usize, nu: i64, x: f64) -> f64 {
    laguerre(n, nu, x).unwrap().to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bessel_three_term_recurrence(x in 0.1f64..50.0) {
        let (j0, j1, j2) = (bessel_j(0, x).unwrap(), bessel_j(1, x).unwrap(), bessel_j(2, x).unwrap());
        prop_assert!((j0 + j2 - 2.0 / x * j1).abs() <= 1e-10);
    }

    #[test]
    fn airy_solves_its_ode(x in -8.0f64..4.0) {
        let h = 1e-4;
        let ai = |t: f64| airy(t).unwrap().0;
        let d2 = (ai(x + h) - 2.0 * ai(x) + ai(x - h)) / (h * h);
        prop_assert!((d2 - x * ai(x)).abs() <= 1e-5);
    }

    #[test]
    fn laguerre_derivative_identity(n in 1usize..=40, nu in 0i64..=3, x in 0.5f64..20.0) {
        let h = 1e-5 * x;
        let fd = (lag(n, nu, x + h) - lag(n, nu, x - h)) / (2.0 * h);
        let d = -lag(n - 1, nu + 1, x);
        // relative to the local size of the polynomial pair; both never vanish together
        let scale = d.abs().max(lag(n, nu, x).abs());
        prop_assert!((fd - d).abs() <= 1e-6 * scale, "fd {fd} vs {d}");
    }

    #[test]
    fn laguerre_shift_identity(k in 1usize..=60, nu in -1i64..=3, x in 0.0f64..40.0) {
        let lhs = laguerre(k, nu, x).unwrap();
        let (a, b) = (laguerre(k, nu + 1, x).unwrap(), laguerre(k - 1, nu + 1, x).unwrap());
        let rhs = a - b;
        let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
        let diff = (lhs - rhs).abs();
        prop_assert!(diff <= scale * ScaledReal::from_f64(1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn phase_bridge(x in 0.01f64..0.99) {
        prop_assert!((-(2.0 / 3.0) * (-zeta(x)).powf(1.5) - (xi(x) - PI / 4.0)).abs() <= 1e-11);
    }

    #[test]
    fn psi_derivative_is_minus_rho(n in 1usize..=32, u in 0.0f64..1.0) {
        let x = 0.05 + u * 6.0 * n as f64;
        let h = 1e-4 * x.max(1.0);
        let psi = |t: f64| psi_exact(n, t, PsiMethod::WeightedSum).unwrap();
        let fd = (psi(x + h) - psi(x - h)) / (2.0 * h);
        let rho = rho_exact(n, x).unwrap();
        // the tail is exponentially small; compare absolutely below 1e-12
        prop_assert!((fd + rho).abs() <= 1e-5 * rho.abs().max(1e-12 / 1e-5), "fd {fd} rho {rho}");
    }

    #[test]
    fn partial_sum_derivative(n in 1usize..=24, nu in -1i64..=0, x in 0.2f64..30.0) {
        let s = |t: f64| -> f64 {
            (0..n).map(|k| { let l = lag(k, nu, t); l * l }).sum::<f64>() * (-t).exp()
        };
        // five-point stencil: the term derivatives cancel in the sum, their third derivatives do not
        let h = 2e-5 * x.max(1.0);
        let fd = (s(x - 2.0 * h) - 8.0 * s(x - h) + 8.0 * s(x + h) - s(x + 2.0 * h)) / (12.0 * h);
        let l = lag(n - 1, nu + 1, x);
        let d = -(-x).exp() * l * l;
        let scale = d.abs().max(1e-5 * s(x));
        prop_assert!((fd - d).abs() <= 1e-5 * scale, "fd {fd} vs {d}");
    }

    #[test]
    fn dsff_parts_are_bounded(n in 1usize..=200, tau in 0.0f64..0.999, t in 0.0f64..1e4, theta in -PI..PI) {
        let v = dsff_exact(&EnsembleParams::new(n, tau).unwrap(), &ComplexTime::new(t, theta).unwrap());
        let nf = n as f64;
        let slack = 1e-12 * nf * nf;
        prop_assert!(v.disconnected >= 0.0 && v.disconnected <= nf * nf + slack, "{v:?}");
        prop_assert!(v.connected >= -1e-12 * nf && v.connected <= nf * (1.0 + 1e-12), "{v:?}");
    }

    #[test]
    fn dsff_matches_matrix_element_construction(n in 1usize..=12, tau in 0.0f64..0.95, t in 0.0f64..30.0, theta in -PI..PI) {
        let p = EnsembleParams::new(n, tau).unwrap();
        let time = ComplexTime::new(t, theta).unwrap();
        let (a, b) = (dsff_exact(&p, &time), dsff_from_fjk(&p, &time).unwrap());
        let nf = n as f64;
        // relative to the natural scales N^2 and N of the two parts
        prop_assert!((a.disconnected - b.disconnected).abs() <= 1e-10 * b.disconnected.max(1e-6 * nf * nf));
        prop_assert!((a.connected - b.connected).abs() <= 1e-10 * b.connected.max(1e-6 * nf));
    }

    #[test]
    fn rho_expansion_positive_in_bulk(n in 64usize..2048, u in 0.0f64..1.0) {
        let nf = n as f64;
        let (lo, hi) = (1.0, 4.0 * nf - nf.sqrt());
        let x = lo + (hi - lo) * (0.001 + 0.998 * u);
        match rho_asym(n, x) {
            AsymValue::Interior { region: Region::Oscillatory, value } => prop_assert!(value > 0.0),
            other => prop_assert!(false, "unexpected {other:?}"),
        }
    }

    #[test]
    fn neighbouring_expansions_match_at_seams(n in 64usize..4096) {
        let part = RegimePartition::default();
        let [b0, b1, b2] = part.bounds(n);
        let pairs = [(b0, Region::Bessel, Region::Oscillatory), (b1, Region::Oscillatory, Region::Airy), (b2, Region::Airy, Region::Exponential)];
        for (x, l, r) in pairs {
            let checks: [(Quantity, f64, f64); 3] = [
                (Quantity::F, f_in(l, n, x, 3).unwrap(), f_in(r, n, x, 3).unwrap()),
                (Quantity::Rho, rho_in(l, n, x).unwrap(), rho_in(r, n, x).unwrap()),
                (Quantity::Psi, psi_in(l, n, x).unwrap(), psi_in(r, n, x).unwrap()),
            ];
            for (q, a, b) in checks {
                let env = error_envelope(q, l, n, x).unwrap() + error_envelope(q, r, n, x).unwrap();
                // envelopes carry unit constants
                prop_assert!((a - b).abs() <= 10.0 * env, "{q:?} at {x}: {a} vs {b}, env {env}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mesoscopic_ramp_continues_strong_quadratic(alpha in 0.01f64..0.5, frac in 0.05f64..0.95, kappa in 0.1f64..1.0, tb in 0.1f64..5.0, k in 6u32..=14) {
        let n = 1usize << k;
        let gamma = alpha + frac * (gamma_heisenberg(alpha).min(0.5) - alpha);
        let meso = ScalingPoint::new(alpha, kappa, gamma, tb, 0.3).unwrap();
        let tau = meso.tau(n).unwrap();
        let strong = ScalingPoint::strong(tau, gamma, tb, 0.3).unwrap();
        let ratio = predicted_connected(&meso, n).unwrap() / predicted_connected(&strong, n).unwrap();
        // 1 - tau^2 = 2 kappa N^-alpha (1 - kappa N^-alpha / 2)
        let expected = 1.0 / (1.0 - kappa * (n as f64).powf(-alpha) / 2.0);
        prop_assert!((ratio / expected - 1.0).abs() < 1e-12, "{ratio} vs {expected}");
    }

    #[test]
    fn weak_plateau_exponent_positive_increasing(t in 2.0001f64..50.0) {
        let phi = |t: f64| t * (t * t - 4.0).sqrt() - 4.0 * (t / 2.0).acosh();
        let p = ScalingPoint::new(1.5, 1.0, 1.0, t / 0.3f64.cos(), 0.3).unwrap();
        let got = dsff::limits::plateau_exponent(&p).unwrap();
        prop_assert!((got - phi(t)).abs() <= 1e-12 * phi(t).max(1.0));
        prop_assert!(got > 0.0);
        let h = 1e-6 * t;
        let fd = (phi(t + h) - phi(t - h)) / (2.0 * h);
        prop_assert!(fd > 0.0);
        prop_assert!((fd - 2.0 * (t * t - 4.0).sqrt()).abs() <= 1e-5 * fd.max(1e-3));
        prop_assert!(weak_plateau_profile(t) == 1.0);
    }

    #[test]
    fn disconnected_profiles_non_negative(alpha in 0.0f64..1.6, g in 0.0f64..1.0, tb in 0.01f64..10.0, theta in -1.5f64..1.5, k in 4u32..=12) {
        let kappa = if alpha == 0.0 { 0.7 } else { 1.0 };
        let cap = if alpha < 1.0 { gamma_heisenberg(alpha) } else { 1.0 };
        let p = ScalingPoint::new(alpha, kappa, g * cap, tb, theta).unwrap();
        let n = 1usize << k;
        let v = limit_disconnected(&p, n);
        // every point below the Heisenberg exponent lies in the case table
        prop_assert!(v.is_ok(), "{p:?}: {v:?}");
        prop_assert!(v.unwrap() >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampler_is_reproducible(seed in any::<u64>(), stream in 0u64..4, n in 2usize..16, tau in 0.0f64..0.99) {
        let cfg = SamplerConfig::new(n, tau, 4, seed, stream).unwrap();
        let time = ComplexTime::new(2.5, 0.4).unwrap();
        let z = |c: &SamplerConfig| -> Vec<_> {
            sample_spectra(c).unwrap().iter().map(|e| z_n(e, &time)).collect()
        };
        let (a, b) = (z(&cfg), z(&cfg));
        prop_assert!(a.iter().zip(&b).all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits()));
    }

    #[test]
    fn spectral_sum_rules(seed in any::<u64>(), n in 2usize..40, tau in 0.0f64..0.99, trial in 0u64..100) {
        let cfg = SamplerConfig::new(n, tau, 1, seed, 0).unwrap();
        let x = sample_eginue(&cfg, trial);
        let s = spectrum(&x).unwrap();
        let bound = 1e-8 * n as f64 * x.frobenius();
        prop_assert!(s.trace_defect <= bound && s.second_moment_defect <= bound, "{} {} vs {bound}", s.trace_defect, s.second_moment_defect);
    }

    #[test]
    fn hermitian_limit_spectrum_is_real(seed in any::<u64>(), n in 2usize..=64) {
        let cfg = SamplerConfig::new(n, 1.0 - 1e-12, 1, seed, 0).unwrap();
        let s = spectrum(&sample_eginue(&cfg, 0)).unwrap();
        let m = s.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        prop_assert!(m <= 1e-5, "max |Im| = {m}");
    }

    #[test]
    fn halving_trials_doubles_variance(seed in any::<u64>()) {
        let n = 8;
        let time = ComplexTime::new(3.0, 0.5).unwrap();
        let se2 = |trials: usize, stream: u64| -> f64 {
            let cfg = SamplerConfig::new(n, 0.3, trials, seed, stream).unwrap();
            let z: Vec<_> = sample_spectra(&cfg).unwrap().iter().map(|e| z_n(e, &time)).collect();
            estimate_from_samples(&z).unwrap().stderr_connected.powi(2)
        };
        // averaged over independent repetitions on distinct streams
        let reps = 8u64;
        let full: f64 = (0..reps).map(|r| se2(400, 2 * r)).sum();
        let half: f64 = (0..reps).map(|r| se2(200, 2 * r + 1)).sum();
        let ratio = half / full;
        prop_assert!((1.0..=3.0).contains(&ratio), "ratio {ratio}");
    }
}
