//! Data series behind the three published DSFF figures: the strong regime at `N = 64`, the
//! rescaled connected part in the mesoscopic regime, and the expansions of `f_N` by regime.

use crate::asymptotics::{exponential_parts, f_in, f_oscillatory_third_split, Region};
use crate::error::{domain, Result};
use crate::finite_n::{dsff_exact, f_exact, ComplexTime, EnsembleParams};
use crate::limits::{connected_exponent, limit_connected, predicted_connected, predicted_disconnected, ScalingPoint};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Default density of log-spaced grids.
pub const POINTS_PER_DECADE: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
}

impl FigureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            _ => domain(format!("unknown figure '{s}', expected fig2, fig3 or fig4")),
        }
    }
}

/// Number of points for `POINTS_PER_DECADE` spacing over `[min, max]`, endpoints included.
pub fn decade_points(min: f64, max: f64) -> usize {
    ((max / min).log10() * POINTS_PER_DECADE as f64).round().max(1.0) as usize + 1
}

/// `points` log-spaced values from `min` to `max`, both endpoints exact.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && max.is_finite()) || points < 2 {
        return domain(format!("log_grid: need 0 < min < max and points >= 2, got [{min}, {max}] x {points}"));
    }
    let (lo, hi) = (min.ln(), max.ln());
    let step = (hi - lo) / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|i| (lo + step * i as f64).exp()).collect();
    g[0] = min;
    g[points - 1] = max;
    Ok(g)
}

/// `points` equally spaced values from `min` to `max`.
pub fn lin_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(max > min && min.is_finite() && max.is_finite()) || points < 2 {
        return domain(format!("lin_grid: need min < max and points >= 2, got [{min}, {max}] x {points}"));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { max } else { min + step * i as f64 }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        }
    }
}

/// `Exact` series come from finite-`N` formulas, `Limit` series from `limits`/`asymptotics`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesRole {
    Exact,
    Limit,
}

impl SeriesRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesRole::Exact => "exact",
            SeriesRole::Limit => "limit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub panel: String,
    pub label: String,
    pub role: SeriesRole,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    pub panels: Vec<Panel>,
    pub series: Vec<Series>,
}

impl FigureData {
    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.label == label)
    }

    /// First non-finite value, as `(series label, index)`.
    pub fn first_non_finite(&self) -> Option<(&str, usize)> {
        self.series.iter().find_map(|s| {
            s.x.iter()
                .zip(&s.y)
                .position(|(x, y)| !x.is_finite() || !y.is_finite())
                .map(|i| (s.label.as_str(), i))
        })
    }
}

fn panel(name: &str, title: String, x: &str, y: &str, xs: Scale, ys: Scale) -> Panel {
    Panel { name: name.into(), title, x_label: x.into(), y_label: y.into(), x_scale: xs, y_scale: ys }
}

fn par_map(xs: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| f(x)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Config {
    pub n: usize,
    pub tau: f64,
    pub theta: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        let (t_min, t_max) = (1e-2, 1e2);
        Fig2Config { n: 64, tau: 0.3, theta: PI / 6.0, t_min, t_max, points: decade_points(t_min, t_max) }
    }
}

/// Total DSFF at one `N` against the strong-regime limits at `gamma = 0` and `gamma = 1/2`,
/// all as functions of `|T|`.
pub fn fig2(cfg: &Fig2Config) -> Result<FigureData> {
    let params = EnsembleParams::new(cfg.n, cfg.tau)?;
    let grid = log_grid(cfg.t_min, cfg.t_max, cfg.points)?;
    let nf = cfg.n as f64;
    let exact = par_map(&grid, |t| Ok(dsff_exact(&params, &ComplexTime::new(t, cfg.theta)?).total))?;
    let limit = |gamma: f64| {
        par_map(&grid, |t| {
            let p = ScalingPoint::strong(cfg.tau, gamma, t / nf.powf(gamma), cfg.theta)?;
            Ok(predicted_disconnected(&p, cfg.n)? + predicted_connected(&p, cfg.n)?)
        })
    };
    let (l0, l12) = (limit(0.0)?, limit(0.5)?);
    let series = vec![
        Series { panel: "main".into(), label: format!("exact_N{}", cfg.n), role: SeriesRole::Exact, x: grid.clone(), y: exact },
        Series { panel: "main".into(), label: "limit_gamma_0".into(), role: SeriesRole::Limit, x: grid.clone(), y: l0 },
        Series { panel: "main".into(), label: "limit_gamma_1/2".into(), role: SeriesRole::Limit, x: grid, y: l12 },
    ];
    let title = format!("DSFF, N={}, tau={}, theta={}", cfg.n, cfg.tau, cfg.theta);
    Ok(FigureData { id: FigureId::Fig2, panels: vec![panel("main", title, "T", "DSFF", Scale::Log, Scale::Log)], series })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig3Config {
    pub n: usize,
    pub gamma: f64,
    pub theta: f64,
    /// `(alpha, kappa)` per panel.
    pub cases: Vec<(f64, f64)>,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Fig3Config {
    fn default() -> Self {
        let (t_min, t_max) = (1e-2, 1e1);
        Fig3Config {
            n: 1 << 14,
            gamma: 0.6,
            theta: PI / 6.0,
            cases: vec![(0.3, 1.0), (0.6, 0.7), (0.9, 0.4)],
            t_min,
            t_max,
            points: decade_points(t_min, t_max),
        }
    }
}

fn case_tag(alpha: f64, kappa: f64) -> String {
    format!("alpha{alpha}_kappa{kappa}")
}

/// Connected DSFF divided by `N^{connected_exponent}` against the connected profile, per case.
pub fn fig3(cfg: &Fig3Config) -> Result<FigureData> {
    let grid = log_grid(cfg.t_min, cfg.t_max, cfg.points)?;
    let (mut panels, mut series) = (Vec::new(), Vec::new());
    for &(alpha, kappa) in &cfg.cases {
        let tag = case_tag(alpha, kappa);
        let point = |tb: f64| ScalingPoint::new(alpha, kappa, cfg.gamma, tb, cfg.theta);
        let params = point(1.0)?.params(cfg.n)?;
        let m = connected_exponent(alpha, cfg.gamma);
        let scale = (cfg.n as f64).powf(m);
        let exact = par_map(&grid, |tb| Ok(dsff_exact(&params, &point(tb)?.time(cfg.n)?).connected / scale))?;
        let limit = par_map(&grid, |tb| limit_connected(&point(tb)?, cfg.n))?;
        let title = format!("alpha={alpha}, kappa={kappa}, N={}, gamma={}, m={m}", cfg.n, cfg.gamma);
        panels.push(panel(&tag, title, "T_base", "connected DSFF / N^m", Scale::Log, Scale::Log));
        series.push(Series { panel: tag.clone(), label: format!("exact_conn_scaled_{tag}"), role: SeriesRole::Exact, x: grid.clone(), y: exact });
        series.push(Series { panel: tag.clone(), label: format!("limit_conn_{tag}"), role: SeriesRole::Limit, x: grid.clone(), y: limit });
    }
    Ok(FigureData { id: FigureId::Fig3, panels, series })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig4Config {
    pub sizes: Vec<usize>,
    pub points: usize,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Fig4Config { sizes: vec![8, 16, 32], points: 241 }
    }
}

/// Abscissa of each `f_N` panel, and its map to `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig4Panel {
    /// `X = 4N x` on `[0.1, 30]`.
    Bessel,
    /// `x / 4N` on `[0.15, 0.85]`.
    Oscillatory,
    /// `y = (2N)^{2/3}(x/4N - 1)` on `[-0.5, 0.5]`.
    Airy,
    /// `x / 4N` on `[1.2, 3]`.
    Exponential,
}

impl Fig4Panel {
    pub const ALL: [Fig4Panel; 4] = [Fig4Panel::Bessel, Fig4Panel::Oscillatory, Fig4Panel::Airy, Fig4Panel::Exponential];

    pub fn region(&self) -> Region {
        match self {
            Fig4Panel::Bessel => Region::Bessel,
            Fig4Panel::Oscillatory => Region::Oscillatory,
            Fig4Panel::Airy => Region::Airy,
            Fig4Panel::Exponential => Region::Exponential,
        }
    }

    pub fn range(&self) -> (f64, f64) {
        match self {
            Fig4Panel::Bessel => (0.1, 30.0),
            Fig4Panel::Oscillatory => (0.15, 0.85),
            Fig4Panel::Airy => (-0.5, 0.5),
            Fig4Panel::Exponential => (1.2, 3.0),
        }
    }

    pub fn to_x(&self, n: usize, v: f64) -> f64 {
        let m = 4.0 * n as f64;
        match self {
            Fig4Panel::Bessel => v / m,
            Fig4Panel::Oscillatory | Fig4Panel::Exponential => m * v,
            Fig4Panel::Airy => m * (1.0 + v / (2.0 * n as f64).powf(2.0 / 3.0)),
        }
    }

    /// Power of `N` that makes the third term `N`-free: `N^2`, `(4N)^3`, `N^2`.
    pub fn third_term_scale(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Fig4Panel::Oscillatory => (4.0 * nf).powi(3),
            _ => nf * nf,
        }
    }
}

/// Limit curve of a panel at abscissa `v`: the rescaled third term (its phase-free part in the
/// oscillatory panel), or the exponent `h` in the exponential panel. `n` only enters through
/// the map to `x`.
pub fn fig4_limit(panel: Fig4Panel, n: usize, v: f64) -> Result<f64> {
    let x = panel.to_x(n, v);
    match panel {
        Fig4Panel::Exponential => Ok(exponential_parts(v)?.1),
        Fig4Panel::Oscillatory => Ok(panel.third_term_scale(n) * f_oscillatory_third_split(n, x)?.0),
        _ => {
            let r = panel.region();
            Ok(panel.third_term_scale(n) * (f_in(r, n, x, 3)? - f_in(r, n, x, 2)?))
        }
    }
}

/// Rescaled remainder after two terms (minus the oscillating third-term part in the bulk),
/// or `-(4N)^{-1} log(N f_N / g)` in the exponential panel.
pub fn fig4_remainder(panel: Fig4Panel, n: usize, v: f64) -> Result<f64> {
    let x = panel.to_x(n, v);
    let f = f_exact(n, x)?;
    let nf = n as f64;
    match panel {
        Fig4Panel::Exponential => {
            let (g, _) = exponential_parts(v)?;
            Ok(-(nf * f / g).ln() / (4.0 * nf))
        }
        Fig4Panel::Oscillatory => {
            let osc = f_oscillatory_third_split(n, x)?.1;
            Ok(panel.third_term_scale(n) * (f - f_in(Region::Oscillatory, n, x, 2)? - osc))
        }
        _ => Ok(panel.third_term_scale(n) * (f - f_in(panel.region(), n, x, 2)?)),
    }
}

/// Per region, the rescaled remainders of `f_N` for each size against the limit curve.
pub fn fig4(cfg: &Fig4Config) -> Result<FigureData> {
    let n_ref = match cfg.sizes.iter().max() {
        Some(&n) if n > 0 => n,
        _ => return domain("fig4: need at least one positive size"),
    };
    let (mut panels, mut series) = (Vec::new(), Vec::new());
    for p in Fig4Panel::ALL {
        let name = p.region().as_str().to_string();
        let (lo, hi) = p.range();
        let grid = lin_grid(lo, hi, cfg.points)?;
        let (xl, yl) = match p {
            Fig4Panel::Bessel => ("X = 4Nx", "N^2 (f_N - two terms)"),
            Fig4Panel::Oscillatory => ("x/4N", "(4N)^3 (f_N - two terms - oscillating third)"),
            Fig4Panel::Airy => ("y", "N^2 (f_N - two terms)"),
            Fig4Panel::Exponential => ("x/4N", "-(4N)^-1 log(N f_N / g)"),
        };
        let title = format!("f_N, {} regime", p.region().as_str());
        panels.push(panel(&name, title, xl, yl, Scale::Linear, Scale::Linear));
        for &n in &cfg.sizes {
            let y = par_map(&grid, |v| fig4_remainder(p, n, v))?;
            series.push(Series { panel: name.clone(), label: format!("{name}_N{n}"), role: SeriesRole::Exact, x: grid.clone(), y });
        }
        let y = par_map(&grid, |v| fig4_limit(p, n_ref, v))?;
        series.push(Series { panel: name.clone(), label: format!("{name}_limit"), role: SeriesRole::Limit, x: grid, y });
    }
    Ok(FigureData { id: FigureId::Fig4, panels, series })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = log_grid(1e-2, 1e2, decade_points(1e-2, 1e2)).unwrap();
        assert_eq!(g.len(), 241);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[60] - 0.1).abs() < 1e-15);
        assert!(log_grid(1.0, 1.0, 5).is_err());
        assert_eq!(lin_grid(-0.5, 0.5, 3).unwrap(), vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn fig4_panels_stay_in_their_regions() {
        use crate::asymptotics::{classify_region, RegimePartition};
        let part = RegimePartition::default();
        for p in Fig4Panel::ALL {
            let (lo, hi) = p.range();
            for n in [8, 16, 32] {
                for v in [lo, hi] {
                    assert_eq!(classify_region(n, p.to_x(n, v), &part).unwrap(), p.region(), "{p:?} n={n} v={v}");
                }
            }
        }
    }

    #[test]
    fn fig4_remainders_approach_limits() {
        // the gap to the limit curve shrinks with N in every panel
        for p in Fig4Panel::ALL {
            let (lo, hi) = p.range();
            let v = lo + 0.37 * (hi - lo);
            let gap = |n| (fig4_remainder(p, n, v).unwrap() - fig4_limit(p, 32, v).unwrap()).abs();
            assert!(gap(32) < gap(8), "{p:?}: {} vs {}", gap(32), gap(8));
        }
    }

    #[test]
    fn small_fig2_is_finite() {
        let cfg = Fig2Config { n: 16, points: 25, ..Fig2Config::default() };
        let d = fig2(&cfg).unwrap();
        assert_eq!(d.series.len(), 3);
        assert_eq!(d.first_non_finite(), None);
    }
}
