//! Run manifests for the `dsff` command: DSFF sweeps by method, phase tables and figure data,
//! rendered as CSV with the manifest echoed on the first line.
//!
//! Output layout: line 1 is `# manifest: <json>`, then a CSV header and rows. Floats carry 17
//! significant digits. Figure runs also write a plot description next to the CSV.

use dsff::asymptotics::dsff_asym;
use dsff::figures::{self, decade_points, log_grid, FigureData, FigureId};
use dsff::finite_n::{dsff_exact, ComplexTime, EnsembleParams};
use dsff::limits::phase_classify;
use dsff::montecarlo::{estimate_dsff_grid, SamplerConfig};
use dsff::DsffError;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Version of the column sets below; bumped on any change to them.
pub const SCHEMA_VERSION: u32 = 1;

pub const SWEEP_HEADER: [&str; 15] = [
    "method", "N", "tau", "alpha", "kappa", "gamma", "theta", "T_base", "T", "dsff_disc", "dsff_conn",
    "dsff_total", "stderr_disc", "stderr_conn", "error",
];

pub const PHASE_HEADER: [&str; 9] = [
    "alpha", "gamma", "regime", "dominant", "exponent", "ramp", "gamma_dip", "gamma_H", "universality",
];

pub const FIGURE_HEADER: [&str; 6] = ["figure", "panel", "series", "role", "x", "y"];

pub const MANIFEST_PREFIX: &str = "# manifest: ";

/// Stream id of the sampler used by `mc` runs.
pub const MC_STREAM: u64 = 0;

#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    Usage(String),
    Integrity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Integrity(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Integrity(_) => "integrity",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Integrity(m) | CliError::Io(m) => m,
        }
    }

    /// Single-line JSON object with `error`, `exit` and `message`.
    pub fn to_line(&self) -> String {
        serde_json::json!({ "error": self.kind(), "exit": self.exit_code(), "message": self.message() }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Domain errors come from bad input; everything else is a numeric failure.
fn from_dsff(e: DsffError) -> CliError {
    match e {
        DsffError::Domain(m) => CliError::Usage(m),
        other => CliError::Integrity(other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Exact,
    Asym,
    Mc,
    Phase,
    Figure,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ensemble {
    /// Fixed `tau`.
    Fixed { n: usize, tau: f64 },
    /// `tau = 1 - kappa N^-alpha`.
    Scaling { n: usize, alpha: f64, kappa: f64 },
}

impl Ensemble {
    pub fn n(&self) -> usize {
        match *self {
            Ensemble::Fixed { n, .. } | Ensemble::Scaling { n, .. } => n,
        }
    }

    pub fn params(&self) -> Result<EnsembleParams, CliError> {
        match *self {
            Ensemble::Fixed { n, tau } => EnsembleParams::new(n, tau),
            Ensemble::Scaling { n, alpha, kappa } => EnsembleParams::from_scaling(n, alpha, kappa),
        }
        .map_err(from_dsff)
    }

    fn alpha_kappa(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Ensemble::Fixed { .. } => (None, None),
            Ensemble::Scaling { alpha, kappa, .. } => (Some(alpha), Some(kappa)),
        }
    }
}

/// Log-spaced `T_base` grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl TimeGrid {
    /// `points` defaults to 60 per decade.
    pub fn new(t_min: f64, t_max: f64, points: Option<usize>) -> Result<Self, CliError> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return usage(format!("time grid: need 0 < tmin < tmax, got tmin={t_min}, tmax={t_max}"));
        }
        let points = points.unwrap_or_else(|| decade_points(t_min, t_max));
        if points < 2 {
            return usage(format!("time grid: points = {points} must be at least 2"));
        }
        Ok(TimeGrid { t_min, t_max, points })
    }

    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        log_grid(self.t_min, self.t_max, self.points).map_err(from_dsff)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "id", rename_all = "lowercase")]
pub enum FigureSpec {
    Fig2 { n: usize, tau: f64, theta: f64, grid: TimeGrid },
    Fig3 { n: usize, gamma: f64, theta: f64, cases: Vec<(f64, f64)>, grid: TimeGrid },
    Fig4 { sizes: Vec<usize>, points: usize },
}

impl FigureSpec {
    pub fn default_for(id: FigureId) -> Self {
        match id {
            FigureId::Fig2 => {
                let c = figures::Fig2Config::default();
                FigureSpec::Fig2 {
                    n: c.n,
                    tau: c.tau,
                    theta: c.theta,
                    grid: TimeGrid { t_min: c.t_min, t_max: c.t_max, points: c.points },
                }
            }
            FigureId::Fig3 => {
                let c = figures::Fig3Config::default();
                FigureSpec::Fig3 {
                    n: c.n,
                    gamma: c.gamma,
                    theta: c.theta,
                    cases: c.cases,
                    grid: TimeGrid { t_min: c.t_min, t_max: c.t_max, points: c.points },
                }
            }
            FigureId::Fig4 => {
                let c = figures::Fig4Config::default();
                FigureSpec::Fig4 { sizes: c.sizes, points: c.points }
            }
        }
    }

    pub fn id(&self) -> FigureId {
        match self {
            FigureSpec::Fig2 { .. } => FigureId::Fig2,
            FigureSpec::Fig3 { .. } => FigureId::Fig3,
            FigureSpec::Fig4 { .. } => FigureId::Fig4,
        }
    }

    pub fn compute(&self) -> Result<FigureData, CliError> {
        let data = match self {
            FigureSpec::Fig2 { n, tau, theta, grid } => figures::fig2(&figures::Fig2Config {
                n: *n,
                tau: *tau,
                theta: *theta,
                t_min: grid.t_min,
                t_max: grid.t_max,
                points: grid.points,
            }),
            FigureSpec::Fig3 { n, gamma, theta, cases, grid } => figures::fig3(&figures::Fig3Config {
                n: *n,
                gamma: *gamma,
                theta: *theta,
                cases: cases.clone(),
                t_min: grid.t_min,
                t_max: grid.t_max,
                points: grid.points,
            }),
            FigureSpec::Fig4 { sizes, points } => {
                figures::fig4(&figures::Fig4Config { sizes: sizes.clone(), points: *points })
            }
        }
        .map_err(from_dsff)?;
        if let Some((label, i)) = data.first_non_finite() {
            return Err(CliError::Integrity(format!("{}: series {label} is not finite at index {i}", self.id().as_str())));
        }
        Ok(data)
    }
}

/// Everything a run depends on; echoed into its output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<Ensemble>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<TimeGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunManifest {
    fn empty(command: Command) -> Self {
        RunManifest {
            schema: SCHEMA_VERSION,
            command,
            ensemble: None,
            gamma: None,
            theta: None,
            grid: None,
            trials: None,
            seed: None,
            alphas: Vec::new(),
            gammas: Vec::new(),
            figure: None,
            output: None,
        }
    }

    /// An `exact`, `asym` or `mc` sweep over `T = N^gamma T_base`.
    pub fn sweep(command: Command, ensemble: Ensemble, gamma: f64, theta: f64, grid: TimeGrid) -> Self {
        RunManifest { ensemble: Some(ensemble), gamma: Some(gamma), theta: Some(theta), grid: Some(grid), ..Self::empty(command) }
    }

    pub fn phase(alphas: Vec<f64>, gammas: Vec<f64>) -> Self {
        RunManifest { alphas, gammas, ..Self::empty(Command::Phase) }
    }

    pub fn figure(spec: FigureSpec) -> Self {
        RunManifest { figure: Some(spec), ..Self::empty(Command::Figure) }
    }

    pub fn with_mc(mut self, trials: usize, seed: u64) -> Self {
        self.trials = Some(trials);
        self.seed = Some(seed);
        self
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>) -> Self {
        self.output = Some(path.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let sweep = matches!(self.command, Command::Exact | Command::Asym | Command::Mc);
        if sweep {
            let (Some(e), Some(g), Some(th), Some(grid)) = (self.ensemble, self.gamma, self.theta, self.grid) else {
                return usage("sweep needs an ensemble, gamma, theta and a time grid");
            };
            e.params()?;
            if !(g >= 0.0 && g.is_finite()) || !th.is_finite() {
                return usage(format!("gamma = {g} must be finite and >= 0, theta = {th} finite"));
            }
            TimeGrid::new(grid.t_min, grid.t_max, Some(grid.points))?;
        }
        let mc = self.trials.is_some() || self.seed.is_some();
        if self.command == Command::Mc {
            match self.trials {
                Some(t) if t >= 2 && self.seed.is_some() => {}
                _ => return usage("mc needs --trials >= 2 and a seed"),
            }
        } else if mc {
            return usage("--trials and --seed apply to mc only");
        }
        if self.command == Command::Phase {
            if self.alphas.is_empty() || self.gammas.is_empty() {
                return usage("phase needs at least one alpha and one gamma");
            }
            if self.alphas.iter().chain(&self.gammas).any(|v| !(*v >= 0.0 && v.is_finite())) {
                return usage("phase: alpha and gamma must be finite and >= 0");
            }
        }
        if (self.command == Command::Figure) != self.figure.is_some() {
            return usage("a figure spec belongs to the figure command only");
        }
        Ok(())
    }
}

/// Rendered output of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub csv: String,
    pub plot: Option<String>,
    pub rows: usize,
    pub failed_rows: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Partial { failed: usize, total: usize },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Partial { .. } => 3,
        }
    }
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

struct Row {
    disc: f64,
    conn: f64,
    total: f64,
    se: Option<(f64, f64)>,
    error: String,
}

impl Row {
    fn checked(disc: f64, conn: f64, total: f64, se: Option<(f64, f64)>, what: &str) -> Self {
        let ok = disc.is_finite() && conn.is_finite() && total.is_finite();
        let error = if ok { String::new() } else { format!("{what} value not finite") };
        Row { disc, conn, total, se, error }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(manifest: &RunManifest, w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(format!("{MANIFEST_PREFIX}{}\n{body}", manifest.to_json()))
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

fn render_sweep(m: &RunManifest) -> Result<Rendered, CliError> {
    let (ensemble, gamma, theta, grid) = (m.ensemble.unwrap(), m.gamma.unwrap(), m.theta.unwrap(), m.grid.unwrap());
    let params = ensemble.params()?;
    let n = params.n;
    let bases = grid.values()?;
    let scale = (n as f64).powf(gamma);
    let times: Vec<ComplexTime> =
        bases.iter().map(|tb| ComplexTime::new(scale * tb, theta)).collect::<Result<_, _>>().map_err(from_dsff)?;
    let rows: Vec<Row> = match m.command {
        Command::Exact => times
            .par_iter()
            .map(|t| {
                let v = dsff_exact(&params, t);
                Row::checked(v.disconnected, v.connected, v.total, None, "exact")
            })
            .collect(),
        Command::Asym => times
            .par_iter()
            .map(|t| {
                let v = dsff_asym(&params, t);
                Row::checked(v.disconnected, v.connected, v.total, None, "asymptotic")
            })
            .collect(),
        Command::Mc => {
            let cfg = SamplerConfig::new(n, params.tau, m.trials.unwrap(), m.seed.unwrap(), MC_STREAM)
                .map_err(from_dsff)?;
            estimate_dsff_grid(&cfg, &times)
                .map_err(from_dsff)?
                .into_iter()
                .map(|e| {
                    let se = Some((e.stderr_disconnected, e.stderr_connected));
                    Row::checked(e.disconnected, e.connected, e.total, se, "monte carlo")
                })
                .collect()
        }
        _ => unreachable!(),
    };
    let method = match m.command {
        Command::Exact => "exact",
        Command::Asym => "asym",
        _ => "mc",
    };
    let (alpha, kappa) = ensemble.alpha_kappa();
    let mut w = csv_writer();
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for ((tb, t), r) in bases.iter().zip(&times).zip(&rows) {
        let (sd, sc) = r.se.map(|(a, b)| (fmt_f64(a), fmt_f64(b))).unwrap_or_default();
        w.write_record([
            method.to_string(),
            n.to_string(),
            fmt_f64(params.tau),
            opt(alpha),
            opt(kappa),
            fmt_f64(gamma),
            fmt_f64(theta),
            fmt_f64(*tb),
            fmt_f64(t.magnitude),
            fmt_f64(r.disc),
            fmt_f64(r.conn),
            fmt_f64(r.total),
            sd,
            sc,
            r.error.clone(),
        ])
        .map_err(io)?;
    }
    let failed_rows = rows.iter().filter(|r| !r.error.is_empty()).count();
    Ok(Rendered { csv: finish(m, w)?, plot: None, rows: rows.len(), failed_rows })
}

fn render_phase(m: &RunManifest) -> Result<Rendered, CliError> {
    let mut w = csv_writer();
    w.write_record(PHASE_HEADER).map_err(io)?;
    let mut rows = 0;
    for &a in &m.alphas {
        for &g in &m.gammas {
            let r = phase_classify(a, g);
            w.write_record([
                fmt_f64(r.alpha),
                fmt_f64(r.gamma),
                r.regime.as_str().to_string(),
                r.dominant.as_str().to_string(),
                fmt_f64(r.exponent),
                r.ramp.as_str().to_string(),
                fmt_f64(r.gamma_dip),
                fmt_f64(r.gamma_heisenberg),
                r.universality.as_str().to_string(),
            ])
            .map_err(io)?;
            rows += 1;
        }
    }
    Ok(Rendered { csv: finish(m, w)?, plot: None, rows, failed_rows: 0 })
}

/// Plain-text plot description: `key value` lines, one `panel` block per panel.
pub fn plot_description(data: &FigureData, csv_name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dsff-plot 1");
    let _ = writeln!(s, "figure {}", data.id.as_str());
    let _ = writeln!(s, "data {csv_name}");
    let _ = writeln!(s, "columns {}", FIGURE_HEADER.join(","));
    for p in &data.panels {
        let _ = writeln!(s, "panel {}", p.name);
        let _ = writeln!(s, "  title {}", p.title);
        let _ = writeln!(s, "  x_label {}", p.x_label);
        let _ = writeln!(s, "  y_label {}", p.y_label);
        let _ = writeln!(s, "  x_scale {}", p.x_scale.as_str());
        let _ = writeln!(s, "  y_scale {}", p.y_scale.as_str());
        let loglog = p.x_scale == figures::Scale::Log && p.y_scale == figures::Scale::Log;
        let _ = writeln!(s, "  loglog {loglog}");
        for se in data.series.iter().filter(|se| se.panel == p.name) {
            let style = match se.role {
                figures::SeriesRole::Exact => "points",
                figures::SeriesRole::Limit => "line",
            };
            let _ = writeln!(s, "  series {} role={} style={}", se.label, se.role.as_str(), style);
        }
    }
    s
}

fn render_figure(m: &RunManifest) -> Result<Rendered, CliError> {
    let spec = m.figure.as_ref().unwrap();
    let data = spec.compute()?;
    let mut w = csv_writer();
    w.write_record(FIGURE_HEADER).map_err(io)?;
    let mut rows = 0;
    for s in &data.series {
        for (x, y) in s.x.iter().zip(&s.y) {
            w.write_record([data.id.as_str(), &s.panel, &s.label, s.role.as_str(), &fmt_f64(*x), &fmt_f64(*y)])
                .map_err(io)?;
            rows += 1;
        }
    }
    let csv_name = m
        .output
        .as_deref()
        .and_then(Path::file_name)
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("{}.csv", data.id.as_str()));
    Ok(Rendered { csv: finish(m, w)?, plot: Some(plot_description(&data, &csv_name)), rows, failed_rows: 0 })
}

/// Validates and evaluates a manifest without touching the filesystem.
pub fn render(m: &RunManifest) -> Result<Rendered, CliError> {
    m.validate()?;
    let out = match m.command {
        Command::Exact | Command::Asym | Command::Mc => render_sweep(m)?,
        Command::Phase => render_phase(m)?,
        Command::Figure => render_figure(m)?,
    };
    if out.rows > 0 && out.failed_rows == out.rows {
        return Err(CliError::Integrity(format!("all {} rows failed", out.rows)));
    }
    Ok(out)
}

/// `<stem>.plot.txt` beside the CSV.
pub fn plot_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "figure".into());
    csv.with_file_name(format!("{stem}.plot.txt"))
}

/// Renders the manifest and writes the CSV to `output` (stdout when absent) and, for
/// figures, the plot description beside it.
pub fn run(m: &RunManifest) -> Result<Outcome, CliError> {
    let out = render(m)?;
    match &m.output {
        Some(path) => {
            std::fs::write(path, &out.csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if let Some(plot) = &out.plot {
                let pp = plot_path(path);
                std::fs::write(&pp, plot).map_err(|e| CliError::Io(format!("{}: {e}", pp.display())))?;
            }
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.csv.as_bytes()).map_err(io)?;
            if let Some(plot) = &out.plot {
                stdout.write_all(plot.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(if out.failed_rows == 0 {
        Outcome::Success
    } else {
        Outcome::Partial { failed: out.failed_rows, total: out.rows }
    })
}

/// Caps the global worker pool at `DSFF_THREADS` when set.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let k: usize = match v.trim().parse() {
        Ok(k) if k > 0 => k,
        _ => return usage(format!("DSFF_THREADS = '{v}' must be a positive integer")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::Usage(format!("DSFF_THREADS: {e}")))
}
