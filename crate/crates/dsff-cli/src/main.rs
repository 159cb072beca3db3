use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsff::figures::FigureId;
use dsff_cli::{configure_threads, run, CliError, Command, Ensemble, FigureSpec, RunManifest, TimeGrid};
use std::path::PathBuf;
use std::process::ExitCode;

/// DSFF of the complex elliptic Ginibre ensemble: sweeps, phase tables and figure data.
#[derive(Parser, Debug)]
#[command(name = "dsff", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form finite-N DSFF.
    Exact(SweepArgs),
    /// DSFF from the large-N expansions of f_N and Psi_N.
    Asym(SweepArgs),
    /// Monte Carlo estimate over sampled matrices.
    Mc(SweepArgs),
    /// Any of the three, chosen by --method.
    Sweep {
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        args: SweepArgs,
    },
    /// Dip-ramp-plateau classification on an (alpha, gamma) grid.
    Phase(PhaseArgs),
    /// Data series and plot description of fig2, fig3 or fig4.
    Figure(FigureArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Exact,
    Asym,
    Mc,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with_all = ["alpha", "kappa"])]
    tau: Option<f64>,
    #[arg(long, requires = "kappa")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    kappa: Option<f64>,
    /// |T| = N^gamma T_base.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    #[arg(long, default_value_t = 100.0)]
    tmax: f64,
    /// Grid size; 60 per decade when omitted.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', required = true)]
    gamma: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig2, fig3 or fig4.
    id: Option<String>,
    #[arg(long = "figure", conflicts_with = "id")]
    figure: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, requires = "kappa")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    kappa: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// CSV path; defaults to `<id>.csv`. The plot description goes to `<stem>.plot.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn sweep_manifest(command: Command, a: SweepArgs) -> Result<RunManifest, CliError> {
    let ensemble = match (a.tau, a.alpha, a.kappa) {
        (Some(tau), None, None) => Ensemble::Fixed { n: a.n, tau },
        (None, Some(alpha), Some(kappa)) => Ensemble::Scaling { n: a.n, alpha, kappa },
        _ => return usage("give either --tau or both --alpha and --kappa"),
    };
    let grid = TimeGrid::new(a.tmin, a.tmax, a.points)?;
    let mut m = RunManifest::sweep(command, ensemble, a.gamma, a.theta, grid);
    if command == Command::Mc {
        m = m.with_mc(a.trials.unwrap_or(1000), a.seed.unwrap_or(0));
    } else if a.trials.is_some() || a.seed.is_some() {
        return usage("--trials and --seed apply to mc only");
    }
    if let Some(out) = a.out {
        m = m.with_output(out);
    }
    Ok(m)
}

fn grid_override(g: TimeGrid, a: &FigureArgs) -> Result<TimeGrid, CliError> {
    let (lo, hi) = (a.tmin.unwrap_or(g.t_min), a.tmax.unwrap_or(g.t_max));
    let points = match a.points {
        Some(p) => Some(p),
        None if a.tmin.is_some() || a.tmax.is_some() => None,
        None => Some(g.points),
    };
    TimeGrid::new(lo, hi, points)
}

fn reject(id: &str, flags: &[(&str, bool)]) -> Result<(), CliError> {
    match flags.iter().find(|(_, given)| *given) {
        Some((name, _)) => usage(format!("figure {id}: --{name} does not apply")),
        None => Ok(()),
    }
}

fn figure_manifest(a: FigureArgs) -> Result<RunManifest, CliError> {
    let Some(name) = a.id.clone().or_else(|| a.figure.clone()) else {
        return usage("figure: name one of fig2, fig3, fig4");
    };
    let id = match FigureId::parse(&name) {
        Ok(id) => id,
        Err(_) => return usage(format!("unknown figure '{name}', expected fig2, fig3 or fig4")),
    };
    let spec = match FigureSpec::default_for(id) {
        FigureSpec::Fig2 { n, tau, theta, grid } => {
            reject(&name, &[("alpha", a.alpha.is_some()), ("kappa", a.kappa.is_some()), ("gamma", a.gamma.is_some())])?;
            FigureSpec::Fig2 {
                n: a.n.unwrap_or(n),
                tau: a.tau.unwrap_or(tau),
                theta: a.theta.unwrap_or(theta),
                grid: grid_override(grid, &a)?,
            }
        }
        FigureSpec::Fig3 { n, gamma, theta, cases, grid } => {
            reject(&name, &[("tau", a.tau.is_some())])?;
            let cases = match (a.alpha, a.kappa) {
                (Some(al), Some(k)) => vec![(al, k)],
                _ => cases,
            };
            FigureSpec::Fig3 {
                n: a.n.unwrap_or(n),
                gamma: a.gamma.unwrap_or(gamma),
                theta: a.theta.unwrap_or(theta),
                cases,
                grid: grid_override(grid, &a)?,
            }
        }
        FigureSpec::Fig4 { sizes, points } => {
            reject(
                &name,
                &[
                    ("n", a.n.is_some()),
                    ("tau", a.tau.is_some()),
                    ("alpha", a.alpha.is_some()),
                    ("kappa", a.kappa.is_some()),
                    ("gamma", a.gamma.is_some()),
                    ("theta", a.theta.is_some()),
                    ("tmin", a.tmin.is_some()),
                    ("tmax", a.tmax.is_some()),
                ],
            )?;
            FigureSpec::Fig4 { sizes, points: a.points.unwrap_or(points) }
        }
    };
    let out = a.out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    Ok(RunManifest::figure(spec).with_output(out))
}

fn manifest(cmd: Cmd) -> Result<RunManifest, CliError> {
    match cmd {
        Cmd::Exact(a) => sweep_manifest(Command::Exact, a),
        Cmd::Asym(a) => sweep_manifest(Command::Asym, a),
        Cmd::Mc(a) => sweep_manifest(Command::Mc, a),
        Cmd::Sweep { method, args } => {
            let c = match method {
                Method::Exact => Command::Exact,
                Method::Asym => Command::Asym,
                Method::Mc => Command::Mc,
            };
            sweep_manifest(c, args)
        }
        Cmd::Phase(a) => {
            let mut m = RunManifest::phase(a.alpha, a.gamma);
            if let Some(out) = a.out {
                m = m.with_output(out);
            }
            Ok(m)
        }
        Cmd::Figure(a) => figure_manifest(a),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_line());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return fail(&CliError::Usage("missing subcommand, see --help".into()));
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail(&CliError::Usage(first.to_string()));
        }
    };
    if let Err(e) = configure_threads(std::env::var("DSFF_THREADS").ok().as_deref()) {
        return fail(&e);
    }
    let result = manifest(cli.cmd).and_then(|m| run(&m));
    match result {
        Ok(outcome) => {
            if let dsff_cli::Outcome::Partial { failed, total } = outcome {
                let e = serde_json::json!({ "error": "partial", "exit": 3, "failed_rows": failed, "rows": total });
                eprintln!("{e}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => fail(&e),
    }
}
