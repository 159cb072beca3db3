use std::path::Path;
use std::process::{Command, Output};

fn dsff(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dsff"));
    c.args(args);
    match threads {
        Some(t) => c.env("DSFF_THREADS", t),
        None => c.env_remove("DSFF_THREADS"),
    };
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Everything after the manifest line.
fn body(csv: &str) -> &str {
    assert!(csv.starts_with("# manifest: "), "{csv}");
    &csv[csv.find('\n').unwrap() + 1..]
}

fn manifest(csv: &str) -> serde_json::Value {
    let line = csv.lines().next().unwrap();
    serde_json::from_str(line.strip_prefix("# manifest: ").unwrap()).unwrap()
}

fn records(csv: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body(csv).as_bytes());
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn sweep_header_is_pinned() {
    let o = dsff(&["exact", "--n", "8", "--tau", "0.3", "--tmin", "0.5", "--tmax", "5", "--points", "4"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(
        body(&out).lines().next().unwrap(),
        "method,N,tau,alpha,kappa,gamma,theta,T_base,T,dsff_disc,dsff_conn,dsff_total,stderr_disc,stderr_conn,error"
    );
    let rows = records(&out);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(&r[0], "exact");
        assert_eq!(&r[12], "");
        assert_eq!(&r[14], "");
        let d: f64 = r[9].parse().unwrap();
        let c: f64 = r[10].parse().unwrap();
        let t: f64 = r[11].parse().unwrap();
        assert!((d + c - t).abs() <= 1e-12 * t);
    }
    let m = manifest(&out);
    assert_eq!(m["schema"], 1);
    assert_eq!(m["command"], "exact");
    assert_eq!(m["grid"]["points"], 4);
}

#[test]
fn phase_example_row() {
    let o = dsff(&["phase", "--alpha", "0", "--gamma", "0.3"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(body(&out).lines().next().unwrap(), "alpha,gamma,regime,dominant,exponent,ramp,gamma_dip,gamma_H,universality");
    let rows = records(&out);
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!(&r[3], "disconnected");
    assert!((r[4].parse::<f64>().unwrap() - 1.1).abs() < 1e-15);
    assert!((r[6].parse::<f64>().unwrap() - 0.4).abs() < 1e-15);
    assert!((r[7].parse::<f64>().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn phase_grid_is_alpha_major() {
    let o = dsff(&["phase", "--alpha", "0,0.5", "--gamma", "0.1,0.9,2"], None);
    let rows = records(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), 2.0);
    assert_eq!(rows[3][0].parse::<f64>().unwrap(), 0.5);
    assert_eq!(&rows[2][3], "plateau");
}

#[test]
fn monte_carlo_is_deterministic_across_thread_counts() {
    let args = ["mc", "--n", "12", "--tau", "0.3", "--tmin", "0.5", "--tmax", "20", "--points", "5", "--trials", "64", "--seed", "7"];
    let a = dsff(&args, Some("1"));
    let b = dsff(&args, Some("4"));
    let c = dsff(&args, None);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let out = stdout(&a);
    assert_eq!(manifest(&out)["seed"], 7);
    for r in records(&out) {
        assert!(r[12].parse::<f64>().unwrap() >= 0.0);
        assert!(r[13].parse::<f64>().unwrap() >= 0.0);
    }
    let other = dsff(&["mc", "--n", "12", "--tau", "0.3", "--tmin", "0.5", "--tmax", "20", "--points", "5", "--trials", "64", "--seed", "8"], None);
    assert_ne!(body(&stdout(&other)), body(&out));
}

#[test]
fn sweep_method_flag_matches_subcommands() {
    let a = dsff(&["asym", "--n", "64", "--alpha", "0.5", "--kappa", "1", "--gamma", "0.25", "--points", "6"], None);
    let b = dsff(&["sweep", "--method", "asym", "--n", "64", "--alpha", "0.5", "--kappa", "1", "--gamma", "0.25", "--points", "6"], None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let r = &records(&out)[0];
    assert_eq!(&r[0], "asym");
    assert_eq!(r[3].parse::<f64>().unwrap(), 0.5);
    // T = N^gamma T_base
    let (tb, t): (f64, f64) = (r[7].parse().unwrap(), r[8].parse().unwrap());
    assert!((t - 64f64.powf(0.25) * tb).abs() < 1e-12 * t);
}

#[test]
fn usage_errors_are_single_json_lines() {
    for args in [
        vec!["exact", "--n", "8"],
        vec!["exact", "--n", "8", "--tau", "0.3", "--alpha", "1", "--kappa", "1"],
        vec!["exact", "--n", "8", "--tau", "0.3", "--tmin", "5", "--tmax", "1"],
        vec!["exact", "--n", "8", "--tau", "1.2"],
        vec!["mc", "--n", "8", "--tau", "0.3", "--trials", "1"],
        vec!["figure", "fig9"],
        vec!["bogus"],
    ] {
        let o = dsff(&args, None);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "usage");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn partial_failure_exit_code() {
    // |eta T|^2 overflows at the last grid point only
    let o = dsff(&["exact", "--n", "8", "--tau", "0.3", "--tmin", "1", "--tmax", "1e170", "--points", "3"], None);
    assert_eq!(o.status.code(), Some(3));
    let rows = records(&stdout(&o));
    assert_eq!(rows.iter().filter(|r| !r[14].is_empty()).count(), 1);
    assert!(!rows[2][14].is_empty());
    let o = dsff(&["exact", "--n", "8", "--tau", "0.3", "--tmin", "1e170", "--tmax", "1e171", "--points", "2"], None);
    assert_eq!(o.status.code(), Some(2));
}

fn figure(dir: &Path, args: &[&str]) -> (String, String) {
    let out = dir.join(format!("{}.csv", args[1]));
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_s]);
    let o = dsff(&full, None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let plot = std::fs::read_to_string(dir.join(format!("{}.plot.txt", args[1]))).unwrap();
    (csv, plot)
}

#[test]
fn figure_two_series_and_plot_description() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, plot) = figure(dir.path(), &["figure", "fig2"]);
    assert_eq!(body(&csv).lines().next().unwrap(), "figure,panel,series,role,x,y");
    let rows = records(&csv);
    let mut labels: Vec<String> = rows.iter().map(|r| r[2].to_string()).collect();
    labels.dedup();
    assert_eq!(labels, ["exact_N64", "limit_gamma_0", "limit_gamma_1/2"]);
    assert_eq!(rows.len(), 3 * 241);
    let m = manifest(&csv);
    assert_eq!(m["figure"]["id"], "fig2");
    assert_eq!(m["figure"]["n"], 64);
    assert_eq!(m["figure"]["tau"], 0.3);
    assert!(plot.starts_with("dsff-plot 1\nfigure fig2\ndata fig2.csv\n"));
    assert!(plot.contains("  loglog true\n"));
    assert!(plot.contains("  series limit_gamma_1/2 role=limit style=line\n"));
}

#[test]
fn figure_three_single_case_is_rescaled() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, plot) = figure(dir.path(), &["figure", "fig3", "--alpha", "0.6", "--kappa", "0.7", "--points", "31"]);
    let rows = records(&csv);
    assert_eq!(rows.len(), 62);
    assert!(plot.contains("m=0.6"));
    // small T_base sits on the linear part of the mixed ramp
    let (e, l): (f64, f64) = (rows[0][5].parse().unwrap(), rows[31][5].parse().unwrap());
    assert!((e / l - 1.0).abs() < 0.05, "{e} vs {l}");
}

#[test]
fn figure_four_has_four_panels() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, plot) = figure(dir.path(), &["figure", "fig4", "--points", "11"]);
    assert_eq!(plot.matches("\npanel ").count(), 4);
    assert_eq!(records(&csv).len(), 4 * 4 * 11);
}

#[test]
fn figure_flag_form_equals_positional_form() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let (a, _) = figure(d1.path(), &["figure", "fig4", "--points", "5"]);
    let out = d2.path().join("fig4.csv");
    let o = dsff(&["figure", "--figure", "fig4", "--points", "5", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    assert_eq!(body(&a), body(&std::fs::read_to_string(out).unwrap()));
}
