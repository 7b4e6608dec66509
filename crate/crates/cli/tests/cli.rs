use std::process::Command;

use bathflow_core::analytics::{current_constants, TransportParams};
use bathflow_core::reservoirs::{ReservoirSpec, Statistics, SystemSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bathflow"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and rows, metadata dropped.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn trace_starts_at_initial_occupation_and_tracks_closed_form() {
    let (h, rows) = table(&run_ok(&["trace", "--points", "101"]));
    assert_eq!(rows.len(), 101);
    let (a, n) = (col(&h, "n_analytic"), col(&h, "n_numeric"));
    assert_eq!(rows[0][col(&h, "t_s")], 0.0);
    assert_eq!(rows[0][a], 1.0);
    assert_eq!(rows[0][n], 1.0);
    let worst = rows.iter().map(|r| (r[a] - r[n]).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "max deviation {worst:e}");
}

#[test]
fn trace_single_bath_limit_relaxes_to_emitter_occupation() {
    let g = 1e9;
    let t_max = format!("{}", 20.0 / g);
    let csv = run_ok(&["trace", "--gamma-c", "0", "--t-max", &t_max, "--n0", "0"]);
    let nbar_e: f64 = csv
        .lines()
        .next()
        .unwrap()
        .split(' ')
        .find_map(|kv| kv.strip_prefix("nbar_e="))
        .unwrap()
        .parse()
        .unwrap();
    let (h, rows) = table(&csv);
    let last = rows.last().unwrap()[col(&h, "n_numeric")];
    assert!((last - nbar_e).abs() <= 1e-6, "{last} vs {nbar_e}");
}

#[test]
fn bosonic_trace_runs() {
    // n̄ ≈ 0.9 and 0.3, so 30 levels hold the state
    let (h, rows) = table(&run_ok(&[
        "trace", "--stats", "bose", "--temp-e", "10", "--temp-c", "5", "--n0", "2", "--n-max",
        "30", "--points", "21",
    ]));
    let (a, n) = (col(&h, "n_analytic"), col(&h, "n_numeric"));
    for r in &rows {
        assert!((r[a] - r[n]).abs() <= 1e-6 * r[a].max(1.0));
    }
}

#[test]
fn bosonic_trace_at_room_temperature_reports_truncation() {
    // n̄ ≈ 40 cannot fit in 41 levels
    let out = bin()
        .args(["trace", "--stats", "bose", "--n0", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_max"));
}

#[test]
fn transport_defaults() {
    let csv = run_ok(&["transport"]);
    assert!(csv.contains("# carnot_crossing_x_c=2.905038303945"));
    let (h, rows) = table(&csv);
    assert_eq!(rows.len(), 90);
    let (x, c, f, b) = (
        col(&h, "x_c"),
        col(&h, "eta_carnot"),
        col(&h, "eta_fermi"),
        col(&h, "eta_bose"),
    );
    assert!(rows.iter().all(|r| (r[c] - 0.5).abs() < 1e-15));
    // listed by increasing collector temperature
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    let at = |target: f64| {
        rows.iter()
            .min_by(|p, q| {
                (p[x] / target)
                    .ln()
                    .abs()
                    .total_cmp(&(q[x] / target).ln().abs())
            })
            .unwrap()
    };
    let ten = at(10.0);
    assert!((ten[x] - 10.0).abs() < 1e-9);
    assert!((ten[f] - 0.19865).abs() < 1e-5, "{}", ten[f]);
    assert!((ten[b] - 0.99331).abs() < 1e-5, "{}", ten[b]);
    let small = at(1e-3);
    assert!((small[f] - 0.5).abs() < 1e-3 && (small[b] - 0.5).abs() < 1e-3);
}

#[test]
fn transport_diagnostic_columns() {
    let (h, rows) = table(&run_ok(&["transport", "--points", "4", "--diagnostics"]));
    assert_eq!(h.len(), 10);
    assert!(rows
        .iter()
        .all(|r| r.len() == 10 && r.iter().all(|v| v.is_finite())));
}

#[test]
fn spectrum_is_even_and_matches_zero_frequency_value() {
    let csv = run_ok(&[
        "spectrum",
        "--gamma-e",
        "2e9",
        "--gamma-c",
        "5e8",
        "--temp-c",
        "150",
        "--points",
        "101",
    ]);
    let (h, rows) = table(&csv);
    let (w, s) = (col(&h, "omega_rad_s"), col(&h, "S_continuous"));
    let n = rows.len();
    for k in 0..n {
        assert_eq!(rows[k][w], -rows[n - 1 - k][w]);
        assert!((rows[k][s] - rows[n - 1 - k][s]).abs() <= 1e-12 * rows[n / 2][s].abs());
    }
    let p = TransportParams::from_reservoirs(
        &SystemSpec::new(1e12, Statistics::Fermionic, 1.0).unwrap(),
        &ReservoirSpec::new(300.0, 2e9, Statistics::Fermionic).unwrap(),
        &ReservoirSpec::new(150.0, 5e8, Statistics::Fermionic).unwrap(),
    )
    .unwrap();
    let c = current_constants(&p);
    let beta = 2.5e9;
    let expect = 2.0 * (c.i0 - c.is) * (c.i0 + 2.0 * c.is) / beta;
    let got = rows[n / 2][s];
    assert_eq!(rows[n / 2][w], 0.0);
    assert!(
        (got - expect).abs() <= 1e-12 * expect.abs(),
        "{got:e} vs {expect:e}"
    );
    let dc: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("# dc_weight="))
        .and_then(|r| r.split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((dc - c.is * c.is).abs() <= 1e-12 * dc);
}

#[test]
fn spectrum_default_has_four_collector_temperatures() {
    let csv = run_ok(&["spectrum", "--points", "11"]);
    assert_eq!(
        csv.lines()
            .filter(|l| l.starts_with("# dc_weight="))
            .count(),
        4
    );
    assert_eq!(table(&csv).1.len(), 44);
}

#[test]
fn grassmann_verify_reports_no_failures() {
    let out = run_ok(&["grassmann-verify"]);
    assert!(!out.lines().any(|l| l.starts_with("FAIL")));
    assert!(out.contains("PASS  ∫d²ξ |ξ⟩⟨ξ| = 1"));
    assert!(out.contains("summary: 0 engine failure(s)"));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["transport", "--ratio", "1"],
        vec!["trace", "--gamma-e", "-1"],
        vec!["trace", "--n0", "1.5"],
        vec!["spectrum", "--svg"],
        vec!["trace", "--no-such-flag"],
        vec!["transport", "--use-shifted-omega"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["trace"], vec!["transport"], vec!["spectrum"]] {
        assert_eq!(run_ok(&args), run_ok(&args), "{args:?}");
    }
}

#[test]
fn config_file_and_out_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# sweep\nratio = 3\npoints = 5\n").unwrap();
    let out = dir.path().join("t.csv");
    let stdout = run_ok(&[
        "transport",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "7",
        "--out",
        out.to_str().unwrap(),
        "--svg",
    ]);
    assert!(stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("ratio=3.0000000000000000e0"));
    assert_eq!(table(&csv).1.len(), 7);
    let svg = std::fs::read_to_string(dir.path().join("t.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = bathflow_cli::run(
        ["bathflow", "transport", "--points", "5"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        run_ok(&["transport", "--points", "5"])
    );
}
