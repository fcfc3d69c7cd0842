use std::fs;

use kerr_cat::cli;
use kerr_cat::experiment::*;
use kerr_cat::kerr::Oracle;
use kerr_cat::Error;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<String> = std::iter::once("kerr-cat").chain(args.iter().copied()).map(String::from).collect();
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv_body(text: &str) -> Vec<Vec<f64>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect()).collect()
}

#[test]
fn manifest_round_trip_and_hash() {
    let mut m = RunManifest::new("sweep-epsilon");
    m.set("n", [4.0, 16.0]).unwrap();
    m.seeds.push(11);
    m.add_truncation(16.0, 60, 1e-12);
    m.tolerances.insert("tail_tol".into(), 1e-12);
    let json = m.to_json().unwrap();
    let back = RunManifest::from_json(&json).unwrap();
    assert_eq!(back.to_json().unwrap(), json);
    let mut later = back.clone();
    later.wall_clock_unix += 1000;
    assert_eq!(later.content_hash().unwrap(), m.content_hash().unwrap());
    later.seeds.push(1);
    assert_ne!(later.content_hash().unwrap(), m.content_hash().unwrap());
    assert!(matches!(RunManifest::from_json("{"), Err(Error::Json(_))));
}

#[test]
fn records_validate() {
    let good = SweepRecord {
        n: 4.0,
        alpha: 2.0,
        sigma: 0.01,
        k: 1,
        epsilon: 0.1,
        witness: Some(1.64),
        dim: 40,
        tail_tol: 1e-12,
        seed: None,
        oracle_used: Oracle::ClosedForm,
    };
    good.validate().unwrap();
    assert!(SweepRecord { epsilon: 0.7, ..good.clone() }.validate().is_err());
    assert!(SweepRecord { alpha: 3.0, ..good.clone() }.validate().is_err());
    assert!(SweepRecord { sigma: -1.0, ..good }.validate().is_err());
}

#[test]
fn seeds_are_distinct_and_stable() {
    let a: Vec<u64> = (0..64).map(|i| derive_seed(7, i)).collect();
    let b: Vec<u64> = (0..64).map(|i| derive_seed(7, i)).collect();
    assert_eq!(a, b);
    let mut sorted = a.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), a.len());
}

#[test]
fn log_grids() {
    let g = log_grid(1e-4, 1.0, 5).unwrap();
    assert_eq!(g.len(), 5);
    assert!((g[1] - 1e-3).abs() < 1e-15 && (g[4] - 1.0).abs() < 1e-15);
    let d = log_grid_per_decade(1e-4, 1.0, 30).unwrap();
    assert_eq!(d.len(), 121);
    assert!(log_grid(1.0, 0.1, 3).is_err());
}

#[test]
fn fig5a_records_follow_grid_order() {
    let params = FigureParams { sigma_points: Some(9), n_list: Some(vec![4.0, 16.0]), ..FigureParams::default() };
    let data = figure_dataset(FigureId::Fig5a, &params).unwrap();
    let t = &data.tables[0];
    let n = t.column("n").unwrap();
    let eps = t.column("epsilon").unwrap();
    assert_eq!(n.len(), 18);
    assert!(n[..9].iter().all(|&v| v == 4.0) && n[9..].iter().all(|&v| v == 16.0));
    for row in eps.chunks(9) {
        assert!(row.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
    let inset = &data.tables[1];
    let s = inset.column("sigma_star").unwrap();
    assert!(s[1] < s[0]);
    assert!(data.manifest.truncations.len() >= 2);
}

#[test]
fn fig5b_witness_matches_epsilon_per_row() {
    let params = FigureParams { sigma_points: Some(7), n_list: Some(vec![4.0, 16.0]), ..FigureParams::default() };
    let data = figure_dataset(FigureId::Fig5b, &params).unwrap();
    let t = &data.tables[0];
    let w = t.column("witness").unwrap();
    let from_eps = t.column("witness_from_epsilon").unwrap();
    for (a, b) in w.iter().zip(&from_eps) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn half_saturation_ordering() {
    let cfg = SweepConfig::default();
    let s: Vec<f64> =
        [4.0, 16.0, 64.0].iter().map(|&n| half_saturation(n, 1, DEFAULT_TARGET, DEFAULT_TOL, &cfg).unwrap().sigma_star).collect();
    assert!(s[0] > s[1] && s[1] > s[2]);
    for n in [4.0, 16.0] {
        let k1 = half_saturation(n, 1, DEFAULT_TARGET, DEFAULT_TOL, &cfg).unwrap();
        let k2 = half_saturation(n, 2, DEFAULT_TARGET, DEFAULT_TOL, &cfg).unwrap();
        assert!(k2.sigma_star < k1.sigma_star);
    }
}

#[test]
fn bisection_on_synthetic_curve() {
    // eps = 1/2 (1 - exp(-s^2 / c)) crosses 1/4 at s = sqrt(c ln 2)
    let c = 3e-4;
    let f = |s: f64| Ok(0.5 * (1.0 - (-s * s / c).exp()));
    let h = bisect_half_saturation(f, 1e-6, 0.25, 1e-10).unwrap();
    assert!((h.sigma_star - (c * 2f64.ln()).sqrt()).abs() < 1e-9);
    let flat = |_s: f64| Ok(0.1);
    assert!(matches!(bisect_half_saturation(flat, 1e-3, 0.25, 1e-4), Err(Error::Search(_))));
    assert!(bisect_half_saturation(f, 1e-3, 0.6, 1e-4).is_err());
}

#[test]
fn power_law_fit() {
    let x = [4.0, 16.0, 64.0];
    let y: Vec<f64> = x.iter().map(|v: &f64| 0.7 * v.powf(-3.0)).collect();
    let (slope, intercept) = fit_power_law(&x, &y).unwrap();
    assert!((slope + 3.0).abs() < 1e-12 && (intercept - 0.7f64.ln()).abs() < 1e-12);
    assert!(matches!(fit_power_law(&x[..2], &y[..2]), Err(Error::Fit(_))));
    assert!(matches!(fit_power_law(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]), Err(Error::Fit(_))));
}

#[test]
fn figure_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let (code, out, err) = run(&["figure", "fig5a", "--seed", "7", "--sigma-points", "6", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("fig5a.csv"));
    }
    for name in ["fig5a.csv", "fig5a_inset.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let text = fs::read_to_string(a.path().join("fig5a.csv")).unwrap();
    let manifest = RunManifest::from_json(&fs::read_to_string(a.path().join("fig5a_manifest.json")).unwrap()).unwrap();
    assert!(text.contains(&format!("# manifest_sha256: {}", manifest.content_hash().unwrap())));
    assert_eq!(manifest.seeds, vec![7]);
}

#[test]
fn cli_exit_codes() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["figure", "fig9"]).0, 2);
    assert_eq!(run(&["sweep-epsilon", "--bogus"]).0, 2);
    assert_eq!(run(&["sweep-epsilon", "--sigma-min", "-1"]).0, 2);
    assert_eq!(run(&["sweep-epsilon", "--alpha", "2", "--n", "4"]).0, 2);
    // alpha = 1 is below the qubit threshold
    assert_eq!(run(&["half-saturation", "--alpha", "1"]).0, 2);
    assert_eq!(run(&["sweep-epsilon", "--config", "/nonexistent/x.toml"]).0, 1);
}

#[test]
fn cli_half_saturation_table() {
    let (code, out, err) = run(&["half-saturation", "--n", "4,16"]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_body(&out);
    assert_eq!(rows.len(), 2);
    assert!((rows[0][2] - 0.180587).abs() < 1e-5, "{out}");
    assert!((rows[0][3] - 0.25).abs() <= 1e-4);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "alpha = [2]\nk = 2\nsigma_points = 4\nsigma_max = 0.01\n").unwrap();
    let (code, out, err) = run(&["sweep-epsilon", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_body(&out);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[0] == 4.0 && r[3] == 2.0));
    let (code, out, _) = run(&["sweep-epsilon", "--config", cfg.to_str().unwrap(), "--k", "1", "--n", "16"]);
    assert_eq!(code, 0);
    let rows = csv_body(&out);
    assert!(rows.iter().all(|r| r[0] == 16.0 && r[3] == 1.0));
    let args = cli::config_to_args("alpha = [2, 4]\noperational_z = true\nk = 1\n").unwrap();
    let flat: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    assert_eq!(flat, ["--alpha", "2,4", "--k", "1", "--operational-z"]);
}

#[test]
fn json_output() {
    let (code, out, err) = run(&["distinguish-p", "--alpha", "2", "--multiples", "0.1,1", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.to_string().contains("tvd"));
}
