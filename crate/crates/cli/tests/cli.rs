use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn ridgefp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ridgefp"))
        .args(args)
        .current_dir(tests_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn qtz_reaches_the_worked_solution() {
    let out = ridgefp(&["solve", "fixtures/worked.csv", "--method", "qtz", "--theta", "optimal", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["status"], "converged");
    // A = diag(1, 2), y = (1, 1), λ = 1/2, n = 2: w* = (1/2, 2/5), α* = y − Aᵀw* = (1/2, 1/5)
    let expected = [0.5, 0.4, 0.5, 0.2];
    let got: Vec<f64> = floats(&report["w"]).into_iter().chain(floats(&report["alpha"])).collect();
    for (g, e) in got.iter().zip(expected) {
        assert!((g - e).abs() < 1e-4, "{got:?}");
    }

    let tight = json(&ridgefp(&["solve", "fixtures/worked.csv", "--method", "qtz", "--tol", "1e-24"]));
    let got: Vec<f64> = floats(&tight["w"]).into_iter().chain(floats(&tight["alpha"])).collect();
    for (g, e) in got.iter().zip(expected) {
        assert!((g - e).abs() < 1e-10, "{got:?}");
    }
}

#[test]
fn unrelaxed_and_oversized_relaxation_diverge() {
    for theta in ["pure", "1.5"] {
        let out = ridgefp(&["solve", "fixtures/worked.csv", "--method", "pdfp1", "--theta", theta]);
        assert_eq!(out.status.code(), Some(3), "theta {theta}");
        assert_eq!(json(&out)["status"], "diverged");
    }
}

#[test]
fn iteration_limit_exits_with_two() {
    let out = ridgefp(&["solve", "fixtures/worked.csv", "--method", "pdfp2", "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_with_one() {
    for args in [
        vec!["solve", "fixtures/worked.csv", "--method", "bogus"],
        vec!["solve", "fixtures/worked.csv", "--theta", "fast"],
        vec!["solve"],
        vec!["solve", "fixtures/worked.csv", "--gen", "d=2,n=3"],
        vec!["frobnicate"],
        vec!["sweep-theta", "fixtures/worked.csv", "--method", "cg", "--out", "/dev/null"],
        vec!["solve", "fixtures/missing.csv"],
    ] {
        let out = ridgefp(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(ridgefp(&["--help"]).status.code(), Some(0));
}

#[test]
fn trace_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = ridgefp(&["solve", "fixtures/worked.csv", "--method", "nqtz", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(trace).unwrap();
    let iterations = json(&out)["iterations"].as_u64().unwrap() as usize;
    assert!(text.starts_with("k,gap,dist,step_residual,rate_estimate"));
    // header plus one row per iteration
    assert_eq!(text.lines().count(), iterations + 1);
}

fn spectrum_rows(theta: f64) -> (Vec<(String, f64, f64)>, Value) {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spectrum.csv");
    let out = ridgefp(&["spectrum", "fixtures/worked.csv", "--theta", &theta.to_string(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let rows = text
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    (rows, json(&out))
}

#[test]
fn spectrum_at_first_threshold_has_equal_moduli() {
    // σ₁ = 2, λn = 1
    let bar = 2.0 / (1.0 + 5.0_f64.sqrt());
    let (rows, summary) = spectrum_rows(bar);
    for label in ["M1", "M2", "G1", "G2", "G3"] {
        assert_eq!(rows.iter().filter(|r| r.0 == label).count(), 4, "{label}");
    }
    let bars: Vec<f64> = rows.iter().filter(|r| r.0 == "theta_bar").map(|r| r.1).collect();
    assert_eq!(bars.len(), 2);
    assert!((bars[0] - bar).abs() < 1e-15);
    assert!((bars[1] - 2.0 / (1.0 + 2.0_f64.sqrt())).abs() < 1e-15);
    for (_, re, im) in rows.iter().filter(|r| r.0 == "G3") {
        assert!((re.hypot(*im) - (1.0 - bar)).abs() < 1e-10);
    }
    assert_eq!(summary["dimension"], 4);
}

#[test]
fn spectrum_at_zero_relaxation_is_identity() {
    let (rows, _) = spectrum_rows(0.0);
    for (_, re, im) in rows.iter().filter(|r| r.0.starts_with('G')) {
        assert_eq!((*re, *im), (1.0, 0.0));
    }
}

#[test]
fn sweep_rates_bottom_out_near_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["pdfp1", "pdfp2", "qtz"] {
        let csv = dir.path().join(format!("{method}.csv"));
        let out = ridgefp(&["sweep-theta", "--gen", "d=4,n=30,seed=5", "--method", method, "--grid", "40", "--out", csv.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let summary = json(&out);
        let (upper, best) = (summary["admissible_upper"].as_f64().unwrap(), summary["theta_optimal"].as_f64().unwrap());
        let rows: Vec<(f64, f64, bool)> = std::fs::read_to_string(csv)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2] == "1")
            })
            .collect();
        assert_eq!(rows.len(), 40);
        let argmin = rows.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        // the rate is an asymmetric V, so the best grid point brackets the optimum
        let spacing = rows[1].0 - rows[0].0;
        assert!((argmin - best).abs() <= spacing * (1.0 + 1e-12), "{method}: {argmin} vs {best}");
        for &(theta, rate, converged) in &rows {
            if theta < upper {
                assert!(rate < 1.0 && converged, "{method} at {theta}");
            }
            if method == "qtz" && theta <= best {
                assert!((rate - (1.0 - theta)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn bench_reports_every_method_with_costs() {
    let out = ridgefp(&["bench", "--gen", "d=10,n=500,seed=1", "--tol", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    let iters = |name: &str| -> i64 {
        let r = reports.as_array().unwrap().iter().find(|r| r["method"] == name).unwrap();
        if let Some(cost) = r["cost_per_iter"].as_u64() {
            assert_eq!(r["cost_total"].as_u64().unwrap(), cost * r["iterations"].as_u64().unwrap());
        }
        r["iterations"].as_i64().unwrap()
    };
    assert_eq!(reports.as_array().unwrap().len(), 7);
    assert!(iters("qtz") < iters("pdfp1") && iters("pdfp1") < iters("pdfp2"));
    assert!((iters("qtz") - iters("nqtz")).abs() <= 1);
    assert!((iters("mqtz") - iters("pdfp1")).abs() <= 1);
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("p{i}.csv"))).collect();
    for path in &paths {
        let out = ridgefp(&["gen", "--d", "6", "--n", "40", "--m", "2", "--seed", "9", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    let solved = ridgefp(&["solve", paths[0].to_str().unwrap(), "--method", "cg"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(floats(&json(&solved)["alpha"]).len(), 80);
}
