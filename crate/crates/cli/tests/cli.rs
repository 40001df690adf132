use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limitshape")).args(args).arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect())
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn verify_commute_passes() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "commute", "--n", "6", "--seed", "5"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&d.path().join("verify.json"));
    assert_eq!(r["pass"], true);
    assert_eq!(r["seed"], 5);
    assert_eq!(r["config"]["n"], 6);
    let c = check(&r, "commute.ff_family");
    assert!(c["measured"].as_f64().unwrap() <= 1e-10);
    assert_eq!(c["tolerance"], 1e-10);
    for key in ["name", "measured", "tolerance", "pass", "inputs", "criterion"] {
        assert!(c.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_oracle_and_poisson() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["verify", "--suite", "oracle", "--max-cells", "9"], d.path())), 0);
    assert!(check(&json(&d.path().join("verify.json")), "oracle.cylinder")["measured"].as_f64().unwrap() <= 1e-12);
    assert_eq!(code(&run(&["verify", "--suite", "poisson", "--u", "0.5235", "--v", "1.0472"], d.path())), 0);
    assert!(check(&json(&d.path().join("verify.json")), "poisson.ff_residual")["measured"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn verify_failure_exits_two_with_inputs() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "ybe", "--tol", "1e-300"], d.path());
    assert_eq!(code(&o), 2);
    let r = json(&d.path().join("verify.json"));
    assert_eq!(r["pass"], false);
    let c = check(&r, "ybe.A1");
    assert_eq!(c["pass"], false);
    assert!(c["inputs"].as_str().unwrap().contains("u="));
    // lower-bound controls keep their thresholds
    assert_eq!(check(&r, "ybe.mismatched_gamma")["pass"], true);
}

#[test]
fn configuration_errors_exit_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["verify", "--suite", "nope"], d.path())), 1);
    assert_eq!(code(&run(&["verify", "--bogus"], d.path())), 1);
    assert_eq!(code(&run(&["tension", "--s", "0.9", "--t", "0.5"], d.path())), 1);
    assert_eq!(code(&run(&["solve", "--nx", "2"], d.path())), 1);
    let cfg = d.path().join("bad.cfg");
    fs::write(&cfg, "unknown = 3\n").unwrap();
    assert_eq!(code(&run(&["sixv", "--config", cfg.to_str().unwrap()], d.path())), 1);
}

#[test]
fn flags_override_config_file() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    fs::write(&cfg, "# six-vertex run\ncols = 2\nrows = 2\nu = 0.4\n").unwrap();
    let o = run(&["sixv", "--config", cfg.to_str().unwrap(), "--rows", "3"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&d.path().join("sixv.json"));
    assert_eq!(r["config"]["cols"], 2);
    assert_eq!(r["config"]["rows"], 3);
    assert_eq!(r["config"]["u"], 0.4);
    assert!(r["results"]["delta"].as_f64().unwrap().abs() < 1e-15);
}

#[test]
fn tension_tables() {
    let d = tempfile::tempdir().unwrap();
    let third = "0.3333333333333333";
    assert_eq!(code(&run(&["tension", "--variant", "hex", "--s", third, "--t", third], d.path())), 0);
    let (header, rows) = csv(&d.path().join("tension.csv"));
    assert_eq!(header, ["s", "t", "sigma", "dsds", "dsdt", "detHess"]);
    assert!(rows[0][3].abs() < 1e-15);

    assert_eq!(code(&run(&["tension", "--variant", "ff", "--u", "0.5235987755982988,0.7853981633974483,1.0471975511965976"], d.path())), 0);
    let (header, rows) = csv(&d.path().join("tension.csv"));
    assert_eq!(header[0], "u");
    let per_u = rows.len() / 3;
    for k in 0..per_u {
        for j in 1..3 {
            assert!((rows[k][6] - rows[k + j * per_u][6]).abs() <= 1e-8);
        }
    }
}

#[test]
fn outputs_are_deterministic_and_atomic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(code(&run(&["tension", "--variant", "numeric", "--s", "0.2,0.3", "--t", "0.3"], d.path())), 0);
        assert_eq!(code(&run(&["flow", "--ny", "16", "--samples", "4"], d.path())), 0);
    }
    for f in ["tension.csv", "tension.json", "trajectory.csv", "conservation.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    assert!(fs::read_dir(a.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().contains(".tmp")));
}

#[test]
fn solve_constant_boundary_is_analytic() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--t0", "0.3", "--v", "0.1", "--nx", "9", "--ny", "8"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let log = fs::read_to_string(d.path().join("solve.log")).unwrap();
    assert!(log.lines().any(|l| l.starts_with("analytic-match")), "{log}");
    let (header, rows) = csv(&d.path().join("height.csv"));
    assert_eq!(header, ["x", "y", "h"]);
    assert_eq!(rows.len(), 72);
    assert_eq!(csv(&d.path().join("residual.csv")).1.len(), 56);
}

#[test]
fn solve_mesh_study_and_facets() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--mesh-study"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&d.path().join("solve.json"));
    assert!(r["results"]["mesh_study"]["order"].as_f64().unwrap() >= 1.8);
    assert!(csv(&d.path().join("facets.csv")).1.iter().all(|row| row[2] == 0.0));
}

#[test]
fn solve_from_profiles_and_non_convergence() {
    let d = tempfile::tempdir().unwrap();
    let (l, r) = (d.path().join("left.csv"), d.path().join("right.csv"));
    let profile = |f: fn(f64) -> f64| {
        let mut s = String::from("y,value\n");
        for j in 0..16 {
            let y = j as f64 / 16.0;
            s += &format!("{y},{}\n", 0.5 + 0.03 * f(2.0 * std::f64::consts::PI * y));
        }
        s
    };
    fs::write(&l, profile(f64::sin)).unwrap();
    fs::write(&r, profile(f64::cos)).unwrap();
    let args = ["solve", "--variant", "ff", "--left", l.to_str().unwrap(), "--right", r.to_str().unwrap(), "--nx", "17", "--ny", "16"];
    assert_eq!(code(&run(&args, d.path())), 0);
    let mut capped = args.to_vec();
    capped.extend(["--max-newton", "1"]);
    assert_eq!(code(&run(&capped, d.path())), 3);
    assert!(d.path().join("height.csv").exists());
    assert_eq!(json(&d.path().join("solve.json"))["results"]["converged"], false);
}

#[test]
fn flow_conserves_moments() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["flow"], d.path())), 0);
    let r = json(&d.path().join("conservation.json"));
    for x in r["results"]["max_relative_drift"].as_array().unwrap() {
        assert!(x.as_f64().unwrap() <= 1e-6);
    }
    let (header, rows) = csv(&d.path().join("trajectory.csv"));
    assert_eq!(header, ["x", "y", "p", "t", "re_l", "im_l"]);
    assert_eq!(rows.len(), 26 * 32);
    assert_eq!(code(&run(&["flow", "--method", "hamilton", "--samples", "5"], d.path())), 0);
    assert_eq!(json(&d.path().join("conservation.json"))["pass"], true);
}

#[test]
fn flow_constant_profile_has_zero_drift() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("t.csv");
    fs::write(&p, (0..8).fold(String::from("y,t\n"), |s, j| s + &format!("{},0.4\n", j as f64 / 8.0))).unwrap();
    assert_eq!(code(&run(&["flow", "--profile", p.to_str().unwrap(), "--p0", "0.2"], d.path())), 0);
    let r = json(&d.path().join("conservation.json"));
    assert!(r["results"]["max_relative_drift"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() == 0.0));
}

#[test]
fn flow_shock_exits_four_with_report() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["flow", "--amplitude", "0.05", "--horizon", "1"], d.path())), 4);
    let r = json(&d.path().join("conservation.json"));
    let x = r["results"]["shock"]["x"].as_f64().unwrap();
    assert!(x > 0.0 && x < 1.0);
    assert!(r["results"]["reached"].as_f64().unwrap() < x);
    assert!(!r["results"]["series"].as_array().unwrap().is_empty());
}

#[test]
fn flow_matches_variational() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["flow", "--compare-variational", "--samples", "2"], d.path())), 0);
    let r = json(&d.path().join("conservation.json"));
    assert!(check(&r, "compare_variational")["measured"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn dimer_curves_and_matchings() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["dimer", "--cell", "hex"], d.path())), 0);
    assert_eq!(json(&d.path().join("dimer.json"))["results"]["curve"].as_array().unwrap().len(), 3);
    assert_eq!(code(&run(&["dimer", "--cell", "city", "--u", "0.7"], d.path())), 0);
    let g = d.path().join("edge.txt");
    fs::write(&g, "b0 b 0 0 w0:2.5\nw0 w 1 0\n").unwrap();
    assert_eq!(code(&run(&["dimer", "--graph", g.to_str().unwrap()], d.path())), 0);
    let r = json(&d.path().join("dimer.json"));
    assert_eq!(r["results"]["matchings"], 1);
    assert_eq!(r["results"]["partition_function"], 2.5);
}

#[test]
fn sixv_matches_enumeration() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["sixv", "--cols", "2", "--rows", "3", "--a", "1.2", "--b", "0.7", "--c", "0.9", "--h", "0.1"], d.path())), 0);
    assert_eq!(check(&json(&d.path().join("sixv.json")), "torus_vs_enumeration")["pass"], true);
    let (header, rows) = csv(&d.path().join("cylinder.csv"));
    assert_eq!(header, ["eta1", "eta2", "Z"]);
    assert_eq!(rows.len(), 20);
}
