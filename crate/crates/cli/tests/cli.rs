use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cql_core::grid::{store_grid, CartesianGrid, Domain, Geometry, GridFunction, PotentialSpec};

fn cql(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cql"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

/// Rows of a CSV file below its header, comment lines skipped.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn bubble_values_agree_across_scales() {
    let dir = tempfile::tempdir().unwrap();
    let o = cql(dir.path(), &["bubble-verify", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&dir.path().join("bubble_verify_n5.csv"));
    assert_eq!(r.len(), 3);
    let first = num(&r[0][1]);
    for row in &r {
        for v in [num(&row[1]), num(&row[2])] {
            assert!((v - first).abs() <= 1e-9 * first);
        }
    }

    let o = cql(dir.path(), &["bubble-verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&dir.path().join("bubble_verify_n4.csv"));
    for row in &r {
        let target = num(&row[3]);
        assert!((num(&row[1]) - target).abs() <= 1e-9 * target);
    }
}

#[test]
fn quadrature_tolerance_flag() {
    let loose = tempfile::tempdir().unwrap();
    let tight = tempfile::tempdir().unwrap();
    for (dir, tol) in [(&loose, "1e-4"), (&tight, "1e-10")] {
        let o = cql(dir.path(), &["--quad-tol", tol, "bubble-verify", "--n", "5", "--check-tol", "1"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = rows(&loose.path().join("bubble_verify_n5.csv"));
    let b = rows(&tight.path().join("bubble_verify_n5.csv"));
    for (x, y) in a.iter().zip(&b) {
        let (x, y) = (num(&x[1]), num(&y[1]));
        assert!((x - y).abs() < 1e-4 * y);
    }
}

#[test]
fn bad_dimension_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cql(dir.path(), &["bubble-verify", "--n", "2"]).status.code(), Some(2));
    assert_eq!(cql(dir.path(), &["deficit", "--n", "3", "--lambda", "-1"]).status.code(), Some(2));
}

fn deficit_summary(dir: &Path, n: &str, lambda: &str) -> Vec<String> {
    let o = cql(dir, &["deficit", "--n", n, "--lambda", lambda]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    rows(&dir.join(format!("deficit_n{n}_lambda{lambda}_mu1_summary.csv"))).remove(0)
}

#[test]
fn deficit_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let s = deficit_summary(dir.path(), "5", "-1");
    assert!((num(&s[3]) - 2.0).abs() <= 0.05);
    assert!(num(&s[4]) < 0.0);

    let s = deficit_summary(dir.path(), "5", "0");
    assert!((num(&s[3]) - 3.0).abs() <= 0.1);

    let s = deficit_summary(dir.path(), "4", "-1");
    assert_eq!(s[8], "log");
    assert!(num(&s[7]) >= 2.0);
    assert!(num(&s[4]) < 0.0);
    let bracket = rows(&dir.path().join("deficit_n4_lambda-1_mu1_bracket.csv"));
    assert!(bracket.windows(2).all(|w| num(&w[1][1]) > num(&w[0][1])));
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn non_coercive_scenario_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "deep.cfg",
        "[domain]\ndim = 3\nnodes = 81\n[potential]\nkind = constant\nlambda = -50\n",
    );
    let o = cql(dir.path(), &["minimize", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not coercive"));
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", "[domain]\ndim = 5\nnodes = 101\nnode = 3\n");
    let o = cql(dir.path(), &["minimize", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    let o = cql(dir.path(), &["minimize", "does/not/exist.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seeded_reports_are_bitwise_identical() {
    let work = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        work.path(),
        "small.cfg",
        "[domain]\ndim = 5\nnodes = 201\n[potential]\nkind = well\ndepth = -4\nradius = 0.5\n[solver]\ninit = ground\nmax_iter = 100\n",
    );
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let o = cql(dir.path(), &["--seed", "11", "--jobs", jobs, "minimize", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push((
            std::fs::read(dir.path().join("small.csv")).unwrap(),
            std::fs::read(dir.path().join("small_summary.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn constant_grid_norms_match_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let g = CartesianGrid::new(vec![4, 4, 4], 0.5, vec![0.0; 3], None).unwrap();
    let f = GridFunction::new(Domain::new(Geometry::Cartesian(g)), vec![3.0; 64]).unwrap();
    let path = dir.path().join("const.grid");
    store_grid(&path, &f).unwrap();
    let o = cql(dir.path(), &["lorentz", path.to_str().unwrap(), "--p", "2,3", "--d", "1,2,inf"]);
    assert_eq!(o.status.code(), Some(0));
    let measure: f64 = 8.0;
    for row in rows(&dir.path().join("lorentz_const.csv")) {
        let p = num(&row[0]);
        // c·(p/d)^{1/d}·|Ω|^{1/p}, and c·|Ω|^{1/p} for d = ∞
        let expected = match row[1].as_str() {
            "inf" => 3.0 * measure.powf(1.0 / p),
            d => {
                let d = num(d);
                3.0 * (p / d).powf(1.0 / d) * measure.powf(1.0 / p)
            }
        };
        let got = num(&row[2]);
        assert!((got - expected).abs() <= 1e-12 * expected, "{row:?} vs {expected}");
    }
}

#[test]
fn split_reports() {
    let dir = tempfile::tempdir().unwrap();
    let dom = Domain::radial_ball(5, 1.0, 200).unwrap();
    let well = PotentialSpec::well(0.5, -4.0, 5).sample_grid(&dom).unwrap();
    let path = dir.path().join("well.grid");
    store_grid(&path, &well).unwrap();
    let o = cql(dir.path(), &["split", path.to_str().unwrap(), "--p", "2.5", "--d", "1", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&dir.path().join("split_well.csv"));
    assert_eq!(r[0][6], "0");
    assert_eq!(num(&r[0][4]), 0.0);

    let hardy = scenario("hardy_sample_n5.grid");
    let h = hardy.to_str().unwrap();
    let o = cql(dir.path(), &["split", h, "--p", "2.5", "--d", "1", "--tol", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(num(&rows(&dir.path().join("split_hardy_sample_n5.csv"))[0][4]) < 10.0);
    let o = cql(dir.path(), &["split", h, "--p", "2.5", "--d", "inf", "--tol", "10"]);
    assert_eq!(o.status.code(), Some(2));
}
