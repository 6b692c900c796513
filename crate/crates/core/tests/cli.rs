use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use codekit::bundle::{Bundle, Object};
use codekit::css::CssCode;
use codekit::flinalg::Mat;
use codekit::gf::Field;
use codekit::transversal::{rs_transversal, TransversalTriple};
use serde_json::Value;

fn codekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codekit"))
        .args(args)
        .env_remove("CODEKIT_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn build_rs(dir: &Path, q: u64, k: usize, l: usize) -> String {
    let out = p(dir, &format!("rs{q}_{k}_{l}.json"));
    let o = codekit(&[
        "build", "rs", "--q", &q.to_string(), "--k", &k.to_string(), "--l", &l.to_string(), "-o", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

fn build_q5(dir: &Path) -> String {
    let mf = p(dir, "mf5.json");
    let o = codekit(&["build", "mf", "rs", "--q", "5", "--n", "5", "--k", "2", "--lift", "-o", &mf]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let base = build_rs(dir, 25, 2, 8);
    let out = p(dir, "q5.json");
    let o = codekit(&["build", "diamond", "--mf", &mf, "--triple", &base, "--r", "1", "-o", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[[115,2,≥7]]_5"));
    out
}

fn desk_schedule() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schedules/desk-q2.json")
}

#[test]
fn build_rs_reports_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = codekit(&["build", "rs", "--q", "8", "--k", "1", "--l", "2", "-o", &p(dir.path(), "a.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[[7,1,≥2]]_8"));
    let o = codekit(&["distance", "--in", &p(dir.path(), "a.json")]);
    assert_eq!(stdout(&o).trim(), "exact 2");
}

#[test]
fn constraint_violation_exits_2_with_inequality() {
    let o = codekit(&["build", "rs", "--q", "4", "--k", "1", "--l", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("3(ℓ−1) < n violated"), "{}", stderr(&o));
    let o = codekit(&["build", "mf", "quantum", "--q", "8", "--k", "2", "--r", "5", "--l", "7", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m(ℓ−1) < n violated"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(codekit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(codekit(&["build", "rs", "--q", "5"]).status.code(), Some(2));
    let o = codekit(&["info", "--in", "/nonexistent/bundle.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(codekit(&["--help"]).status.code(), Some(0));
}

#[test]
fn q5_verify_info_distance() {
    let dir = tempfile::tempdir().unwrap();
    let q5 = build_q5(dir.path());
    let o = codekit(&["verify", "ccz", "--in", &q5]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("ccz PASS (deterministic"));
    let cert: Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{q5}.ccz.cert.json")).unwrap()).unwrap();
    assert_eq!(cert["passed"], Value::Bool(true));

    let o = codekit(&["verify", "u", "--in", &q5]);
    assert_eq!(o.status.code(), Some(0));
    let o = codekit(&["verify", "ccz", "--in", &q5, "--mode", "rand", "--samples", "300", "--seed", "9"]);
    assert!(stdout(&o).contains("randomized, 300 samples, seed 9"));

    let info = stdout(&codekit(&["info", "--in", &q5]));
    assert!(info.contains("[[115,2,≥7]]_5"));
    assert!(info.contains("γ = log(n/k)/log(d) ≈ 2.0822"), "{info}");
    assert!(info.contains("construction: \"diamond\""));
    let d = stdout(&codekit(&["distance", "--in", &q5]));
    assert_eq!(d.trim(), "certified ≥ 7 (concatenation product bound)");
}

#[test]
fn infeasible_deterministic_check_reports_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let q5 = build_q5(dir.path());
    let o = codekit(&["verify", "ccz", "--in", &q5, "--limit", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds the limit 10"), "{}", stderr(&o));
}

#[test]
fn corrupted_dec_fails_verify_mf() {
    let dir = tempfile::tempdir().unwrap();
    let mf = p(dir.path(), "mf.json");
    let o = codekit(&["build", "mf", "rs", "--q", "5", "--n", "5", "--k", "2", "-o", &mf]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(codekit(&["verify", "mf", "--in", &mf]).status.code(), Some(0));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&mf).unwrap()).unwrap();
    let rows = v["payload"]["dec"]["rows"].as_array_mut().unwrap();
    for row in rows.iter_mut() {
        let x = row[0].as_u64().unwrap();
        row[0] = Value::from((x + 1) % 5);
    }
    let bad = p(dir.path(), "bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = codekit(&["verify", "mf", "--in", &bad]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("mf FAIL"));
}

#[test]
fn shared_member_rm_fails() {
    let dir = tempfile::tempdir().unwrap();
    let mf = p(dir.path(), "sh.json");
    let o = codekit(&["build", "mf", "rm", "--q", "2", "--k", "2", "--share-member", "0", "-o", &mf]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(codekit(&["verify", "mf", "--in", &mf]).status.code(), Some(1));
}

#[test]
fn verify_u_requires_same_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = Field::prime(5).unwrap();
    let t = rs_transversal(&f, 1, 2).unwrap();
    let c = t.code(0);
    // Rescale coordinate 0 of the second and third codes by 2 and 3.
    let scale = |m: &Mat, s: u32| {
        let rows = m
            .row_iter()
            .map(|r| {
                let mut r = r.to_vec();
                r[0] = f.mul(r[0], s);
                r
            })
            .collect();
        Mat::from_rows_with_cols(&f, rows, m.cols()).unwrap()
    };
    let code = |s| CssCode::new(&scale(c.x_stab(), s), &scale(c.qz(), s), &scale(c.encz(), s)).unwrap();
    let mut b = t.b().to_vec();
    b[0] = f.div(b[0], f.mul(2, 3)).unwrap();
    let d = TransversalTriple::new([code(1), code(2), code(3)], b, None).unwrap();
    let path = dir.path().join("d.json");
    Bundle::new(Object::TransversalTriple(d), Value::Null).save(&path).unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(codekit(&["verify", "ccz", "--in", path]).status.code(), Some(0));
    let o = codekit(&["verify", "u", "--in", path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("same_code required"));
}

#[test]
fn linear_and_transversal_from_classical() {
    let dir = tempfile::tempdir().unwrap();
    let lin = p(dir.path(), "l.json");
    assert_eq!(
        codekit(&["build", "linear", "rs", "--q", "7", "--k", "2", "-o", &lin]).status.code(),
        Some(0)
    );
    let info = stdout(&codekit(&["info", "--in", &lin]));
    assert!(info.contains("classical [7,2,6]_7"), "{info}");
    let t = p(dir.path(), "t.json");
    let o = codekit(&["build", "transversal", "--classical", &lin, "--a-set", "0", "-o", &t]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[[6,1,≥2]]_7"));
    assert_eq!(codekit(&["verify", "ccz", "--in", &t]).status.code(), Some(0));

    let gen = p(dir.path(), "g.json");
    std::fs::write(&gen, "[[1,1,1,1],[0,1,2,3]]").unwrap();
    let m = p(dir.path(), "m.json");
    assert_eq!(
        codekit(&["build", "linear", "matrix", "--q", "5", "--gen", &gen, "-o", &m]).status.code(),
        Some(0)
    );
    assert!(stdout(&codekit(&["info", "--in", &m])).contains("classical [4,2,3]_5"));
}

#[test]
fn zero_dimension_distance_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let t = rs_transversal(&Field::prime(5).unwrap(), 1, 2).unwrap();
    let empty = Mat::empty(t.field(), 1);
    assert!(t.code(0).restrict(&empty).is_err());
    let c = t.code(0);
    let zero = CssCode::new(c.x_stab(), c.x_stab(), &Mat::empty(t.field(), c.n())).unwrap();
    assert_eq!(zero.k(), 0);
    let path = dir.path().join("z.json");
    Bundle::new(Object::CssCode(zero), Value::Null).save(&path).unwrap();
    let o = codekit(&["distance", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("zero code"));
}

#[test]
fn budget_env_falls_back_to_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let rs = build_rs(dir.path(), 5, 1, 2);
    let o = Command::new(env!("CARGO_BIN_EXE_codekit"))
        .args(["distance", "--in", &rs])
        .env("CODEKIT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "certified ≥ 2 (Reed-Solomon construction)");
    let o = codekit(&["distance", "--in", &rs, "--budget", "1"]);
    assert_eq!(stdout(&o).trim(), "certified ≥ 2 (Reed-Solomon construction)");
}

#[test]
fn pipeline_desk_schedule_and_b1() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "desk.json");
    let sched = desk_schedule();
    let o = codekit(&["build", "pipeline", "--schedule", sched.to_str().unwrap(), "-o", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[[57344,2,≥4]]_2"));
    let d = stdout(&codekit(&["distance", "--in", &out]));
    assert_eq!(d.trim(), "certified ≥ 4 (concatenation product bound)");
    let info = stdout(&codekit(&["info", "--in", &out]));
    for row in ["    1      2       rm      16", "    2      4       rm     256", " base     16       rs"] {
        assert!(info.contains(row), "{info}");
    }
    let o = codekit(&["verify", "ccz", "--in", &out, "--mode", "rand", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));

    let o = codekit(&["build", "pipeline", "--schedule", "b1", "--base-q", "2", "--depth", "2", "-o", &p(dir.path(), "b1.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[[114688,8,≥9]]_2"));
}

#[test]
fn stdout_bundle_round_trips() {
    let o = codekit(&["build", "rs", "--q", "7", "--k", "1", "--l", "2"]);
    let text = stdout(&o);
    let b = Bundle::from_json(&text).unwrap();
    assert_eq!(b.to_json().unwrap(), text);
    assert_eq!(b.provenance["construction"], "rs_transversal");
}
