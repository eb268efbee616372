use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use symsep::io::matrix_to_json;
use symsep::ops::{c, outer, pauli, ComplexMatrix, ComplexVector, HermitianOperator};

struct Run {
    out: PathBuf,
    output: Output,
    _dir: tempfile::TempDir,
}

impl Run {
    fn code(&self) -> i32 {
        self.output.status.code().expect("exited normally")
    }

    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.output.stderr).into_owned()
    }

    fn csv(&self, name: &str) -> Vec<csv::StringRecord> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(self.out.join(name)).unwrap();
        r.records().map(Result::unwrap).collect()
    }

    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&std::fs::read_to_string(self.out.join(name)).unwrap()).unwrap()
    }
}

fn run(cmd: &str, input: &Value, extra: &[&str]) -> Run {
    run_text(cmd, &input.to_string(), extra)
}

fn run_text(cmd: &str, input: &str, extra: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let input_path = dir.path().join("input.json");
    std::fs::write(&input_path, input).unwrap();
    let out = dir.path().join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_symsep"))
        .arg(cmd)
        .arg("--input")
        .arg(&input_path)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    Run { out, output, _dir: dir }
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn named(name: &str, a: &HermitianOperator) -> Value {
    json!({ "name": name, "matrix": matrix_to_json(a.matrix()) })
}

fn bloch_input() -> Value {
    json!({ "n": 2, "k": 1, "observables": [named("x", &pauli::x()), named("z", &pauli::z())] })
}

fn triangle_input() -> Value {
    let zz = pauli::z().kron(&pauli::z());
    let xx = pauli::x().kron(&pauli::x());
    json!({ "n": 2, "k": 2, "observables": [named("zz", &zz), named("xx", &xx)] })
}

fn lmg_input() -> Value {
    let zz = pauli::z().kron(&pauli::z());
    let xsum = &pauli::x().kron(&pauli::id()) + &pauli::id().kron(&pauli::x());
    json!({ "n": 2, "k": 2, "terms": [named("zz", &zz), named("x", &xsum)], "x": [-1.0, -0.5] })
}

fn zz_input() -> Value {
    json!({ "n": 2, "k": 2, "terms": [named("zz", &pauli::z().kron(&pauli::z()))], "x": [1.0] })
}

fn body_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn range_disk_has_unit_support_and_no_flats() {
    let r = run("range", &bloch_input(), &["--samples", "500", "--restarts", "8"]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let support = r.csv("theta_support.csv");
    assert_eq!(support.len(), 64);
    for row in &support {
        assert!((f(&row[3]) + 1.0).abs() < 1e-9);
    }
    assert_eq!(r.csv("pi_sym_points.csv").len(), 500);
    assert!(r.csv("flat_segments.csv").is_empty());
}

#[test]
fn range_triangle_has_one_flat_near_antidiagonal() {
    let r = run("range", &triangle_input(), &["--samples", "500", "--restarts", "8"]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let rows = r.csv("flat_segments.csv");
    let near: Vec<_> = rows
        .iter()
        .filter(|row| {
            let (a, b) = (f(&row[0]), f(&row[1]));
            a <= 1.25 * PI + 0.15 && b >= 1.25 * PI - 0.15
        })
        .collect();
    assert_eq!(near.len(), 1);
    let ends = [(f(&near[0][2]), f(&near[0][3])), (f(&near[0][4]), f(&near[0][5]))];
    let mut ends = ends.to_vec();
    ends.sort_by(|p, q| q.0.total_cmp(&p.0));
    assert!((ends[0].0 - 1.0).abs() < 2e-3 && ends[0].1.abs() < 2e-3);
    assert!(ends[1].0.abs() < 2e-3 && (ends[1].1 - 1.0).abs() < 2e-3);
}

#[test]
fn range_errors() {
    let r = run("range", &json!({ "n": 2, "k": 1 }), &[]);
    assert_eq!(r.code(), 2);
    assert!(r.stderr().contains("observables"));

    let r = run_text("range", "{ not json", &[]);
    assert_eq!(r.code(), 2);

    let mut bad = triangle_input();
    bad["k"] = json!(1);
    assert_eq!(run("range", &bad, &[]).code(), 3);

    let single = json!({ "n": 2, "k": 1, "observables": [named("z", &pauli::z())] });
    assert_eq!(run("range", &single, &[]).code(), 3);
}

#[test]
fn range_outputs_are_reproducible() {
    let args = ["--samples", "300", "--directions", "16", "--restarts", "4", "--seed", "9"];
    let a = run("range", &triangle_input(), &args);
    let b = run("range", &triangle_input(), &args);
    for name in ["pi_sym_points.csv", "theta_support.csv", "flat_segments.csv"] {
        assert_eq!(body_lines(&a.out.join(name)), body_lines(&b.out.join(name)));
    }
    let text = std::fs::read_to_string(a.out.join("theta_support.csv")).unwrap();
    for key in ["# command: range", "# input: ", "# output: ", "# seed: 9", "# samples: 300", "# timestamp: "] {
        assert!(text.contains(key), "missing {key}");
    }
    // 17 significant digits
    let value = &a.csv("theta_support.csv")[0][3];
    let mantissa = value.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn ground_lmg_sweep() {
    let r = run("ground", &lmg_input(), &["--sweep", "x=0,-0.25,-0.5,-1,-1.5"]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let rows = r.csv("ground.csv");
    let expected = [-1.0, -1.0625, -1.25, -2.0, -3.0];
    assert_eq!(rows.len(), expected.len());
    for (row, e) in rows.iter().zip(expected) {
        assert!((f(&row[2]) - e).abs() < 1e-6, "{} vs {e}", &row[2]);
        assert_eq!(&row[3], "true");
    }
}

#[test]
fn ground_zero_and_single_particle() {
    let mut zero = lmg_input();
    zero["x"] = json!([0.0, 0.0]);
    let r = run("ground", &zero, &[]);
    assert_eq!(r.code(), 0);
    assert!(f(&r.csv("ground.csv")[0][2]).abs() < 1e-12);

    // k = 1: energy is the smallest eigenvalue of x1 X + x2 Z
    let spec = json!({ "n": 2, "k": 1, "terms": [named("x", &pauli::x()), named("z", &pauli::z())], "x": [0.3, 0.4] });
    let r = run("ground", &spec, &["--sweep", "1=-1:1:5"]);
    assert_eq!(r.code(), 0);
    for row in r.csv("ground.csv") {
        let (x1, x2) = (f(&row[0]), f(&row[1]));
        assert!((f(&row[2]) + x1.hypot(x2)).abs() < 1e-9);
    }

    let qutrit = HermitianOperator::new(ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
        c(2.0, 0.0),
        c(-0.5, 0.0),
        c(1.0, 0.0),
    ])))
    .unwrap();
    let spec = json!({ "n": 3, "k": 1, "terms": [named("d", &qutrit)], "x": [1.0] });
    let r = run("ground", &spec, &[]);
    assert_eq!(r.code(), 0);
    let row = &r.csv("ground.csv")[0];
    assert!((f(&row[1]) + 0.5).abs() < 1e-9);
    assert_eq!(row.len(), 4 + 6);

    assert_eq!(run("ground", &lmg_input(), &["--sweep", "x=1:2"]).code(), 2);
    assert_eq!(run("ground", &lmg_input(), &["--sweep", "nope=1"]).code(), 3);
}

#[test]
fn definetti_sequences() {
    let r = run("definetti", &zz_input(), &["--n-max", "6"]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let rows = r.csv("definetti.csv");
    let expected = [-1.0, -1.0 / 3.0, -1.0 / 3.0, -0.2, -0.2];
    for (row, e) in rows.iter().zip(expected) {
        assert!((f(&row[1]) - e).abs() < 1e-10);
    }
    assert_eq!(&rows[5][0], "inf");
    assert!(f(&rows[5][1]).abs() < 1e-6);

    let id = json!({ "n": 2, "k": 2, "terms": [named("id", &HermitianOperator::identity(4))], "x": [1.5] });
    let r = run("definetti", &id, &["--n-max", "5"]);
    assert_eq!(r.code(), 0);
    assert!(r.csv("definetti.csv").iter().all(|row| (f(&row[1]) - 1.5).abs() < 1e-12));

    assert_eq!(run("definetti", &zz_input(), &["--n-max", "1"]).code(), 3);
}

fn product_term(weight: f64, factors: &[ComplexVector]) -> Value {
    let factors: Vec<Value> = factors.iter().map(|v| json!(symsep::io::vector_to_json(v))).collect();
    json!({ "weight": weight, "factors": factors })
}

fn bloch_vec(theta: f64, phi: f64) -> ComplexVector {
    symsep::ops::PureState::bloch(theta, phi).into_vector()
}

#[test]
fn decompose_round_trip_and_rejection() {
    let psi = bloch_vec(0.7, 1.1);
    let input = json!({ "n": 2, "N": 3, "terms": [product_term(1.0, &[psi.clone(), psi.clone(), psi.clone()])] });
    let r = run("decompose", &input, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let out = r.json("decomposition.json");
    assert!(out["verification"]["reassembly_error"].as_f64().unwrap() < 1e-10);
    assert_eq!(out["decomposition"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(out["manifest"]["command"], "decompose");

    let input = json!({ "n": 2, "N": 2, "terms": [product_term(1.0, &[bloch_vec(0.0, 0.0), bloch_vec(PI, 0.0)])] });
    let r = run("decompose", &input, &[]);
    assert_eq!(r.code(), 5);
    assert!(r.stderr().contains("residual"));
}

#[test]
fn decompose_phase_jittered_terms() {
    // factors equal up to a phase still give symmetric products
    let terms: Vec<Value> = (0..4)
        .map(|i| {
            let base = bloch_vec(0.4 + 0.5 * i as f64, 0.3 * i as f64);
            let factors: Vec<ComplexVector> = (0..3).map(|j| &base * c(0.0, 0.37 * (i * 3 + j) as f64).exp()).collect();
            product_term(0.25, &factors)
        })
        .collect();
    let r = run("decompose", &json!({ "n": 2, "N": 3, "terms": terms }), &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    assert!(r.json("decomposition.json")["verification"]["reassembly_error"].as_f64().unwrap() < 1e-8);
}

fn state_input(v: &ComplexVector) -> Value {
    json!({ "n": 2, "N": 2, "matrix": matrix_to_json(&outer(v, v)) })
}

#[test]
fn witness_examples() {
    let s = 0.5f64.sqrt();
    let singlet = ComplexVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]);
    let r = run("witness", &state_input(&singlet), &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let w = r.json("witness.json");
    assert!((w["swap"].as_f64().unwrap() + 1.0).abs() < 1e-10);
    assert!((w["ppt"][0]["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert_eq!(w["antisymmetric_support"], true);
    assert_eq!(w["entangled"], "certified");

    let psi = bloch_vec(1.0, 0.4);
    let product = psi.kronecker(&psi);
    let w = run("witness", &state_input(&product), &[]).json("witness.json");
    assert!((w["swap"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(w["ppt"][0]["min_eigenvalue"].as_f64().unwrap() >= -1e-10);
    assert_eq!(w["symmetric_support"], true);
    assert_eq!(w["entangled"], "unknown");

    let dicke = ComplexVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
    let w = run("witness", &state_input(&dicke), &[]).json("witness.json");
    assert_eq!(w["symmetric_support"], true);
    assert!((w["ppt"][0]["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert_eq!(w["entangled"], "certified");

    let bad = json!({ "n": 3, "N": 2, "matrix": matrix_to_json(&outer(&dicke, &dicke)) });
    assert_eq!(run("witness", &bad, &[]).code(), 3);
    assert_eq!(run_text("witness", "[]", &[]).code(), 2);
}
