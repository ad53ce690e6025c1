use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use qsylv_core::format::{parse_matrix, parse_poly, render_matrix};
use qsylv_core::matrix::{jordan_block, sylvester_residual};
use qsylv_core::oracle::oracle_solve;
use qsylv_core::{QMatrix, QPoly, Quaternion};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn qsylv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsylv")).args(args).output().expect("run qsylv")
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn load(name: &str) -> QMatrix {
    parse_matrix(&fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

#[test]
fn check_examples() {
    for (a, b, want) in [
        ("scalar_i.qm", "scalar_j.qm", "singular"),
        ("scalar_1.qm", "scalar_2.qm", "unique"),
        ("regular_a.qm", "regular_b.qm", "unique"),
        ("singular_a.qm", "singular_b.qm", "singular"),
    ] {
        let o = qsylv(&["check", &f(a), &f(b)]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some(want));
        assert!(text.contains("tol: 1e-9"));
    }
    let o = qsylv(&["check", &f("bad_entry.qm"), &f("scalar_1.qm")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn regular_instance_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.qm");
    let o = qsylv(&["solve", &f("regular_a.qm"), &f("regular_b.qm"), &f("regular_c.qm"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("method: jordan"));
    let residual: f64 = text.lines().find_map(|l| l.strip_prefix("residual: ")).unwrap().parse().unwrap();
    assert!(residual < 1e-10);
    let golden_text = fs::read_to_string(fixture("regular_x.golden.qm")).unwrap();
    let golden = parse_matrix(&golden_text).unwrap();
    assert_eq!(render_matrix(&golden), golden_text);
    let x = parse_matrix(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((&x - &golden).max_abs() <= 1e-12);
    let (a, b, c) = (load("regular_a.qm"), load("regular_b.qm"), load("regular_c.qm"));
    let oracle = oracle_solve(&a, &b, &c, 1e-9).unwrap().x0.unwrap();
    assert!((&x - &oracle).max_abs() <= 1e-8);
}

#[test]
fn every_method_flag_solves_the_regular_instance() {
    let golden = load("regular_x.golden.qm");
    for method in ["auto", "lift", "poly", "jordan", "tridiag", "rows", "cols"] {
        let o = qsylv(&["solve", &f("regular_a.qm"), &f("regular_b.qm"), &f("regular_c.qm"), "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        let text = stdout(&o);
        let start = text.lines().position(|l| l == "2 2").unwrap();
        let body: Vec<&str> = text.lines().skip(start).collect();
        let x = parse_matrix(&body.join("\n")).unwrap();
        assert!((&x - &golden).max_abs() <= 1e-10, "{method}");
    }
}

#[test]
fn zero_right_side_gives_zero_solution() {
    let o = qsylv(&["solve", &f("regular_a.qm"), &f("regular_b.qm"), &f("zero_c.qm")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let start = text.lines().position(|l| l == "2 2").unwrap();
    let x = parse_matrix(&text.lines().skip(start).collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(x, QMatrix::zeros(2, 2));
}

#[test]
fn solvable_singular_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.qm");
    let o =
        qsylv(&["solve", &f("singular_a.qm"), &f("singular_b.qm"), &f("solvable_c.qm"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("method: singular"));
    let x = parse_matrix(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(x, load("solvable_x.golden.qm"));
    let (a, b, c) = (load("singular_a.qm"), load("singular_b.qm"), load("solvable_c.qm"));
    assert!(sylvester_residual(&a, &b, &c, &x) <= 1e-12);
}

#[test]
fn unsolvable_singular_instance() {
    let o = qsylv(&["solve", &f("singular_a.qm"), &f("singular_b.qm"), &f("unsolvable_c.qm")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("no solution"));
    assert!(text.contains("|S_1|") && text.contains("|S_2|"));
}

#[test]
fn input_errors_exit_two() {
    let missing = qsylv(&["solve", "/nonexistent/a.qm", &f("scalar_1.qm"), &f("scalar_1.qm")]);
    assert_eq!(missing.status.code(), Some(2));
    let shape = qsylv(&["solve", &f("regular_a.qm"), &f("regular_b.qm"), &f("scalar_1.qm")]);
    assert_eq!(shape.status.code(), Some(2));
    let flag = qsylv(&["solve", "--method", "bogus", "a", "b", "c"]);
    assert_eq!(flag.status.code(), Some(2));
    let bad_tol = qsylv(&["solve", &f("regular_a.qm"), &f("regular_b.qm"), &f("regular_c.qm"), "--tol", "-1"]);
    assert_eq!(bad_tol.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let chain = qsylv(&["nullbasis", &f("bad_chain.chain"), &f("i1.chain"), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(chain.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&chain.stderr).contains("alpha_0"));
}

#[test]
fn nullbasis_for_jordan_chains() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsylv(&["nullbasis", &f("i2.chain"), &f("i2.chain"), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    let rows: Vec<&str> = manifest.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["basis_01.qm 1 0", "basis_02.qm 1 1", "basis_03.qm 2 0", "basis_04.qm 2 1"]);
    let a = jordan_block(2, Quaternion::I);
    for row in rows {
        let name = row.split_whitespace().next().unwrap();
        let y = parse_matrix(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        assert_eq!(y[(0, 0)], Quaternion::ZERO);
        assert_eq!(y[(0, 1)], y[(1, 0)]);
        assert_eq!(sylvester_residual(&a, &a.transpose(), &QMatrix::zeros(2, 2), &y), 0.0);
    }
    let nullity = oracle_solve(&a, &a.transpose(), &QMatrix::zeros(2, 2), 1e-9).unwrap().nullity();
    assert_eq!(nullity, 4);

    let o = qsylv(&["nullbasis", &f("i1.chain"), &f("j1.chain"), "-o", dir.path().join("scalar").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("basis elements: 2"));
}

#[test]
fn interp_real_scalar_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.poly");
    let o = qsylv(&[
        "interp",
        &f("one.chain"),
        &f("two.chain"),
        &f("gamma.poly"),
        &f("delta.poly"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let fp = parse_poly(&fs::read_to_string(&out).unwrap()).unwrap();
    let (g, d) = (Quaternion::new(1.0, 2.0, 0.0, -1.0), Quaternion::new(0.0, 0.5, 3.0, 1.0));
    let x = (g - d) / (1.0 - 2.0);
    assert_eq!(fp, QPoly::new(vec![g - x, x]));
    let text = stdout(&o);
    assert!(text.contains("p-membership residual: 0.000e0"));
    assert!(text.contains("q-membership residual: 0.000e0"));
}

#[test]
fn interp_same_class_zero_data() {
    let o = qsylv(&["interp", &f("i2.chain"), &f("i1.chain"), &f("empty.poly"), &f("empty.poly")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("free real parameters: 2"));
    assert!(text.contains("method: singular"));
}

#[test]
fn interp_without_interpolant_exits_one() {
    let o = qsylv(&["interp", &f("i1.chain"), &f("j1.chain"), &f("gamma.poly"), &f("empty.poly")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("no solution"));
}
