use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HERMITE: &str = r#"{"name":"hermite","order":2,"coeffs":[["0"],["0","-2"],["1"]]}"#;

fn bsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsl"))
        .args(args)
        .env_remove("BSL_CAP")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn sigma_row_for_the_anchor() {
    let out = bsl(&[
        "hermite", "sigma", "--n", "4", "--k", "3", "--gamma1", "1", "--mode", "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["sigma_bruteforce"], "3/8");
    assert_eq!(v["sigma_sum"], "3/8");
    assert_eq!(v["sigma_closed"], "-3/8");
    assert_eq!(v["nonzero"], true);
}

#[test]
fn hermite_spectrum_from_file() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "hermite.json", HERMITE);
    let out = bsl(&["op", "spectrum", "--op", p(&op), "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["lambdas"], serde_json::json!(["0", "-2", "-4", "-6", "-8", "-10"]));
    assert_eq!(v["distinct"], true);
}

#[test]
fn eigenpoly_methods_agree() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "hermite.json", HERMITE);
    let out = bsl(&["op", "eigenpoly", "--op", p(&op), "--n", "3", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["poly"], "x^3 - 3/2*x");
    assert_eq!(v["agree"], true);
}

#[test]
fn composition_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "hermite.json", HERMITE);
    let args = ["op", "eigenpoly", "--op", p(&op), "--n", "5", "--method", "explicit"];
    let out = Command::new(env!("CARGO_BIN_EXE_bsl"))
        .args(args)
        .env("BSL_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "CapExceeded");
    let out = Command::new(env!("CARGO_BIN_EXE_bsl"))
        .args(args)
        .env("BSL_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(error_code(&out), "ParseError");
    assert_eq!(bsl(&args).status.code(), Some(0));
}

#[test]
fn corrupted_operator_exits_one() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "bad.json", r#"{"order":2,"coeffs":[["0"],["0","-2","5"],["1"]]}"#);
    let out = bsl(&["op", "spectrum", "--op", p(&op), "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "DegreeViolation");

    let missing = dir.path().join("absent.json");
    let out = bsl(&["op", "spectrum", "--op", p(&missing), "--n", "3"]);
    assert_eq!(error_code(&out), "FileNotFound");

    let garbled = write(&dir, "garbled.json", "{\"order\": 2");
    assert_eq!(
        error_code(&bsl(&["op", "delta", "--op", p(&garbled), "--n", "3"])),
        "ParseError"
    );
}

#[test]
fn corrupted_family_exits_two() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "hermite.json", HERMITE);
    let good = write(&dir, "good.json", r#"[["1"],["0","1"],["-1/2","0","1"]]"#);
    let bad = write(&dir, "bad.json", r#"[["1"],["0","1"],["-1/3","0","1"]]"#);
    assert_eq!(
        bsl(&["op", "verify", "--op", p(&op), "--family", p(&good)])
            .status
            .code(),
        Some(0)
    );
    let out = bsl(&["op", "verify", "--op", p(&op), "--family", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let rows = json_out(&out);
    assert_eq!(rows[2]["ok"], false);
    assert_eq!(rows[1]["ok"], true);
}

#[test]
fn generated_family_round_trips_through_fit_and_verify() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "hermite.json", HERMITE);
    let out = bsl(&["rec", "gen", "--hermite", "9", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let family = write(&dir, "family.json", std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(
        bsl(&["op", "verify", "--op", p(&op), "--family", p(&family)])
            .status
            .code(),
        Some(0)
    );

    let fit = bsl(&["rec", "fit", "--family", p(&family), "--p", "1"]);
    assert_eq!(fit.status.code(), Some(0));
    let v = json_out(&fit);
    let matrix = write(&dir, "matrix.json", &v["matrix"].to_string());
    let regen = bsl(&["rec", "gen", "--rec", p(&matrix), "--n", "8"]);
    assert_eq!(json_out(&regen)["polys"][3], "x^3 - 3/2*x");
}

#[test]
fn fit_sweep_reports_failures() {
    let dir = TempDir::new().unwrap();
    let family = write(
        &dir,
        "family.json",
        r#"[["1"],["0","1"],["0","0","1"],["1","0","0","1"],["0","0","0","0","1"],["0","0","0","0","0","1"]]"#,
    );
    let out = bsl(&["rec", "fit", "--family", p(&family), "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_out(&out);
    assert_eq!(v["fitted"], false);
    assert_eq!(v["residual"], "-1");
    let sweep = bsl(&["--format", "csv", "rec", "fit", "--family", p(&family), "--p-max", "2"]);
    assert_eq!(sweep.status.code(), Some(0));
    let text = String::from_utf8(sweep.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("1,false"));
    assert!(text.lines().nth(2).unwrap().starts_with("2,true"));
}

#[test]
fn factorization_feeds_transform() {
    let dir = TempDir::new().unwrap();
    let out = bsl(&["darboux", "factorize", "--hermite", "12", "--c", "0", "--gamma1", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["reconstructs"], true);
    assert_eq!(v["singular_truncations"][0], 1);
    let pair = write(&dir, "pair.json", &String::from_utf8(out.stdout).unwrap());
    let transformed = bsl(&["darboux", "transform", "--factors", p(&pair), "--block", "10"]);
    assert_eq!(transformed.status.code(), Some(0));
    let conj = bsl(&["darboux", "conjugate", "--hermite", "9", "--hermite-gamma1", "1"]);
    let conj = json_out(&conj);
    assert_eq!(conj["tridiagonal"], true);
    assert_eq!(conj["matrix"], json_out(&transformed));

    let strict = bsl(&["darboux", "factorize", "--hermite", "4", "--gamma1", "1", "--strict"]);
    assert_eq!(error_code(&strict), "SingularTruncation");
    let pivot = bsl(&["darboux", "factorize", "--hermite", "4", "--gamma1", "0"]);
    assert_eq!(error_code(&pivot), "SingularPivot");
}

#[test]
fn conjugation_with_arbitrary_gammas_widens_the_band() {
    let out = bsl(&["darboux", "conjugate", "--hermite", "6", "--gammas", "1,1,1,1,1,1,1"]);
    let v = json_out(&out);
    assert_eq!(v["tridiagonal"], false);
    assert!(v["bandwidth"].as_u64().unwrap() > 1);
}

#[test]
fn necessary_condition_grid() {
    let out = bsl(&[
        "test",
        "necessary",
        "--n-range",
        "3..6",
        "--k-range",
        "3..4",
        "--hermite-gamma1",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_out(&out);
    let anchor = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["n"] == 4 && r["k"] == 3)
        .unwrap();
    assert_eq!(anchor["value"], "-3/4");
    let strict = bsl(&[
        "test",
        "necessary",
        "--n-range",
        "4",
        "--k-range",
        "3",
        "--hermite-gamma1",
        "1",
        "--expect-zero",
    ]);
    assert_eq!(strict.status.code(), Some(2));
    let zero = bsl(&[
        "test",
        "necessary",
        "--n-range",
        "3..5",
        "--k-range",
        "1..5",
        "--gammas",
        "0,0,0,0,0",
        "--expect-zero",
    ]);
    assert_eq!(zero.status.code(), Some(0));
}

#[test]
fn table_output_is_independent_of_workers() {
    let args = |w: &'static str| {
        [
            "--format",
            "csv",
            "--workers",
            w,
            "hermite",
            "table",
            "--n-range",
            "3..12",
            "--k-range",
            "1..12",
        ]
    };
    let one = bsl(&args("1"));
    let four = bsl(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,k,sigma_bruteforce,sigma_sum,sigma_closed,nonzero"
    );
}

#[test]
fn gamma_listing_matches_closed_forms() {
    let out = bsl(&["--format", "csv", "hermite", "gamma", "--gamma1", "1", "--m-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "m,gamma,closed\n1,1,1\n2,-1/2,-1/2\n3,2,2\n4,-3/4,-3/4\n5,8/3,8/3\n"
    );
    let general = bsl(&["hermite", "gamma", "--m-max", "4", "--mode", "general"]);
    assert_eq!(error_code(&general), "UsageError");
}

#[test]
fn usage_errors_exit_one() {
    let out = bsl(&["hermite", "sigma", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "UsageError");
    assert_eq!(
        bsl(&["--workers", "0", "hermite", "sigma", "--n", "4", "--k", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bsl(&["--help"]).status.code(), Some(0));
}
