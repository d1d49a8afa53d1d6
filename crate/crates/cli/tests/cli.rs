use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn families() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/families")
}

fn lgdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgdual")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn copy_rank_two(to: &Path) -> usize {
    let mut n = 0;
    for e in fs::read_dir(families()).unwrap() {
        let p = e.unwrap().path();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        if name.starts_with("2.") && name.ends_with(".fam") {
            fs::copy(&p, to.join(&name)).unwrap();
            n += 1;
        }
    }
    n
}

#[test]
fn verify_all_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(copy_rank_two(dir.path()), 36);
    let o = lgdual(&["verify-all", dir.path().to_str().unwrap(), "--parallel", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 36);
    assert!(out.contains("summary total=36 pass=36 fail=0 load_fail=0"));
    assert!(out.lines().next().unwrap().starts_with("PASS 2.1 "));
}

#[test]
fn corrupted_file_is_reported_and_others_still_run() {
    let dir = tempfile::tempdir().unwrap();
    copy_rank_two(dir.path());
    fs::write(dir.path().join("2.5.fam"), "[family]\nid = \"2.5\"\nrank_pic = \n").unwrap();
    let o = lgdual(&["verify-all", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 35);
    assert_eq!(out.lines().filter(|l| l.starts_with("FAIL(load) 2.5 ")).count(), 1);
}

#[test]
fn flipped_sign_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(families().join("2.33.fam")).unwrap();
    let bad = text.replacen("  [-2,0,1],\n  [0,-2,1],", "  [-2,0,-1],\n  [0,-2,1],", 1).replacen("  [1,1,4],", "  [-1,1,4],", 1);
    assert_ne!(bad, text);
    fs::write(dir.path().join("2.33.fam"), bad).unwrap();
    let o = lgdual(&["verify-all", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL 2.33 failed=["));
}

#[test]
fn empty_directory_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = lgdual(&["verify-all", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("summary total=0"));
}

#[test]
fn output_does_not_depend_on_parallelism() {
    let dir = families();
    let d = dir.to_str().unwrap();
    let one = lgdual(&["verify-all", d, "--parallel", "1", "--json"]);
    let many = lgdual(&["verify-all", d, "--parallel", "8", "--json"]);
    assert_eq!(one.stdout, many.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["passed"], 88);
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(lgdual(&["verify-all", "/no/such/dir"]).status.code(), Some(2));
    assert_eq!(lgdual(&["lattice", "info", "--gram", "[[2,1],[0,2]]"]).status.code(), Some(2));
    assert_eq!(lgdual(&["laurent", "period", "--poly", "a*x + 1/x"]).status.code(), Some(2));
    assert_eq!(lgdual(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn lattice_info() {
    let o = lgdual(&["lattice", "info", "--gram", "[[2,1],[1,2]]"]);
    let out = stdout(&o);
    assert!(out.contains("determinant 3"));
    assert!(out.contains("q values [2/3]"));
}

#[test]
fn single_family_verify_and_show() {
    let f = families().join("2.33.fam");
    let o = lgdual(&["family", "verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = lgdual(&["family", "show", f.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["singularities"].as_array().unwrap().len(), 5);
    assert_eq!(v["curves"].as_array().unwrap().len(), 3);
}

#[test]
fn laurent_commands() {
    let o = lgdual(&["laurent", "mutate", "--poly", "x*y + y + (1+x)*y^-1", "--direction", "0,1", "--factor", "1+x"]);
    assert_eq!(stdout(&o).trim(), "x^2*y + 2*x*y + y + y^-1");
    let o = lgdual(&["laurent", "mutate", "--poly", "x*y + y^-1", "--direction", "0,-1", "--factor", "1+x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lgdual(&["laurent", "period", "--poly", "x + y + a/(x*y)", "--assign", "a=1", "--terms", "6"]);
    assert_eq!(stdout(&o).trim(), "1 0 0 6 0 0 90");
    let o = lgdual(&["laurent", "classify", "--poly", "x + y + z + 1/(x*y*z)"]);
    let out = stdout(&o);
    assert!(out.contains("reflexive true") && out.contains("minkowski true"));
    let o = lgdual(&["laurent", "construct", "--target", "6.1", "--chain", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["polynomials"].as_array().unwrap().len(), 6);
}

#[test]
fn fano_commands() {
    let o = lgdual(&["fano", "product-dp", "--degree", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("genus_equal true"));
    let o = lgdual(&["fano", "bundle", "--base", "P2", "--degrees", "0,1"]);
    assert!(stdout(&o).contains("gram = [[2,4],[4,4]]"));
}
