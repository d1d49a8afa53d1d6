use std::fs;
use std::path::PathBuf;

use lgdual::harness::{load_fixture, verify_all, FixtureSet, Outcome};
use lgdual::{Error, DEFAULT_BOUND};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn fixture_set_loads_everything() {
    let set = FixtureSet::load(&root(), true).unwrap();
    assert_eq!(set.families.len(), 88);
    assert_eq!(set.parametrized.len(), 8);
    assert!(set.picard_table.contains_key("3.5"));
    assert!(set.polynomials.contains_key("product.6.1"));
    assert!(set.warnings.is_empty(), "{:?}", set.warnings);
}

#[test]
fn family_2_33_shape() {
    let (cfg, _) = load_fixture(&root().join("families/2.33.fam"), true).unwrap();
    let ade: Vec<String> = cfg.singularities.iter().map(|s| s.ade.to_string()).collect();
    assert_eq!(ade, ["A2", "A6", "A3", "A2", "A2"]);
    assert_eq!(cfg.curve_labels, ["C2", "C4", "H"]);
    assert_eq!(cfg.exceptional_labels().len(), 15);
}

#[test]
fn empty_file_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.fam");
    fs::write(&p, "").unwrap();
    assert!(matches!(load_fixture(&p, false), Err(Error::Schema(_))));
}

#[test]
fn non_symmetric_curve_matrix_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(root().join("families/2.33.fam")).unwrap();
    let bad = text.replacen("  [-2,0,1],", "  [-2,0,2],", 1);
    assert_ne!(bad, text);
    let p = dir.path().join("2.33.fam");
    fs::write(&p, bad).unwrap();
    match load_fixture(&p, false) {
        Err(Error::Schema(msg)) => assert!(msg.contains("symmetric"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn batch_is_deterministic_and_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["2.1", "2.9", "2.10", "3.5"] {
        fs::copy(root().join(format!("families/{id}.fam")), dir.path().join(format!("{id}.fam"))).unwrap();
    }
    fs::write(dir.path().join("9.9.fam"), "[family]\n").unwrap();
    let a = verify_all(dir.path(), 1, false, DEFAULT_BOUND).unwrap();
    let b = verify_all(dir.path(), 3, false, DEFAULT_BOUND).unwrap();
    assert_eq!(a, b);
    let ids: Vec<&str> = a.entries.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, ["2.1", "2.9", "2.10", "3.5", "9.9"]);
    assert_eq!((a.passed, a.failed, a.load_failed), (4, 0, 1));
    assert!(matches!(a.entries[4].outcome, Outcome::LoadFail { .. }));
    assert_eq!(a.exit_code(), 1);
}
