//! Fixture loading and batch verification.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixture::{as_str, parse_lattice_table, read_file, Document};
use crate::pencil::{verify_family, LatticeReport, PencilConfig};
use crate::Lattice;

/// Polynomial data of one model: the model and the polynomials along its printed route.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PolynomialFixture {
    pub entries: BTreeMap<String, Vec<String>>,
}

impl PolynomialFixture {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).and_then(|v| v.first()).map(String::as_str)
    }

    pub fn list(&self, key: &str) -> &[String] {
        self.entries.get(key).map_or(&[], Vec::as_slice)
    }
}

/// Parse a polynomial file: one section per model, values are strings or string lists.
pub fn parse_polynomials(text: &str) -> Result<BTreeMap<String, PolynomialFixture>> {
    let doc = Document::parse(text)?;
    let mut out = BTreeMap::new();
    for sec in &doc.sections {
        let mut fx = PolynomialFixture::default();
        for e in &sec.entries {
            let vals = match &e.value {
                serde_json::Value::String(s) => vec![s.clone()],
                serde_json::Value::Array(items) if items.iter().all(|v| v.is_string()) => {
                    items.iter().map(|v| as_str(v, &e.key).map(str::to_string)).collect::<Result<_>>()?
                }
                // numeric metadata
                other => vec![other.to_string()],
            };
            fx.entries.insert(e.key.clone(), vals);
        }
        out.insert(sec.name.clone(), fx);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct FixtureSet {
    pub families: BTreeMap<String, PencilConfig>,
    pub parametrized: BTreeMap<String, PencilConfig>,
    pub picard_table: BTreeMap<String, Lattice>,
    pub polynomials: BTreeMap<String, PolynomialFixture>,
    pub warnings: Vec<String>,
}

impl FixtureSet {
    /// Load `families/`, `parametrized/`, `picard_table.txt` and `lg_models.txt` under `root`.
    /// Missing parts are left empty; malformed files are errors.
    pub fn load(root: &Path, strict: bool) -> Result<Self> {
        let mut set = FixtureSet::default();
        for (sub, map) in [("families", &mut set.families), ("parametrized", &mut set.parametrized)] {
            let dir = root.join(sub);
            if !dir.is_dir() {
                continue;
            }
            for path in fixture_files(&dir)? {
                let (cfg, warnings) = load_fixture(&path, strict)?;
                set.warnings.extend(warnings.into_iter().map(|w| format!("{}: {w}", path.display())));
                if map.contains_key(&cfg.family_id) {
                    return Err(Error::Schema(format!("duplicate family id {} in {sub}", cfg.family_id)));
                }
                map.insert(cfg.family_id.clone(), cfg);
            }
        }
        let table = root.join("picard_table.txt");
        if table.is_file() {
            set.picard_table = parse_lattice_table(&read_file(&table)?)?;
        }
        let polys = root.join("lg_models.txt");
        if polys.is_file() {
            set.polynomials = parse_polynomials(&read_file(&polys)?)?;
        }
        Ok(set)
    }
}

pub fn load_fixture(path: &Path, strict: bool) -> Result<(PencilConfig, Vec<String>)> {
    PencilConfig::load(path, strict)
}

/// `*.fam` files of a directory, sorted by family id.
pub fn fixture_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in rd {
        let p = entry.map_err(|e| Error::Io(e.to_string()))?.path();
        if p.extension().is_some_and(|x| x == "fam") {
            out.push(p);
        }
    }
    out.sort_by(|a, b| compare_ids(&stem(a), &stem(b)));
    Ok(out)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Numeric order on dotted ids ("2.9" < "2.10"), falling back to text.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    let key = |s: &str| -> Option<Vec<u64>> { s.split('.').map(|p| p.parse().ok()).collect() };
    match (key(a), key(b)) {
        (Some(x), Some(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum Outcome {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail { failed: Vec<String> },
    #[serde(rename = "FAIL(load)")]
    LoadFail { error: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunEntry {
    pub id: String,
    pub file: String,
    pub outcome: Outcome,
    pub report: Option<LatticeReport>,
}

impl RunEntry {
    pub fn line(&self) -> String {
        match (&self.outcome, &self.report) {
            (Outcome::Pass, Some(r)) => format!(
                "PASS {} rank={} A=[{}]",
                self.id,
                r.rank.map_or("-".into(), |k| k.to_string()),
                r.invariant_factors.join(",")
            ),
            (Outcome::Fail { failed }, _) => format!("FAIL {} failed=[{}]", self.id, failed.join(",")),
            (Outcome::LoadFail { error }, _) => format!("FAIL(load) {} {}", self.id, error),
            (Outcome::Pass, None) => format!("PASS {}", self.id),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub entries: Vec<RunEntry>,
    pub passed: usize,
    pub failed: usize,
    pub load_failed: usize,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.load_failed == 0
    }

    /// 0 when every family passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.all_passed())
    }

    pub fn summary(&self) -> String {
        format!(
            "summary total={} pass={} fail={} load_fail={}",
            self.entries.len(),
            self.passed,
            self.failed,
            self.load_failed
        )
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{}", e.line());
        }
        let _ = writeln!(s, "{}", self.summary());
        s
    }
}

fn run_one(path: &Path, strict: bool, bound: u64) -> RunEntry {
    let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match load_fixture(path, strict) {
        Err(e) => RunEntry { id: stem(path), file, outcome: Outcome::LoadFail { error: e.to_string() }, report: None },
        Ok((cfg, _)) => {
            let rep = verify_family(&cfg, bound);
            let outcome = if rep.passed {
                Outcome::Pass
            } else {
                Outcome::Fail { failed: rep.failed_checks().into_iter().map(str::to_string).collect() }
            };
            RunEntry { id: cfg.family_id.clone(), file, outcome, report: Some(rep) }
        }
    }
}

/// Verify every `*.fam` file in `dir` with at most `parallelism` workers.
///
/// The report is sorted by family id, so it does not depend on scheduling.
pub fn verify_all(dir: &Path, parallelism: usize, strict: bool, bound: u64) -> Result<RunReport> {
    let files = fixture_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut entries: Vec<RunEntry> = pool.install(|| files.par_iter().map(|p| run_one(p, strict, bound)).collect());
    entries.sort_by(|a, b| compare_ids(&a.id, &b.id).then_with(|| a.file.cmp(&b.file)));
    let mut rep = RunReport { entries, ..Default::default() };
    for e in &rep.entries {
        match e.outcome {
            Outcome::Pass => rep.passed += 1,
            Outcome::Fail { .. } => rep.failed += 1,
            Outcome::LoadFail { .. } => rep.load_failed += 1,
        }
    }
    Ok(rep)
}
