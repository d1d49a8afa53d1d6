//! Sectioned plain-text format shared by family fixtures, lattice files and tables.
//!
//! ```text
//! # comment
//! [section]
//! key = <JSON value>
//! ```
//!
//! Values are JSON, except that an array may span several lines and may carry
//! trailing commas. A document may start with keys before any section header;
//! those belong to the section named `""`.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::IntegralLattice;
use crate::matrix::Matrix;
use crate::Lattice;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = vec![];
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let line_no = i + 1;
            let raw = lines[i];
            let t = raw.trim();
            i += 1;
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if t.starts_with('[') && !t.contains('=') {
                if !t.ends_with(']') || t.len() < 3 {
                    return Err(perr(line_no, 1, "malformed section header"));
                }
                let name = t[1..t.len() - 1].trim().to_string();
                if sections.iter().any(|s| s.name == name) {
                    return Err(perr(line_no, 1, &format!("duplicate section [{name}]")));
                }
                sections.push(Section { name, line: line_no, entries: vec![] });
                continue;
            }
            let Some(eq) = raw.find('=') else {
                return Err(perr(line_no, 1, "expected `key = value`"));
            };
            let key = raw[..eq].trim().to_string();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(perr(line_no, 1, "invalid key"));
            }
            let mut value_text = raw[eq + 1..].to_string();
            let value_col = eq + 2;
            while depth(&value_text) > 0 {
                if i >= lines.len() {
                    return Err(perr(line_no, value_col, "unterminated array"));
                }
                value_text.push('\n');
                value_text.push_str(lines[i]);
                i += 1;
            }
            let cleaned = strip_trailing_commas(value_text.trim());
            let value: Value = serde_json::from_str(&cleaned).map_err(|e| {
                let (l, c) = (e.line(), e.column());
                let col = if l <= 1 { value_col + c } else { c };
                perr(line_no + l.saturating_sub(1), col, &e.to_string())
            })?;
            if sections.is_empty() {
                sections.push(Section { name: String::new(), line: 0, entries: vec![] });
            }
            let sec = sections.last_mut().expect("section present");
            if sec.entries.iter().any(|e| e.key == key) {
                return Err(perr(line_no, 1, &format!("duplicate key {key}")));
            }
            sec.entries.push(Entry { key, value, line: line_no });
        }
        Ok(Document { sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| Error::Schema(format!("missing section [{name}]")))
    }
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    pub fn require(&self, key: &str) -> Result<&Value> {
        self.get(key).ok_or_else(|| Error::Schema(format!("missing key {key} in [{}]", self.name)))
    }
}

fn perr(line: usize, col: usize, msg: &str) -> Error {
    Error::Parse { line, col, msg: msg.to_string() }
}

/// Net bracket depth outside of string literals.
fn depth(s: &str) -> i64 {
    let mut d = 0;
    let mut in_str = false;
    let mut esc = false;
    for ch in s.chars() {
        if in_str {
            match ch {
                _ if esc => esc = false,
                '\\' => esc = true,
                '"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_str = true,
            '[' | '{' => d += 1,
            ']' | '}' => d -= 1,
            _ => {}
        }
    }
    d
}

fn strip_trailing_commas(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    let mut in_str = false;
    let mut esc = false;
    for (i, &ch) in chars.iter().enumerate() {
        if in_str {
            match ch {
                _ if esc => esc = false,
                '\\' => esc = true,
                '"' => in_str = false,
                _ => {}
            }
            out.push(ch);
            continue;
        }
        if ch == '"' {
            in_str = true;
        }
        if ch == ',' {
            let next = chars[i + 1..].iter().find(|c| !c.is_whitespace());
            if matches!(next, Some(']') | Some('}')) {
                continue;
            }
        }
        out.push(ch);
    }
    out
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn as_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Schema(format!("{what}: integer out of range"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Schema(format!("{what}: not an integer"))),
        _ => Err(Error::Schema(format!("{what}: expected integer"))),
    }
}

pub fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Schema(format!("{what}: expected count")))
}

pub fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::Schema(format!("{what}: expected string")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Schema(format!("{what}: expected array")))
}

pub fn as_string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    as_array(v, what)?.iter().map(|x| as_str(x, what).map(str::to_string)).collect()
}

pub fn as_int_matrix(v: &Value, what: &str, cols: Option<usize>) -> Result<Matrix<BigInt>> {
    let rows = as_array(v, what)?;
    let data: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| as_array(r, what)?.iter().map(|x| as_int(x, what)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if data.is_empty() {
        return Ok(Matrix::zeros(0, cols.unwrap_or(0)));
    }
    Matrix::from_rows(data).map_err(|_| Error::Schema(format!("{what}: ragged rows")))
}

/// Text of rationals, accepting `"p/q"` strings or bare integers.
pub fn as_rational_text(v: &Value, what: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        _ => Err(Error::Schema(format!("{what}: expected rational"))),
    }
}

/// Reject or collect keys not in `known`. Keys of the form `prefix*` match by prefix.
pub fn check_keys(sec: &Section, known: &[&str], strict: bool, warnings: &mut Vec<String>) -> Result<()> {
    for e in &sec.entries {
        let ok = known.iter().any(|k| match k.strip_suffix('*') {
            Some(p) => e.key.starts_with(p),
            None => e.key == *k,
        });
        if !ok {
            let msg = format!("line {}: unknown key {} in [{}]", e.line, e.key, sec.name);
            if strict {
                return Err(Error::Schema(msg));
            }
            warnings.push(msg);
        }
    }
    Ok(())
}

/// Lattice file: a `[lattice]` section (or bare keys) with `gram` and optional `labels`.
pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let doc = Document::parse(text)?;
    let sec = doc
        .section("lattice")
        .or_else(|| doc.section(""))
        .ok_or_else(|| Error::Schema("missing [lattice] section".into()))?;
    let gram = as_int_matrix(sec.require("gram")?, "gram", None)?;
    if !gram.is_symmetric() {
        return Err(Error::Schema("gram is not symmetric".into()));
    }
    let l = IntegralLattice::from_gram(gram)?;
    match sec.get("labels") {
        Some(v) => l.with_labels(as_string_list(v, "labels")?),
        None => Ok(l),
    }
}

pub fn format_lattice(l: &Lattice) -> String {
    let mut s = format!("# lattice, format v{FORMAT_VERSION}\n[lattice]\ngram = {}\n", l.gram());
    if let Some(labels) = l.labels() {
        s.push_str(&format!("labels = {}\n", serde_json::to_string(labels).expect("labels serialize")));
    }
    s
}

/// `id = gram` lines, e.g. the Picard lattice table.
pub fn parse_lattice_table(text: &str) -> Result<BTreeMap<String, Lattice>> {
    let doc = Document::parse(text)?;
    let mut out = BTreeMap::new();
    for sec in &doc.sections {
        for e in &sec.entries {
            let gram = as_int_matrix(&e.value, &e.key, None)?;
            if !gram.is_symmetric() {
                return Err(Error::Schema(format!("{}: gram is not symmetric", e.key)));
            }
            out.insert(e.key.clone(), IntegralLattice::from_gram(gram)?);
        }
    }
    Ok(out)
}
