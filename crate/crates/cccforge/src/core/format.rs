//! Canonical JSON for codes and GDCs.
//!
//! ```json
//! {"n": 6, "d": 6, "composition": [2,1,1],
//!  "points": {"v": 6, "infinite": [], "fixed": []},
//!  "words": [[0,1,2,3], ...]}
//! ```
//! GDC files carry an extra `"groups"` array. Words are written one per line
//! in sorted order so files diff cleanly and round-trip byte for byte.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::code::{Code, Gdc};
use super::codeword::Codeword;
use super::point::{InfiniteClass, PointSet};
use crate::error::{invalid, read_file, write_file, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsJson {
    v: u32,
    #[serde(default)]
    infinite: Vec<InfiniteClass>,
    #[serde(default)]
    fixed: Vec<String>,
}

#[derive(Deserialize)]
struct CodeJson {
    n: u32,
    d: u32,
    composition: Vec<u32>,
    points: Option<PointsJson>,
    #[serde(default)]
    groups: Option<Vec<Vec<Value>>>,
    words: Vec<Vec<Value>>,
}

/// A loaded code file: a plain code or a GDC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeFile {
    Code(Code),
    Gdc(Gdc),
}

impl CodeFile {
    pub fn code(&self) -> &Code {
        match self {
            CodeFile::Code(c) => c,
            CodeFile::Gdc(g) => &g.code,
        }
    }
}

/// Parse a code file. Words with repeated points are kept (verification
/// reports them); unknown points and a composition other than [2,1,1] are
/// malformed input.
pub fn parse_code(text: &str) -> Result<CodeFile> {
    let raw: CodeJson = serde_json::from_str(text)?;
    if raw.composition != [2, 1, 1] {
        return Err(invalid(format!("composition {:?} is not [2, 1, 1]", raw.composition)));
    }
    let points = match raw.points {
        Some(p) => PointSet::new(p.v, p.infinite, p.fixed)?,
        None => PointSet::finite(raw.n),
    };
    if points.len() != raw.n {
        return Err(invalid(format!("n = {} but the point set has {} points", raw.n, points.len())));
    }
    let mut words = Vec::with_capacity(raw.words.len());
    for w in &raw.words {
        if w.len() != 4 {
            return Err(invalid(format!("word of length {} (tuple form needs 4 points)", w.len())));
        }
        let mut t = [0u32; 4];
        for (slot, p) in t.iter_mut().zip(w) {
            *slot = points.parse_point(p)?;
        }
        words.push(Codeword::raw(t));
    }
    let code = Code::new(points, raw.d, words);
    match raw.groups {
        None => Ok(CodeFile::Code(code)),
        Some(gs) => {
            let groups = gs
                .iter()
                .map(|g| g.iter().map(|p| code.points.parse_point(p)).collect::<Result<Vec<u32>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(CodeFile::Gdc(Gdc::new(code, groups)?))
        }
    }
}

pub fn load_code(path: &Path) -> Result<CodeFile> {
    parse_code(&read_file(path)?)
}

fn point_json(ps: &PointSet, idx: u32) -> String {
    ps.point(idx).to_json().to_string()
}

fn render(code: &Code, groups: Option<&[Vec<u32>]>) -> String {
    let ps = &code.points;
    let mut s = String::new();
    s.push_str("{\n");
    s.push_str(&format!("  \"n\": {},\n", code.n()));
    s.push_str(&format!("  \"d\": {},\n", code.d));
    s.push_str("  \"composition\": [2, 1, 1],\n");
    let infinite: Vec<String> = ps
        .infinite_classes()
        .iter()
        .map(|c| {
            format!(
                "{{\"labels\": {}, \"modulus\": {}}}",
                serde_json::to_string(&c.labels).expect("labels serialize"),
                c.modulus
            )
        })
        .collect();
    s.push_str(&format!(
        "  \"points\": {{\"v\": {}, \"infinite\": [{}], \"fixed\": {}}},\n",
        ps.v(),
        infinite.join(", "),
        serde_json::to_string(ps.fixed_labels()).expect("labels serialize")
    ));
    let list = |items: Vec<String>| -> String {
        if items.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n    {}\n  ]", items.join(",\n    "))
        }
    };
    if let Some(gs) = groups {
        let items = gs
            .iter()
            .map(|g| format!("[{}]", g.iter().map(|&p| point_json(ps, p)).collect::<Vec<_>>().join(", ")))
            .collect();
        s.push_str(&format!("  \"groups\": {},\n", list(items)));
    }
    let items = code
        .words()
        .iter()
        .map(|w| {
            let p: Vec<String> = w
                .points()
                .iter()
                .map(|&x| if x < ps.len() { point_json(ps, x) } else { x.to_string() })
                .collect();
            format!("[{}]", p.join(", "))
        })
        .collect();
    s.push_str(&format!("  \"words\": {}\n", list(items)));
    s.push_str("}\n");
    s
}

pub fn code_to_json(code: &Code) -> String {
    render(code, None)
}

pub fn gdc_to_json(g: &Gdc) -> String {
    render(&g.code, Some(g.groups()))
}

pub fn save_code(path: &Path, code: &Code) -> Result<()> {
    write_file(path, &code_to_json(code))
}

pub fn save_gdc(path: &Path, g: &Gdc) -> Result<()> {
    write_file(path, &gdc_to_json(g))
}
