//! Difference-method development: expand `(v, m, s, M, P, R)` recipes into
//! codes and GDCs, and audit a directory of recipes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds;
use crate::core::{verify_code, verify_gdc, Code, Codeword, Gdc, InfiniteClass, PointSet};
use crate::error::{invalid, read_file, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeKind {
    Code,
    Gdc,
    Starter,
    FrameStarter,
}

/// A development recipe as stored in the catalog.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Recipe {
    pub kind: RecipeKind,
    pub d: u32,
    pub v: u32,
    pub m: i64,
    pub s: u32,
    #[serde(rename = "M")]
    pub step: u32,
    #[serde(default)]
    pub group_type: BTreeMap<String, u32>,
    #[serde(default)]
    pub groups: Option<Vec<Vec<Value>>>,
    #[serde(rename = "P", default)]
    pub p: Vec<Vec<Value>>,
    #[serde(rename = "R", default)]
    pub r: Vec<Vec<Value>>,
    #[serde(default)]
    pub infinite: Vec<InfiniteClass>,
    #[serde(default)]
    pub fixed: Vec<String>,
    pub expected_size: u64,
    #[serde(default)]
    pub size_rule: Option<String>,
    #[serde(default)]
    pub role: Option<String>,
    #[serde(default)]
    pub source: String,
    #[serde(default)]
    pub erratum: Option<String>,
}

/// An expanded recipe.
#[derive(Clone, Debug)]
pub enum Developed {
    Code(Code),
    Gdc(Gdc),
}

impl Developed {
    pub fn code(&self) -> &Code {
        match self {
            Developed::Code(c) => c,
            Developed::Gdc(g) => &g.code,
        }
    }

    pub fn into_gdc(self) -> Gdc {
        match self {
            Developed::Code(c) => Gdc::trivial(c),
            Developed::Gdc(g) => g,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Recipe> {
        Recipe::parse(&read_file(path)?)
    }

    pub fn point_set(&self) -> Result<PointSet> {
        PointSet::new(self.v, self.infinite.clone(), self.fixed.clone())
    }

    /// Multiplier reduced into `0..v`.
    pub fn multiplier(&self) -> u64 {
        if self.v == 0 {
            return 1;
        }
        self.m.rem_euclid(self.v as i64) as u64
    }

    /// Step and multiplier sanity checks shared by codes and starters.
    pub fn check_parameters(&self) -> Result<()> {
        if self.step == 0 || self.v == 0 || !self.v.is_multiple_of(self.step) {
            return Err(Error::Recipe(format!("step M = {} does not divide v = {}", self.step, self.v)));
        }
        if self.s == 0 {
            return Err(Error::Recipe("orbit length s must be at least 1".into()));
        }
        if self.s > 1 && gcd(self.multiplier(), self.v as u64) != 1 {
            return Err(Error::Recipe(format!("multiplier {} is not a unit mod {}", self.m, self.v)));
        }
        Ok(())
    }

    fn parse_words(&self, ps: &PointSet, list: &[Vec<Value>]) -> Result<Vec<[u32; 4]>> {
        list.iter()
            .map(|w| {
                if w.len() != 4 {
                    return Err(invalid(format!("base word of length {}", w.len())));
                }
                let mut t = [0u32; 4];
                for (slot, p) in t.iter_mut().zip(w) {
                    *slot = ps.parse_point(p)?;
                }
                Codeword::new(t)?;
                Ok(t)
            })
            .collect()
    }

    /// Groups declared by the recipe: explicit `groups`, or stride classes
    /// `{i, T+i, 2T+i, ...}` on the residues plus one group of all
    /// non-finite points.
    pub fn groups(&self, ps: &PointSet) -> Result<Vec<Vec<u32>>> {
        if let Some(gs) = &self.groups {
            return gs.iter().map(|g| g.iter().map(|p| ps.parse_point(p)).collect()).collect();
        }
        let extra = ps.len() - ps.v();
        let mut finite: BTreeMap<u32, u32> = BTreeMap::new();
        let mut skipped = extra == 0;
        for (size, count) in &self.group_type {
            let size: u32 = size.parse().map_err(|_| invalid(format!("group size {size:?}")))?;
            let mut count = *count;
            if !skipped && size == extra {
                count -= 1;
                skipped = true;
            }
            if count > 0 {
                finite.insert(size, count);
            }
        }
        if !skipped {
            return Err(invalid(format!("group type has no group for the {extra} non-finite points")));
        }
        if finite.len() != 1 {
            return Err(invalid("stride groups need one finite group size"));
        }
        let (&g, &t) = finite.iter().next().unwrap();
        if g * t != ps.v() {
            return Err(invalid(format!("type {g}^{t} does not cover {} residues", ps.v())));
        }
        let mut groups: Vec<Vec<u32>> = (0..t).map(|i| (0..g).map(|k| k * t + i).collect()).collect();
        if extra > 0 {
            groups.push(ps.nonfinite().collect());
        }
        Ok(groups)
    }

    /// Expand into the full word set; duplicate words are an error.
    pub fn expand(&self) -> Result<Developed> {
        if matches!(self.kind, RecipeKind::Starter | RecipeKind::FrameStarter) {
            return Err(Error::Recipe("starter recipes expand through rooms::expand_starter".into()));
        }
        self.check_parameters()?;
        let ps = self.point_set()?;
        let p = self.parse_words(&ps, &self.p)?;
        let r = self.parse_words(&ps, &self.r)?;
        let words = develop(&ps, self.multiplier(), self.s, self.step, &p, &r)?;
        if words.len() as u64 != self.expected_size {
            return Err(Error::Recipe(format!(
                "expansion has {} words, expected {}",
                words.len(),
                self.expected_size
            )));
        }
        let code = Code::new(ps, self.d, words);
        match self.kind {
            RecipeKind::Gdc => {
                let groups = self.groups(&code.points)?;
                Ok(Developed::Gdc(Gdc::new(code, groups)?))
            }
            _ => Ok(Developed::Code(code)),
        }
    }
}

/// Multiply every residue of `w` by `m` mod v. Non-finite points are only
/// allowed when the multiplier acts trivially.
pub fn apply_multiplier(ps: &PointSet, w: [u32; 4], m: u64) -> Result<[u32; 4]> {
    let v = ps.v() as u64;
    if v == 0 || m % v == 1 % v {
        return Ok(w);
    }
    let mut out = [0u32; 4];
    for (o, &p) in out.iter_mut().zip(&w) {
        if !ps.is_finite(p) {
            return Err(Error::Recipe(format!(
                "multiplier {m} applied to non-finite point {}",
                ps.point(p)
            )));
        }
        *o = ((p as u64 * m) % v) as u32;
    }
    Ok(out)
}

pub fn translate(ps: &PointSet, w: [u32; 4], delta: u64) -> [u32; 4] {
    w.map(|p| ps.translate(p, delta))
}

/// Words `{translate(p * m^i, jM)} ∪ {translate(r, jM)}`, sorted.
pub fn develop(
    ps: &PointSet,
    m: u64,
    s: u32,
    step: u32,
    p: &[[u32; 4]],
    r: &[[u32; 4]],
) -> Result<Vec<Codeword>> {
    let v = ps.v() as u64;
    let mut base = Vec::with_capacity(p.len() * s as usize + r.len());
    for &w in p {
        let mut mi = 1 % v.max(1);
        for _ in 0..s {
            base.push(apply_multiplier(ps, w, mi)?);
            mi = mi * m % v.max(1);
        }
    }
    base.extend_from_slice(r);
    let shifts = v / step as u64;
    let mut words = Vec::with_capacity(base.len() * shifts as usize);
    for &w in &base {
        for j in 0..shifts {
            words.push(Codeword::new(translate(ps, w, j * step as u64))?);
        }
    }
    words.sort_unstable();
    if let Some(pair) = words.windows(2).find(|x| x[0] == x[1]) {
        let pts: Vec<String> = pair[0].points().iter().map(|&x| ps.point(x).to_string()).collect();
        return Err(Error::Recipe(format!("development repeats word <{}>", pts.join(","))));
    }
    Ok(words)
}

/// Closed-form size a recipe's construction promises.
pub fn closed_form_size(r: &Recipe) -> Option<u64> {
    let n = r.v as u64 + r.infinite.iter().map(|c| (c.labels.len() * c.modulus as usize) as u64).sum::<u64>()
        + r.fixed.len() as u64;
    let types: Vec<(u64, u64)> =
        r.group_type.iter().filter_map(|(g, c)| Some((g.parse().ok()?, *c as u64))).collect();
    let big = |size: u64| types.iter().find(|(g, _)| *g == size).map(|&(_, c)| c);
    match r.size_rule.as_deref()? {
        "gdc_uniform" => {
            let (g, t) = *types.first()?;
            let num = g * g * t * (t - 1);
            Some(if r.d == 5 { num / 2 } else { num / 6 })
        }
        "gdc_4t2" => big(4).map(|t| 8 * t * t),
        "gdc_12t9" => big(12).map(|t| 12 * t * (2 * t + 1)),
        "gdc_12t15" => big(12).map(|t| 12 * t * (2 * t + 3)),
        "gdc_1t11" => big(1).map(|t| {
            let u = t / 6;
            6 * u * u + 20 * u
        }),
        "u5" => bounds::u5(n).ok(),
        "u6" => bounds::u6(n).ok(),
        "listed" => Some(r.expected_size),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub kind: RecipeKind,
    pub source: String,
    pub n: u32,
    pub d: u32,
    pub size: Option<usize>,
    pub expected_size: u64,
    pub closed_form: Option<u64>,
    pub min_distance: Option<u32>,
    /// For starter entries: whether the pair system is (frame-)strong.
    pub strong: Option<bool>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> Vec<&EntryReport> {
        self.entries.iter().filter(|e| !e.passed).collect()
    }
}

fn entry_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Expand, verify and size-check one recipe file.
pub fn audit_entry(path: &Path) -> EntryReport {
    let name = entry_name(path);
    let mut rep = EntryReport {
        name,
        kind: RecipeKind::Code,
        source: String::new(),
        n: 0,
        d: 0,
        size: None,
        expected_size: 0,
        closed_form: None,
        min_distance: None,
        strong: None,
        passed: false,
        detail: String::new(),
    };
    let recipe = match Recipe::load(path) {
        Ok(r) => r,
        Err(e) => {
            rep.detail = e.to_string();
            return rep;
        }
    };
    rep.kind = recipe.kind;
    rep.source = recipe.source.clone();
    rep.d = recipe.d;
    rep.expected_size = recipe.expected_size;
    rep.closed_form = closed_form_size(&recipe);
    let outcome = match recipe.kind {
        RecipeKind::Starter | RecipeKind::FrameStarter => crate::rooms::starter_code(&recipe).map(|(code, strong)| {
            rep.strong = Some(strong);
            (Gdc::trivial(code), false)
        }),
        _ => recipe.expand().map(|d| {
            let is_gdc = matches!(d, Developed::Gdc(_));
            (d.into_gdc(), is_gdc)
        }),
    };
    let (gdc, is_gdc) = match outcome {
        Ok(x) => x,
        Err(e) => {
            if let Ok(ps) = recipe.point_set() {
                rep.n = ps.len();
            }
            rep.detail = e.to_string();
            return rep;
        }
    };
    rep.n = gdc.code.n();
    rep.size = Some(gdc.code.len());
    let report = if is_gdc { verify_gdc(&gdc) } else { verify_code(&gdc.code) };
    rep.min_distance = report.min_distance;
    let size_ok = gdc.code.len() as u64 == recipe.expected_size && rep.closed_form == Some(recipe.expected_size);
    rep.passed = report.passed && size_ok;
    rep.detail = if !report.passed {
        report.first_violation(&gdc.code).unwrap_or_else(|| "verification failed".into())
    } else if !size_ok {
        format!(
            "size {} vs stated {} vs closed form {:?}",
            gdc.code.len(),
            recipe.expected_size,
            rep.closed_form
        )
    } else if is_gdc {
        format!("GDC type {}", gdc.type_string())
    } else {
        "ok".into()
    };
    if rep.strong == Some(false) {
        rep.detail.push_str("; pair system is not strong (a pair sum lies in the hole)");
    }
    rep
}

pub fn catalog_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let mut files: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Audit every `*.json` recipe in `dir`, in parallel, reported by name.
pub fn audit_catalog(dir: &Path) -> Result<CatalogReport> {
    let files = catalog_files(dir)?;
    let mut entries: Vec<EntryReport> = files.par_iter().map(|p| audit_entry(p)).collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(CatalogReport { entries })
}

/// Load a catalog entry by name (file stem) from `dir`.
pub fn load_entry(dir: &Path, name: &str) -> Result<Recipe> {
    Recipe::load(&dir.join(format!("{name}.json")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Point;

    fn ps16() -> PointSet {
        PointSet::finite(16)
    }

    #[test]
    fn multiplier_examples() {
        let ps = ps16();
        assert_eq!(apply_multiplier(&ps, [0, 13, 15, 6], 11).unwrap(), [0, 15, 5, 2]);
        assert_eq!(apply_multiplier(&ps, [0, 13, 15, 6], 1).unwrap(), [0, 13, 15, 6]);
        let ps19 = PointSet::finite(19);
        let w = apply_multiplier(&ps19, [1, 3, 0, 2], 4).unwrap();
        assert_eq!(&w[..2], &[4, 12]);
    }

    #[test]
    fn multiplier_rejects_non_finite() {
        let ps = PointSet::new(6, vec![], vec!["f".into()]).unwrap();
        let f = ps.index_of(&Point::Fixed("f".into())).unwrap();
        assert!(apply_multiplier(&ps, [0, 1, 2, f], 5).is_err());
        assert!(apply_multiplier(&ps, [0, 1, 2, f], 7).is_ok());
    }

    #[test]
    fn translate_examples() {
        let ps = PointSet::finite(6);
        assert_eq!(translate(&ps, [0, 1, 2, 3], 2), [2, 3, 4, 5]);
        assert_eq!(translate(&ps, [0, 1, 2, 3], 0), [0, 1, 2, 3]);
        let ps = PointSet::new(48, vec![InfiniteClass { labels: vec!["a".into()], modulus: 3 }], vec![]).unwrap();
        let a0 = ps.index_of(&Point::parse("a@0").unwrap()).unwrap();
        let a1 = ps.index_of(&Point::parse("a@1").unwrap()).unwrap();
        assert_eq!(translate(&ps, [a0, 0, 13, 35], 1), [a1, 1, 14, 36]);
    }

    fn recipe(text: &str) -> Recipe {
        Recipe::parse(text).unwrap()
    }

    #[test]
    fn step_must_divide_v() {
        let r = recipe(r#"{"kind":"code","d":6,"v":6,"m":1,"s":1,"M":4,"P":[[0,1,2,3]],"expected_size":1}"#);
        assert!(matches!(r.expand(), Err(Error::Recipe(_))));
    }

    #[test]
    fn unit_multiplier_required() {
        let r = recipe(r#"{"kind":"code","d":6,"v":6,"m":2,"s":2,"M":1,"P":[[0,1,2,3]],"expected_size":12}"#);
        assert!(r.expand().is_err());
    }

    #[test]
    fn duplicate_orbit_is_error() {
        // <4,0,5,6> is <0,4,1,2> shifted by 4
        let r = recipe(r#"{"kind":"code","d":2,"v":8,"m":1,"s":1,"M":1,"P":[[0,4,1,2],[4,0,5,6]],"expected_size":16}"#);
        assert!(matches!(r.expand(), Err(Error::Recipe(m)) if m.contains("repeats")));
    }

    #[test]
    fn small_development() {
        let r = recipe(r#"{"kind":"code","d":6,"v":6,"m":1,"s":1,"M":2,"P":[[0,1,2,3]],"expected_size":3}"#);
        let c = r.expand().unwrap();
        assert_eq!(c.code().len(), 3);
        assert!(verify_code(c.code()).passed);
    }

    #[test]
    fn stride_groups() {
        let r = recipe(r#"{"kind":"gdc","d":5,"v":16,"m":1,"s":1,"M":16,"group_type":{"2":8},"P":[],"expected_size":0}"#);
        let ps = r.point_set().unwrap();
        let g = r.groups(&ps).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g[5], vec![5, 13]);
    }
}
