use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::core::{group_type_of, type_string};
use crate::error::{invalid, read_file, write_file, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Pbd,
    Gdd,
    Td,
    Rgdd,
}

/// Points `0..v`, blocks, and optionally groups and resolution classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDesign {
    pub kind: DesignKind,
    pub v: u32,
    pub blocks: Vec<Vec<u32>>,
    /// Required for GDD, TD and RGDD. For a TD, group `i` is listed `i`-th.
    pub groups: Vec<Vec<u32>>,
    /// Block indices of each parallel class (RGDD only).
    pub classes: Vec<Vec<usize>>,
    pub k_set: Vec<u32>,
    pub lambda: u32,
    pub source: String,
}

impl BlockDesign {
    pub fn pbd(v: u32, blocks: Vec<Vec<u32>>, lambda: u32) -> BlockDesign {
        let k_set = block_sizes(&blocks);
        BlockDesign { kind: DesignKind::Pbd, v, blocks, groups: Vec::new(), classes: Vec::new(), k_set, lambda, source: String::new() }
    }

    pub fn gdd(v: u32, groups: Vec<Vec<u32>>, blocks: Vec<Vec<u32>>) -> BlockDesign {
        let k_set = block_sizes(&blocks);
        BlockDesign { kind: DesignKind::Gdd, v, blocks, groups, classes: Vec::new(), k_set, lambda: 1, source: String::new() }
    }

    pub fn group_type(&self) -> BTreeMap<u32, u32> {
        group_type_of(&self.groups)
    }

    pub fn type_string(&self) -> String {
        type_string(&self.group_type())
    }

    /// Group index of every point (`u32::MAX` when ungrouped).
    pub fn group_index(&self) -> Vec<u32> {
        let mut g = vec![u32::MAX; self.v as usize];
        for (i, grp) in self.groups.iter().enumerate() {
            for &p in grp {
                if let Some(s) = g.get_mut(p as usize) {
                    *s = i as u32;
                }
            }
        }
        g
    }

    /// Pairs covered by blocks, counted with multiplicity.
    pub fn covered_pairs(&self) -> u64 {
        self.blocks.iter().map(|b| (b.len() * b.len().saturating_sub(1) / 2) as u64).sum()
    }
}

fn block_sizes(blocks: &[Vec<u32>]) -> Vec<u32> {
    let mut k: Vec<u32> = blocks.iter().map(|b| b.len() as u32).collect();
    k.sort_unstable();
    k.dedup();
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    pub passed: bool,
    pub violations: Vec<String>,
}

const MAX_REPORTED: usize = 20;

/// Checks the axioms of the design's declared kind (λ-coverage of every
/// admissible pair, group partition, TD shape, resolution classes).
pub fn verify_design(d: &BlockDesign) -> DesignReport {
    let mut vio: Vec<String> = Vec::new();
    let v = d.v as usize;
    for (bi, b) in d.blocks.iter().enumerate() {
        if !d.k_set.contains(&(b.len() as u32)) {
            vio.push(format!("block {bi} has size {} outside K = {:?}", b.len(), d.k_set));
        }
        let mut s = b.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) || s.last().is_some_and(|&x| x as usize >= v) {
            vio.push(format!("block {bi} repeats a point or leaves the point set"));
        }
    }
    if !vio.is_empty() {
        return DesignReport { passed: false, violations: vio };
    }
    let grouped = d.kind != DesignKind::Pbd;
    let group_of = d.group_index();
    if grouped {
        let mut count = vec![0u32; v];
        for g in &d.groups {
            for &p in g {
                if (p as usize) < v {
                    count[p as usize] += 1;
                } else {
                    vio.push(format!("group point {p} outside the point set"));
                }
            }
        }
        if let Some(p) = count.iter().position(|&c| c != 1) {
            vio.push(format!("groups do not partition the points (point {p} in {} groups)", count[p]));
        }
        if d.groups.len() < 2 {
            vio.push("a GDD needs at least two groups".into());
        }
    }
    let mut cover = vec![0u32; v * v];
    for b in &d.blocks {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                let (x, y) = (x.min(y) as usize, x.max(y) as usize);
                cover[x * v + y] += 1;
            }
        }
    }
    'pairs: for x in 0..v {
        for y in x + 1..v {
            let same = grouped && group_of[x] == group_of[y] && group_of[x] != u32::MAX;
            let want = if same { 0 } else { d.lambda };
            let got = cover[x * v + y];
            if got != want {
                vio.push(if same {
                    format!("pair {{{x}, {y}}} lies in a group and in {got} blocks")
                } else {
                    format!("pair {{{x}, {y}}} covered {got} times, expected {want}")
                });
                if vio.len() >= MAX_REPORTED {
                    break 'pairs;
                }
            }
        }
    }
    if d.kind == DesignKind::Td {
        let k = d.groups.len();
        let n = d.groups.first().map_or(0, |g| g.len());
        if d.groups.iter().any(|g| g.len() != n) {
            vio.push("TD groups have unequal sizes".into());
        }
        if d.blocks.len() != n * n {
            vio.push(format!("TD has {} blocks, expected {}", d.blocks.len(), n * n));
        }
        if d.blocks.iter().any(|b| b.len() != k) {
            vio.push("TD block is not a transversal".into());
        }
    }
    if d.kind == DesignKind::Rgdd {
        let mut used = vec![0u32; d.blocks.len()];
        for (ci, class) in d.classes.iter().enumerate() {
            let mut seen = vec![false; v];
            let mut ok = true;
            for &bi in class {
                match d.blocks.get(bi) {
                    Some(b) => {
                        used[bi] += 1;
                        for &p in b {
                            ok &= !std::mem::replace(&mut seen[p as usize], true);
                        }
                    }
                    None => ok = false,
                }
            }
            if !ok || seen.iter().any(|s| !s) {
                vio.push(format!("class {ci} is not a parallel class"));
            }
        }
        if used.iter().any(|&u| u != 1) {
            vio.push("resolution classes do not partition the blocks".into());
        }
    }
    DesignReport { passed: vio.is_empty(), violations: vio }
}

#[derive(Serialize, Deserialize)]
struct DesignJson {
    kind: DesignKind,
    #[serde(default)]
    v: Option<u32>,
    #[serde(rename = "K", default)]
    k: Vec<u32>,
    #[serde(rename = "type", default, skip_serializing_if = "BTreeMap::is_empty")]
    group_type: BTreeMap<String, u32>,
    #[serde(default = "one")]
    lambda: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    groups: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    classes: Vec<Vec<usize>>,
    #[serde(default)]
    source: String,
}

fn one() -> u32 {
    1
}

/// Parse a design file. A declared `type` must match the groups.
pub fn parse_design(text: &str) -> Result<BlockDesign> {
    let raw: DesignJson = serde_json::from_str(text)?;
    let max_point = raw.blocks.iter().chain(&raw.groups).flatten().max().map_or(0, |&x| x + 1);
    let v = raw.v.unwrap_or(max_point);
    if max_point > v {
        return Err(invalid(format!("point {} outside v = {v}", max_point - 1)));
    }
    let k_set = if raw.k.is_empty() { block_sizes(&raw.blocks) } else { raw.k };
    let d = BlockDesign {
        kind: raw.kind,
        v,
        blocks: raw.blocks,
        groups: raw.groups,
        classes: raw.classes,
        k_set,
        lambda: raw.lambda,
        source: raw.source,
    };
    if !raw.group_type.is_empty() {
        let declared: BTreeMap<u32, u32> = raw
            .group_type
            .iter()
            .map(|(g, c)| g.parse().map(|g| (g, *c)).map_err(|_| invalid(format!("group size {g:?}"))))
            .collect::<Result<_>>()?;
        if declared != d.group_type() {
            return Err(invalid(format!(
                "declared type {} but groups give {}",
                type_string(&declared),
                d.type_string()
            )));
        }
    }
    Ok(d)
}

pub fn load_design(path: &Path) -> Result<BlockDesign> {
    parse_design(&read_file(path)?)
}

pub fn design_to_json(d: &BlockDesign) -> String {
    let raw = DesignJson {
        kind: d.kind,
        v: Some(d.v),
        k: d.k_set.clone(),
        group_type: d.group_type().iter().map(|(g, c)| (g.to_string(), *c)).collect(),
        lambda: d.lambda,
        groups: d.groups.clone(),
        blocks: d.blocks.clone(),
        classes: d.classes.clone(),
        source: d.source.clone(),
    };
    let mut s = serde_json::to_string(&raw).expect("design serializes");
    s.push('\n');
    s
}

pub fn save_design(path: &Path, d: &BlockDesign) -> Result<()> {
    write_file(path, &design_to_json(d))
}
