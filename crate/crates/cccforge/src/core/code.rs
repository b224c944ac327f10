use std::collections::BTreeMap;

use super::codeword::Codeword;
use super::point::PointSet;
use crate::error::{invalid, Result};

/// A set of [2,1,1] words over a point set with a declared minimum distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub points: PointSet,
    pub d: u32,
    words: Vec<Codeword>,
}

impl Code {
    /// Words are kept sorted; duplicates are kept so verification can count them.
    pub fn new(points: PointSet, d: u32, mut words: Vec<Codeword>) -> Code {
        words.sort_unstable();
        Code { points, d, words }
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.points.len()
    }

    pub fn into_words(self) -> Vec<Codeword> {
        self.words
    }

    /// Number of words with a nonzero entry at each coordinate.
    pub fn coordinate_census(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.n() as usize];
        for w in &self.words {
            for p in w.points() {
                if (p as usize) < c.len() {
                    c[p as usize] += 1;
                }
            }
        }
        c
    }
}

/// A code together with a partition of its points into groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gdc {
    pub code: Code,
    groups: Vec<Vec<u32>>,
    group_of: Vec<u32>,
}

impl Gdc {
    /// Fails unless `groups` partitions the point set exactly.
    pub fn new(code: Code, mut groups: Vec<Vec<u32>>) -> Result<Gdc> {
        let n = code.n() as usize;
        let mut group_of = vec![u32::MAX; n];
        for g in groups.iter_mut() {
            g.sort_unstable();
        }
        groups.sort();
        for (gi, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(invalid("empty group"));
            }
            for &p in g {
                let slot = group_of
                    .get_mut(p as usize)
                    .ok_or_else(|| invalid(format!("group point {p} outside point set")))?;
                if *slot != u32::MAX {
                    return Err(invalid(format!("point {p} lies in two groups")));
                }
                *slot = gi as u32;
            }
        }
        if let Some(p) = group_of.iter().position(|&g| g == u32::MAX) {
            return Err(invalid(format!("point {p} is in no group")));
        }
        Ok(Gdc { code, groups, group_of })
    }

    /// Plain code viewed as a GDC of type 1^n.
    pub fn trivial(code: Code) -> Gdc {
        let groups = (0..code.n()).map(|i| vec![i]).collect();
        Gdc::new(code, groups).expect("singletons partition")
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn group_of(&self, p: u32) -> u32 {
        self.group_of[p as usize]
    }

    /// Group-size multiset as `size -> count`.
    pub fn group_type(&self) -> BTreeMap<u32, u32> {
        group_type_of(&self.groups)
    }

    pub fn type_string(&self) -> String {
        type_string(&self.group_type())
    }
}

pub fn group_type_of(groups: &[Vec<u32>]) -> BTreeMap<u32, u32> {
    let mut t = BTreeMap::new();
    for g in groups {
        *t.entry(g.len() as u32).or_insert(0) += 1;
    }
    t
}

/// Exponential notation with larger groups first, e.g. `12^4 9^1`.
pub fn type_string(t: &BTreeMap<u32, u32>) -> String {
    t.iter()
        .rev()
        .map(|(g, c)| format!("{g}^{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}
