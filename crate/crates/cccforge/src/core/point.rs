use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Result};

/// A coordinate of the ambient point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(u32),
    Infinite { label: String, sub: u32 },
    Fixed(String),
}

impl Point {
    fn rank(&self) -> u8 {
        match self {
            Point::Finite(_) => 0,
            Point::Infinite { .. } => 1,
            Point::Fixed(_) => 2,
        }
    }

    /// Parse the JSON form: an integer, `"a@2"` or `"f"`.
    pub fn from_json(v: &Value) -> Result<Point> {
        match v {
            Value::Number(n) => n
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .map(Point::Finite)
                .ok_or_else(|| invalid(format!("point {n} is not a nonnegative residue"))),
            Value::String(s) => Point::parse(s),
            other => Err(invalid(format!("point {other} is neither integer nor string"))),
        }
    }

    pub fn parse(s: &str) -> Result<Point> {
        if let Ok(x) = s.parse::<u32>() {
            return Ok(Point::Finite(x));
        }
        match s.split_once('@') {
            Some((label, sub)) => {
                check_label(label)?;
                let sub = sub
                    .parse::<u32>()
                    .map_err(|_| invalid(format!("bad subscript in point {s:?}")))?;
                Ok(Point::Infinite { label: label.to_string(), sub })
            }
            None => {
                check_label(s)?;
                Ok(Point::Fixed(s.to_string()))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Point::Finite(x) => Value::from(*x),
            other => Value::String(other.to_string()),
        }
    }
}

pub(crate) fn check_label(label: &str) -> Result<()> {
    let ok = !label.is_empty()
        && !label.contains('@')
        && !label.chars().all(|c| c.is_ascii_digit())
        && label.chars().all(|c| !c.is_whitespace());
    if ok {
        Ok(())
    } else {
        Err(invalid(format!("bad point label {label:?}")))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        use Point::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Infinite { label: la, sub: sa }, Infinite { label: lb, sub: sb }) => {
                la.cmp(lb).then(sa.cmp(sb))
            }
            (Fixed(a), Fixed(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinite { label, sub } => write!(f, "{label}@{sub}"),
            Point::Fixed(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteClass {
    pub labels: Vec<String>,
    pub modulus: u32,
}

/// Finite residues `0..v`, infinite classes `label × Z_u`, and fixed labels.
///
/// Points are addressed by a dense index whose order is the total point
/// order, so comparing indices compares points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    v: u32,
    infinite: Vec<InfiniteClass>,
    fixed: Vec<String>,
    // (label, modulus, first index), sorted by label
    inf_slots: Vec<(String, u32, u32)>,
    fixed_sorted: Vec<String>,
    fixed_base: u32,
    len: u32,
}

impl PointSet {
    pub fn new(v: u32, infinite: Vec<InfiniteClass>, fixed: Vec<String>) -> Result<PointSet> {
        let mut labels: Vec<(String, u32)> = Vec::new();
        for class in &infinite {
            if class.modulus == 0 {
                return Err(invalid("infinite class with modulus 0"));
            }
            for l in &class.labels {
                check_label(l)?;
                labels.push((l.clone(), class.modulus));
            }
        }
        for l in &fixed {
            check_label(l)?;
        }
        let mut all: Vec<&str> = labels.iter().map(|(l, _)| l.as_str()).collect();
        all.extend(fixed.iter().map(|s| s.as_str()));
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("label {:?} used twice", w[0])));
        }
        labels.sort();
        let mut next = v;
        let mut inf_slots = Vec::with_capacity(labels.len());
        for (l, u) in labels {
            inf_slots.push((l, u, next));
            next += u;
        }
        let mut fixed_sorted = fixed.clone();
        fixed_sorted.sort();
        let fixed_base = next;
        let len = next + fixed_sorted.len() as u32;
        Ok(PointSet { v, infinite, fixed, inf_slots, fixed_sorted, fixed_base, len })
    }

    /// `n` plain finite points `0..n`.
    pub fn finite(n: u32) -> PointSet {
        PointSet::new(n, Vec::new(), Vec::new()).expect("finite point set is always valid")
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn infinite_classes(&self) -> &[InfiniteClass] {
        &self.infinite
    }

    pub fn fixed_labels(&self) -> &[String] {
        &self.fixed
    }

    /// Total number of points `n`.
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, p: &Point) -> Option<u32> {
        match p {
            Point::Finite(x) => (*x < self.v).then_some(*x),
            Point::Infinite { label, sub } => {
                let i = self.inf_slots.binary_search_by(|s| s.0.as_str().cmp(label)).ok()?;
                let (_, u, base) = &self.inf_slots[i];
                (sub < u).then_some(base + sub)
            }
            Point::Fixed(l) => {
                let i = self.fixed_sorted.binary_search(l).ok()?;
                Some(self.fixed_base + i as u32)
            }
        }
    }

    pub fn index_of(&self, p: &Point) -> Result<u32> {
        self.index(p).ok_or_else(|| invalid(format!("point {p} is not in the point set")))
    }

    pub fn point(&self, idx: u32) -> Point {
        assert!(idx < self.len, "point index {idx} out of range");
        if idx < self.v {
            return Point::Finite(idx);
        }
        if idx >= self.fixed_base {
            return Point::Fixed(self.fixed_sorted[(idx - self.fixed_base) as usize].clone());
        }
        let slot = self.inf_slots.partition_point(|s| s.2 <= idx) - 1;
        let (label, _, base) = &self.inf_slots[slot];
        Point::Infinite { label: label.clone(), sub: idx - base }
    }

    pub fn is_finite(&self, idx: u32) -> bool {
        idx < self.v
    }

    /// Image of a point under `+delta`: residues mod v, infinite subscripts
    /// mod their class modulus, fixed points unchanged.
    pub fn translate(&self, idx: u32, delta: u64) -> u32 {
        if idx < self.v {
            return ((idx as u64 + delta) % self.v as u64) as u32;
        }
        if idx >= self.fixed_base {
            return idx;
        }
        let slot = self.inf_slots.partition_point(|s| s.2 <= idx) - 1;
        let (_, u, base) = &self.inf_slots[slot];
        base + ((idx - base) as u64 + delta).rem_euclid(*u as u64) as u32
    }

    /// Indices of every non-finite point, in order.
    pub fn nonfinite(&self) -> std::ops::Range<u32> {
        self.v..self.len
    }

    pub fn parse_point(&self, v: &Value) -> Result<u32> {
        self.index_of(&Point::from_json(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed() -> PointSet {
        PointSet::new(
            6,
            vec![InfiniteClass { labels: vec!["b".into(), "a".into()], modulus: 3 }],
            vec!["f".into()],
        )
        .unwrap()
    }

    #[test]
    fn total_order_follows_variant_then_fields() {
        let a = Point::Finite(5);
        let b = Point::Infinite { label: "a".into(), sub: 1 };
        let c = Point::Infinite { label: "a".into(), sub: 2 };
        let d = Point::Infinite { label: "b".into(), sub: 0 };
        let e = Point::Fixed("a".into());
        let mut v = vec![e.clone(), d.clone(), c.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, c, d, e]);
    }

    #[test]
    fn indices_respect_total_order() {
        let ps = mixed();
        assert_eq!(ps.len(), 6 + 6 + 1);
        let pts: Vec<Point> = (0..ps.len()).map(|i| ps.point(i)).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(ps.index(p), Some(i as u32));
        }
    }

    #[test]
    fn translate_moves_subscripts_and_keeps_fixed() {
        let ps = mixed();
        let a2 = ps.index_of(&Point::parse("a@2").unwrap()).unwrap();
        assert_eq!(ps.point(ps.translate(a2, 1)), Point::parse("a@0").unwrap());
        let f = ps.index_of(&Point::Fixed("f".into())).unwrap();
        assert_eq!(ps.translate(f, 5), f);
        assert_eq!(ps.translate(4, 4), 2);
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "17", "a@0", "bb@12", "f"] {
            assert_eq!(Point::parse(s).unwrap().to_string(), s);
        }
        assert!(Point::parse("@1").is_err());
        assert!(Point::parse("a@x").is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = PointSet::new(
            2,
            vec![InfiniteClass { labels: vec!["a".into()], modulus: 2 }],
            vec!["a".into()],
        );
        assert!(r.is_err());
    }
}
