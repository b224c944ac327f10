use rayon::prelude::*;
use serde::Serialize;

use super::code::{Code, Gdc};
use super::codeword::{distance, Codeword, SYMBOLS};

/// Outcome of checking a code or GDC. Failures are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub n: u32,
    pub size: usize,
    pub declared_distance: u32,
    /// `None` when fewer than two valid words exist.
    pub min_distance: Option<u32>,
    /// Indices (in sorted order) of words with a repeated or foreign point.
    pub composition_violations: Vec<usize>,
    pub duplicates: usize,
    /// Lexicographically first pair closer than the declared distance.
    pub violating_pair: Option<ViolatingPair>,
    /// (word index, group index) for every group hit twice by a word.
    pub group_violations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolatingPair {
    pub first: usize,
    pub second: usize,
    pub distance: u32,
}

impl VerificationReport {
    /// One-line description of the first problem, if any.
    pub fn first_violation(&self, code: &Code) -> Option<String> {
        let show = |i: usize| {
            let w = code.words()[i];
            let p: Vec<String> = w
                .points()
                .iter()
                .map(|&x| {
                    if x < code.n() {
                        code.points.point(x).to_string()
                    } else {
                        format!("#{x}")
                    }
                })
                .collect();
            format!("<{}>", p.join(","))
        };
        if let Some(&i) = self.composition_violations.first() {
            return Some(format!("word {} has composition other than [2,1,1]", show(i)));
        }
        if let Some(v) = &self.violating_pair {
            return Some(format!(
                "words {} and {} are at distance {} < {}",
                show(v.first),
                show(v.second),
                v.distance,
                self.declared_distance
            ));
        }
        if let Some(&(w, _)) = self.group_violations.first() {
            return Some(format!("word {} meets a group twice", show(w)));
        }
        None
    }
}

fn pair_key(a: u32, b: u32) -> u64 {
    let (x, y) = if a < b { (a, b) } else { (b, a) };
    ((x as u64) << 32) | y as u64
}

struct Scan {
    min: Option<u32>,
    violation: Option<(usize, usize, u32)>,
}

fn merge(a: Scan, b: Scan) -> Scan {
    let min = match (a.min, b.min) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let violation = match (a.violation, b.violation) {
        (Some(x), Some(y)) => Some(if (x.0, x.1) <= (y.0, y.1) { x } else { y }),
        (x, y) => x.or(y),
    };
    Scan { min, violation }
}

/// Compare every pair of words sharing a bucket key.
fn scan_buckets(words: &[Codeword], mut keyed: Vec<(u64, u32)>, d: u32) -> Scan {
    keyed.par_sort_unstable();
    let mut starts = Vec::new();
    for i in 0..keyed.len() {
        if i == 0 || keyed[i].0 != keyed[i - 1].0 {
            starts.push(i);
        }
    }
    starts.push(keyed.len());
    starts
        .par_windows(2)
        .map(|r| {
            let bucket = &keyed[r[0]..r[1]];
            let mut s = Scan { min: None, violation: None };
            for (x, &(_, i)) in bucket.iter().enumerate() {
                for &(_, j) in &bucket[x + 1..] {
                    if i == j {
                        continue;
                    }
                    let (i, j) = (i.min(j) as usize, i.max(j) as usize);
                    let dist = distance(&words[i], &words[j]);
                    s.min = Some(s.min.map_or(dist, |m| m.min(dist)));
                    if dist < d && s.violation.is_none_or(|v| (i, j) < (v.0, v.1)) {
                        s.violation = Some((i, j, dist));
                    }
                }
            }
            s
        })
        .reduce(|| Scan { min: None, violation: None }, merge)
}

fn has_repeat(mut keys: Vec<u64>) -> bool {
    keys.par_sort_unstable();
    keys.windows(2).any(|w| w[0] == w[1])
}

/// Exact minimum distance and first violating pair, via support-pair
/// buckets. Only words sharing two support points can be closer than 6;
/// the remaining cases are 6 (a shared point with equal symbol), 7 (a
/// shared point) and 8.
pub fn min_distance_fast(words: &[Codeword], d: u32) -> (Option<u32>, Option<(usize, usize, u32)>) {
    let idx: Vec<usize> = (0..words.len()).filter(|&i| words[i].is_valid()).collect();
    if idx.len() < 2 {
        return (None, None);
    }
    let mut keyed = Vec::with_capacity(idx.len() * 6);
    for &i in &idx {
        let p = words[i].points();
        for a in 0..4 {
            for b in a + 1..4 {
                keyed.push((pair_key(p[a], p[b]), i as u32));
            }
        }
    }
    let close = scan_buckets(words, keyed, d.min(7));
    // a valid word has distinct points, so its own (point, symbol) keys never collide
    let same_symbol = || {
        has_repeat(
            idx.iter()
                .flat_map(|&i| {
                    let p = words[i].points();
                    (0..4).map(move |k| (p[k] as u64) * 4 + SYMBOLS[k] as u64)
                })
                .collect(),
        )
    };
    let shares_point = || has_repeat(idx.iter().flat_map(|&i| words[i].points()).map(u64::from).collect());
    let min = match close.min {
        Some(m) if m <= 6 => m,
        other => {
            let fallback = if same_symbol() {
                6
            } else if shares_point() {
                7
            } else {
                8
            };
            other.map_or(fallback, |m| m.min(fallback))
        }
    };
    let violation = if d <= 6 || min >= d {
        close.violation
    } else {
        // distances 6 and 7 need only one shared point
        let keyed = idx
            .iter()
            .flat_map(|&i| words[i].points().map(|p| (p as u64, i as u32)))
            .collect();
        let one = scan_buckets(words, keyed, d.min(8));
        if one.violation.is_some() {
            one.violation
        } else {
            brute_violation(words, &idx, d)
        }
    };
    (Some(min), violation)
}

fn brute_violation(words: &[Codeword], idx: &[usize], d: u32) -> Option<(usize, usize, u32)> {
    for (x, &i) in idx.iter().enumerate() {
        for &j in &idx[x + 1..] {
            let dist = distance(&words[i], &words[j]);
            if dist < d {
                return Some((i, j, dist));
            }
        }
    }
    None
}

/// Reference kernel: every pair, in parallel. Used as the oracle for
/// [`min_distance_fast`].
pub fn min_distance_bruteforce(words: &[Codeword]) -> Option<u32> {
    let idx: Vec<usize> = (0..words.len()).filter(|&i| words[i].is_valid()).collect();
    idx.par_iter()
        .enumerate()
        .filter_map(|(x, &i)| idx[x + 1..].iter().map(|&j| distance(&words[i], &words[j])).min())
        .min()
}

/// Distance, composition and duplicate checks against the declared `d`.
pub fn verify_code(code: &Code) -> VerificationReport {
    let n = code.n();
    let words = code.words();
    let composition_violations: Vec<usize> = (0..words.len())
        .filter(|&i| !words[i].is_valid() || words[i].points().iter().any(|&p| p >= n))
        .collect();
    let duplicates = words.windows(2).filter(|w| w[0] == w[1]).count();
    let clean: Vec<Codeword> = words
        .iter()
        .map(|w| if w.points().iter().any(|&p| p >= n) { Codeword([0; 4]) } else { *w })
        .collect();
    let (min_distance, violation) = min_distance_fast(&clean, code.d);
    let passed = composition_violations.is_empty() && violation.is_none();
    VerificationReport {
        passed,
        n,
        size: words.len(),
        declared_distance: code.d,
        min_distance,
        composition_violations,
        duplicates,
        violating_pair: violation.map(|(first, second, distance)| ViolatingPair { first, second, distance }),
        group_violations: Vec::new(),
    }
}

/// [`verify_code`] plus the rule that a word meets each group at most once.
pub fn verify_gdc(g: &Gdc) -> VerificationReport {
    let mut report = verify_code(&g.code);
    let n = g.code.n();
    for (wi, w) in g.code.words().iter().enumerate() {
        let pts = w.points();
        if pts.iter().any(|&p| p >= n) {
            continue;
        }
        let mut seen: Vec<u32> = Vec::with_capacity(4);
        for p in pts {
            let gi = g.group_of(p);
            if seen.contains(&gi) {
                if !report.group_violations.contains(&(wi, gi as usize)) {
                    report.group_violations.push((wi, gi as usize));
                }
            } else {
                seen.push(gi);
            }
        }
    }
    report.passed &= report.group_violations.is_empty();
    report
}
