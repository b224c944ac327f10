//! Starters, adders, Room squares and Room frames of type 2^t, and the
//! codes they carry.
//!
//! Groups are cyclic, `Z_g`. A plain starter lives in `Z_g` with `g` odd;
//! a frame starter avoids the hole `H = {0, g/2}`. Rows and columns are
//! indexed by `Z_g`; the extra symbol of a Room square is `INF`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::core::{verify_code, Code, Codeword, PointSet};
use crate::devgen::{Recipe, RecipeKind};
use crate::error::{domain, invalid, Error, Result};

/// The symbol adjoined to `Z_g` in a Room square.
pub const INF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Starter {
    pub g: u32,
    /// Frame starters avoid `{0, g/2}`.
    pub frame: bool,
    pub pairs: Vec<(u32, u32)>,
}

impl Starter {
    pub fn new(g: u32, frame: bool, pairs: Vec<(u32, u32)>) -> Result<Starter> {
        if g == 0 || (frame && g % 2 == 1) {
            return Err(domain(format!("no {} starter in Z_{g}", if frame { "frame" } else { "plain" })));
        }
        if pairs.iter().any(|&(s, t)| s >= g || t >= g) {
            return Err(invalid("pair element outside the group"));
        }
        Ok(Starter { g, frame, pairs })
    }

    /// Elements of the hole (just `{0}` for a plain starter).
    pub fn hole(&self) -> Vec<u32> {
        if self.frame {
            vec![0, self.g / 2]
        } else {
            vec![0]
        }
    }

    fn in_hole(&self, x: u32) -> bool {
        x == 0 || (self.frame && x == self.g / 2)
    }

    pub fn expected_pairs(&self) -> usize {
        (self.g as usize - self.hole().len()) / 2
    }

    pub fn sums(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(s, t)| (s + t) % self.g).collect()
    }

    /// The starter `-S`.
    pub fn negate(&self) -> Starter {
        let g = self.g;
        let pairs = self.pairs.iter().map(|&(s, t)| ((g - s) % g, (g - t) % g)).collect();
        Starter { g, frame: self.frame, pairs }
    }
}

fn pair_of(v: &[serde_json::Value]) -> Result<(u32, u32)> {
    let get = |x: &serde_json::Value| {
        x.as_u64().and_then(|y| u32::try_from(y).ok()).ok_or_else(|| invalid(format!("starter element {x}")))
    };
    match v {
        [a, b] => Ok((get(a)?, get(b)?)),
        _ => Err(invalid(format!("starter entry with {} elements", v.len()))),
    }
}

/// Pairs `m^i · P` for `i < s`, plus `R`.
pub fn expand_starter(r: &Recipe) -> Result<Starter> {
    let frame = match r.kind {
        RecipeKind::Starter => false,
        RecipeKind::FrameStarter => true,
        _ => return Err(Error::Recipe("not a starter recipe".into())),
    };
    r.check_parameters()?;
    let g = r.v;
    let m = r.multiplier();
    let mut pairs = Vec::new();
    for p in &r.p {
        let (s, t) = pair_of(p)?;
        let mut mi = 1u64;
        for _ in 0..r.s {
            pairs.push(((s as u64 * mi % g as u64) as u32, (t as u64 * mi % g as u64) as u32));
            mi = mi * m % g as u64;
        }
    }
    for p in &r.r {
        pairs.push(pair_of(p)?);
    }
    let st = Starter::new(g, frame, pairs)?;
    if st.pairs.len() != st.expected_pairs() {
        return Err(Error::Recipe(format!(
            "{} pairs, a {}starter of Z_{g} needs {}",
            st.pairs.len(),
            if frame { "frame " } else { "" },
            st.expected_pairs()
        )));
    }
    Ok(st)
}

/// Elements cover `G \ H` once and the differences `±(s - t)` cover it once.
pub fn is_starter(st: &Starter) -> bool {
    let g = st.g;
    let mut seen = vec![0u32; g as usize];
    let mut diff = vec![0u32; g as usize];
    for &(s, t) in &st.pairs {
        seen[s as usize] += 1;
        seen[t as usize] += 1;
        diff[((s + g - t) % g) as usize] += 1;
        diff[((t + g - s) % g) as usize] += 1;
    }
    (0..g).all(|x| {
        let want = u32::from(!st.in_hole(x));
        seen[x as usize] == want && diff[x as usize] == want
    })
}

/// Starter whose pair sums are distinct and avoid the hole.
pub fn is_strong(st: &Starter) -> bool {
    let sums = st.sums();
    let distinct: HashSet<u32> = sums.iter().copied().collect();
    is_starter(st) && distinct.len() == sums.len() && sums.iter().all(|&x| !st.in_hole(x))
}

/// Pairs whose sum lands in the hole; empty for a strong starter.
pub fn hole_sums(st: &Starter) -> Vec<(u32, u32)> {
    st.pairs.iter().copied().filter(|&(s, t)| st.in_hole((s + t) % st.g)).collect()
}

/// `a_i = -(s_i + t_i)`, so that `S + A = -S`.
pub fn adder_from_strong(st: &Starter) -> Result<Vec<u32>> {
    if !is_strong(st) {
        return Err(domain(format!("starter in Z_{} is not strong", st.g)));
    }
    Ok(st.sums().iter().map(|&x| (st.g - x) % st.g).collect())
}

/// `S + A` is a starter and the entries of `A` are distinct and outside the hole.
pub fn is_adder(st: &Starter, a: &[u32]) -> bool {
    if a.len() != st.pairs.len() {
        return false;
    }
    let distinct: HashSet<u32> = a.iter().copied().collect();
    if distinct.len() != a.len() || a.iter().any(|&x| x >= st.g || st.in_hole(x)) {
        return false;
    }
    let shifted = Starter {
        g: st.g,
        frame: st.frame,
        pairs: st.pairs.iter().zip(a).map(|(&(s, t), &x)| ((s + x) % st.g, (t + x) % st.g)).collect(),
    };
    is_starter(&shifted)
}

/// Every adder of `st`, by backtracking (intended for small groups).
pub fn all_adders(st: &Starter) -> Vec<Vec<u32>> {
    fn go(st: &Starter, i: usize, a: &mut Vec<u32>, used: &mut [bool], hit: &mut [bool], out: &mut Vec<Vec<u32>>) {
        let g = st.g;
        if i == st.pairs.len() {
            out.push(a.clone());
            return;
        }
        let (s, t) = st.pairs[i];
        for x in 0..g {
            if used[x as usize] || st.in_hole(x) {
                continue;
            }
            let (p, q) = (((s + x) % g) as usize, ((t + x) % g) as usize);
            if hit[p] || hit[q] || st.in_hole(p as u32) || st.in_hole(q as u32) {
                continue;
            }
            used[x as usize] = true;
            hit[p] = true;
            hit[q] = true;
            a.push(x);
            go(st, i + 1, a, used, hit, out);
            a.pop();
            used[x as usize] = false;
            hit[p] = false;
            hit[q] = false;
        }
    }
    let mut out = Vec::new();
    let g = st.g as usize;
    go(st, 0, &mut Vec::new(), &mut vec![false; g], &mut vec![false; g], &mut out);
    out
}

/// Partial array of unordered symbol pairs, rows and columns indexed by `Z_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoomArray {
    pub side: u32,
    /// Frame of type 2^(side/2) with holes `{i, i + side/2}`.
    pub frame: bool,
    pub cells: BTreeMap<(u32, u32), (u32, u32)>,
}

impl RoomArray {
    fn hole_of(&self, x: u32) -> Option<u32> {
        if x == INF {
            None
        } else if self.frame {
            Some(x % (self.side / 2))
        } else {
            Some(x)
        }
    }

    fn symbols(&self) -> Vec<u32> {
        let mut s: Vec<u32> = (0..self.side).collect();
        if !self.frame {
            s.push(INF);
        }
        s
    }

    fn same_hole(&self, x: u32, y: u32) -> bool {
        self.frame && self.hole_of(x) == self.hole_of(y)
    }
}

/// Pair `{s_i + γ, t_i + γ}` at `(γ, γ - a_i)`; plain squares add `{∞, γ}` at `(γ, γ)`.
pub fn room_from_starter(st: &Starter, adder: &[u32]) -> Result<RoomArray> {
    if adder.len() != st.pairs.len() {
        return Err(invalid("adder length differs from pair count"));
    }
    let g = st.g;
    let mut cells = BTreeMap::new();
    for gamma in 0..g {
        if !st.frame {
            cells.insert((gamma, gamma), (gamma, INF));
        }
        for (&(s, t), &a) in st.pairs.iter().zip(adder) {
            let col = (gamma + g - a % g) % g;
            let (x, y) = ((s + gamma) % g, (t + gamma) % g);
            let pair = (x.min(y), x.max(y));
            if let Some(old) = cells.insert((gamma, col), pair) {
                return Err(Error::Construction(format!(
                    "cell ({gamma}, {col}) would hold both {old:?} and {pair:?}"
                )));
            }
        }
    }
    Ok(RoomArray { side: g, frame: st.frame, cells })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoomReport {
    pub passed: bool,
    pub filled: usize,
    pub violations: Vec<String>,
}

/// Row/column coverage, pair uniqueness and (for frames) empty holes.
pub fn verify_room(r: &RoomArray) -> RoomReport {
    let mut violations = Vec::new();
    let symbols = r.symbols();
    let mut rows: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut cols: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut pairs: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for (&(row, col), &(x, y)) in &r.cells {
        if row >= r.side || col >= r.side {
            violations.push(format!("cell ({row}, {col}) outside the array"));
            continue;
        }
        if r.frame && r.hole_of(row) == r.hole_of(col) {
            violations.push(format!("hole cell ({row}, {col}) is filled"));
        }
        if x == y {
            violations.push(format!("cell ({row}, {col}) repeats symbol {x}"));
        }
        rows.entry(row).or_default().extend([x, y]);
        cols.entry(col).or_default().extend([x, y]);
        *pairs.entry((x.min(y), x.max(y))).or_insert(0) += 1;
    }
    let line_check = |kind: &str, lines: &BTreeMap<u32, Vec<u32>>, violations: &mut Vec<String>| {
        for i in 0..r.side {
            let have = lines.get(&i).cloned().unwrap_or_default();
            for &s in &symbols {
                let count = have.iter().filter(|&&x| x == s).count();
                let want = usize::from(!r.same_hole(s, i));
                if count != want {
                    violations.push(format!("{kind} {i} holds symbol {} {count} times, expected {want}", show(s)));
                }
            }
        }
    };
    line_check("row", &rows, &mut violations);
    line_check("column", &cols, &mut violations);
    for (i, &x) in symbols.iter().enumerate() {
        for &y in &symbols[i + 1..] {
            let count = pairs.get(&(x.min(y), x.max(y))).copied().unwrap_or(0);
            let want = u32::from(!r.same_hole(x, y));
            if count != want {
                violations.push(format!("pair {{{}, {}}} occurs {count} times, expected {want}", show(x), show(y)));
            }
        }
    }
    RoomReport { passed: violations.is_empty(), filled: r.cells.len(), violations }
}

fn show(x: u32) -> String {
    if x == INF {
        "inf".into()
    } else {
        x.to_string()
    }
}

/// `{x, y, row, col}` for every cell not holding `INF`.
fn four_sets(r: &RoomArray) -> Vec<[u32; 4]> {
    r.cells
        .iter()
        .filter(|(_, &(x, y))| x != INF && y != INF)
        .map(|(&(row, col), &(x, y))| [x, y, row, col])
        .collect()
}

/// No two underlying 4-subsets share three elements.
pub fn is_super_simple(r: &RoomArray) -> bool {
    let sets = four_sets(r);
    let mut triples: Vec<[u32; 3]> = Vec::with_capacity(sets.len() * 4);
    for s in &sets {
        let mut s = *s;
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for skip in 0..4 {
            let mut t = [0u32; 3];
            let mut k = 0;
            for (i, &x) in s.iter().enumerate() {
                if i != skip {
                    t[k] = x;
                    k += 1;
                }
            }
            triples.push(t);
        }
    }
    triples.par_sort_unstable();
    !triples.windows(2).any(|w| w[0] == w[1])
}

/// Reference scan over all cell pairs, used to cross-check [`is_super_simple`].
pub fn is_super_simple_pairwise(r: &RoomArray) -> bool {
    let sets = four_sets(r);
    (0..sets.len()).into_par_iter().all(|i| {
        let a: HashSet<u32> = sets[i].iter().copied().collect();
        a.len() == 4
            && sets[i + 1..].iter().all(|b| b.iter().filter(|x| a.contains(x)).count() <= 2)
    })
}

/// One word `<x, y, row, col>` per cell without `INF`; refuses arrays that
/// are not super-simple.
pub fn code_from_room(r: &RoomArray) -> Result<Code> {
    if !is_super_simple(r) {
        return Err(Error::Construction("Room array is not super-simple".into()));
    }
    let words = four_sets(r).into_iter().map(Codeword::new).collect::<Result<Vec<_>>>()?;
    Ok(Code::new(PointSet::finite(r.side), 5, words))
}

/// The code a starter induces directly, `<s+γ, t+γ, γ, γ+s+t>`, together
/// with whether the starter is strong. This is the word set of the Room
/// array built with the adder `-(s+t)`, and exists even when the pair sums
/// are not strong.
pub fn starter_code(r: &Recipe) -> Result<(Code, bool)> {
    let st = expand_starter(r)?;
    if !is_starter(&st) {
        return Err(Error::Recipe(format!("pairs do not form a starter in Z_{}", st.g)));
    }
    let g = st.g;
    let mut words = Vec::with_capacity(st.pairs.len() * g as usize);
    for gamma in 0..g {
        for &(s, t) in &st.pairs {
            words.push(Codeword::raw([(s + gamma) % g, (t + gamma) % g, gamma, (gamma + s + t) % g]));
        }
    }
    Ok((Code::new(PointSet::finite(g), r.d, words), is_strong(&st)))
}

/// Stages of the starter-to-code pipeline, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoomPipeline {
    pub n: u32,
    pub starter: bool,
    pub strong: bool,
    pub room_verified: bool,
    pub super_simple: bool,
    pub code_size: Option<usize>,
    pub code_verified: bool,
    pub passed: bool,
    /// First failing stage and why.
    pub failure: Option<String>,
}

/// expand → strong → Room array → verify → super-simple → code → verify, stopping
/// at the first failing stage.
pub fn run_room_pipeline(r: &Recipe) -> RoomPipeline {
    let mut out = RoomPipeline {
        n: r.v,
        starter: false,
        strong: false,
        room_verified: false,
        super_simple: false,
        code_size: None,
        code_verified: false,
        passed: false,
        failure: None,
    };
    let st = match expand_starter(r) {
        Ok(st) => st,
        Err(e) => {
            out.failure = Some(format!("expand: {e}"));
            return out;
        }
    };
    out.starter = is_starter(&st);
    if !out.starter {
        out.failure = Some("expand: pairs are not a starter".into());
        return out;
    }
    out.strong = is_strong(&st);
    if !out.strong {
        let bad: Vec<String> = hole_sums(&st).iter().map(|(s, t)| format!("{{{s},{t}}}")).collect();
        out.failure = Some(format!("strong: pair sums in the hole from {}", bad.join(" ")));
        return out;
    }
    let adder = adder_from_strong(&st).expect("strong starter has an adder");
    let room = match room_from_starter(&st, &adder) {
        Ok(room) => room,
        Err(e) => {
            out.failure = Some(format!("room: {e}"));
            return out;
        }
    };
    let rep = verify_room(&room);
    out.room_verified = rep.passed;
    if !rep.passed {
        out.failure = Some(format!("verify_room: {}", rep.violations[0]));
        return out;
    }
    out.super_simple = is_super_simple(&room);
    if !out.super_simple {
        out.failure = Some("super-simple: two cells share three elements".into());
        return out;
    }
    let code = code_from_room(&room).expect("super-simple room yields a code");
    out.code_size = Some(code.len());
    let vr = verify_code(&code);
    out.code_verified = vr.passed;
    let u5 = crate::bounds::u5(r.v as u64).unwrap_or(0);
    if !vr.passed {
        out.failure = Some(format!("code: {}", vr.first_violation(&code).unwrap_or_default()));
    } else if code.len() as u64 != u5 {
        out.failure = Some(format!("code: size {} differs from u5 = {u5}", code.len()));
    } else {
        out.passed = true;
    }
    out
}

/// Every starter of `Z_g` (plain, `g` odd) or frame starter (`g` even).
/// Exhaustive, so only for small groups.
pub fn enumerate_starters(g: u32, frame: bool) -> Result<Vec<Starter>> {
    if g > 13 {
        return Err(domain("exhaustive starter scan is limited to g <= 13"));
    }
    let template = Starter::new(g, frame, Vec::new())?;
    if (g as usize - template.hole().len()) % 2 == 1 {
        return Err(domain(format!("Z_{g} has no {} starter shape", if frame { "frame" } else { "plain" })));
    }
    fn go(st: &mut Starter, used: &mut [bool], diff: &mut [bool], out: &mut Vec<Starter>) {
        let g = st.g;
        let Some(s) = (1..g).find(|&x| !used[x as usize] && !st.in_hole(x)) else {
            out.push(st.clone());
            return;
        };
        used[s as usize] = true;
        for t in s + 1..g {
            if used[t as usize] || st.in_hole(t) {
                continue;
            }
            let (d1, d2) = (((t + g - s) % g) as usize, ((s + g - t) % g) as usize);
            if diff[d1] || diff[d2] || st.in_hole(d1 as u32) {
                continue;
            }
            used[t as usize] = true;
            diff[d1] = true;
            diff[d2] = true;
            st.pairs.push((s, t));
            go(st, used, diff, out);
            st.pairs.pop();
            used[t as usize] = false;
            diff[d1] = false;
            diff[d2] = false;
        }
        used[s as usize] = false;
    }
    let mut st = template;
    let mut out = Vec::new();
    go(&mut st, &mut vec![false; g as usize], &mut vec![false; g as usize], &mut out);
    Ok(out)
}
