use super::design::{verify_design, BlockDesign};
use crate::error::{domain, Result};

/// What to look for: a k-GDD of a given type (λ = 1), or a (v, {k}, 1)-PBD.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignSpec {
    Gdd { k: u32, group_type: Vec<(u32, u32)> },
    Pbd { v: u32, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(BlockDesign),
    /// The whole tree was explored: no such design.
    Exhausted,
    /// Node budget ran out first.
    BudgetExceeded,
}

struct Search {
    v: usize,
    k: usize,
    covered: Vec<bool>,
    blocks: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn is_covered(&self, x: usize, y: usize) -> bool {
        self.covered[x * self.v + y]
    }

    fn set(&mut self, block: &[u32], val: bool) {
        for (i, &x) in block.iter().enumerate() {
            for &y in &block[i + 1..] {
                let (x, y) = (x as usize, y as usize);
                self.covered[x * self.v + y] = val;
                self.covered[y * self.v + x] = val;
            }
        }
    }

    /// `Some(true)` found, `Some(false)` subtree exhausted, `None` out of budget.
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        // lowest point with an uncovered pair, and its lowest uncovered partner
        let Some((x, y)) = (0..self.v)
            .find_map(|x| (x + 1..self.v).find(|&y| !self.is_covered(x, y)).map(|y| (x, y)))
        else {
            return Some(true);
        };
        // every other point of the block must exceed y (lower ones are already used up with x)
        let cands: Vec<usize> =
            (y + 1..self.v).filter(|&z| !self.is_covered(x, z) && !self.is_covered(y, z)).collect();
        let mut chosen = vec![x as u32, y as u32];
        self.extend(&cands, 0, &mut chosen)
    }

    fn extend(&mut self, cands: &[usize], from: usize, chosen: &mut Vec<u32>) -> Option<bool> {
        if chosen.len() == self.k {
            self.set(chosen, true);
            self.blocks.push(chosen.clone());
            let r = self.run();
            if r != Some(false) {
                return r;
            }
            self.blocks.pop();
            self.set(chosen, false);
            return Some(false);
        }
        for i in from..cands.len() {
            let z = cands[i];
            if chosen[2..].iter().any(|&c| self.is_covered(c as usize, z)) {
                continue;
            }
            chosen.push(z as u32);
            let r = self.extend(cands, i + 1, chosen);
            chosen.pop();
            if r != Some(false) {
                return r;
            }
        }
        Some(false)
    }
}

/// Deterministic depth-first search for small designs (at most 30 points).
/// Each node covers the lowest uncovered pair with a block extended by
/// increasing points; running out of `budget` nodes is an outcome, not an error.
pub fn backtrack_design(spec: &DesignSpec, budget: u64) -> Result<SearchOutcome> {
    let (v, k, groups) = match spec {
        DesignSpec::Gdd { k, group_type } => {
            let mut groups = Vec::new();
            let mut next = 0u32;
            for &(size, count) in group_type {
                for _ in 0..count {
                    groups.push((next..next + size).collect::<Vec<u32>>());
                    next += size;
                }
            }
            (next, *k, groups)
        }
        DesignSpec::Pbd { v, k } => (*v, *k, Vec::new()),
    };
    if v > 30 {
        return Err(domain(format!("backtracking is limited to 30 points, asked for {v}")));
    }
    if k < 2 || k > v {
        return Err(domain(format!("block size {k} on {v} points")));
    }
    let vu = v as usize;
    let mut s = Search { v: vu, k: k as usize, covered: vec![false; vu * vu], blocks: Vec::new(), nodes: 0, budget };
    for g in &groups {
        s.set(g, true);
    }
    for x in 0..vu {
        s.covered[x * vu + x] = true;
    }
    Ok(match s.run() {
        None => SearchOutcome::BudgetExceeded,
        Some(false) => SearchOutcome::Exhausted,
        Some(true) => {
            let d = match spec {
                DesignSpec::Gdd { .. } => BlockDesign::gdd(v, groups, s.blocks),
                DesignSpec::Pbd { .. } => BlockDesign::pbd(v, s.blocks, 1),
            };
            debug_assert!(verify_design(&d).passed);
            SearchOutcome::Found(d)
        }
    })
}
