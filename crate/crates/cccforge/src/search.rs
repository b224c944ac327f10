//! Exact maximum code size for small lengths: branch-and-bound maximum
//! clique over the compatibility graph of all [2,1,1] words.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds;
use crate::core::{distance, verify_code, Code, Codeword, PointSet};
use crate::error::{domain, Result};

/// All canonical words of length `n`, sorted: C(n,4) * 12 of them.
pub fn enumerate_candidates(n: u32) -> Vec<Codeword> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                for d in 0..n {
                    if d != a && d != b && d != c {
                        out.push(Codeword::raw([a, b, c, d]));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn first(b: &Bits) -> Option<usize> {
    b.iter().position(|&w| w != 0).map(|k| k * 64 + b[k].trailing_zeros() as usize)
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

/// Vertices are the candidate words; `x ~ y` iff `distance(x, y) >= d`.
pub struct CompatGraph {
    pub words: Vec<Codeword>,
    adj: Vec<Bits>,
}

impl CompatGraph {
    pub fn new(n: u32, d: u32) -> CompatGraph {
        let words = enumerate_candidates(n);
        let len = words.len();
        let mut adj = vec![bits_new(len); len];
        for i in 0..len {
            for j in i + 1..len {
                if distance(&words[i], &words[j]) >= d {
                    set(&mut adj[i], j);
                    set(&mut adj[j], i);
                }
            }
        }
        CompatGraph { words, adj }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        count(&self.adj[i])
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: u32,
    pub d: u32,
    pub size: usize,
    pub proven: bool,
    pub nodes: u64,
    #[serde(skip)]
    pub witness: Code,
}

struct Bnb<'g> {
    g: &'g CompatGraph,
    best: Vec<usize>,
    cap: usize,
    deadline: Instant,
    nodes: u64,
    out_of_time: bool,
}

impl Bnb<'_> {
    /// Greedy colouring of `cand` in index order; returns vertices with
    /// their colour numbers, ascending by colour.
    fn colour(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut rest = cand.clone();
        let mut out = Vec::with_capacity(count(cand));
        let mut colour = 0;
        while rest.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = rest.clone();
            while let Some(v) = first(&q) {
                rest[v / 64] &= !(1 << (v % 64));
                q[v / 64] &= !(1 << (v % 64));
                for (qw, aw) in q.iter_mut().zip(&self.g.adj[v]) {
                    *qw &= !aw;
                }
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Bits) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline {
            self.out_of_time = true;
        }
        if self.out_of_time || self.best.len() >= self.cap {
            return;
        }
        let order = self.colour(&cand);
        for &(v, c) in order.iter().rev() {
            if clique.len() + c <= self.best.len() || self.out_of_time || self.best.len() >= self.cap {
                return;
            }
            clique.push(v);
            let next: Bits = cand.iter().zip(&self.g.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Largest code of length `n` and distance `d`. The search fixes `<0,1,2,3>`
/// (every nonempty code is equivalent to one containing it) and prunes with
/// the closed-form bound and greedy colouring. `proven` is set only when the
/// tree is exhausted or the bound is met before the budget runs out.
pub fn max_code_exact(n: u32, d: u32, budget: Duration) -> Result<SearchResult> {
    if n < 4 {
        return Err(domain(format!("n = {n} is below the weight 4")));
    }
    let g = CompatGraph::new(n, d);
    let cap = bounds::u_bound(n as u64, d as u64).map_or(usize::MAX, |u| u as usize).max(1);
    let root = g.words.iter().position(|w| w.points() == [0, 1, 2, 3]).expect("root word enumerated");
    let mut bnb = Bnb { g: &g, best: vec![root], cap, deadline: Instant::now() + budget, nodes: 0, out_of_time: false };
    let mut clique = vec![root];
    bnb.expand(&mut clique, g.adj[root].clone());
    let mut best: Vec<Codeword> = bnb.best.iter().map(|&i| g.words[i]).collect();
    best.sort();
    let witness = Code::new(PointSet::finite(n), d, best);
    debug_assert!(verify_code(&witness).passed);
    Ok(SearchResult { n, d, size: witness.len(), proven: !bnb.out_of_time, nodes: bnb.nodes, witness })
}

/// True when `code` has length `n`, verifies at distance `d` and has at
/// least `claimed` words.
pub fn verify_lower_bound(code: &Code, n: u32, d: u32, claimed: usize) -> bool {
    code.n() == n && code.d >= d && code.len() >= claimed && verify_code(code).passed
}
