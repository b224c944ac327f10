//! Closed-form limits on A_q(n, d, w̄) and the settled values for [2,1,1].
//!
//! Everything is integer arithmetic; nested floors are taken exactly where
//! the formulas put them.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "value", rename_all = "snake_case")]
pub enum BoundValue {
    Exact(u64),
    Upper(u64),
    /// Maximum unknown; the best construction gives this many words.
    Open { lower: u64 },
    NotCovered,
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v} (exact)"),
            BoundValue::Upper(v) => write!(f, "<= {v} (upper)"),
            BoundValue::Open { lower } => write!(f, "open, >= {lower}"),
            BoundValue::NotCovered => write!(f, "not covered"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub value: BoundValue,
    pub rule: &'static str,
}

fn weight(comp: &[u32]) -> u64 {
    comp.iter().map(|&w| w as u64).sum()
}

fn binom(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(r)
}

/// The three exact cases: d <= 2, d = 2w, d >= 2w + 1.
pub fn exact_extremes(n: u64, d: u64, comp: &[u32]) -> Result<BoundResult> {
    let w = weight(comp);
    if n < w {
        return Err(domain(format!("n = {n} is below the weight {w}")));
    }
    let value = if d <= 2 {
        let mut count = binom(n, w).ok_or_else(|| domain("count overflows"))?;
        let mut left = w;
        for &wi in comp {
            count = count
                .checked_mul(binom(left, wi as u64).ok_or_else(|| domain("count overflows"))?)
                .ok_or_else(|| domain("count overflows"))?;
            left -= wi as u64;
        }
        let v = u64::try_from(count).map_err(|_| domain("count overflows"))?;
        return Ok(BoundResult { value: BoundValue::Exact(v), rule: "all words (d <= 2)" });
    } else if d == 2 * w {
        BoundResult { value: BoundValue::Exact(n / w), rule: "disjoint supports (d = 2w)" }
    } else if d > 2 * w {
        BoundResult { value: BoundValue::Exact(1), rule: "single word (d >= 2w+1)" }
    } else {
        BoundResult { value: BoundValue::NotCovered, rule: "none" }
    };
    Ok(value)
}

/// One Johnson-type step: floor((n / w1) * inner), computed exactly.
pub fn johnson_step(n: u64, comp: &[u32], inner: u64) -> Result<u64> {
    let w1 = *comp.first().ok_or_else(|| domain("empty composition"))? as u64;
    if w1 == 0 {
        return Err(domain("johnson step needs w1 >= 1"));
    }
    Ok(n * inner / w1)
}

/// Best bound reachable by repeated Johnson steps ending in an exact case.
/// Each step may peel any nonzero entry (symbols can be relabelled).
pub fn johnson_chain(n: u64, d: u64, comp: &[u32]) -> Result<u64> {
    let mut comp: Vec<u32> = comp.iter().copied().filter(|&w| w > 0).collect();
    comp.sort_unstable();
    if let BoundValue::Exact(v) = exact_extremes(n, d, &comp)?.value {
        return Ok(v);
    }
    let mut best: Option<u64> = None;
    for i in 0..comp.len() {
        if i > 0 && comp[i] == comp[i - 1] {
            continue;
        }
        let mut inner = comp.clone();
        inner[i] -= 1;
        let sub = johnson_chain(n - 1, d, &inner)?;
        let mut front = vec![comp[i]];
        front.extend(comp.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| w));
        let b = johnson_step(n, &front, sub)?;
        best = Some(best.map_or(b, |x| x.min(b)));
    }
    best.ok_or_else(|| domain("no Johnson chain applies"))
}

/// The two near-extreme cases: d = 2w - 2 and d = 2w - 3.
pub fn near_extreme(n: u64, d: u64, comp: &[u32]) -> Result<Option<u64>> {
    let w = weight(comp);
    let w1 = *comp.first().ok_or_else(|| domain("empty composition"))? as u64;
    if n < w || w1 == 0 {
        return Err(domain("near-extreme bound needs n >= w and w1 >= 1"));
    }
    if d + 2 == 2 * w {
        return Ok(Some(n * ((n - 1) / (w - 1)) / w1));
    }
    if d + 3 == 2 * w && w1 >= 2 {
        return Ok(Some(n * ((n - 1) / (w1 - 1)) / w1));
    }
    Ok(None)
}

fn need4(n: u64) -> Result<()> {
    if n < 4 {
        Err(domain(format!("n = {n} < 4")))
    } else {
        Ok(())
    }
}

/// n * floor((n - 1) / 2).
pub fn u5(n: u64) -> Result<u64> {
    need4(n)?;
    Ok(n * ((n - 1) / 2))
}

/// floor((n / 2) * floor((n - 1) / 3)).
pub fn u6(n: u64) -> Result<u64> {
    need4(n)?;
    Ok(n * ((n - 1) / 3) / 2)
}

pub fn u_bound(n: u64, d: u64) -> Result<u64> {
    match d {
        5 => u5(n),
        6 => u6(n),
        _ => Err(domain(format!("no closed-form bound for d = {d}"))),
    }
}

/// Best known value of A_4(n, d, [2,1,1]) for d in {5, 6}.
pub fn summary_value(n: u64, d: u64) -> Result<BoundResult> {
    need4(n)?;
    let small = |v: u64, rule| Ok(BoundResult { value: BoundValue::Exact(v), rule });
    match d {
        5 => match n {
            4 => small(1, "exhaustive, n = 4"),
            5 => small(2, "exhaustive, n = 5"),
            6 => small(6, "exhaustive, n = 6"),
            7 => small(10, "exhaustive, n = 7"),
            8 | 9 | 10 | 11 | 13 => {
                let lower = match n {
                    8 => 18,
                    9 => 27,
                    10 => 36,
                    11 => 48,
                    _ => 72,
                };
                Ok(BoundResult { value: BoundValue::Open { lower }, rule: "explicit code; optimum unknown" })
            }
            _ => small(u5(n)?, "meets n*floor((n-1)/2)"),
        },
        6 => match n {
            4 => small(1, "exhaustive, n = 4"),
            5 => small(1, "exhaustive, n = 5"),
            7 => small(4, "exhaustive, n = 7"),
            _ => small(u6(n)?, "meets floor(n/2*floor((n-1)/3))"),
        },
        _ => Err(domain(format!("summary covers d = 5 and d = 6, not {d}"))),
    }
}
