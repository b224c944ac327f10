use super::design::{BlockDesign, DesignKind};
use super::gf::Field;
use crate::error::{domain, Result};

/// TD(k, q) from GF(q): point `(i, y)` is `i*q + y`; block `(a, b)` holds
/// `(i, a*x_i + b)` for the first `min(k, q)` groups and `(q, a)` when
/// `k = q + 1`.
pub fn td_prime_power(k: u32, q: u32) -> Result<BlockDesign> {
    let f = Field::new(q)?;
    if k < 2 || k > q + 1 {
        return Err(domain(format!("TD({k},{q}) needs 2 <= k <= q+1")));
    }
    let mut blocks = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            let block = (0..k)
                .map(|i| {
                    let y = if i < q { f.add(f.mul(a, i), b) } else { a };
                    i * q + y
                })
                .collect();
            blocks.push(block);
        }
    }
    Ok(td_from_blocks(k, q, blocks, format!("GF({q})")))
}

fn td_from_blocks(k: u32, n: u32, blocks: Vec<Vec<u32>>, source: String) -> BlockDesign {
    let groups = (0..k).map(|i| (i * n..(i + 1) * n).collect()).collect();
    BlockDesign {
        kind: DesignKind::Td,
        v: k * n,
        blocks,
        groups,
        classes: Vec::new(),
        k_set: vec![k],
        lambda: 1,
        source,
    }
}

/// Order of a TD (common group size) and its number of groups.
fn shape(d: &BlockDesign) -> Result<(u32, u32)> {
    let k = d.groups.len() as u32;
    let n = d.groups.first().map_or(0, |g| g.len() as u32);
    if d.kind != DesignKind::Td || k == 0 || d.groups.iter().any(|g| g.len() as u32 != n) {
        return Err(domain("not a transversal design"));
    }
    Ok((k, n))
}

/// Block of a TD as (group, rank within group) per group index.
fn coordinates(d: &BlockDesign) -> Vec<Vec<u32>> {
    let mut where_is = vec![(0u32, 0u32); d.v as usize];
    for (gi, g) in d.groups.iter().enumerate() {
        for (r, &p) in g.iter().enumerate() {
            where_is[p as usize] = (gi as u32, r as u32);
        }
    }
    d.blocks
        .iter()
        .map(|b| {
            let mut row = vec![0u32; d.groups.len()];
            for &p in b {
                let (g, r) = where_is[p as usize];
                row[g as usize] = r;
            }
            row
        })
        .collect()
}

/// TD(k, m1) x TD(k, m2) -> TD(k, m1*m2).
pub fn td_product(d1: &BlockDesign, d2: &BlockDesign) -> Result<BlockDesign> {
    let (k1, n1) = shape(d1)?;
    let (k2, n2) = shape(d2)?;
    if k1 != k2 {
        return Err(domain(format!("cannot multiply TD({k1},{n1}) by TD({k2},{n2})")));
    }
    let n = n1 * n2;
    let c1 = coordinates(d1);
    let c2 = coordinates(d2);
    let mut blocks = Vec::with_capacity(c1.len() * c2.len());
    for r1 in &c1 {
        for r2 in &c2 {
            blocks.push((0..k1).map(|i| i * n + r1[i as usize] * n2 + r2[i as usize]).collect());
        }
    }
    Ok(td_from_blocks(k1, n, blocks, format!("product of TD({k1},{n1}) and TD({k1},{n2})")))
}

/// Block `b` listed by group: `result[i]` is the point of `b` in group `i`.
pub fn transversal(d: &BlockDesign, b: usize) -> Vec<u32> {
    let gi = d.group_index();
    let mut row = vec![u32::MAX; d.groups.len()];
    for &p in &d.blocks[b] {
        row[gi[p as usize] as usize] = p;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::verify_design;

    #[test]
    fn small_tds() {
        let d = td_prime_power(4, 3).unwrap();
        assert_eq!((d.v, d.blocks.len()), (12, 9));
        assert!(verify_design(&d).passed);
        let d = td_prime_power(5, 4).unwrap();
        assert_eq!((d.v, d.blocks.len()), (20, 16));
        assert!(verify_design(&d).passed);
        assert!(verify_design(&td_prime_power(8, 9).unwrap()).passed);
        assert!(td_prime_power(4, 2).is_err());
        assert!(td_prime_power(4, 6).is_err());
    }

    #[test]
    fn products() {
        let t3 = td_prime_power(4, 3).unwrap();
        let t9 = td_product(&t3, &t3).unwrap();
        assert_eq!(t9.blocks.len(), 81);
        assert!(verify_design(&t9).passed);
        let t20 = td_product(&td_prime_power(4, 4).unwrap(), &td_prime_power(4, 5).unwrap()).unwrap();
        assert_eq!(t20.blocks.len(), 400);
        assert!(verify_design(&t20).passed);
        assert!(td_product(&t3, &td_prime_power(5, 4).unwrap()).is_err());
    }
}
