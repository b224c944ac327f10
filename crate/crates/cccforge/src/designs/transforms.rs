use super::design::{verify_design, BlockDesign, DesignKind};
use crate::error::{domain, Error, Result};

/// Remove point `x`: blocks through `x` (minus `x`) become groups, the
/// other blocks stay. Points above `x` shift down by one.
pub fn delete_point(pbd: &BlockDesign, x: u32) -> Result<BlockDesign> {
    if x >= pbd.v {
        return Err(domain(format!("point {x} not in a design on {} points", pbd.v)));
    }
    let relabel = |p: u32| if p > x { p - 1 } else { p };
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for b in &pbd.blocks {
        if b.contains(&x) {
            groups.push(b.iter().filter(|&&p| p != x).map(|&p| relabel(p)).collect());
        } else {
            blocks.push(b.iter().map(|&p| relabel(p)).collect());
        }
    }
    let mut out = BlockDesign::gdd(pbd.v - 1, groups, blocks);
    out.source = format!("{} minus point {x}", if pbd.source.is_empty() { "PBD" } else { &pbd.source });
    let rep = verify_design(&out);
    if !rep.passed {
        return Err(Error::Construction(format!("deleting {x} does not give a GDD: {}", rep.violations[0])));
    }
    Ok(out)
}

/// Adjoin `u` ideal points, the `c`-th appended to every block of parallel
/// class `c`; the ideal points form one new group.
pub fn complete_parallel_classes(rgdd: &BlockDesign, u: u32) -> Result<BlockDesign> {
    if rgdd.kind != DesignKind::Rgdd {
        return Err(domain("parallel classes need a resolvable GDD"));
    }
    if (rgdd.classes.len() as u32) < u {
        return Err(domain(format!("{} parallel classes, {u} requested", rgdd.classes.len())));
    }
    if u == 0 {
        return Ok(rgdd.clone());
    }
    let mut blocks = rgdd.blocks.clone();
    for c in 0..u {
        for &bi in &rgdd.classes[c as usize] {
            blocks[bi].push(rgdd.v + c);
        }
    }
    let mut groups = rgdd.groups.clone();
    groups.push((rgdd.v..rgdd.v + u).collect());
    let mut out = BlockDesign::gdd(rgdd.v + u, groups, blocks);
    out.source = format!("{} with {u} classes completed", rgdd.source);
    let rep = verify_design(&out);
    if !rep.passed {
        return Err(Error::Construction(format!("completion is not a GDD: {}", rep.violations[0])));
    }
    Ok(out)
}

/// Affine plane AG(2, q) as a resolvable design on `q^2` points with
/// blocks of size `q` (a q-RGDD of type 1^(q^2)), from GF(q).
pub fn affine_plane(q: u32) -> Result<BlockDesign> {
    let f = super::gf::Field::new(q)?;
    let pt = |x: u32, y: u32| x * q + y;
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    // slope m: y = m x + b
    for m in 0..q {
        let mut class = Vec::new();
        for b in 0..q {
            class.push(blocks.len());
            blocks.push((0..q).map(|x| pt(x, f.add(f.mul(m, x), b))).collect());
        }
        classes.push(class);
    }
    let mut class = Vec::new();
    for x in 0..q {
        class.push(blocks.len());
        blocks.push((0..q).map(|y| pt(x, y)).collect());
    }
    classes.push(class);
    Ok(BlockDesign {
        kind: DesignKind::Rgdd,
        v: q * q,
        blocks,
        groups: (0..q * q).map(|p| vec![p]).collect(),
        classes,
        k_set: vec![q],
        lambda: 1,
        source: format!("AG(2,{q})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::fixtures;

    #[test]
    fn projective_plane_minus_point() {
        let pg = fixtures::projective_plane_3();
        let g = delete_point(&pg, 0).unwrap();
        assert_eq!(g.type_string(), "3^4");
        assert_eq!(g.blocks.len(), 9);
        // pair-count conservation
        let group_pairs: u64 = g.groups.iter().map(|x| (x.len() * (x.len() - 1) / 2) as u64).sum();
        assert_eq!(pg.covered_pairs(), g.covered_pairs() + group_pairs + 4 * 3);
    }

    #[test]
    fn fano_minus_point() {
        let g = delete_point(&fixtures::fano(), 6).unwrap();
        assert_eq!(g.type_string(), "2^3");
    }

    #[test]
    fn missing_point_rejected() {
        assert!(delete_point(&fixtures::fano(), 7).is_err());
    }

    #[test]
    fn completing_classes() {
        let ag = affine_plane(3).unwrap();
        assert!(verify_design(&ag).passed);
        assert_eq!(complete_parallel_classes(&ag, 0).unwrap(), ag);
        let g = complete_parallel_classes(&ag, 3).unwrap();
        assert_eq!(g.type_string(), "3^1 1^9");
        assert!(complete_parallel_classes(&ag, 5).is_err());
        // every (old point, ideal point) pair exactly once
        let full = complete_parallel_classes(&ag, 4).unwrap();
        assert!(verify_design(&full).passed);
    }
}
