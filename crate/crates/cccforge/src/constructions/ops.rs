use std::collections::BTreeMap;

use crate::core::{verify_code, verify_gdc, Code, Codeword, Gdc, PointSet};
use crate::designs::{transversal, verify_design, BlockDesign, DesignKind};
use crate::error::{domain, Error, Result};

fn checked_code(code: Code, what: &str) -> Result<Code> {
    let r = verify_code(&code);
    if !r.passed {
        return Err(Error::Construction(format!(
            "{what}: {}",
            r.first_violation(&code).unwrap_or_else(|| "verification failed".into())
        )));
    }
    Ok(code)
}

fn checked_gdc(g: Gdc, what: &str) -> Result<Gdc> {
    let r = verify_gdc(&g);
    if !r.passed {
        return Err(Error::Construction(format!(
            "{what}: {}",
            r.first_violation(&g.code).unwrap_or_else(|| "verification failed".into())
        )));
    }
    Ok(g)
}

fn need_distance(d: u32) -> Result<()> {
    if d > 6 {
        return Err(domain(format!("d = {d} exceeds 2(w-1) = 6")));
    }
    Ok(())
}

fn place(filler: &Code, target: &[u32], words: &mut Vec<Codeword>) -> Result<()> {
    if filler.n() as usize != target.len() {
        return Err(domain(format!("filler of length {} for a set of {} points", filler.n(), target.len())));
    }
    for w in filler.words() {
        words.push(Codeword::new(w.points().map(|p| target[p as usize]))?);
    }
    Ok(())
}

/// Put a filler code of matching length on every group. Keys of `fillers`
/// are group sizes.
pub fn fill_groups(g: &Gdc, fillers: &BTreeMap<u32, Code>) -> Result<Code> {
    need_distance(g.code.d)?;
    let mut words = g.code.words().to_vec();
    let mut predicted = g.code.len();
    for grp in g.groups() {
        let size = grp.len() as u32;
        let filler = fillers.get(&size).ok_or_else(|| Error::DataGated(format!("no filler of length {size}")))?;
        if filler.d < g.code.d {
            return Err(domain(format!("filler of length {size} has distance {} < {}", filler.d, g.code.d)));
        }
        place(filler, grp, &mut words)?;
        predicted += filler.len();
    }
    let code = checked_code(Code::new(g.code.points.clone(), g.code.d, words), "filled code")?;
    debug_assert_eq!(code.len(), predicted);
    Ok(code)
}

/// Adjoin `y` points. Group `first_group` (of size g1) gets `first`, a code
/// on g1 + y points; every other group of size gi gets `edge[gi]`, a GDC of
/// type 1^gi y^1. Its group of size y maps onto the new points `n..n+y`,
/// the remaining points onto the group in order (for y = 1 the last point
/// is the new one).
pub fn adjoin_points(
    g: &Gdc,
    y: u32,
    first_group: usize,
    first: &Code,
    edge: &BTreeMap<u32, Gdc>,
) -> Result<Code> {
    need_distance(g.code.d)?;
    let n = g.code.n();
    let new: Vec<u32> = (n..n + y).collect();
    let groups = g.groups();
    let g1 = groups.get(first_group).ok_or_else(|| domain("first group index out of range"))?;
    let mut words = g.code.words().to_vec();
    let mut target = g1.clone();
    target.extend(&new);
    place(first, &target, &mut words)?;
    for (i, grp) in groups.iter().enumerate() {
        if i == first_group {
            continue;
        }
        let size = grp.len() as u32;
        let filler = edge
            .get(&size)
            .ok_or_else(|| Error::DataGated(format!("no type 1^{size} {y}^1 ingredient")))?;
        if filler.code.n() != size + y {
            return Err(domain(format!("ingredient of length {} for a group of {size}", filler.code.n())));
        }
        let hole: Vec<u32> = if y >= 2 {
            filler
                .groups()
                .iter()
                .find(|x| x.len() as u32 == y)
                .cloned()
                .ok_or_else(|| domain(format!("ingredient for size {size} has no group of size {y}")))?
        } else {
            (size..size + y).collect()
        };
        let mut rest = grp.iter();
        let mut fresh = new.iter();
        let target: Vec<u32> = (0..filler.code.n())
            .map(|p| if hole.contains(&p) { fresh.next() } else { rest.next() }.copied())
            .collect::<Option<_>>()
            .expect("lengths checked");
        place(&filler.code, &target, &mut words)?;
    }
    // master points keep their indices; labels of non-finite points are dropped
    checked_code(Code::new(PointSet::finite(n + y), g.code.d, words), "adjoined code")
}

/// Weight every master point by `weights[x]` and replace each block with
/// an ingredient GDC whose type is the multiset of its weights. Point
/// `(x, j)` becomes `offset[x] + j`.
pub fn fundamental(
    master: &BlockDesign,
    weights: &[u32],
    d: u32,
    supplier: &dyn Fn(&[u32]) -> Option<Gdc>,
) -> Result<Gdc> {
    need_distance(d)?;
    if weights.len() != master.v as usize {
        return Err(domain("one weight per master point is required"));
    }
    let mut offset = Vec::with_capacity(weights.len());
    let mut total = 0u32;
    for &w in weights {
        offset.push(total);
        total += w;
    }
    let mut words = Vec::new();
    for block in &master.blocks {
        let mut ty: Vec<u32> = block.iter().map(|&x| weights[x as usize]).filter(|&w| w > 0).collect();
        ty.sort_unstable();
        if ty.is_empty() {
            continue;
        }
        let ing = supplier(&ty).ok_or_else(|| {
            Error::DataGated(format!("no ingredient GDC of type {}", crate::core::type_string(&counts(&ty))))
        })?;
        let mut ing_groups: Vec<&Vec<u32>> = ing.groups().iter().collect();
        let mut target = vec![u32::MAX; ing.code.n() as usize];
        for &x in block {
            let w = weights[x as usize];
            if w == 0 {
                continue;
            }
            let pos = ing_groups
                .iter()
                .position(|gr| gr.len() as u32 == w)
                .ok_or_else(|| domain(format!("ingredient has no group of size {w}")))?;
            let gr = ing_groups.remove(pos);
            for (j, &p) in gr.iter().enumerate() {
                target[p as usize] = offset[x as usize] + j as u32;
            }
        }
        if !ing_groups.is_empty() {
            return Err(domain("ingredient type does not match the block weights"));
        }
        for w in ing.code.words() {
            words.push(Codeword::new(w.points().map(|p| target[p as usize]))?);
        }
    }
    let groups: Vec<Vec<u32>> = master
        .groups
        .iter()
        .map(|grp| {
            grp.iter()
                .flat_map(|&x| (0..weights[x as usize]).map(move |j| (x, j)))
                .map(|(x, j)| offset[x as usize] + j)
                .collect::<Vec<u32>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    let code = Code::new(PointSet::finite(total), d, words);
    checked_gdc(Gdc::new(code, groups)?, "fundamental construction")
}

fn counts(ty: &[u32]) -> BTreeMap<u32, u32> {
    let mut m = BTreeMap::new();
    for &t in ty {
        *m.entry(t).or_insert(0) += 1;
    }
    m
}

/// Multiply the type by `m` with a TD(4, m): `<a,b,c,d>` becomes
/// `<(a,β1),(b,β2),(c,β3),(d,β4)>` for every block β; `(x, β)` is `x*m + β`.
pub fn inflate(g: &Gdc, td: &BlockDesign) -> Result<Gdc> {
    let rep = verify_design(td);
    if td.kind != DesignKind::Td || !rep.passed || td.groups.len() != 4 {
        return Err(domain(format!(
            "inflation needs a verified TD(4, m){}",
            rep.violations.first().map(|v| format!(": {v}")).unwrap_or_default()
        )));
    }
    let m = td.groups[0].len() as u32;
    let rank = |gi: usize, p: u32| td.groups[gi].iter().position(|&x| x == p).unwrap() as u32;
    let betas: Vec<[u32; 4]> = (0..td.blocks.len())
        .map(|b| {
            let t = transversal(td, b);
            [rank(0, t[0]), rank(1, t[1]), rank(2, t[2]), rank(3, t[3])]
        })
        .collect();
    let mut words = Vec::with_capacity(g.code.len() * betas.len());
    for w in g.code.words() {
        let p = w.points();
        for beta in &betas {
            words.push(Codeword::new([0, 1, 2, 3].map(|i| p[i] * m + beta[i]))?);
        }
    }
    let groups = g
        .groups()
        .iter()
        .map(|grp| grp.iter().flat_map(|&x| (0..m).map(move |b| x * m + b)).collect())
        .collect();
    let code = Code::new(PointSet::finite(g.code.n() * m), g.code.d, words);
    checked_gdc(Gdc::new(code, groups)?, "inflation")
}

/// Drop every word nonzero at `x` and delete coordinate `x`.
pub fn shorten(c: &Code, x: u32) -> Result<Code> {
    if x >= c.n() {
        return Err(domain(format!("coordinate {x} outside length {}", c.n())));
    }
    let relabel = |p: u32| if p > x { p - 1 } else { p };
    let words = c
        .words()
        .iter()
        .filter(|w| !w.points().contains(&x))
        .map(|w| Codeword::new(w.points().map(relabel)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Code::new(PointSet::finite(c.n() - 1), c.d, words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{fixtures, td_prime_power};

    fn code(n: u32, d: u32, ws: &[[u32; 4]]) -> Code {
        Code::new(PointSet::finite(n), d, ws.iter().map(|&t| Codeword::new(t).unwrap()).collect())
    }

    #[test]
    fn fill_with_empty_fillers_is_identity() {
        let c = code(6, 6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]);
        let g = Gdc::trivial(c.clone());
        let fillers = BTreeMap::from([(1, code(1, 6, &[]))]);
        assert_eq!(fill_groups(&g, &fillers).unwrap(), c);
        assert!(fill_groups(&g, &BTreeMap::new()).is_err());
    }

    #[test]
    fn adjoin_zero_matches_fill() {
        let c = code(8, 6, &[[0, 2, 4, 6]]);
        let g = Gdc::new(c, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]).unwrap();
        let filler = code(2, 6, &[]);
        let filled = fill_groups(&g, &BTreeMap::from([(2, filler.clone())])).unwrap();
        let edge = BTreeMap::from([(2, Gdc::trivial(filler.clone()))]);
        assert_eq!(adjoin_points(&g, 0, 0, &filler, &edge).unwrap(), filled);
    }

    #[test]
    fn inflate_by_trivial_td_is_identity_shape() {
        let c = code(6, 6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]);
        let g = Gdc::trivial(c);
        let td = td_prime_power(4, 3).unwrap();
        let big = inflate(&g, &td).unwrap();
        assert_eq!(big.code.len(), 27);
        assert_eq!(big.type_string(), "3^6");
        let mut bad = td.clone();
        bad.blocks.pop();
        assert!(inflate(&g, &bad).is_err());
    }

    #[test]
    fn fundamental_with_zero_weights_is_empty() {
        let master = crate::designs::delete_point(&fixtures::projective_plane_3(), 0).unwrap();
        let out = fundamental(&master, &[0; 12], 6, &|_| None).unwrap();
        assert!(out.code.is_empty());
        assert!(out.groups().is_empty());
    }

    #[test]
    fn shorten_small() {
        let c = code(5, 5, &[[0, 1, 2, 3]]);
        let s = shorten(&c, 4).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.len(), 1);
        assert_eq!(shorten(&c, 0).unwrap().len(), 0);
        assert!(shorten(&c, 5).is_err());
    }
}
