//! Classical small designs, built from cyclic difference sets.

use super::design::BlockDesign;

fn develop(v: u32, base: &[u32]) -> Vec<Vec<u32>> {
    (0..v).map(|i| base.iter().map(|&x| (x + i) % v).collect()).collect()
}

/// The Fano plane, a (7, {3}, 1)-PBD.
pub fn fano() -> BlockDesign {
    let mut d = BlockDesign::pbd(7, develop(7, &[0, 1, 3]), 1);
    d.source = "Fano plane".into();
    d
}

/// The projective plane of order 3, a (13, {4}, 1)-PBD.
pub fn projective_plane_3() -> BlockDesign {
    let mut d = BlockDesign::pbd(13, develop(13, &[0, 1, 3, 9]), 1);
    d.source = "projective plane of order 3".into();
    d
}
