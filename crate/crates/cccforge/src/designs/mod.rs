//! Ingredient designs: finite fields, transversal designs, GDD/PBD/RGDD
//! verification, point deletion, parallel-class completion and a small
//! backtracking finder.

mod backtrack;
mod design;
pub mod fixtures;
pub mod gf;
mod td;
mod transforms;

pub use backtrack::{backtrack_design, DesignSpec, SearchOutcome};
pub use design::{
    design_to_json, load_design, parse_design, save_design, verify_design, BlockDesign, DesignKind,
    DesignReport,
};
pub use td::{td_prime_power, td_product, transversal};
pub use transforms::{affine_plane, complete_parallel_classes, delete_point};
