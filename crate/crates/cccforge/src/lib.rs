//! Construction and verification toolkit for quaternary constant-composition
//! codes with composition [2,1,1] and minimum distance 5 or 6.
//!
//! The crate is split the same way the work is: `core` holds points, words,
//! codes and the distance kernels; `bounds` the closed-form limits; `devgen`
//! the difference-method expander and catalog audit; `rooms` starters and
//! Room arrays; `designs` transversal designs and GDD/PBD machinery;
//! `constructions` the recursive GDC constructions and pipeline runner;
//! `search` the exact clique oracle; `table` the summary reporter.

pub mod bounds;
pub mod constructions;
pub mod core;
pub mod designs;
pub mod devgen;
pub mod error;
pub mod rooms;
pub mod search;
pub mod table;

pub use crate::core::{Code, Codeword, Gdc, Point, PointSet, VerificationReport};
pub use crate::error::{Error, Result};

/// Directory holding the recipe catalog, honouring `CCCFORGE_CATALOG`.
pub fn catalog_dir() -> std::path::PathBuf {
    match std::env::var_os("CCCFORGE_CATALOG") {
        Some(p) => p.into(),
        None => std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/catalog"),
    }
}

/// Root of the bundled data directory (fixtures, pipelines, catalog).
pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}
