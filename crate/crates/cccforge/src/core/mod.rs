//! Points, words, codes, GDCs, the verification kernels and the canonical
//! code file format.

mod code;
mod codeword;
pub mod format;
mod point;
mod verify;

pub use code::{group_type_of, type_string, Code, Gdc};
pub use codeword::{composition, distance, hamming, Codeword, SYMBOLS};
pub use point::{InfiniteClass, Point, PointSet};
pub use verify::{
    min_distance_bruteforce, min_distance_fast, verify_code, verify_gdc, VerificationReport,
    ViolatingPair,
};
