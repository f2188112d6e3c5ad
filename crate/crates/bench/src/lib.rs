//! Shared fixtures for the pipeline benchmarks.

use lieinv_core::{Family, KostantFrame, LieAlgebraTable};

/// Chevalley table and default frame of a simple type.
pub fn frame(family: Family, rank: usize) -> KostantFrame {
    let alg = LieAlgebraTable::new(family, rank).expect("valid type");
    KostantFrame::new(&alg).expect("frame builds")
}

/// Types small enough to run the whole pipeline on in a benchmark loop.
pub const SMALL: [(Family, usize); 4] = [
    (Family::A, 3),
    (Family::B, 3),
    (Family::C, 3),
    (Family::G, 2),
];
