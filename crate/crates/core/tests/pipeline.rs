use std::time::Instant;

use lieinv_core::engine::{compute_invariant, RunOptions, SeedSpec};
use lieinv_core::verify::{type_a_oracle, verify_invariant};
use lieinv_core::{Family, InvariantPolynomial, KostantFrame, LieAlgebraTable, Scope};

fn all_invariants(
    family: Family,
    rank: usize,
    scope: Scope,
) -> (KostantFrame, Vec<InvariantPolynomial>) {
    let alg = LieAlgebraTable::new(family, rank).unwrap();
    let frame = KostantFrame::new(&alg).unwrap();
    let mut out = Vec::new();
    for j in 1..=rank {
        let seeds = SeedSpec::primitive(&frame, j).unwrap();
        let t = Instant::now();
        let (_, inv) = compute_invariant(&frame, &seeds, scope, &RunOptions::default()).unwrap();
        let report = verify_invariant(&inv, &frame, &seeds.target).unwrap();
        eprintln!(
            "{family}{rank} I{j} d={} {} terms {:?}",
            inv.degree,
            inv.poly.len(),
            t.elapsed()
        );
        assert!(report.passed(), "{report}");
        out.push(inv);
    }
    (frame, out)
}

#[test]
fn small_types_verify() {
    for (f, r) in [
        (Family::A, 2),
        (Family::B, 2),
        (Family::C, 2),
        (Family::A, 3),
        (Family::B, 3),
        (Family::C, 3),
    ] {
        all_invariants(f, r, Scope::Full);
    }
}

#[test]
fn type_a_characteristic_polynomial() {
    for r in 1..=3 {
        let (frame, invs) = all_invariants(Family::A, r, Scope::Full);
        let report = type_a_oracle(&frame, &invs).unwrap();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn d4_full() {
    all_invariants(Family::D, 4, Scope::Full);
}
