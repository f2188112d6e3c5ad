//! Term generation against brute force over every multiset of frame
//! vectors of height `≥ 1` and `≤ -2`.

mod common;

use std::collections::BTreeSet;

use common::brute_force;
use lieinv_core::termgen::generate_terms_unpruned;
use lieinv_core::{generate_terms, Family, KostantFrame, LieAlgebraTable, Scope, TermKey};

#[test]
fn termgen_matches_brute_force() {
    for (family, rank) in [
        (Family::A, 1),
        (Family::A, 2),
        (Family::B, 2),
        (Family::C, 2),
        (Family::G, 2),
    ] {
        let alg = LieAlgebraTable::new(family, rank).unwrap();
        let frame = KostantFrame::new(&alg).unwrap();
        for d in 1..=6 {
            for scope in [Scope::Borel, Scope::Full] {
                let lists = generate_terms(&frame, d, scope);
                let generated: Vec<TermKey> = lists.iter().cloned().collect();
                let set: BTreeSet<TermKey> = generated.iter().cloned().collect();
                assert_eq!(
                    set.len(),
                    generated.len(),
                    "{family}{rank} d={d} {scope}: duplicate keys"
                );
                let oracle = brute_force(&frame, d, scope);
                assert_eq!(set, oracle, "{family}{rank} d={d} {scope}");
                for k in &generated {
                    assert!(k.is_admissible(&frame, d), "{k} is not admissible");
                }
                let unpruned: BTreeSet<TermKey> = generate_terms_unpruned(&frame, d, scope)
                    .iter()
                    .cloned()
                    .collect();
                assert_eq!(unpruned, oracle, "{family}{rank} d={d} {scope}, unpruned");
            }
        }
    }
}
