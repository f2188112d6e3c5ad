//! Randomized checks of the reduction rules: peeling any factor in the image
//! of `ad_ε` reproduces the stored value (whichever rule produced it), and
//! any preimage representative gives the same negative-term value.

mod common;

use common::{
    check_peeling, check_representatives, fixtures, peel_pool, representative_pool, RANK2,
};

#[test]
fn pools_are_large_enough() {
    for (f, fx) in RANK2.iter().zip(fixtures()) {
        let n = peel_pool(fx).len();
        assert!(
            n >= 100,
            "{f}2 has only {n} keys with two evaluation routes"
        );
        let n = representative_pool(fx).len();
        assert!(
            n >= 100,
            "{f}2 has only {n} keys with a non-unique preimage"
        );
    }
}

#[test]
fn peeling_choice_is_irrelevant() {
    for fx in fixtures() {
        check_peeling(fx).unwrap();
    }
}

#[test]
fn preimage_representative_is_irrelevant() {
    for fx in fixtures() {
        check_representatives(fx).unwrap();
    }
}
