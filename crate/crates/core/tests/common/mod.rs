//! Fixtures shared by the property, oracle and acceptance targets.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use lieinv_core::engine::{compute_valuedata, Engine, RunOptions, SeedSpec, ValueTable};
use lieinv_core::kostant::SparseVec;
use lieinv_core::rational::rat;
use lieinv_core::{
    Family, KostantFrame, LieAlgebraTable, Monomial, Poly, Rational, Scope, TermKey,
};
use proptest::prelude::*;
use proptest::test_runner::{TestError, TestRunner};

pub const RANK2: [Family; 4] = [Family::A, Family::B, Family::C, Family::G];

/// Sum of all slice monomials of weighted degree `d`, with distinct
/// coefficients so that no seed is accidentally zero.
pub fn generic_target(frame: &KostantFrame, d: u32) -> Option<Poly> {
    let degrees = frame.degrees();
    let l = frame.rank();
    let mut p = Poly::zero(l);
    let mut n = 1;
    for e in (0..l)
        .map(|i| 0..=(d as usize / degrees[i]))
        .multi_cartesian_product()
    {
        let w: usize = e.iter().zip(&degrees).map(|(a, b)| a * b).sum();
        if w == d as usize {
            p.add_term(Monomial(e.iter().map(|&x| x as u16).collect()), rat(n));
            n += 1;
        }
    }
    (!p.is_zero()).then_some(p)
}

pub struct Fixture {
    pub frame: KostantFrame,
    pub tables: Vec<(SeedSpec, ValueTable)>,
}

pub fn fixture(family: Family, scope: Scope, degrees: &[u32]) -> Fixture {
    let alg = LieAlgebraTable::new(family, 2).unwrap();
    let frame = KostantFrame::new(&alg).unwrap();
    let tables = degrees
        .iter()
        .filter_map(|&d| generic_target(&frame, d).map(|t| (d, t)))
        .map(|(d, t)| {
            let seeds = SeedSpec::generic(t);
            let table =
                compute_valuedata(&frame, &seeds, d, scope, &RunOptions::default()).unwrap();
            (seeds, table)
        })
        .collect();
    Fixture { frame, tables }
}

pub fn fixtures() -> &'static Vec<Fixture> {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        RANK2
            .iter()
            .map(|&f| fixture(f, Scope::Full, &[4, 5, 6, 7, 8]))
            .collect()
    })
}

/// Distinct positions in `W ++ U` whose factor lies in the image of `ad_ε`.
pub fn peelable(frame: &KostantFrame, key: &TermKey) -> Vec<usize> {
    key.w
        .iter()
        .chain(&key.u)
        .enumerate()
        .filter(|(_, &k)| frame.preimage(k).is_some())
        .dedup_by(|a, b| a.1 == b.1)
        .map(|(i, _)| i)
        .collect()
}

/// Keys with at least two evaluation routes: two distinct peelable
/// factors, or one peelable factor and the `p`-rule.
pub fn peel_pool(fx: &Fixture) -> Vec<(usize, TermKey, Vec<usize>)> {
    let mut out = Vec::new();
    for (t, (_, table)) in fx.tables.iter().enumerate() {
        for key in table.values.keys() {
            let positions = peelable(&fx.frame, key);
            let p_rule = usize::from(key.w.is_empty() && key.a > 0);
            if !positions.is_empty() && positions.len() + p_rule >= 2 {
                out.push((t, key.clone(), positions));
            }
        }
    }
    out
}

/// Negative keys whose first factor's preimage is not unique.
pub fn representative_pool(fx: &Fixture) -> Vec<(usize, TermKey, Vec<SparseVec>)> {
    let mut out = Vec::new();
    for (t, (_, table)) in fx.tables.iter().enumerate() {
        for key in table.values.keys() {
            let Some(&w1) = key.w.first() else { continue };
            let kernel = fx.frame.ad_epsilon_kernel(fx.frame.f_height[w1] + 1);
            if !kernel.is_empty() {
                let kernel = kernel.iter().map(|v| fx.frame.to_f_sparse(v)).collect();
                out.push((t, key.clone(), kernel));
            }
        }
    }
    out
}

pub fn engine_for<'a>(fx: &'a Fixture, t: usize) -> Engine<'a> {
    let (seeds, table) = &fx.tables[t];
    let engine = Engine::new(&fx.frame, seeds, table.degree).unwrap();
    engine.load(table);
    engine
}

pub const CASES_PER_ALGEBRA: u32 = 128;

pub fn runner() -> TestRunner {
    TestRunner::new(ProptestConfig {
        cases: CASES_PER_ALGEBRA,
        failure_persistence: None,
        ..ProptestConfig::default()
    })
}

/// Peels a random factor of `CASES_PER_ALGEBRA` random keys.
pub fn check_peeling(
    fx: &Fixture,
) -> Result<(), TestError<(prop::sample::Index, prop::sample::Index)>> {
    let pool = peel_pool(fx);
    let strategy = (any::<prop::sample::Index>(), any::<prop::sample::Index>());
    runner().run(&strategy, |(pick, which)| {
        let (t, key, positions) = pick.get(&pool);
        let engine = engine_for(fx, *t);
        let stored = fx.tables[*t].1.values[key].clone();
        let pos = *which.get(positions);
        prop_assert_eq!(
            engine.reduce_peel(key, pos, None).unwrap(),
            stored,
            "{} peeled at {}",
            key,
            pos
        );
        Ok(())
    })
}

/// Re-evaluates random negative keys with a shifted preimage.
pub fn check_representatives(
    fx: &Fixture,
) -> Result<(), TestError<(prop::sample::Index, Vec<i64>)>> {
    let pool = representative_pool(fx);
    let strategy = (
        any::<prop::sample::Index>(),
        prop::collection::vec(-5i64..=5, 1..3),
    );
    runner().run(&strategy, |(pick, coeffs)| {
        let (t, key, kernel) = pick.get(&pool);
        let engine = engine_for(fx, *t);
        let mut v1 = fx.frame.preimage(key.w[0]).unwrap().clone();
        for (vec, c) in kernel.iter().zip(&coeffs) {
            v1.extend(vec.iter().map(|(k, x)| (*k, x * rat(*c))));
        }
        let v1: SparseVec = v1
            .into_iter()
            .into_group_map()
            .into_iter()
            .map(|(k, xs)| (k, xs.into_iter().sum::<Rational>()))
            .sorted_by_key(|(k, _)| *k)
            .collect();
        let stored = fx.tables[*t].1.values[key].clone();
        prop_assert_eq!(
            engine.reduce_negative(key, Some(&v1)).unwrap(),
            stored,
            "{}",
            key
        );
        Ok(())
    })
}

/// Keys `(W, U, b, a)` of degree `d` whose monomial `y^W y^U ε^b p^a` has
/// total height zero (`ε` has height -1, `p` height 0).
pub fn brute_force(frame: &KostantFrame, d: u32, scope: Scope) -> BTreeSet<TermKey> {
    let allowed: Vec<usize> = (0..frame.dim())
        .filter(|&k| {
            let h = frame.f_height[k];
            h >= 1 || (scope == Scope::Full && h <= -2)
        })
        .collect();
    let mut out = BTreeSet::new();
    for n in 0..=d as usize {
        for factors in allowed.iter().copied().combinations_with_replacement(n) {
            let height: i64 = factors.iter().map(|&k| frame.f_height[k]).sum();
            if height < 0 || height as u32 + n as u32 > d {
                continue;
            }
            let b = height as u32;
            let a = d - n as u32 - b;
            let (w, u): (Vec<usize>, Vec<usize>) =
                factors.into_iter().partition(|&k| frame.f_height[k] < 0);
            out.insert(TermKey::new(w, u, b, a));
        }
    }
    out
}
