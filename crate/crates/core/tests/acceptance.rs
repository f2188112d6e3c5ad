//! Acceptance criteria, one test per criterion. Each prints a single
//! `ACCEPT C<n> PASS|FAIL ...` line with its pinned tolerance before
//! asserting. Run with `--nocapture --test-threads 1` to see the lines in
//! order; `--ignored` adds the long E6 run.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lieinv_core::engine::{
    compute_invariant, compute_valuedata, seed_values, Checkpoint, RunOptions, SeedSpec,
};
use lieinv_core::poly::VarNames;
use lieinv_core::rational::{factorial, rat};
use lieinv_core::verify::{
    check_borel_consistency, check_homogeneity, check_invariance, check_slice_normalization,
    check_weyl_invariance, type_a_oracle, verify_invariant,
};
use lieinv_core::{
    generate_terms, Family, GVector, InvariantPolynomial, KostantFrame, LieAlgebraTable, Poly,
    Scope, TermKey,
};

fn report(id: &str, passed: bool, text: &str) {
    println!(
        "ACCEPT {id} {} {text}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "{id}: {text}");
}

fn frame(family: Family, rank: usize) -> KostantFrame {
    KostantFrame::new(&LieAlgebraTable::new(family, rank).unwrap()).unwrap()
}

fn primitive(fr: &KostantFrame, j: usize, scope: Scope) -> (SeedSpec, InvariantPolynomial) {
    let seeds = SeedSpec::primitive(fr, j).unwrap();
    let (_, inv) = compute_invariant(fr, &seeds, scope, &RunOptions::default()).unwrap();
    (seeds, inv)
}

/// f-index of slice vector `j` (1-based).
fn slice_f(fr: &KostantFrame, j: usize) -> usize {
    fr.slice_index[j - 1]
}

const C1_LIMIT: Duration = Duration::from_secs(5);

#[test]
fn c1_g2_term_counts() {
    let fr = frame(Family::G, 2);
    let start = Instant::now();
    let counts = generate_terms(&fr, 6, Scope::Full).counts();
    let took = start.elapsed();
    let passed = (counts.ttms, counts.ptms, counts.pure_cartan, counts.ntms) == (8, 10, 1, 535)
        && took < C1_LIMIT;
    report(
        "C1",
        passed,
        &format!("G2 d=6 terms: {counts} (want 8/10+1/535 exact), {took:.2?} (limit {C1_LIMIT:?})"),
    );
}

#[test]
fn c2_g2_seeds() {
    let fr = frame(Family::G, 2);
    let seeds = seed_values(&fr, &SeedSpec::primitive(&fr, 2).unwrap(), 6).unwrap();
    let linear = TermKey::new(vec![], vec![slice_f(&fr, 2)], 5, 0);
    let cubic = TermKey::new(vec![], vec![slice_f(&fr, 1); 3], 3, 0);
    let got_linear = seeds.get(&linear).cloned();
    let got_cubic = seeds.get(&cubic).cloned();
    let passed = got_linear == Some(factorial(5)) && got_cubic == Some(rat(0)) && seeds.len() == 2;
    report(
        "C2",
        passed,
        &format!(
            "G2 seeds {linear} = {} (want 5! = 120 exact), {cubic} = {} (want 0 exact); the literal 240 is checked separately",
            got_linear.map_or("missing".into(), |v| v.to_string()),
            got_cubic.map_or("missing".into(), |v| v.to_string()),
        ),
    );
}

/// The literal seed value printed next to the G2 example. It equals
/// `2 · 5!`, which contradicts the unit normalization on the slice, so this
/// is expected to fail.
#[test]
#[ignore = "literal 240 is 2·5!; the normalized seed is 120"]
fn c2_literal_240() {
    let fr = frame(Family::G, 2);
    let seeds = seed_values(&fr, &SeedSpec::primitive(&fr, 2).unwrap(), 6).unwrap();
    let linear = TermKey::new(vec![], vec![slice_f(&fr, 2)], 5, 0);
    let got = seeds[&linear].clone();
    report(
        "C2-literal",
        got == rat(240),
        &format!("G2 seed {linear} = {got} (want literal 240 exact)"),
    );
}

/// The sample pairing from the G2 example, with the evident misprint in
/// its first factor read as `3p1 - p2`. Only the normalized seed 120
/// reproduces the printed 3136.
#[test]
fn c2_sample_pairing_supports_120() {
    let fr = frame(Family::G, 2);
    let seeds = SeedSpec::primitive(&fr, 2).unwrap();
    let table = compute_valuedata(&fr, &seeds, 6, Scope::Full, &RunOptions::default()).unwrap();
    let key = TermKey::new(vec![10, 10], vec![7], 1, 2);
    let names = VarNames::cartan(2);
    // 3136 (3p1 - p2)(3p1 - 2p2), expanded
    let expected = Poly::parse_text("28224*p1^2 - 28224*p1*p2 + 6272*p2^2", &names).unwrap();
    let got = table.get(&key).cloned().unwrap_or_else(|| Poly::zero(2));
    report(
        "C2-sample",
        got == expected,
        &format!(
            "G2 {key} = {} (want 3136(3p1-p2)(3p1-2p2) exact)",
            got.to_text(&names)
        ),
    );
}

#[test]
fn c3_g2_frame_vector() {
    let fr = frame(Family::G, 2);
    let e11 = fr.alg.root_basis_index(&[-1, -1]).unwrap();
    let expected = GVector::basis(14, e11).scale(&rat(28));
    let f11 = &fr.f_vectors[10];
    report(
        "C3",
        *f11 == expected && fr.f_height[10] == -2,
        &format!("G2 f11 = 28 e11 (exact), basis index of e11 = {}", e11 + 1),
    );
}

const C4_LIMIT: Duration = Duration::from_secs(100);

#[test]
fn c4_g2_full_invariant() {
    let fr = frame(Family::G, 2);
    let start = Instant::now();
    let (seeds, inv) = primitive(&fr, 2, Scope::Full);
    let computed = start.elapsed();
    let invariance = check_invariance(&inv.poly, &fr.alg).unwrap();
    let slice = check_slice_normalization(&inv.poly, &fr, &seeds.target).unwrap();
    let weyl = check_weyl_invariance(&inv.cartan, &fr.alg).unwrap();
    let homogeneous = check_homogeneity(&inv.poly, 6);
    let took = start.elapsed();
    let failures: Vec<String> = [
        ("invariance", invariance),
        ("slice", slice),
        ("weyl", weyl),
        ("degree", homogeneous),
    ]
    .into_iter()
    .filter_map(|(n, f)| f.map(|d| format!("{n}: {d}")))
    .collect();
    report(
        "C4",
        failures.is_empty() && took < C4_LIMIT,
        &format!(
            "G2 I2: {} terms, 14 derivations zero, slice = xi2, Weyl, degree 6 (all exact){}; computed in {computed:.2?}, verified in {took:.2?} (limit {C4_LIMIT:?})",
            inv.poly.len(),
            if failures.is_empty() { String::new() } else { format!("; failures {failures:?}") },
        ),
    );
}

#[test]
fn c5_sl2_closed_form() {
    let fr = frame(Family::A, 1);
    let (_, inv) = primitive(&fr, 1, Scope::Full);
    let names = VarNames::full(&fr.alg);
    let expected = Poly::parse_text("p1^2 + x[1]*x[-1]", &names).unwrap();
    let invariant = check_invariance(&expected, &fr.alg).unwrap().is_none();
    report(
        "C5",
        inv.poly == expected && invariant,
        &format!(
            "sl2 I1 = {} (want p1^2 + x[1]*x[-1] exact, invariant by direct check)",
            inv.poly.to_text(&names)
        ),
    );
}

const C6_LIMIT: Duration = Duration::from_secs(600);

#[test]
fn c6_type_a_oracle() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut passed = true;
    for rank in 1..=3 {
        let fr = frame(Family::A, rank);
        let invs: Vec<InvariantPolynomial> = (1..=rank)
            .map(|j| primitive(&fr, j, Scope::Full).1)
            .collect();
        let r = type_a_oracle(&fr, &invs).unwrap();
        passed &= r.passed();
        lines.push(format!(
            "A{rank} E1..E{} {}",
            rank + 1,
            if r.passed() {
                "zero residual"
            } else {
                "RESIDUAL"
            }
        ));
    }
    let took = start.elapsed();
    report(
        "C6",
        passed && took < C6_LIMIT,
        &format!(
            "{} (exact), {took:.2?} (limit {C6_LIMIT:?})",
            lines.join(", ")
        ),
    );
}

#[test]
fn c7_d4_multiplicity() {
    let fr = frame(Family::D, 4);
    let exps_ok = fr.exponents == vec![1, 3, 3, 5];
    let mut notes = Vec::new();
    let mut passed = exps_ok;
    let mut restrictions = BTreeSet::new();
    for j in [2, 3] {
        let (seeds, inv) = primitive(&fr, j, Scope::Full);
        let r = verify_invariant(&inv, &fr, &seeds.target).unwrap();
        passed &= r.passed() && inv.degree == 4;
        restrictions.insert(seeds.target.to_text(&VarNames::slice(4)));
        notes.push(format!(
            "I{j} degree {} {}",
            inv.degree,
            if r.passed() { "verifies" } else { "FAILS" }
        ));
    }
    passed &= restrictions.len() == 2;
    report(
        "C7",
        passed,
        &format!(
            "D4 exponents {:?} (want [1, 3, 3, 5]), {}, slice restrictions {:?} (exact)",
            fr.exponents,
            notes.join(", "),
            restrictions
        ),
    );
}

#[test]
fn c8_property_suites() {
    let mut parts = Vec::new();
    let mut passed = true;
    for (f, fx) in common::RANK2.iter().zip(common::fixtures()) {
        let a = common::check_peeling(fx);
        let b = common::check_representatives(fx);
        let pools = (
            common::peel_pool(fx).len(),
            common::representative_pool(fx).len(),
        );
        passed &= a.is_ok() && b.is_ok() && pools.0 >= 100 && pools.1 >= 100;
        parts.push(format!("{f}2 pools {}/{}", pools.0, pools.1));
    }
    let cases = common::CASES_PER_ALGEBRA;
    let mut termgen_ok = true;
    for (family, rank) in [
        (Family::A, 1),
        (Family::A, 2),
        (Family::B, 2),
        (Family::C, 2),
        (Family::G, 2),
    ] {
        let fr = frame(family, rank);
        for d in 1..=6 {
            for scope in [Scope::Borel, Scope::Full] {
                let got: BTreeSet<TermKey> =
                    generate_terms(&fr, d, scope).iter().cloned().collect();
                termgen_ok &= got == common::brute_force(&fr, d, scope);
            }
        }
    }
    let fr = frame(Family::G, 2);
    let seeds = SeedSpec::primitive(&fr, 2).unwrap();
    let run = |opts: &RunOptions| {
        let t = compute_valuedata(&fr, &seeds, 6, Scope::Full, opts).unwrap();
        serde_json::to_vec(&Checkpoint::from_table(&t, &fr)).unwrap()
    };
    let whole = run(&RunOptions::default());
    let deterministic = whole == run(&RunOptions::default())
        && whole
            == run(&RunOptions {
                threads: 3,
                ..RunOptions::default()
            });
    let partial = compute_valuedata(
        &fr,
        &seeds,
        6,
        Scope::Full,
        &RunOptions {
            stop_after: Some(7),
            ..RunOptions::default()
        },
    )
    .unwrap();
    let resumed = run(&RunOptions {
        resume: Some(Checkpoint::from_table(&partial, &fr)),
        ..RunOptions::default()
    });
    let resume_ok = resumed == whole;
    passed &= termgen_ok && deterministic && resume_ok;
    report(
        "C8",
        passed,
        &format!(
            "(a) peeling and (b) preimage choice on {cases} random keys per algebra, {} (pools need >= 100); (c) termgen = brute force rank <= 2, d <= 6: {termgen_ok}; (d) deterministic: {deterministic}, resume byte-identical: {resume_ok}",
            parts.join(", ")
        ),
    );
}

#[test]
fn c9_borel_full_consistency() {
    let cases = [
        (Family::A, 1),
        (Family::A, 2),
        (Family::A, 3),
        (Family::B, 2),
        (Family::C, 2),
        (Family::G, 2),
        (Family::D, 4),
    ];
    let mut checked = 0;
    let mut failures = Vec::new();
    for (family, rank) in cases {
        let fr = frame(family, rank);
        for j in 1..=rank {
            if family == Family::D && j == 4 {
                // The degree 6 invariant of D4 is covered by the pipeline suite.
                continue;
            }
            let (_, full) = primitive(&fr, j, Scope::Full);
            let (_, borel) = primitive(&fr, j, Scope::Borel);
            match check_borel_consistency(&full.poly, &borel.poly, &fr.alg).unwrap() {
                None => checked += 1,
                Some(d) => failures.push(format!("{family}{rank} I{j}: {d}")),
            }
        }
    }
    report(
        "C9",
        failures.is_empty(),
        &format!("full form at x_-a_i = 1, lower negatives 0, equals standalone Borel run for {checked} invariants (exact){}", if failures.is_empty() { String::new() } else { format!("; {failures:?}") }),
    );
}

/// Non-gating stretch run for E6 degree 12 on `ε + 𝔟`.
#[test]
#[ignore = "long-running: about five minutes single-threaded"]
fn c10_e6_degree_12_borel() {
    let fr = frame(Family::E, 6);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let opts = RunOptions {
        threads,
        ..RunOptions::default()
    };
    let seeds = SeedSpec::primitive(&fr, 6).unwrap();
    let start = Instant::now();
    let (_, inv) = compute_invariant(&fr, &seeds, Scope::Borel, &opts).unwrap();
    let computed = start.elapsed();
    let slice = check_slice_normalization(&inv.poly, &fr, &seeds.target).unwrap();
    let weyl = check_weyl_invariance(&inv.cartan, &fr.alg).unwrap();
    report(
        "C10",
        inv.degree == 12 && slice.is_none() && weyl.is_none(),
        &format!(
            "E6 I6 degree {} on eps+b: {} terms, wall clock {computed:.1?} on {threads} thread(s), slice = xi6 {}, Weyl {} (exact)",
            inv.degree,
            inv.poly.len(),
            if slice.is_none() { "ok" } else { "FAILS" },
            if weyl.is_none() { "ok" } else { "FAILS" },
        ),
    );
}
