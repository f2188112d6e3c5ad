//! Independent checks on assembled invariants.
//!
//! Nothing here reads the value table: every check works from the final
//! polynomial and the structure constants alone.

use std::fmt;
use std::time::Instant;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::InvariantPolynomial;
use crate::error::{Error, Result};
use crate::kostant::KostantFrame;
use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, Poly, VarNames};
use crate::rational::{rat, Rational};
use crate::rootdata::{Family, LieAlgebraTable};
use crate::termgen::Scope;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Counterexample or note when failing.
    pub detail: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Runs `f` and records its outcome under `name`.
    pub fn run<F>(&mut self, name: &str, f: F) -> Result<bool>
    where
        F: FnOnce() -> Result<Option<String>>,
    {
        let start = Instant::now();
        let failure = f()?;
        let passed = failure.is_none();
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: failure,
            millis: start.elapsed().as_millis() as u64,
        });
        Ok(passed)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "  {status} {} ({} ms)", c.name, c.millis)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn first_term(p: &Poly, names: &VarNames) -> String {
    match p.terms().next() {
        Some((m, c)) => Poly::from_terms(p.nvars(), [(m.clone(), c.clone())]).to_text(names),
        None => "0".into(),
    }
}

/// `x·f` for the basis element `x = b_i`: `Σ_k ∂_k f · [b_i, y + shift]_k`.
/// With a shift, `y` ranges over `𝔟` only (a function on `shift + 𝔟`).
pub fn derivation(
    f: &Poly,
    alg: &LieAlgebraTable,
    i: usize,
    shift: Option<&[Rational]>,
) -> Result<Poly> {
    let n = alg.dim;
    if f.nvars() != n {
        return Err(Error::VariableMismatch {
            left: n,
            right: f.nvars(),
        });
    }
    let mut fields: Vec<Poly> = vec![Poly::zero(n); n];
    for r in 0..n {
        let variable = shift.is_none() || alg.heights[r] >= 0;
        for &(k, c) in alg.bracket_basis(i, r) {
            if variable {
                fields[k].add_term(Monomial::var(n, r), rat(c));
            }
            if let Some(s) = shift {
                if !s[r].is_zero() {
                    fields[k].add_term(Monomial::one(n), &s[r] * rat(c));
                }
            }
        }
    }
    let mut out = Poly::zero(n);
    for (k, field) in fields.iter().enumerate() {
        if field.is_zero() {
            continue;
        }
        let d = f.partial(k);
        if !d.is_zero() {
            out.add_scaled(&d.try_mul(field)?, &Rational::one())?;
        }
    }
    Ok(out)
}

/// Every basis derivation kills `f`.
pub fn check_invariance(f: &Poly, alg: &LieAlgebraTable) -> Result<Option<String>> {
    let names = VarNames::full(alg);
    for i in 0..alg.dim {
        let d = derivation(f, alg, i, None)?;
        if !d.is_zero() {
            return Ok(Some(format!(
                "{} acting gives {} terms, first {}",
                alg.basis_label(i),
                d.len(),
                first_term(&d, &names)
            )));
        }
    }
    Ok(None)
}

/// For a function on `ε + 𝔟`: killed by every positive root vector.
pub fn check_borel_invariance(f: &Poly, frame: &KostantFrame) -> Result<Option<String>> {
    let alg = &frame.alg;
    let names = VarNames::full(alg);
    for r in 0..alg.num_positive() {
        let i = alg.positive_basis(r);
        let d = derivation(f, alg, i, Some(&frame.epsilon.coords))?;
        if !d.is_zero() {
            return Ok(Some(format!(
                "{} acting gives {} terms, first {}",
                alg.basis_label(i),
                d.len(),
                first_term(&d, &names)
            )));
        }
    }
    Ok(None)
}

/// `f(ε + Σ ξ_j s_j)` as a polynomial in `ξ`.
pub fn slice_restriction(f: &Poly, frame: &KostantFrame) -> Result<Poly> {
    let l = frame.rank();
    let images: Vec<Poly> = (0..frame.dim())
        .map(|r| {
            let mut p = Poly::constant(l, frame.epsilon.coords[r].clone());
            for (j, s) in frame.slice.iter().enumerate() {
                if !s.coords[r].is_zero() {
                    p.add_term(Monomial::var(l, j), s.coords[r].clone());
                }
            }
            p
        })
        .collect();
    f.compose(&images, l)
}

pub fn check_slice_normalization(
    f: &Poly,
    frame: &KostantFrame,
    target: &Poly,
) -> Result<Option<String>> {
    let got = slice_restriction(f, frame)?;
    let diff = got.try_sub(target)?;
    let names = VarNames::slice(frame.rank());
    Ok((!diff.is_zero()).then(|| {
        format!(
            "restriction is {}, expected {}",
            got.to_text(&names),
            target.to_text(&names)
        )
    }))
}

/// The substitution `p ↦ s_i(p)` on Cartan coordinates (0-based `i`).
pub fn reflection_images(alg: &LieAlgebraTable, i: usize) -> Vec<Poly> {
    let l = alg.rank();
    let cm = &alg.roots.cartan_matrix;
    (0..l)
        .map(|k| {
            let mut p = Poly::var(l, k);
            if k == i {
                for m in 0..l {
                    p.add_term(Monomial::var(l, m), rat(-cm[m][i]));
                }
            }
            p
        })
        .collect()
}

pub fn check_weyl_invariance(cartan: &Poly, alg: &LieAlgebraTable) -> Result<Option<String>> {
    let l = alg.rank();
    for i in 0..l {
        let moved = cartan.compose(&reflection_images(alg, i), l)?;
        let diff = moved.try_sub(cartan)?;
        if !diff.is_zero() {
            return Ok(Some(format!(
                "s{} changes it by {}",
                i + 1,
                diff.to_text(&VarNames::cartan(l))
            )));
        }
    }
    Ok(None)
}

pub fn check_homogeneity(f: &Poly, d: u32) -> Option<String> {
    match f.homogeneous_degree() {
        Some(x) if x == d => None,
        Some(x) => Some(format!("homogeneous of degree {x}, expected {d}")),
        None if f.is_zero() => Some("polynomial is zero".into()),
        None => Some(format!(
            "not homogeneous, total degree {:?}",
            f.total_degree()
        )),
    }
}

/// On `ε + 𝔟` the restriction of a degree `d` form has, for each monomial,
/// degree plus root weight (the number of `x_{-α_i}` it lost) equal to `d`.
pub fn check_borel_homogeneity(f: &Poly, alg: &LieAlgebraTable, d: u32) -> Option<String> {
    if f.is_zero() {
        return Some("polynomial is zero".into());
    }
    let names = VarNames::full(alg);
    for (m, c) in f.terms() {
        let mut weight = vec![0i64; alg.rank()];
        for (r, &e) in m.0.iter().enumerate() {
            if e > 0 && alg.heights[r] < 0 {
                return Some(format!("negative coordinate {} present", names.name(r)));
            }
            for (w, x) in weight.iter_mut().zip(&alg.basis_roots[r]) {
                *w += i64::from(e) * x;
            }
        }
        let total = i64::from(m.degree()) + weight.iter().sum::<i64>();
        if weight.iter().any(|&w| w < 0) || total != i64::from(d) {
            let t = Poly::from_terms(f.nvars(), [(m.clone(), c.clone())]);
            return Some(format!("term {} has weight {weight:?}", t.to_text(&names)));
        }
    }
    None
}

/// Rank of the Jacobian of the Cartan restrictions at seeded random points.
pub fn check_independence(cartans: &[Poly], alg: &LieAlgebraTable) -> Option<String> {
    let l = alg.rank();
    if cartans.len() != l {
        return Some(format!("{} polynomials for rank {l}", cartans.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
    let mut best = 0;
    for _ in 0..8 {
        let point: Vec<Rational> = (0..l).map(|_| rat(rng.gen_range(-9..=9))).collect();
        let jac: Matrix = cartans
            .iter()
            .map(|f| (0..l).map(|k| f.partial(k).eval(&point)).collect())
            .collect();
        best = best.max(linalg::rank(&jac));
        if best == l {
            return None;
        }
    }
    Some(format!("Jacobian rank {best} < {l} at all sampled points"))
}

/// `x_{-α_i} ↦ 1`, other negative coordinates `↦ 0`.
pub fn borel_specialization(f: &Poly, alg: &LieAlgebraTable) -> Poly {
    let l = alg.rank();
    let mut values = std::collections::BTreeMap::new();
    for r in 0..alg.num_positive() {
        let v = if r < l {
            Rational::one()
        } else {
            Rational::zero()
        };
        values.insert(alg.negative_basis(r), v);
    }
    f.specialize(&values)
}

/// Full verification of one assembled invariant against its slice target.
pub fn verify_invariant(
    inv: &InvariantPolynomial,
    frame: &KostantFrame,
    target: &Poly,
) -> Result<VerificationReport> {
    let alg = &frame.alg;
    let subject = match inv.index {
        Some(j) => format!(
            "{} I{j} (degree {}, {})",
            alg.label(),
            inv.degree,
            inv.scope
        ),
        None => format!("{} degree {} ({})", alg.label(), inv.degree, inv.scope),
    };
    let mut report = VerificationReport::new(subject);
    match inv.scope {
        Scope::Full => {
            report.run("homogeneity", || {
                Ok(check_homogeneity(&inv.poly, inv.degree))
            })?;
            report.run("invariance", || check_invariance(&inv.poly, alg))?
        }
        Scope::Borel => {
            report.run("homogeneity", || {
                Ok(check_borel_homogeneity(&inv.poly, alg, inv.degree))
            })?;
            report.run("borel-invariance", || {
                check_borel_invariance(&inv.poly, frame)
            })?
        }
    };
    report.run("slice-normalization", || {
        check_slice_normalization(&inv.poly, frame, target)
    })?;
    report.run("weyl-invariance", || {
        check_weyl_invariance(&inv.cartan, alg)
    })?;
    report.run("cartan-restriction", || {
        let mut on_h = std::collections::BTreeMap::new();
        for r in alg.rank()..alg.dim {
            on_h.insert(r, Rational::zero());
        }
        let restricted = inv.poly.specialize(&on_h);
        let lifted = inv.cartan.rename(&(0..alg.rank()).collect_vec(), alg.dim);
        Ok((restricted != lifted)
            .then(|| "Cartan restriction disagrees with the stored one".to_string()))
    })?;
    Ok(report)
}

/// Full form against a standalone Borel computation.
pub fn check_borel_consistency(
    full: &Poly,
    borel: &Poly,
    alg: &LieAlgebraTable,
) -> Result<Option<String>> {
    let diff = borel_specialization(full, alg).try_sub(borel)?;
    Ok((!diff.is_zero()).then(|| {
        format!(
            "{} differing terms, first {}",
            diff.len(),
            first_term(&diff, &VarNames::full(alg))
        )
    }))
}

/// The defining representation of `sl_{l+1}` built from the structure
/// constants, checked to be a homomorphism.
pub fn defining_representation(alg: &LieAlgebraTable) -> Result<Vec<Matrix>> {
    if alg.roots.family != Family::A {
        return Err(Error::InvalidType {
            family: alg.roots.family.letter(),
            rank: alg.rank(),
        });
    }
    let l = alg.rank();
    let n = l + 1;
    let unit = |i: usize, j: usize| {
        let mut m = linalg::zeros(n, n);
        m[i][j] = Rational::one();
        m
    };
    let mut rho: Vec<Option<Matrix>> = vec![None; alg.dim];
    for i in 0..l {
        let mut h = unit(i, i);
        h[i + 1][i + 1] = rat(-1);
        rho[i] = Some(h);
        rho[alg.positive_simple(i)] = Some(unit(i, i + 1));
        rho[alg.negative_simple(i)] = Some(unit(i + 1, i));
    }
    for r in l..alg.num_positive() {
        for (sign, idx) in [(1, alg.positive_basis(r)), (-1, alg.negative_basis(r))] {
            let root = &alg.basis_roots[idx];
            let (i, beta) = (0..l)
                .find_map(|i| {
                    let mut b = root.clone();
                    b[i] -= sign;
                    alg.root_basis_index(&b).map(|bi| (i, bi))
                })
                .ok_or_else(|| Error::Defect(format!("root {root:?} has no simple predecessor")))?;
            let simple = if sign == 1 {
                alg.positive_simple(i)
            } else {
                alg.negative_simple(i)
            };
            let c = alg
                .bracket_basis(simple, beta)
                .iter()
                .find(|(k, _)| *k == idx)
                .map(|&(_, c)| c)
                .ok_or_else(|| Error::Defect("zero structure constant on a root string".into()))?;
            let (a, b) = (rho[simple].as_ref().unwrap(), rho[beta].as_ref().unwrap());
            let comm = commutator(a, b);
            rho[idx] = Some(
                comm.iter()
                    .map(|row| row.iter().map(|x| x / rat(c)).collect())
                    .collect(),
            );
        }
    }
    let rho: Vec<Matrix> = rho.into_iter().map(Option::unwrap).collect();
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            let mut expect = linalg::zeros(n, n);
            for &(k, c) in alg.bracket_basis(i, j) {
                for (row, src) in expect.iter_mut().zip(&rho[k]) {
                    for (x, y) in row.iter_mut().zip(src) {
                        *x += y * rat(c);
                    }
                }
            }
            if commutator(&rho[i], &rho[j]) != expect {
                return Err(Error::Defect(format!(
                    "representation fails on [{}, {}]",
                    alg.basis_label(i),
                    alg.basis_label(j)
                )));
            }
        }
    }
    Ok(rho)
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

/// Sum of the principal `k × k` minors of a matrix of polynomials.
pub fn principal_minor_sum(m: &[Vec<Poly>], k: usize, nvars: usize) -> Poly {
    let n = m.len();
    let mut acc = Poly::zero(nvars);
    for rows in (0..n).combinations(k) {
        for perm in (0..k).permutations(k) {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut term =
                Poly::constant(nvars, if inversions % 2 == 0 { rat(1) } else { rat(-1) });
            for (i, &p) in perm.iter().enumerate() {
                let entry = &m[rows[i]][rows[p]];
                if entry.is_zero() {
                    term = Poly::zero(nvars);
                    break;
                }
                term = &term * entry;
            }
            acc.add_scaled(&term, &rat(1)).expect("same universe");
        }
    }
    acc
}

/// For `sl_{l+1}`: each characteristic coefficient `E_k` of `x` in the
/// defining representation equals `q_k(I_1, ..., I_l)`, where `q_k` is its
/// slice restriction. `invariants` are the full primitive invariants.
pub fn type_a_oracle(
    frame: &KostantFrame,
    invariants: &[InvariantPolynomial],
) -> Result<VerificationReport> {
    let alg = &frame.alg;
    let l = alg.rank();
    let n = alg.dim;
    let mut report = VerificationReport::new(format!("{} characteristic polynomial", alg.label()));
    let rho = defining_representation(alg)?;
    let size = l + 1;
    let x: Vec<Vec<Poly>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| Poly::linear(n, (0..n).map(|r| (r, rho[r][i][j].clone()))))
                .collect()
        })
        .collect();
    let mut images = vec![Poly::zero(n); l];
    for inv in invariants {
        let j = inv
            .index
            .ok_or_else(|| Error::SeedMismatch("oracle needs primitive invariants".into()))?;
        if inv.scope != Scope::Full {
            return Err(Error::SeedMismatch(
                "oracle needs full-scope invariants".into(),
            ));
        }
        images[j - 1] = inv.poly.clone();
    }
    if images.iter().any(Poly::is_zero) {
        return Err(Error::SeedMismatch(format!(
            "oracle needs all {l} primitive invariants"
        )));
    }
    for k in 1..=size {
        report.run(&format!("E{k}"), || {
            let e = principal_minor_sum(&x, k, n);
            let q = slice_restriction(&e, frame)?;
            let residual = e.try_sub(&q.compose(&images, n)?)?;
            Ok((!residual.is_zero()).then(|| {
                format!(
                    "residual has {} terms, first {}",
                    residual.len(),
                    first_term(&residual, &VarNames::full(alg))
                )
            }))
        })?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_representation() {
        let alg = LieAlgebraTable::new(Family::A, 2).unwrap();
        let rho = defining_representation(&alg).unwrap();
        assert_eq!(rho.len(), 8);
    }

    #[test]
    fn representation_needs_type_a() {
        let alg = LieAlgebraTable::new(Family::B, 2).unwrap();
        assert!(defining_representation(&alg).is_err());
    }

    #[test]
    fn killing_like_form_is_invariant() {
        let alg = LieAlgebraTable::new(Family::A, 1).unwrap();
        let names = VarNames::full(&alg);
        let good = Poly::parse_text("p1^2 + x[1]*x[-1]", &names).unwrap();
        let bad = Poly::parse_text("p1^2 + 2*x[1]*x[-1]", &names).unwrap();
        assert_eq!(check_invariance(&good, &alg).unwrap(), None);
        assert!(check_invariance(&bad, &alg).unwrap().is_some());
    }

    #[test]
    fn weyl_reflection_images() {
        let alg = LieAlgebraTable::new(Family::A, 2).unwrap();
        let names = VarNames::cartan(2);
        let quad = Poly::parse_text("p1^2 - p1*p2 + p2^2", &names).unwrap();
        assert_eq!(check_weyl_invariance(&quad, &alg).unwrap(), None);
        let lin = Poly::parse_text("p1", &names).unwrap();
        assert!(check_weyl_invariance(&lin, &alg).unwrap().is_some());
    }

    #[test]
    fn minors_of_diagonal() {
        let names = VarNames::cartan(2);
        let a = Poly::parse_text("p1", &names).unwrap();
        let b = Poly::parse_text("p2", &names).unwrap();
        let z = Poly::zero(2);
        let m = vec![vec![a.clone(), z.clone()], vec![z, b.clone()]];
        assert_eq!(principal_minor_sum(&m, 1, 2), &a + &b);
        assert_eq!(principal_minor_sum(&m, 2, 2), &a * &b);
    }
}
