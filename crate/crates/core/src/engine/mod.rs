//! Filling the value table by induction and assembling the invariant.
//!
//! Values are polynomials in the Cartan coordinates `p_1..p_l`. The table is
//! filled stratum by stratum: top terms by descending `b`, p-terms by
//! ascending `a`, the pure-Cartan term, then negative terms by ascending
//! `(β, |o(W)|)` and descending `b`. Every value in a stratum depends only on
//! earlier strata, so a stratum may be computed in parallel and is published
//! as a whole.

pub mod assemble;
pub mod checkpoint;
mod reduce;

use std::collections::BTreeMap;
use std::path::PathBuf;

use dashmap::DashMap;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kostant::KostantFrame;
use crate::poly::{Monomial, Poly};
use crate::rational::{factorial, Rational};
use crate::termgen::{generate_terms, Scope, TermKey, TermLists};

pub use assemble::{assemble, assemble_frame_coordinates, InvariantDocument, InvariantPolynomial};
pub use checkpoint::{content_hash, Checkpoint};

/// What the invariant restricts to on the slice `ε + Σ ξ_j s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    /// 1-based slice index for primitive seeds.
    pub index: Option<usize>,
    /// Target polynomial in `ξ_1..ξ_l`.
    pub target: Poly,
}

impl SeedSpec {
    /// The primitive invariant `I_j` with `I_j(ε + Σ ξ_i s_i) = ξ_j`.
    pub fn primitive(frame: &KostantFrame, j: usize) -> Result<Self> {
        let l = frame.rank();
        if j == 0 || j > l {
            return Err(Error::IndexOutOfRange { index: j, max: l });
        }
        Ok(SeedSpec {
            index: Some(j),
            target: Poly::var(l, j - 1),
        })
    }

    /// Arbitrary constants on the pure-slice terms, given as the polynomial
    /// the invariant should restrict to on the slice.
    pub fn generic(target: Poly) -> Self {
        SeedSpec {
            index: None,
            target,
        }
    }

    /// Degree implied by a weighted-homogeneous target.
    pub fn degree(&self, frame: &KostantFrame) -> Result<u32> {
        let degrees = frame.degrees();
        let mut found = None;
        for (m, _) in self.target.terms() {
            let w: u32 =
                m.0.iter()
                    .zip(&degrees)
                    .map(|(&e, &d)| u32::from(e) * d as u32)
                    .sum();
            match found {
                None => found = Some(w),
                Some(x) if x != w => {
                    return Err(Error::SeedMismatch(format!(
                        "target mixes weighted degrees {x} and {w}"
                    )))
                }
                _ => {}
            }
        }
        found.ok_or_else(|| Error::SeedMismatch("target is zero".into()))
    }

    /// Checks the target against `d`.
    pub fn check_degree(&self, frame: &KostantFrame, d: u32) -> Result<()> {
        if self.target.nvars() != frame.rank() {
            return Err(Error::VariableMismatch {
                left: frame.rank(),
                right: self.target.nvars(),
            });
        }
        let w = self.degree(frame)?;
        if w != d {
            return Err(match self.index {
                Some(j) => Error::DegreeMismatch {
                    degree: d,
                    expected: w,
                    index: j,
                },
                None => Error::SeedMismatch(format!("target has weighted degree {w}, not {d}")),
            });
        }
        Ok(())
    }

    /// Value of a pure-slice top term: `b! Π k_i! · coef(ξ^k)`.
    pub fn seed_value(&self, frame: &KostantFrame, key: &TermKey) -> Rational {
        let l = frame.rank();
        let mut exps = vec![0u16; l];
        for k in &key.u {
            let j = frame
                .slice_index
                .iter()
                .position(|s| s == k)
                .expect("pure-slice key");
            exps[j] += 1;
        }
        let c = self.target.coeff(&Monomial(exps.clone()));
        if c.is_zero() {
            return c;
        }
        exps.iter().fold(c * factorial(key.b), |acc, &e| {
            acc * factorial(u32::from(e))
        })
    }
}

/// The pure-slice top terms and their seed values.
pub fn seed_values(
    frame: &KostantFrame,
    seeds: &SeedSpec,
    d: u32,
) -> Result<BTreeMap<TermKey, Rational>> {
    seeds.check_degree(frame, d)?;
    let terms = generate_terms(frame, d, Scope::Borel);
    Ok(terms
        .ttms
        .iter()
        .filter(|k| k.is_pure_slice(frame))
        .map(|k| (k.clone(), seeds.seed_value(frame, k)))
        .collect())
}

/// The computed pairings, keyed by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    pub algebra: String,
    pub degree: u32,
    pub scope: Scope,
    pub seeds: BTreeMap<TermKey, Rational>,
    pub values: BTreeMap<TermKey, Poly>,
    pub hash: String,
    pub completed_strata: usize,
    pub total_strata: usize,
}

impl ValueTable {
    pub fn is_complete(&self) -> bool {
        self.completed_strata == self.total_strata
    }

    pub fn get(&self, key: &TermKey) -> Option<&Poly> {
        self.values.get(key)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads inside a stratum; 0 or 1 runs single-threaded.
    pub threads: usize,
    /// Stop once this many strata are complete (the table is then incomplete).
    pub stop_after: Option<usize>,
    /// Continue from a checkpoint of the same computation.
    pub resume: Option<Checkpoint>,
    /// Rewrite this checkpoint file after every stratum.
    pub checkpoint_path: Option<PathBuf>,
}

/// Splits term lists into the strata of the induction.
pub fn strata(frame: &KostantFrame, terms: &TermLists) -> Vec<Vec<TermKey>> {
    fn group<F: Fn(&TermKey) -> K, K: PartialEq>(list: &[TermKey], f: F) -> Vec<Vec<TermKey>> {
        let mut out: Vec<Vec<TermKey>> = Vec::new();
        let mut last: Option<K> = None;
        for k in list {
            let g = f(k);
            if last.as_ref() != Some(&g) {
                out.push(Vec::new());
                last = Some(g);
            }
            out.last_mut().unwrap().push(k.clone());
        }
        out
    }
    let mut out = group(&terms.ttms, |k| k.b);
    out.extend(group(&terms.ptms, |k| k.a));
    out.push(vec![terms.pure_cartan.clone()]);
    out.extend(group(&terms.ntms, |k| (k.beta(), k.ow(frame), k.b)));
    out
}

/// Inductive evaluator over a fixed frame, degree and seed set.
pub struct Engine<'a> {
    pub(crate) frame: &'a KostantFrame,
    pub(crate) d: u32,
    pub(crate) seeds: BTreeMap<TermKey, Rational>,
    pub(crate) table: DashMap<TermKey, Poly>,
    pub(crate) memo: DashMap<(Vec<usize>, u32, u32), Poly>,
}

impl<'a> Engine<'a> {
    pub fn new(frame: &'a KostantFrame, seeds: &SeedSpec, d: u32) -> Result<Self> {
        Ok(Engine {
            frame,
            d,
            seeds: seed_values(frame, seeds, d)?,
            table: DashMap::new(),
            memo: DashMap::new(),
        })
    }

    pub fn frame(&self) -> &KostantFrame {
        self.frame
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Stored value of a key, if computed.
    pub fn value(&self, key: &TermKey) -> Option<Poly> {
        self.table.get(key).map(|v| v.clone())
    }

    pub fn insert(&self, key: TermKey, value: Poly) {
        self.table.insert(key, value);
    }

    /// Preloads every value of a finished table, for re-deriving entries.
    pub fn load(&self, table: &ValueTable) {
        for (k, v) in &table.values {
            self.table.insert(k.clone(), v.clone());
        }
    }

    /// Computes one key from the values already stored.
    pub fn compute_key(&self, key: &TermKey) -> Result<Poly> {
        if key.beta() > 0 {
            self.reduce_negative(key, None)
        } else if key.a > 0 {
            self.reduce_p(key)
        } else if let Some(v) = self.seeds.get(key) {
            Ok(Poly::constant(self.frame.rank(), v.clone()))
        } else {
            self.reduce_top(key)
        }
    }

    /// Computes one stratum and publishes it.
    pub fn run_stratum(&self, stratum: &[TermKey], parallel: bool) -> Result<()> {
        let values: Vec<Poly> = if parallel {
            stratum
                .par_iter()
                .map(|k| self.compute_key(k))
                .collect::<Result<_>>()?
        } else {
            stratum
                .iter()
                .map(|k| self.compute_key(k))
                .collect::<Result<_>>()?
        };
        for (k, v) in stratum.iter().zip(values) {
            if !v.is_zero() && v.homogeneous_degree() != Some(k.a) {
                return Err(Error::Defect(format!(
                    "value of {k} is not homogeneous of degree {}",
                    k.a
                )));
            }
            self.table.insert(k.clone(), v);
        }
        Ok(())
    }
}

/// Runs the whole induction for one invariant.
pub fn compute_valuedata(
    frame: &KostantFrame,
    seeds: &SeedSpec,
    d: u32,
    scope: Scope,
    options: &RunOptions,
) -> Result<ValueTable> {
    let engine = Engine::new(frame, seeds, d)?;
    let terms = generate_terms(frame, d, scope);
    let strata = strata(frame, &terms);
    let hash = content_hash(frame, d, scope, seeds);
    let mut done = 0;
    if let Some(cp) = &options.resume {
        if cp.hash != hash {
            return Err(Error::ResumeMismatch {
                expected: hash,
                found: cp.hash.clone(),
            });
        }
        for (k, v) in cp.values(frame)? {
            engine.insert(k, v);
        }
        done = cp.completed_strata;
    }
    let limit = options
        .stop_after
        .map_or(strata.len(), |s| s.min(strata.len()));
    let parallel = options.threads > 1;
    let snapshot = |done: usize| ValueTable {
        algebra: frame.alg.label(),
        degree: d,
        scope,
        seeds: engine.seeds.clone(),
        values: engine
            .table
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect(),
        hash: hash.clone(),
        completed_strata: done,
        total_strata: strata.len(),
    };
    let run = |done: &mut usize| -> Result<()> {
        while *done < limit {
            engine.run_stratum(&strata[*done], parallel)?;
            *done += 1;
            if let Some(path) = &options.checkpoint_path {
                Checkpoint::from_table(&snapshot(*done), frame).save(path)?;
            }
        }
        Ok(())
    };
    if parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::Defect(e.to_string()))?;
        pool.install(|| run(&mut done))?;
    } else {
        run(&mut done)?;
    }
    Ok(snapshot(done))
}

/// Value table and assembled polynomial for one seed choice.
pub fn compute_invariant(
    frame: &KostantFrame,
    seeds: &SeedSpec,
    scope: Scope,
    options: &RunOptions,
) -> Result<(ValueTable, InvariantPolynomial)> {
    let d = seeds.degree(frame)?;
    let table = compute_valuedata(frame, seeds, d, scope, options)?;
    let mut inv = assemble(&table, frame, scope)?;
    inv.index = seeds.index;
    Ok((table, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarNames;
    use crate::rootdata::{Family, LieAlgebraTable};
    use crate::verify::verify_invariant;

    fn invariant(
        family: Family,
        rank: usize,
        j: usize,
        scope: Scope,
    ) -> (KostantFrame, SeedSpec, InvariantPolynomial) {
        let alg = LieAlgebraTable::new(family, rank).unwrap();
        let frame = KostantFrame::new(&alg).unwrap();
        let seeds = SeedSpec::primitive(&frame, j).unwrap();
        let (_, inv) = compute_invariant(&frame, &seeds, scope, &RunOptions::default()).unwrap();
        (frame, seeds, inv)
    }

    #[test]
    fn sl2_quadratic() {
        let (frame, _, inv) = invariant(Family::A, 1, 1, Scope::Full);
        assert_eq!(
            inv.poly.to_text(&VarNames::full(&frame.alg)),
            "p1^2 + x[1]*x[-1]"
        );
        assert_eq!(inv.cartan.to_text(&VarNames::cartan(1)), "p1^2");
    }

    #[test]
    fn g2_invariants_verify() {
        for j in 1..=2 {
            let (frame, seeds, inv) = invariant(Family::G, 2, j, Scope::Full);
            let report = verify_invariant(&inv, &frame, &seeds.target).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn g2_borel_verifies() {
        let (frame, seeds, inv) = invariant(Family::G, 2, 2, Scope::Borel);
        let report = verify_invariant(&inv, &frame, &seeds.target).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn incomplete_tables_do_not_assemble() {
        let alg = LieAlgebraTable::new(Family::G, 2).unwrap();
        let frame = KostantFrame::new(&alg).unwrap();
        let seeds = SeedSpec::primitive(&frame, 2).unwrap();
        let opts = RunOptions {
            stop_after: Some(3),
            ..RunOptions::default()
        };
        let table = compute_valuedata(&frame, &seeds, 6, Scope::Full, &opts).unwrap();
        assert!(!table.is_complete());
        assert!(assemble(&table, &frame, Scope::Full).is_err());
    }

    #[test]
    fn seed_degree_is_checked() {
        let alg = LieAlgebraTable::new(Family::G, 2).unwrap();
        let frame = KostantFrame::new(&alg).unwrap();
        let seeds = SeedSpec::primitive(&frame, 2).unwrap();
        assert!(matches!(
            seeds.check_degree(&frame, 4),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(SeedSpec::primitive(&frame, 3).is_err());
    }
}
