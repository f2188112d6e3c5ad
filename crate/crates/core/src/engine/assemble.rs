//! Turning a value table into a polynomial on the algebra.
//!
//! A key `(W, U, b, a)` with value `v(p)` contributes
//! `v(p) / (a! b! Π m!) · Π_k y_k`, where `y = M⁻¹ x` are the frame
//! coordinates and `m` runs over factor multiplicities. The `ε^b` factor is
//! then spread over the coordinates `x_{-α_i}` by weight balance.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ValueTable;
use crate::error::{Error, Result};
use crate::kostant::KostantFrame;
use crate::poly::{CartanPoly, FullPoly, JsonTerm, Monomial, Poly, VarNames};
use crate::rational::{factorial, Rational};
use crate::rootdata::{Family, LieAlgebraTable};
use crate::termgen::{Scope, TermKey};

/// An assembled invariant together with its restriction to the Cartan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPolynomial {
    pub family: Family,
    pub rank: usize,
    pub degree: u32,
    /// 1-based slice index for primitive invariants.
    pub index: Option<usize>,
    pub scope: Scope,
    /// Variables as in [`VarNames::full`].
    pub poly: FullPoly,
    /// `I(p)` for `p = Σ p_i H_i`.
    pub cartan: CartanPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantDocument {
    pub format: String,
    pub version: u32,
    pub family: Family,
    pub rank: usize,
    pub degree: u32,
    pub index: Option<usize>,
    pub scope: Scope,
    pub terms: Vec<JsonTerm>,
    pub cartan: Vec<JsonTerm>,
}

impl InvariantPolynomial {
    pub fn names(&self, alg: &LieAlgebraTable) -> VarNames {
        VarNames::full(alg)
    }

    pub fn to_text(&self, alg: &LieAlgebraTable) -> String {
        self.poly.to_text(&VarNames::full(alg))
    }

    pub fn to_document(&self, alg: &LieAlgebraTable) -> InvariantDocument {
        InvariantDocument {
            format: "lieinv.invariant".into(),
            version: 1,
            family: self.family,
            rank: self.rank,
            degree: self.degree,
            index: self.index,
            scope: self.scope,
            terms: self.poly.to_json_terms(&VarNames::full(alg)),
            cartan: self.cartan.to_json_terms(&VarNames::cartan(self.rank)),
        }
    }

    pub fn to_json(&self, alg: &LieAlgebraTable) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document(alg))?)
    }

    pub fn from_document(alg: &LieAlgebraTable, doc: &InvariantDocument) -> Result<Self> {
        if doc.format != "lieinv.invariant" || doc.version != 1 {
            return Err(Error::Parse(format!(
                "unsupported document {} v{}",
                doc.format, doc.version
            )));
        }
        if doc.family != alg.roots.family || doc.rank != alg.rank() {
            return Err(Error::Parse(format!(
                "document is for {}{}, algebra is {}",
                doc.family,
                doc.rank,
                alg.label()
            )));
        }
        Ok(InvariantPolynomial {
            family: doc.family,
            rank: doc.rank,
            degree: doc.degree,
            index: doc.index,
            scope: doc.scope,
            poly: Poly::from_json_terms(&doc.terms, &VarNames::full(alg))?,
            cartan: Poly::from_json_terms(&doc.cartan, &VarNames::cartan(doc.rank))?,
        })
    }

    pub fn from_json(alg: &LieAlgebraTable, s: &str) -> Result<Self> {
        Self::from_document(alg, &serde_json::from_str(s)?)
    }
}

/// `1 / (a! b! Π m!)` for a key.
fn key_weight(key: &TermKey) -> Rational {
    let mut den = factorial(key.a) * factorial(key.b);
    for (n, _) in key.w.iter().chain(&key.u).dedup_with_count() {
        den *= factorial(n as u32);
    }
    Rational::new(BigInt::from(1), BigInt::from(1)) / den
}

/// Sum of `value · weight · Π y_k` with `y_k` given by `coords`, and the
/// Cartan variables renamed into the target universe by `cartan_vars`.
fn expand<F>(table: &ValueTable, nvars: usize, cartan_vars: &[usize], coords: F) -> Result<Poly>
where
    F: Fn(usize) -> Poly,
{
    let mut forms: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut acc = Poly::zero(nvars);
    for (key, value) in &table.values {
        if value.is_zero() || (table.scope == Scope::Borel && key.beta() > 0) {
            continue;
        }
        let mut term = value.rename(cartan_vars, nvars).scale(&key_weight(key));
        for &k in key.w.iter().chain(&key.u) {
            let form = forms.entry(k).or_insert_with(|| coords(k));
            term = term.try_mul(form)?;
        }
        acc.add_scaled(&term, &Rational::from_integer(1.into()))?;
    }
    Ok(acc)
}

/// The invariant in the root-basis coordinates `p_i, x_α`.
pub fn assemble(
    table: &ValueTable,
    frame: &KostantFrame,
    scope: Scope,
) -> Result<InvariantPolynomial> {
    if !table.is_complete() {
        return Err(Error::Defect(format!(
            "value table has {} of {} strata",
            table.completed_strata, table.total_strata
        )));
    }
    let alg = &frame.alg;
    let l = alg.rank();
    let n = alg.dim;
    let cartan_vars: Vec<usize> = (0..l).collect();
    let linear = |k: usize| Poly::linear(n, frame.inverse_row(k));
    let sum = expand(table, n, &cartan_vars, linear)?;
    let poly = match scope {
        Scope::Borel => sum,
        Scope::Full => balance_weights(alg, &sum)?,
    };
    let pure = table
        .values
        .iter()
        .find(|(k, _)| k.w.is_empty() && k.u.is_empty() && k.b == 0)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| Error::MissingDependency("pure Cartan term".into()))?;
    let cartan = pure.scale(&(Rational::from_integer(1.into()) / factorial(table.degree)));
    Ok(InvariantPolynomial {
        family: alg.roots.family,
        rank: l,
        degree: table.degree,
        index: None,
        scope,
        poly,
        cartan,
    })
}

/// Multiplies each monomial by the `x_{-α_i}` powers that make it weight zero.
fn balance_weights(alg: &LieAlgebraTable, p: &Poly) -> Result<Poly> {
    let l = alg.rank();
    let neg: Vec<usize> = (0..l).map(|i| alg.negative_simple(i)).collect();
    let mut out = Poly::zero(p.nvars());
    for (m, c) in p.terms() {
        let mut weight = vec![0i64; l];
        for (r, &e) in m.0.iter().enumerate() {
            if e > 0 {
                for (w, x) in weight.iter_mut().zip(&alg.basis_roots[r]) {
                    *w += i64::from(e) * x;
                }
            }
        }
        let mut exps = m.0.clone();
        for i in 0..l {
            if weight[i] < 0 {
                return Err(Error::Defect(format!(
                    "monomial of negative weight {weight:?} in the assembled sum"
                )));
            }
            exps[neg[i]] += weight[i] as u16;
        }
        out.add_term(Monomial(exps), c.clone());
    }
    Ok(out)
}

/// The invariant restricted to `ε + span{f_k : height ≥ 0}`, written in
/// frame coordinates `y_1..y_n` (1-based f-indices).
pub fn assemble_frame_coordinates(
    table: &ValueTable,
    frame: &KostantFrame,
) -> Result<(Poly, VarNames)> {
    let n = frame.dim();
    let l = frame.rank();
    let cartan_vars: Vec<usize> = (0..l).map(|i| frame.f_cartan(i)).collect();
    let mut restricted = table.clone();
    restricted.scope = Scope::Borel;
    let poly = expand(&restricted, n, &cartan_vars, |k| Poly::var(n, k))?;
    let names = VarNames::new((1..=n).map(|k| format!("y{k}")).collect());
    Ok((poly, names))
}
