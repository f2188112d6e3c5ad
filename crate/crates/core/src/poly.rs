//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] lives in a fixed variable universe of `nvars` variables. Terms
//! are kept in a `BTreeMap` keyed by graded-lex monomials, so iteration order
//! and printed output are canonical. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::rootdata::{root_label, LieAlgebraTable};

/// Dense exponent vector. Ordered graded-lex: higher total degree is
/// greater, ties broken lexicographically with variable 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0[i]
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Polynomial in the Cartan coordinates `p_1..p_l`.
pub type CartanPoly = Poly;
/// Polynomial over the full coordinate set, one variable per basis element.
pub type FullPoly = Poly;

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat(1))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), rat(1));
        p
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(nvars: usize, coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (i, c) in coeffs {
            p.add_term(Monomial::var(nvars, i), c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial outside the variable universe");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_universe(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) -> Result<()> {
        self.check_universe(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        out.add_scaled(other, &rat(1))?;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        out.add_scaled(other, &rat(-1))?;
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_universe(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiplies by the variable `x_i`.
    pub fn mul_var(&self, i: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.0[i] += 1;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m = m.clone();
                m.0[i] -= 1;
                out.add_term(m, c * rat(i64::from(e)));
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` iff every stored monomial has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Replaces every variable by a polynomial in a common target universe.
    pub fn compose(&self, images: &[Poly], target_nvars: usize) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        for img in images {
            if img.nvars != target_nvars {
                return Err(Error::VariableMismatch {
                    left: target_nvars,
                    right: img.nvars,
                });
            }
        }
        let mut powers: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(u32::from(e)));
                term = &term * pw;
            }
            out.add_scaled(&term, &rat(1))?;
        }
        Ok(out)
    }

    /// Substitutes some variables by polynomials in the same universe.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Poly>) -> Result<Poly> {
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                assignment
                    .get(&i)
                    .cloned()
                    .unwrap_or_else(|| Poly::var(self.nvars, i))
            })
            .collect();
        self.compose(&images, self.nvars)
    }

    /// Specializes some variables to rational values, keeping the universe.
    pub fn specialize(&self, values: &BTreeMap<usize, Rational>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut c = c.clone();
            for (&i, v) in values {
                let e = m.0[i];
                if e > 0 {
                    c *= num_traits::pow(v.clone(), usize::from(e));
                    m.0[i] = 0;
                }
            }
            out.add_term(m, c);
        }
        out
    }

    /// Evaluates at a point; every variable that occurs must be assigned.
    pub fn evaluate(
        &self,
        values: &BTreeMap<usize, Rational>,
        names: &VarNames,
    ) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values
                    .get(&i)
                    .ok_or_else(|| Error::UnboundVariable(names.name(i).to_string()))?;
                t *= num_traits::pow(v.clone(), usize::from(e));
            }
            total += t;
        }
        Ok(total)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().enumerate().fold(c.clone(), |acc, (i, &e)| {
                    if e == 0 {
                        acc
                    } else {
                        acc * num_traits::pow(point[i].clone(), usize::from(e))
                    }
                })
            })
            .sum()
    }

    /// Moves the polynomial into a universe of `nvars` variables, sending
    /// variable `i` to `map[i]`.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn to_text(&self, names: &VarNames) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", names.name(i), e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn parse_text(s: &str, names: &VarNames) -> Result<Poly> {
        let n = names.len();
        let mut out = Poly::zero(n);
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for (sign, body) in split_signed_terms(s)? {
            let mut c = rat(sign);
            let mut m = Monomial::one(n);
            for factor in body.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {body:?}")));
                }
                let (base, exp) = match factor.rfind('^') {
                    Some(at) if !factor[at..].contains(']') => {
                        let e: u16 = factor[at + 1..]
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (factor[..at].trim(), e)
                    }
                    _ => (factor, 1),
                };
                if let Some(i) = names.index(base) {
                    m.0[i] += exp;
                } else if base.starts_with(|ch: char| ch.is_ascii_digit()) {
                    let v = parse_rational(base)?;
                    c *= num_traits::pow(v, usize::from(exp));
                } else {
                    return Err(Error::UnboundVariable(base.to_string()));
                }
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn to_json_terms(&self, names: &VarNames) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| JsonTerm {
                coeff: format_rational(c),
                exps: m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (names.name(i).to_string(), u32::from(e)))
                    .collect(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm], names: &VarNames) -> Result<Poly> {
        let n = names.len();
        let mut out = Poly::zero(n);
        for t in terms {
            let mut m = Monomial::one(n);
            for (name, &e) in &t.exps {
                let i = names
                    .index(name)
                    .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
                m.0[i] += u16::try_from(e)
                    .map_err(|_| Error::Parse(format!("exponent {e} too large")))?;
            }
            out.add_term(m, parse_rational(&t.coeff)?);
        }
        Ok(out)
    }
}

/// Splits `a - b + c` into signed terms, ignoring signs inside brackets.
fn split_signed_terms(s: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        let after_op = matches!(prev, Some('*' | '^' | '/'));
        if depth == 0 && (ch == '+' || ch == '-') && !after_op {
            if !cur.trim().is_empty() {
                out.push((sign, cur.trim().to_string()));
                sign = 1;
                cur.clear();
            }
            if ch == '-' {
                sign = -sign;
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("trailing operator in {s:?}")));
    }
    out.push((sign, cur.trim().to_string()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exps: BTreeMap<String, u32>,
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial universes differ")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial universes differ")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial universes differ")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

/// Names for the variables of a universe, with reverse lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarNames {
    pub fn new(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        VarNames { names, index }
    }

    /// `p1..pl`.
    pub fn cartan(l: usize) -> Self {
        Self::new((1..=l).map(|i| format!("p{i}")).collect())
    }

    /// `xi1..xil`, coordinates on the slice.
    pub fn slice(l: usize) -> Self {
        Self::new((1..=l).map(|i| format!("xi{i}")).collect())
    }

    /// One variable per basis element: `p_i` for `H_i`, `x[n_1,..]` for `e_α`.
    pub fn full(alg: &LieAlgebraTable) -> Self {
        let l = alg.rank();
        let names = (0..alg.dim)
            .map(|i| {
                if i < l {
                    format!("p{}", i + 1)
                } else {
                    format!("x{}", root_label(&alg.basis_roots[i]))
                }
            })
            .collect();
        Self::new(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// Display with generic names `v0, v1, ...`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::new((0..self.nvars).map(|i| format!("v{i}")).collect());
        write!(f, "{}", self.to_text(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&p(0) + &p(1)) * &(&p(0) - &p(1));
        let rhs = &p(0).pow(2) - &p(1).pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_by_zero() {
        assert!(p(0).scale(&rat(0)).is_zero());
    }

    #[test]
    fn partials() {
        let f = &p(0).pow(2) * &p(1);
        assert_eq!(f.partial(0), (&p(0) * &p(1)).scale(&rat(2)));
        assert!(Poly::constant(2, rat(7)).partial(1).is_zero());
    }

    #[test]
    fn substitution() {
        let f = p(0).pow(2);
        let mut a = BTreeMap::new();
        a.insert(0, -&p(0));
        assert_eq!(f.substitute(&a).unwrap(), f);
        let g = &(&p(0) * &p(1)) + &Poly::constant(2, rat(5));
        let zeros: BTreeMap<usize, Rational> = [(0, rat(0)), (1, rat(0))].into();
        assert_eq!(g.evaluate(&zeros, &VarNames::cartan(2)).unwrap(), rat(5));
    }

    #[test]
    fn unbound_variable() {
        let g = &p(0) * &p(1);
        let partial: BTreeMap<usize, Rational> = [(0, rat(1))].into();
        let err = g.evaluate(&partial, &VarNames::cartan(2)).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable(ref n) if n == "p2"));
    }

    #[test]
    fn universe_mismatch() {
        let a = Poly::var(2, 0);
        let b = Poly::var(3, 0);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::VariableMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn homogeneity() {
        let f = &p(0).pow(2) + &(&p(0) * &p(1));
        assert_eq!(f.homogeneous_degree(), Some(2));
        let g = &f + &p(1);
        assert_eq!(g.homogeneous_degree(), None);
    }

    #[test]
    fn text_format() {
        let names = VarNames::new(vec!["p1".into(), "x[1,0]".into(), "x[-1,-1]".into()]);
        let mut f = Poly::zero(3);
        f.add_term(Monomial(vec![2, 1, 0]), ratio(3, 2));
        f.add_term(Monomial(vec![0, 0, 1]), rat(-1));
        let s = f.to_text(&names);
        assert_eq!(s, "3/2*p1^2*x[1,0] - x[-1,-1]");
        assert_eq!(Poly::parse_text(&s, &names).unwrap(), f);
        let g = Poly::parse_text("-x[-1,-1] + 2 - 1/3*p1", &names).unwrap();
        assert_eq!(g.constant_term(), rat(2));
        assert_eq!(g.coeff(&Monomial(vec![0, 0, 1])), rat(-1));
        assert_eq!(Poly::parse_text(&g.to_text(&names), &names).unwrap(), g);
        assert!(Poly::parse_text("p1 +", &names).is_err());
        assert!(Poly::parse_text("q7", &names).is_err());
    }

    #[test]
    fn json_round_trip() {
        let names = VarNames::cartan(2);
        let f = &(&p(0).pow(3) - &p(1).scale(&ratio(5, 7))) + &Poly::one(2);
        let json = serde_json::to_string(&f.to_json_terms(&names)).unwrap();
        let back: Vec<JsonTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(Poly::from_json_terms(&back, &names).unwrap(), f);
    }

    #[test]
    fn compose_linear() {
        // f(u, v) = u v with u = a + b, v = a - b.
        let f = &p(0) * &p(1);
        let images = vec![&p(0) + &p(1), &p(0) - &p(1)];
        let g = f.compose(&images, 2).unwrap();
        assert_eq!(g, &p(0).pow(2) - &p(1).pow(2));
    }
}
