//! Root systems of the simple types and their Chevalley bases.
//!
//! Roots are integer vectors over the simple roots. Positive roots are
//! generated from the Cartan matrix by root strings and stored in canonical
//! order: ascending height, ties broken so that `α_1` precedes `α_2` (reverse
//! lexicographic on the coefficient vector).
//!
//! The Chevalley basis is `H_1..H_l`, then `e_α` for positive roots in
//! canonical order, then `e_{-α}` in the same order, which runs the negative
//! part from height -1 down to the lowest root. Structure constants follow
//! the extraspecial-pair scheme with every extraspecial sign equal to +1.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn accepts_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(Error::Parse(format!("unknown Lie family {s:?}"))),
        }
    }
}

/// Cartan matrix with `m[i][j] = α_j(H_{α_i})`, Bourbaki numbering.
pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i64>>> {
    if !family.accepts_rank(rank) {
        return Err(Error::InvalidType {
            family: family.letter(),
            rank,
        });
    }
    let l = rank;
    let mut m = vec![vec![0i64; l]; l];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        m[i][j] = -1;
        m[j][i] = -1;
    };
    match family {
        Family::A | Family::B | Family::C => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Family::G => link(0, 1),
    }
    // The row of the shorter root carries the long entry.
    match family {
        Family::B => m[l - 1][l - 2] = -2,
        Family::C => m[l - 2][l - 1] = -2,
        Family::F => m[2][1] = -2,
        Family::G => m[0][1] = -3,
        _ => {}
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Symmetric form on simple roots, `gram[i][i] = (α_i, α_i)`.
    pub gram: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(family, rank)?;
        let gram = symmetrize(&cartan);
        let l = rank;

        let mut roots: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut known: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let mut layer_start = 0;
        loop {
            let layer_end = roots.len();
            for r in layer_start..layer_end {
                let beta = roots[r].clone();
                for i in 0..l {
                    let mut p = 0;
                    loop {
                        let mut down = beta.clone();
                        down[i] -= p + 1;
                        if known.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) {
                            known.insert(up.clone(), roots.len());
                            roots.push(up);
                        }
                    }
                }
            }
            if roots.len() == layer_end {
                break;
            }
            layer_start = layer_end;
        }

        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let heights = roots.iter().map(|r| r.iter().sum()).collect();
        let index = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        Ok(RootSystem {
            family,
            rank,
            cartan_matrix: cartan,
            gram,
            positive_roots: roots,
            heights,
            index,
        })
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Index of a positive root, if the vector is one.
    pub fn positive_index(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn max_height(&self) -> i64 {
        *self.heights.last().unwrap_or(&0)
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let l = self.rank;
        (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| x[i] * y[j] * self.gram[i][j])
            .sum()
    }

    /// `β(H_{α_i})`, the Cartan integer `<β, α_i^∨>`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank)
            .map(|j| beta[j] * self.cartan_matrix[i][j])
            .sum()
    }

    /// Coefficients of `H_α` over `H_{α_1}..H_{α_l}` for a positive root.
    pub fn coroot(&self, alpha: &[i64]) -> Vec<i64> {
        let norm = self.inner(alpha, alpha);
        (0..self.rank)
            .map(|i| {
                let c = alpha[i] * self.gram[i][i];
                debug_assert_eq!(c % norm, 0);
                c / norm
            })
            .collect()
    }

    pub fn reflect_root(&self, i: usize, root: &[i64]) -> Vec<i64> {
        let k = self.pairing(root, i);
        let mut r = root.to_vec();
        r[i] -= k;
        r
    }

    /// Exponents with multiplicity, ascending. The multiplicity of `h` is the
    /// number of roots of height `h` minus the number of height `h + 1`.
    pub fn exponents(&self) -> Vec<usize> {
        let mx = self.max_height();
        let count = |h: i64| self.heights.iter().filter(|&&x| x == h).count();
        let mut out = Vec::new();
        for h in 1..=mx {
            for _ in count(h + 1)..count(h) {
                out.push(h as usize);
            }
        }
        out
    }
}

fn symmetrize(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let mut d: Vec<Option<Rational>> = vec![None; l];
    d[0] = Some(rat(1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..l {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().unwrap();
                d[j] = Some(di * rat(cartan[i][j]) / rat(cartan[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<Rational> = d.into_iter().map(Option::unwrap).collect();
    let lcm = d.iter().fold(num_bigint::BigInt::from(1), |acc, q| {
        num_integer::lcm(acc, q.denom().clone())
    });
    let d: Vec<i64> = d
        .iter()
        .map(|q| {
            (q * Rational::from_integer(lcm.clone()))
                .to_integer()
                .to_i64()
                .unwrap()
        })
        .collect();
    (0..l)
        .map(|i| (0..l).map(|j| d[i] * cartan[i][j]).collect())
        .collect()
}

/// A vector in the Chevalley basis with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GVector {
    #[serde(with = "serde_coords")]
    pub coords: Vec<Rational>,
}

mod serde_coords {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl GVector {
    pub fn zero(n: usize) -> Self {
        GVector {
            coords: vec![Rational::zero(); n],
        }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i] = rat(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &GVector) -> GVector {
        GVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GVector) -> GVector {
        GVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> GVector {
        GVector {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Common height of all nonzero coordinates, `None` for zero or mixed vectors.
    pub fn homogeneous_height(&self, alg: &LieAlgebraTable) -> Option<i64> {
        let mut hs = self.support().map(|(i, _)| alg.heights[i]);
        let h = hs.next()?;
        hs.all(|x| x == h).then_some(h)
    }
}

/// A point of the Cartan subalgebra in the `H_{α_i}` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanPoint(pub Vec<Rational>);

/// Chevalley basis with its structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebraTable {
    pub roots: RootSystem,
    pub dim: usize,
    /// Root of each basis element over the simple roots (zero for Cartan).
    pub basis_roots: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    /// `constants[i][j]` lists `(k, c)` with `[b_i, b_j] = Σ c b_k`.
    constants: Vec<Vec<Vec<(usize, i64)>>>,
    basis_index: HashMap<Vec<i64>, usize>,
}

impl LieAlgebraTable {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::from_roots(RootSystem::new(family, rank)?)
    }

    pub fn from_roots(rs: RootSystem) -> Result<Self> {
        let constants = ChevalleyBuilder::new(&rs).build()?;
        let table = Self::assemble(rs, constants);
        table.check_jacobi()?;
        Ok(table)
    }

    fn assemble(rs: RootSystem, constants: Vec<Vec<Vec<(usize, i64)>>>) -> Self {
        let l = rs.rank;
        let np = rs.num_positive();
        let dim = l + 2 * np;
        let mut basis_roots = vec![vec![0; l]; l];
        basis_roots.extend(rs.positive_roots.iter().cloned());
        basis_roots.extend(
            rs.positive_roots
                .iter()
                .map(|r| r.iter().map(|x| -x).collect()),
        );
        let heights = basis_roots.iter().map(|r| r.iter().sum()).collect();
        let basis_index = basis_roots
            .iter()
            .enumerate()
            .skip(l)
            .map(|(i, r)| (r.clone(), i))
            .collect();
        debug_assert_eq!(basis_roots.len(), dim);
        LieAlgebraTable {
            roots: rs,
            dim,
            basis_roots,
            heights,
            constants,
            basis_index,
        }
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn label(&self) -> String {
        self.roots.label()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.num_positive()
    }

    /// Basis index of `e_α` for any root `α`.
    pub fn root_basis_index(&self, root: &[i64]) -> Option<usize> {
        self.basis_index.get(root).copied()
    }

    pub fn positive_basis(&self, r: usize) -> usize {
        self.rank() + r
    }

    pub fn negative_basis(&self, r: usize) -> usize {
        self.rank() + self.num_positive() + r
    }

    /// Basis index of `e_{-α_i}` (0-based `i`).
    pub fn negative_simple(&self, i: usize) -> usize {
        self.negative_basis(i)
    }

    pub fn positive_simple(&self, i: usize) -> usize {
        self.positive_basis(i)
    }

    pub fn basis_label(&self, i: usize) -> String {
        if i < self.rank() {
            format!("H{}", i + 1)
        } else {
            format!("e{}", root_label(&self.basis_roots[i]))
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.constants[i][j]
    }

    pub fn bracket(&self, x: &GVector, y: &GVector) -> Result<GVector> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.dim(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for &(k, c) in &self.constants[i][j] {
                    out[k] += &ab * rat(c);
                }
            }
        }
        Ok(GVector { coords: out })
    }

    /// `α_i(p)` for `p` in the `H` basis.
    pub fn simple_root_value(&self, i: usize, p: &[Rational]) -> Rational {
        (0..self.rank())
            .map(|k| &p[k] * rat(self.roots.cartan_matrix[k][i]))
            .sum()
    }

    /// Simple reflection `r_i(p) = p - α_i(p) H_{α_i}` with 1-based `i`.
    pub fn simple_reflection(&self, i: usize, p: &CartanPoint) -> Result<CartanPoint> {
        let l = self.rank();
        if i == 0 || i > l {
            return Err(Error::IndexOutOfRange { index: i, max: l });
        }
        if p.0.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                got: p.0.len(),
            });
        }
        let a = self.simple_root_value(i - 1, &p.0);
        let mut q = p.0.clone();
        q[i - 1] -= a;
        Ok(CartanPoint(q))
    }

    fn jacobi_at(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.dim;
        let term = |a: usize, b: usize, c: usize, acc: &mut Vec<i64>| {
            for &(m, x) in &self.constants[b][c] {
                for &(r, y) in &self.constants[a][m] {
                    acc[r] += x * y;
                }
            }
        };
        let mut acc = vec![0i64; n];
        term(i, j, k, &mut acc);
        term(j, k, i, &mut acc);
        term(k, i, j, &mut acc);
        acc.iter().all(|&x| x == 0)
    }

    /// Exhaustive Jacobi check up to dimension 52, 10^4 random triples above.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim;
        if n <= 52 {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        if !self.jacobi_at(i, j, k) {
                            return Err(Error::JacobiViolation(i, j, k));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x1ac0b1);
            for _ in 0..10_000 {
                let (i, j, k) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !self.jacobi_at(i, j, k) {
                    return Err(Error::JacobiViolation(i, j, k));
                }
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> AlgebraDocument {
        let mut constants = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for &(k, c) in &self.constants[i][j] {
                    constants.push([i as i64, j as i64, k as i64, c]);
                }
            }
        }
        AlgebraDocument {
            format: ALGEBRA_FORMAT.to_string(),
            version: ALGEBRA_VERSION,
            family: self.roots.family,
            rank: self.rank(),
            cartan_matrix: self.roots.cartan_matrix.clone(),
            basis: (0..self.dim).map(|i| self.basis_label(i)).collect(),
            roots: self.basis_roots.clone(),
            constants,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    /// Loads a table from its document, checking it against the root data.
    pub fn from_document(doc: &AlgebraDocument) -> Result<Self> {
        if doc.format != ALGEBRA_FORMAT || doc.version != ALGEBRA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported algebra document {} v{}",
                doc.format, doc.version
            )));
        }
        let rs = RootSystem::new(doc.family, doc.rank)?;
        let l = rs.rank;
        let dim = l + 2 * rs.num_positive();
        if doc.roots.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: doc.roots.len(),
            });
        }
        let mut constants = vec![vec![Vec::new(); dim]; dim];
        for &[i, j, k, c] in &doc.constants {
            let (i, j, k) = (i as usize, j as usize, k as usize);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Parse(format!(
                    "constant index out of range: {i} {j} {k}"
                )));
            }
            constants[i][j].push((k, c));
            constants[j][i].push((k, -c));
        }
        let table = Self::assemble(rs, constants);
        if table.basis_roots != doc.roots {
            return Err(Error::Parse(
                "basis roots disagree with the root system".into(),
            ));
        }
        table.check_jacobi()?;
        Ok(table)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

pub const ALGEBRA_FORMAT: &str = "lieinv.algebra";
pub const ALGEBRA_VERSION: u32 = 1;

/// Versioned JSON form of a [`LieAlgebraTable`]. Each constant `[i, j, k, c]`
/// (with `i < j`) says the coefficient of `b_k` in `[b_i, b_j]` is `c`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDocument {
    pub format: String,
    pub version: u32,
    pub family: Family,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub basis: Vec<String>,
    pub roots: Vec<Vec<i64>>,
    pub constants: Vec<[i64; 4]>,
}

pub fn root_label(root: &[i64]) -> String {
    let parts: Vec<String> = root.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Computes `N_{α,β}` for all root pairs from the extraspecial pairs.
struct ChevalleyBuilder<'a> {
    rs: &'a RootSystem,
    all: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    np: usize,
    positive: HashMap<(usize, usize), i64>,
}

impl<'a> ChevalleyBuilder<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let np = rs.num_positive();
        let mut all = rs.positive_roots.clone();
        all.extend(
            rs.positive_roots
                .iter()
                .map(|r| r.iter().map(|x| -x).collect()),
        );
        let index = all
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        ChevalleyBuilder {
            rs,
            all,
            index,
            np,
            positive: HashMap::new(),
        }
    }

    fn neg(&self, r: usize) -> usize {
        if r < self.np {
            r + self.np
        } else {
            r - self.np
        }
    }

    fn sum(&self, r: usize, s: usize) -> Option<usize> {
        let v: Vec<i64> = self.all[r]
            .iter()
            .zip(&self.all[s])
            .map(|(a, b)| a + b)
            .collect();
        self.index.get(&v).copied()
    }

    fn norm(&self, r: usize) -> i64 {
        self.rs.inner(&self.all[r], &self.all[r])
    }

    /// Largest `p` with `s - p r` a root.
    fn string_below(&self, r: usize, s: usize) -> i64 {
        let mut p = 0;
        let mut v = self.all[s].clone();
        loop {
            for (x, y) in v.iter_mut().zip(&self.all[r]) {
                *x -= y;
            }
            if self.index.contains_key(&v) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// `N_{r,s}` for arbitrary roots whose sum is a root.
    fn n(&self, r: usize, s: usize) -> Rational {
        let np = self.np;
        let Some(z) = self.sum(r, s) else {
            return Rational::zero();
        };
        match (r < np, s < np) {
            (true, true) => rat(self.positive[&(r, s)]),
            (false, false) => -self.n(self.neg(r), self.neg(s)),
            (false, true) => -self.n(s, r),
            (true, false) => {
                if z < np {
                    // r = (-s) + z
                    -rat(self.norm(z)) / rat(self.norm(r)) * self.n(self.neg(s), z)
                } else {
                    // -s = r + (-z)
                    rat(self.norm(z)) / rat(self.norm(s)) * self.n(self.neg(z), r)
                }
            }
        }
    }

    fn build(mut self) -> Result<Vec<Vec<Vec<(usize, i64)>>>> {
        let np = self.np;
        for xi in 0..np {
            if self.rs.heights[xi] < 2 {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..xi)
                .filter_map(|a| {
                    let diff: Vec<i64> = self.all[xi]
                        .iter()
                        .zip(&self.all[a])
                        .map(|(x, y)| x - y)
                        .collect();
                    let b = *self.index.get(&diff)?;
                    (b < np && a < b).then_some((a, b))
                })
                .collect();
            let &(a0, b0) = pairs
                .first()
                .ok_or_else(|| Error::Defect(format!("root {xi} has no decomposition")))?;
            let n0 = self.string_below(a0, b0) + 1;
            self.positive.insert((a0, b0), n0);
            self.positive.insert((b0, a0), -n0);
            for &(a, b) in &pairs[1..] {
                let (na0, nb0) = (self.neg(a0), self.neg(b0));
                let mut acc = Rational::zero();
                if let Some(t) = self.sum(b, na0) {
                    acc += self.n(b, na0) * self.n(a, nb0) / rat(self.norm(t));
                }
                if let Some(t) = self.sum(na0, a) {
                    acc += self.n(na0, a) * self.n(b, nb0) / rat(self.norm(t));
                }
                let val = acc * rat(self.norm(xi)) / rat(n0);
                let expect = self.string_below(a, b) + 1;
                if !val.is_integer() || val.abs() != rat(expect) {
                    return Err(Error::Defect(format!(
                        "structure constant for roots {a},{b} came out {val}, expected ±{expect}"
                    )));
                }
                let v = val.to_integer().to_i64().unwrap();
                self.positive.insert((a, b), v);
                self.positive.insert((b, a), -v);
            }
        }

        let l = self.rs.rank;
        let dim = l + 2 * np;
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (i, row) in table.iter_mut().enumerate().take(l) {
            for r in 0..2 * np {
                let v = self.rs.pairing(&self.all[r], i);
                if v != 0 {
                    row[l + r].push((l + r, v));
                }
            }
        }
        for i in 0..l {
            for r in 0..2 * np {
                let entry = table[i][l + r].iter().map(|&(k, c)| (k, -c)).collect();
                table[l + r][i] = entry;
            }
        }
        for r in 0..2 * np {
            for s in 0..2 * np {
                let entry = &mut table[l + r][l + s];
                if s == self.neg(r) {
                    let (pos, sign) = if r < np { (r, 1) } else { (s, -1) };
                    for (i, c) in self.rs.coroot(&self.all[pos]).into_iter().enumerate() {
                        if c != 0 {
                            entry.push((i, sign * c));
                        }
                    }
                } else if let Some(t) = self.sum(r, s) {
                    let v = self.n(r, s).to_integer().to_i64().unwrap();
                    entry.push((l + t, v));
                }
            }
        }
        Ok(table)
    }
}
