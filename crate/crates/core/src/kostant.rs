//! The principal nilpotent `ε = Σ e_{-α_i}`, a homogeneous slice and the
//! cyclic basis `s_j^k = ad_ε^k s_j` the reductions run in.
//!
//! The frame basis (the "f-basis") is ordered by height: `H_1..H_l`, then
//! heights `1..mx`, then `e_{-α_1}..e_{-α_l}`, then heights `-2..-mx`. Within a
//! height the cyclic vectors are sorted by slice index `j`. Heights 0 and -1
//! keep the natural basis. Every conversion goes through per-height blocks of
//! the transition matrix, which is block diagonal.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{rat, Rational};
use crate::rootdata::{Family, GVector, LieAlgebraTable};

/// Sparse vector over the f-basis, sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FKind {
    Cartan(usize),
    NegSimple(usize),
    /// `s_j^k` with 0-based slice index `j`.
    Cyclic {
        j: usize,
        k: usize,
    },
}

#[derive(Clone, Debug)]
struct Block {
    roots: Vec<usize>,
    fs: Vec<usize>,
    /// Rows follow `fs`, columns follow `roots`.
    inv: Matrix,
}

#[derive(Clone, Debug)]
pub struct KostantFrame {
    pub alg: LieAlgebraTable,
    pub epsilon: GVector,
    /// Exponents `m_j`, ascending, matched with `slice`.
    pub exponents: Vec<usize>,
    pub slice: Vec<GVector>,
    /// `cyclic[j][k] = s_j^k` for `0 ≤ k ≤ 2 m_j`.
    pub cyclic: Vec<Vec<GVector>>,
    pub f_vectors: Vec<GVector>,
    pub f_kind: Vec<FKind>,
    pub f_height: Vec<i64>,
    /// f-indices of height ≥ 1.
    pub u: Vec<usize>,
    /// f-indices of height ≤ -2.
    pub w: Vec<usize>,
    /// f-index of each slice vector `s_j`.
    pub slice_index: Vec<usize>,
    /// True when some slice vector is not a pure root vector.
    pub used_fallback: bool,
    blocks: BTreeMap<i64, Block>,
    preimages: Vec<Option<SparseVec>>,
    f_brackets: Vec<Vec<SparseVec>>,
    omega: Vec<Vec<SparseVec>>,
    e_simple: Vec<SparseVec>,
}

fn ad_image(alg: &LieAlgebraTable, x: &GVector, idx: usize) -> GVector {
    alg.bracket(x, &GVector::basis(alg.dim, idx))
        .expect("dimensions agree")
}

fn basis_at_height(alg: &LieAlgebraTable, h: i64) -> Vec<usize> {
    (0..alg.dim).filter(|&i| alg.heights[i] == h).collect()
}

fn restrict(v: &GVector, rows: &[usize]) -> Vec<Rational> {
    rows.iter().map(|&r| v.coords[r].clone()).collect()
}

impl KostantFrame {
    /// Builds the frame with the greedy slice choice.
    pub fn new(alg: &LieAlgebraTable) -> Result<Self> {
        let slice = choose_slice(alg)?;
        Self::with_slice(alg, slice)
    }

    /// Builds the frame from a given homogeneous slice, checking that it
    /// complements `[ε, g]`.
    pub fn with_slice(alg: &LieAlgebraTable, slice: Vec<GVector>) -> Result<Self> {
        let l = alg.rank();
        let n = alg.dim;
        let epsilon = epsilon(alg);
        let expected = alg.roots.exponents();
        if slice.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                got: slice.len(),
            });
        }
        let mut heights = Vec::with_capacity(l);
        for s in &slice {
            match s.homogeneous_height(alg) {
                Some(h) if h >= 1 => heights.push(h as usize),
                _ => return Err(Error::Defect("slice vector is not homogeneous in n".into())),
            }
        }
        if heights != expected {
            return Err(Error::Defect(format!(
                "slice heights {heights:?} differ from the exponents {expected:?}"
            )));
        }
        for (h, group) in &heights.iter().enumerate().chunk_by(|(_, &h)| h) {
            let members: Vec<&GVector> = group.map(|(j, _)| &slice[j]).collect();
            if !complements(alg, &epsilon, h as i64, &members) {
                return Err(Error::SliceSelection { height: h as i64 });
            }
        }

        let mut cyclic = Vec::with_capacity(l);
        for (j, s) in slice.iter().enumerate() {
            let m = heights[j];
            let mut chain = vec![s.clone()];
            for _ in 0..2 * m {
                let next = alg.bracket(&epsilon, chain.last().unwrap())?;
                chain.push(next);
            }
            if chain.last().unwrap().is_zero() {
                return Err(Error::Defect(format!(
                    "slice vector {j} has a short ad(epsilon) string"
                )));
            }
            cyclic.push(chain);
        }

        let mx = alg.roots.max_height();
        let mut f_vectors = Vec::with_capacity(n);
        let mut f_kind = Vec::with_capacity(n);
        let push_height = |h: i64, fv: &mut Vec<GVector>, fk: &mut Vec<FKind>| match h {
            0 => {
                for i in 0..l {
                    fv.push(GVector::basis(n, i));
                    fk.push(FKind::Cartan(i));
                }
            }
            -1 => {
                for i in 0..l {
                    fv.push(GVector::basis(n, alg.negative_simple(i)));
                    fk.push(FKind::NegSimple(i));
                }
            }
            _ => {
                for (j, &m) in heights.iter().enumerate() {
                    let k = m as i64 - h;
                    if (0..=2 * m as i64).contains(&k) {
                        fv.push(cyclic[j][k as usize].clone());
                        fk.push(FKind::Cyclic { j, k: k as usize });
                    }
                }
            }
        };
        push_height(0, &mut f_vectors, &mut f_kind);
        for h in 1..=mx {
            push_height(h, &mut f_vectors, &mut f_kind);
        }
        push_height(-1, &mut f_vectors, &mut f_kind);
        for h in 2..=mx {
            push_height(-h, &mut f_vectors, &mut f_kind);
        }
        if f_vectors.len() != n {
            return Err(Error::Defect(format!(
                "frame has {} vectors for an algebra of dimension {n}",
                f_vectors.len()
            )));
        }
        let f_height: Vec<i64> = f_vectors
            .iter()
            .map(|v| {
                v.homogeneous_height(alg)
                    .expect("frame vectors are homogeneous")
            })
            .collect();

        let mut blocks = BTreeMap::new();
        for h in -mx..=mx {
            let roots = basis_at_height(alg, h);
            let fs: Vec<usize> = (0..n).filter(|&k| f_height[k] == h).collect();
            let mat: Matrix = roots
                .iter()
                .map(|&r| fs.iter().map(|&k| f_vectors[k].coords[r].clone()).collect())
                .collect();
            let inv = linalg::inverse(&mat)
                .ok_or_else(|| Error::Defect(format!("frame block at height {h} is singular")))?;
            blocks.insert(h, Block { roots, fs, inv });
        }

        let slice_index = (0..l)
            .map(|j| {
                f_kind
                    .iter()
                    .position(|k| *k == FKind::Cyclic { j, k: 0 })
                    .unwrap()
            })
            .collect();
        let u = (0..n).filter(|&k| f_height[k] >= 1).collect();
        let w = (0..n).filter(|&k| f_height[k] <= -2).collect();
        let used_fallback = slice.iter().any(|s| s.support().count() != 1);

        let mut frame = KostantFrame {
            alg: alg.clone(),
            epsilon,
            exponents: heights,
            slice,
            cyclic,
            f_vectors,
            f_kind,
            f_height,
            u,
            w,
            slice_index,
            used_fallback,
            blocks,
            preimages: Vec::new(),
            f_brackets: Vec::new(),
            omega: Vec::new(),
            e_simple: Vec::new(),
        };
        frame.precompute()?;
        Ok(frame)
    }

    fn precompute(&mut self) -> Result<()> {
        let alg = &self.alg;
        let n = alg.dim;
        let l = alg.rank();

        let mut preimages = Vec::with_capacity(n);
        for k in 0..n {
            let pre = match self.f_kind[k] {
                FKind::Cyclic { k: 0, .. } => None,
                FKind::Cyclic { j, k } => Some(self.to_f_sparse(&self.cyclic[j][k - 1])),
                // H_i = [ε, -e_{α_i}]
                FKind::Cartan(i) => {
                    let e = GVector::basis(n, alg.positive_simple(i));
                    Some(self.to_f_sparse(&e.scale(&rat(-1))))
                }
                // e_{-α_i} = [ε, ω_i]
                FKind::NegSimple(i) => Some(self.to_f_sparse(&self.coweight(i))),
            };
            preimages.push(pre);
        }

        let mut f_brackets = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = alg.bracket(&self.f_vectors[i], &self.f_vectors[j])?;
                let s = self.to_f_sparse(&v);
                f_brackets[j][i] = s.iter().map(|(k, c)| (*k, -c)).collect();
                f_brackets[i][j] = s;
            }
        }

        let omega = (0..l)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let v = &self.f_vectors[k];
                        let mut out = GVector::zero(n);
                        for (r, c) in v.support() {
                            out.coords[r] = c * rat(alg.basis_roots[r][i]);
                        }
                        self.to_f_sparse(&out)
                    })
                    .collect()
            })
            .collect();
        let e_simple = (0..l)
            .map(|i| self.to_f_sparse(&GVector::basis(n, alg.positive_simple(i))))
            .collect();

        self.preimages = preimages;
        self.f_brackets = f_brackets;
        self.omega = omega;
        self.e_simple = e_simple;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.exponents.iter().map(|m| m + 1).collect()
    }

    pub fn max_height(&self) -> i64 {
        self.alg.roots.max_height()
    }

    /// f-index of `H_i`.
    pub fn f_cartan(&self, i: usize) -> usize {
        i
    }

    /// f-index of `e_{-α_i}`.
    pub fn f_neg_simple(&self, i: usize) -> usize {
        self.f_kind
            .iter()
            .position(|k| *k == FKind::NegSimple(i))
            .unwrap()
    }

    pub fn is_cartan(&self, k: usize) -> bool {
        matches!(self.f_kind[k], FKind::Cartan(_))
    }

    pub fn neg_simple_of(&self, k: usize) -> Option<usize> {
        match self.f_kind[k] {
            FKind::NegSimple(i) => Some(i),
            _ => None,
        }
    }

    /// f-indices of a given height, in frame order.
    pub fn at_height(&self, h: i64) -> &[usize] {
        self.blocks.get(&h).map(|b| b.fs.as_slice()).unwrap_or(&[])
    }

    pub fn f_label(&self, k: usize) -> String {
        format!("f{}", k + 1)
    }

    /// The coweight `ω_i ∈ h` with `α_j(ω_i) = δ_ij`.
    pub fn coweight(&self, i: usize) -> GVector {
        let l = self.rank();
        let cm = &self.alg.roots.cartan_matrix;
        let transposed: Matrix = (0..l)
            .map(|j| (0..l).map(|k| rat(cm[k][j])).collect())
            .collect();
        let rhs: Vec<Rational> = (0..l).map(|j| rat(i64::from(i == j))).collect();
        let c = linalg::solve(&transposed, &rhs).expect("Cartan matrix is invertible");
        let mut v = GVector::zero(self.dim());
        v.coords[..l].clone_from_slice(&c);
        v
    }

    /// Dense f-coordinates of a root-basis vector.
    pub fn to_f_basis(&self, x: &GVector) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for block in self.blocks.values() {
            let xs = restrict(x, &block.roots);
            if xs.iter().all(Zero::is_zero) {
                continue;
            }
            for (row, &f) in block.fs.iter().enumerate() {
                out[f] = block.inv[row].iter().zip(&xs).map(|(a, b)| a * b).sum();
            }
        }
        out
    }

    pub fn to_f_sparse(&self, x: &GVector) -> SparseVec {
        self.to_f_basis(x)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn to_root_basis(&self, coords: &[Rational]) -> GVector {
        let mut out = GVector::zero(self.dim());
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, x) in self.f_vectors[k].support() {
                out.coords[r] += c * x;
            }
        }
        out
    }

    pub fn sparse_to_root(&self, v: &SparseVec) -> GVector {
        let mut dense = vec![Rational::zero(); self.dim()];
        for (k, c) in v {
            dense[*k] = c.clone();
        }
        self.to_root_basis(&dense)
    }

    /// Row `k` of `M⁻¹` as `(root basis index, coefficient)` pairs.
    pub fn inverse_row(&self, k: usize) -> Vec<(usize, Rational)> {
        let block = &self.blocks[&self.f_height[k]];
        let row = block.fs.iter().position(|&f| f == k).unwrap();
        block
            .roots
            .iter()
            .zip(&block.inv[row])
            .filter(|(_, c)| !c.is_zero())
            .map(|(&r, c)| (r, c.clone()))
            .collect()
    }

    /// The dense transition matrix `M` (columns are frame vectors).
    pub fn transition_matrix(&self) -> Matrix {
        let n = self.dim();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|k| self.f_vectors[k].coords[r].clone())
                    .collect()
            })
            .collect()
    }

    /// Stored preimage under `ad_ε` of a frame vector, in f-coordinates.
    pub fn preimage(&self, k: usize) -> Option<&SparseVec> {
        self.preimages[k].as_ref()
    }

    /// `[f_i, f_j]` in f-coordinates.
    pub fn f_bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.f_brackets[i][j]
    }

    /// `[v, f_j]` for a sparse `v`.
    pub fn bracket_sparse(&self, v: &SparseVec, j: usize) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in v {
            for (k, x) in &self.f_brackets[*i][j] {
                *acc.entry(*k).or_insert_with(Rational::zero) += c * x;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `ad_{ω_i}(f_k)` in f-coordinates.
    pub fn omega_action(&self, i: usize, k: usize) -> &SparseVec {
        &self.omega[i][k]
    }

    /// `e_{α_i}` in f-coordinates.
    pub fn e_simple(&self, i: usize) -> &SparseVec {
        &self.e_simple[i]
    }

    /// Some `v` with `[ε, v] = u`, chosen with canonical pivots (free
    /// variables zero). Unique when `u` has height ≥ 0.
    pub fn ad_epsilon_preimage(&self, u: &GVector) -> Result<GVector> {
        let alg = &self.alg;
        let mx = self.max_height();
        let mut out = GVector::zero(self.dim());
        for h in -mx..=mx {
            let rows = basis_at_height(alg, h);
            let target = restrict(u, &rows);
            if target.iter().all(Zero::is_zero) {
                continue;
            }
            let sources = basis_at_height(alg, h + 1);
            if sources.is_empty() {
                return Err(Error::NotInImage);
            }
            let images: Vec<GVector> = sources
                .iter()
                .map(|&b| ad_image(alg, &self.epsilon, b))
                .collect();
            let a: Matrix = rows
                .iter()
                .map(|&r| images.iter().map(|v| v.coords[r].clone()).collect())
                .collect();
            let x = linalg::solve(&a, &target).ok_or(Error::NotInImage)?;
            for (&b, c) in sources.iter().zip(x) {
                out.coords[b] += c;
            }
        }
        Ok(out)
    }

    /// Basis of `ker ad_ε` at height `h`.
    pub fn ad_epsilon_kernel(&self, h: i64) -> Vec<GVector> {
        let alg = &self.alg;
        let sources = basis_at_height(alg, h);
        let rows = basis_at_height(alg, h - 1);
        if rows.is_empty() {
            return sources
                .iter()
                .map(|&b| GVector::basis(self.dim(), b))
                .collect();
        }
        let images: Vec<GVector> = sources
            .iter()
            .map(|&b| ad_image(alg, &self.epsilon, b))
            .collect();
        let a: Matrix = rows
            .iter()
            .map(|&r| images.iter().map(|v| v.coords[r].clone()).collect())
            .collect();
        linalg::nullspace(&a)
            .into_iter()
            .map(|c| {
                let mut v = GVector::zero(self.dim());
                for (&b, x) in sources.iter().zip(c) {
                    v.coords[b] = x;
                }
                v
            })
            .collect()
    }

    pub fn to_document(&self) -> FrameDocument {
        FrameDocument {
            format: FRAME_FORMAT.to_string(),
            version: FRAME_VERSION,
            family: self.alg.roots.family,
            rank: self.rank(),
            exponents: self.exponents.clone(),
            slice: self.slice.clone(),
            f_kind: self.f_kind.clone(),
            f_vectors: self.f_vectors.clone(),
            preimages: self
                .preimages
                .iter()
                .map(|p| {
                    p.as_ref().map(|v| {
                        v.iter()
                            .map(|(k, c)| (*k, crate::rational::format_rational(c)))
                            .collect()
                    })
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    /// Rebuilds a frame from its document and checks it reproduces the
    /// stored transition matrix.
    pub fn from_document(alg: &LieAlgebraTable, doc: &FrameDocument) -> Result<Self> {
        if doc.format != FRAME_FORMAT || doc.version != FRAME_VERSION {
            return Err(Error::Parse(format!(
                "unsupported frame document {} v{}",
                doc.format, doc.version
            )));
        }
        if doc.family != alg.roots.family || doc.rank != alg.rank() {
            return Err(Error::Parse("frame belongs to a different algebra".into()));
        }
        let frame = Self::with_slice(alg, doc.slice.clone())?;
        if frame.f_vectors != doc.f_vectors || frame.f_kind != doc.f_kind {
            return Err(Error::Parse("frame vectors disagree with the slice".into()));
        }
        Ok(frame)
    }
}

pub const FRAME_FORMAT: &str = "lieinv.frame";
pub const FRAME_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameDocument {
    pub format: String,
    pub version: u32,
    pub family: Family,
    pub rank: usize,
    pub exponents: Vec<usize>,
    pub slice: Vec<GVector>,
    pub f_kind: Vec<FKind>,
    /// Columns of the transition matrix.
    pub f_vectors: Vec<GVector>,
    pub preimages: Vec<Option<Vec<(usize, String)>>>,
}

pub fn epsilon(alg: &LieAlgebraTable) -> GVector {
    let mut e = GVector::zero(alg.dim);
    for i in 0..alg.rank() {
        e.coords[alg.negative_simple(i)] = rat(1);
    }
    e
}

/// Whether `members` together with `[ε, g_{h+1}]` span `g_h`.
fn complements(alg: &LieAlgebraTable, eps: &GVector, h: i64, members: &[&GVector]) -> bool {
    let rows = basis_at_height(alg, h);
    let mut cols: Vec<Vec<Rational>> = basis_at_height(alg, h + 1)
        .into_iter()
        .map(|b| restrict(&ad_image(alg, eps, b), &rows))
        .collect();
    cols.extend(members.iter().map(|v| restrict(v, &rows)));
    linalg::column_rank(&cols) == rows.len()
}

/// Greedy slice: the first subset of root vectors at each exponent height
/// that complements `[ε, g]`, falling back to random small combinations.
/// For G2 this picks `e_{α_2}` and the highest root vector.
fn choose_slice(alg: &LieAlgebraTable) -> Result<Vec<GVector>> {
    let eps = epsilon(alg);
    let n = alg.dim;
    let exps = alg.roots.exponents();
    let mut slice = Vec::new();
    for (h, group) in &exps.iter().chunk_by(|&&m| m) {
        let mu = group.count();
        let h = h as i64;
        // Candidates in ascending lexicographic order of their root vectors.
        let mut candidates: Vec<usize> = basis_at_height(alg, h);
        candidates.sort_by(|&a, &b| alg.basis_roots[a].cmp(&alg.basis_roots[b]));
        let found = candidates.iter().copied().combinations(mu).find(|subset| {
            let vs: Vec<GVector> = subset.iter().map(|&b| GVector::basis(n, b)).collect();
            complements(alg, &eps, h, &vs.iter().collect::<Vec<_>>())
        });
        if let Some(subset) = found {
            slice.extend(subset.into_iter().map(|b| GVector::basis(n, b)));
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x51ce ^ h as u64);
        let mut chosen = None;
        for _ in 0..1000 {
            let vs: Vec<GVector> = (0..mu)
                .map(|_| {
                    let mut v = GVector::zero(n);
                    for &b in &candidates {
                        v.coords[b] = rat(rng.gen_range(-2..=2));
                    }
                    v
                })
                .collect();
            if complements(alg, &eps, h, &vs.iter().collect::<Vec<_>>()) {
                chosen = Some(vs);
                break;
            }
        }
        slice.extend(chosen.ok_or(Error::SliceSelection { height: h })?);
    }
    Ok(slice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    fn frame(f: Family, l: usize) -> KostantFrame {
        KostantFrame::new(&LieAlgebraTable::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn sl2_frame() {
        let fr = frame(Family::A, 1);
        assert_eq!(fr.exponents, vec![1]);
        assert_eq!(fr.slice, vec![GVector::basis(3, 1)]);
        assert_eq!(fr.u, vec![1]);
        assert!(fr.w.is_empty());
        // [ε, e_α] = [e_{-α}, e_α] = -H_α
        let h = fr.alg.bracket(&fr.epsilon, &GVector::basis(3, 1)).unwrap();
        assert_eq!(h, GVector::basis(3, 0).scale(&rat(-1)));
        let pre = fr.ad_epsilon_preimage(&h).unwrap();
        assert_eq!(pre, GVector::basis(3, 1));
    }

    #[test]
    fn g2_slice_and_heights() {
        let fr = frame(Family::G, 2);
        assert_eq!(fr.exponents, vec![1, 5]);
        // s_1 = e_{α_2}, s_2 = e_{3α_1+2α_2}
        assert_eq!(fr.slice[0], GVector::basis(14, 3));
        assert_eq!(fr.slice[1], GVector::basis(14, 7));
        assert_eq!(fr.slice_index, vec![2, 7]);
        assert_eq!(
            fr.f_height,
            vec![0, 0, 1, 1, 2, 3, 4, 5, -1, -1, -2, -3, -4, -5]
        );
        assert_eq!(fr.f_kind[10], FKind::Cyclic { j: 1, k: 7 });
        let e11 = fr.alg.root_basis_index(&[-1, -1]).unwrap();
        assert_eq!(e11, 10);
        assert_eq!(fr.f_vectors[10], GVector::basis(14, e11).scale(&rat(28)));
        assert_eq!(fr.f_vectors[7], GVector::basis(14, 7));
    }

    #[test]
    fn slice_is_not_in_image() {
        let fr = frame(Family::G, 2);
        for s in &fr.slice {
            assert!(matches!(fr.ad_epsilon_preimage(s), Err(Error::NotInImage)));
        }
    }

    #[test]
    fn preimages_invert_ad_epsilon() {
        for (f, l) in [(Family::G, 2), (Family::B, 3), (Family::D, 4)] {
            let fr = frame(f, l);
            for k in 0..fr.dim() {
                if let Some(pre) = fr.preimage(k) {
                    let v = fr.sparse_to_root(pre);
                    let img = fr.alg.bracket(&fr.epsilon, &v).unwrap();
                    assert_eq!(img, fr.f_vectors[k], "{f}{l} f{}", k + 1);
                }
            }
        }
    }

    #[test]
    fn conversions_are_inverse() {
        let fr = frame(Family::B, 2);
        let x = GVector {
            coords: (0..fr.dim()).map(|i| rat(i as i64 * 3 - 7)).collect(),
        };
        assert_eq!(fr.to_root_basis(&fr.to_f_basis(&x)), x);
    }

    #[test]
    fn d4_middle_exponent() {
        let fr = frame(Family::D, 4);
        assert_eq!(fr.exponents, vec![1, 3, 3, 5]);
        assert_eq!(fr.u.len(), 12);
        assert_eq!(fr.w.len(), 12 - 4);
    }

    #[test]
    fn string_lengths() {
        let fr = frame(Family::F, 4);
        for (j, chain) in fr.cyclic.iter().enumerate() {
            assert_eq!(chain.len(), 2 * fr.exponents[j] + 1);
            assert!(!chain.last().unwrap().is_zero());
        }
        // The top slice vector is the highest root vector, a lowest-weight
        // string of exact length for the principal sl2.
        let top = fr.cyclic.last().unwrap().last().unwrap();
        assert!(fr.alg.bracket(&fr.epsilon, top).unwrap().is_zero());
    }

    #[test]
    fn kernel_at_lowest_heights() {
        let fr = frame(Family::G, 2);
        assert_eq!(fr.ad_epsilon_kernel(-5).len(), 1);
        assert_eq!(fr.ad_epsilon_kernel(-1).len(), 1);
        assert!(fr.ad_epsilon_kernel(2).is_empty());
    }

    #[test]
    fn frame_document_round_trip() {
        let fr = frame(Family::G, 2);
        let json = fr.to_json().unwrap();
        let doc: FrameDocument = serde_json::from_str(&json).unwrap();
        let back = KostantFrame::from_document(&fr.alg, &doc).unwrap();
        assert_eq!(back.f_vectors, fr.f_vectors);
    }

    #[test]
    fn bad_slice_is_rejected() {
        let alg = LieAlgebraTable::new(Family::A, 2).unwrap();
        // Two height-1 vectors cannot match the exponents 1, 2.
        let s = vec![GVector::basis(alg.dim, 2), GVector::basis(alg.dim, 3)];
        assert!(KostantFrame::with_slice(&alg, s).is_err());
    }
}
