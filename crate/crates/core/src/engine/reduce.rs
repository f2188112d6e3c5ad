//! The reduction rules. Each rewrites a pairing through integration by
//! parts `<∂_x^m ∂_{[x,y]} ∂, I> = <∂_x^{m+1} (y·∂), I> / (m+1)` with
//! `x = ε`, so every right-hand side carries one more `ε`.

use super::Engine;
use crate::error::{Error, Result};
use crate::kostant::SparseVec;
use crate::poly::Poly;
use crate::rational::{rat, Rational};
use crate::termgen::TermKey;

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    let at = v.partition_point(|&y| y <= x);
    v.insert(at, x);
}

fn remove_at(v: &[usize], i: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    out.remove(i);
    out
}

/// Positions of the distinct values of a sorted list, with multiplicities.
fn distinct_positions(v: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        out.push((i, j - i));
        i = j;
    }
    out
}

impl Engine<'_> {
    fn zero(&self) -> Poly {
        Poly::zero(self.frame.rank())
    }

    /// `<∂_F ∂_ε^b ∂_p^a, I>` for an arbitrary sorted multiset `F` of
    /// f-indices. Cartan factors go through the p-derivative rule and
    /// `e_{-α_i}` factors through `e_{-α_i} = [ε, ω_i]`.
    pub fn pair(&self, factors: &[usize], b: u32, a: u32) -> Result<Poly> {
        let fr = self.frame;
        if factors.len() as u32 + b + a != self.d {
            return Err(Error::Defect(format!(
                "pairing of {} factors with b={b}, a={a} in degree {}",
                factors.len(),
                self.d
            )));
        }
        let height: i64 = factors.iter().map(|&k| fr.f_height[k]).sum();
        if height != i64::from(b) {
            return Ok(self.zero());
        }
        let cartan = factors.iter().position(|&k| fr.is_cartan(k));
        let neg = factors.iter().position(|&k| fr.neg_simple_of(k).is_some());
        if cartan.is_none() && neg.is_none() {
            let (w, u): (Vec<usize>, Vec<usize>) =
                factors.iter().partition(|&&k| fr.f_height[k] <= -2);
            let key = TermKey { w, u, b, a };
            return match self.table.get(&key) {
                Some(v) => Ok(v.clone()),
                None => Err(Error::MissingDependency(key.label())),
            };
        }
        let memo_key = (factors.to_vec(), b, a);
        if let Some(v) = self.memo.get(&memo_key) {
            return Ok(v.clone());
        }
        let value = if let Some(pos) = cartan {
            // <∂_{H_i} ∂_p^a X> = ∂_{p_i} <∂_p^{a+1} X> / (a+1)
            let i = factors[pos];
            let rest = remove_at(factors, pos);
            self.pair(&rest, b, a + 1)?
                .partial(i)
                .scale(&Rational::new(1.into(), (a + 1).into()))
        } else {
            let pos = neg.unwrap();
            let i = fr.neg_simple_of(factors[pos]).unwrap();
            let rest = remove_at(factors, pos);
            self.omega_rule(&rest, i, b, a)?
        };
        self.memo.insert(memo_key, value.clone());
        Ok(value)
    }

    /// `<∂_{e_{-α_i}} ∂_R ∂_ε^b ∂_p^a, I> = <∂_ε^{b+1} (ω_i·∂_R) ∂_p^a, I> / (b+1)`.
    fn omega_rule(&self, rest: &[usize], i: usize, b: u32, a: u32) -> Result<Poly> {
        let mut acc = self.zero();
        for (pos, mult) in distinct_positions(rest) {
            let image = self.frame.omega_action(i, rest[pos]);
            if image.is_empty() {
                continue;
            }
            let others = remove_at(rest, pos);
            let v = self.pair_vec(&others, image, b + 1, a)?;
            acc.add_scaled(&v, &rat(mult as i64))?;
        }
        Ok(acc.scale(&Rational::new(1.into(), (b + 1).into())))
    }

    /// `Σ_k c_k <∂_{F ∪ {f_k}} ∂_ε^b ∂_p^a, I>` for `v = Σ c_k f_k`.
    pub fn pair_vec(&self, fixed: &[usize], v: &SparseVec, b: u32, a: u32) -> Result<Poly> {
        let mut acc = self.zero();
        for (k, c) in v {
            let mut f = fixed.to_vec();
            insert_sorted(&mut f, *k);
            let val = self.pair(&f, b, a)?;
            acc.add_scaled(&val, c)?;
        }
        Ok(acc)
    }

    /// Top term with `a = 0`: peel the first factor in the image of `ad_ε`.
    pub fn reduce_top(&self, key: &TermKey) -> Result<Poly> {
        let fr = self.frame;
        let pos = key
            .u
            .iter()
            .position(|&k| fr.preimage(k).is_some())
            .ok_or_else(|| {
                Error::Defect(format!("{key} has no factor in the image of ad(epsilon)"))
            })?;
        self.reduce_top_at(key, pos)
    }

    /// Top-term reduction peeling the factor at `pos` of `U`.
    pub fn reduce_top_at(&self, key: &TermKey, pos: usize) -> Result<Poly> {
        self.reduce_peel(key, key.w.len() + pos, None)
    }

    /// `β = 0, a ≥ 1`, from `p = -[ε, x_p]` with `x_p = Σ p_i e_{α_i}`.
    pub fn reduce_p(&self, key: &TermKey) -> Result<Poly> {
        let fr = self.frame;
        let l = fr.rank();
        let (b, a) = (key.b, key.a);
        let mut acc = self.zero();
        for i in 0..l {
            let e = fr.e_simple(i);
            let mut inner = self.zero();
            for (n, mult) in distinct_positions(&key.u) {
                // [u(n), e_{α_i}] = -[e_{α_i}, u(n)]
                let br: SparseVec = fr
                    .bracket_sparse(e, key.u[n])
                    .into_iter()
                    .map(|(k, c)| (k, -c))
                    .collect();
                if br.is_empty() {
                    continue;
                }
                let others = remove_at(&key.u, n);
                let v = self.pair_vec(&others, &br, b + 1, a - 1)?;
                inner.add_scaled(&v, &rat(mult as i64))?;
            }
            acc.add_scaled(&inner.mul_var(i), &rat(1))?;
        }
        if a >= 2 {
            let cm = &fr.alg.roots.cartan_matrix;
            for i in 0..l {
                let v = self.pair_vec(&key.u, fr.e_simple(i), b + 1, a - 2)?;
                if v.is_zero() {
                    continue;
                }
                // p_i α_i(p) with α_i(p) = Σ_k p_k α_i(H_k)
                let alpha = Poly::linear(l, (0..l).map(|k| (k, rat(cm[k][i]))));
                let term = &v.mul_var(i) * &alpha;
                acc.add_scaled(&term, &rat(i64::from(a) - 1))?;
            }
        }
        Ok(acc.scale(&Rational::new(1.into(), (b + 1).into())))
    }

    /// `β ≥ 1`: peel `w(1) = [ε, v_1]`. `v1` overrides the stored preimage
    /// (any representative gives the same value).
    pub fn reduce_negative(&self, key: &TermKey, v1: Option<&SparseVec>) -> Result<Poly> {
        self.reduce_peel(key, 0, v1)
    }

    /// Peels the factor `[ε, v_1]` at position `pos` of `W ++ U`:
    /// `1/(b+1) [Σ_m <..∂_{[v_1, y_m]}.. ∂_ε^{b+1} ∂_p^a> + a <.. ∂_{[v_1, p]} ∂_ε^{b+1} ∂_p^{a-1}>]`.
    pub fn reduce_peel(&self, key: &TermKey, pos: usize, v1: Option<&SparseVec>) -> Result<Poly> {
        let fr = self.frame;
        let (b, a) = (key.b, key.a);
        let factors: Vec<usize> = key.w.iter().chain(&key.u).copied().collect();
        let peeled = *factors.get(pos).ok_or(Error::IndexOutOfRange {
            index: pos,
            max: factors.len(),
        })?;
        let v1 = match v1 {
            Some(v) => v.clone(),
            None => fr.preimage(peeled).ok_or(Error::NotInImage)?.clone(),
        };
        let mut all = factors;
        all.remove(pos);
        all.sort_unstable();
        let mut acc = self.zero();
        for (n, mult) in distinct_positions(&all) {
            let br = fr.bracket_sparse(&v1, all[n]);
            if br.is_empty() {
                continue;
            }
            let others = remove_at(&all, n);
            let v = self.pair_vec(&others, &br, b + 1, a)?;
            acc.add_scaled(&v, &rat(mult as i64))?;
        }
        // [v_1, p] = Σ_k p_k [v_1, H_k]
        if a >= 1 {
            for k in 0..fr.rank() {
                let br = fr.bracket_sparse(&v1, fr.f_cartan(k));
                if br.is_empty() {
                    continue;
                }
                let v = self.pair_vec(&all, &br, b + 1, a - 1)?;
                acc.add_scaled(&v.mul_var(k), &rat(i64::from(a)))?;
            }
        }
        Ok(acc.scale(&Rational::new(1.into(), (b + 1).into())))
    }
}
