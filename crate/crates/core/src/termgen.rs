//! Enumeration of the pairing terms `<∂_W ∂_ε^b ∂_p^a ∂_U, I>` that can be
//! nonzero for a degree `d` invariant.
//!
//! A term is admissible when `β + a + b + c = d` and the heights balance,
//! `o(U) = b + |o(W)|`. Height vectors come from bounded partitions and are
//! expanded against the actual frame vectors of each height.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::kostant::KostantFrame;

/// Which part of the algebra the invariant is computed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// `ε + b`: only terms without `W` factors.
    Borel,
    /// All of `g`.
    Full,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Borel => "borel",
            Scope::Full => "full",
        })
    }
}

impl std::str::FromStr for Scope {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "borel" => Ok(Scope::Borel),
            "full" => Ok(Scope::Full),
            _ => Err(crate::Error::Parse(format!("unknown scope {s:?}"))),
        }
    }
}

/// One pairing term. `w` and `u` are sorted multisets of f-indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermKey {
    pub w: Vec<usize>,
    pub u: Vec<usize>,
    pub b: u32,
    pub a: u32,
}

impl TermKey {
    pub fn new(mut w: Vec<usize>, mut u: Vec<usize>, b: u32, a: u32) -> Self {
        w.sort_unstable();
        u.sort_unstable();
        TermKey { w, u, b, a }
    }

    pub fn beta(&self) -> usize {
        self.w.len()
    }

    pub fn c(&self) -> usize {
        self.u.len()
    }

    pub fn degree(&self) -> u32 {
        (self.w.len() + self.u.len()) as u32 + self.a + self.b
    }

    /// `|o(W)|`.
    pub fn ow(&self, frame: &KostantFrame) -> i64 {
        -self.w.iter().map(|&k| frame.f_height[k]).sum::<i64>()
    }

    /// `o(U)`.
    pub fn ou(&self, frame: &KostantFrame) -> i64 {
        self.u.iter().map(|&k| frame.f_height[k]).sum()
    }

    pub fn is_admissible(&self, frame: &KostantFrame, d: u32) -> bool {
        self.w.iter().all(|&k| frame.f_height[k] <= -2)
            && self.u.iter().all(|&k| frame.f_height[k] >= 1)
            && self.degree() == d
            && self.ou(frame) == i64::from(self.b) + self.ow(frame)
    }

    /// All factors are slice vectors and nothing else is present.
    pub fn is_pure_slice(&self, frame: &KostantFrame) -> bool {
        self.w.is_empty()
            && self.a == 0
            && !self.u.is_empty()
            && self.u.iter().all(|k| frame.slice_index.contains(k))
    }

    /// `y11^2*y8 b=1 a=2`, with 1-based f-indices.
    pub fn label(&self) -> String {
        let mono = self
            .w
            .iter()
            .chain(&self.u)
            .sorted_by(|a, b| b.cmp(a))
            .dedup_with_count()
            .map(|(n, k)| {
                if n == 1 {
                    format!("y{}", k + 1)
                } else {
                    format!("y{}^{}", k + 1, n)
                }
            })
            .join("*");
        let mono = if mono.is_empty() {
            "1".to_string()
        } else {
            mono
        };
        format!("{mono} b={} a={}", self.b, self.a)
    }
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLists {
    pub degree: u32,
    pub scope: Scope,
    /// `β = 0, a = 0`, by descending `b`.
    pub ttms: Vec<TermKey>,
    /// `β = 0, 0 < a < d`, by ascending `a` then descending `b`.
    pub ptms: Vec<TermKey>,
    /// `U = W = ∅, b = 0, a = d`.
    pub pure_cartan: TermKey,
    /// `β > 0`, by ascending `(β, |o(W)|)` then descending `b`.
    pub ntms: Vec<TermKey>,
}

impl TermLists {
    pub fn counts(&self) -> TermCounts {
        TermCounts {
            ttms: self.ttms.len(),
            ptms: self.ptms.len(),
            pure_cartan: 1,
            ntms: self.ntms.len(),
        }
    }

    /// Every key in evaluation order.
    pub fn iter(&self) -> impl Iterator<Item = &TermKey> {
        self.ttms
            .iter()
            .chain(&self.ptms)
            .chain(std::iter::once(&self.pure_cartan))
            .chain(&self.ntms)
    }

    pub fn len(&self) -> usize {
        self.ttms.len() + self.ptms.len() + 1 + self.ntms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCounts {
    pub ttms: usize,
    pub ptms: usize,
    pub pure_cartan: usize,
    pub ntms: usize,
}

impl TermCounts {
    pub fn total(&self) -> usize {
        self.ttms + self.ptms + self.pure_cartan + self.ntms
    }
}

impl fmt::Display for TermCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ttms {}, ptms {} + {} pure-Cartan, ntms {}",
            self.ttms, self.ptms, self.pure_cartan, self.ntms
        )
    }
}

/// Partitions of `x` into exactly `z` parts from `lo..=hi`, each partition
/// non-increasing, listed in decreasing lexicographic order.
pub fn bounded_partitions(x: u32, lo: u32, hi: u32, z: u32) -> Vec<Vec<u32>> {
    fn rec(x: u32, lo: u32, hi: u32, z: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if z == 0 {
            if x == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if x < lo * z || x > hi * z {
            return;
        }
        for part in (lo..=hi.min(x)).rev() {
            prefix.push(part);
            rec(x - part, lo, part, z - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        rec(x, lo, hi, z, &mut Vec::new(), &mut out);
    }
    out
}

/// Partitions of `x` into `z` parts in `[2, y]`.
pub fn negpart(x: u32, y: u32, z: u32) -> Vec<Vec<u32>> {
    bounded_partitions(x, 2, y, z)
}

/// Partitions of `x` into `z` parts in `[1, y]`.
pub fn pospart(x: u32, y: u32, z: u32) -> Vec<Vec<u32>> {
    bounded_partitions(x, 1, y, z)
}

/// All sorted multisets of frame vectors realizing a height vector. Heights
/// are absolute values; `sign` selects the positive or negative side.
pub fn allmul(frame: &KostantFrame, heights: &[u32], sign: i64) -> Vec<Vec<usize>> {
    let groups: Vec<Vec<Vec<usize>>> = heights
        .iter()
        .dedup_with_count()
        .map(|(r, &h)| {
            frame
                .at_height(sign * i64::from(h))
                .iter()
                .copied()
                .combinations_with_replacement(r)
                .collect()
        })
        .collect();
    if groups.is_empty() {
        return vec![Vec::new()];
    }
    groups
        .into_iter()
        .multi_cartesian_product()
        .map(|parts| {
            let mut v: Vec<usize> = parts.concat();
            v.sort_unstable();
            v
        })
        .collect()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Generates the term lists with the pruned loop bounds.
pub fn generate_terms(frame: &KostantFrame, d: u32, scope: Scope) -> TermLists {
    let mx = frame.max_height();
    let di = i64::from(d);
    let mut ttms = Vec::new();
    let mut ptms = Vec::new();
    let mut ntms = Vec::new();
    let beta_max = match scope {
        Scope::Borel => 0,
        Scope::Full => di * mx / (mx + 2),
    };
    for beta in 0..=beta_max {
        for ow in 2 * beta..=beta.min(di - beta) * mx {
            let nwts = negpart(ow as u32, mx as u32, beta as u32);
            for a in 0..di - beta {
                let rest = di - beta - a;
                let b_lo = ceil_div(rest - ow, 2).max(0);
                let b_hi = (rest * mx - ow).div_euclid(mx + 1);
                for b in b_lo..=b_hi {
                    let c = rest - b;
                    let pwts = pospart((ow + b) as u32, mx as u32, c as u32);
                    for ls in &pwts {
                        for f in allmul(frame, ls, 1) {
                            if beta == 0 {
                                let key = TermKey::new(Vec::new(), f, b as u32, a as u32);
                                if a == 0 {
                                    ttms.push(key);
                                } else {
                                    ptms.push(key);
                                }
                            } else {
                                for nt in &nwts {
                                    for g in allmul(frame, nt, -1) {
                                        ntms.push(TermKey::new(g, f.clone(), b as u32, a as u32));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    finish(frame, d, scope, ttms, ptms, ntms)
}

/// Generates the term lists from the admissibility constraints alone,
/// without the loop-bound pruning.
pub fn generate_terms_unpruned(frame: &KostantFrame, d: u32, scope: Scope) -> TermLists {
    let mx = frame.max_height() as u32;
    let mut ttms = Vec::new();
    let mut ptms = Vec::new();
    let mut ntms = Vec::new();
    let beta_max = if scope == Scope::Full { d } else { 0 };
    for beta in 0..=beta_max {
        for ow in 2 * beta..=beta * mx {
            // With mx = 1 the part range 2..=mx is empty, even for zero parts.
            let nwts = if beta == 0 {
                vec![Vec::new()]
            } else {
                negpart(ow, mx, beta)
            };
            for a in 0..=d - beta {
                for b in 0..=d - beta - a {
                    let c = d - beta - a - b;
                    if beta == 0 && a == d {
                        continue;
                    }
                    for ls in pospart(ow + b, mx, c) {
                        for f in allmul(frame, &ls, 1) {
                            for nt in &nwts {
                                for g in allmul(frame, nt, -1) {
                                    let key = TermKey::new(g, f.clone(), b, a);
                                    match (beta, a) {
                                        (0, 0) => ttms.push(key),
                                        (0, _) => ptms.push(key),
                                        _ => ntms.push(key),
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    finish(frame, d, scope, ttms, ptms, ntms)
}

fn finish(
    frame: &KostantFrame,
    d: u32,
    scope: Scope,
    mut ttms: Vec<TermKey>,
    mut ptms: Vec<TermKey>,
    mut ntms: Vec<TermKey>,
) -> TermLists {
    ttms.sort_by(|x, y| y.b.cmp(&x.b).then_with(|| x.u.cmp(&y.u)));
    ptms.sort_by(|x, y| {
        x.a.cmp(&y.a)
            .then(y.b.cmp(&x.b))
            .then_with(|| x.u.cmp(&y.u))
    });
    ntms.sort_by_cached_key(|k| {
        (
            k.beta(),
            k.ow(frame),
            std::cmp::Reverse(k.b),
            k.a,
            k.w.clone(),
            k.u.clone(),
        )
    });
    for list in [&mut ttms, &mut ptms, &mut ntms] {
        list.dedup();
    }
    TermLists {
        degree: d,
        scope,
        ttms,
        ptms,
        pure_cartan: TermKey::new(Vec::new(), Vec::new(), 0, d),
        ntms,
    }
}

/// Same as [`generate_terms`] with `β = 0`.
pub fn borel_only_terms(frame: &KostantFrame, d: u32) -> TermLists {
    generate_terms(frame, d, Scope::Borel)
}
