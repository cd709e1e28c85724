//! Dense 3-D coefficient arrays over a bounding box, used for long power
//! sequences where the sparse map becomes the bottleneck.

use rayon::prelude::*;

use super::{Coeff, GroupRingElement, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Dense3 {
    origin: [i64; 3],
    shape: [usize; 3],
    data: Vec<Coeff>,
}

impl Dense3 {
    fn with_box(lo: [i64; 3], hi: [i64; 3]) -> Self {
        let shape = [
            (hi[0] - lo[0] + 1) as usize,
            (hi[1] - lo[1] + 1) as usize,
            (hi[2] - lo[2] + 1) as usize,
        ];
        Dense3 {
            origin: lo,
            shape,
            data: vec![0; shape[0] * shape[1] * shape[2]],
        }
    }

    pub fn from_element(f: &GroupRingElement) -> Self {
        let Some(b) = f.support_box() else {
            return Dense3 {
                origin: [0; 3],
                shape: [0; 3],
                data: Vec::new(),
            };
        };
        let mut d = Self::with_box([b[0].0, b[1].0, b[2].0], [b[0].1, b[1].1, b[2].1]);
        for (m, c) in f.terms() {
            let i = d.index(m.k, m.l, m.m).expect("inside box");
            d.data[i] = *c;
        }
        d
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.data.len()
    }

    fn index(&self, k: i64, l: i64, m: i64) -> Option<usize> {
        let dk = k - self.origin[0];
        let dl = l - self.origin[1];
        let dm = m - self.origin[2];
        if dk < 0 || dl < 0 || dm < 0 {
            return None;
        }
        let (dk, dl, dm) = (dk as usize, dl as usize, dm as usize);
        if dk >= self.shape[0] || dl >= self.shape[1] || dm >= self.shape[2] {
            return None;
        }
        Some((dk * self.shape[1] + dl) * self.shape[2] + dm)
    }

    pub fn get(&self, k: i64, l: i64, m: i64) -> Coeff {
        self.index(k, l, m).map(|i| self.data[i]).unwrap_or(0)
    }

    pub fn to_element(&self) -> Result<GroupRingElement> {
        let mut terms = Vec::new();
        for (i, c) in self.data.iter().enumerate() {
            if *c != 0 {
                let dm = i % self.shape[2];
                let rest = i / self.shape[2];
                let dl = rest % self.shape[1];
                let dk = rest / self.shape[1];
                terms.push((
                    Monomial::new(
                        self.origin[0] + dk as i64,
                        self.origin[1] + dl as i64,
                        self.origin[2] + dm as i64,
                    ),
                    *c,
                ));
            }
        }
        GroupRingElement::from_terms(terms)
    }

    /// Shrinks the box to the nonzero support.
    fn trimmed(self) -> Self {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, c) in self.data.iter().enumerate() {
            if *c != 0 {
                let dm = i % self.shape[2];
                let rest = i / self.shape[2];
                let dl = rest % self.shape[1];
                let dk = rest / self.shape[1];
                for (ax, d) in [dk, dl, dm].into_iter().enumerate() {
                    let v = self.origin[ax] + d as i64;
                    lo[ax] = lo[ax].min(v);
                    hi[ax] = hi[ax].max(v);
                }
            }
        }
        if lo[0] == i64::MAX {
            return Dense3 {
                origin: [0; 3],
                shape: [0; 3],
                data: Vec::new(),
            };
        }
        if lo == self.origin && (0..3).all(|a| hi[a] == self.origin[a] + self.shape[a] as i64 - 1) {
            return self;
        }
        let mut out = Self::with_box(lo, hi);
        for k in lo[0]..=hi[0] {
            for l in lo[1]..=hi[1] {
                let src = self.index(k, l, lo[2]).expect("inside");
                let dst = out.index(k, l, lo[2]).expect("inside");
                let len = out.shape[2];
                out.data[dst..dst + len].copy_from_slice(&self.data[src..src + len]);
            }
        }
        out
    }

    /// Right multiplication `self · g` for a sparse `g`, computed by gathering
    /// into each output slab of fixed `k` in parallel.
    pub fn mul_right(&self, g: &GroupRingElement) -> Result<Dense3> {
        if self.is_empty() || g.is_zero() {
            return Ok(Dense3 {
                origin: [0; 3],
                shape: [0; 3],
                data: Vec::new(),
            });
        }
        let terms: Vec<(Monomial, Coeff)> = g.terms().map(|(m, c)| (*m, *c)).collect();
        let b = g.support_box().expect("nonzero");
        let (lo_k, hi_k) = (self.origin[0], self.origin[0] + self.shape[0] as i64 - 1);
        let (lo_l, hi_l) = (self.origin[1], self.origin[1] + self.shape[1] as i64 - 1);
        let (lo_m, hi_m) = (self.origin[2], self.origin[2] + self.shape[2] as i64 - 1);
        let mut mlo = i64::MAX;
        let mut mhi = i64::MIN;
        for (t, _) in &terms {
            for l in [lo_l, hi_l] {
                let shift = t.m + l * t.k;
                mlo = mlo.min(lo_m + shift);
                mhi = mhi.max(hi_m + shift);
            }
        }
        let mut out = Self::with_box(
            [lo_k + b[0].0, lo_l + b[1].0, mlo],
            [hi_k + b[0].1, hi_l + b[1].1, mhi],
        );
        let slab = out.shape[1] * out.shape[2];
        let oorigin = out.origin;
        let oshape = out.shape;
        out.data
            .par_chunks_mut(slab)
            .enumerate()
            .try_for_each(|(ik, chunk)| -> Result<()> {
                let kk = oorigin[0] + ik as i64;
                for (il, row) in chunk.chunks_mut(oshape[2]).enumerate() {
                    let ll = oorigin[1] + il as i64;
                    for (t, c) in &terms {
                        let k = kk - t.k;
                        let l = ll - t.l;
                        if k < lo_k || k > hi_k || l < lo_l || l > hi_l {
                            continue;
                        }
                        let shift = t.m + l * t.k;
                        let base = self.index(k, l, lo_m).expect("inside");
                        let src = &self.data[base..base + self.shape[2]];
                        // output m = source m + shift
                        let start = (lo_m + shift - oorigin[2]) as usize;
                        for (j, v) in src.iter().enumerate() {
                            if *v != 0 {
                                let p = v.checked_mul(*c).ok_or(Error::Overflow("dense power"))?;
                                let slot = &mut row[start + j];
                                *slot =
                                    slot.checked_add(p).ok_or(Error::Overflow("dense power"))?;
                            }
                        }
                    }
                }
                Ok(())
            })?;
        Ok(out.trimmed())
    }

    /// Constant term of `self · other`, i.e. `Σ_δ self_δ · other_{δ^{-1}}`.
    pub fn pair_trace(&self, other: &Dense3) -> Result<Coeff> {
        if self.is_empty() || other.is_empty() {
            return Ok(0);
        }
        let slab = self.shape[1] * self.shape[2];
        let partials: Vec<Result<Coeff>> = self
            .data
            .par_chunks(slab)
            .enumerate()
            .map(|(ik, chunk)| {
                let k = self.origin[0] + ik as i64;
                let mut acc: Coeff = 0;
                for (il, row) in chunk.chunks(self.shape[2]).enumerate() {
                    let l = self.origin[1] + il as i64;
                    for (im, v) in row.iter().enumerate() {
                        if *v == 0 {
                            continue;
                        }
                        let m = self.origin[2] + im as i64;
                        let w = other.get(-k, -l, l * k - m);
                        if w != 0 {
                            let p = v.checked_mul(w).ok_or(Error::Overflow("trace pairing"))?;
                            acc = acc.checked_add(p).ok_or(Error::Overflow("trace pairing"))?;
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total: Coeff = 0;
        for p in partials {
            total = total
                .checked_add(p?)
                .ok_or(Error::Overflow("trace pairing"))?;
        }
        Ok(total)
    }
}

/// `tr(g^n)` (the coefficient of the identity in `g^n`) for `n = 0..=n_max`.
///
/// Only powers up to `⌈n_max/2⌉` are formed; the rest come from the pairing
/// `tr(g^{a+b}) = Σ_δ (g^a)_δ (g^b)_{δ^{-1}}`.
pub fn power_traces(g: &GroupRingElement, n_max: usize) -> Result<Vec<Coeff>> {
    let mut traces = vec![0 as Coeff; n_max + 1];
    traces[0] = 1;
    if n_max == 0 {
        return Ok(traces);
    }
    let mut prev = Dense3::from_element(&GroupRingElement::one());
    let mut cur = Dense3::from_element(g);
    // invariant: prev = g^j, cur = g^{j+1}
    let mut j = 0usize;
    loop {
        if 2 * j < n_max {
            traces[2 * j + 1] = cur.pair_trace(&prev)?;
        }
        if 2 * j + 2 <= n_max {
            traces[2 * j + 2] = cur.pair_trace(&cur)?;
        }
        if 2 * j + 3 > n_max {
            break;
        }
        let next = cur.mul_right(g)?;
        prev = cur;
        cur = next;
        j += 1;
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk_generator() -> GroupRingElement {
        GroupRingElement::from_terms([
            (Monomial::new(1, 0, 0), 1),
            (Monomial::new(-1, 0, 0), 1),
            (Monomial::new(0, 1, 0), 1),
            (Monomial::new(0, -1, 0), 1),
        ])
        .unwrap()
    }

    #[test]
    fn dense_power_matches_sparse() {
        let g = GroupRingElement::from_terms([
            (Monomial::new(1, 0, 0), 2),
            (Monomial::new(0, -1, 1), -1),
            (Monomial::new(0, 1, 0), 1),
            (Monomial::new(0, 0, 0), 3),
        ])
        .unwrap();
        let mut d = Dense3::from_element(&g);
        for _ in 0..4 {
            d = d.mul_right(&g).unwrap();
        }
        assert_eq!(d.to_element().unwrap(), g.pow(5).unwrap());
    }

    #[test]
    fn traces_match_sparse_powers() {
        let g = walk_generator();
        let t = power_traces(&g, 9).unwrap();
        for (n, tn) in t.iter().enumerate() {
            assert_eq!(*tn, g.pow(n as u32).unwrap().constant_term(), "n={n}");
        }
        assert_eq!(t[2], 4);
        assert_eq!(t[4], 28);
    }
}
