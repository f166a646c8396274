//! Truncated Fourier series in q1, q2, q3 with Laurent-polynomial
//! coefficients in u, v, w.
//!
//! Exponents are integers in units of 1/qden (q) and 1/uden (u, v, w).
//! A series is known on the box of keys k <= trunc (componentwise); `val`
//! is a lower bound for the keys of all terms, stored or not.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::theta3::block::{Block, Coef, Layout};

pub type QKey = [i32; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub qden: i32,
    pub uden: i32,
    pub trunc: QKey,
    pub val: QKey,
    pub blocks: BTreeMap<QKey, Block>,
}

pub fn add_key(a: QKey, b: QKey) -> QKey {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub_key(a: QKey, b: QKey) -> QKey {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn key_le(a: QKey, b: QKey) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]
}

pub fn key_min(a: QKey, b: QKey) -> QKey {
    [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])]
}

impl QSeries {
    pub fn zero(qden: i32, uden: i32, trunc: QKey, val: QKey) -> QSeries {
        QSeries { qden, uden, trunc, val, blocks: BTreeMap::new() }
    }

    pub fn one(qden: i32, uden: i32, trunc: QKey) -> QSeries {
        let mut s = QSeries::zero(qden, uden, trunc, [0; 3]);
        s.blocks.insert([0; 3], Block::monomial([0; 3], 1));
        s
    }

    /// Build from (q-exponent, uvw-exponent, coefficient) terms; terms
    /// outside the box are dropped.
    pub fn from_terms(
        qden: i32,
        uden: i32,
        trunc: QKey,
        val: QKey,
        terms: impl IntoIterator<Item = (QKey, [i32; 3], Coef)>,
    ) -> QSeries {
        let mut by_key: BTreeMap<QKey, BTreeMap<[i32; 3], Coef>> = BTreeMap::new();
        for (k, e, c) in terms {
            if key_le(k, trunc) {
                *by_key.entry(k).or_default().entry(e).or_insert(0) += c;
            }
        }
        let mut s = QSeries::zero(qden, uden, trunc, val);
        for (k, m) in by_key {
            let t: Vec<([i32; 3], Coef)> = m.into_iter().collect();
            if let Some(b) = Block::from_terms(&t) {
                s.blocks.insert(k, b);
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, k: QKey) -> Option<&Block> {
        self.blocks.get(&k)
    }

    pub fn coeff(&self, k: QKey, e: [i32; 3]) -> Coef {
        self.blocks.get(&k).map_or(0, |b| b.coeff(e))
    }

    /// All terms, ordered.
    pub fn terms(&self) -> BTreeMap<(QKey, [i32; 3]), Coef> {
        let mut m = BTreeMap::new();
        for (k, b) in &self.blocks {
            for (e, c) in b.terms() {
                m.insert((*k, e), c);
            }
        }
        m
    }

    pub fn num_terms(&self) -> usize {
        self.blocks.values().map(|b| b.terms().count()).sum()
    }

    fn check_units(&self, o: &QSeries) {
        assert!(self.qden == o.qden && self.uden == o.uden, "series units differ");
    }

    /// Keep only keys <= t.
    pub fn restrict(&self, t: QKey) -> QSeries {
        let trunc = key_min(self.trunc, t);
        QSeries {
            qden: self.qden,
            uden: self.uden,
            trunc,
            val: self.val,
            blocks: self.blocks.iter().filter(|(k, _)| key_le(**k, trunc)).map(|(k, b)| (*k, b.clone())).collect(),
        }
    }

    pub fn add_scaled(&self, o: &QSeries, c: Coef) -> QSeries {
        self.check_units(o);
        let trunc = key_min(self.trunc, o.trunc);
        let mut out = self.restrict(trunc);
        out.val = key_min(self.val, o.val);
        for (k, b) in &o.blocks {
            if !key_le(*k, trunc) {
                continue;
            }
            match out.blocks.get_mut(k) {
                Some(x) => {
                    x.add_scaled(b, c);
                    if x.is_zero() {
                        out.blocks.remove(k);
                    } else {
                        let nb = std::mem::replace(x, Block::monomial([0; 3], 0));
                        *x = nb.normalized().unwrap();
                    }
                }
                None => {
                    let mut nb = b.clone();
                    nb.scale(c);
                    out.blocks.insert(*k, nb);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        self.add_scaled(o, 1)
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.add_scaled(o, -1)
    }

    pub fn scale(&self, c: Coef) -> QSeries {
        let mut out = self.clone();
        if c == 0 {
            out.blocks.clear();
        }
        for b in out.blocks.values_mut() {
            b.scale(c);
        }
        out
    }

    /// Product known on min(target, Ta + vb, Tb + va).
    pub fn mul_to(&self, o: &QSeries, target: QKey) -> QSeries {
        self.check_units(o);
        let trunc = key_min(target, key_min(add_key(self.trunc, o.val), add_key(o.trunc, self.val)));
        let val = add_key(self.val, o.val);
        // Iterate over the sparser operand outside.
        let (a, b) = if self.blocks.len() <= o.blocks.len() { (self, o) } else { (o, self) };
        let mut layouts: BTreeMap<QKey, Layout> = BTreeMap::new();
        let mut pairs: Vec<(QKey, &Block, &Block)> = Vec::new();
        for (ka, ba) in &a.blocks {
            if !key_le(*ka, sub_key(trunc, b.val)) {
                continue;
            }
            for (kb, bb) in &b.blocks {
                let k = add_key(*ka, *kb);
                if !key_le(k, trunc) {
                    continue;
                }
                let l = ba.layout.product(&bb.layout);
                layouts.entry(k).and_modify(|x| *x = x.union(&l)).or_insert(l);
                pairs.push((k, ba, bb));
            }
        }
        let mut acc: BTreeMap<QKey, Block> = layouts.into_iter().map(|(k, l)| (k, Block::zeros(l))).collect();
        for (k, ba, bb) in pairs {
            acc.get_mut(&k).unwrap().add_product(ba, bb);
        }
        let blocks = acc.into_iter().filter_map(|(k, b)| b.normalized().map(|b| (k, b))).collect();
        QSeries { qden: self.qden, uden: self.uden, trunc, val, blocks }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        self.mul_to(o, [i32::MAX / 4; 3])
    }

    /// Product of several series, truncated to `target`; each partial
    /// product is only computed as far as the remaining factors allow.
    pub fn product(factors: &[&QSeries], target: QKey) -> QSeries {
        assert!(!factors.is_empty());
        let mut rest_val = [0; 3];
        for f in &factors[1..] {
            rest_val = add_key(rest_val, f.val);
        }
        let mut acc = factors[0].restrict(sub_key(target, rest_val));
        for (i, f) in factors.iter().enumerate().skip(1) {
            rest_val = sub_key(rest_val, f.val);
            acc = acc.mul_to(f, sub_key(target, rest_val));
            let _ = i;
        }
        acc
    }

    pub fn pow_to(&self, e: u32, target: QKey) -> QSeries {
        let fs: Vec<&QSeries> = std::iter::repeat(self).take(e as usize).collect();
        if fs.is_empty() {
            return QSeries::one(self.qden, self.uden, target);
        }
        QSeries::product(&fs, target)
    }

    /// Multiply by the monomial q^k (u,v,w)^e.
    pub fn shift(&self, k: QKey, e: [i32; 3]) -> QSeries {
        let mut out = QSeries::zero(self.qden, self.uden, add_key(self.trunc, k), add_key(self.val, k));
        for (kk, b) in &self.blocks {
            let mut nb = b.clone();
            nb.shift(e);
            out.blocks.insert(add_key(*kk, k), nb);
        }
        out
    }

    /// Gcd of all coefficients (0 for the zero series).
    pub fn content(&self) -> Coef {
        use num_integer::Integer;
        self.blocks.values().fold(0, |g: Coef, b| g.gcd(&b.content()))
    }

    /// Exact division of all coefficients by an integer.
    pub fn div_exact(&self, c: Coef) -> Result<QSeries> {
        let mut out = self.clone();
        for (k, b) in out.blocks.iter_mut() {
            if !b.div_exact(c) {
                return Err(Error::NotDivisible(*k));
            }
        }
        Ok(out)
    }

    /// Inverse of a unit series (val 0, constant term 1 at key 0), by
    /// graded recursion W_k = -sum_{j != 0} V_j W_{k - j}.
    pub fn inverse_unit(&self) -> Result<QSeries> {
        let lead = self.blocks.get(&[0; 3]);
        let is_one = lead.map_or(false, |b| b.terms().collect::<Vec<_>>() == vec![([0; 3], 1)]);
        if self.val != [0; 3] || !is_one {
            return Err(Error::Invalid("series is not a unit with constant term 1".into()));
        }
        let vkeys: Vec<QKey> = self.blocks.keys().filter(|k| **k != [0; 3]).copied().collect();
        let mut w: BTreeMap<QKey, Block> = BTreeMap::new();
        let mut seen: BTreeSet<(i32, QKey)> = BTreeSet::new();
        let mut todo: BTreeSet<(i32, QKey)> = BTreeSet::new();
        todo.insert((0, [0; 3]));
        seen.insert((0, [0; 3]));
        while let Some(item) = todo.pop_first() {
            let k = item.1;
            let block = if k == [0; 3] {
                Some(Block::monomial([0; 3], 1))
            } else {
                let mut parts: Vec<(&Block, &Block)> = Vec::new();
                for j in &vkeys {
                    if key_le(*j, k) {
                        if let Some(wb) = w.get(&sub_key(k, *j)) {
                            parts.push((&self.blocks[j], wb));
                        }
                    }
                }
                if parts.is_empty() {
                    None
                } else {
                    let mut l = parts[0].0.layout.product(&parts[0].1.layout);
                    for (a, b) in &parts[1..] {
                        l = l.union(&a.layout.product(&b.layout));
                    }
                    let mut acc = Block::zeros(l);
                    for (a, b) in parts {
                        acc.add_product(a, b);
                    }
                    acc.scale(-1);
                    acc.normalized()
                }
            };
            if let Some(b) = block {
                w.insert(k, b);
            }
            for j in &vkeys {
                let nk = add_key(k, *j);
                if key_le(nk, self.trunc) {
                    let it = (nk.iter().sum::<i32>(), nk);
                    if seen.insert(it) {
                        todo.insert(it);
                    }
                }
            }
        }
        Ok(QSeries { qden: self.qden, uden: self.uden, trunc: self.trunc, val: [0; 3], blocks: w })
    }

    /// Permute the three indices: q_i -> q_{p[i]}, and the pair variables
    /// u = (1,2), v = (1,3), w = (2,3) accordingly.
    pub fn permute(&self, p: [usize; 3]) -> QSeries {
        let pk = |k: QKey| {
            let mut o = [0; 3];
            for i in 0..3 {
                o[p[i]] = k[i];
            }
            o
        };
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let pair_index = |a: usize, b: usize| {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            pairs.iter().position(|&q| q == (x, y)).unwrap()
        };
        let pe = |e: [i32; 3]| {
            let mut o = [0; 3];
            for (s, &(a, b)) in pairs.iter().enumerate() {
                o[pair_index(p[a], p[b])] = e[s];
            }
            o
        };
        let mut out = QSeries::zero(self.qden, self.uden, pk(self.trunc), pk(self.val));
        for (k, b) in &self.blocks {
            if let Some(nb) = b.map_exponents(pe) {
                out.blocks.insert(pk(*k), nb);
            }
        }
        out
    }

    /// Rescale exponent units: keys multiplied by qnum/qden_new ratio.
    /// Fails if an exponent is not representable.
    pub fn with_units(&self, qden: i32, uden: i32) -> Result<QSeries> {
        let conv = |x: i32, from: i32, to: i32| -> Option<i32> {
            let n = x as i64 * to as i64;
            (n % from as i64 == 0).then_some((n / from as i64) as i32)
        };
        let ck = |k: QKey| -> Option<QKey> {
            Some([conv(k[0], self.qden, qden)?, conv(k[1], self.qden, qden)?, conv(k[2], self.qden, qden)?])
        };
        let bad = || Error::Invalid(format!("exponents not representable with denominators {qden}, {uden}"));
        // Truncation and valuation round inward.
        let floor = |x: i32| ((x as i64 * qden as i64).div_euclid(self.qden as i64)) as i32;
        let ceil = |x: i32| (-((-(x as i64) * qden as i64).div_euclid(self.qden as i64))) as i32;
        let mut out = QSeries::zero(
            qden,
            uden,
            [floor(self.trunc[0]), floor(self.trunc[1]), floor(self.trunc[2])],
            [ceil(self.val[0]), ceil(self.val[1]), ceil(self.val[2])],
        );
        for (k, b) in &self.blocks {
            let nk = ck(*k).ok_or_else(bad)?;
            let mut terms = Vec::new();
            for (e, c) in b.terms() {
                let ne = [
                    conv(e[0], self.uden, uden).ok_or_else(bad)?,
                    conv(e[1], self.uden, uden).ok_or_else(bad)?,
                    conv(e[2], self.uden, uden).ok_or_else(bad)?,
                ];
                terms.push((ne, c));
            }
            if let Some(nb) = Block::from_terms(&terms) {
                out.blocks.insert(nk, nb);
            }
        }
        Ok(out)
    }

    /// Assert a lower bound on the keys (e.g. from cusp-form vanishing);
    /// checked against stored terms.
    pub fn with_valuation(mut self, val: QKey) -> Result<QSeries> {
        if let Some(k) = self.blocks.keys().find(|k| !key_le(val, **k)) {
            return Err(Error::Invalid(format!("term at {k:?} below claimed valuation {val:?}")));
        }
        self.val = val;
        Ok(self)
    }

    /// Minimum over stored keys of min_i k_i, in units of 1/qden.
    pub fn min_key_component(&self) -> Option<i32> {
        self.blocks.keys().map(|k| *k.iter().min().unwrap()).min()
    }

    /// First term where two series differ within the common box.
    pub fn first_difference(&self, o: &QSeries) -> Option<(QKey, [i32; 3], Coef, Coef)> {
        let t = key_min(self.trunc, o.trunc);
        let a = self.restrict(t).terms();
        let b = o.restrict(t).terms();
        let keys: BTreeSet<_> = a.keys().chain(b.keys()).copied().collect();
        for k in keys {
            let x = a.get(&k).copied().unwrap_or(0);
            let y = b.get(&k).copied().unwrap_or(0);
            if x != y {
                return Some((k.0, k.1, x, y));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(terms: &[(QKey, [i32; 3], Coef)], t: QKey) -> QSeries {
        QSeries::from_terms(1, 1, t, [0; 3], terms.iter().copied())
    }

    #[test]
    fn unit_inverse() {
        let s = series(&[([0, 0, 0], [0; 3], 1), ([1, 0, 0], [1, 0, 0], 2), ([0, 1, 1], [0, 0, -1], -3)], [4, 3, 3]);
        let w = s.inverse_unit().unwrap();
        let p = s.mul(&w);
        assert_eq!(p.trunc, [4, 3, 3]);
        assert_eq!(p.terms(), QSeries::one(1, 1, [4, 3, 3]).terms());
    }

    #[test]
    fn product_respects_valuation() {
        let a = series(&[([1, 1, 1], [0; 3], 1), ([2, 1, 1], [1, 0, 0], 1)], [3, 3, 3]).with_valuation([1, 1, 1]).unwrap();
        let p = QSeries::product(&[&a, &a, &a], [5, 5, 5]);
        assert_eq!(p.trunc, [5, 5, 5]);
        assert_eq!(p.coeff([3, 3, 3], [0; 3]), 1);
        assert_eq!(p.coeff([4, 3, 3], [1, 0, 0]), 3);
        assert_eq!(p.coeff([5, 3, 3], [2, 0, 0]), 3);
    }

    #[test]
    fn permutation_moves_pairs() {
        let a = series(&[([1, 2, 3], [1, 2, 3], 1)], [5, 5, 5]);
        // swap indices 1 and 2 (0-based): u=(1,2)->(1,3)=v, v->u, w fixed
        let b = a.permute([0, 2, 1]);
        assert_eq!(b.coeff([1, 3, 2], [2, 1, 3]), 1);
    }

    #[test]
    fn unit_rescaling() {
        let a = QSeries::from_terms(8, 4, [16, 16, 16], [0; 3], [([8, 16, 0], [4, -8, 0], 5)]);
        let b = a.with_units(1, 1).unwrap();
        assert_eq!(b.coeff([1, 2, 0], [1, -2, 0]), 5);
        let c = QSeries::from_terms(8, 4, [16, 16, 16], [0; 3], [([1, 0, 0], [0, 0, 0], 5)]);
        assert!(c.with_units(1, 1).is_err());
    }
}
