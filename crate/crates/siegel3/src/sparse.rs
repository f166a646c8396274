//! Sparse rational vectors keyed by monomials, with incremental echelon bases.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Rat;

pub type SVec<K> = BTreeMap<K, Rat>;

pub fn add_scaled<K: Ord + Copy>(v: &mut SVec<K>, w: &SVec<K>, c: &Rat) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let e = v.entry(*k).or_insert_with(Rat::zero);
        *e += x * c;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Reduced echelon basis: each row has coefficient 1 at its pivot and 0 at
/// the pivots of all other rows.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Copy> {
    pub rows: Vec<(K, SVec<K>)>,
}

impl<K: Ord + Copy> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<K: Ord + Copy> Echelon<K> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &SVec<K>) -> SVec<K> {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = r.get(p).cloned() {
                add_scaled(&mut r, row, &-c);
            }
        }
        r
    }

    /// Insert v; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &SVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((&p, c)) = r.iter().next_back() else {
            return false;
        };
        let inv = c.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if let Some(c) = row.get(&p).cloned() {
                add_scaled(row, &r, &-c);
            }
        }
        self.rows.push((p, r));
        true
    }

    /// Coordinates of v in the basis, or None if v is not in the span.
    pub fn coords(&self, v: &SVec<K>) -> Option<Vec<Rat>> {
        let c: Vec<Rat> = self.rows.iter().map(|(p, _)| v.get(p).cloned().unwrap_or_else(Rat::zero)).collect();
        let mut r = v.clone();
        for ((_, row), x) in self.rows.iter().zip(c.iter()) {
            add_scaled(&mut r, row, &-x.clone());
        }
        if r.is_empty() {
            Some(c)
        } else {
            None
        }
    }

    pub fn vector(&self, i: usize) -> &SVec<K> {
        &self.rows[i].1
    }
}

pub fn unit<K: Ord + Copy>(k: K) -> SVec<K> {
    let mut v = SVec::new();
    v.insert(k, Rat::one());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn echelon_span() {
        let mut e: Echelon<u8> = Echelon::default();
        let v1: SVec<u8> = [(0, r(1)), (1, r(2))].into_iter().collect();
        let v2: SVec<u8> = [(1, r(1)), (2, r(1))].into_iter().collect();
        assert!(e.insert(&v1));
        assert!(e.insert(&v2));
        let mut s = v1.clone();
        add_scaled(&mut s, &v2, &r(3));
        assert!(!e.insert(&s));
        let c = e.coords(&s).unwrap();
        let mut back = SVec::new();
        for (i, x) in c.iter().enumerate() {
            add_scaled(&mut back, e.vector(i), x);
        }
        assert_eq!(back, s);
        assert!(e.coords(&unit(5)).is_none());
    }
}
