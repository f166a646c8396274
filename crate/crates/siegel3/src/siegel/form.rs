//! Vector-valued Siegel modular forms as truncated Fourier series.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::json::{parse_rat, rat_to_string, series_from_json, series_to_json, SeriesJson};
use crate::rep3::monomials3;
use crate::theta3::series::{key_le, key_min, QKey, QSeries};
use crate::Rat;

/// N = [n11, n22, n33; 2n12, 2n13, 2n23].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfIntegralMatrix {
    pub diag: [i32; 3],
    pub offdiag: [i32; 3],
}

impl HalfIntegralMatrix {
    pub fn new(diag: [i32; 3], offdiag: [i32; 3]) -> Self {
        HalfIntegralMatrix { diag, offdiag }
    }

    pub fn scaled(&self, c: i32) -> Self {
        HalfIntegralMatrix::new(self.diag.map(|x| c * x), self.offdiag.map(|x| c * x))
    }

    /// 4 n_ii n_jj >= (2 n_ij)^2 for all pairs and det >= 0.
    pub fn is_positive_semidefinite(&self) -> bool {
        let [a, b, c] = self.diag.map(|x| 2 * x as i64);
        let [d, e, f] = self.offdiag.map(|x| x as i64);
        // 2N = [[a, d, e], [d, b, f], [e, f, c]]
        let minors2 = a * b - d * d >= 0 && a * c - e * e >= 0 && b * c - f * f >= 0;
        let det = a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
        a >= 0 && b >= 0 && c >= 0 && minors2 && det >= 0
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.diag;
        let [d, e, g] = self.offdiag;
        write!(f, "[{a},{b},{c};{d},{e},{g}]")
    }
}

impl FromStr for HalfIntegralMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<i32> = s
            .trim_matches(|c| c == '[' || c == ']')
            .split(|c| c == ',' || c == ';')
            .map(|x| x.trim().parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Invalid(format!("bad matrix '{s}'")))?;
        if v.len() != 6 {
            return Err(Error::Invalid(format!("expected 6 entries in '{s}'")));
        }
        Ok(HalfIntegralMatrix::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]))
    }
}

/// Coordinates are integer series (integral q and u, v, w exponents)
/// times a common rational scale. Coordinate order: Sym^i monomial outer,
/// Sym^j monomial inner, both lexicographically descending.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedForm {
    pub weight: [i64; 3],
    pub coords: Vec<QSeries>,
    pub scale: Rat,
}

/// Basis labels (Sym^i exponent, Sym^j exponent) of the coordinates.
pub fn sym_basis(i: usize, j: usize) -> Vec<([u8; 3], [u8; 3])> {
    let mut out = Vec::new();
    for a in monomials3(i) {
        for b in monomials3(j) {
            out.push((a, b));
        }
    }
    out
}

impl VectorValuedForm {
    pub fn new(weight: [i64; 3], coords: Vec<QSeries>, scale: Rat) -> Result<Self> {
        let n = sym_basis(weight[0] as usize, weight[1] as usize).len();
        if coords.len() != n {
            return Err(Error::Invalid(format!("weight {weight:?} needs {n} coordinates, got {}", coords.len())));
        }
        if coords.iter().any(|c| c.qden != 1 || c.uden != 1) {
            return Err(Error::Invalid("form coordinates must use integral exponents".into()));
        }
        Ok(VectorValuedForm { weight, coords, scale })
    }

    pub fn trunc(&self) -> QKey {
        self.coords.iter().fold([i32::MAX; 3], |t, c| crate::theta3::series::key_min(t, c.trunc))
    }

    pub fn fourier_coefficient(&self, n: &HalfIntegralMatrix) -> Result<Vec<Rat>> {
        if !key_le(n.diag, self.trunc()) || n.diag.iter().any(|&x| x < 0) {
            return Err(Error::OutOfBox(format!("{n} lies outside the truncation box {:?}", self.trunc())));
        }
        Ok(self
            .coords
            .iter()
            .map(|c| Rat::from_integer(BigInt::from(c.coeff(n.diag, n.offdiag))) * &self.scale)
            .collect())
    }

    /// Integer coefficients before applying the scale.
    pub fn raw_coefficient(&self, n: &HalfIntegralMatrix) -> Result<Vec<i128>> {
        if !key_le(n.diag, self.trunc()) {
            return Err(Error::OutOfBox(format!("{n} lies outside the truncation box {:?}", self.trunc())));
        }
        Ok(self.coords.iter().map(|c| c.coeff(n.diag, n.offdiag)).collect())
    }

    /// Minimum over stored terms of min_i n_ii.
    pub fn order_at_infinity(&self) -> Result<i32> {
        self.coords.iter().filter_map(|c| c.min_key_component()).min().ok_or(Error::ZeroForm)
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.coords.iter().all(|c| c.is_zero())
    }

    pub fn with_scale(mut self, s: Rat) -> Self {
        self.scale = s;
        self
    }

    pub fn restrict(&self, t: QKey) -> VectorValuedForm {
        VectorValuedForm { weight: self.weight, coords: self.coords.iter().map(|c| c.restrict(t)).collect(), scale: self.scale.clone() }
    }

    /// Scaled coefficients on the common box, keyed by (coordinate, q, uvw).
    fn scaled_terms(&self, t: QKey) -> BTreeMap<(usize, QKey, [i32; 3]), Rat> {
        let mut m = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            for ((k, e), x) in c.restrict(t).terms() {
                m.insert((i, k, e), Rat::from_integer(BigInt::from(x)) * &self.scale);
            }
        }
        m
    }

    /// First term where the two forms differ on their common box.
    pub fn first_difference(&self, o: &VectorValuedForm) -> Option<Witness> {
        if self.weight != o.weight {
            return Some(Witness { coord: 0, q: [0; 3], uvw: [0; 3], left: Rat::zero(), right: Rat::zero() });
        }
        let t = key_min(self.trunc(), o.trunc());
        let a = self.scaled_terms(t);
        let b = o.scaled_terms(t);
        let keys: BTreeSet<_> = a.keys().chain(b.keys()).copied().collect();
        for k in keys {
            let x = a.get(&k).cloned().unwrap_or_else(Rat::zero);
            let y = b.get(&k).cloned().unwrap_or_else(Rat::zero);
            if x != y {
                return Some(Witness { coord: k.0, q: k.1, uvw: k.2, left: x, right: y });
            }
        }
        None
    }

    /// c with self = c * o on the common box, if it exists and o is nonzero there.
    pub fn ratio_to(&self, o: &VectorValuedForm) -> Option<Rat> {
        if self.weight[..2] != o.weight[..2] {
            return None;
        }
        let t = key_min(self.trunc(), o.trunc());
        let a = self.scaled_terms(t);
        let b = o.scaled_terms(t);
        let (k0, y0) = b.iter().next()?;
        let c = a.get(k0).cloned().unwrap_or_else(Rat::zero) / y0;
        let keys: BTreeSet<_> = a.keys().chain(b.keys()).copied().collect();
        for k in keys {
            let x = a.get(&k).cloned().unwrap_or_else(Rat::zero);
            let y = b.get(&k).cloned().unwrap_or_else(Rat::zero);
            if x != &c * y {
                return None;
            }
        }
        Some(c)
    }

    /// A stored term outside |2 n_ij| <= 2 sqrt(n_ii n_jj), if any.
    pub fn semidefinite_violation(&self) -> Option<(usize, QKey, [i32; 3])> {
        for (i, c) in self.coords.iter().enumerate() {
            for (k, e) in c.terms().into_keys() {
                let pairs = [(0, 1), (0, 2), (1, 2)];
                let outside = pairs.iter().zip(e).any(|(&(a, b), x)| (x as i64).pow(2) > 4 * k[a] as i64 * k[b] as i64);
                if outside || k.iter().any(|&x| x < 0) {
                    return Some((i, k, e));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> Result<FormJson> {
        Ok(FormJson {
            weight: self.weight,
            coords: self.coords.iter().map(series_to_json).collect::<Result<_>>()?,
            basis: BASIS_NAME.into(),
            scalar_note: rat_to_string(&self.scale),
        })
    }

    pub fn from_json(j: &FormJson) -> Result<VectorValuedForm> {
        if j.basis != BASIS_NAME {
            return Err(Error::Invalid(format!("unknown basis '{}'", j.basis)));
        }
        let coords = j.coords.iter().map(|c| series_from_json(c, 1, 1)).collect::<Result<_>>()?;
        VectorValuedForm::new(j.weight, coords, parse_rat(&j.scalar_note)?)
    }
}

pub const BASIS_NAME: &str = "symi-outer-lex";

/// Serialized form: coefficients are integers, multiplied by `scalar_note`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub weight: [i64; 3],
    pub coords: Vec<SeriesJson>,
    pub basis: String,
    pub scalar_note: String,
}

/// A located disagreement between two forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub coord: usize,
    pub q: QKey,
    pub uvw: [i32; 3],
    pub left: Rat,
    pub right: Rat,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coordinate {} at q^{:?} u,v,w^{:?}: {} vs {}", self.coord, self.q, self.uvw, self.left, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_matrix() {
        let n: HalfIntegralMatrix = "1,1,2,1,2,2".parse().unwrap();
        assert_eq!(n, HalfIntegralMatrix::new([1, 1, 2], [1, 2, 2]));
        assert!(n.is_positive_semidefinite());
        let m: HalfIntegralMatrix = "[3,2,2;4,4,2]".parse().unwrap();
        assert_eq!(m.offdiag, [4, 4, 2]);
        assert!(!HalfIntegralMatrix::new([1, 1, 0], [3, 0, 0]).is_positive_semidefinite());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(sym_basis(4, 0).len(), 15);
        assert_eq!(sym_basis(3, 3).len(), 100);
        assert_eq!(sym_basis(1, 8).len(), 135);
        assert_eq!(sym_basis(0, 0).len(), 1);
    }
}
