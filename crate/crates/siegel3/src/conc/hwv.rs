//! Weight spaces of Sym^d(Sym^4) and their highest weight vectors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{kernel_int, SparseRow};
use crate::rep3::apoly::{mono_weight, AMono, APoly};
use crate::rep3::ops::variable_image;
use crate::rep3::{WeightGL3, QUARTIC_EXPS};
use crate::Rat;

/// Degree-d monomials in a0..a14 of a fixed torus weight.
#[derive(Clone, Debug)]
pub struct WeightVectorSpace {
    pub d: u32,
    pub weight: [i64; 3],
    pub basis: Vec<AMono>,
}

impl WeightVectorSpace {
    pub fn new(d: u32, weight: [i64; 3]) -> Self {
        let mut basis = Vec::new();
        if weight.iter().all(|&x| x >= 0) && weight.iter().sum::<i64>() == 4 * d as i64 {
            let mut m = [0u8; 15];
            enumerate(d, 0, weight, &mut m, &mut basis);
        }
        basis.sort();
        WeightVectorSpace { d, weight, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self) -> HashMap<AMono, usize> {
        self.basis.iter().enumerate().map(|(i, m)| (*m, i)).collect()
    }
}

fn enumerate(k: u32, start: usize, w: [i64; 3], m: &mut AMono, out: &mut Vec<AMono>) {
    if k == 0 {
        if w == [0, 0, 0] {
            out.push(*m);
        }
        return;
    }
    for t in start..15 {
        let e = QUARTIC_EXPS[t];
        let nw = [w[0] - e[0] as i64, w[1] - e[1] as i64, w[2] - e[2] as i64];
        if nw.iter().any(|&x| x < 0) {
            continue;
        }
        m[t] += 1;
        enumerate(k - 1, t, nw, m, out);
        m[t] -= 1;
    }
}

/// Sparse matrix columns of E_ij on a weight space, as rows indexed by the
/// target weight space basis.
fn operator_rows(i: usize, j: usize, src: &WeightVectorSpace, tgt: &WeightVectorSpace, rows: &mut Vec<SparseRow>) {
    let tidx = tgt.index();
    let offset = rows.len();
    rows.extend((0..tgt.dim()).map(|_| Vec::new()));
    for (col, m) in src.basis.iter().enumerate() {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for k in 0..15 {
            if m[k] == 0 {
                continue;
            }
            if let Some((t, c)) = variable_image(i, j, k) {
                let mut nm = *m;
                nm[k] -= 1;
                nm[t] += 1;
                *acc.entry(tidx[&nm]).or_insert(0) += c * m[k] as i64;
            }
        }
        for (r, v) in acc {
            if v != 0 {
                rows[offset + r].push((col, v));
            }
        }
    }
}

/// Basis (integer coefficients, content 1) of the joint kernel of E12 and
/// E23 on the degree-d weight-lam subspace.
pub fn highest_weight_vectors(d: u32, lam: &WeightGL3) -> Result<Vec<APoly>> {
    let expected = 4 * d as i64;
    if lam.sum() != expected {
        return Err(Error::WeightSum { weight: lam.0, expected });
    }
    let w = lam.0;
    let src = WeightVectorSpace::new(d, w);
    if src.dim() == 0 {
        return Ok(Vec::new());
    }
    let t1 = WeightVectorSpace::new(d, [w[0] + 1, w[1] - 1, w[2]]);
    let t2 = WeightVectorSpace::new(d, [w[0], w[1] + 1, w[2] - 1]);
    let mut rows = Vec::new();
    operator_rows(0, 1, &src, &t1, &mut rows);
    operator_rows(1, 2, &src, &t2, &mut rows);
    rows.retain(|r| !r.is_empty());
    let kernel = kernel_int(&rows, src.dim());
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut p = APoly::zero();
            for (m, c) in src.basis.iter().zip(v) {
                p.add_term(*m, Rat::from_integer(c));
            }
            normalize_sign(p)
        })
        .collect())
}

/// Make the coefficient of the lexicographically largest monomial positive.
fn normalize_sign(p: APoly) -> APoly {
    match p.terms.iter().next_back() {
        Some((_, c)) if c < &Rat::from_integer(BigInt::from(0)) => p.scale(&Rat::from_integer(BigInt::from(-1))),
        _ => p,
    }
}

/// Check that p is annihilated by E12 and E23.
pub fn is_highest_weight(p: &APoly) -> bool {
    crate::rep3::raising_operator(1, p).is_zero() && crate::rep3::raising_operator(2, p).is_zero()
}

/// Torus weight of a homogeneous weight vector.
pub fn weight_of(p: &APoly) -> Option<[i64; 3]> {
    p.weight()
}

pub fn mono_of_weight(m: &AMono) -> [i64; 3] {
    mono_weight(m)
}

/// Integer coefficient vector (for content checks).
pub fn integer_coefficients(p: &APoly) -> Option<Vec<i64>> {
    p.terms.values().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::content;
    use crate::rep3::plethysm_sym_sym4;

    #[test]
    fn degree_one() {
        let v = highest_weight_vectors(1, &WeightGL3::new(4, 0, 0)).unwrap();
        assert_eq!(v, vec![APoly::var(0)]);
    }

    #[test]
    fn weight_sum_mismatch() {
        assert!(matches!(highest_weight_vectors(2, &WeightGL3::new(4, 0, 0)), Err(Error::WeightSum { .. })));
    }

    #[test]
    fn kernel_dims_match_plethysm() {
        for d in 0..=4u32 {
            let t = plethysm_sym_sym4(d).unwrap();
            for lam in crate::rep3::plethysm::dominant_weights(4 * d as i64) {
                let k = highest_weight_vectors(d, &WeightGL3(lam)).unwrap();
                assert_eq!(k.len() as u64, t.multiplicity(&WeightGL3(lam)), "d={d} lam={lam:?}");
                for p in &k {
                    assert!(is_highest_weight(p));
                    let c: Vec<BigInt> = p.terms.values().map(|x| x.to_integer()).collect();
                    assert_eq!(content(&c), BigInt::from(1));
                }
            }
        }
    }

    #[test]
    fn degree_two_brute_force_decomposition() {
        // Dimensions of HWV kernels for every dominant weight reproduce the
        // character-based decomposition, including zero multiplicities.
        let t = plethysm_sym_sym4(2).unwrap();
        let mut found = Vec::new();
        for lam in crate::rep3::plethysm::dominant_weights(8) {
            let k = highest_weight_vectors(2, &WeightGL3(lam)).unwrap().len();
            if k > 0 {
                found.push((WeightGL3(lam), k as u64));
            }
        }
        let expected: Vec<_> = t.entries.iter().map(|e| (e.weight, e.mult)).collect();
        assert_eq!(found, expected);
    }
}
