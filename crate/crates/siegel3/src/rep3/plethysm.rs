//! Character of Sym^d(Sym^4(C^3)) and its decomposition into GL(3) irreducibles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rep3::{WeightGL3, QUARTIC_EXPS};

/// Default bound on d for `plethysm_sym_sym4`.
pub const DEFAULT_PLETHYSM_BOUND: u32 = 8;
/// Default bound on n for `invariant_dimension`.
pub const DEFAULT_INVARIANT_BOUND: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub weight: WeightGL3,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTable {
    pub d: u32,
    /// Sorted descending-lex by weight.
    pub entries: Vec<DecompositionEntry>,
}

impl DecompositionTable {
    pub fn multiplicity(&self, w: &WeightGL3) -> u64 {
        self.entries.iter().find(|e| &e.weight == w).map_or(0, |e| e.mult)
    }

    /// Sum of mult * weyl_dim over all entries.
    pub fn total_dimension(&self) -> u128 {
        self.entries
            .iter()
            .map(|e| e.mult as u128 * crate::rep3::weyl_dim(&e.weight).unwrap() as u128)
            .sum()
    }
}

/// Weight multiplicities of Sym^d(Sym^4): entry [m1][m2] is the number of
/// degree-d monomials in a0..a14 of torus weight (m1, m2, 4d - m1 - m2).
pub struct Character {
    pub d: u32,
    pub counts: Vec<Vec<u64>>,
}

impl Character {
    pub fn compute(d: u32) -> Character {
        let n = 4 * d as usize + 1;
        // table[t][m1][m2], built by the coin-change recursion for
        // prod_I 1/(1 - t x^I).
        let mut table = vec![vec![vec![0u64; n]; n]; d as usize + 1];
        table[0][0][0] = 1;
        for e in QUARTIC_EXPS.iter() {
            let (e1, e2) = (e[0] as usize, e[1] as usize);
            for t in 1..=d as usize {
                let (lo, hi) = table.split_at_mut(t);
                let prev = &lo[t - 1];
                let cur = &mut hi[0];
                for m1 in e1..n {
                    for m2 in e2..n {
                        let v = prev[m1 - e1][m2 - e2];
                        if v != 0 {
                            cur[m1][m2] += v;
                        }
                    }
                }
            }
        }
        Character { d, counts: table.pop().unwrap() }
    }

    pub fn coeff(&self, w: [i64; 3]) -> u64 {
        let total = 4 * self.d as i64;
        if w.iter().any(|&x| x < 0) || w.iter().sum::<i64>() != total {
            return 0;
        }
        self.counts[w[0] as usize][w[1] as usize]
    }
}

/// Weight multiplicity of mu in the GL(3) irreducible of highest weight lam,
/// counted by Gelfand-Tsetlin patterns.
pub fn kostka(lam: [i64; 3], mu: [i64; 3]) -> u64 {
    let total: i64 = lam.iter().sum();
    if mu.iter().sum::<i64>() != total {
        return 0;
    }
    let s = total - mu[2];
    let mut count = 0;
    for a in lam[1]..=lam[0] {
        let b = s - a;
        if b < lam[2] || b > lam[1] {
            continue;
        }
        if a >= mu[0] && mu[0] >= b {
            count += 1;
        }
    }
    count
}

/// Dominant weights with nonnegative entries summing to n, descending lex.
pub fn dominant_weights(n: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for l1 in (0..=n).rev() {
        for l2 in (0..=l1.min(n - l1)).rev() {
            let l3 = n - l1 - l2;
            if l3 >= 0 && l3 <= l2 {
                out.push([l1, l2, l3]);
            }
        }
    }
    out
}

/// Peel Schur characters off by leading monomials (descending lex).
pub fn decompose_character(ch: &Character) -> Vec<(WeightGL3, u64)> {
    let weights = dominant_weights(4 * ch.d as i64);
    let mut found: Vec<([i64; 3], u64)> = Vec::new();
    for lam in weights {
        let mut c = ch.coeff(lam) as i128;
        for (nu, m) in &found {
            c -= *m as i128 * kostka(*nu, lam) as i128;
        }
        assert!(c >= 0, "negative multiplicity while peeling");
        if c > 0 {
            found.push((lam, c as u64));
        }
    }
    found.into_iter().map(|(w, m)| (WeightGL3(w), m)).collect()
}

/// Multiplicity of lam by antisymmetrization against the Vandermonde
/// determinant (used as an independent check on the peeling).
pub fn multiplicity_by_alternation(ch: &Character, lam: [i64; 3]) -> i128 {
    let shifted = [lam[0] + 2, lam[1] + 1, lam[2]];
    let perms: [([usize; 3], i128); 6] = [
        ([0, 1, 2], 1),
        ([1, 0, 2], -1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
    ];
    let mut total = 0i128;
    for (p, sign) in perms {
        let mu = [shifted[p[0]] - 2, shifted[p[1]] - 1, shifted[p[2]]];
        total += sign * ch.coeff(mu) as i128;
    }
    total
}

pub fn plethysm_with_bound(d: u32, bound: u32) -> Result<DecompositionTable> {
    if d > bound {
        return Err(Error::DegreeTooLarge { degree: d, bound });
    }
    let ch = Character::compute(d);
    let entries = decompose_character(&ch)
        .into_iter()
        .map(|(weight, mult)| DecompositionEntry { weight, mult })
        .collect();
    Ok(DecompositionTable { d, entries })
}

/// Decomposition of Sym^d(Sym^4(C^3)) with the default degree bound.
pub fn plethysm_sym_sym4(d: u32) -> Result<DecompositionTable> {
    plethysm_with_bound(d, DEFAULT_PLETHYSM_BOUND)
}

pub fn invariant_dimension_with_bound(n: u32, bound: u32) -> Result<u64> {
    if n % 3 != 0 {
        return Ok(0);
    }
    if n > bound {
        return Err(Error::DegreeTooLarge { degree: n, bound });
    }
    let ch = Character::compute(n);
    let k = 4 * n as i64 / 3;
    let m = multiplicity_by_alternation(&ch, [k, k, k]);
    Ok(m as u64)
}

/// Dimension of the degree-n invariants of ternary quartics.
pub fn invariant_dimension(n: u32) -> Result<u64> {
    invariant_dimension_with_bound(n, DEFAULT_INVARIANT_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep3::binomial;

    fn w(a: i64, b: i64, c: i64) -> WeightGL3 {
        WeightGL3([a, b, c])
    }

    #[test]
    fn small_degrees() {
        let t0 = plethysm_sym_sym4(0).unwrap();
        assert_eq!(t0.entries, vec![DecompositionEntry { weight: w(0, 0, 0), mult: 1 }]);
        let t2 = plethysm_sym_sym4(2).unwrap();
        let got: Vec<_> = t2.entries.iter().map(|e| (e.weight, e.mult)).collect();
        assert_eq!(got, vec![(w(8, 0, 0), 1), (w(6, 2, 0), 1), (w(4, 4, 0), 1)]);
        assert!(matches!(plethysm_sym_sym4(9), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn dimension_sums() {
        for d in 0..=6 {
            let t = plethysm_sym_sym4(d).unwrap();
            assert_eq!(t.total_dimension(), binomial(d as u64 + 14, 14));
            for e in &t.entries {
                assert_eq!(e.weight.sum(), 4 * d as i64);
            }
        }
    }

    #[test]
    fn peeling_agrees_with_alternation() {
        for d in 0..=7 {
            let ch = Character::compute(d);
            let peeled = decompose_character(&ch);
            for lam in dominant_weights(4 * d as i64) {
                let m = peeled.iter().find(|(x, _)| x.0 == lam).map_or(0, |x| x.1) as i128;
                assert_eq!(m, multiplicity_by_alternation(&ch, lam), "d={d} lam={lam:?}");
            }
        }
    }

    #[test]
    fn kostka_sums_to_dimension() {
        for lam in [[4i64, 0, 0], [3, 2, 1], [6, 2, 0], [5, 5, 2]] {
            let n: i64 = lam.iter().sum();
            let mut total = 0u64;
            for a in 0..=n {
                for b in 0..=n - a {
                    total += kostka(lam, [a, b, n - a - b]);
                }
            }
            assert_eq!(total, crate::rep3::weyl_dim(&WeightGL3(lam)).unwrap());
        }
    }

    #[test]
    fn invariant_dims() {
        let expected = [1u64, 1, 2, 4, 7, 11, 19];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(invariant_dimension(3 * k as u32).unwrap(), *e);
        }
        assert_eq!(invariant_dimension(1).unwrap(), 0);
    }
}
