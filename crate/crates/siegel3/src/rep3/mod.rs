//! GL(3) representation theory for Sym^d(Sym^4(C^3)): weights, plethysm,
//! and the infinitesimal action on polynomials in the quartic coefficients.

pub mod apoly;
pub mod ops;
pub mod plethysm;

pub use apoly::{AMono, APoly};
pub use ops::{gl_operator, lowering_operator, raising_operator};
pub use plethysm::{invariant_dimension, plethysm_sym_sym4, DecompositionTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest weight of a GL(3) irreducible, written [l1, l2, l3].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightGL3(pub [i64; 3]);

impl WeightGL3 {
    pub fn new(l1: i64, l2: i64, l3: i64) -> Self {
        WeightGL3([l1, l2, l3])
    }

    pub fn is_dominant(&self) -> bool {
        self.0[0] >= self.0[1] && self.0[1] >= self.0[2]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Twist of a degree-d concomitant type to GL-form.
    pub fn gl_twist(&self, d: i64) -> WeightGL3 {
        WeightGL3([self.0[0] - d, self.0[1] - d, self.0[2] - d])
    }

    /// Siegel weight (l1-l2, l2-l3, l3+8d) of the image of a degree-d concomitant.
    pub fn siegel_weight(&self, d: i64) -> [i64; 3] {
        [self.0[0] - self.0[1], self.0[1] - self.0[2], self.0[2] + 8 * d]
    }
}

impl std::fmt::Display for WeightGL3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.0[0], self.0[1], self.0[2])
    }
}

impl std::str::FromStr for WeightGL3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim_matches(|c| c == '[' || c == ']').split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!("weight '{s}' needs three entries")));
        }
        let mut w = [0i64; 3];
        for (x, p) in w.iter_mut().zip(parts) {
            *x = p.trim().parse().map_err(|_| Error::Invalid(format!("bad weight entry '{p}'")))?;
        }
        Ok(WeightGL3(w))
    }
}

/// Weyl dimension formula for GL(3).
pub fn weyl_dim(w: &WeightGL3) -> Result<u64> {
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0));
    }
    let [a, b, c] = w.0;
    Ok(((a - b + 1) * (b - c + 1) * (a - c + 2) / 2) as u64)
}

/// Exponent triples of degree-4 monomials in lexicographic order:
/// index i of a_i is the position of its monomial here.
pub const QUARTIC_EXPS: [[u8; 3]; 15] = [
    [4, 0, 0],
    [3, 1, 0],
    [3, 0, 1],
    [2, 2, 0],
    [2, 1, 1],
    [2, 0, 2],
    [1, 3, 0],
    [1, 2, 1],
    [1, 1, 2],
    [1, 0, 3],
    [0, 4, 0],
    [0, 3, 1],
    [0, 2, 2],
    [0, 1, 3],
    [0, 0, 4],
];

/// Multinomial factors n_I = 4!/(i1! i2! i3!).
pub const N_I: [i64; 15] = [1, 4, 4, 6, 12, 6, 4, 12, 12, 4, 1, 4, 6, 4, 1];

/// Index of a degree-4 exponent triple.
pub fn quartic_index(e: [u8; 3]) -> usize {
    QUARTIC_EXPS.iter().position(|x| *x == e).expect("degree-4 exponent")
}

/// All exponent triples of total degree n, lexicographically descending
/// (first variable highest).
pub fn monomials3(n: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push([i as u8, j as u8, (n - i - j) as u8]);
        }
    }
    out
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Multinomial coefficient |e|!/(e1! e2! e3!).
pub fn multinomial(e: [u8; 3]) -> u64 {
    let n: u64 = e.iter().map(|&x| x as u64).sum();
    factorial(n) / e.iter().map(|&x| factorial(x as u64)).product::<u64>()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_dim_examples() {
        assert_eq!(weyl_dim(&WeightGL3::new(0, 0, 0)).unwrap(), 1);
        assert_eq!(weyl_dim(&WeightGL3::new(1, 0, 0)).unwrap(), 3);
        assert_eq!(weyl_dim(&WeightGL3::new(4, 0, 0)).unwrap(), 15);
        assert_eq!(weyl_dim(&WeightGL3::new(2, 1, 0)).unwrap(), 8);
        assert!(weyl_dim(&WeightGL3::new(0, 1, 0)).is_err());
    }

    #[test]
    fn quartic_basis() {
        assert_eq!(monomials3(4).as_slice(), &QUARTIC_EXPS[..]);
        for (e, n) in QUARTIC_EXPS.iter().zip(N_I.iter()) {
            assert_eq!(multinomial(*e) as i64, *n);
        }
        assert_eq!(N_I.iter().sum::<i64>(), 81);
    }

    #[test]
    fn siegel_weight_of_types() {
        assert_eq!(WeightGL3::new(10, 9, 1).siegel_weight(5), [1, 8, 41]);
        assert_eq!(WeightGL3::new(4, 0, 0).siegel_weight(1), [4, 0, 8]);
        assert_eq!("4,4,0".parse::<WeightGL3>().unwrap(), WeightGL3::new(4, 4, 0));
    }
}
