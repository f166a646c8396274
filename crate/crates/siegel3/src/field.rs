//! A minimal field interface so evaluation code runs over Q or F_p.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::modp::Fp;
use crate::Rat;

pub trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_i64(&self, a: i64) -> Self::E;
    /// None if the denominator vanishes in the field.
    fn from_rat(&self, a: &Rat) -> Option<Self::E>;

    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }

    fn pow(&self, a: &Self::E, e: u64) -> Self::E {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }
}

impl Field for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Fp::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Fp::sub(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Fp::mul(self, *a, *b)
    }
    fn inv(&self, a: &u64) -> u64 {
        Fp::inv(self, *a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, a: i64) -> u64 {
        Fp::from_i64(self, a)
    }
    fn from_rat(&self, a: &Rat) -> Option<u64> {
        Fp::from_rat(self, a)
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        Fp::pow(self, *a, e)
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Q;

impl Field for Q {
    type E = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, a: i64) -> Rat {
        Rat::from_integer(BigInt::from(a))
    }
    fn from_rat(&self, a: &Rat) -> Option<Rat> {
        Some(a.clone())
    }
}

/// Matrix of the substitution e_l -> sum_k b[k][l] e_k on degree-j monomials
/// (ordered by `monomials3(j)`): column L holds the expansion of e^L.
pub fn sym_power_matrix<F: Field>(f: &F, b: &[[F::E; 3]; 3], j: usize) -> Vec<Vec<F::E>> {
    let monos = crate::rep3::monomials3(j);
    let index = |e: [u8; 3]| monos.iter().position(|m| *m == e).unwrap();
    let n = monos.len();
    let mut out = vec![vec![f.zero(); n]; n];
    for (col, l) in monos.iter().enumerate() {
        // Expand prod_l (sum_k b[k][l] e_k)^{L_l} as a polynomial.
        let mut poly: Vec<([u8; 3], F::E)> = vec![([0, 0, 0], f.one())];
        for var in 0..3 {
            for _ in 0..l[var] {
                let mut next: Vec<([u8; 3], F::E)> = Vec::new();
                for (m, c) in &poly {
                    for k in 0..3 {
                        if f.is_zero(&b[k][var]) {
                            continue;
                        }
                        let mut nm = *m;
                        nm[k] += 1;
                        let nc = f.mul(c, &b[k][var]);
                        if let Some(e) = next.iter_mut().find(|(x, _)| *x == nm) {
                            e.1 = f.add(&e.1, &nc);
                        } else {
                            next.push((nm, nc));
                        }
                    }
                }
                poly = next;
            }
        }
        for (m, c) in poly {
            out[index(m)][col] = c;
        }
    }
    out
}

/// Matrix of b acting on the wedge square in the basis
/// (e2^e3, e3^e1, e1^e2).
pub fn wedge2_matrix<F: Field>(f: &F, b: &[[F::E; 3]; 3]) -> [[F::E; 3]; 3] {
    const PAIRS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];
    let z = f.zero();
    let mut out = [[z.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z]];
    for (col, &(p, q)) in PAIRS.iter().enumerate() {
        // b e_p ^ b e_q = sum_{k,l} b[k][p] b[l][q] e_k ^ e_l
        for (row, &(k, l)) in PAIRS.iter().enumerate() {
            let t = f.sub(&f.mul(&b[k][p], &b[l][q]), &f.mul(&b[l][p], &b[k][q]));
            out[row][col] = t;
        }
    }
    out
}
