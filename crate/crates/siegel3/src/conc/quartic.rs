//! Ternary quartics in the normalized basis f = sum n_I a_I x^I, and conics.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::field::{sym_power_matrix, Field, Q};
use crate::rep3::{monomials3, N_I};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryQuartic {
    #[serde(with = "crate::json::rat_vec")]
    pub a: Vec<Rat>,
}

impl TernaryQuartic {
    pub fn new(a: Vec<Rat>) -> Self {
        assert_eq!(a.len(), 15);
        TernaryQuartic { a }
    }

    pub fn from_ints(a: [i64; 15]) -> Self {
        TernaryQuartic::new(a.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
    }

    /// x^4 + y^4 + z^4.
    pub fn fermat() -> Self {
        let mut a = [0i64; 15];
        a[0] = 1;
        a[10] = 1;
        a[14] = 1;
        TernaryQuartic::from_ints(a)
    }

    /// Build from monomial coefficients c_I (coefficient of x^I).
    pub fn from_monomial_coeffs(c: &[Rat]) -> Self {
        TernaryQuartic::new(
            c.iter().zip(N_I.iter()).map(|(x, n)| x / Rat::from_integer(BigInt::from(*n))).collect(),
        )
    }

    /// Monomial coefficients n_I a_I.
    pub fn monomial_coeffs(&self) -> Vec<Rat> {
        self.a.iter().zip(N_I.iter()).map(|(x, n)| x * Rat::from_integer(BigInt::from(*n))).collect()
    }
}

/// Substitute x_i -> sum_j A[j][i] x_j in q and re-read the coefficients.
pub fn gl3_act(m: &[[Rat; 3]; 3], q: &TernaryQuartic) -> TernaryQuartic {
    gl3_act_field(&Q, m, &q.a).map(TernaryQuartic::new).unwrap()
}

/// Same substitution over any field, on the a_I coordinates.
pub fn gl3_act_field<F: Field>(f: &F, m: &[[F::E; 3]; 3], a: &[F::E]) -> Option<Vec<F::E>> {
    let s = sym_power_matrix(f, m, 4);
    let c: Vec<F::E> = a.iter().zip(N_I.iter()).map(|(x, n)| f.mul(x, &f.from_i64(*n))).collect();
    let mut out = Vec::with_capacity(15);
    for i in 0..15 {
        let mut acc = f.zero();
        for j in 0..15 {
            acc = f.add(&acc, &f.mul(&s[i][j], &c[j]));
        }
        let n = f.from_i64(N_I[i]);
        if f.is_zero(&n) {
            return None;
        }
        out.push(f.mul(&acc, &f.inv(&n)));
    }
    Some(out)
}

/// Ternary conic g = c0 x^2 + 2 c1 xy + 2 c2 xz + c3 y^2 + 2 c4 yz + c5 z^2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conic {
    #[serde(with = "crate::json::rat_vec")]
    pub c: Vec<Rat>,
}

/// Monomial coefficients of a conic (order x^2, xy, xz, y^2, yz, z^2).
fn conic_monomial_coeffs<F: Field>(f: &F, c: &[F::E]) -> Vec<F::E> {
    let two = f.from_i64(2);
    vec![c[0].clone(), f.mul(&two, &c[1]), f.mul(&two, &c[2]), c[3].clone(), f.mul(&two, &c[4]), c[5].clone()]
}

/// Coordinates a_I of g^2 over any field.
pub fn conic_square<F: Field>(f: &F, c: &[F::E]) -> Vec<F::E> {
    let mc = conic_monomial_coeffs(f, c);
    let quad = monomials3(2);
    let quart = monomials3(4);
    let mut out = vec![f.zero(); 15];
    for (i, ei) in quad.iter().enumerate() {
        for (j, ej) in quad.iter().enumerate() {
            let e = [ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]];
            let k = quart.iter().position(|x| *x == e).unwrap();
            out[k] = f.add(&out[k], &f.mul(&mc[i], &mc[j]));
        }
    }
    for (k, n) in N_I.iter().enumerate() {
        out[k] = f.mul(&out[k], &f.inv(&f.from_i64(*n)));
    }
    out
}

impl Conic {
    pub fn square(&self) -> TernaryQuartic {
        TernaryQuartic::new(conic_square(&Q, &self.c))
    }
}

pub fn identity3() -> [[Rat; 3]; 3] {
    let z = Rat::zero();
    let o = Rat::from_integer(BigInt::from(1));
    [[o.clone(), z.clone(), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z, o]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn mat(v: [[i64; 3]; 3]) -> [[Rat; 3]; 3] {
        v.map(|row| row.map(r))
    }

    #[test]
    fn identity_and_scaling() {
        let q = TernaryQuartic::from_ints([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(gl3_act(&identity3(), &q), q);
        let mut x4 = [0i64; 15];
        x4[0] = 1;
        let s = gl3_act(&mat([[2, 0, 0], [0, 1, 0], [0, 0, 1]]), &TernaryQuartic::from_ints(x4));
        assert_eq!(s.a[0], r(16));
    }

    #[test]
    fn swap_x_y() {
        let mut a = [0i64; 15];
        a[1] = 1; // x^3 y
        let s = gl3_act(&mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]]), &TernaryQuartic::from_ints(a));
        let mut e = [0i64; 15];
        e[6] = 1; // x y^3
        assert_eq!(s, TernaryQuartic::from_ints(e));
    }

    #[test]
    fn double_conic() {
        // (x^2 + y^2 + z^2)^2 = x^4 + y^4 + z^4 + 2x^2y^2 + 2x^2z^2 + 2y^2z^2
        let g = Conic { c: vec![r(1), r(0), r(0), r(1), r(0), r(1)] };
        let q = g.square();
        let c = q.monomial_coeffs();
        assert_eq!(c[0], r(1));
        assert_eq!(c[3], r(2));
        assert_eq!(c[4], r(0));
        assert_eq!(q.a[3], Rat::new(BigInt::from(1), BigInt::from(3)));
    }
}
