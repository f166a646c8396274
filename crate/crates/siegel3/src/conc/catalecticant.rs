//! The degree-6 catalecticant invariant and its place in the span of the
//! degree-6 invariants.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conc::{concomitant, Concomitant, TernaryQuartic};
use crate::error::{Error, Result};
use crate::linalg::{det_rat, solve_rat};
use crate::rep3::{quartic_index, WeightGL3};
use crate::Rat;

/// Rows and columns are indexed by x^2, y^2, z^2, yz, xz, xy.
const CONIC_ORDER: [[u8; 3]; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [0, 1, 1], [1, 0, 1], [1, 1, 0]];

pub fn catalecticant_matrix(q: &TernaryQuartic) -> Vec<Vec<Rat>> {
    CONIC_ORDER
        .iter()
        .map(|a| {
            CONIC_ORDER
                .iter()
                .map(|b| q.a[quartic_index([a[0] + b[0], a[1] + b[1], a[2] + b[2]])].clone())
                .collect()
        })
        .collect()
}

pub fn catalecticant_determinant(q: &TernaryQuartic) -> Rat {
    det_rat(&catalecticant_matrix(q))
}

pub fn random_quartic(rng: &mut ChaCha8Rng, bound: i64) -> TernaryQuartic {
    let mut a = [0i64; 15];
    for x in a.iter_mut() {
        *x = rng.gen_range(-bound..=bound);
    }
    TernaryQuartic::from_ints(a)
}

/// The combination of the two invariants of type (6, [8,8,8]) that agrees
/// with the determinant, fitted on two samples.
pub fn catalecticant(seed: u64) -> Result<Concomitant> {
    let lam = WeightGL3::new(8, 8, 8);
    let basis = [concomitant(6, &lam, 0)?, concomitant(6, &lam, 1)?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let samples = [random_quartic(&mut rng, 3), random_quartic(&mut rng, 3)];
        let rows: Vec<Vec<Rat>> = samples
            .iter()
            .map(|q| basis.iter().map(|c| c.evaluate(q)[0].1.clone()).collect())
            .collect();
        let rhs: Vec<Rat> = samples.iter().map(catalecticant_determinant).collect();
        if det_rat(&rows).is_zero() {
            continue;
        }
        let x = solve_rat(&rows, &rhs).ok_or(Error::Singular)?;
        return Ok(Concomitant::combine(&[(x[0].clone(), &basis[0]), (x[1].clone(), &basis[1])]));
    }
    Err(Error::Singular)
}

/// Count of samples on which c and the determinant disagree.
pub fn sample_mismatches(c: &Concomitant, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .filter(|_| {
            let q = random_quartic(&mut rng, 5);
            c.evaluate(&q)[0].1 != catalecticant_determinant(&q)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep3::monomials3;
    use num_bigint::BigInt;

    #[test]
    fn printed_index_pattern() {
        let mut m2: Vec<[u8; 3]> = CONIC_ORDER.to_vec();
        m2.sort_unstable();
        let mut all = monomials3(2);
        all.sort_unstable();
        assert_eq!(m2, all);
        let q = TernaryQuartic::new((0..15).map(|i| Rat::from_integer(BigInt::from(i))).collect());
        let m = catalecticant_matrix(&q);
        let printed = [
            [0, 3, 5, 4, 2, 1],
            [3, 10, 12, 11, 7, 6],
            [5, 12, 14, 13, 9, 8],
            [4, 11, 13, 12, 8, 7],
            [2, 7, 9, 8, 5, 4],
            [1, 6, 8, 7, 4, 3],
        ];
        for (r, row) in printed.iter().enumerate() {
            for (c, &i) in row.iter().enumerate() {
                assert_eq!(m[r][c], Rat::from_integer(BigInt::from(i)));
            }
        }
    }

    #[test]
    fn vanishes_on_sums_of_five_fourth_powers() {
        // a_I of (l.x)^4 is the monomial l^I.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = vec![Rat::zero(); 15];
        for _ in 0..5 {
            let l: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
            for e in monomials3(4) {
                let v: i64 = (0..3).map(|k| l[k].pow(e[k] as u32)).product();
                a[quartic_index(e)] += Rat::from_integer(BigInt::from(v));
            }
        }
        assert!(catalecticant_determinant(&TernaryQuartic::new(a)).is_zero());
    }

    #[test]
    fn lies_in_the_invariant_span() {
        let c = catalecticant(7).unwrap();
        assert_eq!(sample_mismatches(&c, 10, 99), 0);
        assert!(!c.coords[0].poly.is_zero());
    }
}
