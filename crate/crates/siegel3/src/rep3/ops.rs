//! Infinitesimal GL(3) action on polynomials in a0..a14.
//!
//! E_ij acts on the variables by x_i -> -x_j (dual action), and on the
//! coefficients so that the universal quartic f = sum n_I a_I x^I is fixed.
//! The action on a_I is derived from that requirement once and cached.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rep3::apoly::APoly;
use crate::rep3::{quartic_index, N_I, QUARTIC_EXPS};
use crate::Rat;

/// Entry [i][j][k] = image of a_k under E_ij as (target index, coefficient).
type OpTable = [[[Option<(usize, i64)>; 15]; 3]; 3];

fn op_table() -> &'static OpTable {
    static TABLE: OnceLock<OpTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: OpTable = [[[None; 15]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                // E_ij x^I = -I_i x^{I - e_i + e_j}; invariance of f forces
                // n_J E(a_J) = n_I I_i a_I for I = J + e_i - e_j.
                for (jdx, jexp) in QUARTIC_EXPS.iter().enumerate() {
                    if jexp[j] == 0 {
                        continue;
                    }
                    let mut iexp = *jexp;
                    iexp[i] += 1;
                    iexp[j] -= 1;
                    let idx = quartic_index(iexp);
                    let c = Rat::new(BigInt::from(N_I[idx] * iexp[i] as i64), BigInt::from(N_I[jdx]));
                    assert!(c.is_integer());
                    let c: i64 = c.to_integer().try_into().unwrap();
                    t[i][j][jdx] = Some((idx, c));
                }
            }
        }
        t
    })
}

/// Image of a single variable a_k under E_ij (0-based i, j).
pub fn variable_image(i: usize, j: usize, k: usize) -> Option<(usize, i64)> {
    if i == j {
        return None;
    }
    op_table()[i][j][k]
}

/// Apply E_ij (0-based indices, i != j) as a derivation.
pub fn gl_operator(i: usize, j: usize, p: &APoly) -> APoly {
    assert!(i < 3 && j < 3 && i != j);
    let table = &op_table()[i][j];
    let mut out = APoly::zero();
    for (m, c) in &p.terms {
        for k in 0..15 {
            let e = m[k];
            if e == 0 {
                continue;
            }
            if let Some((t, coef)) = table[k] {
                let mut nm = *m;
                nm[k] -= 1;
                nm[t] += 1;
                let factor = Rat::from_integer(BigInt::from(coef * e as i64));
                if !factor.is_zero() {
                    out.add_term(nm, c * factor);
                }
            }
        }
    }
    out
}

/// E12 (i = 1) or E23 (i = 2).
pub fn raising_operator(i: usize, p: &APoly) -> APoly {
    match i {
        1 => gl_operator(0, 1, p),
        2 => gl_operator(1, 2, p),
        _ => panic!("raising operator index must be 1 or 2"),
    }
}

/// F21 (i = 1) or F32 (i = 2).
pub fn lowering_operator(i: usize, p: &APoly) -> APoly {
    match i {
        1 => gl_operator(1, 0, p),
        2 => gl_operator(2, 1, p),
        _ => panic!("lowering operator index must be 1 or 2"),
    }
}

/// Cartan element H_i = E_ii - E_{i+1,i+1} acting diagonally by weights.
pub fn cartan(i: usize, p: &APoly) -> APoly {
    let mut out = APoly::zero();
    for (m, c) in &p.terms {
        let w = crate::rep3::apoly::mono_weight(m);
        let h = w[i - 1] - w[i];
        out.add_term(*m, c * Rat::from_integer(BigInt::from(h)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep3::apoly::mono_weight;
    use proptest::prelude::*;

    fn int(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn closed_form_matches_table() {
        // E_ij a_J = J_j a_{J + e_i - e_j}
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for (k, e) in QUARTIC_EXPS.iter().enumerate() {
                    let img = variable_image(i, j, k);
                    if e[j] == 0 {
                        assert_eq!(img, None);
                    } else {
                        let mut t = *e;
                        t[i] += 1;
                        t[j] -= 1;
                        assert_eq!(img, Some((quartic_index(t), e[j] as i64)));
                    }
                }
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(raising_operator(1, &APoly::var(10)), APoly::var(6).scale(&int(4)));
        assert!(raising_operator(1, &APoly::var(0)).is_zero());
        assert_eq!(lowering_operator(1, &APoly::var(6)), APoly::var(10));
        assert!(lowering_operator(2, &APoly::var(0)).is_zero());
        let mut p = APoly::var(0);
        for _ in 0..4 {
            p = lowering_operator(1, &p);
        }
        assert_eq!(p, APoly::var(10).scale(&int(24)));
    }

    fn arb_poly() -> impl Strategy<Value = APoly> {
        prop::collection::vec((prop::collection::vec(0usize..15, 3), -5i64..6), 1..6).prop_map(|terms| {
            let mut p = APoly::zero();
            for (vars, c) in terms {
                let mut m = [0u8; 15];
                for v in vars {
                    m[v] += 1;
                }
                p.add_term(m, int(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn commutator_is_cartan(p in arb_poly()) {
            for i in 1..=2 {
                let ef = raising_operator(i, &lowering_operator(i, &p));
                let fe = lowering_operator(i, &raising_operator(i, &p));
                prop_assert_eq!(ef.sub(&fe), cartan(i, &p));
            }
        }

        #[test]
        fn raising_shifts_weight(p in arb_poly()) {
            for (i, shift) in [(1usize, [1i64, -1, 0]), (2, [0, 1, -1])] {
                let q = raising_operator(i, &p);
                for m in q.terms.keys() {
                    let w = mono_weight(m);
                    let ok = p.terms.keys().any(|pm| {
                        let pw = mono_weight(pm);
                        (0..3).all(|k| pw[k] + shift[k] == w[k])
                    });
                    prop_assert!(ok);
                }
            }
        }
    }
}
