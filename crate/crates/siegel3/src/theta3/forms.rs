//! chi18 and the coordinates of chi_{4,0,8} from theta constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rep3::{monomials3, QUARTIC_EXPS};
use crate::siegel::form::VectorValuedForm;
use crate::theta3::block::Coef;
pub use crate::theta3::laurent::{laurent_mul, Laurent};
use crate::theta3::series::{QKey, QSeries};
use crate::theta3::theta::{group_chars, multinomial_pair, theta_constant, theta_jet, Characteristic, QDEN};
use crate::Rat;

/// Box in eighths covering integral keys up to n.
pub fn eighths(n: QKey) -> QKey {
    n.map(|x| x * QDEN)
}

fn laurent(terms: &[([i32; 3], Coef)]) -> Laurent {
    let mut m = Laurent::new();
    for (e, c) in terms {
        *m.entry(*e).or_insert(0) += c;
    }
    m.retain(|_, v| *v != 0);
    m
}

/// -((s3 - s2 + s1 - 1)/s3)^2 (s3^2 - 2 s3 s1 + 8 s3 + s1^2 - 4 s2), with
/// s_i the elementary symmetric functions of u, v, w.
pub fn chi18_leading_block() -> Laurent {
    let s1 = laurent(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]);
    let s2 = laurent(&[([1, 1, 0], 1), ([1, 0, 1], 1), ([0, 1, 1], 1)]);
    let s3 = laurent(&[([1, 1, 1], 1)]);
    let inv_s3 = laurent(&[([-1, -1, -1], 1)]);
    let one = laurent(&[([0, 0, 0], 1)]);
    let add = |a: &Laurent, b: &Laurent, c: Coef| {
        let mut m = a.clone();
        for (e, x) in b {
            *m.entry(*e).or_insert(0) += c * x;
        }
        m.retain(|_, v| *v != 0);
        m
    };
    let f = add(&add(&add(&s3, &s2, -1), &s1, 1), &one, -1);
    let f = laurent_mul(&f, &inv_s3);
    let f2 = laurent_mul(&f, &f);
    let mut g = laurent_mul(&s3, &s3);
    g = add(&g, &laurent_mul(&s3, &s1), -2);
    g = add(&g, &s3, 8);
    g = add(&g, &laurent_mul(&s1, &s1), 1);
    g = add(&g, &s2, -4);
    let mut out = laurent_mul(&f2, &g);
    for v in out.values_mut() {
        *v = -*v;
    }
    out
}

/// The three r_{mu nu} with (mu, nu) in {00, 01, 10}.
pub fn r_triple(trunc: QKey) -> Result<[QSeries; 3]> {
    Ok([
        crate::theta3::theta::r_munu(0, 0, trunc)?,
        crate::theta3::theta::r_munu(0, 1, trunc)?,
        crate::theta3::theta::r_munu(1, 0, trunc)?,
    ])
}

/// Product of the 36 even theta constants, known on `trunc` (eighths).
pub fn chi18_raw(trunc: QKey) -> QSeries {
    let chars = Characteristic::even();
    let mut val = [0; 3];
    for c in &chars {
        val = crate::theta3::series::add_key(val, c.valuation());
    }
    // Each factor is needed only up to its own valuation plus the excess.
    let excess = crate::theta3::series::sub_key(trunc, val);
    let th: Vec<QSeries> = chars
        .iter()
        .map(|c| theta_constant(c, crate::theta3::series::add_key(c.valuation(), excess)))
        .collect();
    let refs: Vec<&QSeries> = th.iter().collect();
    QSeries::product(&refs, trunc)
}

/// chi18 as a scalar form, known on integral keys <= n, normalized so the
/// block at q1^2 q2^2 q3^2 equals `chi18_leading_block`.
pub fn chi18(n: QKey) -> Result<VectorValuedForm> {
    if n.iter().any(|&x| x < 2) {
        return Err(Error::Truncation { needed: [2, 2, 2], have: n });
    }
    let raw = chi18_raw(eighths(n)).with_units(1, 1)?.with_valuation([2, 2, 2])?;
    let block: Laurent = raw.block([2, 2, 2]).map(|b| b.terms().collect()).unwrap_or_default();
    let scale = proportionality(&chi18_leading_block(), &block)
        .ok_or_else(|| Error::Normalization("chi18 leading block is not proportional to the expected one".into()))?;
    VectorValuedForm::new([0, 0, 18], vec![raw], scale)
}

/// c with target = c * got, if it exists.
pub fn proportionality(target: &Laurent, got: &Laurent) -> Option<Rat> {
    let (e, g) = got.iter().next()?;
    let t = target.get(e)?;
    let c = Rat::new(BigInt::from(*t), BigInt::from(*g));
    if target.len() != got.len() {
        return None;
    }
    for (e, g) in got {
        let t = target.get(e)?;
        if Rat::from_integer(BigInt::from(*t)) != &c * Rat::from_integer(BigInt::from(*g)) {
            return None;
        }
    }
    Some(c)
}

/// Unnormalized coordinates: for each quartic multi-index I,
/// abar_I = -r01 r10 sum W^2 N_I [00] + r00 r10 sum W^2 N_I [01] + r00 r01 sum W^2 N_I [10],
/// where for a characteristic c of group (mu nu), W_c = r_{mu nu} / theta_c
/// and N_I = 2 C_I C_0 + sum_{k + k' = I, |k| = |k'| = 2} I!/(k! k'!) C_k C_k'.
/// This equals r00 r01 r10 (-r00 S00_I + r01 S01_I + r10 S10_I).
pub fn alpha_bar(trunc: QKey) -> Result<Vec<QSeries>> {
    let groups = [(0u8, 0u8, -1 as Coef), (0, 1, 1), (1, 0, 1)];
    let r = r_triple(trunc)?;
    let mut total: Vec<Option<QSeries>> = vec![None; 15];
    for (gi, &(mu, nu, sign)) in groups.iter().enumerate() {
        let chars = group_chars(mu, nu);
        let jets: Vec<_> = chars.iter().map(|c| theta_jet(c, trunc)).collect();
        let mut inner: Vec<Option<QSeries>> = vec![None; 15];
        for ci in 0..4 {
            let others: Vec<&QSeries> =
                (0..4).filter(|&j| j != ci).map(|j| jets[j].get([0, 0, 0])).collect();
            let w = QSeries::product(&others, trunc);
            let w2 = w.mul_to(&w, trunc);
            let jet = &jets[ci];
            let quad = monomials3(2);
            let mut pairs: BTreeMap<([u8; 3], [u8; 3]), QSeries> = BTreeMap::new();
            for (a, ka) in quad.iter().enumerate() {
                for kb in &quad[a..] {
                    pairs.insert((*ka, *kb), jet.get(*ka).mul_to(jet.get(*kb), trunc));
                }
            }
            let c0 = jet.get([0, 0, 0]);
            for (ii, i) in QUARTIC_EXPS.iter().enumerate() {
                let mut n = jet.get(*i).mul_to(c0, trunc).scale(2);
                for ka in &quad {
                    if (0..3).all(|j| ka[j] <= i[j]) {
                        let kb = [i[0] - ka[0], i[1] - ka[1], i[2] - ka[2]];
                        let key = if ka >= &kb { (*ka, kb) } else { (kb, *ka) };
                        let p = pairs.get(&key).or_else(|| pairs.get(&(key.1, key.0))).unwrap();
                        n = n.add(&p.scale(multinomial_pair(*i, *ka, kb)));
                    }
                }
                let t = w2.mul_to(&n, trunc);
                inner[ii] = Some(match inner[ii].take() {
                    Some(x) => x.add(&t),
                    None => t,
                });
            }
        }
        let prefactor = match gi {
            0 => r[1].mul_to(&r[2], trunc),
            1 => r[0].mul_to(&r[2], trunc),
            _ => r[0].mul_to(&r[1], trunc),
        };
        for ii in 0..15 {
            let t = prefactor.mul_to(inner[ii].as_ref().unwrap(), trunc).scale(sign);
            total[ii] = Some(match total[ii].take() {
                Some(x) => x.add(&t),
                None => t,
            });
        }
    }
    Ok(total.into_iter().map(|x| x.unwrap()).collect())
}

/// The same coordinates through the s-jets, as an independent route.
pub fn alpha_bar_via_s(trunc: QKey) -> Result<Vec<QSeries>> {
    let r = r_triple(trunc)?;
    let s00 = crate::theta3::theta::s_munu_jet(0, 0, trunc)?;
    let s01 = crate::theta3::theta::s_munu_jet(0, 1, trunc)?;
    let s10 = crate::theta3::theta::s_munu_jet(1, 0, trunc)?;
    let pre = QSeries::product(&[&r[0], &r[1], &r[2]], trunc);
    let mut out = Vec::new();
    for i in QUARTIC_EXPS {
        let a = r[0].mul_to(&s00[&i], trunc).scale(-1);
        let b = r[1].mul_to(&s01[&i], trunc);
        let c = r[2].mul_to(&s10[&i], trunc);
        out.push(pre.mul_to(&a.add(&b).add(&c), trunc));
    }
    Ok(out)
}

/// How the computed coordinates relate to the displayed ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Chi408Calibration {
    /// displayed_I = kappa * n_I^e * abar_I with e = 1 if `with_multinomial`.
    pub kappa: Rat,
    pub with_multinomial: bool,
}

/// a([1,1,1;0,0,0]) of chi_{4,0,8}.
pub const A_N0: [i64; 15] = [0, 0, 0, 4, 0, 4, 0, 0, 0, 0, 0, 0, 4, 0, 0];
/// a([2,2,2;0,0,0]) of chi_{4,0,8}, used to fix the multinomial convention.
pub const A_2N0: [i64; 15] = [-512, 0, 0, -2816, 0, -2816, 0, 0, 0, 0, -512, 0, -2816, 0, -512];

/// Unnormalized coordinates abar_I in integral units, known on keys <= n,
/// with the calibration relating them to chi_{4,0,8}.
pub fn alpha_series(n: QKey) -> Result<(Vec<QSeries>, Chi408Calibration)> {
    if n.iter().any(|&x| x < 2) {
        return Err(Error::Truncation { needed: [2, 2, 2], have: n });
    }
    let abar = alpha_bar(eighths(n))?;
    let abar: Vec<QSeries> = abar
        .into_iter()
        .map(|s| s.with_units(1, 1).and_then(|s| s.with_valuation([1, 1, 1])))
        .collect::<Result<_>>()?;
    let cal = calibrate(&abar)?;
    Ok((abar, cal))
}

impl Chi408Calibration {
    /// Factor c_I with a_I = c_I abar_I, where chi_{4,0,8} = sum n_I a_I z^I.
    pub fn quartic_factor(&self, i: usize) -> Rat {
        if self.with_multinomial {
            self.kappa.clone()
        } else {
            &self.kappa / Rat::from_integer(BigInt::from(crate::rep3::N_I[i]))
        }
    }
}

/// chi_{4,0,8} known on integral keys <= n, in displayed coordinates.
pub fn chi408(n: QKey) -> Result<(VectorValuedForm, Chi408Calibration)> {
    let (abar, cal) = alpha_series(n)?;
    let coords = if cal.with_multinomial {
        abar.iter().zip(crate::rep3::N_I.iter()).map(|(s, &m)| s.scale(m as Coef)).collect()
    } else {
        abar
    };
    Ok((VectorValuedForm::new([4, 0, 8], coords, cal.kappa.clone())?, cal))
}

/// chi18 with coprime integral coefficients, and the scalar c with
/// chi18 = c * series.
pub fn chi18_primitive(n: QKey) -> Result<(QSeries, Rat)> {
    let f = chi18(n)?;
    let s = &f.coords[0];
    let g = s.content();
    let prim = s.div_exact(g)?;
    Ok((prim, &f.scale * Rat::from_integer(BigInt::from(g))))
}

fn calibrate(abar: &[QSeries]) -> Result<Chi408Calibration> {
    let at = |k: QKey| -> Vec<Coef> { abar.iter().map(|s| s.coeff(k, [0, 0, 0])).collect() };
    let c1 = at([1, 1, 1]);
    let c2 = at([2, 2, 2]);
    for with_multinomial in [false, true] {
        let f = |i: usize| if with_multinomial { crate::rep3::N_I[i] as Coef } else { 1 };
        let mut kappa: Option<Rat> = None;
        let mut ok = true;
        for (target, got) in [(&A_N0, &c1), (&A_2N0, &c2)] {
            for i in 0..15 {
                let g = got[i] * f(i);
                let t = target[i] as Coef;
                match (g == 0, t == 0) {
                    (true, true) => {}
                    (true, false) | (false, true) => ok = false,
                    (false, false) => {
                        let k = Rat::new(BigInt::from(t), BigInt::from(g));
                        match &kappa {
                            None => kappa = Some(k),
                            Some(x) if *x == k => {}
                            _ => ok = false,
                        }
                    }
                }
            }
        }
        if ok {
            if let Some(kappa) = kappa {
                if !kappa.is_zero() {
                    return Ok(Chi408Calibration { kappa, with_multinomial });
                }
            }
        }
    }
    Err(Error::Normalization("computed coordinates do not match the reference coefficients".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_relation_and_quadratic_identities() {
        let t = [8, 8, 8];
        let [r00, r01, r10] = r_triple(t).unwrap();
        assert!(r00.sub(&r01).sub(&r10).is_zero());
        let sq = |a: &QSeries| a.mul_to(a, t);
        let two = |a: &QSeries, b: &QSeries| a.mul_to(b, t).scale(2);
        assert!(sq(&r00).sub(&sq(&r01)).sub(&sq(&r10)).sub(&two(&r01, &r10)).is_zero());
        assert!(sq(&r00).sub(&sq(&r01)).add(&sq(&r10)).sub(&two(&r00, &r10)).is_zero());
        assert!(sq(&r00).add(&sq(&r01)).sub(&sq(&r10)).sub(&two(&r00, &r01)).is_zero());
        assert_eq!(r00.coeff([0; 3], [0; 3]), 1);
    }

    #[test]
    fn chi408_calibration_and_order() {
        let (f, cal) = chi408([2, 2, 2]).unwrap();
        assert!(cal.with_multinomial);
        assert_eq!(f.order_at_infinity().unwrap(), 1);
        for (n, want) in [("1,1,1,0,0,0", A_N0), ("2,2,2,0,0,0", A_2N0)] {
            let a = f.fourier_coefficient(&n.parse().unwrap()).unwrap();
            let want: Vec<Rat> = want.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
            assert_eq!(a, want, "{n}");
        }
        assert!(f.semidefinite_violation().is_none());
    }

    #[test]
    fn chi18_normalization() {
        let f = chi18([3, 3, 3]).unwrap();
        assert_eq!(f.order_at_infinity().unwrap(), 2);
        let lead: Laurent = f.coords[0].block([2, 2, 2]).unwrap().terms().collect();
        let scaled: Laurent = lead.iter().map(|(e, c)| (*e, c * 1)).collect();
        assert_eq!(proportionality(&chi18_leading_block(), &scaled), Some(f.scale.clone()));
    }

    #[test]
    fn r11_vanishes() {
        assert!(crate::theta3::theta::r_munu(1, 1, [16; 3]).unwrap().is_zero());
    }

    #[test]
    fn two_routes_to_alpha_agree() {
        let t = [16, 16, 16];
        let a = alpha_bar(t).unwrap();
        let b = alpha_bar_via_s(t).unwrap();
        for i in 0..15 {
            assert_eq!(a[i].first_difference(&b[i]), None, "coordinate {i}");
        }
    }
}
