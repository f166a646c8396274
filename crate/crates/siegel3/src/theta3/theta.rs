//! Theta constants with characteristics and their z-jets.
//!
//! For X = 2l + a the term of theta[a;b](tau, z) is
//! i^(X.b) q^(X_i^2/8) u^(X1X2/4) v^(X1X3/4) w^(X2X3/4) e^(pi i X.z),
//! so keys are in eighths (q) and quarters (u, v, w). The z^k jet
//! coefficient is stored as C_k = sum i^(X.b) X^k; the Taylor coefficient
//! is (pi i)^|k| / k! * C_k.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::theta3::block::Coef;
use crate::theta3::series::{QKey, QSeries};

pub const QDEN: i32 = 8;
pub const UDEN: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Characteristic {
    pub a: [u8; 3],
    pub b: [u8; 3],
}

impl Characteristic {
    pub fn new(a: [u8; 3], b: [u8; 3]) -> Self {
        Characteristic { a, b }
    }

    pub fn is_even(&self) -> bool {
        (0..3).map(|i| self.a[i] * self.b[i]).sum::<u8>() % 2 == 0
    }

    /// All 64 characteristics.
    pub fn all() -> Vec<Characteristic> {
        let mut v = Vec::with_capacity(64);
        for m in 0..64u8 {
            let bit = |k: u8| (m >> k) & 1;
            v.push(Characteristic::new([bit(5), bit(4), bit(3)], [bit(2), bit(1), bit(0)]));
        }
        v
    }

    pub fn even() -> Vec<Characteristic> {
        let v: Vec<_> = Characteristic::all().into_iter().filter(|c| c.is_even()).collect();
        assert_eq!(v.len(), 36);
        v
    }

    /// Lower bound of the q-exponents, in eighths.
    pub fn valuation(&self) -> QKey {
        [self.a[0] as i32, self.a[1] as i32, self.a[2] as i32]
    }
}

/// Multi-indices k with |k| <= 4, ordered by degree then lex descending.
pub fn jet_indices() -> Vec<[u8; 3]> {
    (0..=4).flat_map(crate::rep3::monomials3).collect()
}

fn lattice_points(ch: &Characteristic, trunc: QKey) -> Vec<[i32; 3]> {
    let range = |i: usize| {
        let a = ch.a[i] as i32;
        let mut xs = Vec::new();
        let mut x = a;
        while x * x <= trunc[i] {
            xs.push(x);
            if x != 0 {
                xs.push(-x);
            }
            x += 2;
        }
        xs
    };
    let (r0, r1, r2) = (range(0), range(1), range(2));
    let mut out = Vec::new();
    for &x0 in &r0 {
        for &x1 in &r1 {
            for &x2 in &r2 {
                out.push([x0, x1, x2]);
            }
        }
    }
    out
}

/// Real part of i^m, or imaginary part when `imag`.
fn phase(m: i32, imag: bool) -> Coef {
    let m = m.rem_euclid(4);
    if imag {
        [0, 1, 0, -1][m as usize]
    } else {
        [1, 0, -1, 0][m as usize]
    }
}

fn term_key(x: [i32; 3]) -> (QKey, [i32; 3]) {
    ([x[0] * x[0], x[1] * x[1], x[2] * x[2]], [x[0] * x[1], x[0] * x[2], x[1] * x[2]])
}

/// Theta constant theta[a;b](tau) known on the box `trunc` (eighths).
/// Odd characteristics give the zero series.
pub fn theta_constant(ch: &Characteristic, trunc: QKey) -> QSeries {
    let terms = lattice_points(ch, trunc).into_iter().map(|x| {
        let (k, e) = term_key(x);
        let m: i32 = (0..3).map(|i| x[i] * ch.b[i] as i32).sum();
        (k, e, phase(m, false))
    });
    QSeries::from_terms(QDEN, UDEN, trunc, ch.valuation(), terms)
}

/// z-jet of a theta function up to total degree 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaJet {
    pub ch: Characteristic,
    /// True when the stored series are imaginary parts (odd characteristics).
    pub imag: bool,
    pub coeffs: BTreeMap<[u8; 3], QSeries>,
}

impl ThetaJet {
    pub fn get(&self, k: [u8; 3]) -> &QSeries {
        &self.coeffs[&k]
    }
}

pub fn theta_jet(ch: &Characteristic, trunc: QKey) -> ThetaJet {
    let imag = !ch.is_even();
    let pts = lattice_points(ch, trunc);
    let mut coeffs = BTreeMap::new();
    for k in jet_indices() {
        let terms = pts.iter().map(|x| {
            let (key, e) = term_key(*x);
            let m: i32 = (0..3).map(|i| x[i] * ch.b[i] as i32).sum();
            let mut c = phase(m, imag);
            for i in 0..3 {
                c *= (x[i] as Coef).pow(k[i] as u32);
            }
            (key, e, c)
        });
        coeffs.insert(k, QSeries::from_terms(QDEN, UDEN, trunc, ch.valuation(), terms));
    }
    ThetaJet { ch: *ch, imag, coeffs }
}

/// Independent brute-force lattice sum over |l_i| <= bound, as a map
/// (key, uvw-exponent) -> coefficient, restricted to the box.
pub fn dense_theta_oracle(ch: &Characteristic, k: [u8; 3], bound: i32, trunc: QKey) -> BTreeMap<(QKey, [i32; 3]), Coef> {
    let mut out: BTreeMap<(QKey, [i32; 3]), Coef> = BTreeMap::new();
    let imag = !ch.is_even();
    for l0 in -bound..=bound {
        for l1 in -bound..=bound {
            for l2 in -bound..=bound {
                let x = [2 * l0 + ch.a[0] as i32, 2 * l1 + ch.a[1] as i32, 2 * l2 + ch.a[2] as i32];
                let q = [x[0] * x[0], x[1] * x[1], x[2] * x[2]];
                if q[0] > trunc[0] || q[1] > trunc[1] || q[2] > trunc[2] {
                    continue;
                }
                let e = [x[0] * x[1], x[0] * x[2], x[1] * x[2]];
                // i^m via explicit complex multiplication
                let (mut re, mut im): (Coef, Coef) = (1, 0);
                for i in 0..3 {
                    for _ in 0..(x[i] * ch.b[i] as i32).rem_euclid(4) {
                        let t = re;
                        re = -im;
                        im = t;
                    }
                }
                let mut c = if imag { im } else { re };
                for i in 0..3 {
                    c *= (x[i] as Coef).pow(k[i] as u32);
                }
                *out.entry((q, e)).or_insert(0) += c;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// The four characteristics [mu 0 0; nu alpha beta].
pub fn group_chars(mu: u8, nu: u8) -> [Characteristic; 4] {
    [
        Characteristic::new([mu, 0, 0], [nu, 0, 0]),
        Characteristic::new([mu, 0, 0], [nu, 0, 1]),
        Characteristic::new([mu, 0, 0], [nu, 1, 0]),
        Characteristic::new([mu, 0, 0], [nu, 1, 1]),
    ]
}

/// r_{mu nu} = product of the four theta constants of the group.
pub fn r_munu(mu: u8, nu: u8, trunc: QKey) -> Result<QSeries> {
    let chars = group_chars(mu, nu);
    if chars.iter().any(|c| !c.is_even()) {
        // The product of odd theta constants vanishes identically.
        let val = chars.iter().fold([0; 3], |v, c| crate::theta3::series::add_key(v, c.valuation()));
        return Ok(QSeries::zero(QDEN, UDEN, trunc, val));
    }
    let th: Vec<QSeries> = chars.iter().map(|c| theta_constant(c, trunc)).collect();
    let refs: Vec<&QSeries> = th.iter().collect();
    Ok(QSeries::product(&refs, trunc))
}

/// Normalized theta constant: theta = c q^v U with U a unit. Returns
/// (c, v, U) for characteristics whose lowest block is a single monomial.
pub fn unit_part(theta: &QSeries, ch: &Characteristic) -> Result<(Coef, QKey, QSeries)> {
    let v = ch.valuation();
    let lead = theta
        .block(v)
        .ok_or_else(|| Error::Invalid("theta constant has no leading block".into()))?;
    let terms: Vec<_> = lead.terms().collect();
    if terms.len() != 1 || terms[0].0 != [0; 3] {
        return Err(Error::Invalid("leading block of theta constant is not a constant".into()));
    }
    let c = terms[0].1;
    let u = theta.div_exact(c)?.shift([-v[0], -v[1], -v[2]], [0; 3]);
    Ok((c, v, u))
}

/// Jet of s_{mu nu} = sum over the group of (theta(z)/theta(0))^2, in
/// even z-degrees 0, 2, 4. The stored coefficient S_I satisfies
/// d^I s / (pi i)^|I| = S_I.
pub fn s_munu_jet(mu: u8, nu: u8, trunc: QKey) -> Result<BTreeMap<[u8; 3], QSeries>> {
    let mut out: BTreeMap<[u8; 3], QSeries> = BTreeMap::new();
    for ch in group_chars(mu, nu) {
        if !ch.is_even() {
            return Err(Error::Invalid("s jets are defined for even characteristics".into()));
        }
        let jet = theta_jet(&ch, trunc);
        let (c, v, unit) = unit_part(jet.get([0, 0, 0]), &ch)?;
        let w = unit.inverse_unit()?;
        let neg = [-v[0], -v[1], -v[2]];
        // P_k = C_k / theta_0, for |k| = 2, 4 (odd k vanish).
        let mut p: BTreeMap<[u8; 3], QSeries> = BTreeMap::new();
        for k in jet_indices() {
            let deg: u8 = k.iter().sum();
            if deg == 0 || deg % 2 == 1 {
                continue;
            }
            let ck = jet.get(k).div_exact(c)?.shift(neg, [0; 3]);
            p.insert(k, ck.mul_to(&w, trunc));
        }
        let t = p.values().next().unwrap().trunc;
        let one = QSeries::one(QDEN, UDEN, t);
        add_into(&mut out, [0, 0, 0], &one.scale(1));
        for k in crate::rep3::monomials3(2) {
            add_into(&mut out, k, &p[&k].scale(2));
        }
        for i in crate::rep3::monomials3(4) {
            let mut acc = p[&i].scale(2);
            for k in crate::rep3::monomials3(2) {
                if (0..3).all(|j| k[j] <= i[j]) {
                    let kk = [i[0] - k[0], i[1] - k[1], i[2] - k[2]];
                    let m = multinomial_pair(i, k, kk);
                    acc = acc.add(&p[&k].mul_to(&p[&kk], t).scale(m));
                }
            }
            add_into(&mut out, i, &acc);
        }
    }
    Ok(out)
}

fn add_into(m: &mut BTreeMap<[u8; 3], QSeries>, k: [u8; 3], s: &QSeries) {
    let v = match m.get(&k) {
        Some(x) => x.add(s),
        None => s.clone(),
    };
    m.insert(k, v);
}

/// I! / (k! k'!).
pub fn multinomial_pair(i: [u8; 3], k: [u8; 3], kk: [u8; 3]) -> Coef {
    let f = |n: u8| (1..=n as Coef).product::<Coef>();
    let num: Coef = i.iter().map(|&x| f(x)).product();
    let den: Coef = k.iter().map(|&x| f(x)).product::<Coef>() * kk.iter().map(|&x| f(x)).product::<Coef>();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_parity() {
        assert_eq!(Characteristic::even().len(), 36);
        let odd = Characteristic::new([1, 0, 0], [1, 0, 0]);
        assert!(theta_constant(&odd, [32; 3]).is_zero());
    }

    #[test]
    fn matches_dense_oracle() {
        let t = [32, 32, 32];
        for ch in Characteristic::all() {
            let jet = theta_jet(&ch, t);
            for (k, s) in &jet.coeffs {
                assert_eq!(s.terms(), dense_theta_oracle(&ch, *k, 4, t), "{ch:?} {k:?}");
            }
            assert_eq!(jet.get([0, 0, 0]), &theta_constant(&ch, t));
        }
    }

    #[test]
    fn jets_have_parity() {
        let t = [24, 24, 24];
        for ch in Characteristic::all() {
            let jet = theta_jet(&ch, t);
            for (k, s) in &jet.coeffs {
                let odd_degree = k.iter().sum::<u8>() % 2 == 1;
                if odd_degree == ch.is_even() {
                    assert!(s.is_zero(), "{ch:?} {k:?}");
                }
            }
        }
    }

    #[test]
    fn leading_terms() {
        let t = [16, 16, 16];
        let th0 = theta_constant(&Characteristic::new([0, 0, 0], [0, 0, 0]), t);
        assert_eq!(th0.coeff([0, 0, 0], [0, 0, 0]), 1);
        assert_eq!(th0.coeff([4, 0, 0], [0, 0, 0]), 2);
        assert_eq!(th0.coeff([4, 4, 0], [4, 0, 0]), 2);
        let th1 = theta_constant(&Characteristic::new([1, 0, 0], [0, 0, 0]), t);
        assert_eq!(th1.coeff([1, 0, 0], [0, 0, 0]), 2);
        assert_eq!(th1.blocks.keys().next(), Some(&[1, 0, 0]));
    }

    #[test]
    fn s_jet_constant_term() {
        let s = s_munu_jet(1, 0, [16, 16, 16]).unwrap();
        assert_eq!(s[&[0, 0, 0]].terms(), QSeries::one(QDEN, UDEN, [16; 3]).scale(4).terms());
        for k in [[1, 0, 0], [2, 1, 0], [0, 0, 3]] {
            assert!(!s.contains_key(&k));
        }
        let s = s_munu_jet(0, 1, [16, 16, 16]).unwrap();
        assert_eq!(s[&[0, 0, 0]].coeff([0; 3], [0; 3]), 4);
    }
}
