//! Concomitants: equivariant polynomial maps from quartics to
//! Sym^a(x, y, z) (x) Sym^b(x^, y^, z^), built from a highest weight vector.
//!
//! Conventions: x_k carries torus weight -e_k, x^ = y^z, y^ = z^x, z^ = x^y.
//! The highest weight vector P of weight lam sits at the coordinate of the
//! lowest-weight monomial x^a z^^b, a = l1 - l2, b = l2 - l3.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::kernel_rat;
use crate::rep3::apoly::{AMono, APoly};
use crate::rep3::{gl_operator, monomials3, multinomial, WeightGL3};
use crate::sparse::{add_scaled, unit, Echelon, SVec};
use crate::Rat;

/// Monomial x^K x^^L stored as [K0, K1, K2, L0, L1, L2].
pub type XMono = [u8; 6];

/// One coordinate of a concomitant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcCoord {
    pub xmon: [u8; 3],
    pub xhmon: [u8; 3],
    pub poly: APoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concomitant {
    pub d: u32,
    pub lambda: WeightGL3,
    pub index: usize,
    pub coords: Vec<ConcCoord>,
}

/// Index pairs of the wedge basis: x^ = e1^e2, y^ = e2^e0, z^ = e0^e1.
pub const WEDGE_PAIRS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

fn wedge_to_hat(a: usize, b: usize) -> Option<(usize, i64)> {
    for (h, &(p, q)) in WEDGE_PAIRS.iter().enumerate() {
        if (a, b) == (p, q) {
            return Some((h, 1));
        }
        if (a, b) == (q, p) {
            return Some((h, -1));
        }
    }
    None
}

/// Image of a single x-side variable (0..2: x, y, z; 3..5: hats) under E_ij.
fn xvar_image(i: usize, j: usize, v: usize) -> Vec<(usize, i64)> {
    if v < 3 {
        if v == i {
            vec![(j, -1)]
        } else {
            vec![]
        }
    } else {
        let (p, q) = WEDGE_PAIRS[v - 3];
        let mut out = Vec::new();
        // E(e_p ^ e_q) = E(e_p) ^ e_q + e_p ^ E(e_q), E e_i = -e_j.
        if p == i {
            if let Some((h, s)) = wedge_to_hat(j, q) {
                out.push((3 + h, -s));
            }
        }
        if q == i {
            if let Some((h, s)) = wedge_to_hat(p, j) {
                out.push((3 + h, -s));
            }
        }
        out
    }
}

/// E_ij acting as a derivation on x-side polynomials.
pub fn x_operator(i: usize, j: usize, p: &SVec<XMono>) -> SVec<XMono> {
    let mut out = SVec::new();
    for (m, c) in p {
        for v in 0..6 {
            if m[v] == 0 {
                continue;
            }
            for (t, s) in xvar_image(i, j, v) {
                let mut nm = *m;
                nm[v] -= 1;
                nm[t] += 1;
                let k = Rat::from_integer(BigInt::from(s * m[v] as i64));
                add_scaled(&mut out, &unit(nm), &(c * k));
            }
        }
    }
    out
}

/// Torus weight of an x-side monomial.
pub fn xmono_weight(m: &XMono) -> [i64; 3] {
    let mut w = [0i64; 3];
    for k in 0..3 {
        w[k] -= m[k] as i64;
    }
    for (h, &(p, q)) in WEDGE_PAIRS.iter().enumerate() {
        w[p] -= m[3 + h] as i64;
        w[q] -= m[3 + h] as i64;
    }
    w
}

/// All coordinate monomials for (a, b), ordered with the x-monomial outer
/// and the hat-monomial inner, both lexicographically descending.
pub fn coordinate_monomials(a: usize, b: usize) -> Vec<XMono> {
    let mut out = Vec::new();
    for k in monomials3(a) {
        for l in monomials3(b) {
            out.push([k[0], k[1], k[2], l[0], l[1], l[2]]);
        }
    }
    out
}

fn add3(w: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [w[0] + v[0], w[1] + v[1], w[2] + v[2]]
}

const RAISE: [(usize, usize, [i64; 3]); 2] = [(0, 1, [1, -1, 0]), (1, 2, [0, 1, -1])];
const LOWER: [(usize, usize, [i64; 3]); 2] = [(1, 0, [-1, 1, 0]), (2, 1, [0, -1, 1])];

/// Span of all words in `ops` applied to a seed, split by weight.
fn generate<K: Ord + Copy>(
    seed: SVec<K>,
    seed_weight: [i64; 3],
    ops: &[(usize, usize, [i64; 3]); 2],
    apply: &dyn Fn(usize, usize, &SVec<K>) -> SVec<K>,
) -> BTreeMap<[i64; 3], Echelon<K>> {
    let mut spaces: BTreeMap<[i64; 3], Echelon<K>> = BTreeMap::new();
    let mut e = Echelon::default();
    e.insert(&seed);
    spaces.insert(seed_weight, e);
    let mut frontier = vec![seed_weight];
    while !frontier.is_empty() {
        let mut next: Vec<[i64; 3]> = Vec::new();
        for w in frontier {
            let vecs: Vec<SVec<K>> = spaces[&w].rows.iter().map(|(_, v)| v.clone()).collect();
            for &(i, j, shift) in ops {
                let tw = add3(w, shift);
                for v in &vecs {
                    let img = apply(i, j, v);
                    if img.is_empty() {
                        continue;
                    }
                    let sp = spaces.entry(tw).or_default();
                    if sp.insert(&img) && !next.contains(&tw) {
                        next.push(tw);
                    }
                }
            }
        }
        // Processing strictly by level keeps each weight space complete
        // before it is used as a source.
        next.sort();
        frontier = next;
    }
    spaces
}

fn apoly_op(i: usize, j: usize, v: &SVec<AMono>) -> SVec<AMono> {
    gl_operator(i, j, &APoly { terms: v.clone() }).terms
}

impl Concomitant {
    pub fn a_degree(&self) -> usize {
        (self.lambda.0[0] - self.lambda.0[1]) as usize
    }

    pub fn b_degree(&self) -> usize {
        (self.lambda.0[1] - self.lambda.0[2]) as usize
    }

    pub fn coord(&self, xmon: [u8; 3], xhmon: [u8; 3]) -> Option<&APoly> {
        self.coords.iter().find(|c| c.xmon == xmon && c.xhmon == xhmon).map(|c| &c.poly)
    }

    /// Apply a scalar to every coordinate.
    pub fn scale(&self, s: &Rat) -> Concomitant {
        let mut c = self.clone();
        for x in c.coords.iter_mut() {
            x.poly = x.poly.scale(s);
        }
        c
    }

    /// Coordinate-wise linear combination of concomitants of the same type.
    pub fn combine(parts: &[(Rat, &Concomitant)]) -> Concomitant {
        let mut out = parts[0].1.scale(&parts[0].0);
        for (s, c) in &parts[1..] {
            for (o, x) in out.coords.iter_mut().zip(c.coords.iter()) {
                o.poly.add_scaled(&x.poly, s);
            }
        }
        out
    }

    /// Substitute the coefficients of a quartic.
    pub fn evaluate(&self, q: &crate::conc::TernaryQuartic) -> Vec<(([u8; 3], [u8; 3]), Rat)> {
        self.coords.iter().map(|c| ((c.xmon, c.xhmon), c.poly.eval_rat(&q.a))).collect()
    }

    /// Product with a covariant (no x^ part), as a polynomial in x and x^.
    /// The result is the concomitant of weight lambda + [a', 0, 0].
    pub fn product_with_covariant(&self, other: &Concomitant) -> Result<Concomitant> {
        if other.b_degree() != 0 {
            return Err(Error::Invalid("product only supported with a covariant factor".into()));
        }
        let a = self.a_degree() + other.a_degree();
        let b = self.b_degree();
        let mut acc: BTreeMap<XMono, APoly> = BTreeMap::new();
        for c1 in &self.coords {
            for c2 in &other.coords {
                let m = [
                    c1.xmon[0] + c2.xmon[0],
                    c1.xmon[1] + c2.xmon[1],
                    c1.xmon[2] + c2.xmon[2],
                    c1.xhmon[0],
                    c1.xhmon[1],
                    c1.xhmon[2],
                ];
                let e = acc.entry(m).or_default();
                *e = e.add(&c1.poly.mul(&c2.poly));
            }
        }
        let coords = coordinate_monomials(a, b)
            .into_iter()
            .map(|m| ConcCoord {
                xmon: [m[0], m[1], m[2]],
                xhmon: [m[3], m[4], m[5]],
                poly: acc.remove(&m).unwrap_or_default(),
            })
            .collect();
        let l3 = self.lambda.0[2] + other.lambda.0[2];
        let lambda = WeightGL3([l3 + (a + b) as i64, l3 + b as i64, l3]);
        Ok(Concomitant { d: self.d + other.d, lambda, index: 0, coords })
    }
}

/// Fill all coordinates of the concomitant generated by a highest weight
/// vector, normalized so that the coordinate at x^a z^^b equals `hwv`.
pub fn expand_concomitant(d: u32, lam: &WeightGL3, hwv: &APoly, index: usize) -> Result<Concomitant> {
    if hwv.is_zero() {
        return Err(Error::ZeroConcomitant);
    }
    if hwv.homogeneous_degree() != Some(d) || hwv.weight() != Some(lam.0) {
        return Err(Error::Invalid(format!("polynomial is not homogeneous of degree {d} and weight {lam}")));
    }
    if !crate::conc::hwv::is_highest_weight(hwv) {
        return Err(Error::NotHighestWeight);
    }
    let [l1, l2, l3] = lam.0;
    let (a, b) = ((l1 - l2) as usize, (l2 - l3) as usize);
    let m0: XMono = [a as u8, 0, 0, 0, 0, b as u8];
    let m0_weight = xmono_weight(&m0);

    let mspaces = generate(hwv.terms.clone(), lam.0, &LOWER, &apoly_op);
    let cspaces = generate(unit(m0), m0_weight, &RAISE, &x_operator);

    // Unknowns: pairs (M-weight, M-index, C-index) with total weight (l3,l3,l3).
    let total = [l3, l3, l3];
    let mut unknowns: Vec<([i64; 3], usize, usize)> = Vec::new();
    for (w, me) in &mspaces {
        let cw = [total[0] - w[0], total[1] - w[1], total[2] - w[2]];
        if let Some(ce) = cspaces.get(&cw) {
            for i in 0..me.len() {
                for j in 0..ce.len() {
                    unknowns.push((*w, i, j));
                }
            }
        }
    }

    // Invariance under E12 and E23: sum_u c_u (E B_i (x) D_j + B_i (x) E D_j) = 0.
    let mut eqs: HashMap<(usize, [i64; 3], usize, usize), Vec<(usize, Rat)>> = HashMap::new();
    let mut mimg: HashMap<(usize, [i64; 3], usize), Vec<Rat>> = HashMap::new();
    let mut cimg: HashMap<(usize, [i64; 3], usize), Vec<Rat>> = HashMap::new();
    for (opk, &(i, j, shift)) in RAISE.iter().enumerate() {
        for (u, &(w, bi, dj)) in unknowns.iter().enumerate() {
            let cw = [total[0] - w[0], total[1] - w[1], total[2] - w[2]];
            let tw = add3(w, shift);
            let tcw = add3(cw, shift);
            let mi = mimg.entry((opk, w, bi)).or_insert_with(|| {
                let img = apoly_op(i, j, mspaces[&w].vector(bi));
                if img.is_empty() {
                    return Vec::new();
                }
                mspaces.get(&tw).and_then(|e| e.coords(&img)).expect("M is closed under raising")
            });
            for (k, x) in mi.iter().enumerate() {
                if !x.is_zero() {
                    eqs.entry((opk, tw, k, dj)).or_default().push((u, x.clone()));
                }
            }
            let ci = cimg.entry((opk, cw, dj)).or_insert_with(|| {
                let img = x_operator(i, j, cspaces[&cw].vector(dj));
                if img.is_empty() {
                    return Vec::new();
                }
                cspaces.get(&tcw).and_then(|e| e.coords(&img)).expect("C is closed under raising")
            });
            for (l, x) in ci.iter().enumerate() {
                if !x.is_zero() {
                    eqs.entry((opk, w, bi, l)).or_default().push((u, x.clone()));
                }
            }
        }
    }
    let n = unknowns.len();
    let rows: Vec<Vec<Rat>> = eqs
        .into_values()
        .map(|terms| {
            let mut row = vec![Rat::zero(); n];
            for (u, x) in terms {
                row[u] += x;
            }
            row
        })
        .collect();
    let ker = kernel_rat(&rows, n);
    if ker.len() != 1 {
        return Err(Error::Normalization(format!("invariant pairing space has dimension {}", ker.len())));
    }
    let c = &ker[0];

    let mut coords_map: BTreeMap<XMono, SVec<AMono>> = BTreeMap::new();
    for (u, &(w, bi, dj)) in unknowns.iter().enumerate() {
        if c[u].is_zero() {
            continue;
        }
        let cw = [total[0] - w[0], total[1] - w[1], total[2] - w[2]];
        let bvec = mspaces[&w].vector(bi);
        for (m, x) in cspaces[&cw].vector(dj) {
            let e = coords_map.entry(*m).or_default();
            add_scaled(e, bvec, &(&c[u] * x));
        }
    }

    // Normalize at the lowest-weight monomial.
    let lead = coords_map.get(&m0).cloned().unwrap_or_default();
    let (hm, hc) = hwv.terms.iter().next_back().unwrap();
    let lc = lead.get(hm).cloned().unwrap_or_else(Rat::zero);
    if lc.is_zero() {
        return Err(Error::Normalization("leading coordinate vanishes".into()));
    }
    let s = hc / &lc;
    let lead_poly = APoly { terms: lead }.scale(&s);
    if &lead_poly != hwv {
        return Err(Error::Normalization("leading coordinate is not proportional to the highest weight vector".into()));
    }

    let coords = coordinate_monomials(a, b)
        .into_iter()
        .map(|m| ConcCoord {
            xmon: [m[0], m[1], m[2]],
            xhmon: [m[3], m[4], m[5]],
            poly: APoly { terms: coords_map.get(&m).cloned().unwrap_or_default() }.scale(&s),
        })
        .collect();
    Ok(Concomitant { d, lambda: *lam, index, coords })
}

/// The concomitant attached to the index-th highest weight vector of type (d, lam).
pub fn concomitant(d: u32, lam: &WeightGL3, index: usize) -> Result<Concomitant> {
    let hw = crate::conc::hwv::highest_weight_vectors(d, lam)?;
    if index >= hw.len() {
        return Err(Error::IndexOutOfRange { index, mult: hw.len() });
    }
    expand_concomitant(d, lam, &hw[index], index)
}

/// The universal quartic as a concomitant of type (1, [4,0,0]).
pub fn universal_quartic() -> Concomitant {
    concomitant(1, &WeightGL3::new(4, 0, 0), 0).expect("universal quartic")
}

/// Full contraction of x against x^ with the apolar pairing
/// <x^K, x^^K> = 1 / multinomial(K).
pub fn pair(c1: &Concomitant, c2: &Concomitant) -> Result<Concomitant> {
    let (a1, b1, a2, b2) = (c1.a_degree(), c1.b_degree(), c2.a_degree(), c2.b_degree());
    if a1 != b2 || b1 != a2 {
        return Err(Error::IncompatiblePairing(format!(
            "types ({a1},{b1}) and ({a2},{b2}) do not admit a full contraction"
        )));
    }
    let mut out = APoly::zero();
    for x in &c1.coords {
        let Some(y) = c2.coord(x.xhmon, x.xmon) else { continue };
        let w = Rat::new(BigInt::one(), BigInt::from(multinomial(x.xmon) * multinomial(x.xhmon)));
        out.add_scaled(&x.poly.mul(y), &w);
    }
    let d = c1.d + c2.d;
    let k = 4 * d as i64 / 3;
    Ok(Concomitant {
        d,
        lambda: WeightGL3([k, k, k]),
        index: 0,
        coords: vec![ConcCoord { xmon: [0, 0, 0], xhmon: [0, 0, 0], poly: out }],
    })
}

// JSON form.

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    mono: Vec<u8>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct JsonCoord {
    xmon: [u8; 3],
    xhmon: [u8; 3],
    poly: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonConc {
    d: u32,
    lambda: [i64; 3],
    index: usize,
    coords: Vec<JsonCoord>,
}

impl Concomitant {
    pub fn to_json(&self) -> Result<String> {
        let j = JsonConc {
            d: self.d,
            lambda: self.lambda.0,
            index: self.index,
            coords: self
                .coords
                .iter()
                .map(|c| JsonCoord {
                    xmon: c.xmon,
                    xhmon: c.xhmon,
                    poly: c
                        .poly
                        .terms
                        .iter()
                        .map(|(m, x)| JsonTerm { mono: m.to_vec(), coef: crate::json::rat_to_string(x) })
                        .collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Concomitant> {
        let j: JsonConc = serde_json::from_str(s)?;
        let mut coords = Vec::with_capacity(j.coords.len());
        for c in j.coords {
            let mut poly = APoly::zero();
            for t in c.poly {
                if t.mono.len() != 15 {
                    return Err(Error::Invalid("monomial exponent vector must have 15 entries".into()));
                }
                let mut m = [0u8; 15];
                m.copy_from_slice(&t.mono);
                poly.add_term(m, crate::json::parse_rat(&t.coef)?);
            }
            coords.push(ConcCoord { xmon: c.xmon, xhmon: c.xhmon, poly });
        }
        Ok(Concomitant { d: j.d, lambda: WeightGL3(j.lambda), index: j.index, coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::TernaryQuartic;
    use crate::rep3::N_I;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn universal_quartic_coordinates() {
        let f = universal_quartic();
        assert_eq!(f.coords.len(), 15);
        for (k, c) in f.coords.iter().enumerate() {
            assert_eq!(c.xmon, crate::rep3::QUARTIC_EXPS[k]);
            assert_eq!(c.poly, APoly::var(k).scale(&r(N_I[k])));
        }
        let q = TernaryQuartic::fermat();
        let v = f.evaluate(&q);
        assert_eq!(v[0].1, r(1));
        assert_eq!(v[10].1, r(1));
        assert_eq!(v[3].1, r(0));
    }

    #[test]
    fn x_side_weights_shift() {
        for m in coordinate_monomials(2, 2) {
            let w = xmono_weight(&m);
            for &(i, j, s) in RAISE.iter().chain(LOWER.iter()) {
                for (nm, _) in x_operator(i, j, &unit(m)) {
                    assert_eq!(xmono_weight(&nm), add3(w, s));
                }
            }
        }
    }

    #[test]
    fn f_squared() {
        let f = universal_quartic();
        let f2 = concomitant(2, &WeightGL3::new(8, 0, 0), 0).unwrap();
        let prod = f.product_with_covariant(&f).unwrap();
        // The HWV a0^2 normalizes f2 to f^2 exactly.
        assert_eq!(f2.coords.len(), prod.coords.len());
        for (x, y) in f2.coords.iter().zip(prod.coords.iter()) {
            assert_eq!(x.poly, y.poly, "coordinate {:?}", x.xmon);
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = concomitant(2, &WeightGL3::new(6, 2, 0), 0).unwrap();
        let s = c.to_json().unwrap();
        assert_eq!(Concomitant::from_json(&s).unwrap(), c);
    }

    #[test]
    fn pairing_degree_check() {
        let f = universal_quartic();
        assert!(matches!(pair(&f, &f), Err(Error::IncompatiblePairing(_))));
    }

    fn proportional(p: &APoly, q: &APoly) -> Option<Rat> {
        let (m, c) = q.terms.iter().next()?;
        let s = p.coeff(m) / c;
        (p == &q.scale(&s)).then_some(s)
    }

    #[test]
    fn sigma_blocks() {
        let sigma = concomitant(2, &WeightGL3::new(4, 4, 0), 0).unwrap();
        let printed = [
            ([4, 0, 0], "a10a14 - 4a11a13 + 3a12^2"),
            ([3, 1, 0], "4a9a11 - 12a8a12 + 12a7a13 - 4a6a14"),
            ([3, 0, 1], "-4a9a10 + 12a8a11 - 12a7a12 + 4a6a13"),
            ([2, 2, 0], "6a5a12 - 12a4a13 + 6a3a14 - 12a7a9 + 12a8^2"),
        ];
        let mut scal = Vec::new();
        for (h, txt) in printed {
            let c = sigma.coord([0, 0, 0], h).unwrap();
            let s = proportional(c, &APoly::parse(txt).unwrap()).unwrap_or_else(|| panic!("{h:?}: {c}"));
            scal.push(s);
        }
        assert!(scal.iter().all(|s| s == &r(1)));
    }

    #[test]
    fn iota_from_pairing() {
        let f = universal_quartic();
        let sigma = concomitant(2, &WeightGL3::new(4, 4, 0), 0).unwrap();
        let iota = pair(&f, &sigma).unwrap();
        let printed = APoly::parse(
            "a0a10a14 - 4a0a11a13 + 3a0a12^2 + 4a1a11a9 - 12a1a12a8 + 12a1a13a7 - 4a1a14a6 - 4a10a2a9 \
             + 3a10a5^2 + 12a11a2a8 - 12a11a4a5 - 12a12a2a7 + 6a12a3a5 + 12a12a4^2 + 4a13a2a6 \
             - 12a13a3a4 + 3a14a3^2 - 12a3a7a9 + 12a3a8^2 + 12a4a6a9 - 12a4a7a8 - 12a5a6a8 + 12a5a7^2",
        )
        .unwrap();
        let s = proportional(&iota.coords[0].poly, &printed).expect("iota");
        assert_eq!(s, Rat::from_integer(BigInt::from(3)));
    }
}
