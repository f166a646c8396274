//! The Hecke operator T(2) on Fourier coefficients.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{sym_power_matrix, wedge2_matrix, Q};
use crate::linalg::inverse_rat;
use crate::siegel::form::{HalfIntegralMatrix, VectorValuedForm};
use crate::Rat;

pub type Mat3 = [[Rat; 3]; 3];

fn rat(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

pub fn mat3(a: [[i64; 3]; 3]) -> Mat3 {
    a.map(|row| row.map(rat))
}

pub fn inverse3(a: &Mat3) -> Option<Mat3> {
    let rows: Vec<Vec<Rat>> = a.iter().map(|r| r.to_vec()).collect();
    let inv = inverse_rat(&rows)?;
    Some(std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].clone())))
}

pub fn det3(a: &Mat3) -> Rat {
    let m = |i: usize, j: usize| &a[i][j];
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Matrix of Sym^j on monomial coefficient vectors; negative j means
/// Sym^{|j|} of the inverse.
pub fn sym_matrix(a: &Mat3, j: i64) -> Result<Vec<Vec<Rat>>> {
    let b = if j < 0 {
        inverse3(a).ok_or_else(|| Error::Invalid("singular matrix with a negative symmetric power".into()))?
    } else {
        a.clone()
    };
    Ok(sym_power_matrix(&Q, &b, j.unsigned_abs() as usize))
}

pub fn wedge2(a: &Mat3) -> Mat3 {
    wedge2_matrix(&Q, a)
}

/// Sym^i(A) (x) Sym^j(wedge^2 A) in the coordinate order of vector-valued
/// forms (Sym^i outer). Negative i, j use the inverse.
pub fn sym_rep_matrix(a: &Mat3, i: i64, j: i64) -> Result<Vec<Vec<Rat>>> {
    let s = sym_matrix(a, i)?;
    let w = sym_matrix(&wedge2(a), j)?;
    let (ns, nw) = (s.len(), w.len());
    let mut out = vec![vec![Rat::zero(); ns * nw]; ns * nw];
    for (r1, srow) in s.iter().enumerate() {
        for (c1, x) in srow.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r2, wrow) in w.iter().enumerate() {
                for (c2, y) in wrow.iter().enumerate() {
                    out[r1 * nw + r2][c1 * nw + c2] = x * y;
                }
            }
        }
    }
    Ok(out)
}

/// One coset contribution weight * rho(D^{-1}) a(N).
#[derive(Clone, Debug)]
pub struct HeckeTerm {
    pub d: [[i64; 3]; 3],
    pub n: HalfIntegralMatrix,
    pub weight: Rat,
}

/// Upper triangular representatives of GL3(Z) \ {D integral : 2 D^{-1} integral}.
pub fn coset_representatives() -> Vec<[[i64; 3]; 3]> {
    let mut out = Vec::new();
    for d1 in [1i64, 2] {
        for d2 in [1i64, 2] {
            for d3 in [1i64, 2] {
                for a in 0..d2 {
                    for b in 0..d3 {
                        for c in 0..d3 {
                            let d = [[d1, a, b], [0, d2, c], [0, 0, d3]];
                            let inv = inverse3(&mat3(d)).unwrap();
                            if inv.iter().flatten().all(|x| (x * rat(2)).is_integer()) {
                                out.push(d);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// (1/2) D T D^t as a half-integral matrix, if it is one.
fn transformed(d: &[[i64; 3]; 3], t: &HalfIntegralMatrix) -> Option<HalfIntegralMatrix> {
    // Work with 2T, which is integral.
    let t2 = [
        [2 * t.diag[0] as i64, t.offdiag[0] as i64, t.offdiag[1] as i64],
        [t.offdiag[0] as i64, 2 * t.diag[1] as i64, t.offdiag[2] as i64],
        [t.offdiag[1] as i64, t.offdiag[2] as i64, 2 * t.diag[2] as i64],
    ];
    // 4N = D (2T) D^t
    let mut n4 = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    n4[i][j] += d[i][k] * t2[k][l] * d[j][l];
                }
            }
        }
    }
    if (0..3).any(|i| n4[i][i] % 4 != 0) || [(0, 1), (0, 2), (1, 2)].iter().any(|&(i, j)| n4[i][j] % 2 != 0) {
        return None;
    }
    Some(HalfIntegralMatrix::new(
        [(n4[0][0] / 4) as i32, (n4[1][1] / 4) as i32, (n4[2][2] / 4) as i32],
        [(n4[0][1] / 2) as i32, (n4[0][2] / 2) as i32, (n4[1][2] / 2) as i32],
    ))
}

/// Sum over symmetric S in (1/2)Sym(Z)/Sym(Z) with S D integral of e(tr(N S)).
fn character_sum(d: &[[i64; 3]; 3], n: &HalfIntegralMatrix) -> i64 {
    const POS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
    let mut total = 0;
    for mask in 0u32..64 {
        // 2S
        let mut s2 = [[0i64; 3]; 3];
        for (bit, &(i, j)) in POS.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s2[i][j] = 1;
                s2[j][i] = 1;
            }
        }
        let integral = (0..3).all(|i| (0..3).all(|j| (0..3).map(|k| s2[i][k] * d[k][j]).sum::<i64>() % 2 == 0));
        if !integral {
            continue;
        }
        // 2 tr(N S) = sum_i n_ii (2S)_ii + sum_{i<j} (2 n_ij) (2S)_ij
        let mut e = 0i64;
        for i in 0..3 {
            e += n.diag[i] as i64 * s2[i][i];
        }
        e += n.offdiag[0] as i64 * s2[0][1] + n.offdiag[1] as i64 * s2[0][2] + n.offdiag[2] as i64 * s2[1][2];
        total += if e % 2 == 0 { 1 } else { -1 };
    }
    total
}

/// Contributions to a_2(T) for a form of weight (i, j, k):
/// a_2(T) = sum_D 2^{i+2j+3k-6} c(D, N) rho(D^{-1}) a(N), N = D T D^t / 2,
/// where rho = Sym^i (x) Sym^j(wedge^2) (x) det^k and c is the character sum.
pub fn hecke2_terms(t: &HalfIntegralMatrix, weight: [i64; 3]) -> Vec<HeckeTerm> {
    let [i, j, k] = weight;
    let scale = rat(2).pow((i + 2 * j + 3 * k - 6) as i32);
    let mut out = Vec::new();
    for d in coset_representatives() {
        let Some(n) = transformed(&d, t) else { continue };
        let c = character_sum(&d, &n);
        if c == 0 {
            continue;
        }
        let det = rat(d[0][0] * d[1][1] * d[2][2]);
        let w = &scale * rat(c) / det.pow(k as i32);
        out.push(HeckeTerm { d, n, weight: w });
    }
    out
}

/// a_2(T) as a vector.
pub fn hecke2_coefficient(f: &VectorValuedForm, t: &HalfIntegralMatrix) -> Result<Vec<Rat>> {
    let [i, j, _] = f.weight;
    let mut out = vec![Rat::zero(); f.coords.len()];
    for term in hecke2_terms(t, f.weight) {
        let a = f.fourier_coefficient(&term.n)?;
        let rho = sym_rep_matrix(&mat3(term.d), -i, -j)?;
        for (o, row) in out.iter_mut().zip(&rho) {
            let mut x = Rat::zero();
            for (m, v) in row.iter().zip(&a) {
                if !m.is_zero() && !v.is_zero() {
                    x += m * v;
                }
            }
            *o += x * &term.weight;
        }
    }
    Ok(out)
}

/// lambda with a_2(T) = lambda a(T), requiring exact proportionality.
pub fn eigenvalue_at(f: &VectorValuedForm, t: &HalfIntegralMatrix) -> Result<Rat> {
    let a = f.fourier_coefficient(t)?;
    let a2 = hecke2_coefficient(f, t)?;
    proportional(&a2, &a).ok_or_else(|| Error::NotEigen(format!("a_2({t}) is not a multiple of a({t})")))
}

/// The reference matrix used for each kind of check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeKind {
    /// T = [1,1,1;0,0,0]
    W408,
    /// T = [1,1,1;1,1,1]
    W337,
    /// T = [1,1,1;1,1,1] for any weight
    Template,
}

impl std::str::FromStr for HeckeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w408" => Ok(HeckeKind::W408),
            "w337" => Ok(HeckeKind::W337),
            "template" => Ok(HeckeKind::Template),
            _ => Err(Error::Invalid(format!("unknown Hecke kind {s}"))),
        }
    }
}

impl HeckeKind {
    pub fn reference_matrix(self) -> HalfIntegralMatrix {
        match self {
            HeckeKind::W408 => HalfIntegralMatrix::new([1, 1, 1], [0, 0, 0]),
            HeckeKind::W337 | HeckeKind::Template => HalfIntegralMatrix::new([1, 1, 1], [1, 1, 1]),
        }
    }
}

pub fn hecke2_eigenvalue(f: &VectorValuedForm, kind: HeckeKind) -> Result<Rat> {
    match kind {
        HeckeKind::W408 if f.weight != [4, 0, 8] => {
            return Err(Error::Invalid(format!("w408 needs weight (4,0,8), got {:?}", f.weight)))
        }
        HeckeKind::W337 if f.weight != [3, 3, 7] => {
            return Err(Error::Invalid(format!("w337 needs weight (3,3,7), got {:?}", f.weight)))
        }
        _ => {}
    }
    eigenvalue_at(f, &kind.reference_matrix())
}

/// c with a = c b, if b is nonzero and a is an exact multiple.
pub fn proportional(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let p = b.iter().position(|x| !x.is_zero())?;
    let c = &a[p] / &b[p];
    a.iter().zip(b).all(|(x, y)| *x == &c * y).then_some(c)
}

/// Largest entry in absolute value, for reporting.
pub fn max_abs(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

pub fn to_i64_vec(v: &[Rat]) -> Option<Vec<i64>> {
    v.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_small_cases() {
        let a = mat3([[1, 2, 3], [0, 1, 4], [5, 6, 0]]);
        let s1 = sym_matrix(&a, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s1[i][j], a[i][j]);
            }
        }
        let d = mat3([[2, 0, 0], [0, 3, 0], [0, 0, 5]]);
        let s2 = sym_matrix(&d, 2).unwrap();
        let want = [4, 6, 10, 9, 15, 25];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(s2[i][j], if i == j { rat(want[i]) } else { Rat::zero() });
            }
        }
        assert!(sym_matrix(&mat3([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), -1).is_err());
    }

    #[test]
    fn wedge_cases() {
        let id = mat3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(wedge2(&id), id);
        assert_eq!(wedge2(&mat3([[2, 0, 0], [0, 3, 0], [0, 0, 5]])), mat3([[15, 0, 0], [0, 10, 0], [0, 0, 6]]));
        let a = mat3([[1, 2, 3], [0, 1, 4], [5, 6, 0]]);
        assert_eq!(det3(&wedge2(&a)), det3(&a).pow(2));
    }

    #[test]
    fn seven_cosets_of_each_middle_type() {
        let reps = coset_representatives();
        let count = |det: i64| reps.iter().filter(|d| d[0][0] * d[1][1] * d[2][2] == det).count();
        assert_eq!((count(1), count(2), count(4), count(8)), (1, 7, 7, 1));
    }

    #[test]
    fn terms_for_n1_match_single_correction() {
        // For T = [1,1,1;1,1,1] only D = 2 and one coset with divisors
        // (1,2,2) survive; the latter maps T to [3,2,2;4,4,2] up to GL3(Z).
        let t = HalfIntegralMatrix::new([1, 1, 1], [1, 1, 1]);
        let terms = hecke2_terms(&t, [3, 3, 7]);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].d, [[1, 1, 1], [0, 2, 0], [0, 0, 2]]);
        assert_eq!(terms[0].n.to_string(), "[3,2,2;4,4,2]");
        assert_eq!(terms[0].weight, rat(1 << 13));
        assert_eq!(terms[1].n, t.scaled(2));
        assert_eq!(terms[1].weight, rat(512));
    }
}
