//! Equivariance under the permutation matrices in GL3(Z).
//!
//! For a permutation sigma with matrix P (P e_i = e_sigma(i)) a form of
//! weight (i, j, k) satisfies a(P N P^t) = rho(P) a(N), with
//! rho = Sym^i (x) Sym^j(wedge^2) (x) det^k. Moving every term q^N to
//! q^{P N P^t} must therefore agree with applying rho(P^-1) coordinatewise.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::siegel::form::{VectorValuedForm, Witness};
use crate::siegel::hecke::{mat3, sym_rep_matrix};
use crate::theta3::series::{QKey, QSeries};
use crate::Rat;

pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn sign(p: [usize; 3]) -> i64 {
    let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// rho(P) on the coordinates of a form of the given weight.
pub fn permutation_action(p: [usize; 3], weight: [i64; 3]) -> Result<Vec<Vec<i128>>> {
    let mut m = [[0i64; 3]; 3];
    for i in 0..3 {
        m[p[i]][i] = 1;
    }
    permutation_matrix_action(m, p, weight)
}

fn inverse(p: [usize; 3]) -> [usize; 3] {
    let mut q = [0; 3];
    for i in 0..3 {
        q[p[i]] = i;
    }
    q
}

fn permutation_matrix_action(m: [[i64; 3]; 3], p: [usize; 3], weight: [i64; 3]) -> Result<Vec<Vec<i128>>> {
    let rho = sym_rep_matrix(&mat3(m), weight[0], weight[1])?;
    let det = if weight[2] % 2 == 0 { 1 } else { sign(p) };
    rho.iter()
        .map(|row| {
            row.iter()
                .map(|x: &Rat| {
                    (x * Rat::from_integer(BigInt::from(det)))
                        .to_integer()
                        .to_i128()
                        .ok_or_else(|| Error::Invalid("non-integral permutation action".into()))
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct S3Report {
    pub results: Vec<([usize; 3], Option<Witness>)>,
}

impl S3Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, w)| w.is_none())
    }

    pub fn first_failure(&self) -> Option<&([usize; 3], Option<Witness>)> {
        self.results.iter().find(|(_, w)| w.is_some())
    }
}

/// Check all six permutations on the part of the box that is mapped into
/// itself.
pub fn s3_check(f: &VectorValuedForm) -> Result<S3Report> {
    let mut results = Vec::new();
    let t = f.trunc();
    let m = *t.iter().min().unwrap();
    let cube = [m; 3];
    for p in PERMUTATIONS {
        let rho = permutation_action(inverse(p), f.weight)?;
        let moved: Vec<QSeries> = f.coords.iter().map(|c| c.restrict(cube).permute(p)).collect();
        let mut acted = Vec::with_capacity(rho.len());
        for row in &rho {
            let mut s = QSeries::zero(1, 1, cube, [0; 3]);
            for (c, &x) in f.coords.iter().zip(row) {
                if x != 0 {
                    s = s.add_scaled(&c.restrict(cube), x);
                }
            }
            acted.push(s);
        }
        let lhs = VectorValuedForm::new(f.weight, moved, f.scale.clone())?;
        let rhs = VectorValuedForm::new(f.weight, acted, f.scale.clone())?;
        results.push((p, lhs.first_difference(&rhs)));
    }
    Ok(S3Report { results })
}

/// a(g N g^t) = rho(g) a(N) for an integral g of determinant +-1, on all
/// pairs (N, g N g^t) inside the box whose diagonal lies in `diag` (all of
/// the box if None). Returns the first failure.
pub fn gl3_equivariance_failure(f: &VectorValuedForm, g: [[i64; 3]; 3], diag: Option<QKey>) -> Result<Option<Witness>> {
    let gm = mat3(g);
    let det = crate::siegel::hecke::det3(&gm);
    if det.abs() != Rat::from_integer(BigInt::from(1)) {
        return Err(Error::Invalid("g must be unimodular".into()));
    }
    let mut rho = sym_rep_matrix(&gm, f.weight[0], f.weight[1])?;
    if f.weight[2] % 2 != 0 {
        for row in rho.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x * &det;
            }
        }
    }
    let t = f.trunc();
    let keep = |k: QKey| crate::theta3::series::key_le(k, t) && diag.map_or(true, |d| d == k);
    let mut keys = std::collections::BTreeSet::new();
    for c in &f.coords {
        for (k, e) in c.terms().into_keys() {
            keys.insert((k, e));
        }
    }
    let n = f.coords.len();
    for (k, e) in keys {
        if !keep(k) {
            continue;
        }
        // Integral symmetric matrix 2N.
        let m = [[2 * k[0] as i64, e[0] as i64, e[1] as i64], [e[0] as i64, 2 * k[1] as i64, e[2] as i64], [e[1] as i64, e[2] as i64, 2 * k[2] as i64]];
        let mut gm2 = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                gm2[i][j] = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| g[i][a] * m[a][b] * g[j][b]).sum();
            }
        }
        let k2 = [gm2[0][0] / 2, gm2[1][1] / 2, gm2[2][2] / 2].map(|x| x as i32);
        let e2 = [gm2[0][1], gm2[0][2], gm2[1][2]].map(|x| x as i32);
        if !keep(k2) {
            continue;
        }
        let a: Vec<Rat> = f.coords.iter().map(|c| Rat::from_integer(BigInt::from(c.coeff(k, e)))).collect();
        for r in 0..n {
            let lhs = Rat::from_integer(BigInt::from(f.coords[r].coeff(k2, e2)));
            let rhs: Rat = (0..n).map(|c| &rho[r][c] * &a[c]).sum();
            if lhs != rhs {
                return Ok(Some(Witness { coord: r, q: k2, uvw: e2, left: lhs * &f.scale, right: rhs * &f.scale }));
            }
        }
    }
    Ok(None)
}

/// Coordinate orbits of the permutation action (for forms where it is a
/// signed permutation of coordinates).
pub fn coordinate_orbits(weight: [i64; 3]) -> Result<Vec<Vec<usize>>> {
    let n = crate::siegel::form::sym_basis(weight[0] as usize, weight[1] as usize).len();
    let actions: Vec<Vec<Vec<i128>>> = PERMUTATIONS.iter().map(|&p| permutation_action(p, weight)).collect::<Result<_>>()?;
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit: Vec<usize> = actions
            .iter()
            .filter_map(|a| (0..n).find(|&r| !a[r][start].is_zero()))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &o in &orbit {
            seen[o] = true;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_orbits_and_printed_permutations() {
        let mut sizes: Vec<usize> = coordinate_orbits([4, 0, 8]).unwrap().iter().map(|o| o.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 3, 6]);
        // (23) sends v to (v1,v3,v2,v6,v5,v4,v10,v9,v8,v7,v15,v14,v13,v12,v11).
        let swap23 = [0, 2, 1, 5, 4, 3, 9, 8, 7, 6, 14, 13, 12, 11, 10];
        let swap13 = [14, 13, 9, 12, 8, 5, 11, 7, 4, 2, 10, 6, 3, 1, 0];
        for (p, perm) in [([0, 2, 1], swap23), ([2, 1, 0], swap13)] {
            let a = permutation_action(p, [4, 0, 8]).unwrap();
            for (r, &src) in perm.iter().enumerate() {
                assert_eq!(a[r][src], 1, "row {r}");
            }
        }
    }

    #[test]
    fn corrupted_series_is_located() {
        let s = QSeries::from_terms(1, 1, [2, 2, 2], [0; 3], vec![([1, 1, 1], [0, 0, 0], 1), ([2, 1, 1], [0, 0, 0], 1), ([1, 2, 1], [0, 0, 0], 1), ([1, 1, 2], [0, 0, 0], 1)]);
        let f = VectorValuedForm::new([0, 0, 18], vec![s.clone()], Rat::from_integer(1.into())).unwrap();
        assert!(s3_check(&f).unwrap().passed());
        let bad = s.add(&QSeries::from_terms(1, 1, [2, 2, 2], [0; 3], vec![([2, 1, 1], [0, 0, 0], 1)]));
        let g = VectorValuedForm::new([0, 0, 18], vec![bad], Rat::from_integer(1.into())).unwrap();
        let r = s3_check(&g).unwrap();
        let (_, w) = r.first_failure().unwrap();
        let w = w.as_ref().unwrap();
        assert!(w.q == [2, 1, 1] || w.q == [1, 2, 1] || w.q == [1, 1, 2]);
    }
}
