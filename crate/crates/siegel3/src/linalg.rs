//! Exact linear algebra: dense rational elimination and multi-modular kernels
//! of sparse integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::modp::{large_primes, rational_reconstruct, Fp};
use crate::Rat;

/// Sparse row: (column, value).
pub type SparseRow = Vec<(usize, i64)>;

/// Reduced row echelon form modulo p in place; returns pivot columns.
pub fn rref_mod(m: &mut [Vec<u64>], ncols: usize, f: &Fp) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]);
        for x in m[r][c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let (head, tail) = m.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let k = row[c];
            if k != 0 {
                for (x, &y) in row[c..].iter_mut().zip(prow[c..].iter()) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(k, y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a dense matrix modulo p.
pub fn rank_mod(rows: &[Vec<u64>], ncols: usize, f: &Fp) -> usize {
    let mut m = rows.to_vec();
    rref_mod(&mut m, ncols, f).len()
}

fn kernel_from_rref_mod(m: &[Vec<u64>], pivots: &[usize], ncols: usize, f: &Fp) -> Vec<Vec<u64>> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for fc in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r][fc]);
        }
        out.push(v);
    }
    out
}

/// Integer basis (content 1 per vector) of the kernel of a sparse integer
/// matrix, in the canonical order given by the free columns of the
/// reduced row echelon form.
pub fn kernel_int(rows: &[SparseRow], ncols: usize) -> Vec<Vec<BigInt>> {
    if ncols == 0 {
        return Vec::new();
    }
    let primes = large_primes(64);
    let mut best_pivots: Option<Vec<usize>> = None;
    let mut residues: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut used: Vec<u64> = Vec::new();
    for &p in &primes {
        let f = Fp::new(p);
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|row| {
                let mut d = vec![0u64; ncols];
                for &(c, v) in row {
                    d[c] = f.add(d[c], f.from_i64(v));
                }
                d
            })
            .collect();
        let piv = rref_mod(&mut m, ncols, &f);
        match &best_pivots {
            Some(bp) if piv.len() < bp.len() => continue,
            Some(bp) if piv.len() == bp.len() && &piv != bp => continue,
            Some(bp) if piv.len() == bp.len() => {}
            _ => {
                best_pivots = Some(piv.clone());
                residues.clear();
                used.clear();
            }
        }
        residues.push(kernel_from_rref_mod(&m, &piv, ncols, &f));
        used.push(p);
        let dim = residues[0].len();
        if dim == 0 {
            return Vec::new();
        }
        // CRT and attempt reconstruction.
        let mut modulus = BigInt::one();
        let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; dim];
        for (res, &q) in residues.iter().zip(used.iter()) {
            let qb = BigInt::from(q);
            for (va, vr) in acc.iter_mut().zip(res.iter()) {
                for (a, &r) in va.iter_mut().zip(vr.iter()) {
                    // a := a + modulus * ((r - a) * modulus^{-1} mod q)
                    let fq = Fp::new(q);
                    let am = fq.from_bigint(a);
                    let mm = fq.from_bigint(&modulus);
                    let t = fq.mul(fq.sub(r, am), fq.inv(mm));
                    *a += &modulus * BigInt::from(t);
                }
            }
            modulus *= qb;
        }
        let mut ok = true;
        let mut basis = Vec::with_capacity(dim);
        'vec: for va in &acc {
            let mut rv = Vec::with_capacity(ncols);
            for a in va {
                match rational_reconstruct(a, &modulus) {
                    Some(r) => rv.push(r),
                    None => {
                        ok = false;
                        break 'vec;
                    }
                }
            }
            let iv = primitive_integer(&rv);
            if !in_kernel(rows, &iv) {
                ok = false;
                break;
            }
            basis.push(iv);
        }
        if ok {
            return basis;
        }
    }
    panic!("multi-modular kernel did not stabilize");
}

fn in_kernel(rows: &[SparseRow], v: &[BigInt]) -> bool {
    rows.iter().all(|row| {
        let mut s = BigInt::zero();
        for &(c, x) in row {
            s += &v[c] * BigInt::from(x);
        }
        s.is_zero()
    })
}

/// Scale a rational vector to a primitive integer vector (positive
/// first nonzero entry is not enforced; the sign of the input is kept).
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let iv: Vec<BigInt> = v.iter().map(|x| (x * Rat::from(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &iv {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return iv;
    }
    iv.into_iter().map(|x| x / &g).collect()
}

/// Reduced row echelon form over Q in place; returns pivot columns.
pub fn rref_rat(m: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let k = row[c].clone();
            for j in c..prow.len() {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &k * &prow[j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(pivots.len());
    pivots
}

/// Kernel basis over Q of a dense rational matrix.
pub fn kernel_rat(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref_rat(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for fc in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][fc].clone();
        }
        out.push(v);
    }
    out
}

/// Solve the square system `a x = b` over Q.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref_rat(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Determinant of a square rational matrix.
pub fn det_rat(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if pr != c {
            m.swap(pr, c);
            det = -det;
        }
        det *= m[c][c].clone();
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let k = &m[i][c] * &inv;
            for j in c..n {
                let t = &k * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix.
pub fn inverse_rat(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref_rat(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant modulo p.
pub fn det_mod(a: &[Vec<u64>], f: &Fp) -> u64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            m.swap(pr, c);
            det = f.neg(det);
        }
        det = f.mul(det, m[c][c]);
        let inv = f.inv(m[c][c]);
        for i in c + 1..n {
            if m[i][c] == 0 {
                continue;
            }
            let k = f.mul(m[i][c], inv);
            for j in c..n {
                let t = f.mul(k, m[c][j]);
                m[i][j] = f.sub(m[i][j], t);
            }
        }
    }
    det
}

/// Matrix product over Q.
pub fn matmul_rat(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

/// Gcd of the absolute values of a list of integers (0 for the empty list).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn kernel_int_small() {
        // x + 2y - z = 0, 2x + 4y - 2z = 0
        let rows = vec![vec![(0, 1), (1, 2), (2, -1)], vec![(0, 2), (1, 4), (2, -2)]];
        let k = kernel_int(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(in_kernel(&rows, v));
            assert_eq!(content(v), BigInt::one());
        }
    }

    #[test]
    fn kernel_int_matches_rational() {
        let rows = vec![vec![(0, 3), (1, -6), (3, 9)], vec![(1, 5), (2, 10), (3, -5)]];
        let k = kernel_int(&rows, 4);
        let dense: Vec<Vec<Rat>> = rows
            .iter()
            .map(|row| {
                let mut d = vec![r(0); 4];
                for &(c, v) in row {
                    d[c] = r(v);
                }
                d
            })
            .collect();
        let kr = kernel_rat(&dense, 4);
        assert_eq!(k.len(), kr.len());
        for (a, b) in k.iter().zip(kr.iter()) {
            assert_eq!(a, &primitive_integer(b));
        }
    }

    #[test]
    fn det_and_inverse() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        assert_eq!(det_rat(&a), r(5));
        let inv = inverse_rat(&a).unwrap();
        let id = matmul_rat(&a, &inv);
        assert_eq!(id, vec![vec![r(1), r(0)], vec![r(0), r(1)]]);
        let f = Fp::new(crate::modp::DEFAULT_PRIME);
        let am = vec![vec![2u64, 1], vec![1, 3]];
        assert_eq!(det_mod(&am, &f), 5);
    }
}
