//! Discriminant of ternary quartics by evaluation: the Macaulay resultant of
//! the three partial derivatives, over a prime field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::conc::dc::{random_line_mod, trial_seed};
use crate::conc::quartic::gl3_act_field;
use crate::error::{Error, Result};
use crate::linalg::det_mod;
use crate::modp::Fp;
use crate::rep3::{monomials3, N_I, QUARTIC_EXPS};

const RETRIES: usize = 20;

/// Monomial coefficients of the three partial derivatives, indexed like
/// `monomials3(3)`.
fn partials(f: &Fp, a: &[u64]) -> [Vec<u64>; 3] {
    let cubics = monomials3(3);
    let mut out = [vec![0; 10], vec![0; 10], vec![0; 10]];
    for (i, e) in QUARTIC_EXPS.iter().enumerate() {
        let c = f.mul(a[i], f.from_i64(N_I[i]));
        for k in 0..3 {
            if e[k] == 0 {
                continue;
            }
            let mut j = *e;
            j[k] -= 1;
            let idx = cubics.iter().position(|m| *m == j).unwrap();
            out[k][idx] = f.add(out[k][idx], f.mul(c, e[k] as u64));
        }
    }
    out
}

/// Resultant of the partials as (Macaulay determinant, extraneous minor).
fn macaulay(f: &Fp, a: &[u64]) -> (u64, u64) {
    let cols = monomials3(7);
    let cubics = monomials3(3);
    let col = |m: [u8; 3]| cols.iter().position(|x| *x == m).unwrap();
    let parts = partials(f, a);
    let n = cols.len();
    let mut mat = vec![vec![0u64; n]; n];
    for (r, m) in cols.iter().enumerate() {
        let i = (0..3).find(|&i| m[i] >= 3).unwrap();
        let mut base = *m;
        base[i] -= 3;
        for (j, c) in cubics.iter().enumerate() {
            let t = [base[0] + c[0], base[1] + c[1], base[2] + c[2]];
            mat[r][col(t)] = parts[i][j];
        }
    }
    let nonreduced: Vec<usize> = (0..n).filter(|&k| cols[k].iter().filter(|&&e| e >= 3).count() >= 2).collect();
    let minor: Vec<Vec<u64>> =
        nonreduced.iter().map(|&r| nonreduced.iter().map(|&c| mat[r][c]).collect()).collect();
    (det_mod(&mat, f), det_mod(&minor, f))
}

fn det3(f: &Fp, m: &[[u64; 3]; 3]) -> u64 {
    let t = |a: u64, b: u64, c: u64| f.mul(f.mul(a, b), c);
    let pos = f.add(f.add(t(m[0][0], m[1][1], m[2][2]), t(m[0][1], m[1][2], m[2][0])), t(m[0][2], m[1][0], m[2][1]));
    let neg = f.add(f.add(t(m[0][2], m[1][1], m[2][0]), t(m[0][0], m[1][2], m[2][1])), t(m[0][1], m[1][0], m[2][2]));
    f.sub(pos, neg)
}

fn disc_direct(f: &Fp, a: &[u64], rng: &mut ChaCha20Rng) -> Option<u64> {
    let (num, den) = macaulay(f, a);
    if den != 0 {
        return Some(f.mul(num, f.inv(den)));
    }
    for _ in 0..RETRIES {
        let m: [[u64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(0..f.p)));
        let d = det3(f, &m);
        if d == 0 {
            continue;
        }
        let b = gl3_act_field(f, &m, a)?;
        let (num, den) = macaulay(f, &b);
        if den != 0 {
            let scale = f.pow(d, 36);
            return Some(f.mul(num, f.inv(f.mul(den, scale))));
        }
    }
    None
}

/// Discriminant of the quartic with coordinates a (mod p), up to a fixed
/// nonzero constant. When the extraneous minor vanishes under every tried
/// change of variables, the value is read off the pencil a + s g at s = 0.
pub fn disc_evaluate(f: &Fp, a: &[u64], seed: u64) -> Result<u64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    if let Some(v) = disc_direct(f, a, &mut rng) {
        return Ok(v);
    }
    let g: Vec<u64> = (0..15).map(|_| rng.gen_range(0..f.p)).collect();
    let mut xs = Vec::with_capacity(28);
    let mut ys = Vec::with_capacity(28);
    let mut tries = 0;
    while xs.len() < 28 {
        tries += 1;
        if tries > 200 {
            return Err(Error::ResultantRetry);
        }
        let s: u64 = rng.gen_range(1..f.p);
        if xs.contains(&s) {
            continue;
        }
        let b: Vec<u64> = (0..15).map(|i| f.add(a[i], f.mul(s, g[i]))).collect();
        if let Some(v) = disc_direct(f, &b, &mut rng) {
            xs.push(s);
            ys.push(v);
        }
    }
    Ok(interpolate(f, &xs, &ys)[0])
}

/// Coefficients (low to high) of the polynomial through the given points.
pub fn interpolate(f: &Fp, xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            dd[i] = f.mul(num, f.inv(f.sub(xs[i], xs[i - j])));
        }
    }
    let mut poly = vec![0u64; n];
    for k in (0..n).rev() {
        // poly = poly * (x - xs[k]) + dd[k]
        let mut next = vec![0u64; n];
        for i in 0..n - 1 {
            next[i + 1] = f.add(next[i + 1], poly[i]);
            next[i] = f.sub(next[i], f.mul(poly[i], xs[k]));
        }
        next[0] = f.add(next[0], dd[k]);
        poly = next;
    }
    poly
}

/// Order of vanishing of the discriminant along double conics, from the
/// degree-27 restriction to random lines.
pub fn disc_order_along_dc(trials: usize, seed: u64, modulus: u64) -> Result<u32> {
    let f = Fp::new(modulus);
    let orders = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|k| {
            let s = trial_seed(seed, k);
            let line = random_line_mod(&f, s);
            let npts = 31u64;
            let xs: Vec<u64> = (1..=npts).collect();
            let ys = xs
                .iter()
                .map(|&t| {
                    let a: Vec<u64> = (0..15).map(|i| f.add(line.c0[i], f.mul(t, line.c1[i]))).collect();
                    disc_evaluate(&f, &a, s ^ t)
                })
                .collect::<Result<Vec<_>>>()?;
            let poly = interpolate(&f, &xs, &ys);
            if poly[28..].iter().any(|&c| c != 0) {
                return Err(Error::Invalid("restriction of the discriminant has degree above 27".into()));
            }
            Ok(poly.iter().position(|&c| c != 0))
        })
        .collect::<Result<Vec<_>>>()?;
    orders.into_iter().flatten().min().map(|v| v as u32).ok_or(Error::ZeroConcomitant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::quartic::conic_square;
    use crate::modp::DEFAULT_PRIME;

    fn fp() -> Fp {
        Fp::new(DEFAULT_PRIME)
    }

    #[test]
    fn smooth_and_singular() {
        let f = fp();
        let mut fermat = vec![0u64; 15];
        fermat[0] = 1;
        fermat[10] = 1;
        fermat[14] = 1;
        assert_ne!(disc_evaluate(&f, &fermat, 1).unwrap(), 0);
        let mut x4 = vec![0u64; 15];
        x4[0] = 1;
        assert_eq!(disc_evaluate(&f, &x4, 1).unwrap(), 0);
        let dc = conic_square(&f, &[1, 0, 0, 1, 0, 1]);
        assert_eq!(disc_evaluate(&f, &dc, 1).unwrap(), 0);
    }

    #[test]
    fn invariance_weight() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let a: Vec<u64> = (0..15).map(|_| rng.gen_range(0..f.p)).collect();
        let m: [[u64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(0..f.p)));
        let b = gl3_act_field(&f, &m, &a).unwrap();
        let lhs = disc_evaluate(&f, &b, 2).unwrap();
        let rhs = f.mul(f.pow(det3(&f, &m), 36), disc_evaluate(&f, &a, 2).unwrap());
        assert_ne!(rhs, 0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = fp();
        let p = [0u64, 0, 5, 7, 1];
        let xs: Vec<u64> = (1..=5).collect();
        let ys: Vec<u64> =
            xs.iter().map(|&x| p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))).collect();
        assert_eq!(interpolate(&f, &xs, &ys), p.to_vec());
    }

    #[test]
    fn discriminant_order_along_double_conics() {
        assert_eq!(disc_order_along_dc(3, 17, DEFAULT_PRIME).unwrap(), 14);
    }
}
