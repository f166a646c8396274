//! The substitution a_I -> alpha_I into concomitants, and division by
//! powers of chi18.
//!
//! Numerators of degree d have coefficients far beyond machine integers, so
//! quotients are computed pointwise: at each (u, v, w) in F_p^3 every Fourier
//! block becomes a scalar and the problem is ordinary power series division
//! in q1, q2, q3. Quotient blocks are then interpolated as Laurent
//! polynomials whose exponents obey the semidefiniteness bound, checked at
//! extra random points, and lifted by CRT.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::conc::concomitant::Concomitant;
use crate::conc::dc::trial_seed;
use crate::error::{Error, Result};
use crate::modp::{large_primes, Fp};
use crate::rep3::apoly::AMono;
use crate::siegel::form::{sym_basis, VectorValuedForm};
use crate::theta3::block::{Block, Coef};
use crate::theta3::forms::{alpha_series, chi18_primitive};
use crate::theta3::series::{add_key, key_le, QKey, QSeries};
use crate::Rat;

/// Theta-derived input of the substitution.
#[derive(Clone, Debug)]
pub struct ThetaData {
    /// abar_I in integral units, valuation (1,1,1).
    pub alpha: Vec<QSeries>,
    /// a_I = factor_I * abar_I.
    pub factors: Vec<Rat>,
    /// chi18 with coprime integral coefficients, valuation (2,2,2).
    pub chi18: QSeries,
    /// chi18 = chi18_scale * `chi18`.
    pub chi18_scale: Rat,
}

fn sub_scalar(k: QKey, c: i32) -> QKey {
    k.map(|x| x - c)
}

fn at_least(k: QKey, c: i32) -> QKey {
    k.map(|x| x.max(c))
}

impl ThetaData {
    /// Enough data for degree-d concomitants divided by chi18^m on keys <= out.
    pub fn for_quotient(out: QKey, d: u32, m: u32) -> Result<ThetaData> {
        let (na, nc) = required_boxes(out, d, m);
        let (alpha, cal) = alpha_series(at_least(na, 2))?;
        let (chi18, chi18_scale) = chi18_primitive(at_least(nc, 2))?;
        let factors = (0..15).map(|i| cal.quartic_factor(i)).collect();
        Ok(ThetaData { alpha, factors, chi18, chi18_scale })
    }

    pub fn alpha_trunc(&self) -> QKey {
        self.alpha[0].trunc
    }

    pub fn chi18_trunc(&self) -> QKey {
        self.chi18.trunc
    }
}

/// Boxes of alpha and chi18 needed for the quotient on keys <= out.
pub fn required_boxes(out: QKey, d: u32, m: u32) -> (QKey, QKey) {
    let num = add_key(out, [2 * m as i32; 3]);
    let na = sub_scalar(num, d as i32 - 1);
    let nc = sub_scalar(num, 2 * (m as i32 - 1).max(0));
    (na, nc)
}

/// Tuning of the pointwise computation.
#[derive(Clone, Copy, Debug)]
pub struct PointwiseOptions {
    pub seed: u64,
    pub max_primes: usize,
    /// Random points used to confirm each interpolation.
    pub check_points: usize,
}

impl Default for PointwiseOptions {
    fn default() -> Self {
        PointwiseOptions { seed: 0x5eed, max_primes: 12, check_points: 2 }
    }
}

/// Dense scalar series on the excess box {0..=E}.
#[derive(Clone, Debug)]
struct Excess {
    dims: [usize; 3],
    exps: Vec<[usize; 3]>,
    /// Positions sorted by total degree.
    graded: Vec<usize>,
}

impl Excess {
    fn new(e: QKey) -> Excess {
        let dims = [e[0] as usize + 1, e[1] as usize + 1, e[2] as usize + 1];
        let mut exps = Vec::new();
        for a in 0..dims[0] {
            for b in 0..dims[1] {
                for c in 0..dims[2] {
                    exps.push([a, b, c]);
                }
            }
        }
        let mut graded: Vec<usize> = (0..exps.len()).collect();
        graded.sort_by_key(|&i| (exps[i].iter().sum::<usize>(), i));
        Excess { dims, exps, graded }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn idx(&self, e: [usize; 3]) -> usize {
        (e[0] * self.dims[1] + e[1]) * self.dims[2] + e[2]
    }

    fn mul(&self, f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ei = self.exps[i];
            for a0 in 0..self.dims[0] - ei[0] {
                for a1 in 0..self.dims[1] - ei[1] {
                    for a2 in 0..self.dims[2] - ei[2] {
                        let y = b[self.idx([a0, a1, a2])];
                        if y != 0 {
                            let o = self.idx([a0 + ei[0], a1 + ei[1], a2 + ei[2]]);
                            out[o] = f.add(out[o], f.mul(x, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with nonzero constant term.
    fn inverse(&self, f: &Fp, a: &[u64]) -> Option<Vec<u64>> {
        if a[0] == 0 {
            return None;
        }
        let c0 = f.inv(a[0]);
        let mut w = vec![0u64; self.len()];
        w[0] = c0;
        for &pos in &self.graded[1..] {
            let e = self.exps[pos];
            let mut s = 0u64;
            for j0 in 0..=e[0] {
                for j1 in 0..=e[1] {
                    for j2 in 0..=e[2] {
                        if j0 + j1 + j2 == 0 {
                            continue;
                        }
                        let x = a[self.idx([j0, j1, j2])];
                        if x != 0 {
                            s = f.add(s, f.mul(x, w[self.idx([e[0] - j0, e[1] - j1, e[2] - j2])]));
                        }
                    }
                }
            }
            w[pos] = f.neg(f.mul(c0, s));
        }
        Some(w)
    }
}

/// Powers u^e, v^e, w^e for |e| <= r.
struct Powers {
    r: i32,
    tables: [Vec<u64>; 3],
}

impl Powers {
    fn new(f: &Fp, pt: [u64; 3], r: i32) -> Powers {
        let table = |x: u64| {
            let xi = f.inv(x);
            let mut t = vec![0u64; 2 * r as usize + 1];
            t[r as usize] = 1;
            for k in 1..=r as usize {
                t[r as usize + k] = f.mul(t[r as usize + k - 1], x);
                t[r as usize - k] = f.mul(t[r as usize - k + 1], xi);
            }
            t
        };
        Powers { r, tables: [table(pt[0]), table(pt[1]), table(pt[2])] }
    }

    #[inline]
    fn get(&self, var: usize, e: i32) -> u64 {
        self.tables[var][(e + self.r) as usize]
    }
}

fn max_exponent(series: &[&QSeries]) -> i32 {
    series
        .iter()
        .flat_map(|s| s.terms().into_keys())
        .map(|(_, e)| e.iter().map(|x| x.abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// The series restricted to keys val + E, evaluated at a point.
fn eval_series(f: &Fp, s: &QSeries, val: QKey, ex: &Excess, pw: &Powers) -> Vec<u64> {
    let mut out = vec![0u64; ex.len()];
    for (pos, e) in ex.exps.iter().enumerate() {
        let k = [val[0] + e[0] as i32, val[1] + e[1] as i32, val[2] + e[2] as i32];
        if let Some(b) = s.block(k) {
            let mut acc = 0u64;
            for (x, c) in b.terms() {
                let t = f.mul(f.mul(pw.get(0, x[0]), pw.get(1, x[1])), pw.get(2, x[2]));
                acc = f.add(acc, f.mul(f.from_i128(c), t));
            }
            out[pos] = acc;
        }
    }
    out
}

/// Concomitant coordinates as integer combinations of monomials in abar.
struct Prepared {
    d: u32,
    monos: Vec<AMono>,
    /// For monomials of degree >= 1: (index of the monomial with one factor
    /// removed, removed variable); the degree-0 monomial has no parent.
    parent: Vec<Option<(usize, usize)>>,
    coords: Vec<Vec<(usize, BigInt)>>,
    /// Common denominator folded into the integer coefficients.
    denominator: BigInt,
    /// prod of the factors at degree d, with factor ratios folded in.
    kappa_d: Rat,
    weight: [i64; 3],
}

fn prepare(c: &Concomitant, data: &ThetaData) -> Result<Prepared> {
    let a = (c.lambda.0[0] - c.lambda.0[1]) as usize;
    let b = (c.lambda.0[1] - c.lambda.0[2]) as usize;
    let weight = [a as i64, b as i64, c.lambda.0[2] + 8 * c.d as i64];
    let kappa = data.factors[0].clone();
    let ratios: Vec<Rat> = data.factors.iter().map(|x| x / &kappa).collect();
    let mut index: HashMap<AMono, usize> = HashMap::new();
    let mut monos: Vec<AMono> = Vec::new();
    fn intern(m: AMono, index: &mut HashMap<AMono, usize>, monos: &mut Vec<AMono>) -> usize {
        if let Some(&i) = index.get(&m) {
            return i;
        }
        if let Some(v) = m.iter().position(|&e| e > 0) {
            let mut p = m;
            p[v] -= 1;
            intern(p, index, monos);
        }
        monos.push(m);
        index.insert(m, monos.len() - 1);
        monos.len() - 1
    }
    let mut rat_coords: Vec<Vec<(usize, Rat)>> = Vec::new();
    let by_mon: HashMap<([u8; 3], [u8; 3]), usize> =
        c.coords.iter().enumerate().map(|(i, cc)| ((cc.xmon, cc.xhmon), i)).collect();
    for (xm, xh) in sym_basis(a, b) {
        let cc = &c.coords[*by_mon.get(&(xm, xh)).ok_or_else(|| {
            Error::Invalid(format!("concomitant lacks coordinate {xm:?} {xh:?}"))
        })?];
        let mut row = Vec::new();
        for (m, coef) in &cc.poly.terms {
            let mut x = coef.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    x *= &ratios[i];
                }
            }
            row.push((intern(*m, &mut index, &mut monos), x));
        }
        rat_coords.push(row);
    }
    let denominator = rat_coords
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, (_, x)| l.lcm(x.denom()));
    let coords = rat_coords
        .into_iter()
        .map(|row| row.into_iter().map(|(i, x)| (i, (x * Rat::from_integer(denominator.clone())).to_integer())).collect())
        .collect();
    let parent = monos
        .iter()
        .map(|m| {
            m.iter().position(|&e| e > 0).map(|v| {
                let mut p = *m;
                p[v] -= 1;
                (index[&p], v)
            })
        })
        .collect();
    Ok(Prepared { d: c.d, monos, parent, coords, denominator, kappa_d: kappa.pow(c.d as i32), weight })
}

/// Setup shared by all points for one prime.
struct PointEval<'a> {
    f: Fp,
    prep: &'a Prepared,
    data: &'a ThetaData,
    m: u32,
    ex: Excess,
    coefs: Vec<Vec<(usize, u64)>>,
    r: i32,
}

impl<'a> PointEval<'a> {
    /// Quotient coordinates at a point as scalar series on the excess box,
    /// or None if the leading block of chi18 vanishes there.
    fn eval(&self, pt: [u64; 3]) -> Option<Vec<Vec<u64>>> {
        let f = &self.f;
        let ex = &self.ex;
        let pw = Powers::new(f, pt, self.r);
        let alpha: Vec<Vec<u64>> = self.data.alpha.iter().map(|s| eval_series(f, s, [1; 3], ex, &pw)).collect();
        let mut one = vec![0u64; ex.len()];
        one[0] = 1;
        let mut values: Vec<Vec<u64>> = Vec::with_capacity(self.prep.monos.len());
        for (i, p) in self.prep.parent.iter().enumerate() {
            let v = match p {
                None => one.clone(),
                Some((j, var)) => ex.mul(f, &values[*j], &alpha[*var]),
            };
            debug_assert_eq!(i, values.len());
            values.push(v);
        }
        let inv = if self.m > 0 {
            let chi = eval_series(f, &self.data.chi18, [2; 3], ex, &pw);
            let mut x = chi.clone();
            for _ in 1..self.m {
                x = ex.mul(f, &x, &chi);
            }
            Some(ex.inverse(f, &x)?)
        } else {
            None
        };
        let p = f.p as u128;
        let out = self
            .coefs
            .iter()
            .map(|row| {
                let mut acc = vec![0u128; ex.len()];
                for (n, (mi, c)) in row.iter().enumerate() {
                    let mv = &values[*mi];
                    for (a, &x) in acc.iter_mut().zip(mv) {
                        *a += *c as u128 * x as u128;
                    }
                    if n % 8 == 7 {
                        for a in acc.iter_mut() {
                            *a %= p;
                        }
                    }
                }
                let num: Vec<u64> = acc.into_iter().map(|a| (a % p) as u64).collect();
                match &inv {
                    Some(w) => ex.mul(f, &num, w),
                    None => num,
                }
            })
            .collect();
        Some(out)
    }
}

/// Exponent bounds |e_12| <= 2 sqrt(n11 n22) etc. of a holomorphic block.
pub fn psd_bounds(k: QKey) -> [i32; 3] {
    let b = |x: i32, y: i32| {
        let t = 4 * x as i64 * y as i64;
        (t as f64).sqrt().floor() as i32 + 1
    };
    let fix = |x: i32, y: i32| {
        let mut r = b(x, y);
        while r as i64 * r as i64 > 4 * x as i64 * y as i64 {
            r -= 1;
        }
        r
    };
    [fix(k[0], k[1]), fix(k[0], k[2]), fix(k[1], k[2])]
}

/// Inverse Vandermonde matrix over F_p for the points x_0..x_{n-1}.
fn inverse_vandermonde(f: &Fp, xs: &[u64]) -> Vec<Vec<u64>> {
    let n = xs.len();
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = (0..n).map(|j| f.pow(xs[i], j as u64)).collect();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("distinct points");
        a.swap(col, piv);
        let inv = f.inv(a[col][col]);
        for x in a[col].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                for j in 0..2 * n {
                    let t = f.mul(c, a[col][j]);
                    a[r][j] = f.sub(a[r][j], t);
                }
            }
        }
    }
    // Row i of [V | I] reduced to [I | V^{-1}]: coefficients = V^{-1} values.
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Laurent block from values on a tensor grid, as a dense array over
/// [-b, b]^3 (per-axis bounds).
fn interpolate(f: &Fp, vals: &dyn Fn(usize, usize, usize) -> u64, grid: &[Vec<u64>; 3], inv: &[Vec<Vec<u64>>; 3], b: [i32; 3]) -> Vec<u64> {
    let n = [2 * b[0] as usize + 1, 2 * b[1] as usize + 1, 2 * b[2] as usize + 1];
    // g = f * u^b0 v^b1 w^b2 is a polynomial with degrees < n.
    let mut g = vec![0u64; n[0] * n[1] * n[2]];
    let id = |i: usize, j: usize, k: usize| (i * n[1] + j) * n[2] + k;
    for i in 0..n[0] {
        let pu = f.pow(grid[0][i], b[0] as u64);
        for j in 0..n[1] {
            let pv = f.mul(pu, f.pow(grid[1][j], b[1] as u64));
            for k in 0..n[2] {
                let pwk = f.mul(pv, f.pow(grid[2][k], b[2] as u64));
                g[id(i, j, k)] = f.mul(vals(i, j, k), pwk);
            }
        }
    }
    for axis in 0..3 {
        let m = &inv[axis];
        let mut h = vec![0u64; g.len()];
        for i in 0..n[0] {
            for j in 0..n[1] {
                for k in 0..n[2] {
                    let (t, r) = match axis {
                        0 => (i, [0, j, k]),
                        1 => (j, [i, 0, k]),
                        _ => (k, [i, j, 0]),
                    };
                    let mut s = 0u64;
                    for l in 0..n[axis] {
                        let src = match axis {
                            0 => id(l, r[1], r[2]),
                            1 => id(r[0], l, r[2]),
                            _ => id(r[0], r[1], l),
                        };
                        s = f.add(s, f.mul(m[t][l], g[src]));
                    }
                    h[id(i, j, k)] = s;
                }
            }
        }
        g = h;
    }
    g
}

fn eval_laurent(f: &Fp, coeffs: &[u64], b: [i32; 3], pt: [u64; 3]) -> u64 {
    let n = [2 * b[0] as usize + 1, 2 * b[1] as usize + 1, 2 * b[2] as usize + 1];
    let mut s = 0u64;
    let inv = [f.inv(pt[0]), f.inv(pt[1]), f.inv(pt[2])];
    let base: [u64; 3] = std::array::from_fn(|a| f.pow(inv[a], b[a] as u64));
    let mut pu = base[0];
    for i in 0..n[0] {
        let mut pv = base[1];
        for j in 0..n[1] {
            let mut pwk = base[2];
            for k in 0..n[2] {
                let c = coeffs[(i * n[1] + j) * n[2] + k];
                if c != 0 {
                    s = f.add(s, f.mul(c, f.mul(pu, f.mul(pv, pwk))));
                }
                pwk = f.mul(pwk, pt[2]);
            }
            pv = f.mul(pv, pt[1]);
        }
        pu = f.mul(pu, pt[0]);
    }
    s
}

/// Residues of all quotient blocks modulo one prime.
struct Residues {
    /// (coordinate, key, bounds, dense coefficients)
    blocks: Vec<(usize, QKey, [i32; 3], Vec<u64>)>,
}

fn random_values(rng: &mut ChaCha20Rng, f: &Fp, n: usize, avoid: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(2..f.p);
        if !out.contains(&x) && !avoid.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn residues_for_prime(
    prep: &Prepared,
    data: &ThetaData,
    m: u32,
    out: QKey,
    p: u64,
    seed: u64,
    opts: &PointwiseOptions,
) -> Result<Residues> {
    let f = Fp::new(p);
    let d = prep.d as i32;
    let val_q = [d - 2 * m as i32; 3];
    let e = [out[0] - val_q[0], out[1] - val_q[1], out[2] - val_q[2]];
    if e.iter().any(|&x| x < 0) {
        return Err(Error::Invalid(format!("output box {out:?} lies below the quotient valuation {val_q:?}")));
    }
    let ex = Excess::new(e);
    let coefs = prep
        .coords
        .iter()
        .map(|row| row.iter().map(|(i, c)| (*i, f.from_bigint(c))).collect())
        .collect();
    let mut series: Vec<&QSeries> = data.alpha.iter().collect();
    if m > 0 {
        series.push(&data.chi18);
    }
    let r = max_exponent(&series);
    let pe = PointEval { f, prep, data, m, ex: ex.clone(), coefs, r };

    // Keys of the quotient and their exponent bounds.
    let keys: Vec<(usize, QKey, [i32; 3])> = ex
        .exps
        .iter()
        .enumerate()
        .map(|(pos, x)| {
            let k = [val_q[0] + x[0] as i32, val_q[1] + x[1] as i32, val_q[2] + x[2] as i32];
            let b = if k.iter().any(|&c| c < 0) { [0; 3] } else { psd_bounds(k) };
            (pos, k, b)
        })
        .collect();
    let mut gmax = [0usize; 3];
    for (_, _, b) in &keys {
        for a in 0..3 {
            gmax[a] = gmax[a].max(2 * b[a] as usize + 1);
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ncoords = prep.coords.len();
    for _attempt in 0..8 {
        let grid: [Vec<u64>; 3] = std::array::from_fn(|a| random_values(&mut rng, &f, gmax[a], &[1]));
        let points: Vec<[usize; 3]> = (0..gmax[0])
            .flat_map(|i| (0..gmax[1]).flat_map(move |j| (0..gmax[2]).map(move |k| [i, j, k])))
            .collect();
        let evals: Vec<Option<Vec<Vec<u64>>>> =
            points.par_iter().map(|ix| pe.eval([grid[0][ix[0]], grid[1][ix[1]], grid[2][ix[2]]])).collect();
        if evals.iter().any(|x| x.is_none()) {
            continue;
        }
        let evals: Vec<Vec<Vec<u64>>> = evals.into_iter().map(|x| x.unwrap()).collect();
        let gi = |i: usize, j: usize, k: usize| (i * gmax[1] + j) * gmax[2] + k;
        let invs: Vec<[Vec<Vec<u64>>; 3]> = {
            let mut cache: BTreeMap<[i32; 3], [Vec<Vec<u64>>; 3]> = BTreeMap::new();
            for (_, _, b) in &keys {
                cache.entry(*b).or_insert_with(|| {
                    std::array::from_fn(|a| inverse_vandermonde(&f, &grid[a][..2 * b[a] as usize + 1]))
                });
            }
            keys.iter().map(|(_, _, b)| cache[b].clone()).collect()
        };
        let mut blocks = Vec::new();
        for coord in 0..ncoords {
            for (ki, (pos, k, b)) in keys.iter().enumerate() {
                let vals = |i: usize, j: usize, l: usize| evals[gi(i, j, l)][coord][*pos];
                if k.iter().any(|&c| c < 0) {
                    if points.iter().any(|ix| vals(ix[0], ix[1], ix[2]) != 0) {
                        return Err(Error::NotDivisible(*k));
                    }
                    continue;
                }
                let coeffs = interpolate(&f, &vals, &grid, &invs[ki], *b);
                blocks.push((coord, *k, *b, coeffs));
            }
        }
        // Confirm at fresh points.
        let mut checked = 0;
        while checked < opts.check_points {
            let pt: [u64; 3] = std::array::from_fn(|_| rng.gen_range(2..f.p));
            let Some(v) = pe.eval(pt) else { continue };
            for (coord, k, b, coeffs) in &blocks {
                let pos = ex.idx([(k[0] - val_q[0]) as usize, (k[1] - val_q[1]) as usize, (k[2] - val_q[2]) as usize]);
                if eval_laurent(&f, coeffs, *b, pt) != v[*coord][pos] {
                    return Err(if m > 0 {
                        Error::NotDivisible(*k)
                    } else {
                        Error::Invalid(format!("block {k:?} exceeds the semidefinite exponent bound"))
                    });
                }
            }
            checked += 1;
        }
        return Ok(Residues { blocks });
    }
    Err(Error::Invalid("leading block of chi18 vanished on every sampled grid".into()))
}

/// gamma'(c) / chi18^m on keys <= out, exact.
pub fn gamma_prime_quotient(
    c: &Concomitant,
    data: &ThetaData,
    m: u32,
    out: QKey,
    opts: &PointwiseOptions,
) -> Result<VectorValuedForm> {
    let (na, nc) = required_boxes(out, c.d, m);
    if !key_le(na, data.alpha_trunc()) {
        return Err(Error::Truncation { needed: na, have: data.alpha_trunc() });
    }
    if m > 0 && !key_le(nc, data.chi18_trunc()) {
        return Err(Error::Truncation { needed: nc, have: data.chi18_trunc() });
    }
    let prep = prepare(c, data)?;
    let primes = large_primes(opts.max_primes);
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut layout: Vec<(usize, QKey, [i32; 3])> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<Vec<BigInt>>> = None;
    for (pi, &p) in primes.iter().enumerate() {
        let res = residues_for_prime(&prep, data, m, out, p, trial_seed(opts.seed, pi as u64), opts)?;
        let pb = BigInt::from(p);
        if pi == 0 {
            layout = res.blocks.iter().map(|(c, k, b, _)| (*c, *k, *b)).collect();
            acc = res.blocks.iter().map(|(_, _, _, v)| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        } else {
            let f = Fp::new(p);
            let minv = f.inv(f.from_bigint(&modulus));
            for (a, (_, _, _, v)) in acc.iter_mut().zip(&res.blocks) {
                for (x, &r) in a.iter_mut().zip(v) {
                    let t = f.mul(f.sub(r, f.from_bigint(x)), minv);
                    *x += &modulus * BigInt::from(t);
                }
            }
        }
        modulus *= pb;
        let half = &modulus / 2;
        let lifted: Vec<Vec<BigInt>> = acc
            .iter()
            .map(|a| a.iter().map(|x| if *x > half { x - &modulus } else { x.clone() }).collect())
            .collect();
        if previous.as_ref() == Some(&lifted) {
            return assemble(&prep, data, m, out, &layout, lifted);
        }
        previous = Some(lifted);
    }
    Err(Error::Invalid(format!("CRT did not stabilize within {} primes", opts.max_primes)))
}

fn assemble(
    prep: &Prepared,
    data: &ThetaData,
    m: u32,
    out: QKey,
    layout: &[(usize, QKey, [i32; 3])],
    values: Vec<Vec<BigInt>>,
) -> Result<VectorValuedForm> {
    let g = values.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let ncoords = prep.coords.len();
    let mut terms: Vec<Vec<(QKey, [i32; 3], Coef)>> = vec![Vec::new(); ncoords];
    for ((coord, k, b), v) in layout.iter().zip(values) {
        let n = [2 * b[0] + 1, 2 * b[1] + 1, 2 * b[2] + 1];
        for (idx, x) in v.into_iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let idx = idx as i32;
            let e = [idx / (n[1] * n[2]) - b[0], (idx / n[2]) % n[1] - b[1], idx % n[2] - b[2]];
            let c = (x / &g)
                .to_i128()
                .ok_or_else(|| Error::Invalid("quotient coefficient exceeds 128 bits".into()))?;
            terms[*coord].push((*k, e, c));
        }
    }
    let val = [(prep.d as i32 - 2 * m as i32).max(0); 3];
    let coords = terms.into_iter().map(|t| QSeries::from_terms(1, 1, out, val, t)).collect();
    let scale = &prep.kappa_d * Rat::from_integer(g) / Rat::from_integer(prep.denominator.clone())
        / data.chi18_scale.pow(m as i32);
    let mut w = prep.weight;
    w[2] -= 18 * m as i64;
    VectorValuedForm::new(w, coords, scale)
}

/// gamma'(c) on keys <= out.
pub fn gamma_prime(c: &Concomitant, data: &ThetaData, out: QKey, opts: &PointwiseOptions) -> Result<VectorValuedForm> {
    gamma_prime_quotient(c, data, 0, out, opts)
}

/// Exact division of a form by chi18^m, block by block in graded order.
/// Fails with NotDivisible at the first block whose Laurent division is
/// not exact.
pub fn divide_chi18(form: &VectorValuedForm, m: u32, chi18: &QSeries, chi18_scale: &Rat) -> Result<VectorValuedForm> {
    if m == 0 {
        return Ok(form.clone());
    }
    let shift = 2 * m as i32;
    let out = sub_scalar(form.trunc(), shift);
    if out.iter().any(|&x| x < 0) {
        return Err(Error::Truncation { needed: [shift; 3], have: form.trunc() });
    }
    let need = add_key(out, [2; 3]).map(|x| x - 2 * (m as i32 - 1));
    if !key_le(need, chi18.trunc) {
        return Err(Error::Truncation { needed: need, have: chi18.trunc });
    }
    let x = chi18.pow_to(m, form.trunc());
    let lead = x.block([shift; 3]).ok_or(Error::NotDivisible([0; 3]))?.clone();
    let mut keys: Vec<QKey> = Vec::new();
    for a in 0..=out[0] {
        for b in 0..=out[1] {
            for c in 0..=out[2] {
                keys.push([a, b, c]);
            }
        }
    }
    keys.sort_by_key(|k| (k.iter().sum::<i32>(), *k));
    let mut coords = Vec::with_capacity(form.coords.len());
    for s in &form.coords {
        // Numerator blocks below the shifted box must vanish.
        if let Some(k) = s.terms().keys().map(|(k, _)| *k).find(|k| k.iter().any(|&c| c < shift)) {
            return Err(Error::NotDivisible(sub_scalar(k, shift)));
        }
        let mut q: BTreeMap<QKey, Block> = BTreeMap::new();
        for &n in &keys {
            let target = add_key(n, [shift; 3]);
            let mut r = s.block(target).cloned();
            for (k, qb) in &q {
                if !key_le(*k, n) {
                    continue;
                }
                let j = [n[0] - k[0] + shift, n[1] - k[1] + shift, n[2] - k[2] + shift];
                if let Some(xb) = x.block(j) {
                    if let Some(prod) = qb.mul(xb) {
                        match &mut r {
                            Some(rb) => rb.add_scaled(&prod, -1),
                            None => {
                                let mut z = prod;
                                z.scale(-1);
                                r = Some(z);
                            }
                        }
                    }
                }
            }
            let Some(rb) = r.and_then(|b| b.normalized()) else { continue };
            let b = psd_bounds(n);
            match rb.div_laurent(&lead, [-b[0], -b[1], -b[2]], b) {
                Some(Some(qb)) => {
                    q.insert(n, qb);
                }
                Some(None) => {}
                None => return Err(Error::NotDivisible(n)),
            }
        }
        let mut out_s = QSeries::zero(1, 1, out, [0; 3]);
        let terms: Vec<(QKey, [i32; 3], Coef)> =
            q.iter().flat_map(|(k, b)| b.terms().map(move |(e, c)| (*k, e, c))).collect();
        if !terms.is_empty() {
            out_s = QSeries::from_terms(1, 1, out, [0; 3], terms);
        }
        coords.push(out_s);
    }
    let mut w = form.weight;
    w[2] -= 18 * m as i64;
    VectorValuedForm::new(w, coords, &form.scale / chi18_scale.pow(m as i32))
}

/// Largest absolute coefficient, for diagnostics.
pub fn max_coefficient(f: &VectorValuedForm) -> Coef {
    f.coords.iter().flat_map(|s| s.terms().into_values()).map(|x| x.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::universal_quartic;
    use crate::theta3::forms::{chi18_primitive, chi408};

    #[test]
    fn chi18_multiple_divides_back() {
        let (f, _) = chi408([2, 2, 2]).unwrap();
        let (c18, s18) = chi18_primitive([4, 4, 4]).unwrap();
        let coords = f.coords.iter().map(|s| s.mul_to(&c18, [4, 4, 4])).collect();
        let prod = VectorValuedForm::new([4, 0, 26], coords, &f.scale * &s18).unwrap();
        let back = divide_chi18(&prod, 1, &c18, &s18).unwrap();
        assert_eq!(back.weight, [4, 0, 8]);
        assert_eq!(back.trunc(), [2, 2, 2]);
        assert_eq!(back.first_difference(&f), None);
    }

    #[test]
    fn chi408_is_not_divisible() {
        let (f, _) = chi408([2, 2, 2]).unwrap();
        let (c18, s18) = chi18_primitive([2, 2, 2]).unwrap();
        assert!(matches!(divide_chi18(&f, 1, &c18, &s18), Err(Error::NotDivisible(_))));
        let data = ThetaData::for_quotient([1, 1, 1], 1, 1).unwrap();
        let r = gamma_prime_quotient(&universal_quartic(), &data, 1, [1, 1, 1], &PointwiseOptions::default());
        assert!(matches!(r, Err(Error::NotDivisible(_))));
    }

    #[test]
    fn insufficient_data_is_reported() {
        let data = ThetaData::for_quotient([1, 1, 1], 3, 0).unwrap();
        let r = gamma_prime(&universal_quartic(), &data, [3, 3, 3], &PointwiseOptions::default());
        assert!(matches!(r, Err(Error::Truncation { .. })));
    }

    #[test]
    fn required_boxes_shift() {
        assert_eq!(required_boxes([2, 2, 2], 1, 0), ([2, 2, 2], [2, 2, 2]));
        assert_eq!(required_boxes([3, 2, 2], 5, 2), ([3, 2, 2], [5, 4, 4]));
    }
}
