//! Vanishing order of concomitants along the locus of double conics,
//! measured on lines t -> g0^2 + t f0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::conc::concomitant::{concomitant, Concomitant};
use crate::conc::quartic::conic_square;
use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::modp::Fp;
use crate::rep3::apoly::APoly;
use crate::rep3::WeightGL3;
use crate::Rat;

/// A point of the line g0^2 + t f0, as coordinates a_I(t) = c0 + c1 t.
#[derive(Clone, Debug)]
pub struct DcLine<E> {
    pub c0: Vec<E>,
    pub c1: Vec<E>,
}

/// Per-trial seed derived from a master seed.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng.gen()
}

pub fn random_line_mod(f: &Fp, seed: u64) -> DcLine<u64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let f0: Vec<u64> = (0..15).map(|_| rng.gen_range(0..f.p)).collect();
    let g0: Vec<u64> = (0..6).map(|_| rng.gen_range(0..f.p)).collect();
    DcLine { c0: conic_square(f, &g0), c1: f0 }
}

pub fn random_line_rat(seed: u64) -> DcLine<Rat> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let f0: Vec<Rat> = (0..15).map(|_| Q.from_i64(rng.gen_range(-50..=50))).collect();
    let g0: Vec<Rat> = (0..6).map(|_| Q.from_i64(rng.gen_range(-50..=50))).collect();
    DcLine { c0: conic_square(&Q, &g0), c1: f0 }
}

fn tmul<F: Field>(f: &F, a: &[F::E], b: &[F::E], n: usize) -> Vec<F::E> {
    let mut out = vec![f.zero(); n.min(a.len() + b.len() - 1)];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Powers a_I(t)^e truncated to `n` terms, for e = 0..=maxe.
struct LinePowers<E> {
    pows: Vec<Vec<Vec<E>>>,
}

impl<E: Clone> LinePowers<E> {
    fn new<F: Field<E = E>>(f: &F, line: &DcLine<E>, maxe: usize, n: usize) -> Self {
        let pows = (0..15)
            .map(|i| {
                let lin = vec![line.c0[i].clone(), line.c1[i].clone()];
                let mut v = vec![vec![f.one()]];
                for e in 1..=maxe {
                    let next = tmul(f, &v[e - 1], &lin, n);
                    v.push(next);
                }
                v
            })
            .collect();
        LinePowers { pows }
    }
}

/// Coefficients of p(a(t)) in t up to t^(n-1); None if a coefficient
/// denominator is not invertible in the field.
pub fn eval_on_line<F: Field>(f: &F, p: &APoly, line: &DcLine<F::E>, n: usize) -> Option<Vec<F::E>> {
    let maxe = p.terms.keys().flat_map(|m| m.iter().copied()).max().unwrap_or(0) as usize;
    let lp = LinePowers::new(f, line, maxe, n);
    eval_with_powers(f, p, &lp, n)
}

fn eval_with_powers<F: Field>(f: &F, p: &APoly, lp: &LinePowers<F::E>, n: usize) -> Option<Vec<F::E>> {
    let mut acc = vec![f.zero(); n];
    for (m, c) in &p.terms {
        let mut term = vec![f.from_rat(c)?];
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                term = tmul(f, &term, &lp.pows[i][e as usize], n);
            }
        }
        for (k, x) in term.iter().enumerate() {
            acc[k] = f.add(&acc[k], x);
        }
    }
    Some(acc)
}

fn valuation<F: Field>(f: &F, v: &[F::E]) -> Option<usize> {
    v.iter().position(|x| !f.is_zero(x))
}

/// Minimum t-adic valuation over the coordinates of c on one line;
/// None if every coordinate vanishes identically on it.
pub fn order_on_line<F: Field>(f: &F, c: &Concomitant, line: &DcLine<F::E>) -> Result<Option<usize>> {
    let n = c.d as usize + 1;
    let lp = LinePowers::new(f, line, c.d as usize, n);
    let mut best: Option<usize> = None;
    for coord in &c.coords {
        let v = eval_with_powers(f, &coord.poly, &lp, n)
            .ok_or_else(|| Error::Invalid("coefficient denominator vanishes modulo p".into()))?;
        if let Some(k) = valuation(f, &v) {
            best = Some(best.map_or(k, |b| b.min(k)));
            if k == 0 {
                break;
            }
        }
    }
    Ok(best)
}

fn min_over_trials(results: Vec<Result<Option<usize>>>) -> Result<u32> {
    let mut best: Option<usize> = None;
    for r in results {
        if let Some(k) = r? {
            best = Some(best.map_or(k, |b| b.min(k)));
        }
    }
    best.map(|b| b as u32).ok_or(Error::ZeroConcomitant)
}

/// Generic order of c along double conics, over F_p.
pub fn order_along_dc(c: &Concomitant, trials: usize, seed: u64, modulus: u64) -> Result<u32> {
    let f = Fp::new(modulus);
    let results = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|k| order_on_line(&f, c, &random_line_mod(&f, trial_seed(seed, k))))
        .collect();
    min_over_trials(results)
}

/// Same measurement with exact rational arithmetic.
pub fn order_along_dc_exact(c: &Concomitant, trials: usize, seed: u64) -> Result<u32> {
    let results = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|k| order_on_line(&Q, c, &random_line_rat(trial_seed(seed, k))))
        .collect();
    min_over_trials(results)
}

/// Dimension of the part of the multiplicity space of type (d, lam) whose
/// concomitants vanish to order >= m along double conics.
pub fn dc_filtered_dimension(
    d: u32,
    lam: &WeightGL3,
    m: u32,
    samples: usize,
    seed: u64,
    modulus: u64,
) -> Result<usize> {
    let hw = crate::conc::hwv::highest_weight_vectors(d, lam)?;
    let k = hw.len();
    if k == 0 || m == 0 {
        return Ok(k);
    }
    // The line distribution is invariant under GL3(F_p) and the type is
    // irreducible, so generic vanishing of the leading coordinate on random
    // lines is equivalent to generic vanishing of every coordinate.
    let f = Fp::new(modulus);
    let n = m as usize;
    let rows = (0..samples.max(1) as u64)
        .into_par_iter()
        .map(|s| {
            let line = random_line_mod(&f, trial_seed(seed, s));
            let lp = LinePowers::new(&f, &line, d as usize, n);
            let mut rows = vec![vec![0u64; k]; n];
            for (i, p) in hw.iter().enumerate() {
                let v = eval_with_powers(&f, p, &lp, n).expect("integral highest weight vectors");
                for (j, x) in v.into_iter().enumerate() {
                    rows[j][i] = x;
                }
            }
            rows
        })
        .flatten()
        .collect::<Vec<_>>();
    Ok(k - crate::linalg::rank_mod(&rows, k, &f))
}

/// As `dc_filtered_dimension`, for an explicit list of concomitants of one type.
pub fn dc_filtered_dimension_of(
    concs: &[Concomitant],
    m: u32,
    samples: usize,
    seed: u64,
    modulus: u64,
) -> Result<usize> {
    let f = Fp::new(modulus);
    let k = concs.len();
    let n = m as usize;
    let per_sample: Vec<Vec<Vec<u64>>> = (0..samples.max(1) as u64)
        .into_par_iter()
        .map(|s| {
            let line = random_line_mod(&f, trial_seed(seed, s));
            let maxe = concs.iter().map(|c| c.d as usize).max().unwrap_or(0);
            let lp = LinePowers::new(&f, &line, maxe, n);
            let ncoord = concs[0].coords.len();
            let mut rows = vec![vec![0u64; k]; ncoord * n];
            for (i, c) in concs.iter().enumerate() {
                for (ci, coord) in c.coords.iter().enumerate() {
                    let v = eval_with_powers(&f, &coord.poly, &lp, n)
                        .ok_or_else(|| Error::Invalid("coefficient denominator vanishes modulo p".into()))?;
                    for (j, x) in v.into_iter().enumerate() {
                        rows[ci * n + j][i] = x;
                    }
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<u64>> = per_sample.into_iter().flatten().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let rank = crate::linalg::rank_mod(&rows, k, &f);
    Ok(k - rank)
}

/// Basis (over Q) of the combinations of the highest weight vectors of type
/// (d, lam) that vanish to order >= m on `samples` random rational lines
/// through double conics. Each sample can only shrink the space, so the
/// result contains the true subspace; callers confirm the order afterwards.
pub fn dc_vanishing_combinations(d: u32, lam: &WeightGL3, m: u32, samples: usize, seed: u64) -> Result<Vec<Vec<Rat>>> {
    let hw = crate::conc::hwv::highest_weight_vectors(d, lam)?;
    let k = hw.len();
    let n = m as usize;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for s in 0..samples.max(1) as u64 {
        let line = random_line_rat(trial_seed(seed, s));
        let lp = LinePowers::new(&Q, &line, d as usize, n);
        let mut block = vec![vec![Rat::from_integer(0.into()); k]; n];
        for (i, p) in hw.iter().enumerate() {
            let v = eval_with_powers(&Q, p, &lp, n).ok_or(Error::Singular)?;
            for (j, x) in v.into_iter().enumerate() {
                block[j][i] = x;
            }
        }
        rows.extend(block);
    }
    Ok(crate::linalg::kernel_rat(&rows, k))
}

/// Convenience wrapper: order of the index-th concomitant of a type.
pub fn order_of_type(d: u32, lam: &WeightGL3, index: usize, trials: usize, seed: u64, modulus: u64) -> Result<u32> {
    order_along_dc(&concomitant(d, lam, index)?, trials, seed, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::concomitant::universal_quartic;
    use crate::modp::DEFAULT_PRIME;

    #[test]
    fn universal_quartic_has_order_zero() {
        let f = universal_quartic();
        assert_eq!(order_along_dc(&f, 3, 1, DEFAULT_PRIME).unwrap(), 0);
        assert_eq!(order_along_dc_exact(&f, 2, 1).unwrap(), 0);
    }

    #[test]
    fn degree_two_orders_are_zero() {
        for lam in [[8, 0, 0], [6, 2, 0], [4, 4, 0]] {
            let w = WeightGL3(lam);
            assert_eq!(dc_filtered_dimension(2, &w, 0, 3, 7, DEFAULT_PRIME).unwrap(), 1);
            assert_eq!(dc_filtered_dimension(2, &w, 1, 3, 7, DEFAULT_PRIME).unwrap(), 0, "{lam:?}");
        }
    }

    #[test]
    fn product_with_f_keeps_order() {
        let f = universal_quartic();
        let c = concomitant(2, &WeightGL3::new(4, 4, 0), 0).unwrap();
        let fc = c.product_with_covariant(&f).unwrap();
        assert_eq!(
            order_along_dc(&fc, 3, 3, DEFAULT_PRIME).unwrap(),
            order_along_dc(&c, 3, 3, DEFAULT_PRIME).unwrap()
        );
    }

    #[test]
    fn degree_three_vanishing_types() {
        for lam in [[9, 3, 0], [7, 4, 1]] {
            let c = concomitant(3, &WeightGL3(lam), 0).unwrap();
            assert_eq!(order_along_dc(&c, 3, 11, DEFAULT_PRIME).unwrap(), 1, "{lam:?}");
            assert_eq!(order_along_dc_exact(&c, 1, 11).unwrap(), 1, "{lam:?}");
        }
    }

    #[test]
    fn zero_concomitant_is_error() {
        let mut c = universal_quartic();
        for x in c.coords.iter_mut() {
            x.poly = APoly::zero();
        }
        assert!(matches!(order_along_dc(&c, 2, 0, DEFAULT_PRIME), Err(Error::ZeroConcomitant)));
    }
}
