//! Small Laurent polynomials in u, v, w and a reader for displayed blocks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::theta3::block::Coef;
use crate::theta3::series::{QKey, QSeries};
use crate::Rat;

pub type Laurent = BTreeMap<[i32; 3], Coef>;

pub fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut m = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *m.entry([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]).or_insert(0) += ca * cb;
        }
    }
    m.retain(|_, v| *v != 0);
    m
}

pub fn laurent_add(a: &Laurent, b: &Laurent, c: Coef) -> Laurent {
    let mut m = a.clone();
    for (e, x) in b {
        *m.entry(*e).or_insert(0) += c * x;
    }
    m.retain(|_, v| *v != 0);
    m
}

fn constant(c: Coef) -> Laurent {
    let mut m = Laurent::new();
    if c != 0 {
        m.insert([0; 3], c);
    }
    m
}

fn pow(a: &Laurent, e: i32) -> Result<Laurent> {
    if e < 0 {
        let inv = invert_monomial(a)?;
        return pow(&inv, -e);
    }
    let mut out = constant(1);
    for _ in 0..e {
        out = laurent_mul(&out, a);
    }
    Ok(out)
}

fn invert_monomial(a: &Laurent) -> Result<Laurent> {
    match a.iter().next() {
        Some((e, &c)) if a.len() == 1 && c.abs() == 1 => Ok([([-e[0], -e[1], -e[2]], c)].into_iter().collect()),
        _ => Err(Error::Invalid("only unit monomials can be inverted".into())),
    }
}

/// The block of q^k of a series, as a Laurent polynomial.
pub fn block_of(s: &QSeries, k: QKey) -> Laurent {
    s.block(k).map(|b| b.terms().filter(|(_, c)| *c != 0).collect()).unwrap_or_default()
}

/// Where two Laurent polynomials stop being proportional.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentWitness {
    pub exp: [i32; 3],
    pub target: Coef,
    pub got: Coef,
    /// The scalar fixed by the first term of `got`, if any.
    pub scalar: Option<Rat>,
}

impl std::fmt::Display for LaurentWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "term u,v,w^{:?}: expected {} got {}", self.exp, self.target, self.got)?;
        if let Some(c) = &self.scalar {
            write!(f, " (scalar {c})")?;
        }
        Ok(())
    }
}

/// c with target = c * got, or the first exponent where no such c works.
pub fn scalar_or_witness(target: &Laurent, got: &Laurent) -> std::result::Result<Rat, LaurentWitness> {
    let Some((e0, g0)) = got.iter().next() else {
        let (e, t) = target.iter().next().map(|(e, t)| (*e, *t)).unwrap_or(([0; 3], 0));
        return Err(LaurentWitness { exp: e, target: t, got: 0, scalar: None });
    };
    let c = Rat::new(BigInt::from(target.get(e0).copied().unwrap_or(0)), BigInt::from(*g0));
    let keys: BTreeSet<[i32; 3]> = target.keys().chain(got.keys()).copied().collect();
    for e in keys {
        let t = target.get(&e).copied().unwrap_or(0);
        let g = got.get(&e).copied().unwrap_or(0);
        if Rat::from_integer(BigInt::from(t)) != &c * Rat::from_integer(BigInt::from(g)) || (t == 0 && g != 0 && c.is_zero()) {
            return Err(LaurentWitness { exp: e, target: t, got: g, scalar: Some(c) });
        }
    }
    if c.is_zero() {
        return Err(LaurentWitness { exp: *e0, target: 0, got: *g0, scalar: Some(c) });
    }
    Ok(c)
}

/// Read expressions in u, v, w, s1, s2, s3 (the elementary symmetric
/// functions) with integers, + - * / ^ and parentheses. Division is only
/// by monomials; a remaining integer denominator is returned separately.
pub fn parse_laurent(s: &str) -> Result<(Laurent, Coef)> {
    let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { t: toks, i: 0, den: 1 };
    let v = p.sum()?;
    if p.i != p.t.len() {
        return Err(Error::Invalid(format!("unexpected '{}' in '{s}'", p.t[p.i])));
    }
    Ok((v, p.den))
}

struct Parser {
    t: Vec<char>,
    i: usize,
    den: Coef,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<Laurent> {
        let mut sign = 1;
        if self.peek() == Some('-') {
            self.i += 1;
            sign = -1;
        }
        let first = self.product()?;
        let mut acc = laurent_add(&Laurent::new(), &first, sign);
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let t = self.product()?;
            acc = laurent_add(&acc, &t, if c == '+' { 1 } else { -1 });
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Laurent> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.i += 1;
                    acc = laurent_mul(&acc, &self.power()?);
                }
                Some('/') => {
                    self.i += 1;
                    let d = self.power()?;
                    match d.iter().next() {
                        Some((e, &c)) if d.len() == 1 => {
                            self.den *= c.abs();
                            let unit: Laurent = [(*e, c.signum())].into_iter().collect();
                            acc = laurent_mul(&acc, &invert_monomial(&unit)?);
                        }
                        _ => return Err(Error::Invalid("division by a non-monomial".into())),
                    }
                }
                Some('(' | 'u' | 'v' | 'w' | 's' | '0'..='9') => acc = laurent_mul(&acc, &self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Laurent> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.i += 1;
            let neg = self.peek() == Some('-');
            if neg {
                self.i += 1;
            }
            let e = self.integer()? as i32;
            return pow(&base, if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Coef> {
        let start = self.i;
        while matches!(self.peek(), Some('0'..='9')) {
            self.i += 1;
        }
        let s: String = self.t[start..self.i].iter().collect();
        s.parse().map_err(|_| Error::Invalid(format!("expected an integer at position {start}")))
    }

    fn atom(&mut self) -> Result<Laurent> {
        let mono = |e: [i32; 3]| -> Laurent { [(e, 1)].into_iter().collect() };
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Invalid("unbalanced parentheses".into()));
                }
                self.i += 1;
                Ok(v)
            }
            Some('u') => {
                self.i += 1;
                Ok(mono([1, 0, 0]))
            }
            Some('v') => {
                self.i += 1;
                Ok(mono([0, 1, 0]))
            }
            Some('w') => {
                self.i += 1;
                Ok(mono([0, 0, 1]))
            }
            Some('s') => {
                self.i += 1;
                let k = self.integer()?;
                let terms: &[[i32; 3]] = match k {
                    1 => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                    2 => &[[1, 1, 0], [1, 0, 1], [0, 1, 1]],
                    3 => &[[1, 1, 1]],
                    _ => return Err(Error::Invalid(format!("unknown symbol s{k}"))),
                };
                Ok(terms.iter().map(|e| (*e, 1)).collect())
            }
            Some('0'..='9') => Ok(constant(self.integer()?)),
            other => Err(Error::Invalid(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_functions_and_division() {
        let (a, d) = parse_laurent("(s3 - s2 + s1 - 1)").unwrap();
        let (b, _) = parse_laurent("(u-1)(v-1)(w-1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(d, 1);
        let (c, d) = parse_laurent("3(u-1)^2/(144 u^3 v)").unwrap();
        assert_eq!(d, 144);
        assert_eq!(c.get(&[-1, -1, 0]), Some(&3));
        assert_eq!(c.get(&[-3, -1, 0]), Some(&3));
        assert_eq!(c.get(&[-2, -1, 0]), Some(&-6));
        assert!(parse_laurent("1/(u+1)").is_err());
        assert_eq!(parse_laurent("-u^-2 + u").unwrap().0.get(&[-2, 0, 0]), Some(&-1));
    }

    #[test]
    fn scalar_and_witness() {
        let (a, _) = parse_laurent("2u - 4v").unwrap();
        let (b, _) = parse_laurent("-u + 2v").unwrap();
        assert_eq!(scalar_or_witness(&a, &b), Ok(Rat::from_integer(BigInt::from(-2))));
        let (c, _) = parse_laurent("-u + 2v + w").unwrap();
        let w = scalar_or_witness(&a, &c).unwrap_err();
        assert_eq!((w.exp, w.target, w.got), ([0, 0, 1], 0, 1));
        assert!(scalar_or_witness(&a, &Laurent::new()).is_err());
    }
}
