//! Polynomials with rational coefficients in the quartic coefficients a0..a14.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modp::Fp;
use crate::rep3::QUARTIC_EXPS;
use crate::Rat;

/// Exponent vector of a monomial in a0..a14.
pub type AMono = [u8; 15];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct APoly {
    pub terms: BTreeMap<AMono, Rat>,
}

pub fn mono_degree(m: &AMono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Torus weight of a monomial: sum of the exponent triples of its factors.
pub fn mono_weight(m: &AMono) -> [i64; 3] {
    let mut w = [0i64; 3];
    for (i, &e) in m.iter().enumerate() {
        for k in 0..3 {
            w[k] += e as i64 * QUARTIC_EXPS[i][k] as i64;
        }
    }
    w
}

pub fn mono_mul(a: &AMono, b: &AMono) -> AMono {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b.iter()) {
        *x += *y;
    }
    m
}

impl APoly {
    pub fn zero() -> Self {
        APoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = APoly::zero();
        p.add_term([0; 15], c);
        p
    }

    pub fn one() -> Self {
        APoly::constant(Rat::one())
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0u8; 15];
        m[i] = 1;
        let mut p = APoly::zero();
        p.add_term(m, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: AMono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &AMono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_scaled(&mut self, other: &APoly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(*m, x * c);
        }
    }

    pub fn add(&self, other: &APoly) -> APoly {
        let mut r = self.clone();
        r.add_scaled(other, &Rat::one());
        r
    }

    pub fn sub(&self, other: &APoly) -> APoly {
        let mut r = self.clone();
        r.add_scaled(other, &-Rat::one());
        r
    }

    pub fn scale(&self, c: &Rat) -> APoly {
        if c.is_zero() {
            return APoly::zero();
        }
        APoly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul(&self, other: &APoly) -> APoly {
        let mut r = APoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> APoly {
        let mut r = APoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Total degree if homogeneous, None otherwise (None also for zero).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(mono_degree);
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Common torus weight of all terms, if any.
    pub fn weight(&self) -> Option<[i64; 3]> {
        let mut it = self.terms.keys().map(mono_weight);
        let w = it.next()?;
        if it.all(|x| x == w) {
            Some(w)
        } else {
            None
        }
    }

    pub fn eval_rat(&self, a: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &a[i];
                }
            }
            s += t;
        }
        s
    }

    /// Evaluation modulo p; coefficient denominators must be prime to p.
    pub fn eval_mod(&self, a: &[u64], f: &Fp) -> u64 {
        let mut s = 0u64;
        for (m, c) in &self.terms {
            let mut t = f.from_rat(c).expect("denominator divisible by p");
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(t, a[i]);
                }
            }
            s = f.add(s, t);
        }
        s
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Gcd of numerators (after clearing denominators this is the content).
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Parse a polynomial written like "a10a14 - 4a11a13 + 3a12^2"
    /// (factors may be separated by '*', exponents by '^').
    pub fn parse(s: &str) -> Result<APoly> {
        let bad = |msg: &str| Error::Invalid(format!("cannot parse polynomial '{s}': {msg}"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut out = APoly::zero();
        while pos < chars.len() {
            let mut sign = 1i64;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let mut coef: BigInt = if pos > start {
                chars[start..pos].iter().collect::<String>().parse().map_err(|_| bad("coefficient"))?
            } else {
                BigInt::one()
            };
            let mut den = BigInt::one();
            if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                let s2 = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                den = chars[s2..pos].iter().collect::<String>().parse().map_err(|_| bad("denominator"))?;
            }
            coef *= sign;
            let mut m = [0u8; 15];
            loop {
                if pos < chars.len() && chars[pos] == '*' {
                    pos += 1;
                }
                if pos >= chars.len() || chars[pos] != 'a' {
                    break;
                }
                pos += 1;
                let s2 = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let idx: usize = chars[s2..pos].iter().collect::<String>().parse().map_err(|_| bad("index"))?;
                if idx >= 15 {
                    return Err(bad("index out of range"));
                }
                let mut e = 1u8;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let s3 = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    e = chars[s3..pos].iter().collect::<String>().parse().map_err(|_| bad("exponent"))?;
                }
                m[idx] += e;
            }
            if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                return Err(bad("unexpected character"));
            }
            out.add_term(m, Rat::new(coef, den));
        }
        Ok(out)
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "a{i}")?,
                    _ => write!(f, "a{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = APoly::parse("a10a14 - 4a11a13 + 3a12^2").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.weight(), Some([0, 4, 4]));
        let q = APoly::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn arithmetic() {
        let x = APoly::var(0);
        let y = APoly::var(1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq, APoly::parse("a0^2 + 2a0a1 + a1^2").unwrap());
        assert!(sq.sub(&sq).is_zero());
    }
}
