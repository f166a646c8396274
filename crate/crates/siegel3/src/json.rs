//! Serialization helpers: rationals travel as "p/q" strings.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::theta3::series::QSeries;
use crate::Rat;

pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Invalid(format!("bad rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn ser_rat<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(r))
}

pub fn de_rat<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    parse_rat(&s).map_err(serde::de::Error::custom)
}

/// `#[serde(with = "crate::json::rat_vec")]` for `Vec<Rat>` fields.
pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rat_to_string).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// One Fourier term; q exponents in quarters, u, v, w exponents in halves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub q: [i32; 3],
    pub uvw: [i32; 3],
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub trunc: [i32; 3],
    pub terms: Vec<TermJson>,
}

pub fn series_to_json(s: &QSeries) -> Result<SeriesJson> {
    let t = s.with_units(4, 2)?;
    if t.trunc.iter().zip(s.trunc).any(|(&a, b)| a as i64 * s.qden as i64 != b as i64 * 4) {
        return Err(Error::Invalid(format!("truncation {:?} is not representable in quarter units", s.trunc)));
    }
    let terms = t
        .terms()
        .into_iter()
        .map(|((q, uvw), c)| TermJson { q, uvw, re: format!("{c}/1"), im: "0/1".into() })
        .collect();
    Ok(SeriesJson { trunc: t.trunc, terms })
}

/// Read a series with integral real coefficients, in the given units.
pub fn series_from_json(j: &SeriesJson, qden: i32, uden: i32) -> Result<QSeries> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if !parse_rat(&t.im)?.is_zero() {
            return Err(Error::Invalid("complex coefficients are not supported here".into()));
        }
        let re = parse_rat(&t.re)?;
        if !re.is_integer() {
            return Err(Error::Invalid(format!("non-integral coefficient {}", t.re)));
        }
        let c = re.to_integer().to_i128().ok_or_else(|| Error::Invalid("coefficient exceeds 128 bits".into()))?;
        terms.push((t.q, t.uvw, c));
    }
    QSeries::from_terms(4, 2, j.trunc, [0; 3], terms).with_units(qden, uden)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_units() {
        let s = QSeries::from_terms(1, 1, [2, 2, 2], [0; 3], vec![([1, 1, 1], [0, -1, 2], 5), ([2, 1, 1], [1, 0, 0], -3)]);
        let j = series_to_json(&s).unwrap();
        assert_eq!(j.trunc, [8, 8, 8]);
        assert!(j.terms.iter().any(|t| t.q == [4, 4, 4] && t.uvw == [0, -2, 4] && t.re == "5/1"));
        let back = series_from_json(&j, 1, 1).unwrap();
        assert_eq!(back.first_difference(&s), None);
        assert_eq!(back.trunc, s.trunc);
        let eighth = QSeries::from_terms(8, 4, [8, 8, 8], [0; 3], vec![([1, 0, 0], [0, 0, 0], 1)]);
        assert!(series_to_json(&eighth).is_err());
    }

    #[test]
    fn roundtrip() {
        for s in ["3/4", "-12/1", "0/1"] {
            assert_eq!(rat_to_string(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("7").unwrap(), Rat::from_integer(BigInt::from(7)));
        assert!(parse_rat("1/0").is_err());
    }
}
