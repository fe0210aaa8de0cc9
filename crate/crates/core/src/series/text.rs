//! Canonical JSON form: `{"nvars": n, "prec": p, "terms": [{"exps": [..], "coef": "p/q"}, ..]}`
//! with terms in graded-lexicographic order and coefficients always written as `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Series;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermText {
    pub exps: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesText {
    pub nvars: usize,
    pub prec: u32,
    pub terms: Vec<TermText>,
}

pub fn rational_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Accepts `p/q` or a bare integer `p`; no decimals.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

impl From<&Series> for SeriesText {
    fn from(s: &Series) -> Self {
        SeriesText {
            nvars: s.nvars(),
            prec: s.prec(),
            terms: s
                .terms()
                .map(|(e, c)| TermText {
                    exps: e.entries().to_vec(),
                    coef: rational_to_string(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesText> for Series {
    type Error = String;

    fn try_from(t: &SeriesText) -> Result<Self, String> {
        let mut terms = Vec::with_capacity(t.terms.len());
        for term in &t.terms {
            if term.exps.len() != t.nvars {
                return Err(format!(
                    "term has {} exponents, expected {}",
                    term.exps.len(),
                    t.nvars
                ));
            }
            terms.push((term.exps.clone(), parse_rational(&term.coef)?));
        }
        Series::from_terms(t.nvars, t.prec, terms).map_err(|e| e.to_string())
    }
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesText::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let t = SeriesText::deserialize(deserializer)?;
        Series::try_from(&t).map_err(serde::de::Error::custom)
    }
}
