//! Exact rational numbers.
//!
//! Every payoff, cost, altruism parameter and derived ratio in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Text form is `p` for integers and `p/q` otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `numer / denom` from machine integers. Panics on a zero denominator.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p`, `-p`, `p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(trimmed.to_string());
    match trimmed.split_once('/') {
        None => BigInt::from_str(trimmed)
            .map(Rational::from_integer)
            .map_err(|_| invalid()),
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| invalid())?;
            let den_str = den.trim();
            // a sign belongs on the numerator only
            if den_str.starts_with(['+', '-']) {
                return Err(invalid());
            }
            let den = BigInt::from_str(den_str).map_err(|_| invalid())?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(trimmed.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders in lowest terms: `p` when the denominator is one, `p/q` otherwise.
pub fn render(value: &Rational) -> String {
    Display(value).to_string()
}

/// `Display` adapter producing the canonical text form.
pub struct Display<'a>(pub &'a Rational);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        if r.denom().is_one() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

/// Least common multiple of the denominators of `values` (one for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

pub fn is_non_negative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&render(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(deserializer)?;
        raw.into_rational().map_err(de::Error::custom)
    }

    /// A rational as it may appear in a document: an integer literal or a string.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Int(i64),
        Text(String),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, ParseRationalError> {
            match self {
                RawRational::Int(v) => Ok(int(v)),
                RawRational::Text(t) => parse_rational(&t),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::serde_str::RawRational;
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&render(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RawRational>::deserialize(deserializer)?
            .into_iter()
            .map(|r| r.into_rational().map_err(de::Error::custom))
            .collect()
    }
}
