//! Exact rational numbers and their textual forms.
//!
//! Values are parsed from `"p/q"`, integer or finite decimal strings without
//! any rounding, and always printed back as `"p"` or `"p/q"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3"`, `"-3/4"`, `"0.125"` or `"2.50"` exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Schema(format!("`{text}` is not a rational number"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Schema(format!("`{text}` has a zero denominator")));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_textual_form() {
        assert_eq!(parse("5").unwrap(), int(5));
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse("4/8").unwrap(), ratio(1, 2));
        assert_eq!(parse("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("3.").unwrap(), int(3));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "abc", "1/0", "1.2.3", "1e3", ".", "--1"] {
            assert!(parse(text).is_err(), "{text} should not parse");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format(&ratio(6, 4)), "3/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
        assert_eq!(format(&zero()), "0");
    }

    #[test]
    fn decimal_parsing_is_exact() {
        // 0.1 has no finite binary expansion; exact parsing keeps it as 1/10.
        let tenth = parse("0.1").unwrap();
        assert_eq!(&tenth + &tenth + &tenth, ratio(3, 10));
    }
}
