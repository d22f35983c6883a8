//! Exact rational scalars.
//!
//! Every coefficient in this crate is a [`Rational`]: arbitrary-precision,
//! always in lowest terms, denominator always positive. There is no floating
//! point anywhere; equality of divisor classes and linear-program optima is
//! exact equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number, stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor used pervasively in tests and builders.
///
/// Panics if `denom == 0`; untrusted input goes through [`parse_rational`]
/// instead.
pub fn rat(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"` or `"p/q"` with `q > 0`. Never panics.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty rational literal".into()));
    }
    // Keep literals bounded so hostile documents cannot stall parsing.
    if s.len() > 256 {
        return Err(Error::InvalidInput(format!(
            "rational literal too long ({} characters)",
            s.len()
        )));
    }
    let mut parts = s.splitn(2, '/');
    let numer_str = parts.next().unwrap_or("");
    let numer: BigInt = numer_str
        .parse()
        .map_err(|_| Error::InvalidInput(format!("invalid integer `{numer_str}`")))?;
    let denom: BigInt = match parts.next() {
        None => BigInt::one(),
        Some(d) => d
            .parse()
            .map_err(|_| Error::InvalidInput(format!("invalid integer `{d}`")))?,
    };
    if denom <= BigInt::zero() {
        return Err(Error::InvalidInput(format!(
            "denominator must be positive in `{s}`"
        )));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders a rational as `"p"` when integral, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: rationals travel as `"p/q"` strings, never as floats.
pub mod serde_str {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 15/16 ").unwrap(), rat(15, 16));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn format_forms() {
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 16)), "-1/16");
        assert_eq!(format_rational(&rat(0, 5)), "0");
    }

    #[test]
    fn round_trip() {
        for s in ["0", "-7", "22/7", "-1/16"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }
}
