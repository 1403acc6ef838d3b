//! Exact rational scalars and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, including `q = 1`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale down before converting
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}

/// Serde adapter for `(Rational, Rational)` points.
pub mod point {
    use super::*;
    use serde::ser::SerializeTuple;

    pub fn serialize<S: Serializer>(
        p: &(Rational, Rational),
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&format(&p.0))?;
        t.serialize_element(&format(&p.1))?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<(Rational, Rational), D::Error> {
        let (a, b) = <(String, String)>::deserialize(d)?;
        Ok((
            parse(&a).map_err(serde::de::Error::custom)?,
            parse(&b).map_err(serde::de::Error::custom)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format(&int(3)), "3/1");
        assert_eq!(format(&rat(2, -4)), "-1/2");
        assert_eq!(format(&rat(0, 7)), "0/1");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("1/10").unwrap(), rat(1, 10));
        assert_eq!(parse(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse("5").unwrap(), int(5));
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
    }

    proptest::proptest! {
        #[test]
        fn text_form_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            proptest::prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
