//! Exact rational arithmetic helpers.
//!
//! Every metric is computed over [`Rational`] and only turned into a decimal
//! string at serialization time (six places, round half to even).

use std::fmt;
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Rational = BigRational;

/// Number of decimal places used by every report.
pub const REPORT_DECIMALS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Arithmetic mean; `None` for an empty input.
pub fn mean<'a, I>(values: I) -> Option<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut sum = Rational::zero();
    let mut n = 0i64;
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / int(n))
}

pub fn to_f64(value: &Rational) -> f64 {
    // BigRational::to_f64 handles huge numerators/denominators without overflow.
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-5/2"`, `"2.75"` or `"1e-3"` style literals exactly.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let mut numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact conversion of an `f64` through its shortest round-trip decimal form,
/// so `0.1` becomes `1/10` rather than the binary expansion.
pub fn from_f64_decimal(value: f64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    parse(&format!("{value}")).ok()
}

/// Canonical `p` or `p/q` text.
pub fn to_fraction_string(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Rounds to `decimals` places with ties going to the even neighbour.
pub fn round_half_even(value: &Rational, decimals: u32) -> BigInt {
    let scale = num::pow(BigInt::from(10), decimals as usize);
    let scaled = value * Rational::from_integer(scale);
    let floor = scaled.floor().to_integer();
    let rem = &scaled - Rational::from_integer(floor.clone());
    let half = ratio(1, 2);
    if rem > half || (rem == half && floor.is_odd()) {
        floor + BigInt::one()
    } else {
        floor
    }
}

/// Fixed-point decimal text with `decimals` places, half-even rounding.
pub fn to_fixed(value: &Rational, decimals: u32) -> String {
    let units = round_half_even(value, decimals);
    let negative = units.sign() == Sign::Minus;
    let digits = units.abs().to_string();
    let width = decimals as usize + 1;
    let padded = format!("{digits:0>width$}");
    let split = padded.len() - decimals as usize;
    let mut out = String::with_capacity(padded.len() + 2);
    if negative {
        out.push('-');
    }
    out.push_str(&padded[..split]);
    if decimals > 0 {
        out.push('.');
        out.push_str(&padded[split..]);
    }
    out
}

/// Six-place report form of a rational.
pub fn to_report(value: &Rational) -> String {
    to_fixed(value, REPORT_DECIMALS)
}

/// Six-place report form of a float, rounded half-even on its exact decimal value.
pub fn f64_to_report(value: f64) -> String {
    match from_f64_decimal(value) {
        Some(q) => to_report(&q),
        None => value.to_string(),
    }
}

/// Newtype wrapper giving a rational a `Display` in report form.
pub struct Report<'a>(pub &'a Rational);

impl fmt::Display for Report<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_report(self.0))
    }
}

/// Serde adapter: rationals as canonical `p/q` strings, accepting numbers or
/// strings on input.
pub mod serde_fraction {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a number or a rational literal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            from_f64_decimal(v).ok_or_else(|| E::custom("non-finite number"))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse(v).map_err(E::custom)
        }
    }
}

/// Serde adapter: rationals as six-place JSON numbers (output only).
pub mod serde_report {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        let text = to_report(value);
        s.serialize_f64(text.parse::<f64>().map_err(serde::ser::Error::custom)?)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(super::serde_fraction::RationalVisitor)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            struct Opt;
            impl<'de> Visitor<'de> for Opt {
                type Value = Option<Rational>;
                fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                    f.write_str("null or a rational")
                }
                fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                    Ok(None)
                }
                fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                    Ok(None)
                }
                fn visit_some<D2: Deserializer<'de>>(self, d: D2) -> Result<Self::Value, D2::Error> {
                    super::deserialize(d).map(Some)
                }
            }
            d.deserialize_option(Opt)
        }
    }
}

/// Serde adapter: maps with rational values in six-place form (output only).
pub mod serde_report_map {
    use super::*;
    use serde::ser::SerializeMap;
    use std::collections::BTreeMap;

    pub fn serialize<K, S>(map: &BTreeMap<K, Rational>, s: S) -> Result<S::Ok, S::Error>
    where
        K: serde::Serialize,
        S: Serializer,
    {
        let mut m = s.serialize_map(Some(map.len()))?;
        for (k, v) in map {
            let value: f64 = to_report(v).parse().map_err(serde::ser::Error::custom)?;
            m.serialize_entry(k, &value)?;
        }
        m.end()
    }
}

/// Serde adapter: floats as six-place JSON numbers.
pub mod serde_report_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        let text = f64_to_report(*value);
        s.serialize_f64(text.parse::<f64>().unwrap_or(*value))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }
}
