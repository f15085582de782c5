//! Millisecond-precision UTC timestamps.

use chrono::{DateTime, SecondsFormat, TimeZone, Utc};
use num::BigInt;
use serde::{Deserialize, Deserializer, Serializer};

use crate::rational::Rational;

pub type Timestamp = DateTime<Utc>;

pub const MILLIS_PER_DAY: i64 = 86_400_000;

/// `2014-01-06T09:00:00.000Z`
pub fn format(ts: &Timestamp) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Parses an RFC 3339 instant, rejecting sub-millisecond precision.
pub fn parse(text: &str) -> Result<Timestamp, String> {
    let parsed = DateTime::parse_from_rfc3339(text).map_err(|e| format!("{text:?}: {e}"))?;
    let ts = parsed.with_timezone(&Utc);
    if ts.timestamp_subsec_nanos() % 1_000_000 != 0 {
        return Err(format!("{text:?}: sub-millisecond precision"));
    }
    Ok(ts)
}

/// Drops anything finer than a millisecond.
pub fn truncate_millis(ts: Timestamp) -> Timestamp {
    from_millis(ts.timestamp_millis())
}

pub fn from_millis(ms: i64) -> Timestamp {
    Utc.timestamp_millis_opt(ms).single().expect("timestamp in range")
}

/// Elapsed time `later - earlier` as exact fractional days.
pub fn days_between(earlier: &Timestamp, later: &Timestamp) -> Rational {
    let ms = later.timestamp_millis() - earlier.timestamp_millis();
    Rational::new(BigInt::from(ms), BigInt::from(MILLIS_PER_DAY))
}

pub mod serde_millis {
    use super::*;

    pub fn serialize<S: Serializer>(ts: &Timestamp, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(ts))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Timestamp, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(ts: &Option<Timestamp>, s: S) -> Result<S::Ok, S::Error> {
            match ts {
                Some(ts) => s.serialize_str(&format(ts)),
                None => s.serialize_none(),
            }
        }
    }
}
