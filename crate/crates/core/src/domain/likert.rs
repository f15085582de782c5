use std::fmt;

use serde::{Deserialize, Serialize};

use super::DomainError;

/// Which Likert scale a rating was collected on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LikertScale {
    /// 0..=10, used for difficulty, priority, confidence and quality.
    Eleven,
    /// 1..=5, used for mood.
    Five,
}

impl LikertScale {
    pub const fn bounds(self) -> (u8, u8) {
        match self {
            LikertScale::Eleven => (0, 10),
            LikertScale::Five => (1, 5),
        }
    }

    pub fn contains(self, value: i64) -> bool {
        let (lo, hi) = self.bounds();
        (lo as i64..=hi as i64).contains(&value)
    }
}

impl fmt::Display for LikertScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.bounds();
        write!(f, "{lo}..={hi}")
    }
}

/// A rating on an 11-point (0..=10) or 5-point (1..=5) Likert scale.
///
/// Values serialize as bare integers; the scale is implied by the field
/// carrying them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LikertValue {
    value: u8,
    scale: LikertScale,
}

impl LikertValue {
    pub fn new(value: i64, scale: LikertScale) -> Result<Self, DomainError> {
        if !scale.contains(value) {
            return Err(DomainError::LikertOutOfRange { value, scale });
        }
        Ok(Self { value: value as u8, scale })
    }

    pub fn eleven(value: i64) -> Result<Self, DomainError> {
        Self::new(value, LikertScale::Eleven)
    }

    pub fn five(value: i64) -> Result<Self, DomainError> {
        Self::new(value, LikertScale::Five)
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn scale(self) -> LikertScale {
        self.scale
    }
}

impl fmt::Display for LikertValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Serialize for LikertValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.value)
    }
}
