use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A dyadic number `2^n`, n >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct DyadicScale {
    n: u32,
}

impl DyadicScale {
    pub const ONE: DyadicScale = DyadicScale { n: 0 };

    pub fn from_exponent(n: u32) -> Self {
        assert!(n < 63, "dyadic exponent too large");
        DyadicScale { n }
    }

    pub fn from_value(v: u64) -> Result<Self> {
        if v == 0 || !v.is_power_of_two() {
            return Err(invalid("dyadic", format!("{v} is not a power of two")));
        }
        Ok(DyadicScale {
            n: v.trailing_zeros(),
        })
    }

    pub fn exponent(self) -> u32 {
        self.n
    }

    pub fn value(self) -> u64 {
        1u64 << self.n
    }

    pub fn value_f64(self) -> f64 {
        self.value() as f64
    }

    /// All dyadic scales 1, 2, 4, ..., up to and including `max`.
    pub fn up_to(max: DyadicScale) -> impl Iterator<Item = DyadicScale> {
        (0..=max.n).map(DyadicScale::from_exponent)
    }
}

impl TryFrom<u64> for DyadicScale {
    type Error = crate::error::ZlabError;
    fn try_from(v: u64) -> Result<Self> {
        DyadicScale::from_value(v)
    }
}

impl From<DyadicScale> for u64 {
    fn from(d: DyadicScale) -> u64 {
        d.value()
    }
}

impl fmt::Display for DyadicScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Shorthand used throughout tests and sweeps; panics on non powers of two.
pub fn dy(v: u64) -> DyadicScale {
    DyadicScale::from_value(v).expect("power of two")
}
