//! Fixed-point quantities with 0.01 resolution.
//!
//! Power is stored in centi-megawatts and money in units of ten thousand
//! dollars (0.01 million USD). Keeping both integral makes max-flow values and
//! budget comparisons exact. In JSON they are written as plain numbers with
//! exactly two decimals (`117.30`).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Largest magnitude accepted when converting from a decimal, in hundredths.
const MAX_HUNDREDTHS: i64 = 1 << 52;

fn format_hundredths(v: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let sign = if v < 0 { "-" } else { "" };
    let abs = v.unsigned_abs();
    write!(f, "{}{}.{:02}", sign, abs / 100, abs % 100)
}

/// Parses a decimal literal with at most two fractional digits.
fn parse_hundredths(s: &str) -> Result<i64, Error> {
    let bad = || Error::Quantity(format!("`{s}` is not a decimal with at most 2 fractional digits"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || frac_part.len() > 2 {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: i64 = int_part.parse().map_err(|_| bad())?;
    let mut frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    if frac_part.len() == 1 {
        frac *= 10;
    }
    let v = whole.checked_mul(100).and_then(|w| w.checked_add(frac)).ok_or_else(bad)?;
    if v > MAX_HUNDREDTHS {
        return Err(bad());
    }
    Ok(if neg { -v } else { v })
}

/// Converts a float known to carry at most two decimals. Anything finer is
/// rejected rather than silently rounded.
fn hundredths_from_f64(x: f64) -> Result<i64, Error> {
    if !x.is_finite() {
        return Err(Error::Quantity(format!("{x} is not finite")));
    }
    let scaled = x * 100.0;
    let rounded = scaled.round();
    if rounded.abs() > MAX_HUNDREDTHS as f64 {
        return Err(Error::Quantity(format!("{x} is out of range")));
    }
    if (scaled - rounded).abs() > 1e-6 * rounded.abs().max(1.0) {
        return Err(Error::Quantity(format!("{x} has more than 2 decimal places")));
    }
    Ok(rounded as i64)
}

macro_rules! fixed_point_unit {
    ($(#[$meta:meta])* $name:ident, $unit:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(i64);

        impl $name {
            pub const ZERO: $name = $name(0);

            /// Wraps a raw count of hundredths.
            pub const fn from_hundredths(v: i64) -> Self {
                $name(v)
            }

            pub const fn hundredths(self) -> i64 {
                self.0
            }

            /// Whole units, e.g. `from_units(250)` is 250.00.
            pub const fn from_units(v: i64) -> Self {
                $name(v * 100)
            }

            pub fn from_f64(x: f64) -> Result<Self, Error> {
                hundredths_from_f64(x).map($name)
            }

            pub fn to_f64(self) -> f64 {
                self.0 as f64 / 100.0
            }

            pub const fn unit() -> &'static str {
                $unit
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                format_hundredths(self.0, f)
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                parse_hundredths(s.trim()).map($name)
            }
        }

        impl Add for $name {
            type Output = $name;

            fn add(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: $name) {
                self.0 += rhs.0;
            }
        }

        impl Sub for $name {
            type Output = $name;

            fn sub(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl Sum for $name {
            fn sum<I: Iterator<Item = $name>>(iter: I) -> $name {
                $name(iter.map(|v| v.0).sum())
            }
        }

        impl<'a> Sum<&'a $name> for $name {
            fn sum<I: Iterator<Item = &'a $name>>(iter: I) -> $name {
                $name(iter.map(|v| v.0).sum())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let raw = serde_json::value::RawValue::from_string(self.to_string())
                    .map_err(serde::ser::Error::custom)?;
                raw.serialize(serializer)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                deserializer.deserialize_any(HundredthsVisitor).map($name)
            }
        }
    };
}

struct HundredthsVisitor;

impl<'de> Visitor<'de> for HundredthsVisitor {
    type Value = i64;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number with at most 2 decimal places")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<i64, E> {
        i64::try_from(v)
            .ok()
            .and_then(|v| v.checked_mul(100))
            .filter(|v| *v <= MAX_HUNDREDTHS)
            .ok_or_else(|| E::custom(format!("{v} is out of range")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<i64, E> {
        v.checked_mul(100)
            .filter(|v| v.abs() <= MAX_HUNDREDTHS)
            .ok_or_else(|| E::custom(format!("{v} is out of range")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<i64, E> {
        hundredths_from_f64(v).map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<i64, E> {
        parse_hundredths(v.trim()).map_err(E::custom)
    }
}

fixed_point_unit!(
    /// Electrical power in hundredths of a megawatt.
    Power,
    "MW"
);

fixed_point_unit!(
    /// Money in hundredths of a million US dollars.
    Money,
    "million USD"
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_has_two_decimals() {
        assert_eq!(Power::from_hundredths(25050).to_string(), "250.50");
        assert_eq!(Money::from_hundredths(11730).to_string(), "117.30");
        assert_eq!(Money::from_hundredths(7).to_string(), "0.07");
        assert_eq!(Money::from_hundredths(-105).to_string(), "-1.05");
    }

    #[test]
    fn parse_decimal_text() {
        assert_eq!("4057.48".parse::<Power>().unwrap().hundredths(), 405748);
        assert_eq!("13.6".parse::<Money>().unwrap().hundredths(), 1360);
        assert_eq!("15".parse::<Power>().unwrap().hundredths(), 1500);
        assert!("1.234".parse::<Power>().is_err());
        assert!("1e3".parse::<Power>().is_err());
        assert!(".5".parse::<Power>().is_err());
    }

    #[test]
    fn float_conversion_rejects_extra_precision() {
        assert_eq!(Power::from_f64(117.30).unwrap().hundredths(), 11730);
        assert_eq!(Power::from_f64(0.29).unwrap().hundredths(), 29);
        assert!(Power::from_f64(0.125).is_err());
        assert!(Power::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn json_uses_fixed_two_decimals() {
        let v = vec![Money::from_units(117) + Money::from_hundredths(30), Money::ZERO];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, "[117.30,0.00]");
        let back: Vec<Money> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        let ints: Vec<Power> = serde_json::from_str("[250, 1000]").unwrap();
        assert_eq!(ints, vec![Power::from_units(250), Power::from_units(1000)]);
        assert!(serde_json::from_str::<Power>("1.001").is_err());
    }
}
