//! Exact decimal <-> rational conversion.
//!
//! Every number in the scenario documents is a decimal literal. They are kept
//! as [`Rational`] so that constraint checks never depend on floating point
//! rounding.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{text}` is not an exact decimal number representable with 64-bit integers")]
pub struct DecimalError {
    pub text: String,
}

/// Parse a decimal literal (`12`, `-3.25`, `1.5e3`) or a fraction (`7/3`).
pub fn parse_decimal(text: &str) -> Result<Rational, DecimalError> {
    let err = || DecimalError { text: text.to_string() };
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i64 = digits.trim_start_matches('0').parse().unwrap_or(0);
    if digits.trim_start_matches('0').len() > 18 {
        return Err(err());
    }
    let scale = exponent - frac_part.len() as i32;
    let mut denom: i64 = 1;
    if scale >= 0 {
        for _ in 0..scale {
            numer = numer.checked_mul(10).ok_or_else(err)?;
        }
    } else {
        for _ in 0..(-scale) {
            denom = denom.checked_mul(10).ok_or_else(err)?;
        }
    }
    if negative {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

/// Decimal rendering when the value terminates in base ten, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let mut denom = *value.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while denom % 2 == 0 {
        denom /= 2;
        twos += 1;
    }
    while denom % 5 == 0 {
        denom /= 5;
        fives += 1;
    }
    if denom != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scale = 10i128.pow(places);
    let scaled = (*value.numer() as i128) * scale / (*value.denom() as i128);
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let int = abs / scale as u128;
    let frac = abs % scale as u128;
    format!("{sign}{int}.{frac:0width$}", width = places as usize)
}

/// Decimal text suitable for formats that only accept plain decimals (LP).
///
/// Non-terminating values are rounded to 15 significant fractional digits.
pub fn format_decimal_lossy(value: &Rational) -> String {
    let exact = format_rational(value);
    if !exact.contains('/') {
        return exact;
    }
    let f = value.to_f64().unwrap_or(0.0);
    let s = format!("{f:.15}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

/// `serde(with = "...")` adapter: reads decimal numbers or `"p/q"` strings,
/// writes plain JSON numbers whenever the value is a terminating decimal.
pub mod serde_decimal {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_json(value).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(de::Error::custom)
    }

    pub fn to_json(value: &Rational) -> serde_json::Value {
        let text = format_rational(value);
        match serde_json::Number::from_str(&text) {
            Ok(n) if !text.contains('/') => serde_json::Value::Number(n),
            _ => serde_json::Value::String(text),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Rational, String> {
        match v {
            serde_json::Value::Number(n) => parse_decimal(&n.to_string()).map_err(|e| e.to_string()),
            serde_json::Value::String(s) => parse_decimal(s).map_err(|e| e.to_string()),
            other => Err(format!("expected a number, found {other}")),
        }
    }
}

/// Same as [`serde_decimal`] for `Option<Rational>`.
pub mod serde_decimal_opt {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        value.as_ref().map(serde_decimal::to_json).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => serde_decimal::from_json(&v).map(Some).map_err(de::Error::custom),
        }
    }
}

/// Display wrapper printing a rational as decimal text.
pub struct Dec<'a>(pub &'a Rational);

impl fmt::Display for Dec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn zero() -> Rational {
    Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_scientific_decimals() {
        assert_eq!(parse_decimal("12").unwrap(), Rational::from_integer(12));
        assert_eq!(parse_decimal("-3.25").unwrap(), Rational::new(-13, 4));
        assert_eq!(parse_decimal("1.5e3").unwrap(), Rational::from_integer(1500));
        assert_eq!(parse_decimal("25e-2").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_decimal("7/3").unwrap(), Rational::new(7, 3));
        assert_eq!(parse_decimal(".5").unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1.2.3", "1/0", "--1", "1e", "123456789012345678901"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&Rational::new(13, 4)), "3.25");
        assert_eq!(format_rational(&Rational::new(-1, 8)), "-0.125");
        assert_eq!(format_rational(&Rational::new(1, 3)), "1/3");
        assert_eq!(format_rational(&Rational::from_integer(-7)), "-7");
        assert_eq!(format_decimal_lossy(&Rational::new(1, 3)), "0.333333333333333");
    }

    proptest::proptest! {
        #[test]
        fn decimal_text_round_trips(n in -1_000_000i64..1_000_000, places in 0u32..6) {
            let value = Rational::new(n, 10i64.pow(places));
            proptest::prop_assert_eq!(parse_decimal(&format_rational(&value)).unwrap(), value);
        }
    }
}
