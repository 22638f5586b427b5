//! Exact rationals used throughout the crate.

use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Parses `p`, `p/q` or a finite decimal such as `0.25`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Some(r);
    }
    let (whole, frac) = s.split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let negative = whole.starts_with('-');
    let whole_abs: i64 = whole.trim_start_matches(['-', '+']).parse().unwrap_or(0);
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let numer = whole_abs
        .checked_mul(denom)?
        .checked_add(frac.parse::<i64>().ok()?)?;
    Some(Rational::new(if negative { -numer } else { numer }, denom))
}

/// Least non-negative representative of `x` modulo `m` (`m > 0`).
pub fn modulo(x: Rational, m: Rational) -> Rational {
    debug_assert!(m.is_positive());
    let q = (x / m).floor();
    let r = x - q * m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// Least common multiple of the denominators, 1 for an empty input.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, r| acc.lcm(r.denom()))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom() == &1 || x.numer().is_zero()
}

/// Serializes rationals as `"p/q"` strings.
pub mod serde_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/12"), Some(ratio(1, 4)));
        assert_eq!(parse("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse("7"), Some(int(7)));
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn modulo_wraps_negative_values() {
        assert_eq!(modulo(ratio(-1, 2), int(4)), ratio(7, 2));
        assert_eq!(modulo(ratio(9, 2), int(4)), ratio(1, 2));
        assert_eq!(modulo(int(8), int(4)), int(0));
    }
}
