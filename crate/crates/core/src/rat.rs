//! Exact rational scalars shared across the crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, the coefficient type everywhere outside
/// `periodfit`.
pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact factorial.
pub fn factorial(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=u64::from(n) {
        out *= k;
    }
    out
}

/// Canonical `p/q` rendering: reduced, denominator positive, `/q` always
/// present (`0/1`, `-29/6`).
pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest double; NaN when the value overflows the float range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rat(text: &str) -> Result<Rat, String> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let n: BigInt = numer
        .parse()
        .map_err(|_| format!("`{numer}` is not an integer"))?;
    let d: BigInt = match denom {
        Some(d) => d.parse().map_err(|_| format!("`{d}` is not an integer"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rat::new(n, d))
}

/// serde adapter storing a rational as a `p/q` string.
pub mod rat_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rat, rat_string, Rat};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce_and_normalize_sign() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat_string(&rat(-116, 24)), "-29/6");
        assert_eq!(rat_string(&rat_int(0)), "0/1");
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(4), BigInt::from(24));
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rat("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rat(" 3 / 9 ").unwrap(), rat(1, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn rat_string_round_trips() {
        for r in [rat(5, 2), rat(-7, 3), rat_int(0), rat_int(41)] {
            assert_eq!(parse_rat(&rat_string(&r)).unwrap(), r);
        }
    }
}
