//! Exact rational numbers used for utilities and probabilities.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational `{0}`: expected an integer or `p/q`")]
pub struct RationalParseError(pub String);

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let t = text.trim();
    let err = || RationalParseError(text.to_owned());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1").unwrap(), int(-1));
        assert_eq!(parse_rational(" 9/10 ").unwrap(), ratio(9, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-2, 6)), "-1/3");
    }
}
