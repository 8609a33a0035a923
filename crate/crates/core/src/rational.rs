//! Exact rational scalars.
//!
//! Every probability value, bound and LP coefficient in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in reduced form with a
//! positive denominator. No floating point is used anywhere on a decision
//! path; strict inequalities make float tolerances unsound.

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Shorthand constructor, `rat(3, 4)` is 3/4. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `rint(2)` is the rational 2.
pub fn rint(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `num/den` or a plain integer, e.g. `3/4`, `-1`, `51/100`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err("empty rational literal".to_string());
    }
    trimmed
        .parse::<Rational>()
        .map_err(|e| format!("invalid rational `{trimmed}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["3/4", "51/100", "0", "1", "-2/5"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(r.to_string(), text);
        }
    }

    #[test]
    fn parse_reduces_to_canonical_form() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("6/3").unwrap(), rint(2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("a/b").is_err());
    }
}
