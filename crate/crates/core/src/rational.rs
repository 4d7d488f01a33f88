//! Exact rational scalars and their canonical text form.
//!
//! Every coefficient in the crate is a `Rational` in lowest terms with a
//! positive denominator (zero is 0/1); `num_rational::BigRational` maintains
//! exactly that normal form. Text form is `p/q` with the `/q` dropped when
//! q = 1, so equality of values is equality of strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Canonical text form: reduced `p/q`, integers without the `/1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Strict parser for the canonical form: accepts `p` or `p/q` with q > 0 and
/// gcd(p, q) = 1, plus U+2212 as a minus sign. Anything else is rejected so
/// that file-level equality stays syntactic.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let cleaned = text.trim().replace('\u{2212}', "-");
    let (numer_text, denom_text) = match cleaned.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (cleaned.as_str(), None),
    };
    let numer: BigInt = numer_text
        .parse()
        .map_err(|_| format!("invalid integer `{numer_text}`"))?;
    let denom: BigInt = match denom_text {
        Some(d) => d.parse().map_err(|_| format!("invalid integer `{d}`"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err("zero denominator".to_string());
    }
    if denom.is_negative() {
        return Err("denominator must be positive".to_string());
    }
    if !numer.gcd(&denom).is_one() {
        return Err(format!("`{cleaned}` is not in lowest terms"));
    }
    Ok(Rational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_round_trips() {
        for text in ["0", "1", "-7", "3/4", "-22/7", "240"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(format_rational(&r), text);
        }
    }

    #[test]
    fn unicode_minus_is_accepted() {
        assert_eq!(parse_rational("\u{2212}3/4").unwrap(), rat(-3, 4));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("2/4").is_err());
        assert!(parse_rational("0/5").is_err());
        assert!(parse_rational("3/-4").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn stored_form_is_reduced_with_positive_denominator() {
        let r = Rational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(format_rational(&Rational::zero()), "0");
    }
}
