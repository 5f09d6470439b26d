//! Exact rational scalars.
//!
//! Coefficients are `BigRational`, which is always kept in lowest terms with
//! a positive denominator. This module adds exact parsing of decimal and
//! fraction literals plus a few formatting helpers shared by the printers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `3`, `-0.6`, `1/2`, `-3/4`, `2.5e-3` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num.trim()).ok_or_else(err)?;
        let d = parse_decimal(den.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], i64::from_str(&body[i + 1..]).ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(&digits).ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(n);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `3`, `-1/2`; the form accepted back by the problem-file parser.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Lossy conversion used only by the numerical oracle.
pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerators or denominators: scale down before dividing.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Best rational approximation of a finite float, exact for dyadic values.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-0.6").unwrap(), frac(-3, 5));
        assert_eq!(
            parse_rational("1/2").unwrap(),
            parse_rational("0.5").unwrap()
        );
        assert_eq!(parse_rational("2.5e-3").unwrap(), frac(1, 400));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational(".25").unwrap(), frac(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for q in [frac(-3, 4), int(7), int(0), frac(22, 7)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&frac(1, 4)), 0.25);
        assert_eq!(from_f64(0.75).unwrap(), frac(3, 4));
    }
}
