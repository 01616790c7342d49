//! Exact numeric helpers over arbitrary-precision rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rdf::Literal;
use crate::vocab;

/// Parses an xsd integer/decimal/double lexical form exactly.
///
/// Accepts an optional sign, digits with an optional fraction, and an
/// optional `e`/`E` exponent. Special float values are rejected.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

pub fn parse_integer(text: &str) -> Option<BigInt> {
    let t = text.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Numeric value of a literal with a numeric xsd datatype.
pub fn literal_value(lit: &Literal) -> Option<BigRational> {
    let dt = lit.datatype();
    if vocab::is_integer_datatype(dt) {
        parse_integer(lit.lexical()).map(BigRational::from_integer)
    } else if vocab::is_numeric_datatype(dt) {
        parse_rational(lit.lexical())
    } else {
        None
    }
}

/// Renders `value` with exactly `places` fractional digits, rounding half
/// away from zero.
pub fn format_fixed(value: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r * 2;
    let rounded = if twice >= *scaled.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}

fn rounded_is_zero(i: &BigInt, f: &BigInt) -> bool {
    i.is_zero() && f.is_zero()
}

/// Shortest decimal rendering when the value terminates in base ten, else
/// `None`.
pub fn format_exact(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if denom != BigInt::from(1) {
        return None;
    }
    let places = twos.max(fives);
    let s = format_fixed(value, places);
    Some(if places == 0 { format!("{s}.0") } else { s })
}

/// A decimal column value that keeps its source lexical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    lexical: String,
    value: BigRational,
}

impl Decimal {
    pub fn parse(text: &str) -> Option<Decimal> {
        let text = text.trim();
        if text.contains(['e', 'E']) {
            return None;
        }
        parse_rational(text).map(|value| Decimal {
            lexical: text.to_string(),
            value,
        })
    }

    pub fn from_rational(value: BigRational, places: usize) -> Decimal {
        Decimal {
            lexical: format_fixed(&value, places),
            value,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_integral(&self) -> bool {
        !self.lexical.contains('.')
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexical)
    }
}

pub fn to_f64(value: &BigRational) -> f64 {
    format_fixed(value, 17).parse().unwrap_or(f64::NAN)
}

/// The date of an `xsd:date` literal in `YYYY-MM-DD` form.
pub fn literal_date(l: &Literal) -> Option<chrono::NaiveDate> {
    if l.datatype() != crate::vocab::XSD_DATE {
        return None;
    }
    chrono::NaiveDate::parse_from_str(l.lexical(), "%Y-%m-%d").ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_lexical_forms() {
        assert_eq!(parse_rational("32.5"), Some(r(65, 2)));
        assert_eq!(parse_rational("-0.25"), Some(r(-1, 4)));
        assert_eq!(parse_rational("+7"), Some(r(7, 1)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("5."), Some(r(5, 1)));
        assert_eq!(parse_rational("1.5e2"), Some(r(150, 1)));
        assert_eq!(parse_rational("15E-1"), Some(r(3, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("1.2.3"), None);
        assert_eq!(parse_integer("12"), Some(BigInt::from(12)));
        assert_eq!(parse_integer("1.0"), None);
    }

    #[test]
    fn fixed_rounding() {
        assert_eq!(format_fixed(&r(1, 3), 6), "0.333333");
        assert_eq!(format_fixed(&r(2, 3), 6), "0.666667");
        assert_eq!(format_fixed(&r(-2, 3), 2), "-0.67");
        assert_eq!(format_fixed(&r(5, 2), 0), "3");
        assert_eq!(format_fixed(&r(-1, 1000), 2), "0.00");
        assert_eq!(format_fixed(&r(123, 1), 1), "123.0");
    }

    #[test]
    fn exact_rendering() {
        assert_eq!(format_exact(&r(65, 2)).as_deref(), Some("32.5"));
        assert_eq!(format_exact(&r(4, 1)).as_deref(), Some("4.0"));
        assert_eq!(format_exact(&r(1, 3)), None);
    }

    #[test]
    fn decimal_keeps_lexical() {
        let d = Decimal::parse("20.50").unwrap();
        assert_eq!(d.lexical(), "20.50");
        assert_eq!(d.value(), &r(41, 2));
        assert!(Decimal::parse("1e3").is_none());
    }
}
