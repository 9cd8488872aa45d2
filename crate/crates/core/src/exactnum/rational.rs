use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use super::ExactError;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Renders as `"p/q"`, including `"p/1"` for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Human-readable form: `"2"`, `"-1/3"`.
pub(crate) fn display_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn latex_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert_eq!(format_rational(&rat(4, 2)), "2/1");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn latex_forms() {
        assert_eq!(latex_rational(&rat(-2, 3)), "-\\frac{2}{3}");
        assert_eq!(latex_rational(&rat(5, 1)), "5");
    }
}
