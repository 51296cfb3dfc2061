//! Exact rational scalars.
//!
//! Coefficients throughout the crate are arbitrary-precision rationals kept
//! in lowest terms with positive denominator; `num`'s `BigRational` maintains
//! exactly that invariant, so we use it directly.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational number: reduced fraction with positive denominator.
pub type Rat = BigRational;

/// Rational from an integer pair. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of a rational as −1, 0, or +1.
pub fn rat_sign(r: &Rat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Rational → f64 with a fallback for operands outside f64 range.
///
/// `Ratio::to_f64` divides the converted numerator and denominator; when both
/// overflow to ±∞ the result is NaN even though the true value is moderate.
/// In that case rescale both by a common power of two first.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() || r.numer().bits() < 1024 {
            return v;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
    let num = r.numer() >> shift;
    let den = r.denom() >> shift;
    if den.is_zero() {
        return if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from an f64 (every finite f64 is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Parse a decimal rational literal: `"3"`, `"0.25"`, `"17.5"`.
pub fn parse_decimal(text: &str) -> Option<Rat> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let valid = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !valid(int_part) || !valid(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(Rat::new(numer, denom))
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat_i(2)
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals() {
        assert_eq!(parse_decimal("3").unwrap(), rat_i(3));
        assert_eq!(parse_decimal("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_decimal("17.5").unwrap(), rat(35, 2));
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.2.3").is_none());
    }

    #[test]
    fn f64_conversion_handles_big_operands() {
        let big = Rat::new(BigInt::from(3) << 2000, BigInt::one() << 2001);
        let v = rat_to_f64(&big);
        assert!((v - 1.5).abs() < 1e-12);
    }
}
