//! Exact rational numbers and their textual forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::{Error, Result};

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p`, `-p`, `p/q` or a finite decimal such as `2.5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::parse(0, format!("malformed rational `{text}`"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// `p/q`, or just `p` for integers.
pub fn format_fraction(value: &Rational) -> String {
    value.to_string()
}

/// Exact decimal expansion when the denominator has no prime factor other
/// than 2 and 5, `None` otherwise.
pub fn exact_decimal(value: &Rational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer();
    if places == 0 {
        return Some(digits.to_string());
    }
    let negative = digits.is_negative();
    let mut s = digits.abs().to_string();
    while s.len() <= places {
        s.insert(0, '0');
    }
    let split = s.len() - places;
    let out = format!("{}{}.{}", if negative { "-" } else { "" }, &s[..split], &s[split..]);
    Some(out)
}

/// Decimal rounded half-up to `places` digits.
pub fn rounded_decimal(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * Rational::from_integer(scale);
    let half = rat(1, 2);
    let digits = (scaled + half).floor().to_integer();
    let mut s = digits.to_string();
    while s.len() <= places {
        s.insert(0, '0');
    }
    let split = s.len() - places;
    let sign = if value.is_negative() && !digits.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{s}");
    }
    format!("{sign}{}.{}", &s[..split], &s[split..])
}

/// Decimal shown next to an exact value in reports: the exact expansion when
/// it has at most nine places, otherwise `≈` and nine rounded places.
pub fn report_decimal(value: &Rational) -> String {
    match exact_decimal(value) {
        Some(d) if d.split_once('.').map_or(0, |(_, f)| f.len()) <= 9 => d,
        _ => format!("≈{}", rounded_decimal(value, 9)),
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
