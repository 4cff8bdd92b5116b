//! Exact rational numbers for memory and rate accounting.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Canonical fraction: reduced, positive denominator.
pub type Rational = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p/q` or a bare integer, with optional surrounding whitespace.
/// Decimal notation is rejected: every value handled here is an exact fraction.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if den == 0 {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonnegative(r: &Rational) -> bool {
    *r >= Rational::zero()
}
