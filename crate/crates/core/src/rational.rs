//! Exact nonnegative rationals and overflow-free product comparisons.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Nonnegative exact rational. All measures and densities live in `[0, 1]`.
pub type Rational = num_rational::Ratio<u128>;

pub fn ratio(num: u128, den: u128) -> Rational {
    Rational::new(num, den)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::OutOfRange(format!("cannot parse rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<u128>().map_err(|_| bad())?,
            d.trim().parse::<u128>().map_err(|_| bad())?,
        ),
        None => (s.parse::<u128>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Full 256-bit product of two `u128`, as `(high, low)`.
fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let lo = (ll & MASK) | ((mid & MASK) << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

/// Compares `a * b` with `c * d` exactly.
pub fn cmp_products(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    match (a.checked_mul(b), c.checked_mul(d)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => wide_mul(a, b).cmp(&wide_mul(c, d)),
    }
}

/// `x > r * y` for integers `x, y`.
pub fn exceeds_fraction_of(x: u128, r: &Rational, y: u128) -> bool {
    cmp_products(x, *r.denom(), *r.numer(), y) == Ordering::Greater
}

/// `x <= r * y` for integers `x, y`.
pub fn at_most_fraction_of(x: u128, r: &Rational, y: u128) -> bool {
    !exceeds_fraction_of(x, r, y)
}

/// Checks membership of `d` in `[0, eps) ∪ (1 - eps, 1]`, both inner endpoints open.
pub fn is_near_zero_or_one(d: &Rational, eps: &Rational) -> bool {
    if d < eps {
        return true;
    }
    if *eps > one() {
        return true;
    }
    *d > one() - eps
}
