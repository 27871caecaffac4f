//! Exact rational helpers. Thresholds and densities are compared as exact
//! rationals end to end; no floating point is involved in any verdict.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `p/q` or a bare integer into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let raw = s.trim();
    let (p, q) = match raw.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (raw, "1"),
    };
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let p: BigInt = p
        .parse()
        .map_err(|_| bad(format!("bad numerator in {raw:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| bad(format!("bad denominator in {raw:?}")))?;
    if q.is_zero() {
        return Err(bad(format!("zero denominator in {raw:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// Exact rational `p/q` from machine integers. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational from an unsigned count.
pub fn from_count(n: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical `p/q` rendering (always includes the denominator).
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Least integer `m` with `m >= r`, clamped below at 0. Saturates at
/// `usize::MAX` (callers only pass desk-scale values).
pub fn ceil_to_usize(r: &BigRational) -> usize {
    if r.is_negative() {
        return 0;
    }
    r.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}
