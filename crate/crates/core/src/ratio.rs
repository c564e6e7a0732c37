//! Exact rational arithmetic helpers. Every threshold comparison in this
//! crate is done over `BigRational`; no floating point enters any decision.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Ratio = BigRational;
pub type Int = BigInt;

pub fn ratio(n: i64, d: i64) -> Ratio {
    assert!(d != 0, "zero denominator");
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn ratio_int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn ratio_usize(n: usize) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// Exact ceiling as a big integer.
pub fn ceil_int(r: &Ratio) -> Int {
    r.ceil().to_integer()
}

/// Ceiling clamped into `usize` (0 for negative values).
pub fn ceil_usize(r: &Ratio) -> usize {
    use num::ToPrimitive;
    let c = ceil_int(r);
    if c.is_negative() {
        0
    } else {
        c.to_usize().unwrap_or(usize::MAX)
    }
}

/// `count >= threshold` with the count exact.
pub fn count_ge(count: usize, threshold: &Ratio) -> bool {
    ratio_usize(count) >= *threshold
}

/// `count > threshold` with the count exact.
pub fn count_gt(count: usize, threshold: &Ratio) -> bool {
    ratio_usize(count) > *threshold
}

pub fn pow_ratio(r: &Ratio, e: u32) -> Ratio {
    let mut acc = Ratio::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// 2^e as a rational for non-negative `e`.
pub fn two_pow(e: u32) -> Ratio {
    Ratio::from_integer(BigInt::one() << (e as usize))
}

/// Decides `lhs <= base^(p/q)` exactly for positive `lhs`, `base` and `q >= 1`.
pub fn le_pow(lhs: &Ratio, base: &Ratio, p: u32, q: u32) -> bool {
    assert!(q >= 1);
    assert!(lhs.is_positive() && base.is_positive());
    pow_ratio(lhs, q) <= pow_ratio(base, p)
}

/// Decides `lhs >= base^(p/q)` exactly for positive `lhs`, `base` and `q >= 1`.
pub fn ge_pow(lhs: &Ratio, base: &Ratio, p: u32, q: u32) -> bool {
    assert!(q >= 1);
    assert!(lhs.is_positive() && base.is_positive());
    pow_ratio(lhs, q) >= pow_ratio(base, p)
}

/// Canonical `numer/denom` form, used in certificates and on the CLI.
pub fn format_ratio(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "p/q", a plain integer, or a decimal string, all exactly.
pub fn parse_ratio(s: &str) -> Result<Ratio> {
    let s = s.trim();
    let bad = || Error::BadParameter(format!("cannot parse rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 64 {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = if digits.is_empty() {
            return Err(bad());
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        let r = Ratio::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("1/64").unwrap(), ratio(1, 64));
        assert_eq!(parse_ratio("0.18").unwrap(), ratio(9, 50));
        assert_eq!(parse_ratio("7").unwrap(), ratio_int(7));
        assert_eq!(parse_ratio("-3/6").unwrap(), ratio(-1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
    }

    #[test]
    fn format_roundtrip() {
        for s in ["1/64", "2/1", "-5/3", "0/1"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&r), s);
        }
    }

    #[test]
    fn power_comparisons() {
        // 15/2 >= 16^(1/2)
        assert!(ge_pow(&ratio(15, 2), &ratio_int(16), 1, 2));
        // 3 <= 10^(1/2) fails
        assert!(!le_pow(&ratio_int(4), &ratio_int(10), 1, 2));
        assert!(le_pow(&ratio_int(3), &ratio_int(10), 1, 2));
    }

    #[test]
    fn ceilings() {
        assert_eq!(ceil_usize(&ratio(7, 2)), 4);
        assert_eq!(ceil_usize(&ratio_int(3)), 3);
        assert_eq!(ceil_usize(&ratio(-1, 2)), 0);
    }
}
