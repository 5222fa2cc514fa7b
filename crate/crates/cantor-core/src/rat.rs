//! Arbitrary-precision rationals and their canonical text forms.

use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// 2^-k.
pub fn half_pow(k: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k)
}

/// Canonical form `p/q` with the denominator always written: "1/2", "0/1", "-3/1".
/// `Ratio`'s own `Display` drops the denominator of integers, which would break
/// byte-exact round trips.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.parse().ok()?;
        let denom: BigInt = d.parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        Some(Rat::new(numer, denom))
    } else {
        let numer: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(numer))
    }
}

/// Fixed-point decimal with `k` fractional digits, rounding half away from zero.
pub fn decimal(r: &Rat, k: usize) -> String {
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(k as u32);
    let num = abs.numer() * &scale;
    let den = abs.denom().clone();
    let rounded = (BigInt::from(2) * num + &den) / (BigInt::from(2) * den);
    let mut digits = rounded.to_string();
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if k == 0 {
        return format!("{sign}{digits}");
    }
    while digits.len() <= k {
        digits.insert(0, '0');
    }
    let split = digits.len() - k;
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}
