//! Arbitrary-precision integer helpers.

use ibig::ops::{Abs, DivRem, RemEuclid};

pub type Integer = ibig::IBig;

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn zero() -> Integer {
    Integer::from(0u8)
}

pub fn one() -> Integer {
    Integer::from(1u8)
}

pub fn is_zero(a: &Integer) -> bool {
    *a == Integer::from(0u8)
}

pub fn is_unit(a: &Integer) -> bool {
    *a == Integer::from(1u8) || *a == Integer::from(-1i8)
}

pub fn abs(a: &Integer) -> Integer {
    a.abs()
}

/// Representative of `a` in `[0, m)`; `m == 0` leaves `a` untouched.
pub fn reduce(a: &Integer, m: &Integer) -> Integer {
    if is_zero(m) {
        a.clone()
    } else {
        a.rem_euclid(m)
    }
}

pub fn divides(d: &Integer, a: &Integer) -> bool {
    if is_zero(d) {
        is_zero(a)
    } else {
        is_zero(&(a % d))
    }
}

/// Truncating division; callers use it only when `b | a` or when any quotient works.
pub fn quot(a: &Integer, b: &Integer) -> Integer {
    let (q, _) = a.clone().div_rem(b.clone());
    q
}

/// Floor division, so that `a - floor_div(a, b) * b` has the sign of `b`.
pub fn floor_div(a: &Integer, b: &Integer) -> Integer {
    let (q, r) = a.clone().div_rem(b.clone());
    if !is_zero(&r) && (r.signum() != b.signum()) {
        q - one()
    } else {
        q
    }
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    match (is_zero(a), is_zero(b)) {
        (true, true) => zero(),
        (true, false) => b.abs(),
        (false, true) => a.abs(),
        (false, false) => a.gcd(b),
    }
}

/// Returns `(g, s, t)` with `g = s*a + t*b = gcd(a, b) >= 0`.
pub fn xgcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    match (is_zero(a), is_zero(b)) {
        (true, true) => (zero(), zero(), zero()),
        (true, false) => (b.abs(), zero(), b.signum()),
        (false, true) => (a.abs(), a.signum(), zero()),
        (false, false) => a.extended_gcd(b),
    }
}

/// Least common multiple with `lcm(x, 0) = 0`.
pub fn lcm(a: &Integer, b: &Integer) -> Integer {
    if is_zero(a) || is_zero(b) {
        return zero();
    }
    (a * b).abs() / gcd(a, b)
}

pub fn to_u64(a: &Integer) -> Option<u64> {
    u64::try_from(a).ok()
}

pub fn to_i64(a: &Integer) -> Option<i64> {
    i64::try_from(a).ok()
}

/// Deterministic primality by trial division; only ever called on small moduli.
pub fn is_small_prime(a: &Integer) -> Option<u64> {
    let v = to_u64(a)?;
    if !(2..=(1u64 << 31)).contains(&v) {
        return None;
    }
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            return None;
        }
        d += 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_bezout_holds_with_zeros() {
        for (a, b) in [(0, 0), (0, 5), (-4, 0), (12, 18), (-7, 3), (6, -9)] {
            let (g, s, t) = xgcd(&int(a), &int(b));
            assert_eq!(&s * int(a) + &t * int(b), g);
            assert_eq!(g, gcd(&int(a), &int(b)));
        }
    }

    #[test]
    fn reduce_and_floor_div() {
        assert_eq!(reduce(&int(-1), &int(6)), int(5));
        assert_eq!(reduce(&int(-1), &int(0)), int(-1));
        assert_eq!(floor_div(&int(-7), &int(2)), int(-4));
        assert_eq!(floor_div(&int(7), &int(2)), int(3));
        assert_eq!(lcm(&int(4), &int(6)), int(12));
        assert_eq!(is_small_prime(&int(7)), Some(7));
        assert_eq!(is_small_prime(&int(6)), None);
    }
}
