//! Small number-theory helpers on machine integers.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Reduces any integer into `[0, modulus)`.
pub fn reduce(value: i64, modulus: u64) -> u64 {
    (value as i128).rem_euclid(modulus as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `modulus`, if it is a unit.
pub fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let ext = (a as i128 % modulus as i128).extended_gcd(&(modulus as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(modulus as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Returns `Some(exponent)` if `n == base^exponent` with exponent ≥ 1.
pub fn perfect_power_of(n: u64, base: u64) -> Option<u32> {
    if base < 2 || n < base {
        return None;
    }
    let mut acc = base;
    let mut e = 1;
    while acc < n {
        acc = acc.checked_mul(base)?;
        e += 1;
    }
    (acc == n).then_some(e)
}
