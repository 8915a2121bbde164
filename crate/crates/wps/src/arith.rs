//! Elementary exact number theory shared by every other module.
//!
//! Weight-scale quantities (weights, subset gcds, divisors, totients,
//! multiplicative orders) live in `u64`; none of these can overflow at the
//! scales the library admits. Everything that grows with the field size
//! (`q`, `q^r`, point counts) is arbitrary precision.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Greatest common divisor, with `gcd(0, 0) = 0` and `gcd(a, 0) = a`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `gcd(a, b)` for a word-sized `a` against an arbitrary-precision `b`.
pub fn gcd_u64_big(a: u64, b: &BigUint) -> u64 {
    if a == 0 {
        // gcd(0, b) = b; callers only use this with small a or small b.
        return u64::try_from(b).expect("gcd_u64_big(0, b) with b beyond u64");
    }
    let r = u64::try_from(b % a).unwrap();
    gcd(a, r)
}

/// Euler's totient by trial-division factorization. Rejects `n = 0`.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Invalid("euler_phi(0) is undefined".into()));
    }
    let mut remaining = n;
    let mut phi = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= remaining {
        if remaining.is_multiple_of(p) {
            while remaining.is_multiple_of(p) {
                remaining /= p;
            }
            phi -= phi / p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if remaining > 1 {
        phi -= phi / remaining;
    }
    Ok(phi)
}

/// All positive divisors of `n` in increasing order. Rejects `n = 0`.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Invalid("divisors(0) is undefined".into()));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Least `r >= 1` with `q^r ≡ 1 (mod d)`; `ord_1(q) = 1`.
///
/// Undefined when `gcd(q, d) > 1`: such a `d` divides no `q^r - 1`, and
/// callers building zeta factors must skip it.
pub fn multiplicative_order(q: &BigUint, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Invalid("multiplicative order modulo 0".into()));
    }
    if d == 1 {
        return Ok(1);
    }
    let q_mod = u64::try_from(q % d).unwrap();
    if gcd(q_mod, d) != 1 {
        return Err(Error::OrderUndefined { q: q.to_string(), d });
    }
    let mut acc = q_mod % d;
    let mut r = 1u64;
    while acc != 1 {
        acc = mulmod(acc, q_mod, d);
        r += 1;
    }
    Ok(r)
}

/// Largest divisor of `n` coprime to `q`. Requires `n >= 1`, `q >= 2`.
pub fn coprime_part(n: u64, q: &BigUint) -> u64 {
    debug_assert!(n >= 1);
    let mut part = n;
    loop {
        let g = gcd_u64_big(part, q);
        if g == 1 {
            return part;
        }
        while part.is_multiple_of(g) {
            part /= g;
        }
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact big-integer division; panics with context on a nonzero remainder.
/// Used where a counting identity guarantees divisibility.
pub(crate) fn exact_div(num: BigUint, den: &BigUint, what: &str) -> BigUint {
    let (quot, rem) = num.div_rem(den);
    assert!(rem.is_zero(), "inexact division in {what}: remainder {rem}");
    quot
}
