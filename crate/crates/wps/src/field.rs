//! Explicit construction of `F_{p^a}` with deterministic, reproducible data.
//!
//! Construction is canonical: the modulus is the lexicographically smallest
//! monic irreducible of degree `a` over `F_p` (coefficients compared
//! constant-term first), and the generator is the enumeration-smallest
//! element of multiplicative order `q - 1`. Two constructions of the same
//! `(p, a)` therefore yield identical descriptors.
//!
//! Elements are handled as integer indices in `[0, q)`: the element with
//! polynomial coordinates `(c_0, …, c_{a-1})` has index `c_0 + c_1 p + … +
//! c_{a-1} p^{a-1}`, so index 0 is zero, index 1 is one, and the indices
//! `0..p` are exactly the prime subfield. Discrete-log tables over the
//! canonical generator back multiplication, powers, and element orders.

use num_bigint::BigUint;

use crate::arith;
use crate::error::{Error, Result};

/// Default ceiling for explicit field construction and tuple enumeration.
pub const DEFAULT_ENUM_LIMIT: u64 = 1 << 24;

/// Largest `q` for which an explicit field is ever built.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element index in `[0, q)`; `0` is zero, `1` is one.
pub type Elem = u64;

/// An explicit finite field `F_{p^a}` with discrete-log tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    a: u32,
    q: u64,
    /// Monic modulus, coefficients `[c_0, …, c_a]` with `c_a = 1`.
    modulus: Vec<u64>,
    /// Index of the canonical generator of `F_q^*`.
    generator: Elem,
    /// `exp[l]` = index of `generator^l`, `l in [0, q-1)`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is a sentinel.
    log: Vec<u32>,
}

impl Field {
    /// Builds `F_{p^a}` deterministically. Rejects composite `p` and any
    /// `q = p^a` beyond `limit` (or the hard cap [`MAX_FIELD_SIZE`]).
    pub fn new(p: u64, a: u32, limit: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::Invalid("extension degree must be >= 1".into()));
        }
        let cap = limit.min(MAX_FIELD_SIZE);
        let q = checked_pow(p, a).filter(|q| *q <= cap).ok_or_else(|| {
            Error::FieldTooLarge {
                q: format!("{p}^{a}"),
                limit: cap,
            }
        })?;

        let modulus = smallest_irreducible(p, a);
        let mut field = Field {
            p,
            a,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.generator = field.find_generator();
        field.build_tables();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients `[c_0, …, c_a]`, low degree first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// All `q` elements exactly once, in the deterministic index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Polynomial coordinates `(c_0, …, c_{a-1})` of an element.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        let mut rest = x;
        (0..self.a)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, c| acc * self.p + (c % self.p))
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let (mut x, mut y) = (x, y);
        let mut acc = 0u64;
        let mut place = 1u64;
        for _ in 0..self.a {
            acc += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        acc
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let mut rest = x;
        let mut acc = 0u64;
        let mut place = 1u64;
        for _ in 0..self.a {
            let c = rest % self.p;
            acc += if c == 0 { 0 } else { (self.p - c) * place };
            rest /= self.p;
            place *= self.p;
        }
        acc
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x == 0 || y == 0 {
            return 0;
        }
        let m = self.q - 1;
        self.exp[((self.log[x as usize] as u64 + self.log[y as usize] as u64) % m) as usize] as u64
    }

    /// `x^k`, with the convention `x^0 = 1` for every `x` including zero.
    pub fn pow(&self, x: Elem, k: &BigUint) -> Elem {
        use num_traits::Zero;
        if k.is_zero() {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let m = self.q - 1;
        let k_red = u64::try_from(k % m).unwrap();
        self.pow_log(x, k_red)
    }

    /// `x^k` for a word exponent (reduced mod `q - 1` internally).
    pub fn pow_u64(&self, x: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        self.pow_log(x, k % (self.q - 1))
    }

    fn pow_log(&self, x: Elem, k_red: u64) -> Elem {
        let m = self.q - 1;
        let l = (self.log[x as usize] as u128 * k_red as u128 % m as u128) as usize;
        self.exp[l] as u64
    }

    /// Least `r >= 1` with `x^r = 1`; divides `q - 1`.
    pub fn order(&self, x: Elem) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        let m = self.q - 1;
        if m == 0 {
            return Err(Error::Invalid("trivial group".into()));
        }
        Ok(m / arith::gcd(self.log[x as usize] as u64, m))
    }

    /// Discrete log of a nonzero element w.r.t. the canonical generator.
    pub fn log_of(&self, x: Elem) -> u64 {
        debug_assert!(x != 0);
        self.log[x as usize] as u64
    }

    /// The element `generator^l`.
    pub fn from_log(&self, l: u64) -> Elem {
        self.exp[(l % (self.q - 1).max(1)) as usize] as u64
    }

    fn find_generator(&self) -> Elem {
        let m = self.q - 1;
        if m == 1 {
            return 1; // F_2: the only unit
        }
        let prime_factors = prime_factors(m);
        'candidate: for x in 1..self.q {
            let vec = self.coeffs(x);
            for ell in &prime_factors {
                if self.poly_pow(&vec, m / ell) == vec_one(self.a) {
                    continue 'candidate;
                }
            }
            return x;
        }
        unreachable!("F_q^* is cyclic; a generator exists");
    }

    fn build_tables(&mut self) {
        let m = (self.q - 1) as usize;
        self.exp = vec![0; m.max(1)];
        self.log = vec![u32::MAX; self.q as usize];
        let g = self.coeffs(self.generator);
        let mut cur = vec_one(self.a);
        for l in 0..m {
            let idx = self.from_coeffs(&cur);
            self.exp[l] = idx as u32;
            self.log[idx as usize] = l as u32;
            cur = self.poly_mul_mod(&cur, &g);
        }
    }

    fn poly_mul_mod(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        poly_mul_mod(u, v, &self.modulus, self.p)
    }

    fn poly_pow(&self, base: &[u64], mut k: u64) -> Vec<u64> {
        let mut acc = vec_one(self.a);
        let mut sq = base.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.poly_mul_mod(&acc, &sq);
            }
            sq = self.poly_mul_mod(&sq, &sq);
            k >>= 1;
        }
        acc
    }
}

fn vec_one(a: u32) -> Vec<u64> {
    let mut v = vec![0; a as usize];
    v[0] = 1;
    v
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Product of dense coefficient vectors reduced by a monic modulus over `F_p`.
fn poly_mul_mod(u: &[u64], v: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let a = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * a.max(1)];
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if *vj == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + ui * vj) % p;
        }
    }
    // reduce: x^a = -(c_0 + c_1 x + ... + c_{a-1} x^{a-1})
    for i in (a..prod.len()).rev() {
        let coeff = prod[i];
        if coeff == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..a {
            let sub = coeff * modulus[j] % p;
            prod[i - a + j] = (prod[i - a + j] + p - sub) % p;
        }
    }
    prod.truncate(a.max(1));
    prod
}

/// Degree of a dense polynomial, or `None` for the zero polynomial.
fn poly_degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|c| *c != 0)
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = poly_degree(g).expect("division by zero polynomial");
    let lead_inv = mod_inverse(g[dg], p);
    while let Some(dr) = poly_degree(&r) {
        if dr < dg {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        for j in 0..=dg {
            let sub = factor * g[j] % p;
            r[dr - dg + j] = (r[dr - dg + j] + p - sub) % p;
        }
    }
    r
}

fn poly_gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    while poly_degree(&b).is_some() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    arith::powmod(x, p - 2, p)
}

/// `x^{p^k} mod f` by square-and-multiply on the word exponent.
fn x_power_mod(f: &[u64], p: u64, exp: u64) -> Vec<u64> {
    let a = f.len() - 1;
    let mut acc = vec![0u64; a.max(1)];
    acc[0] = 1;
    let mut sq = vec![0u64; a.max(1)];
    if a == 1 {
        // x mod f is a constant
        sq[0] = (p - f[0] % p) % p;
    } else {
        sq[1] = 1;
    }
    let mut k = exp;
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mul_mod(&acc, &sq, f, p);
        }
        sq = poly_mul_mod(&sq, &sq, f, p);
        k >>= 1;
    }
    acc
}

/// Irreducibility over `F_p`: a monic `f` of degree `a` is irreducible iff
/// `x^{p^a} ≡ x (mod f)` and `gcd(x^{p^{a/l}} - x, f) = 1` for each prime
/// `l | a`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let a = (f.len() - 1) as u64;
    let q = checked_pow(p, a as u32).expect("bounded by construction limit");
    let x_poly = {
        let mut v = vec![0u64; a as usize];
        if a == 1 {
            v[0] = (p - f[0] % p) % p; // x mod f
        } else {
            v[1] = 1;
        }
        v
    };
    if x_power_mod(f, p, q) != x_poly {
        return false;
    }
    for ell in prime_factors(a) {
        let pk = checked_pow(p, (a / ell) as u32).unwrap();
        let mut h = x_power_mod(f, p, pk);
        // h := x^{p^{a/l}} - x
        if a == 1 {
            h[0] = (h[0] + p - x_poly[0]) % p;
        } else {
            h[1] = (h[1] + p - 1) % p;
        }
        let g = poly_gcd(f, &h, p);
        match poly_degree(&g) {
            Some(0) => {}
            None => return false, // h ≡ 0 mod f
            Some(_) => return false,
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `a` over `F_p`,
/// comparing coefficients from the constant term upward.
fn smallest_irreducible(p: u64, a: u32) -> Vec<u64> {
    if a == 1 {
        return vec![0, 1]; // x itself
    }
    let a = a as usize;
    let total = checked_pow(p, a as u32).expect("bounded by construction limit");
    for code in 0..total {
        // decode with c_0 as the most significant digit: ascending code
        // order is ascending lex order on (c_0, ..., c_{a-1})
        let mut f = vec![0u64; a + 1];
        let mut rest = code;
        for i in (0..a).rev() {
            f[i] = rest % p;
            rest /= p;
        }
        f[a] = 1;
        if f[0] == 0 {
            continue; // divisible by x
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p");
}
