//! Weighted homogeneous polynomials and hypersurface point counts.
//!
//! A polynomial is `w`-homogeneous of degree `r` when every monomial
//! `x^α` satisfies `Σ w_i α_i = r`; its vanishing locus in `P_w^n` is a
//! weighted hypersurface `X`, counted by orbits of the affine cone
//! `A(X) = {x != 0 : f(x) = 0}` under the weighted `F_q^*` action.
//!
//! Two counting routes share one enumeration kernel (per-support zero
//! counts of the cone) but aggregate differently: a Burnside average over
//! the acting group, and a support-stratified sum with per-stratum exact
//! division. The brute-force orbit route in [`crate::oracle`] is fully
//! independent of both.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith;
use crate::counting::PrimePower;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::weights::WeightVector;

/// One term `c * x^α` with a prime-subfield coefficient `c in [1, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: u64,
}

/// A validated `w`-homogeneous polynomial over the prime subfield `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPolynomial {
    monomials: Vec<Monomial>,
    weights: WeightVector,
    degree: u64,
    p: u64,
}

impl WeightedPolynomial {
    /// Parses `text` in the grammar
    ///
    /// ```text
    /// poly   := ['-'] term (('+' | '-') term)*
    /// term   := factor ('*' factor)*
    /// factor := integer | variable ['^' integer]
    /// ```
    ///
    /// with variables `x0..xn` and, for `n <= 3`, the aliases
    /// `x, y, z, w` for `x0..x3`. Integer coefficients are reduced mod `p`,
    /// like terms are merged, and vanishing terms dropped.
    pub fn parse(text: &str, weights: &WeightVector, p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let monomials = Parser::new(text, weights, p).parse()?;
        Self::from_monomials(monomials, weights.clone(), p)
    }

    /// Validates homogeneity and non-triviality of an explicit term list.
    pub fn from_monomials(
        monomials: Vec<Monomial>,
        weights: WeightVector,
        p: u64,
    ) -> Result<Self> {
        let n1 = weights.weights().len();
        let mut merged: Vec<Monomial> = Vec::new();
        for m in monomials {
            if m.exponents.len() != n1 {
                return Err(Error::Invalid(format!(
                    "monomial has {} exponents, expected {n1}",
                    m.exponents.len()
                )));
            }
            let c = m.coeff % p;
            if c == 0 {
                continue;
            }
            if let Some(existing) = merged.iter_mut().find(|e| e.exponents == m.exponents) {
                existing.coeff = (existing.coeff + c) % p;
            } else {
                merged.push(Monomial {
                    exponents: m.exponents,
                    coeff: c,
                });
            }
        }
        merged.retain(|m| m.coeff != 0);
        if merged.is_empty() {
            return Err(Error::ZeroPolynomial);
        }

        let w_degree = |m: &Monomial| -> u64 {
            m.exponents
                .iter()
                .zip(weights.weights())
                .map(|(e, w)| *e as u64 * w)
                .sum()
        };
        let degree = w_degree(&merged[0]);
        for m in &merged[1..] {
            let other = w_degree(m);
            if other != degree {
                return Err(Error::NotHomogeneous(degree, other));
            }
        }
        if degree == 0 {
            return Err(Error::Invalid(
                "constant polynomial: weighted degree must be >= 1".into(),
            ));
        }
        Ok(Self {
            monomials: merged,
            weights,
            degree,
            p,
        })
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The same polynomial viewed under a different weight vector, when it
    /// is homogeneous there too.
    pub fn with_weights(&self, weights: WeightVector) -> Result<Self> {
        Self::from_monomials(self.monomials.clone(), weights, self.p)
    }

    /// Evaluates at a tuple of element indices of `field`; the prime
    /// subfield embeds as the indices `0..p`.
    pub fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        debug_assert_eq!(field.p(), self.p);
        let mut acc = 0;
        for m in &self.monomials {
            let mut term = m.coeff; // index of the constant c < p
            for (x, e) in point.iter().zip(&m.exponents) {
                if *e == 0 {
                    continue;
                }
                if *x == 0 {
                    term = 0;
                    break;
                }
                term = field.mul(term, field.pow_u64(*x, *e as u64));
            }
            acc = field.add(acc, term);
        }
        acc
    }
}

impl std::fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if m.coeff != 1 || m.exponents.iter().all(|e| *e == 0) {
                write!(f, "{}", m.coeff)?;
                wrote = true;
            }
            for (idx, e) in m.exponents.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{idx}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    weights: &'a WeightVector,
    p: u64,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, weights: &'a WeightVector, p: u64) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            weights,
            p,
        }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Vec<Monomial>> {
        let mut monomials = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let mut m = self.term()?;
            if negate {
                m.coeff = (self.p - m.coeff % self.p) % self.p;
            }
            monomials.push(m);
            match self.peek() {
                None => return Ok(monomials),
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(c) => {
                    return Err(self.err(self.pos, format!("expected '+' or '-', found {:?}", c as char)))
                }
            }
        }
    }

    fn term(&mut self) -> Result<Monomial> {
        let n1 = self.weights.weights().len();
        let mut exponents = vec![0u32; n1];
        let mut coeff = 1u64;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let value = self.integer_mod_p()?;
                    coeff = coeff * value % self.p;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (var, exp) = self.variable_power()?;
                    exponents[var] = exponents[var]
                        .checked_add(exp)
                        .ok_or_else(|| self.err(self.pos, "exponent overflow"))?;
                }
                Some(c) => {
                    return Err(self.err(
                        self.pos,
                        format!("expected a coefficient or variable, found {:?}", c as char),
                    ))
                }
                None => return Err(self.err(self.pos, "unexpected end of input")),
            }
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(Monomial {
            exponents,
            coeff: coeff % self.p,
        })
    }

    fn integer_mod_p(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut acc = 0u64;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            acc = (acc * 10 + (self.bytes[self.pos] - b'0') as u64) % self.p;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(start, "expected an integer"));
        }
        Ok(acc)
    }

    fn integer_raw(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let mut acc: u64 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            acc = acc * 10 + (self.bytes[self.pos] - b'0') as u64;
            if acc > u32::MAX as u64 {
                return Err(self.err(start, "exponent too large"));
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(start, "expected an integer"));
        }
        Ok(acc as u32)
    }

    fn variable_power(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let start = self.pos;
        let n = self.weights.n();
        let letter = self.bytes[self.pos];
        self.pos += 1;
        let mut digits = String::new();
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            digits.push(self.bytes[self.pos] as char);
            self.pos += 1;
        }
        let var = match (letter, digits.is_empty()) {
            (b'x', false) => {
                let idx: usize = digits
                    .parse()
                    .map_err(|_| self.err(start, "bad variable index"))?;
                if idx > n {
                    return Err(self.err(start, format!("variable x{idx} exceeds n = {n}")));
                }
                idx
            }
            (b'x', true) | (b'y', true) | (b'z', true) | (b'w', true) => {
                if n > 3 {
                    return Err(self.err(
                        start,
                        "aliases x,y,z,w only apply for n <= 3; use indexed variables",
                    ));
                }
                let idx = match letter {
                    b'x' => 0,
                    b'y' => 1,
                    b'z' => 2,
                    _ => 3,
                };
                if idx > n {
                    return Err(self.err(
                        start,
                        format!("variable {:?} exceeds n = {n}", letter as char),
                    ));
                }
                idx
            }
            _ => {
                return Err(self.err(
                    start,
                    format!("unknown variable starting with {:?}", letter as char),
                ))
            }
        };
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.integer_raw()?
        } else {
            1
        };
        Ok((var, exp))
    }
}

/// Checks the tuple space `q^{n+1}` against the enumeration limit and
/// builds the field.
fn cone_field(f: &WeightedPolynomial, q: &PrimePower, limit: u64) -> Result<Field> {
    if q.p() != f.p() {
        return Err(Error::Invalid(format!(
            "polynomial has coefficients mod {}, field has characteristic {}",
            f.p(),
            q.p()
        )));
    }
    let n1 = f.weights().weights().len() as u32;
    let q_small = q
        .q_u64()
        .filter(|qv| {
            (0..n1)
                .try_fold(1u64, |acc, _| acc.checked_mul(*qv))
                .is_some_and(|tuples| tuples <= limit)
        })
        .ok_or_else(|| Error::FieldTooLarge {
            q: format!("{}^{n1}", q.q()),
            limit,
        })?;
    Field::new(q.p(), q.alpha(), q_small)
}

/// Validates that a system is nonempty and shares one weight vector and one
/// coefficient prime; returns those common data.
fn validate_system(system: &[WeightedPolynomial]) -> Result<(&WeightVector, u64)> {
    let first = system
        .first()
        .ok_or_else(|| Error::Invalid("empty polynomial system".into()))?;
    for f in &system[1..] {
        if f.weights() != first.weights() || f.p() != first.p() {
            return Err(Error::Invalid(
                "all polynomials of a system must share weights and characteristic".into(),
            ));
        }
    }
    Ok((first.weights(), first.p()))
}

/// Number of common cone zeros of the system with support exactly `mask`,
/// for every mask. Multiple polynomials intersect as an AND of vanishing
/// conditions.
fn support_zero_counts(system: &[WeightedPolynomial], field: &Field) -> Vec<u64> {
    let n1 = system[0].weights().weights().len();
    let q = field.q();
    let mut counts = vec![0u64; 1 << n1];
    let mut point = vec![0u64; n1];
    loop {
        // advance odometer
        let mut i = 0;
        while i < n1 {
            point[i] += 1;
            if point[i] < q {
                break;
            }
            point[i] = 0;
            i += 1;
        }
        if i == n1 {
            break; // wrapped: all tuples visited
        }
        if system.iter().all(|f| f.eval(field, &point) == 0) {
            let mut mask = 0usize;
            for (idx, x) in point.iter().enumerate() {
                if *x != 0 {
                    mask |= 1 << idx;
                }
            }
            counts[mask] += 1;
        }
    }
    counts
}

/// `N(X, λ) = Σ_{mask ⊆ I(λ)} counts[mask]` where `I(λ) = {i : λ^{w_i} = 1}`.
fn fixed_zeros(counts: &[u64], fix_mask: usize) -> u64 {
    let mut acc = 0u64;
    let mut sub = fix_mask;
    loop {
        acc += counts[sub];
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & fix_mask;
    }
    acc
}

/// Mask of indices `i` with `λ^{w_i} = 1`, for `λ = generator^l`.
fn fix_mask_for_log(weights: &[u64], l: u64, m: u64) -> usize {
    let mut mask = 0usize;
    for (i, w) in weights.iter().enumerate() {
        if ((w % m) * l).is_multiple_of(m) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Burnside count of `|X(F_q)|`: averages the per-element fixed cone zeros
/// over `F_q^*`. The division by `q - 1` is exact by Burnside's lemma.
pub fn count_hypersurface_burnside(
    f: &WeightedPolynomial,
    q: &PrimePower,
    limit: u64,
) -> Result<BigUint> {
    count_variety_burnside(std::slice::from_ref(f), q, limit)
}

/// Burnside count for a weighted variety cut out by several polynomials.
pub fn count_variety_burnside(
    system: &[WeightedPolynomial],
    q: &PrimePower,
    limit: u64,
) -> Result<BigUint> {
    let (w, _) = validate_system(system)?;
    let field = cone_field(&system[0], q, limit)?;
    let counts = support_zero_counts(system, &field);
    Ok(burnside_from_counts(&counts, w.weights(), &field))
}

fn burnside_from_counts(counts: &[u64], weights: &[u64], field: &Field) -> BigUint {
    let m = field.q() - 1;
    let mut acc = BigUint::zero();
    for l in 0..m {
        let mask = fix_mask_for_log(weights, l, m);
        acc += fixed_zeros(counts, mask);
    }
    arith::exact_div(acc, &BigUint::from(m), "Burnside hypersurface average")
}

/// Support-stratified count: `Σ_S N(S, f) gcd(k_S, q-1) / (q-1)` with each
/// summand's division checked exact; an inexact stratum is surfaced as an
/// [`Error::Inexact`] diagnostic instead of being rounded.
pub fn count_hypersurface_stratified(
    f: &WeightedPolynomial,
    q: &PrimePower,
    limit: u64,
) -> Result<BigUint> {
    count_variety_stratified(std::slice::from_ref(f), q, limit)
}

/// Stratified count for a weighted variety cut out by several polynomials.
pub fn count_variety_stratified(
    system: &[WeightedPolynomial],
    q: &PrimePower,
    limit: u64,
) -> Result<BigUint> {
    let (w, _) = validate_system(system)?;
    if w.n() > crate::weights::MAX_SUBSET_DIM {
        return Err(Error::DimensionTooLarge(w.n()));
    }
    let field = cone_field(&system[0], q, limit)?;
    let counts = support_zero_counts(system, &field);
    let m = field.q() - 1;
    let mut total = BigUint::zero();
    for s in w.subset_gcds()? {
        let n_s = counts[s.mask as usize];
        if n_s == 0 {
            continue;
        }
        let g = arith::gcd(s.k, m);
        let prod = n_s as u128 * g as u128;
        if !prod.is_multiple_of(m as u128) {
            return Err(Error::Inexact(format!(
                "stratum mask {:#b}: N = {n_s} times gcd(k_S, q-1) = {g} not divisible by q-1 = {m}",
                s.mask
            )));
        }
        total += BigUint::from(prod / m as u128);
    }
    Ok(total)
}

/// Outcome of the normalization comparison for a hypersurface:
/// `|X| = d' |X'| - (d'/(q-1)) Σ_{μ not a d-th power} N(X', μ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pch1Report {
    pub d: u64,
    pub d_prime: u64,
    pub count_w: BigUint,
    pub count_norm: BigUint,
    /// The subtracted term, already divided by `q - 1` (exactly).
    pub deficiency: BigUint,
    pub holds: bool,
}

/// Verifies the normalization relation by direct enumeration of both sides.
pub fn pch1_check(f: &WeightedPolynomial, q: &PrimePower, limit: u64) -> Result<Pch1Report> {
    let (w_norm, d) = f.weights().normalize();
    let f_norm = f.with_weights(w_norm)?;
    let field = cone_field(f, q, limit)?;
    let counts = support_zero_counts(std::slice::from_ref(f), &field);
    let m = field.q() - 1;
    let d_prime = arith::gcd(d, m);

    let count_w = burnside_from_counts(&counts, f.weights().weights(), &field);
    let count_norm = burnside_from_counts(&counts, f_norm.weights().weights(), &field);

    // mu = g^l is a d-th power iff d' | l
    let mut deficiency_sum = BigUint::zero();
    for l in 0..m {
        if l % d_prime == 0 {
            continue;
        }
        let mask = fix_mask_for_log(f_norm.weights().weights(), l, m);
        deficiency_sum += fixed_zeros(&counts, mask);
    }
    let num = deficiency_sum * d_prime;
    let rem = &num % m;
    if !rem.is_zero() {
        return Err(Error::Inexact(format!(
            "deficiency term not divisible by q-1 = {m}"
        )));
    }
    let deficiency = num / m;

    let holds = BigUint::from(d_prime) * &count_norm == &count_w + &deficiency;
    Ok(Pch1Report {
        d,
        d_prime,
        count_w,
        count_norm,
        deficiency,
        holds,
    })
}
