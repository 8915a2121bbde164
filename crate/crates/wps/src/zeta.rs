//! The zeta function `Z(P_w^n, t)` as an exact finite product.
//!
//! The point count over `F_{q^r}` expands, subset by subset, into terms
//! `C q^{rj} [o | r]` with integer coefficients `C` built from binomials and
//! totients of divisors `d | k_S`, where `o = ord_d(q)`. Summing the
//! logarithm series turns each such term into an integer power of
//! `1 - (q^j t)^o`, so
//!
//! ```text
//! Z(P_w^n, t) = ∏_{(j,o)} (1 - (q^j t)^o)^{E(j,o)},   E(j,o) in Z.
//! ```
//!
//! The factorization is kept canonical: exponents are merged per key
//! `(j, o)`, zero exponents dropped, and iteration is sorted by key, which
//! makes equality decidable and the stratum decomposition a keywise sum.
//!
//! Divisors `d` sharing a factor with `q` are excluded: `d | q^r - 1` is
//! identically false for them, so they contribute no factor. This matters
//! when the characteristic divides a weight; the degree of the product is
//! then `-Σ coprime_part(w_i, q)` rather than `-Σ w_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::counting::{self, PrimePower};
use crate::error::{Error, Result};
use crate::weights::WeightVector;

/// Which part of the stratification a factorization describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    Total,
    Smooth,
    Singular,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stratum::Total => "total",
            Stratum::Smooth => "smooth",
            Stratum::Singular => "singular",
        })
    }
}

/// Canonical factor map `(j, o) -> E` representing
/// `∏ (1 - (q^j t)^o)^{E(j,o)}`; zero exponents are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactorization {
    q: PrimePower,
    base_dim: usize,
    stratum: Stratum,
    factors: BTreeMap<(u32, u64), BigInt>,
}

/// Root data of one factor: zeros/poles sit at `t = ζ q^{-j}` for the
/// `o`-th roots of unity `ζ`, with reciprocal magnitude exactly `q^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorRoots {
    pub j: u32,
    pub o: u64,
    /// Positive: zeros of `Z`; negative: poles.
    pub multiplicity: BigInt,
    pub reciprocal_magnitude: BigUint,
}

/// A truncated power series in `t` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<BigInt>,
}

impl IntegerSeries {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntegerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn mul_assign_truncated(&mut self, other: &IntegerSeries) {
        let order = self.coeffs.len() - 1;
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        self.coeffs = out;
    }
}

/// `C(n, k)` for big `n`, small `k`; the running product is divisible at
/// every step.
fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

impl ZetaFactorization {
    /// Builds the factorization of the chosen stratum of `P_w^n` over `F_q`.
    ///
    /// For each admissible subset `S` (all of them, or those with
    /// `k_S > d` / `k_S = d`), each `0 <= j <= |S|-1`, and each divisor
    /// `d' | k_S` coprime to `q`, the factor key `(j, ord_{d'}(q))` gains
    /// `binom(|S|-1, j) (-1)^{|S|-j} φ(d')/ord_{d'}(q)`, an exact integer.
    pub fn build(w: &WeightVector, q: &PrimePower, stratum: Stratum) -> Result<Self> {
        let d = w.gcd();
        let p = q.p();
        let mut factors: BTreeMap<(u32, u64), BigInt> = BTreeMap::new();
        // (order, phi/order) per divisor, memoized across subsets
        let mut divisor_data: BTreeMap<u64, (u64, u64)> = BTreeMap::new();

        for s in w.subset_gcds()? {
            let keep = match stratum {
                Stratum::Total => true,
                Stratum::Singular => s.k > d,
                Stratum::Smooth => s.k == d,
            };
            if !keep {
                continue;
            }
            let m = (s.size - 1) as u64;
            for dv in arith::divisors(s.k).expect("k_S >= 1") {
                if dv % p == 0 {
                    continue; // never divides q^r - 1
                }
                let (order, phi_over_o) = *divisor_data.entry(dv).or_insert_with(|| {
                    let o = arith::multiplicative_order(q.q(), dv)
                        .expect("gcd(d', q) = 1 by the skip above");
                    let phi = arith::euler_phi(dv).expect("d' >= 1");
                    assert_eq!(phi % o, 0, "ord_d(q) divides phi(d)");
                    (o, phi / o)
                });
                for j in 0..=m {
                    let magnitude = BigInt::from(arith::binomial(m, j)) * phi_over_o;
                    // exponent sign: -(-1)^{m-j}
                    let contribution = if (m - j).is_multiple_of(2) { -magnitude } else { magnitude };
                    *factors
                        .entry((j as u32, order))
                        .or_insert_with(BigInt::zero) += contribution;
                }
            }
        }
        factors.retain(|_, e| !e.is_zero());
        Ok(ZetaFactorization {
            q: q.clone(),
            base_dim: w.n(),
            stratum,
            factors,
        })
    }

    pub fn q(&self) -> &PrimePower {
        &self.q
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn stratum(&self) -> Stratum {
        self.stratum
    }

    /// Factor entries sorted by key `(j, o)`.
    pub fn factors(&self) -> impl Iterator<Item = (u32, u64, &BigInt)> {
        self.factors.iter().map(|((j, o), e)| (*j, *o, e))
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Degree as a rational function: `Σ E(j,o) · o`.
    pub fn degree(&self) -> BigInt {
        self.factors
            .iter()
            .map(|((_, o), e)| e * BigInt::from(*o))
            .sum()
    }

    /// Recovers the point count over `F_{q^r}` from the factor exponents:
    /// `N_r = -Σ_{o | r} E(j,o) · o · q^{jr}`.
    pub fn recover_count(&self, r: u32) -> BigInt {
        let mut acc = BigInt::zero();
        for ((j, o), e) in &self.factors {
            if u64::from(r) % o == 0 {
                let power = BigInt::from(self.q.q().pow(j * r));
                acc -= e * BigInt::from(*o) * power;
            }
        }
        acc
    }

    /// Exact expansion of the product to the given order in `t`.
    pub fn expand_series(&self, order: usize) -> IntegerSeries {
        let mut acc = IntegerSeries::one(order);
        for ((j, o), e) in &self.factors {
            let factor = expand_factor(self.q.q(), *j, *o, e, order);
            acc.mul_assign_truncated(&factor);
        }
        acc
    }

    /// Pole/zero data per factor key.
    pub fn poles_zeros(&self) -> Vec<FactorRoots> {
        self.factors
            .iter()
            .map(|((j, o), e)| FactorRoots {
                j: *j,
                o: *o,
                multiplicity: e.clone(),
                reciprocal_magnitude: self.q.q().pow(*j),
            })
            .collect()
    }

    /// Multiplies the factorization out into a single numerator/denominator
    /// pair of exact integer polynomials (no truncation).
    pub fn as_rational(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut numerator = vec![BigInt::one()];
        let mut denominator = vec![BigInt::one()];
        for ((j, o), e) in &self.factors {
            let count = u64::try_from(e.abs().clone()).expect("fully expandable exponent");
            let base = factor_polynomial(self.q.q(), *j, *o);
            let target = if e.is_negative() {
                &mut denominator
            } else {
                &mut numerator
            };
            for _ in 0..count {
                *target = poly_mul(target, &base);
            }
        }
        (numerator, denominator)
    }
}

/// The polynomial `1 - q^{jo} t^o`.
fn factor_polynomial(q: &BigUint, j: u32, o: u64) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); o as usize + 1];
    poly[0] = BigInt::one();
    poly[o as usize] = -BigInt::from(q.pow(j * o as u32));
    poly
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Truncated expansion of `(1 - u)^E` with `u = q^{jo} t^o`.
fn expand_factor(q: &BigUint, j: u32, o: u64, e: &BigInt, order: usize) -> IntegerSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::one();
    let max_i = order as u64 / o;
    let u_base = q.pow(j * o as u32); // coefficient of t^o inside u
    let mut u_power = BigUint::one();
    if e.is_negative() {
        let k = e.magnitude();
        for i in 1..=max_i {
            u_power *= &u_base;
            // C(i + k - 1, i), binomial series of (1 - u)^{-k}
            let c = binomial_big(&(k + BigUint::from(i) - BigUint::from(1u32)), i);
            coeffs[(i * o) as usize] = BigInt::from(c * &u_power);
        }
    } else {
        let k = e.magnitude();
        let k_small = u64::try_from(k).unwrap_or(u64::MAX);
        for i in 1..=max_i.min(k_small) {
            u_power *= &u_base;
            let c = binomial_big(k, i);
            let signed = BigInt::from(c * &u_power);
            coeffs[(i * o) as usize] = if i % 2 == 1 { -signed } else { signed };
        }
    }
    IntegerSeries { coeffs }
}

/// Keywise check that `total = smooth + singular`, the factor-level form of
/// `Z = Z_smooth · Z_singular`.
pub fn decomposition_check(w: &WeightVector, q: &PrimePower) -> Result<bool> {
    let total = ZetaFactorization::build(w, q, Stratum::Total)?;
    let smooth = ZetaFactorization::build(w, q, Stratum::Smooth)?;
    let singular = ZetaFactorization::build(w, q, Stratum::Singular)?;
    let mut combined = smooth.factors;
    for (key, e) in singular.factors {
        *combined.entry(key).or_insert_with(BigInt::zero) += e;
    }
    combined.retain(|_, e| !e.is_zero());
    Ok(combined == total.factors)
}

/// Comparison of `Z(P_w, t)` with the zeta data of the normalization
/// `w' = w/d` over extensions `r = 1..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationZeta {
    pub d: u64,
    /// `gcd(d, q^r - 1)` for `r = 1..=order`.
    pub d_r: Vec<u64>,
    /// `E_r = N_r - d_r · N'_r`, cross-checked against the order-grouped
    /// correction sum evaluated over `F_{q^r}`.
    pub e_terms: Vec<BigInt>,
    /// Coefficients of `Z_err(t) = exp(Σ E_r t^r / r)`, exact rationals.
    pub zerr: Vec<BigRational>,
    /// The same coefficients when they are all integers.
    pub zerr_integer: Option<Vec<BigInt>>,
    /// True when every `E_r = 0` and every `d_r = 1` up to the order.
    pub equal: bool,
}

/// Computes `N_r` and `N'_r` by zeta recovery, forms the error terms
/// `E_r = N_r - gcd(d, q^r - 1) N'_r`, and independently re-derives each
/// `E_r` from the subset-formula relation over `F_{q^r}`.
pub fn normalization_zeta_compare(
    w: &WeightVector,
    q: &PrimePower,
    order: usize,
) -> Result<NormalizationZeta> {
    let (w_norm, d) = w.normalize();
    let z_w = ZetaFactorization::build(w, q, Stratum::Total)?;
    let z_norm = ZetaFactorization::build(&w_norm, q, Stratum::Total)?;

    let mut d_r = Vec::with_capacity(order);
    let mut e_terms = Vec::with_capacity(order);
    for r in 1..=order as u32 {
        let qr = q.extend(r);
        let dr = arith::gcd_u64_big(d, &qr.q_minus_one());
        let n_r = z_w.recover_count(r);
        let n_norm_r = z_norm.recover_count(r);
        let e_r = &n_r - BigInt::from(dr) * &n_norm_r;

        // independent route: subset counts plus the order-grouped correction
        let relation = counting::normalization_relation(w, &qr)?;
        if relation.error_term != e_r || !relation.relation_holds {
            return Err(Error::Inexact(format!(
                "normalization error terms disagree at r = {r}: zeta route {e_r}, \
                 subset route {}",
                relation.error_term
            )));
        }

        d_r.push(dr);
        e_terms.push(e_r);
    }

    // Z_err = exp(Σ E_r t^r / r): r · c_r = Σ_{m=1..r} E_m · c_{r-m}
    let mut zerr = vec![BigRational::one()];
    for r in 1..=order {
        let mut acc = BigRational::zero();
        for m in 1..=r {
            acc += BigRational::from(e_terms[m - 1].clone()) * &zerr[r - m];
        }
        zerr.push(acc / BigInt::from(r as u64));
    }
    let zerr_integer = zerr
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect::<Option<Vec<BigInt>>>();

    let equal = e_terms.iter().all(|e| e.is_zero()) && d_r.iter().all(|dr| *dr == 1);
    Ok(NormalizationZeta {
        d,
        d_r,
        e_terms,
        zerr,
        zerr_integer,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(w: &[u64]) -> WeightVector {
        WeightVector::new(w.to_vec()).unwrap()
    }

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_q(q).unwrap()
    }

    fn keys(z: &ZetaFactorization) -> Vec<(u32, u64, i64)> {
        z.factors()
            .map(|(j, o, e)| (j, o, i64::try_from(e).unwrap()))
            .collect()
    }

    #[test]
    fn projective_space_factorization() {
        // all-ones weights: 1 / ((1-t)(1-qt)...(1-q^n t)) for any q
        for n in 1..=4usize {
            for q in [2u64, 3, 5] {
                let w = WeightVector::new(vec![1; n + 1]).unwrap();
                let z = ZetaFactorization::build(&w, &pp(q), Stratum::Total).unwrap();
                let expect: Vec<(u32, u64, i64)> =
                    (0..=n as u32).map(|j| (j, 1, -1)).collect();
                assert_eq!(keys(&z), expect, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn smooth_stratum_example() {
        // (1-t)^2 / ((1-qt)(1-q^2 t)(1-q^3 t)) at q = 3 and q = 5
        for q in [3u64, 5] {
            let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(q), Stratum::Smooth).unwrap();
            assert_eq!(keys(&z), vec![(0, 1, 2), (1, 1, -1), (2, 1, -1), (3, 1, -1)]);
        }
    }

    #[test]
    fn singular_stratum_example() {
        // at q = 3 the divisor 3 is skipped: only (0,1) -> -4 and (0,4) -> -1
        let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(3), Stratum::Singular).unwrap();
        assert_eq!(keys(&z), vec![(0, 1, -4), (0, 4, -1)]);
    }

    #[test]
    fn degree_examples() {
        let z = ZetaFactorization::build(&wv(&[1, 1, 1, 1]), &pp(5), Stratum::Total).unwrap();
        assert_eq!(z.degree(), BigInt::from(-4));

        // gcd(7, w_i) = 1 for all i: the degree is -(1+2+3+5)
        let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(7), Stratum::Total).unwrap();
        assert_eq!(z.degree(), BigInt::from(-11));

        // p = 3 divides w_2 = 3: the degree drops to -Σ coprime_part(w_i, 3)
        let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(3), Stratum::Total).unwrap();
        assert_eq!(z.degree(), BigInt::from(-9));
    }

    #[test]
    fn degree_matches_full_expansion() {
        for (w, q) in [
            (wv(&[1, 2, 3, 5]), pp(3)),
            (wv(&[1, 2, 3, 5]), pp(7)),
            (wv(&[2, 4]), pp(5)),
            (wv(&[1, 6, 14, 21]), pp(3)),
        ] {
            let z = ZetaFactorization::build(&w, &q, Stratum::Total).unwrap();
            let (num, den) = z.as_rational();
            assert!(!num.last().unwrap().is_zero());
            assert!(!den.last().unwrap().is_zero());
            let expansion_degree =
                BigInt::from(num.len() as i64 - 1) - BigInt::from(den.len() as i64 - 1);
            assert_eq!(z.degree(), expansion_degree, "w={w} q={q}");
            // coprime-part law
            let by_parts: u64 = w
                .weights()
                .iter()
                .map(|wi| arith::coprime_part(*wi, q.q()))
                .sum();
            assert_eq!(z.degree(), -BigInt::from(by_parts));
        }
    }

    #[test]
    fn recover_count_examples() {
        let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(3), Stratum::Total).unwrap();
        assert_eq!(z.recover_count(1), BigInt::from(41));

        let z = ZetaFactorization::build(&wv(&[1, 6, 14, 21]), &pp(3), Stratum::Singular).unwrap();
        assert_eq!(z.recover_count(2), BigInt::from(37));

        let z = ZetaFactorization::build(&wv(&[1, 1]), &pp(2), Stratum::Total).unwrap();
        assert_eq!(z.recover_count(3), BigInt::from(9));
    }

    #[test]
    fn recovery_matches_direct_counts_per_stratum() {
        for (w, q) in [
            (wv(&[1, 2, 3, 5]), pp(3)),
            (wv(&[2, 4, 6, 10]), pp(5)),
            (wv(&[1, 6, 14, 21]), pp(7)),
            (wv(&[2, 4]), pp(9)),
        ] {
            let total = ZetaFactorization::build(&w, &q, Stratum::Total).unwrap();
            let smooth = ZetaFactorization::build(&w, &q, Stratum::Smooth).unwrap();
            let singular = ZetaFactorization::build(&w, &q, Stratum::Singular).unwrap();
            for r in 1..=8u32 {
                let direct = counting::count_strata(&w, &q.extend(r)).unwrap();
                assert_eq!(total.recover_count(r), BigInt::from(direct.total.clone()));
                assert_eq!(smooth.recover_count(r), BigInt::from(direct.smooth.clone()));
                assert_eq!(
                    singular.recover_count(r),
                    BigInt::from(direct.singular.clone())
                );
            }
        }
    }

    #[test]
    fn series_examples() {
        // 1/((1-t)(1-2t)) = sum (2^{r+1} - 1) t^r
        let z = ZetaFactorization::build(&wv(&[1, 1]), &pp(2), Stratum::Total).unwrap();
        let s = z.expand_series(2);
        let got: Vec<i64> = s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(got, vec![1, 3, 7]);

        assert_eq!(z.expand_series(0).coeffs(), &[BigInt::one()]);

        let z = ZetaFactorization::build(&wv(&[1, 2]), &pp(3), Stratum::Total).unwrap();
        let s = z.expand_series(1);
        assert_eq!(s.coeffs()[1], BigInt::from(5));
    }

    #[test]
    fn series_satisfies_newton_identity() {
        // r c_r = Σ_{m=1..r} N_m c_{r-m}, from t (log Z)' Z = t Z'
        for (w, q) in [
            (wv(&[1, 2, 3, 5]), pp(3)),
            (wv(&[2, 4, 6, 10]), pp(3)),
            (wv(&[1, 6, 14, 21]), pp(5)),
            (wv(&[1, 2]), pp(4)),
        ] {
            let z = ZetaFactorization::build(&w, &q, Stratum::Total).unwrap();
            let series = z.expand_series(12);
            let counts: Vec<BigInt> = (1..=12).map(|r| z.recover_count(r)).collect();
            for r in 1..=12usize {
                let lhs = BigInt::from(r as u64) * &series.coeffs()[r];
                let mut rhs = BigInt::zero();
                for m in 1..=r {
                    rhs += &counts[m - 1] * &series.coeffs()[r - m];
                }
                assert_eq!(lhs, rhs, "w={w} q={q} r={r}");
            }
        }
    }

    #[test]
    fn poles_and_zeros() {
        let z = ZetaFactorization::build(&wv(&[1, 1, 1]), &pp(2), Stratum::Total).unwrap();
        let roots = z.poles_zeros();
        assert_eq!(roots.len(), 3);
        for (j, root) in roots.iter().enumerate() {
            assert!(root.multiplicity < BigInt::zero(), "P^n has only poles");
            assert_eq!(root.reciprocal_magnitude, BigUint::from(2u32).pow(j as u32));
        }

        let z = ZetaFactorization::build(&wv(&[1, 2, 3, 5]), &pp(3), Stratum::Smooth).unwrap();
        let roots = z.poles_zeros();
        assert_eq!(roots[0].multiplicity, BigInt::from(2)); // zero of order 2 at t = 1
        assert!(roots[1..].iter().all(|r| r.multiplicity == BigInt::from(-1)));

        let empty = ZetaFactorization::build(&wv(&[1, 1]), &pp(3), Stratum::Singular).unwrap();
        assert!(empty.is_empty());
        assert!(empty.poles_zeros().is_empty());
    }

    #[test]
    fn decomposition_examples() {
        assert!(decomposition_check(&wv(&[1, 2, 3, 5]), &pp(3)).unwrap());
        assert!(decomposition_check(&wv(&[1, 1, 1]), &pp(5)).unwrap());
        assert!(decomposition_check(&wv(&[2, 4, 6, 10]), &pp(5)).unwrap());
    }

    #[test]
    fn factor_keys_stay_in_range() {
        for (w, q) in [
            (wv(&[1, 2, 3, 5]), pp(3)),
            (wv(&[2, 4, 6, 10]), pp(9)),
            (wv(&[1, 6, 14, 21]), pp(2)),
        ] {
            for stratum in [Stratum::Total, Stratum::Smooth, Stratum::Singular] {
                let z = ZetaFactorization::build(&w, &q, stratum).unwrap();
                for (j, o, _) in z.factors() {
                    assert!((j as usize) <= w.n());
                    assert!(o >= 1);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn prop_recovery_matches_direct_counts(
                weights in proptest::collection::vec(1u64..=10, 2..=4),
                qi in 0usize..6,
                r in 1u32..=8,
                si in 0usize..3,
            ) {
                let q = pp([2u64, 3, 4, 5, 7, 9][qi]);
                let stratum = [Stratum::Total, Stratum::Smooth, Stratum::Singular][si];
                let w = WeightVector::new(weights).unwrap();
                let z = ZetaFactorization::build(&w, &q, stratum).unwrap();
                let direct = counting::count_strata(&w, &q.extend(r)).unwrap();
                let expect = BigInt::from(match stratum {
                    Stratum::Total => direct.total,
                    Stratum::Smooth => direct.smooth,
                    Stratum::Singular => direct.singular,
                });
                prop_assert_eq!(z.recover_count(r), expect);
            }

            #[test]
            fn prop_decomposition_holds(
                weights in proptest::collection::vec(1u64..=10, 2..=5),
                qi in 0usize..6,
            ) {
                let q = pp([2u64, 3, 4, 5, 7, 9][qi]);
                let w = WeightVector::new(weights).unwrap();
                prop_assert!(decomposition_check(&w, &q).unwrap());
            }
        }
    }

    #[test]
    fn normalization_compare_examples() {
        // d = 2, every q^r - 1 even: E_1 = 80 - 2*41 = -2
        let rep = normalization_zeta_compare(&wv(&[2, 4, 6, 10]), &pp(3), 4).unwrap();
        assert_eq!(rep.d, 2);
        assert!(!rep.equal);
        assert_eq!(rep.e_terms[0], BigInt::from(-2));
        assert_eq!(rep.d_r, vec![2, 2, 2, 2]);
        // Z_err = (1-t)/(1+t) here: integer coefficients 1, -2, 2, -2, 2
        let ints = rep.zerr_integer.expect("integral");
        let got: Vec<i64> = ints.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(got, vec![1, -2, 2, -2, 2]);

        // d' = gcd(7, 3-1) = 1 but gcd(7, 3^6-1) = 7: counts diverge at r = 6
        let rep = normalization_zeta_compare(&wv(&[7, 14, 21, 35]), &pp(3), 6).unwrap();
        assert!(!rep.equal);
        assert_eq!(rep.d_r[0], 1);
        assert_eq!(rep.d_r[5], 7);
        assert!(rep.e_terms[0].is_zero());

        // d = 1: trivially equal
        let rep = normalization_zeta_compare(&wv(&[1, 2, 3]), &pp(5), 5).unwrap();
        assert!(rep.equal);
        assert!(rep.e_terms.iter().all(|e| e.is_zero()));
        assert_eq!(
            rep.zerr_integer.unwrap(),
            vec![
                BigInt::one(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero()
            ]
        );
    }
}
