//! Closed-form point counts of `P_w^n` over `F_q` and their relations.
//!
//! Two independent formulas compute the total count:
//!
//! * the subset formula `Σ_S (q-1)^{|S|-1} gcd(k_S, q-1)` over nonempty
//!   coordinate subsets, which also splits into singular (`k_S > d`) and
//!   smooth (`k_S = d`) strata, and
//! * the Burnside sum `(q-1)^{-1} Σ_λ (q^{N(λ)} - 1)`, evaluated without any
//!   field construction by grouping `λ` by multiplicative order: an order-`e`
//!   element satisfies `λ^{w} = 1` exactly when `e | w`, so the sum collapses
//!   to `Σ_{e | q-1} φ(e) (q^{N_e} - 1)` with `N_e = #{i : e | w_i}`. Only
//!   divisors of some `w_i` contribute, which makes the evaluation
//!   `O(Σ τ(w_i))` big-integer operations.
//!
//! All divisions mandated exact by the counting identities are checked; a
//! nonzero remainder panics rather than truncating.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, exact_div};
use crate::error::{Error, Result};
use crate::weights::WeightVector;

/// An explicit prime power `q = p^alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    p: u64,
    alpha: u32,
    q: BigUint,
}

impl PrimePower {
    pub fn new(p: u64, alpha: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if alpha == 0 {
            return Err(Error::Invalid("exponent alpha must be >= 1".into()));
        }
        Ok(Self {
            p,
            alpha,
            q: BigUint::from(p).pow(alpha),
        })
    }

    /// Factors `q` as `p^alpha`; rejects anything that is not a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        for alpha in (1..=63u32).rev() {
            let p = integer_root(q, alpha);
            if p >= 2 && checked_pow(p, alpha) == Some(q) && arith::is_prime(p) {
                return PrimePower::new(p, alpha);
            }
        }
        Err(Error::Invalid(format!("{q} is not a prime power")))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn q_minus_one(&self) -> BigUint {
        &self.q - 1u32
    }

    /// `q` as a machine word, when it fits.
    pub fn q_u64(&self) -> Option<u64> {
        u64::try_from(&self.q).ok()
    }

    /// The field `F_{q^r}` as a prime power: `p^{alpha * r}`. Requires `r >= 1`.
    pub fn extend(&self, r: u32) -> PrimePower {
        assert!(r >= 1, "extension degree must be >= 1");
        PrimePower {
            p: self.p,
            alpha: self.alpha * r,
            q: self.q.pow(r),
        }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.alpha)
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Largest `r` with `r^alpha <= n`.
fn integer_root(n: u64, alpha: u32) -> u64 {
    if alpha == 1 {
        return n;
    }
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / alpha).min(63);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match checked_pow(mid, alpha) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

/// Which route produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Subset,
    Burnside,
    BruteForce,
    SpecialCase,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Subset => "subset",
            Method::Burnside => "burnside",
            Method::BruteForce => "bruteforce",
            Method::SpecialCase => "special-case",
        };
        f.write_str(name)
    }
}

/// Exact total/singular/smooth counts with method provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub total: BigUint,
    pub singular: BigUint,
    pub smooth: BigUint,
    pub method: Method,
    pub q: PrimePower,
    pub weights: WeightVector,
}

/// One row of a prime tower `q = p^a`, `a = 1..A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerRow {
    pub a: u32,
    pub q: BigUint,
    pub singular: BigUint,
    pub smooth: BigUint,
    pub total: BigUint,
}

/// Subset-gcd count: `Σ_S (q-1)^{|S|-1} gcd(k_S, q-1)` over nonempty `S`.
pub fn count_subset(w: &WeightVector, q: &PrimePower) -> Result<BigUint> {
    Ok(count_strata(w, q)?.total)
}

/// Total together with the singular/smooth split of the subset formula.
pub fn count_strata(w: &WeightVector, q: &PrimePower) -> Result<CountReport> {
    let qm1 = q.q_minus_one();
    let powers = power_table(&qm1, w.n() + 1);
    let d = w.gcd();
    let mut singular = BigUint::zero();
    let mut smooth = BigUint::zero();
    for s in w.subset_gcds()? {
        let g = arith::gcd_u64_big(s.k, &qm1);
        let term = &powers[(s.size - 1) as usize] * g;
        if s.k > d {
            singular += term;
        } else {
            smooth += term;
        }
    }
    Ok(CountReport {
        total: &singular + &smooth,
        singular,
        smooth,
        method: Method::Subset,
        q: q.clone(),
        weights: w.clone(),
    })
}

fn power_table(base: &BigUint, len: usize) -> Vec<BigUint> {
    let mut powers = Vec::with_capacity(len);
    powers.push(BigUint::one());
    for _ in 1..len {
        let next = powers.last().unwrap() * base;
        powers.push(next);
    }
    powers
}

/// Divisors of at least one weight, deduplicated and sorted. These are the
/// only element orders `e` with `N_e > 0`.
fn weight_divisors(w: &WeightVector) -> Vec<u64> {
    let mut all = Vec::new();
    for wi in w.weights() {
        all.extend(arith::divisors(*wi).expect("weights are positive"));
    }
    all.sort_unstable();
    all.dedup();
    all
}

/// Burnside count via order grouping; no dimension cap.
pub fn count_burnside(w: &WeightVector, q: &PrimePower) -> BigUint {
    let qm1 = q.q_minus_one();
    let mut acc = BigUint::zero();
    for e in weight_divisors(w) {
        if (&qm1 % e).is_zero() {
            let n_e = w.weights().iter().filter(|wi| *wi % e == 0).count() as u32;
            let phi = arith::euler_phi(e).expect("e >= 1");
            acc += (q.q().pow(n_e) - 1u32) * phi;
        }
    }
    exact_div(acc, &qm1, "Burnside orbit average")
}

/// Count over the extension `F_{q^r}`.
pub fn count_extension(w: &WeightVector, q: &PrimePower, r: u32) -> BigUint {
    count_burnside(w, &q.extend(r))
}

/// `(q^{n+1} - 1)/(q - 1)` under the hypothesis `gcd(w_i, q-1) = 1` for all
/// `i`; reports the first offending index otherwise.
pub fn count_special_case(w: &WeightVector, q: &PrimePower) -> Result<BigUint> {
    let qm1 = q.q_minus_one();
    for (index, wi) in w.weights().iter().enumerate() {
        let g = arith::gcd_u64_big(*wi, &qm1);
        if g != 1 {
            return Err(Error::HypothesisViolated { index, gcd: g });
        }
    }
    let num = q.q().pow(w.n() as u32 + 1) - 1u32;
    Ok(exact_div(num, &qm1, "projective-space count"))
}

/// How a count relates to the count of the normalized vector `w' = w/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationReport {
    pub d: u64,
    /// `d' = gcd(d, q-1)`, the kernel size of the d-th power map on `F_q^*`.
    pub d_prime: u64,
    pub count_w: BigUint,
    pub count_w_norm: BigUint,
    /// `count_w - d' * count_w_norm`, always `= (d' - 1) - correction`.
    pub error_term: BigInt,
    /// `(d'/(q-1)) Σ_{μ in G \ H} q^{N'(μ)}` over the non-d-th-powers.
    pub correction: BigUint,
    pub relation_holds: bool,
}

/// `Σ_{μ in G} q^{N'(μ)}` restricted to the subgroup of elements whose order
/// divides `sub_order`. Grouping by order `e`: the subgroup of order
/// `sub_order` in the cyclic group `F_q^*` contains `φ(e)` elements of order
/// `e` for each `e | sub_order`. Orders dividing no weight contribute
/// `q^0 = 1` apiece, so the base value is `sub_order` itself.
fn power_sum_over_subgroup(w: &WeightVector, q: &BigUint, sub_order: &BigUint) -> BigUint {
    let mut acc = sub_order.clone();
    for e in weight_divisors(w) {
        if (sub_order % e).is_zero() {
            let n_e = w.weights().iter().filter(|wi| *wi % e == 0).count() as u32;
            let phi = arith::euler_phi(e).expect("e >= 1");
            acc += (q.pow(n_e) - 1u32) * phi;
        }
    }
    acc
}

/// Relates `|P_w(F_q)|` to `|P_{w'}(F_q)|` for `w' = w/d`:
/// `count_w = d' * count_w' + (d' - 1) - correction`, verified exactly.
pub fn normalization_relation(w: &WeightVector, q: &PrimePower) -> Result<NormalizationReport> {
    let (w_norm, d) = w.normalize();
    let qm1 = q.q_minus_one();
    let d_prime = arith::gcd_u64_big(d, &qm1);
    let count_w = count_subset(w, q)?;
    let count_w_norm = count_subset(&w_norm, q)?;

    // μ is a d-th power iff ord(μ) divides (q-1)/d'.
    let h_order = exact_div(qm1.clone(), &BigUint::from(d_prime), "subgroup order");
    let sum_g = power_sum_over_subgroup(&w_norm, q.q(), &qm1);
    let sum_h = power_sum_over_subgroup(&w_norm, q.q(), &h_order);
    let correction = exact_div(
        (sum_g - sum_h) * d_prime,
        &qm1,
        "normalization correction term",
    );

    let lhs = BigInt::from(count_w.clone());
    let rhs = BigInt::from(&count_w_norm * d_prime) + (BigInt::from(d_prime) - 1)
        - BigInt::from(correction.clone());
    let relation_holds = lhs == rhs;
    let error_term = lhs - BigInt::from(&count_w_norm * d_prime);

    Ok(NormalizationReport {
        d,
        d_prime,
        count_w,
        count_w_norm,
        error_term,
        correction,
        relation_holds,
    })
}

/// Effect of scaling all but the first weight by `gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingReport {
    pub count_original: BigUint,
    pub count_scaled: BigUint,
    /// `count_scaled - count_original`.
    pub difference: BigInt,
    /// The subset-sum `Σ_S (q-1)^{|S|-1} (gcd(γ k_S, q-1) - gcd(k_S, q-1))`
    /// over nonempty `S ⊆ {1..n}`; always equals `difference`.
    pub formula_sum: BigInt,
}

/// Compares `w = (w_0, w_1, …, w_n)` with `(w_0, γw_1, …, γw_n)`.
/// Requires `gcd(w_0, γ) = 1`; the difference is oriented scaled-minus-original.
pub fn scaling_difference(w: &WeightVector, gamma: u64, q: &PrimePower) -> Result<ScalingReport> {
    if gamma == 0 {
        return Err(Error::Invalid("gamma must be positive".into()));
    }
    let g0 = arith::gcd(w.weights()[0], gamma);
    if g0 != 1 {
        return Err(Error::CoprimalityViolated(g0));
    }
    let scaled: Vec<u64> = w
        .weights()
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            if i == 0 {
                Some(*wi)
            } else {
                wi.checked_mul(gamma)
            }
        })
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| Error::Invalid("gamma * w_i overflows".into()))?;
    let w_scaled = WeightVector::new(scaled)?;

    let qm1 = q.q_minus_one();
    let powers = power_table(&qm1, w.n() + 1);
    let mut formula_sum = BigInt::zero();
    for s in w.subset_gcds()? {
        if s.mask & 1 != 0 {
            continue; // only subsets avoiding index 0 contribute
        }
        let g_scaled = BigInt::from(gcd_scaled(gamma, s.k, &qm1));
        let g_plain = BigInt::from(arith::gcd_u64_big(s.k, &qm1));
        formula_sum += BigInt::from(powers[(s.size - 1) as usize].clone()) * (g_scaled - g_plain);
    }

    let count_original = count_subset(w, q)?;
    let count_scaled = count_subset(&w_scaled, q)?;
    let difference = BigInt::from(count_scaled.clone()) - BigInt::from(count_original.clone());

    Ok(ScalingReport {
        count_original,
        count_scaled,
        difference,
        formula_sum,
    })
}

/// `gcd(gamma * k, m)` without overflowing the word product.
fn gcd_scaled(gamma: u64, k: u64, m: &BigUint) -> u64 {
    let prod = BigUint::from(gamma) * k;
    let g = prod.gcd(m);
    u64::try_from(&g).expect("gcd bounded by gamma * k")
}

/// Strata counts for the tower `q = p^a`, `a = 1..=max_exp`.
pub fn tower(w: &WeightVector, p: u64, max_exp: u32) -> Result<Vec<TowerRow>> {
    let base = PrimePower::new(p, 1)?;
    (1..=max_exp)
        .map(|a| {
            let q = base.extend(a);
            let report = count_strata(w, &q)?;
            Ok(TowerRow {
                a,
                q: q.q().clone(),
                singular: report.singular,
                smooth: report.smooth,
                total: report.total,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wv(w: &[u64]) -> WeightVector {
        WeightVector::new(w.to_vec()).unwrap()
    }

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_q(q).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn prime_power_construction() {
        assert_eq!(pp(243), PrimePower::new(3, 5).unwrap());
        assert_eq!(pp(161051).p(), 11);
        assert_eq!(pp(161051).alpha(), 5);
        assert!(PrimePower::from_q(6).is_err());
        assert!(PrimePower::from_q(1).is_err());
        assert!(PrimePower::from_q(0).is_err());
        assert!(matches!(PrimePower::new(4, 1), Err(Error::NotPrime(4))));
        assert_eq!(pp(2).extend(3).q(), &big(8));
    }

    #[test]
    fn subset_count_examples() {
        assert_eq!(count_subset(&wv(&[1, 2, 3, 5]), &pp(3)).unwrap(), big(41));
        assert_eq!(count_subset(&wv(&[1, 2]), &pp(3)).unwrap(), big(5));
        // all-ones weights give the classical projective count
        for n in 1..=4usize {
            for q in [2u64, 3, 4, 5, 9] {
                let w = WeightVector::new(vec![1; n + 1]).unwrap();
                let expect = exact_div(
                    big(q).pow(n as u32 + 1) - 1u32,
                    &big(q - 1),
                    "P^n",
                );
                assert_eq!(count_subset(&w, &pp(q)).unwrap(), expect);
            }
        }
    }

    #[test]
    fn burnside_examples() {
        // e=1 gives 9-1=8, e=2 gives phi(2)*(3-1)=2, (8+2)/2 = 5
        assert_eq!(count_burnside(&wv(&[1, 2]), &pp(3)), big(5));
        assert_eq!(count_burnside(&wv(&[2, 4, 6, 10]), &pp(9)), big(1642));
        assert_eq!(count_burnside(&wv(&[1, 1]), &pp(4)), big(5));
    }

    #[test]
    fn extension_examples() {
        assert_eq!(
            count_extension(&wv(&[1, 2, 3, 5]), &pp(3), 5),
            big(14_408_201)
        );
        // Consistency with the normalization relation over F_{5^5}:
        // d' = gcd(2, 5^5 - 1) = 2 and the correction vanishes, so the
        // count doubles that of (1,2,3,5): 2 * 30_527_346_877.
        assert_eq!(
            count_extension(&wv(&[2, 4, 6, 10]), &pp(5), 5),
            big(61_054_693_754)
        );
        for (w, q) in [(wv(&[1, 2, 3, 5]), pp(7)), (wv(&[2, 3]), pp(4))] {
            assert_eq!(count_extension(&w, &q, 1), count_burnside(&w, &q));
        }
    }

    #[test]
    fn strata_examples() {
        let r = count_strata(&wv(&[1, 6, 14, 21]), &pp(3)).unwrap();
        assert_eq!(
            (r.singular, r.smooth, r.total),
            (big(13), big(31), big(44))
        );
        let r = count_strata(&wv(&[1, 2, 3, 5]), &pp(81)).unwrap();
        assert_eq!(
            (r.singular, r.smooth, r.total),
            (big(8), big(538_081), big(538_089))
        );
        for q in [2u64, 3, 7, 9] {
            let r = count_strata(&wv(&[1, 1]), &pp(q)).unwrap();
            assert_eq!(r.singular, BigUint::zero());
            assert_eq!(r.smooth, big(q + 1));
        }
    }

    #[test]
    fn special_case_examples() {
        assert!(matches!(
            count_special_case(&wv(&[1, 6, 14, 21]), &pp(3)),
            Err(Error::HypothesisViolated { index: 1, gcd: 2 })
        ));
        assert_eq!(count_special_case(&wv(&[1, 3, 5]), &pp(3)).unwrap(), big(13));
        assert_eq!(count_special_case(&wv(&[1, 1, 1]), &pp(2)).unwrap(), big(7));
        // must agree with the subset formula under the hypothesis
        assert_eq!(
            count_special_case(&wv(&[1, 3, 5]), &pp(3)).unwrap(),
            count_subset(&wv(&[1, 3, 5]), &pp(3)).unwrap()
        );
    }

    #[test]
    fn formulas_agree_on_sweep() {
        // n <= 5, weights <= 8 sampled, q over mixed characteristics
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let q = pp(q);
            for w in [
                wv(&[1, 1]),
                wv(&[1, 2]),
                wv(&[8, 8]),
                wv(&[2, 4, 6]),
                wv(&[5, 7, 8]),
                wv(&[1, 2, 3, 5]),
                wv(&[2, 4, 6, 10]),
                wv(&[1, 6, 14, 21]),
                wv(&[3, 3, 3, 3]),
                wv(&[2, 3, 4, 5, 6]),
                wv(&[4, 6, 8, 2, 2]),
                wv(&[1, 2, 3, 4, 5, 6]),
                wv(&[8, 4, 2, 6, 4, 8]),
            ] {
                assert_eq!(
                    count_subset(&w, &q).unwrap(),
                    count_burnside(&w, &q),
                    "w={w} q={q}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn prop_subset_equals_burnside(
            weights in proptest::collection::vec(1u64..=8, 2..=6),
            qi in 0usize..9,
        ) {
            let q = pp([2u64, 3, 4, 5, 7, 8, 9, 11, 13][qi]);
            let w = WeightVector::new(weights).unwrap();
            prop_assert_eq!(count_subset(&w, &q).unwrap(), count_burnside(&w, &q));
        }

        #[test]
        fn prop_normalization_monotone(
            weights in proptest::collection::vec(1u64..=10, 2..=5),
            qi in 0usize..7,
        ) {
            let q = pp([2u64, 3, 4, 5, 7, 8, 9][qi]);
            let w = WeightVector::new(weights).unwrap();
            let rep = normalization_relation(&w, &q).unwrap();
            prop_assert!(rep.relation_holds);
            prop_assert!(rep.count_w_norm <= rep.count_w);
            prop_assert_eq!(rep.count_w_norm == rep.count_w, rep.d_prime == 1);
        }
    }

    #[test]
    fn normalization_examples() {
        let r = normalization_relation(&wv(&[2, 4, 6, 10]), &pp(5)).unwrap();
        assert_eq!(r.count_w, big(314));
        assert_eq!(r.count_w_norm, big(157));
        assert_eq!(r.d_prime, 2);
        assert!(r.relation_holds);
        assert_eq!(r.error_term, BigInt::zero());

        let r = normalization_relation(&wv(&[7, 14, 21, 35]), &pp(11)).unwrap();
        assert_eq!(r.count_w, r.count_w_norm);
        assert_eq!(r.d_prime, 1);
        assert!(r.relation_holds);

        // 80 = 2 * 41 - 2
        let r = normalization_relation(&wv(&[2, 4, 6, 10]), &pp(3)).unwrap();
        assert_eq!(r.count_w, big(80));
        assert_eq!(r.count_w_norm, big(41));
        assert_eq!(r.error_term, BigInt::from(-2));
        assert!(r.relation_holds);
    }

    #[test]
    fn scaling_examples() {
        let r = scaling_difference(&wv(&[1, 2, 3, 5]), 2, &pp(5)).unwrap();
        assert_eq!(r.count_scaled, big(189));
        assert_eq!(r.count_original, big(157));
        assert_eq!(r.difference, BigInt::from(32));
        assert_eq!(r.formula_sum, BigInt::from(32));

        let r = scaling_difference(&wv(&[1, 2, 3, 5]), 2, &pp(11)).unwrap();
        assert_eq!(r.difference, BigInt::from(136));
        assert_eq!(r.formula_sum, BigInt::from(136));

        let r = scaling_difference(&wv(&[4, 7, 9]), 1, &pp(7)).unwrap();
        assert_eq!(r.difference, BigInt::zero());

        assert!(matches!(
            scaling_difference(&wv(&[2, 3]), 2, &pp(5)),
            Err(Error::CoprimalityViolated(2))
        ));
    }

    #[test]
    fn scaling_coprime_to_group_order_changes_nothing() {
        // gcd(gamma, q-1) = 1 forces a zero difference
        for (w, gamma, q) in [
            (wv(&[1, 2, 3, 5]), 3u64, pp(5)),
            (wv(&[1, 4, 6]), 5, pp(9)),
            (wv(&[3, 2, 2]), 5, pp(8)),
        ] {
            assert_eq!(arith::gcd_u64_big(gamma, &q.q_minus_one()), 1);
            let r = scaling_difference(&w, gamma, &q).unwrap();
            assert_eq!(r.difference, BigInt::zero(), "w={w} gamma={gamma} q={q}");
            assert_eq!(r.formula_sum, BigInt::zero());
        }
    }

    #[test]
    fn extension_consistency_invariant() {
        for (w, q) in [
            (wv(&[1, 2, 3, 5]), pp(3)),
            (wv(&[2, 4, 6, 10]), pp(5)),
            (wv(&[1, 6, 14, 21]), pp(7)),
        ] {
            for r in 1..=4u32 {
                assert_eq!(
                    count_extension(&w, &q, r),
                    count_burnside(&w, &q.extend(r))
                );
            }
        }
    }

    #[test]
    fn tower_rows() {
        let rows = tower(&wv(&[1, 2, 3, 5]), 3, 5).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].q, big(3));
        assert_eq!(rows[4].q, big(243));
        assert_eq!(rows[4].total, big(14_408_201));
        assert_eq!(rows[4].singular, big(4));
        for row in &rows {
            assert_eq!(&row.singular + &row.smooth, row.total);
        }
    }
}
