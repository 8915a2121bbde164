//! Brute-force ground truth: literal orbit enumeration of the weighted
//! `F_q^*` action on `F_q^{n+1} \ {0}`.
//!
//! Nothing here shares a formula with the counting module. Orbits are
//! counted by canonical representatives: a tuple is counted exactly when it
//! is the lexicographic minimum of its own orbit, with coordinates compared
//! in the deterministic element-index order of [`Field`]. This costs
//! `O(q^{n+2})` and is the reference the closed formulas are tested against.

use crate::counting::PrimePower;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hypersurface::WeightedPolynomial;
use crate::weights::WeightVector;

/// Exact orbit counts from enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    pub total_orbits: u64,
    pub singular_orbits: u64,
    pub smooth_orbits: u64,
    /// Always `q^{n+1} - 1`.
    pub tuples_enumerated: u64,
}

fn enumeration_field(
    w: &WeightVector,
    q: &PrimePower,
    limit: u64,
) -> Result<(Field, u64)> {
    let n1 = w.weights().len() as u32;
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
    let tuples = q_small.pow(n1) - 1;
    Ok((Field::new(q.p(), q.alpha(), q_small)?, tuples))
}

/// Walks all nonzero tuples; calls `visit(point, support_mask)` on each.
fn for_each_nonzero_tuple(q: u64, n1: usize, mut visit: impl FnMut(&[Elem], u32)) {
    let mut point = vec![0u64; n1];
    loop {
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
            break;
        }
        let mut mask = 0u32;
        for (idx, x) in point.iter().enumerate() {
            if *x != 0 {
                mask |= 1 << idx;
            }
        }
        visit(&point, mask);
    }
}

/// Per-λ shift table: acting by `λ = g^l` sends a nonzero coordinate with
/// log `t` at position `i` to log `(t + shifts[i]) mod m`.
fn log_shifts(w: &WeightVector, l: u64, m: u64) -> Vec<u64> {
    w.weights().iter().map(|wi| (wi % m) * l % m).collect()
}

/// True when `point` is the lexicographic minimum of its orbit.
fn is_canonical(field: &Field, point: &[Elem], shift_rows: &[Vec<u64>]) -> bool {
    let m = field.q() - 1;
    'lambda: for shifts in shift_rows {
        for (i, &x) in point.iter().enumerate() {
            let image = if x == 0 {
                0
            } else {
                let mut l = field.log_of(x) + shifts[i];
                if l >= m {
                    l -= m;
                }
                field.from_log(l)
            };
            if image < x {
                return false;
            }
            if image > x {
                continue 'lambda;
            }
        }
        // this λ stabilizes the point
    }
    true
}

fn shift_rows(field: &Field, w: &WeightVector) -> Vec<Vec<u64>> {
    let m = field.q() - 1;
    (1..m).map(|l| log_shifts(w, l, m)).collect()
}

/// Enumerates every orbit once and classifies it by support gcd against
/// `d = gcd(w)`.
pub fn orbit_count(w: &WeightVector, q: &PrimePower, limit: u64) -> Result<OrbitSummary> {
    let (field, tuples_enumerated) = enumeration_field(w, q, limit)?;
    let rows = shift_rows(&field, w);
    let d = w.gcd();
    let mut total = 0u64;
    let mut singular = 0u64;
    for_each_nonzero_tuple(field.q(), w.weights().len(), |point, mask| {
        if is_canonical(&field, point, &rows) {
            total += 1;
            if w.support_gcd(mask).expect("nonzero tuple") > d {
                singular += 1;
            }
        }
    });
    Ok(OrbitSummary {
        total_orbits: total,
        singular_orbits: singular,
        smooth_orbits: total - singular,
        tuples_enumerated,
    })
}

/// For each `λ in F_q^*` (by element index), the literally-counted number of
/// nonzero tuples fixed by the weighted action of `λ`.
pub fn fixed_point_audit(
    w: &WeightVector,
    q: &PrimePower,
    limit: u64,
) -> Result<Vec<(Elem, u64)>> {
    let (field, _) = enumeration_field(w, q, limit)?;
    let n1 = w.weights().len();
    let mut audit: Vec<(Elem, u64)> = Vec::with_capacity(field.q() as usize - 1);
    for lambda in field.elements().skip(1) {
        let scales: Vec<Elem> = w
            .weights()
            .iter()
            .map(|wi| field.pow_u64(lambda, *wi))
            .collect();
        let mut fixed = 0u64;
        for_each_nonzero_tuple(field.q(), n1, |point, _| {
            let held = point
                .iter()
                .zip(&scales)
                .all(|(x, s)| field.mul(*s, *x) == *x);
            if held {
                fixed += 1;
            }
        });
        audit.push((lambda, fixed));
    }
    Ok(audit)
}

/// Orbit count restricted to the cone zeros of `f`; ground truth for the
/// hypersurface formulas.
pub fn hypersurface_orbit_count(
    f: &WeightedPolynomial,
    q: &PrimePower,
    limit: u64,
) -> Result<u64> {
    variety_orbit_count(std::slice::from_ref(f), q, limit)
}

/// Orbit count of the common cone zeros of a polynomial system.
pub fn variety_orbit_count(
    system: &[WeightedPolynomial],
    q: &PrimePower,
    limit: u64,
) -> Result<u64> {
    let first = system
        .first()
        .ok_or_else(|| Error::Invalid("empty polynomial system".into()))?;
    if q.p() != first.p() {
        return Err(Error::Invalid(format!(
            "polynomial has coefficients mod {}, field has characteristic {}",
            first.p(),
            q.p()
        )));
    }
    if system.iter().any(|f| f.weights() != first.weights()) {
        return Err(Error::Invalid(
            "all polynomials of a system must share weights".into(),
        ));
    }
    let w = first.weights();
    let (field, _) = enumeration_field(w, q, limit)?;
    let rows = shift_rows(&field, w);
    let mut count = 0u64;
    for_each_nonzero_tuple(field.q(), w.weights().len(), |point, _| {
        if system.iter().all(|f| f.eval(&field, point) == 0)
            && is_canonical(&field, point, &rows)
        {
            count += 1;
        }
    });
    Ok(count)
}
