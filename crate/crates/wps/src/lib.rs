//! Exact arithmetic of weighted projective spaces over finite fields.
//!
//! A weighted projective space `P_w^n` is the quotient of `F_q^{n+1} \ {0}`
//! by the scaling action `λ · (x_0, …, x_n) = (λ^{w_0} x_0, …, λ^{w_n} x_n)`
//! for a vector of positive integer weights `w = (w_0, …, w_n)`. This crate
//! computes, in exact big-integer arithmetic throughout:
//!
//! - rational point counts of `P_w^n` over `F_q` and its extensions, by
//!   three independent routes (subset-gcd formula, order-grouped Burnside
//!   sum, and a brute-force orbit enumeration for small fields),
//! - the split of those counts into smooth and singular strata,
//! - the behaviour of counts under weight normalization `w → w / gcd(w)`
//!   and under scaling a tail of the weights by a constant,
//! - point counts of weighted hypersurfaces `f = 0` for `w`-homogeneous `f`,
//! - the zeta function `Z(P_w^n, t)` as a canonical finite product
//!   `∏ (1 − (q^j t)^o)^{E(j,o)}` with integer exponents, its stratum
//!   decomposition, degree, pole/zero data, and exact series expansion.
//!
//! The [`oracle`] module is deliberately independent of the closed formulas:
//! it enumerates orbits literally and is used by the test suite to
//! cross-validate every formula on small fields.

pub mod arith;
pub mod counting;
pub mod error;
pub mod field;
pub mod hypersurface;
pub mod oracle;
pub mod weights;
pub mod zeta;

pub use counting::{CountReport, Method, NormalizationReport, PrimePower, ScalingReport, TowerRow};
pub use error::{Error, Result};
pub use field::{Field, DEFAULT_ENUM_LIMIT};
pub use hypersurface::{Monomial, WeightedPolynomial};
pub use oracle::OrbitSummary;
pub use weights::{SubsetGcd, WeightVector};
pub use zeta::{IntegerSeries, Stratum, ZetaFactorization};
