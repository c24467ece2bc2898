//! Degree bounds for symbolic powers of ideals of points in projective space.
//!
//! * [`exactnum`]: big-integer roots, binomials, radical comparisons and exact
//!   arithmetic in `Q[s^(1/n)]`.
//! * [`bounds`]: the degree bounds `delta` and `k(m+n-1)-n+1`, the sufficient
//!   condition chain behind the second one, and its algebraic certificate.
//! * [`interpolation`]: fat-point condition matrices over `GF(p)` and the initial
//!   degree `alpha(I^(m))` of explicit point sets.
//! * [`verify`]: experiments and sweeps that tie the bounds to computed values.

pub mod error;
pub mod bounds;
pub mod exactnum;
pub mod interpolation;
pub mod verify;

pub use error::{Error, Result};
pub use bounds::{BoundReport, Certificate, Instance, MaxM, MssComparison, RootData};
pub use exactnum::{AlgebraicExpr, RadicalOrdering, Sign};
pub use interpolation::{AlphaResult, ConditionMatrix, PointSet, PrimeModulus, ProjectivePoint, DEFAULT_PRIME};
pub use verify::{ExperimentReport, InvariantReport, SweepRow, SweepSpec, SweepSummary};
