//! Shared fixtures for the criterion benches.

use demailly_core::interpolation::{build_matrix, sample_points, ConditionMatrix, PointSet, PrimeModulus};

/// Sampled points over the default prime with a fixed seed.
pub fn points(n: u32, s: usize) -> PointSet {
    sample_points(n, s, PrimeModulus::default(), 7).expect("sampling succeeds")
}

/// Condition matrix for `s` sampled points in `P^n`, multiplicity `m`, degree `d`.
pub fn matrix(n: u32, s: usize, m: u32, d: u32) -> ConditionMatrix {
    build_matrix(&points(n, s), m, d)
}
