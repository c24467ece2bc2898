//! Initial degree `alpha(I^(m))` of explicit point sets over `GF(p)`.
//!
//! A nonzero form of degree `d` vanishing to order `m` at every point exists
//! iff the condition matrix has rank below `C(d+n, n)`. `alpha_of` scans `d`
//! upward from 1 and records the rank at every degree it tries.

pub mod field;
pub mod matrix;
pub mod points;
pub mod rank;

pub use field::{is_prime, PrimeModulus, DEFAULT_PRIME};
pub use matrix::{build_matrix, condition_rows, derivative_indices, monomial_basis, ConditionMatrix, Exponents};
pub use points::{sample_points, PointSet, ProjectivePoint, SplitMix64};
pub use rank::{rank_gf, rank_gf_owned};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds::{delta_bound, k_bound, Instance};
use crate::error::{Error, Result};

/// Rank of the degree-`d` condition matrix against its column count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRank {
    pub degree: u32,
    pub rank: usize,
    pub cols: usize,
}

impl DegreeRank {
    pub fn has_kernel(&self) -> bool {
        self.rank < self.cols
    }
}

pub fn degree_rank(points: &PointSet, m: u32, d: u32) -> DegreeRank {
    let matrix = build_matrix(points, m, d);
    let cols = matrix.cols();
    DegreeRank {
        degree: d,
        rank: rank_gf_owned(matrix),
        cols,
    }
}

/// Whether some nonzero degree-`d` form vanishes to order `m` at every point.
pub fn has_kernel(points: &PointSet, m: u32, d: u32) -> bool {
    degree_rank(points, m, d).has_kernel()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub alpha: u32,
    /// `(d, rank)` for `d = 1..=alpha`.
    pub ranks: Vec<DegreeRank>,
}

/// Degree cap used when the caller gives none: the larger of
/// `k(m+n-1) - n + 1 + n` and `delta`. `delta` always admits a kernel, so the
/// scan cannot run past it on any point set.
pub fn default_degree_cap(n: u32, s: usize, m: u32) -> Result<u32> {
    let inst = Instance::new(n, BigInt::from(s), BigInt::from(m))?;
    let by_k = k_bound(&inst) + n;
    let cap = by_k.max(delta_bound(&inst));
    cap.to_u32()
        .ok_or_else(|| Error::InvalidInput(format!("degree cap {cap} does not fit in u32")))
}

/// Least `d >= 1` admitting a nonzero form of degree `d` that vanishes to
/// order `m` at every point, scanning up to `cap`.
pub fn alpha_of(points: &PointSet, m: u32, cap: u32) -> Result<AlphaResult> {
    if m < 1 {
        return Err(Error::InvalidInput("multiplicity must be >= 1".into()));
    }
    if cap < 1 {
        return Err(Error::InvalidInput("degree cap must be >= 1".into()));
    }
    let mut ranks = Vec::new();
    for d in 1..=cap {
        let r = degree_rank(points, m, d);
        ranks.push(r);
        if r.has_kernel() {
            return Ok(AlphaResult { alpha: d, ranks });
        }
    }
    Err(Error::CapExceeded { cap: u64::from(cap) })
}

/// [`alpha_of`] with [`default_degree_cap`].
pub fn alpha_default(points: &PointSet, m: u32) -> Result<AlphaResult> {
    let cap = default_degree_cap(points.n(), points.len().max(1), m)?;
    alpha_of(points, m, cap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceEntry {
    pub m: u32,
    pub alpha: u32,
    /// `alpha / m`, whose infimum over `m` is the Waldschmidt constant.
    pub ratio: BigRational,
}

/// `alpha(I^(m))` and `alpha / m` for `m = 1..=max_mult`. A `cap` of `None`
/// uses [`default_degree_cap`] per multiplicity.
pub fn waldschmidt_sequence(points: &PointSet, max_mult: u32, cap: Option<u32>) -> Result<Vec<SequenceEntry>> {
    if max_mult < 1 {
        return Err(Error::InvalidInput("max multiplicity must be >= 1".into()));
    }
    (1..=max_mult)
        .map(|m| {
            let cap = match cap {
                Some(c) => c,
                None => default_degree_cap(points.n(), points.len().max(1), m)?,
            };
            let res = alpha_of(points, m, cap)?;
            Ok(SequenceEntry {
                m,
                alpha: res.alpha,
                ratio: BigRational::new(res.alpha.into(), m.into()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn general(n: u32, s: usize, seed: u64) -> PointSet {
        sample_points(n, s, PrimeModulus::default(), seed).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert!(has_kernel(&general(2, 1, 1), 1, 1));
        assert!(!has_kernel(&general(2, 2, 1), 1, 0));
        assert!(!has_kernel(&general(2, 5, 1), 2, 3));
        assert!(has_kernel(&general(2, 5, 1), 2, 4));
    }

    #[test]
    fn five_double_points_rank() {
        let m = build_matrix(&general(2, 5, 1), 2, 4);
        assert_eq!(rank_gf(&m), 14);
    }

    #[test]
    fn alpha_examples() {
        for n in 1..=3 {
            assert_eq!(alpha_of(&general(n, 1, 4), 3, 10).unwrap().alpha, 3);
        }
        assert_eq!(alpha_default(&general(2, 2, 1), 2).unwrap().alpha, 2);
        let r = alpha_default(&general(2, 5, 1), 2).unwrap();
        assert_eq!(r.alpha, 4);
        assert_eq!(r.ranks.len(), 4);
        assert_eq!(r.ranks[2], DegreeRank { degree: 3, rank: 10, cols: 10 });
    }

    #[test]
    fn cap_exceeded() {
        assert_eq!(
            alpha_of(&general(2, 5, 1), 2, 3),
            Err(Error::CapExceeded { cap: 3 })
        );
    }

    #[test]
    fn sequences() {
        let one = waldschmidt_sequence(&general(2, 1, 2), 5, None).unwrap();
        assert!(one.iter().all(|e| e.ratio == BigRational::from_integer(1.into())));
        let four: Vec<u32> = waldschmidt_sequence(&general(2, 4, 1), 3, None)
            .unwrap()
            .iter()
            .map(|e| e.alpha)
            .collect();
        assert_eq!(four, vec![2, 4, 6]);
        let nine: Vec<u32> = waldschmidt_sequence(&general(2, 9, 1), 3, None)
            .unwrap()
            .iter()
            .map(|e| e.alpha)
            .collect();
        assert_eq!(nine, vec![3, 6, 9]);
    }

    #[test]
    fn projective_line_is_exact() {
        // on P^1 the s points impose independent conditions: alpha = s m
        for s in 1..6usize {
            for m in 1..4u32 {
                assert_eq!(alpha_default(&general(1, s, 3), m).unwrap().alpha, s as u32 * m);
            }
        }
    }

    #[test]
    fn collinear_points_drop_alpha() {
        // three points on a line in P^2: the line itself has degree 1
        let f = PrimeModulus::default();
        let set = PointSet::from_affine(2, f, &[vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(alpha_default(&set, 1).unwrap().alpha, 1);
        assert_eq!(alpha_default(&set, 2).unwrap().alpha, 2);
    }
}
