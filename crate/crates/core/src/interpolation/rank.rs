//! Row reduction over `GF(p)`.

use rayon::prelude::*;

use super::field::PrimeModulus;
use super::matrix::ConditionMatrix;

// Below this many entries the elimination runs on one thread.
const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Rank over `GF(p)` by Gaussian elimination with modular inverses.
pub fn rank_gf(matrix: &ConditionMatrix) -> usize {
    let (modulus, rows, cols, data) = matrix.clone().into_parts();
    rank_in_place(modulus, rows, cols, data)
}

/// Consumes the matrix; avoids a copy when the caller no longer needs it.
pub fn rank_gf_owned(matrix: ConditionMatrix) -> usize {
    let (modulus, rows, cols, data) = matrix.into_parts();
    rank_in_place(modulus, rows, cols, data)
}

fn rank_in_place(f: PrimeModulus, rows: usize, cols: usize, mut data: Vec<u64>) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let parallel = rows * cols >= PARALLEL_THRESHOLD;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in col..cols {
                data.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(data[rank * cols + col]);
        for x in &mut data[rank * cols + col..(rank + 1) * cols] {
            *x = f.mul(*x, inv);
        }

        let (head, tail) = data.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols + col..];
        let eliminate = |row: &mut [u64]| {
            let factor = row[col];
            if factor == 0 {
                return;
            }
            let row = &mut row[col..];
            if f.is_small() {
                let p = f.get();
                for (x, &y) in row.iter_mut().zip(pivot_row) {
                    // factor, y < 2^32 so the product fits
                    let sub = factor * y % p;
                    *x = if *x >= sub { *x - sub } else { *x + p - sub };
                }
            } else {
                for (x, &y) in row.iter_mut().zip(pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        };
        if parallel {
            tail.par_chunks_mut(cols).for_each(eliminate);
        } else {
            tail.chunks_mut(cols).for_each(eliminate);
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::field::DEFAULT_PRIME;

    fn fp() -> PrimeModulus {
        PrimeModulus::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn zero_and_identity() {
        let f = fp();
        assert_eq!(rank_gf(&ConditionMatrix::zeros(f, 4, 5)), 0);
        assert_eq!(rank_gf(&ConditionMatrix::zeros(f, 0, 5)), 0);
        for k in 1..8 {
            let rows: Vec<Vec<u64>> = (0..k)
                .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
                .collect();
            assert_eq!(rank_gf(&ConditionMatrix::from_rows(f, &rows)), k);
        }
    }

    #[test]
    fn dependent_rows() {
        let f = PrimeModulus::new(7).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        assert_eq!(rank_gf(&ConditionMatrix::from_rows(f, &rows)), 2);
    }

    #[test]
    fn large_modulus_path() {
        let f = PrimeModulus::new(18_446_744_073_709_551_557).unwrap();
        let p = f.get();
        let rows = vec![vec![p - 1, 1], vec![1, p - 1]];
        assert_eq!(rank_gf(&ConditionMatrix::from_rows(f, &rows)), 1);
        let rows = vec![vec![p - 1, 2], vec![1, p - 1]];
        assert_eq!(rank_gf(&ConditionMatrix::from_rows(f, &rows)), 2);
    }

    #[test]
    fn parallel_path_matches_serial() {
        // 300 x 300 is above the threshold; rank of a product of full-rank
        // 300x200 and 200x300 factors is 200
        let f = fp();
        let mut rng = crate::interpolation::points::SplitMix64::new(5);
        let a: Vec<Vec<u64>> = (0..300).map(|_| (0..200).map(|_| rng.next_below(f.get())).collect()).collect();
        let b: Vec<Vec<u64>> = (0..200).map(|_| (0..300).map(|_| rng.next_below(f.get())).collect()).collect();
        let prod: Vec<Vec<u64>> = a
            .iter()
            .map(|row| {
                (0..300)
                    .map(|j| row.iter().zip(&b).fold(0, |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j]))))
                    .collect()
            })
            .collect();
        assert_eq!(rank_gf(&ConditionMatrix::from_rows(f, &prod)), 200);
    }
}
