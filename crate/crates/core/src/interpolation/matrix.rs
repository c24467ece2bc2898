//! Fat-point condition matrices.
//!
//! A degree-`d` form `F` vanishes to order `m` at `[1 : c]` iff every Hasse
//! derivative of order `< m` of `F(1, c + y)` vanishes at `y = 0`. For the
//! monomial `x^a` that derivative, for the multi-index `beta`, is
//! `prod_i C(a_i, beta_i) c_i^(a_i - beta_i)`, which is valid in every
//! characteristic.

use super::field::PrimeModulus;
use super::points::{PointSet, ProjectivePoint};

/// Exponent vector `(a_0, ..., a_n)`.
pub type Exponents = Vec<u32>;

/// Every exponent vector of `vars` variables and total degree `d`, in
/// lexicographic order with the first variable largest.
pub fn exponents_of_degree(vars: usize, d: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fill(&mut cur, 0, d, &mut out);
    out
}

fn fill(cur: &mut [u32], idx: usize, remaining: u32, out: &mut Vec<Exponents>) {
    if idx + 1 == cur.len() {
        cur[idx] = remaining;
        out.push(cur.to_vec());
        return;
    }
    for a in (0..=remaining).rev() {
        cur[idx] = a;
        fill(cur, idx + 1, remaining - a, out);
    }
}

/// Degree-`d` monomials in `x_0..x_n`, graded lex with `x_0 > x_1 > ... > x_n`.
/// There are `C(d+n, n)` of them.
pub fn monomial_basis(n: u32, d: u32) -> Vec<Exponents> {
    exponents_of_degree(n as usize + 1, d)
}

/// Multi-indices `beta` over the `n` affine variables with `|beta| <= m - 1`,
/// by degree then lex. There are `C(m-1+n, n)` of them.
pub fn derivative_indices(n: u32, m: u32) -> Vec<Exponents> {
    (0..m)
        .flat_map(|deg| exponents_of_degree(n as usize, deg))
        .collect()
}

/// Row-major matrix over `GF(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionMatrix {
    modulus: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ConditionMatrix {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Entries are reduced mod `p`. Panics on ragged rows.
    pub fn from_rows(modulus: PrimeModulus, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| modulus.reduce(x)));
        }
        Self {
            modulus,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn into_parts(self) -> (PrimeModulus, usize, usize, Vec<u64>) {
        (self.modulus, self.rows, self.cols, self.data)
    }
}

// Pascal's triangle mod p up to row `top`.
fn binomials_mod(modulus: PrimeModulus, top: u32) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(top as usize + 1);
    for a in 0..=top as usize {
        let mut row = vec![0u64; a + 1];
        row[0] = modulus.reduce(1);
        row[a] = modulus.reduce(1);
        for b in 1..a {
            row[b] = modulus.add(rows[a - 1][b - 1], rows[a - 1][b]);
        }
        rows.push(row);
    }
    rows
}

struct RowContext {
    binom: Vec<Vec<u64>>,
}

impl RowContext {
    fn new(modulus: PrimeModulus, d: u32) -> Self {
        Self {
            binom: binomials_mod(modulus, d),
        }
    }
}

fn rows_for_point(
    point: &ProjectivePoint,
    indices: &[Exponents],
    basis: &[Exponents],
    modulus: PrimeModulus,
    d: u32,
    ctx: &RowContext,
    out: &mut Vec<u64>,
) {
    // powers[i][e] = c_i^e
    let powers: Vec<Vec<u64>> = point
        .affine()
        .iter()
        .map(|&c| {
            let mut p = Vec::with_capacity(d as usize + 1);
            let mut acc = modulus.reduce(1);
            for _ in 0..=d {
                p.push(acc);
                acc = modulus.mul(acc, c);
            }
            p
        })
        .collect();
    for beta in indices {
        for mono in basis {
            let mut entry = modulus.reduce(1);
            for (i, &b) in beta.iter().enumerate() {
                let a = mono[i + 1];
                if b > a {
                    entry = 0;
                    break;
                }
                let term = modulus.mul(ctx.binom[a as usize][b as usize], powers[i][(a - b) as usize]);
                entry = modulus.mul(entry, term);
                if entry == 0 {
                    break;
                }
            }
            out.push(entry);
        }
    }
}

/// The `C(m-1+n, n)` vanishing conditions of order `< m` at one point, one row
/// per multi-index, against the given degree-`d` basis.
pub fn condition_rows(
    point: &ProjectivePoint,
    m: u32,
    d: u32,
    basis: &[Exponents],
    modulus: PrimeModulus,
) -> Vec<Vec<u64>> {
    let indices = derivative_indices(point.dim(), m);
    if basis.is_empty() {
        return vec![Vec::new(); indices.len()];
    }
    let ctx = RowContext::new(modulus, d);
    let mut flat = Vec::with_capacity(indices.len() * basis.len());
    rows_for_point(point, &indices, basis, modulus, d, &ctx, &mut flat);
    flat.chunks(basis.len()).map(<[u64]>::to_vec).collect()
}

/// Stacks the conditions of every point: `s * C(m-1+n, n)` rows by
/// `C(d+n, n)` columns, blocks in point order.
pub fn build_matrix(points: &PointSet, m: u32, d: u32) -> ConditionMatrix {
    let modulus = points.modulus();
    let basis = monomial_basis(points.n(), d);
    let indices = derivative_indices(points.n(), m);
    let ctx = RowContext::new(modulus, d);
    let rows = points.len() * indices.len();
    let cols = basis.len();
    let mut data = Vec::with_capacity(rows * cols);
    for pt in points.points() {
        rows_for_point(pt, &indices, &basis, modulus, d, &ctx, &mut data);
    }
    ConditionMatrix {
        modulus,
        rows,
        cols,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::binomial_u64;
    use crate::interpolation::field::DEFAULT_PRIME;
    use crate::interpolation::points::sample_points;

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis(2, 2).len(), 6);
        assert_eq!(
            monomial_basis(1, 3),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
        assert_eq!(monomial_basis(3, 0), vec![vec![0, 0, 0, 0]]);
        assert_eq!(
            monomial_basis(2, 2),
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for n in 1..5u32 {
            for d in 0..8u32 {
                assert_eq!(
                    binomial_u64(u64::from(d + n), u64::from(n)),
                    monomial_basis(n, d).len().into()
                );
            }
        }
    }

    #[test]
    fn derivative_index_counts() {
        for n in 1..5u32 {
            for m in 1..6u32 {
                assert_eq!(
                    binomial_u64(u64::from(m - 1 + n), u64::from(n)),
                    derivative_indices(n, m).len().into()
                );
            }
        }
    }

    #[test]
    fn coordinate_point_row() {
        let f = PrimeModulus::default();
        let pt = ProjectivePoint::from_affine(&[0, 0], f);
        let basis = monomial_basis(2, 2);
        let rows = condition_rows(&pt, 2, 2, &basis, f);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn hasse_entry_small_field() {
        // (2 + y1)^2 (3 + y2): coefficient of y1 is 2*2*3 = 12 = 5 mod 7
        let f = PrimeModulus::new(7).unwrap();
        let pt = ProjectivePoint::from_affine(&[2, 3], f);
        let basis = monomial_basis(2, 3);
        let col = basis.iter().position(|e| e == &vec![0, 2, 1]).unwrap();
        let rows = condition_rows(&pt, 2, 3, &basis, f);
        // rows: beta = (0,0), (1,0), (0,1)
        assert_eq!(rows[1][col], 5);
    }

    #[test]
    fn multiplicity_one_is_evaluation() {
        let f = PrimeModulus::new(101).unwrap();
        let pt = ProjectivePoint::from_affine(&[4, 9], f);
        let basis = monomial_basis(2, 2);
        let rows = condition_rows(&pt, 1, 2, &basis, f);
        assert_eq!(rows, vec![vec![1, 4, 9, 16, 36, 81]]);
    }

    #[test]
    fn matrix_dimensions() {
        let f = PrimeModulus::new(DEFAULT_PRIME).unwrap();
        let one = sample_points(2, 1, f, 3).unwrap();
        let m = build_matrix(&one, 1, 1);
        assert_eq!((m.rows(), m.cols()), (1, 3));
        assert_eq!(m.row(0), &[1, one.points()[0].affine()[0], one.points()[0].affine()[1]]);
        let five = sample_points(2, 5, f, 3).unwrap();
        let m = build_matrix(&five, 2, 4);
        assert_eq!((m.rows(), m.cols()), (15, 15));
        let nine = sample_points(2, 9, f, 3).unwrap();
        let m = build_matrix(&nine, 3, 8);
        assert_eq!((m.rows(), m.cols()), (54, 45));
    }
}
