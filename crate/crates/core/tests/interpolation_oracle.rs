//! Cross-checks the condition-matrix rank against an independent construction:
//! each monomial is expanded by repeated polynomial multiplication after the
//! substitution x_i = c_i + y_i, and the coefficients of every y^beta with
//! |beta| < m become the rows. Rank is computed by a separate plain
//! elimination over i128.

use std::collections::HashSet;

use proptest::prelude::*;

use demailly_core::interpolation::{degree_rank, has_kernel, monomial_basis, sample_points, PointSet, PrimeModulus};

/// Coefficients of (c + y)^e in y, by multiplying out e factors.
fn expand_linear_power(c: i128, e: u32, p: i128) -> Vec<i128> {
    let mut poly = vec![1i128];
    for _ in 0..e {
        let mut next = vec![0i128; poly.len() + 1];
        for (j, &a) in poly.iter().enumerate() {
            next[j] = (next[j] + a * c) % p;
            next[j + 1] = (next[j + 1] + a) % p;
        }
        poly = next;
    }
    poly
}

fn multi_indices(vars: usize, below: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..below).map(move |b| {
                    let mut w = v.clone();
                    w.push(b);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().sum::<u32>() < below);
    out
}

fn oracle_matrix(affine: &[Vec<u64>], n: usize, m: u32, d: u32, p: u64) -> Vec<Vec<i128>> {
    let p = i128::from(p);
    let basis = monomial_basis(n as u32, d);
    let betas = multi_indices(n, m);
    let mut rows = Vec::new();
    for pt in affine {
        let expansions: Vec<Vec<Vec<i128>>> = basis
            .iter()
            .map(|mono| {
                (0..n)
                    .map(|i| expand_linear_power(i128::from(pt[i]), mono[i + 1], p))
                    .collect()
            })
            .collect();
        for beta in &betas {
            rows.push(
                expansions
                    .iter()
                    .map(|factors| {
                        factors.iter().zip(beta).fold(1i128, |acc, (f, &b)| {
                            acc * f.get(b as usize).copied().unwrap_or(0) % p
                        })
                    })
                    .collect(),
            );
        }
    }
    rows
}

fn pow_mod(mut b: i128, mut e: i128, p: i128) -> i128 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn naive_rank(mut a: Vec<Vec<i128>>, p: u64) -> usize {
    let p = i128::from(p);
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] % p != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][col].rem_euclid(p), p - 2, p);
        for r in 0..a.len() {
            if r != rank && a[r][col] % p != 0 {
                let f = a[r][col] * inv % p;
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn point_set(n: u32, p: u64, affine: &[Vec<u64>]) -> PointSet {
    PointSet::from_affine(n, PrimeModulus::new(p).unwrap(), affine).unwrap()
}

fn distinct_points(n: usize, p: u64, max: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0..p, n), 1..=max).prop_map(|pts| {
        let mut seen = HashSet::new();
        pts.into_iter().filter(|v| seen.insert(v.clone())).collect()
    })
}

#[test]
fn fixed_cases_match_oracle() {
    // small primes with p <= d exercise binomials that vanish mod p
    for &(n, p) in &[(1u32, 3u64), (2, 3), (2, 5), (2, 7), (3, 5), (2, 2_147_483_647)] {
        for seed in 0..4 {
            for s in 1..=5usize {
                let Ok(pts) = sample_points(n, s.min(p.pow(n) as usize), PrimeModulus::new(p).unwrap(), seed) else {
                    continue;
                };
                let affine: Vec<Vec<u64>> = pts.points().iter().map(|q| q.affine().to_vec()).collect();
                for m in 1..=3 {
                    for d in 0..=7 {
                        let want = naive_rank(oracle_matrix(&affine, n as usize, m, d, p), p);
                        let got = degree_rank(&pts, m, d);
                        assert_eq!(got.rank, want, "n={n} p={p} seed={seed} s={s} m={m} d={d}");
                    }
                }
            }
        }
    }
}

#[test]
fn plane_conic_through_five_points() {
    // Five points on no common line, four on no line: exactly one conic.
    let pts = point_set(2, 101, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 5]]);
    let r = degree_rank(&pts, 1, 2);
    assert_eq!((r.rank, r.cols), (5, 6));
    // six points on the conic y = x^2 still leave it in the kernel
    let on_conic: Vec<Vec<u64>> = (0..6u64).map(|x| vec![x, x * x % 101]).collect();
    assert!(has_kernel(&point_set(2, 101, &on_conic), 1, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_matches_oracle_small_field(
        pts in distinct_points(2, 7, 6),
        m in 1u32..=3,
        d in 0u32..=8,
    ) {
        let set = point_set(2, 7, &pts);
        let want = naive_rank(oracle_matrix(&pts, 2, m, d, 7), 7);
        prop_assert_eq!(degree_rank(&set, m, d).rank, want);
    }

    #[test]
    fn rank_matches_oracle_three_space(
        pts in distinct_points(3, 11, 4),
        m in 1u32..=2,
        d in 0u32..=4,
    ) {
        let set = point_set(3, 11, &pts);
        let want = naive_rank(oracle_matrix(&pts, 3, m, d, 11), 11);
        prop_assert_eq!(degree_rank(&set, m, d).rank, want);
    }

    #[test]
    fn rank_independent_of_point_order(
        pts in distinct_points(2, 13, 6),
        m in 1u32..=3,
        d in 1u32..=6,
    ) {
        let mut rev = pts.clone();
        rev.reverse();
        prop_assert_eq!(
            degree_rank(&point_set(2, 13, &pts), m, d).rank,
            degree_rank(&point_set(2, 13, &rev), m, d).rank
        );
    }

    // A kernel element F of degree d gives x_0 * F in degree d + 1.
    #[test]
    fn kernel_persists_in_higher_degree(
        seed in any::<u64>(),
        s in 1usize..=8,
        m in 1u32..=3,
        d in 0u32..=8,
    ) {
        let pts = sample_points(2, s, PrimeModulus::default(), seed).unwrap();
        if has_kernel(&pts, m, d) {
            prop_assert!(has_kernel(&pts, m, d + 1));
        }
    }
}
