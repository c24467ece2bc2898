//! Exact integer arithmetic: binomials, floors of radicals, and radical comparisons.
//!
//! Every decision the bound checks make is routed through [`cmp_radical`], which
//! compares `a` against `b * s^(j/n)` by raising both sides to the `n`-th power.
//! No floating point is involved anywhere in this module.

mod algebraic;

pub use algebraic::{
    ae_arith, ae_sign, AlgebraicExpr, ArithOp, Sign, DEFAULT_PRECISION_CAP, INITIAL_PRECISION,
};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Outcome of comparing `a` with `b * s^(j/n)`.
pub type RadicalOrdering = Ordering;

/// Binomial coefficient `C(a, b)`, zero when `b > a`.
pub fn binomial(a: &BigInt, b: u64) -> BigInt {
    let b_big = BigInt::from(b);
    if a.is_negative() || *a < b_big {
        return BigInt::zero();
    }
    // C(a, b) = C(a, a - b); loop over the shorter side
    let complement = a - &b_big;
    let steps = if complement < b_big {
        u64::try_from(&complement).expect("complement < b fits in u64")
    } else {
        b
    };
    let mut acc = BigInt::one();
    for i in 0..steps {
        // acc * (a - i) is always divisible by (i + 1) at this point
        acc *= a - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Convenience wrapper for small arguments.
pub fn binomial_u64(a: u64, b: u64) -> BigInt {
    binomial(&BigInt::from(a), b)
}

/// `k = floor(s^(1/n))`, the unique `k` with `k^n <= s < (k+1)^n`.
pub fn int_nth_root(s: &BigInt, n: u32) -> Result<BigInt> {
    if *s < BigInt::one() {
        return Err(Error::InvalidInput(format!("int_nth_root needs s >= 1, got {s}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("int_nth_root needs n >= 1".into()));
    }
    Ok(floor_root(s, n))
}

/// `d = floor(t * s^(1/n))`, computed as the integer `n`-th root of `t^n * s`.
pub fn floor_mul_nth_root(t: &BigInt, s: &BigInt, n: u32) -> Result<BigInt> {
    if t.is_negative() {
        return Err(Error::InvalidInput(format!("floor_mul_nth_root needs t >= 0, got {t}")));
    }
    if *s < BigInt::one() {
        return Err(Error::InvalidInput(format!("floor_mul_nth_root needs s >= 1, got {s}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("floor_mul_nth_root needs n >= 1".into()));
    }
    if t.is_zero() {
        return Ok(BigInt::zero());
    }
    Ok(floor_root(&(Pow::pow(t, n) * s), n))
}

// Newton iteration from num-bigint, followed by a correction loop so the
// bracket `r^n <= x < (r+1)^n` holds unconditionally.
fn floor_root(x: &BigInt, n: u32) -> BigInt {
    debug_assert!(!x.is_negative() && n >= 1);
    let mut r: BigInt = x.nth_root(n);
    while Pow::pow(&r, n) > *x {
        r -= 1u32;
    }
    loop {
        let next: BigInt = &r + 1u32;
        if Pow::pow(&next, n) <= *x {
            r = next;
        } else {
            break;
        }
    }
    r
}

/// Both sides of a radical comparison after raising to the `n`-th power.
///
/// `a` and `b` are divided by their gcd first, so `lhs = a^n` and
/// `rhs = b^n * s^j` are the smallest integers deciding the comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalComparison {
    pub a: BigInt,
    pub b: BigInt,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub ordering: RadicalOrdering,
}

/// Orders `a` against `b * s^(j/n)` for nonnegative `a`, `b`.
///
/// # Panics
///
/// Panics if `a` or `b` is negative, `s < 1` or `n == 0`.
pub fn cmp_radical(a: &BigInt, b: &BigInt, s: &BigInt, j: u32, n: u32) -> RadicalOrdering {
    radical_comparison(a, b, s, j, n).ordering
}

/// Same as [`cmp_radical`] but keeps the integers that decided it.
pub fn radical_comparison(a: &BigInt, b: &BigInt, s: &BigInt, j: u32, n: u32) -> RadicalComparison {
    assert!(!a.is_negative() && !b.is_negative(), "cmp_radical operands must be >= 0");
    assert!(*s >= BigInt::one(), "cmp_radical needs s >= 1");
    assert!(n >= 1, "cmp_radical needs n >= 1");
    let g = a.gcd(b);
    let (a, b) = if g.is_zero() || g.is_one() {
        (a.clone(), b.clone())
    } else {
        (a / &g, b / &g)
    };
    let lhs = Pow::pow(&a, n);
    let rhs = Pow::pow(&b, n) * Pow::pow(s, j);
    let ordering = lhs.cmp(&rhs);
    RadicalComparison {
        a,
        b,
        lhs,
        rhs,
        ordering,
    }
}

/// Writes `s = u^g` with `g | n` as large as possible and returns `(u, n / g)`.
///
/// Over the returned pair, `x^(n/g) - u` is irreducible over the rationals, so
/// `s^(1/n) = u^(g/n)` generates a field of degree `n / g`.
pub fn radical_base(s: &BigInt, n: u32) -> (BigInt, u32) {
    assert!(*s >= BigInt::one() && n >= 1);
    if s.is_one() {
        return (BigInt::one(), 1);
    }
    for g in (2..=n).rev() {
        if n % g != 0 {
            continue;
        }
        let u = floor_root(s, g);
        if Pow::pow(&u, g) == *s {
            return (u, n / g);
        }
    }
    (s.clone(), n)
}
