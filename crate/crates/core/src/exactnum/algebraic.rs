//! Exact arithmetic in `Q[t] / (t^n - s)` where `t` is the real root `s^(1/n)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::{floor_root, radical_base};
use crate::error::{Error, Result};

/// Starting precision for interval sign evaluation.
pub const INITIAL_PRECISION: u32 = 128;
/// Precision at which [`AlgebraicExpr::sign`] gives up.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    /// Interval evaluation did not separate the value from zero within the cap.
    Indeterminate,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
            Sign::Indeterminate => "indeterminate",
        })
    }
}

/// `sum_j coeffs[j] * t^j` with `t = s^(1/n)`, always stored with exactly `n`
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicExpr {
    s: BigInt,
    n: u32,
    coeffs: Vec<BigRational>,
}

impl AlgebraicExpr {
    pub fn zero(s: &BigInt, n: u32) -> Self {
        Self::constant(s, n, BigRational::zero())
    }

    pub fn constant(s: &BigInt, n: u32, value: BigRational) -> Self {
        assert!(n >= 1 && *s >= BigInt::one(), "radical needs s >= 1, n >= 1");
        let mut coeffs = vec![BigRational::zero(); n as usize];
        coeffs[0] = value;
        Self {
            s: s.clone(),
            n,
            coeffs,
        }
    }

    pub fn integer(s: &BigInt, n: u32, value: impl Into<BigInt>) -> Self {
        Self::constant(s, n, BigRational::from_integer(value.into()))
    }

    /// The generator `t = s^(1/n)`.
    pub fn theta(s: &BigInt, n: u32) -> Self {
        let mut x = Self::zero(s, n);
        if n == 1 {
            x.coeffs[0] = BigRational::from_integer(s.clone());
        } else {
            x.coeffs[1] = BigRational::one();
        }
        x
    }

    pub fn from_coeffs(s: &BigInt, n: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if n == 0 || *s < BigInt::one() {
            return Err(Error::InvalidInput("radical needs s >= 1, n >= 1".into()));
        }
        if coeffs.len() != n as usize {
            return Err(Error::InvalidInput(format!(
                "expected {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            s: s.clone(),
            n,
            coeffs,
        })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.s
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.s != other.s || self.n != other.n {
            return Err(Error::MismatchedRadical {
                lhs_s: self.s.to_string(),
                lhs_n: self.n,
                rhs_s: other.s.to_string(),
                rhs_n: other.n,
            });
        }
        Ok(())
    }

    pub fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self> {
        self.check_same(rhs)?;
        let coeffs = match op {
            ArithOp::Add => zip_with(&self.coeffs, &rhs.coeffs, |a, b| a + b),
            ArithOp::Sub => zip_with(&self.coeffs, &rhs.coeffs, |a, b| a - b),
            ArithOp::Mul => {
                let n = self.n as usize;
                let mut out = vec![BigRational::zero(); n];
                let s = BigRational::from_integer(self.s.clone());
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let term = a * b;
                        // t^(i+j) with i + j < 2n reduces to s * t^(i+j-n) at most once
                        if i + j >= n {
                            out[i + j - n] += term * &s;
                        } else {
                            out[i + j] += term;
                        }
                    }
                }
                out
            }
        };
        Ok(Self {
            s: self.s.clone(),
            n: self.n,
            coeffs,
        })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            s: self.s.clone(),
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::integer(&self.s, self.n, 1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The same number rewritten over the irreducible base `(u, n')` from
    /// [`radical_base`], where `t = u^(1/n')`.
    pub fn reduced(&self) -> Self {
        let (u, n_red) = radical_base(&self.s, self.n);
        if n_red == self.n {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); n_red as usize];
        let u_rat = BigRational::from_integer(u.clone());
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as u32;
            let lift = Pow::pow(&u_rat, j / n_red);
            coeffs[(j % n_red) as usize] += c * lift;
        }
        Self {
            s: u,
            n: n_red,
            coeffs,
        }
    }

    /// Multiplicative inverse, or `None` for the zero element.
    pub fn inverse(&self) -> Option<Self> {
        let red = self.reduced();
        let n = red.n as usize;
        if red.is_zero_vector() {
            return None;
        }
        // column j of the multiplication matrix is self * t^j
        let mut basis = Self::integer(&red.s, red.n, 1);
        let theta = Self::theta(&red.s, red.n);
        let mut columns = Vec::with_capacity(n);
        for _ in 0..n {
            columns.push((&red * &basis).coeffs);
            basis = &basis * &theta;
        }
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = columns.iter().map(|c| c[r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let solution = solve_rational(&mut rows)?;
        let mut coeffs = vec![BigRational::zero(); self.n as usize];
        // the reduced generator equals t, so low-order indices carry over unchanged
        for (j, c) in solution.into_iter().enumerate() {
            coeffs[j] = c;
        }
        Some(Self {
            s: self.s.clone(),
            n: self.n,
            coeffs,
        })
    }

    /// Sign of the real number, using the default precision schedule.
    pub fn sign(&self) -> Sign {
        self.sign_with_cap(DEFAULT_PRECISION_CAP)
    }

    /// Interval evaluation with precision doubling from [`INITIAL_PRECISION`] up
    /// to `max_precision_bits`.
    ///
    /// `Zero` is reported only when the coefficient vector over the irreducible
    /// base vanishes.
    pub fn sign_with_cap(&self, max_precision_bits: u32) -> Sign {
        let red = self.reduced();
        if red.is_zero_vector() {
            return Sign::Zero;
        }
        if red.n == 1 {
            return rational_sign(&red.coeffs[0]);
        }
        let ints = red.integer_coeffs();
        let mut bits = INITIAL_PRECISION.min(max_precision_bits.max(1));
        loop {
            let (lo, hi) = red.scaled_bounds(&ints, bits);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            if bits >= max_precision_bits {
                return Sign::Indeterminate;
            }
            bits = bits.saturating_mul(2).min(max_precision_bits);
        }
    }

    /// Floating-point approximation for display.
    pub fn approx_f64(&self) -> f64 {
        let red = self.reduced();
        if red.n == 1 {
            return red.coeffs[0].to_f64().unwrap_or(f64::NAN);
        }
        let ints = red.integer_coeffs();
        let denom = red
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let bits = 96;
        let (lo, _) = red.scaled_bounds(&ints, bits);
        let value = BigRational::new(lo, denom << bits);
        value.to_f64().unwrap_or(f64::NAN)
    }

    // Coefficients times the lcm of their denominators.
    fn integer_coeffs(&self) -> Vec<BigInt> {
        let denom = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
            .collect()
    }

    // Integer bounds on 2^bits * sum_j a_j t^j, using r_j = floor(2^bits t^j)
    // so that t^j lies in [r_j, r_j + 1] / 2^bits.
    fn scaled_bounds(&self, ints: &[BigInt], bits: u32) -> (BigInt, BigInt) {
        let n = self.n;
        let scale = BigInt::one() << bits;
        let mut lo = &ints[0] * &scale;
        let mut hi = lo.clone();
        for (j, a) in ints.iter().enumerate().skip(1) {
            if a.is_zero() {
                continue;
            }
            let target = Pow::pow(&scale, n) * Pow::pow(&self.s, j as u32);
            let r = floor_root(&target, n);
            let r1 = &r + 1u32;
            if a.is_positive() {
                lo += a * &r;
                hi += a * &r1;
            } else {
                lo += a * &r1;
                hi += a * &r;
            }
        }
        (lo, hi)
    }
}

fn rational_sign(x: &BigRational) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

fn zip_with(
    a: &[BigRational],
    b: &[BigRational],
    f: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

// Gauss-Jordan on an augmented square system; None if singular.
fn solve_rational(rows: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Some(rows.iter().map(|row| row[n].clone()).collect())
}

/// Free-function form of [`AlgebraicExpr::arith`].
pub fn ae_arith(lhs: &AlgebraicExpr, rhs: &AlgebraicExpr, op: ArithOp) -> Result<AlgebraicExpr> {
    lhs.arith(rhs, op)
}

/// Free-function form of [`AlgebraicExpr::sign_with_cap`].
pub fn ae_sign(x: &AlgebraicExpr, max_precision_bits: u32) -> Sign {
    x.sign_with_cap(max_precision_bits)
}

// Operator sugar panics on mismatched radicals; use `arith` for a Result.
macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&AlgebraicExpr> for &AlgebraicExpr {
            type Output = AlgebraicExpr;
            fn $method(self, rhs: &AlgebraicExpr) -> AlgebraicExpr {
                self.arith(rhs, $op).expect("operands share a radical")
            }
        }
        impl $trait<AlgebraicExpr> for AlgebraicExpr {
            type Output = AlgebraicExpr;
            fn $method(self, rhs: AlgebraicExpr) -> AlgebraicExpr {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, ArithOp::Add);
impl_binop!(Sub, sub, ArithOp::Sub);
impl_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &AlgebraicExpr {
    type Output = AlgebraicExpr;
    fn neg(self) -> AlgebraicExpr {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for AlgebraicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            wrote = true;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{}^({}/{})", self.s, j, self.n)?;
                }
            }
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(big(x))
    }

    fn expr(s: i64, n: u32, c: &[i64]) -> AlgebraicExpr {
        AlgebraicExpr::from_coeffs(&big(s), n, c.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn epsilon_squared_reduces() {
        let s = big(5);
        let eps = &AlgebraicExpr::theta(&s, 2) - &AlgebraicExpr::integer(&s, 2, 2);
        let sq = &eps * &eps;
        assert_eq!(sq, expr(5, 2, &[9, -4]));
    }

    #[test]
    fn additive_identity() {
        let x = expr(11, 3, &[1, -2, 5]);
        assert_eq!(&x + &AlgebraicExpr::zero(&big(11), 3), x);
    }

    #[test]
    fn theta_times_theta_pow_wraps() {
        let s = big(7);
        let t = AlgebraicExpr::theta(&s, 3);
        let t2 = &t * &t;
        assert_eq!(&t * &t2, AlgebraicExpr::integer(&s, 3, 7));
    }

    #[test]
    fn mismatched_radicals_error() {
        let a = expr(5, 2, &[1, 1]);
        let b = expr(6, 2, &[1, 1]);
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(Error::MismatchedRadical { .. })));
        let c = expr(5, 3, &[1, 1, 0]);
        assert!(a.arith(&c, ArithOp::Mul).is_err());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(expr(5, 2, &[-1, 1]).sign(), Sign::Positive);
        assert_eq!(expr(5, 2, &[0, 0]).sign(), Sign::Zero);
        assert_eq!(expr(9, 3, &[0, 0, 0]).sign(), Sign::Zero);
        // 7 - 2 sqrt(15): 49 < 60
        assert_eq!(expr(15, 2, &[7, -2]).sign(), Sign::Negative);
    }

    #[test]
    fn sign_of_hidden_zero_on_perfect_power() {
        // sqrt(36)^(2/4)... t = 36^(1/4) = sqrt(6), so t^2 - 6 = 0
        assert_eq!(expr(36, 4, &[-6, 0, 1, 0]).sign(), Sign::Zero);
        // t = 8^(1/3) = 2
        assert_eq!(expr(8, 3, &[-2, 1, 0]).sign(), Sign::Zero);
        assert_eq!(expr(8, 3, &[-3, 1, 0]).sign(), Sign::Negative);
    }

    #[test]
    fn sign_close_to_zero() {
        // 1000001^2 - 2 * 707107^2 ... use sqrt(2) convergent: 665857/470832
        assert_eq!(expr(2, 2, &[665857, -470832]).sign(), Sign::Positive);
        assert_eq!(expr(2, 2, &[-665857, 470832]).sign(), Sign::Negative);
    }

    #[test]
    fn tiny_cap_reports_indeterminate() {
        // sqrt(2) ~ 665857/470832 agrees to ~1e-12, well below 8 bits
        assert_eq!(expr(2, 2, &[665857, -470832]).sign_with_cap(8), Sign::Indeterminate);
    }

    #[test]
    fn inverse_roundtrip() {
        let s = big(30);
        let eps = &AlgebraicExpr::theta(&s, 3) - &AlgebraicExpr::integer(&s, 3, 3);
        let inv = eps.inverse().unwrap();
        assert_eq!(&eps * &inv, AlgebraicExpr::integer(&s, 3, 1));
        assert!(AlgebraicExpr::zero(&s, 3).inverse().is_none());
    }

    #[test]
    fn inverse_over_reducible_radical() {
        // 36^(1/4) = sqrt(6); eps = t - 2
        let s = big(36);
        let eps = &AlgebraicExpr::theta(&s, 4) - &AlgebraicExpr::integer(&s, 4, 2);
        let inv = eps.inverse().unwrap();
        let prod = (&eps * &inv).reduced();
        assert_eq!(prod, AlgebraicExpr::integer(&big(6), 2, 1));
        // 1 / (sqrt 6 - 2) = (sqrt 6 + 2) / 2
        assert!((inv.approx_f64() - (6f64.sqrt() + 2.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(expr(5, 2, &[9, -4]).to_string(), "9 - 4*5^(1/2)");
        assert_eq!(expr(5, 2, &[0, 0]).to_string(), "0");
        assert_eq!(expr(7, 3, &[-1, 0, 1]).to_string(), "-1 + 7^(2/3)");
    }

    mod props {
        use super::*;
        use crate::exactnum::cmp_radical;
        use proptest::prelude::*;
        use std::cmp::Ordering;

        fn arb_triple() -> impl Strategy<Value = (AlgebraicExpr, AlgebraicExpr, AlgebraicExpr)> {
            (2i64..40, 1u32..5).prop_flat_map(|(s, n)| {
                let v = || prop::collection::vec(-50i64..50, n as usize);
                (v(), v(), v()).prop_map(move |(a, b, c)| (expr(s, n, &a), expr(s, n, &b), expr(s, n, &c)))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn ring_laws((a, b, c) in arb_triple()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            }

            #[test]
            fn sign_agrees_with_cmp_radical(a in 0i64..200, b in 0i64..200, s in 1i64..60, n in 1u32..5, j in 0u32..4) {
                let j = j.min(n - 1);
                let sb = big(s);
                // a - b t^j
                let mut x = AlgebraicExpr::integer(&sb, n, a);
                x = &x - &AlgebraicExpr::theta(&sb, n).pow(j).scale(&rat(b));
                let ord = cmp_radical(&big(a), &big(b), &sb, j, n);
                let expected = match ord {
                    Ordering::Less => Sign::Negative,
                    Ordering::Equal => Sign::Zero,
                    Ordering::Greater => Sign::Positive,
                };
                prop_assert_eq!(x.sign(), expected);
            }
        }
    }
}
