//! The algebraic certificate behind the sharper bound, written over
//! `t = s^(1/n)` with `eps = t - k`.
//!
//! `LHS - RHS` of the `i`-th paired-factor inequality is the quadratic
//! `A m^2 + B m + C_i` in `m`. `C_i` is smallest at `i = (n-1)/2`, where it
//! equals `C_min`. For `eps > 0` the quadratic is checked at the boundary
//! multiplicity `m* = (n-1)(k-2)/(2 eps) + 1`, where it rewrites as
//! `f N^2 + g N + 2k(1-eps) + (1-eps^2)` with `N = n - 1`.
//!
//! Nothing here feeds back into the bound checks; signs are diagnostics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{max_factor_index, root_data, Instance};
use crate::error::{Error, Result};
use crate::exactnum::{AlgebraicExpr, Sign, DEFAULT_PRECISION_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVerdicts {
    /// Expected `Zero` or `Negative`.
    pub a: Sign,
    /// Expected `Positive` when `k >= 2`.
    pub c_min: Sign,
    /// Expected `Positive` for `eps > 0`, `k >= 2`.
    pub f: Option<Sign>,
    pub g: Option<Sign>,
}

impl SignVerdicts {
    /// Whether every verdict has the sign the proof needs.
    pub fn as_expected(&self) -> bool {
        matches!(self.a, Sign::Zero | Sign::Negative)
            && self.c_min == Sign::Positive
            && self.f.map_or(true, |s| s == Sign::Positive)
            && self.g.map_or(true, |s| s == Sign::Positive)
    }

    pub fn any_indeterminate(&self) -> bool {
        [Some(self.a), Some(self.c_min), self.f, self.g]
            .into_iter()
            .flatten()
            .any(|s| s == Sign::Indeterminate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub instance: Instance,
    pub k: BigInt,
    pub epsilon_is_zero: bool,
    pub a: AlgebraicExpr,
    pub b: AlgebraicExpr,
    /// `C_i` for `i = 0..=floor((n-1)/2)`.
    pub c_list: Vec<AlgebraicExpr>,
    pub c_min: AlgebraicExpr,
    pub f: Option<AlgebraicExpr>,
    pub g: Option<AlgebraicExpr>,
    pub boundary_m: Option<AlgebraicExpr>,
    /// `A m*^2 + B m* + C_min` equals the `f`, `g` form exactly.
    pub boundary_identity_holds: Option<bool>,
    pub verdicts: SignVerdicts,
}

impl Certificate {
    /// The sign verdicts are only claimed on `k >= 2`.
    pub fn in_domain(&self) -> bool {
        self.k >= BigInt::from(2)
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn certificate(inst: &Instance) -> Result<Certificate> {
    certificate_with_cap(inst, DEFAULT_PRECISION_CAP)
}

pub fn certificate_with_cap(inst: &Instance, max_precision_bits: u32) -> Result<Certificate> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let s = inst.s();
    let rd = root_data(s, n)?;
    let k = rd.k.clone();

    let c = |v: BigInt| AlgebraicExpr::integer(s, n, v);
    let one = c(BigInt::one());
    let theta = AlgebraicExpr::theta(s, n);
    let kk = c(k.clone());
    let eps = &theta - &kk;
    let theta2 = &theta * &theta;
    let nm1 = BigInt::from(n - 1);
    let big_n = c(nm1.clone());

    let a = &(&kk * &kk) - &theta2;

    // (n-1)(k^2 - (1 + 2 eps)k - eps^2) + 2k
    let one_two_eps = &one + &eps.scale(&rat(2, 1));
    let inner = &(&(&kk * &kk) - &(&one_two_eps * &kk)) - &(&eps * &eps);
    let b = &(&big_n * &inner) + &kk.scale(&rat(2, 1));

    // C_i = (t^2 - 1) i^2 - (n-1)(t^2 - 1) i + (k(n-1)+1)((k-1)(n-1)+1)
    let t2m1 = &theta2 - &one;
    let constant = (&k * &nm1 + 1u32) * ((&k - 1u32) * &nm1 + 1u32);
    let c_list: Vec<AlgebraicExpr> = (0..=max_factor_index(n))
        .map(|i| {
            let i = BigInt::from(i);
            let quad = t2m1.scale(&BigRational::from_integer(&i * &i));
            let lin = t2m1.scale(&BigRational::from_integer(&nm1 * &i));
            &(&quad - &lin) + &c(constant.clone())
        })
        .collect();

    // ((2k-1)(n-1)/2 + 1)^2 - (t (n-1)/2)^2
    let half_nm1 = BigRational::new(nm1.clone(), 2.into());
    let left = c((&k * 2u32 - 1u32).clone()).scale(&half_nm1);
    let left = &left + &one;
    let right = theta.scale(&half_nm1);
    let c_min = &(&left * &left) - &(&right * &right);

    let (f, g, boundary_m, boundary_identity_holds) = if rd.epsilon_is_zero {
        (None, None, None, None)
    } else {
        let inv_eps = eps.inverse().expect("eps > 0 is invertible");
        let half = rat(1, 2);
        let k2 = &kk * &kk;
        let one_m_eps = &one - &eps;

        // (1/(2 eps) - 1/2) k^2 + (-1/eps + 2 - eps) k - (3 - eps)(1 - eps)/4
        let f_k2 = &inv_eps.scale(&half) - &AlgebraicExpr::constant(s, n, half.clone());
        let f_k = &(&c(2.into()) - &inv_eps) - &eps;
        let f_c = (&(&c(3.into()) - &eps) * &one_m_eps).scale(&rat(1, 4));
        let f = &(&(&f_k2 * &k2) + &(&f_k * &kk)) - &f_c;

        // (1/eps - 1) k^2 + (-2/eps + 5 - 3 eps) k - (1 - eps)^2
        let g_k2 = &inv_eps - &one;
        let g_k = &(&c(5.into()) - &inv_eps.scale(&rat(2, 1))) - &eps.scale(&rat(3, 1));
        let g = &(&(&g_k2 * &k2) + &(&g_k * &kk)) - &(&one_m_eps * &one_m_eps);

        // m* = (n-1)(k-2)/(2 eps) + 1
        let bm = &inv_eps.scale(&BigRational::new(&nm1 * (&k - 2u32), 2.into())) + &one;

        let at_boundary = &(&(&a * &(&bm * &bm)) + &(&b * &bm)) + &c_min;
        let closed = &(&(&f * &(&big_n * &big_n)) + &(&g * &big_n))
            + &(&(&kk * &one_m_eps).scale(&rat(2, 1)) + &(&one - &(&eps * &eps)));
        let identity = (&at_boundary - &closed).reduced().is_zero_vector();
        (Some(f), Some(g), Some(bm), Some(identity))
    };

    let verdicts = SignVerdicts {
        a: a.sign_with_cap(max_precision_bits),
        c_min: c_min.sign_with_cap(max_precision_bits),
        f: f.as_ref().map(|x| x.sign_with_cap(max_precision_bits)),
        g: g.as_ref().map(|x| x.sign_with_cap(max_precision_bits)),
    };

    Ok(Certificate {
        instance: inst.clone(),
        k,
        epsilon_is_zero: rd.epsilon_is_zero,
        a,
        b,
        c_list,
        c_min,
        f,
        g,
        boundary_m,
        boundary_identity_holds,
        verdicts,
    })
}
