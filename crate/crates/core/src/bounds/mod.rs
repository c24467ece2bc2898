//! Upper bounds on `alpha(I^(m))` for `s` points in `P^n`, and the exact
//! inequality chain that proves the sharper bound.
//!
//! With `t = s^(1/n)`, `k = floor(t)` and `eps = t - k`:
//!
//! * `delta = floor(t (m+n-1)) - (n-1)` bounds `alpha(I^(m))` for any points.
//! * When `(n-1)(k-2) >= 2 eps (m-1)`, the binomial inequality
//!   `C(k(m+n-1)+1, n) > C(m+n-1, n) s` holds and so does the sharper bound
//!   `alpha(I^(m)) <= k(m+n-1) - n + 1`.
//!
//! Every decision here is made by integer powering through
//! [`cmp_radical`](crate::exactnum::cmp_radical).

mod certificate;

pub use certificate::{certificate, certificate_with_cap, Certificate, SignVerdicts};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, cmp_radical, floor_mul_nth_root, int_nth_root, radical_comparison, RadicalComparison,
};

/// `s` points in `P^n`, vanishing to order `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    n: u32,
    s: BigInt,
    m: BigInt,
}

impl Instance {
    pub fn new(n: u32, s: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        let (s, m) = (s.into(), m.into());
        if n < 1 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        if s < BigInt::one() {
            return Err(Error::InvalidInput(format!("s must be >= 1, got {s}")));
        }
        if m < BigInt::one() {
            return Err(Error::InvalidInput(format!("m must be >= 1, got {m}")));
        }
        Ok(Self { n, s, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `m + n - 1`, the scale factor shared by both bounds.
    pub fn shifted_m(&self) -> BigInt {
        &self.m + BigInt::from(self.n) - 1
    }

    fn require_part_b(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::UnsupportedDimension(self.n));
        }
        Ok(())
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, s={}, m={})", self.n, self.s, self.m)
    }
}

/// Integer part of `s^(1/n)` and whether the fractional part vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    pub s: BigInt,
    pub n: u32,
    pub k: BigInt,
    pub epsilon_is_zero: bool,
}

pub fn root_data(s: &BigInt, n: u32) -> Result<RootData> {
    let k = int_nth_root(s, n)?;
    let epsilon_is_zero = num_traits::Pow::pow(&k, n) == *s;
    Ok(RootData {
        s: s.clone(),
        n,
        k,
        epsilon_is_zero,
    })
}

fn k_of(inst: &Instance) -> BigInt {
    int_nth_root(&inst.s, inst.n).expect("instance invariants hold")
}

/// `floor(s^(1/n) (m+n-1)) - (n-1)`, an upper bound on `alpha(I^(m))` for any
/// `s` points.
pub fn delta_bound(inst: &Instance) -> BigInt {
    let t = inst.shifted_m();
    floor_mul_nth_root(&t, &inst.s, inst.n).expect("instance invariants hold") - (inst.n - 1)
}

/// `k(m+n-1) - n + 1`.
pub fn k_bound(inst: &Instance) -> BigInt {
    k_of(inst) * inst.shifted_m() - (inst.n - 1)
}

// The condition (n-1)(k-2) >= 2(m-1) eps, rearranged to
// (n-1)(k-2) + 2(m-1)k >= 2(m-1) t with both sides nonnegative.
fn condition_operands(inst: &Instance, k: &BigInt) -> (BigInt, BigInt) {
    let nm1 = BigInt::from(inst.n - 1);
    let mm1 = &inst.m - 1;
    let two_mm1 = &mm1 * 2;
    let a = &nm1 * (k - 2) + &two_mm1 * k;
    (a, two_mm1)
}

/// Whether `floor(s^(1/n)) - 2 >= 2 eps (m-1) / (n-1)`.
pub fn demailly_condition(inst: &Instance) -> Result<bool> {
    inst.require_part_b()?;
    let k = k_of(inst);
    if k < BigInt::from(2) {
        return Ok(false);
    }
    let (a, b) = condition_operands(inst, &k);
    Ok(cmp_radical(&a, &b, &inst.s, 1, inst.n) != Ordering::Less)
}

/// The comparison deciding [`demailly_condition`], or `None` when `k < 2`
/// settles it without one.
pub fn condition_witness(inst: &Instance) -> Result<Option<RadicalComparison>> {
    inst.require_part_b()?;
    let k = k_of(inst);
    if k < BigInt::from(2) {
        return Ok(None);
    }
    let (a, b) = condition_operands(inst, &k);
    Ok(Some(radical_comparison(&a, &b, &inst.s, 1, inst.n)))
}

/// Largest multiplicity covered by [`demailly_condition`] for fixed `(n, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxM {
    /// `k < 2`: the condition fails already at `m = 1`.
    None,
    /// `s` is a perfect `n`-th power with `k >= 2`: every `m` qualifies.
    Unbounded,
    Bounded(BigInt),
}

impl fmt::Display for MaxM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxM::None => f.write_str("none"),
            MaxM::Unbounded => f.write_str("unbounded"),
            MaxM::Bounded(m) => write!(f, "{m}"),
        }
    }
}

/// Exponential probe followed by bisection on the antitone predicate
/// `m -> demailly_condition(n, s, m)`.
pub fn max_m(n: u32, s: &BigInt) -> Result<MaxM> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let rd = root_data(s, n)?;
    if rd.k < BigInt::from(2) {
        return Ok(MaxM::None);
    }
    if rd.epsilon_is_zero {
        return Ok(MaxM::Unbounded);
    }
    let holds = |m: &BigInt| -> Result<bool> { demailly_condition(&Instance::new(n, s.clone(), m.clone())?) };
    // m = 1 always holds once k >= 2
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while holds(&hi)? {
        lo = hi.clone();
        hi *= 2;
    }
    // invariant: holds(lo), !holds(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if holds(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(MaxM::Bounded(lo))
}

/// The two comparisons bracketing a bounded `max_m`: the condition at `m_max`
/// (not `Less`) and at `m_max + 1` (`Less`).
pub fn max_m_witness(n: u32, s: &BigInt) -> Result<Option<(RadicalComparison, RadicalComparison)>> {
    match max_m(n, s)? {
        MaxM::Bounded(m) => {
            let at = condition_witness(&Instance::new(n, s.clone(), m.clone())?)?
                .expect("k >= 2 when bounded");
            let past = condition_witness(&Instance::new(n, s.clone(), m + 1)?)?
                .expect("k >= 2 when bounded");
            Ok(Some((at, past)))
        }
        _ => Ok(None),
    }
}

/// `C(k(m+n-1)+1, n) > C(m+n-1, n) * s`, evaluated in big integers.
pub fn sufficient_condition(inst: &Instance) -> bool {
    let t = inst.shifted_m();
    let k = k_of(inst);
    let n = u64::from(inst.n);
    binomial(&(&k * &t + 1), n) > binomial(&t, n) * &inst.s
}

/// Largest factor index `floor((n-1)/2)`.
pub fn max_factor_index(n: u32) -> u32 {
    n.saturating_sub(1) / 2
}

/// The paired-factor inequality
/// `(k(m+n-1)+1-i)(k(m+n-1)+1-(n-1)+i) > s^(2/n) (m+n-1-i)(m+i)`.
pub fn factor_inequality(inst: &Instance, i: u32) -> Result<bool> {
    let max = max_factor_index(inst.n);
    if i > max {
        return Err(Error::FactorIndexOutOfRange { index: i, max });
    }
    let k = k_of(inst);
    let t = inst.shifted_m();
    let top = &k * &t + 1;
    let left: BigInt = &top - i;
    let right: BigInt = &top - BigInt::from(inst.n - 1) + i;
    let lhs: BigInt = left * right;
    let rhs: BigInt = (&t - i) * (&inst.m + i);
    if lhs.is_negative() {
        return Ok(false);
    }
    Ok(cmp_radical(&lhs, &rhs, &inst.s, 2, inst.n) == Ordering::Greater)
}

/// Which of the two sufficient conditions for the sharper bound hold: the
/// `floor(s^(1/n)) >= m + 1` condition (`Mss`) or [`demailly_condition`] (`New`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MssComparison {
    OnlyNew,
    OnlyMss,
    Both,
    Neither,
}

impl MssComparison {
    pub fn as_str(self) -> &'static str {
        match self {
            MssComparison::OnlyNew => "only_new",
            MssComparison::OnlyMss => "only_mss",
            MssComparison::Both => "both",
            MssComparison::Neither => "neither",
        }
    }
}

impl fmt::Display for MssComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn compare_mss(inst: &Instance) -> Result<MssComparison> {
    let new = demailly_condition(inst)?;
    let mss = k_of(inst) > inst.m;
    Ok(match (new, mss) {
        (true, true) => MssComparison::Both,
        (true, false) => MssComparison::OnlyNew,
        (false, true) => MssComparison::OnlyMss,
        (false, false) => MssComparison::Neither,
    })
}

/// Quantities that only exist for `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartB {
    pub condition_holds: bool,
    pub sufficient_holds: bool,
    pub factor_results: Vec<(u32, bool)>,
    pub mss_comparison: MssComparison,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub instance: Instance,
    pub k: BigInt,
    pub epsilon_is_zero: bool,
    pub delta: BigInt,
    pub k_bound: BigInt,
    /// Absent for `n = 1`.
    pub part_b: Option<PartB>,
}

impl BoundReport {
    pub fn factors_ok(&self) -> bool {
        self.part_b
            .as_ref()
            .is_some_and(|b| b.factor_results.iter().all(|&(_, ok)| ok))
    }
}

pub fn bound_report(inst: &Instance) -> BoundReport {
    let rd = root_data(&inst.s, inst.n).expect("instance invariants hold");
    let part_b = (inst.n >= 2).then(|| PartB {
        condition_holds: demailly_condition(inst).expect("n >= 2"),
        sufficient_holds: sufficient_condition(inst),
        factor_results: (0..=max_factor_index(inst.n))
            .map(|i| (i, factor_inequality(inst, i).expect("index in range")))
            .collect(),
        mss_comparison: compare_mss(inst).expect("n >= 2"),
    });
    BoundReport {
        instance: inst.clone(),
        k: rd.k,
        epsilon_is_zero: rd.epsilon_is_zero,
        delta: delta_bound(inst),
        k_bound: k_bound(inst),
        part_b,
    }
}

/// `(delta + n - 1)^n <= (m+n-1)^n * s`, the integer form of
/// `floor(t (m+n-1)) / (m+n-1) <= t`.
pub fn delta_consistent(inst: &Instance) -> bool {
    let lhs = delta_bound(inst) + (inst.n - 1);
    if lhs.is_negative() {
        return true;
    }
    let t = inst.shifted_m();
    num_traits::Pow::pow(&lhs, inst.n) <= num_traits::Pow::pow(&t, inst.n) * &inst.s
}
