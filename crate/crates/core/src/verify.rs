//! Experiments that tie the bounds to computed initial degrees.
//!
//! Both upper bounds hold for every point set, so a computed `alpha` above
//! either one is a software fault, never a finding. Nothing here claims a
//! lower bound on the Waldschmidt constant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::bounds::{
    compare_mss, delta_bound, demailly_condition, factor_inequality, k_bound,
    max_factor_index, root_data, sufficient_condition, Instance, MssComparison,
};
use crate::error::{Error, Result};
use crate::interpolation::{
    alpha_default, build_matrix, has_kernel, rank_gf, sample_points,
    waldschmidt_sequence, ConditionMatrix, PointSet, PrimeModulus, SplitMix64,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdicts {
    /// `alpha <= delta`.
    pub thm_a_ok: bool,
    /// `alpha <= k(m+n-1)-n+1`; present only when the condition holds.
    pub thm_b_ok: Option<bool>,
    /// `alpha + n - 1 <= k (m + n - 1)`.
    pub ratio_le_k: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub instance: Instance,
    pub seed: u64,
    pub prime: u64,
    pub alpha: u32,
    pub k: BigInt,
    pub delta: BigInt,
    /// Absent for `n = 1`.
    pub k_bound: Option<BigInt>,
    /// Absent for `n = 1`.
    pub condition_holds: Option<bool>,
    /// `(alpha + n - 1) / (m + n - 1)`.
    pub demailly_ratio: BigRational,
    pub verdicts: Verdicts,
}

impl ExperimentReport {
    /// A bound that holds for all point sets failed.
    pub fn is_fault(&self) -> bool {
        !self.verdicts.thm_a_ok || self.verdicts.thm_b_ok == Some(false)
    }
}

fn small_instance(n: u32, s: usize, m: u32) -> Result<Instance> {
    Instance::new(n, BigInt::from(s), BigInt::from(m))
}

/// Verdicts for an already computed `alpha`.
pub fn judge(inst: &Instance, alpha: u32, seed: u64, prime: u64) -> ExperimentReport {
    let n = inst.n();
    let rd = root_data(inst.s(), n).expect("instance invariants hold");
    let delta = delta_bound(inst);
    let alpha_big = BigInt::from(alpha);
    let t = inst.shifted_m();
    let lifted = &alpha_big + (n - 1);
    let (k_bound_val, condition_holds) = if n >= 2 {
        (Some(k_bound(inst)), Some(demailly_condition(inst).expect("n >= 2")))
    } else {
        (None, None)
    };
    let thm_b_ok = match (&k_bound_val, condition_holds) {
        (Some(kb), Some(true)) => Some(alpha_big <= *kb),
        _ => None,
    };
    ExperimentReport {
        instance: inst.clone(),
        seed,
        prime,
        alpha,
        verdicts: Verdicts {
            thm_a_ok: alpha_big <= delta,
            thm_b_ok,
            ratio_le_k: lifted <= &rd.k * &t,
        },
        demailly_ratio: BigRational::new(lifted, t),
        k: rd.k,
        delta,
        k_bound: k_bound_val,
        condition_holds,
    }
}

/// Samples `s` points from `seed`, computes `alpha(I^(m))` and judges it.
pub fn run_instance(n: u32, s: usize, m: u32, modulus: PrimeModulus, seed: u64) -> Result<ExperimentReport> {
    let inst = small_instance(n, s, m)?;
    let points = sample_points(n, s, modulus, seed)?;
    let alpha = alpha_default(&points, m)?.alpha;
    Ok(judge(&inst, alpha, seed, modulus.get()))
}

/// Same as [`run_instance`] on caller-supplied points.
pub fn run_on_points(points: &PointSet, m: u32, seed: u64) -> Result<ExperimentReport> {
    let inst = small_instance(points.n(), points.len(), m)?;
    let alpha = alpha_default(points, m)?.alpha;
    Ok(judge(&inst, alpha, seed, points.modulus().get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    MonotoneInMultiplicity,
    Subadditive,
    LinearInAlphaOne,
    BelowDelta,
    KernelDegreeMonotone,
    RankMetamorphic,
}

impl InvariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InvariantKind::MonotoneInMultiplicity => "monotone_in_m",
            InvariantKind::Subadditive => "subadditive",
            InvariantKind::LinearInAlphaOne => "alpha_m_le_m_alpha_1",
            InvariantKind::BelowDelta => "alpha_le_delta",
            InvariantKind::KernelDegreeMonotone => "kernel_degree_monotone",
            InvariantKind::RankMetamorphic => "rank_metamorphic",
        }
    }

    pub const ALL: [InvariantKind; 6] = [
        InvariantKind::MonotoneInMultiplicity,
        InvariantKind::Subadditive,
        InvariantKind::LinearInAlphaOne,
        InvariantKind::BelowDelta,
        InvariantKind::KernelDegreeMonotone,
        InvariantKind::RankMetamorphic,
    ];
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: InvariantKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    /// `alpha(I^(m))` for `m = 1..=M`.
    pub alphas: Vec<u32>,
    pub checks: Vec<(InvariantKind, bool)>,
    pub first_counterexample: Option<Counterexample>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.first_counterexample.is_none()
    }
}

/// Row permutation and nonzero row scaling leave the rank unchanged.
pub fn rank_metamorphic(matrix: &ConditionMatrix, seed: u64) -> bool {
    let f = matrix.modulus();
    let base = rank_gf(matrix);
    let mut rng = SplitMix64::new(seed);
    let mut rows = matrix.to_rows();
    // Fisher-Yates
    for i in (1..rows.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        rows.swap(i, j);
    }
    let permuted = ConditionMatrix::from_rows(f, &rows);
    for row in &mut rows {
        let c = 1 + rng.next_below(f.get() - 1);
        for x in row.iter_mut() {
            *x = f.mul(*x, c);
        }
    }
    let scaled = ConditionMatrix::from_rows(f, &rows);
    rank_gf(&permuted) == base && rank_gf(&scaled) == base
}

/// Checks, for `m = 1..=max_mult`: `alpha` nondecreasing in `m`,
/// `alpha(a+b) <= alpha(a) + alpha(b)`, `alpha(m) <= m alpha(1)`,
/// `alpha(m) <= delta`, a kernel at `alpha + 1`, and rank invariance of the
/// `alpha`-degree matrix under row permutation and scaling.
pub fn invariant_suite(points: &PointSet, max_mult: u32) -> Result<InvariantReport> {
    if max_mult < 2 {
        return Err(Error::InvalidInput("invariant suite needs M >= 2".into()));
    }
    let seq = waldschmidt_sequence(points, max_mult, None)?;
    let alphas: Vec<u32> = seq.iter().map(|e| e.alpha).collect();
    let at = |m: u32| alphas[(m - 1) as usize];
    let mut first: Option<Counterexample> = None;
    let mut record = |kind: InvariantKind, detail: Option<String>| -> bool {
        if let Some(detail) = detail {
            if first.is_none() {
                first = Some(Counterexample { kind, detail });
            }
            false
        } else {
            true
        }
    };

    let monotone = (1..max_mult)
        .find(|&m| at(m + 1) < at(m))
        .map(|m| format!("alpha({}) = {} < alpha({m}) = {}", m + 1, at(m + 1), at(m)));
    let monotone = record(InvariantKind::MonotoneInMultiplicity, monotone);

    let mut sub = None;
    'outer: for a in 1..max_mult {
        for b in 1..=(max_mult - a) {
            if at(a + b) > at(a) + at(b) {
                sub = Some(format!("alpha({}) = {} > alpha({a}) + alpha({b})", a + b, at(a + b)));
                break 'outer;
            }
        }
    }
    let subadditive = record(InvariantKind::Subadditive, sub);

    let linear = (1..=max_mult)
        .find(|&m| at(m) > m * at(1))
        .map(|m| format!("alpha({m}) = {} > {m} * alpha(1)", at(m)));
    let linear = record(InvariantKind::LinearInAlphaOne, linear);

    let mut delta_fail = None;
    for m in 1..=max_mult {
        let inst = small_instance(points.n(), points.len(), m)?;
        let delta = delta_bound(&inst);
        if BigInt::from(at(m)) > delta {
            delta_fail = Some(format!("alpha({m}) = {} > delta = {delta}", at(m)));
            break;
        }
    }
    let below_delta = record(InvariantKind::BelowDelta, delta_fail);

    let kernel_fail = (1..=max_mult)
        .find(|&m| !has_kernel(points, m, at(m) + 1))
        .map(|m| format!("kernel at degree {} but not {} for m = {m}", at(m), at(m) + 1));
    let kernel_monotone = record(InvariantKind::KernelDegreeMonotone, kernel_fail);

    let mut meta_fail = None;
    for m in 1..=max_mult {
        let matrix = build_matrix(points, m, at(m));
        if !rank_metamorphic(&matrix, u64::from(m)) {
            meta_fail = Some(format!("rank changed under row permutation/scaling at m = {m}"));
            break;
        }
    }
    let metamorphic = record(InvariantKind::RankMetamorphic, meta_fail);

    Ok(InvariantReport {
        alphas,
        checks: vec![
            (InvariantKind::MonotoneInMultiplicity, monotone),
            (InvariantKind::Subadditive, subadditive),
            (InvariantKind::LinearInAlphaOne, linear),
            (InvariantKind::BelowDelta, below_delta),
            (InvariantKind::KernelDegreeMonotone, kernel_monotone),
            (InvariantKind::RankMetamorphic, metamorphic),
        ],
        first_counterexample: first,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: u32,
    pub s: u64,
    pub m: u64,
    pub condition_holds: bool,
    pub sufficient_holds: bool,
    pub factor_ok: bool,
    pub mss_class: MssComparison,
    /// The condition holds but the binomial inequality or a factor fails.
    pub violation: bool,
}

pub fn sweep_row(n: u32, s: u64, m: u64) -> Result<SweepRow> {
    let inst = Instance::new(n, s, m)?;
    let condition_holds = demailly_condition(&inst)?;
    let sufficient_holds = sufficient_condition(&inst);
    let factor_ok = (0..=max_factor_index(n)).all(|i| factor_inequality(&inst, i).expect("index in range"));
    let mss_class = compare_mss(&inst)?;
    Ok(SweepRow {
        n,
        s,
        m,
        condition_holds,
        sufficient_holds,
        factor_ok,
        mss_class,
        violation: condition_holds && !(sufficient_holds && factor_ok),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub n_range: RangeInclusive<u32>,
    pub s_max: u64,
    pub m_max: u64,
}

impl SweepSpec {
    pub fn new(n_range: RangeInclusive<u32>, s_max: u64, m_max: u64) -> Result<Self> {
        if n_range.is_empty() || s_max < 1 || m_max < 1 {
            return Err(Error::InvalidInput("sweep ranges must be nonempty".into()));
        }
        if *n_range.start() < 2 {
            return Err(Error::UnsupportedDimension(*n_range.start()));
        }
        Ok(Self { n_range, s_max, m_max })
    }

    pub fn cells(&self) -> u64 {
        u64::from(self.n_range.end() - self.n_range.start() + 1) * self.s_max * self.m_max
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub rows: u64,
    pub condition_rows: u64,
    pub violations: u64,
    pub only_new: u64,
    pub only_mss: u64,
    pub both: u64,
    pub neither: u64,
}

impl SweepSummary {
    fn add(&mut self, row: &SweepRow) {
        self.rows += 1;
        self.condition_rows += u64::from(row.condition_holds);
        self.violations += u64::from(row.violation);
        match row.mss_class {
            MssComparison::OnlyNew => self.only_new += 1,
            MssComparison::OnlyMss => self.only_mss += 1,
            MssComparison::Both => self.both += 1,
            MssComparison::Neither => self.neither += 1,
        }
    }
}

/// Runs the sweep in `(n, s, m)` order, handing each row to `sink` as soon
/// as its `(n, s)` block is done. Blocks are computed in parallel batches;
/// the order seen by `sink` does not depend on the thread count.
pub fn theorem_sweep_with<F>(spec: &SweepSpec, mut sink: F) -> Result<SweepSummary>
where
    F: FnMut(&SweepRow) -> Result<()>,
{
    const BATCH: u64 = 64;
    let mut summary = SweepSummary::default();
    for n in spec.n_range.clone() {
        let mut s_lo = 1;
        while s_lo <= spec.s_max {
            let s_hi = (s_lo + BATCH - 1).min(spec.s_max);
            let blocks: Vec<Vec<SweepRow>> = (s_lo..=s_hi)
                .into_par_iter()
                .map(|s| (1..=spec.m_max).map(|m| sweep_row(n, s, m)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            for row in blocks.iter().flatten() {
                summary.add(row);
                sink(row)?;
            }
            s_lo = s_hi + 1;
        }
    }
    Ok(summary)
}

/// Collects every row of the sweep.
pub fn theorem_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    theorem_sweep_with(spec, |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChudnovskyReport {
    pub n: u32,
    pub s: usize,
    pub alpha: u32,
    pub k: BigInt,
    /// `(alpha + n - 1) / n`.
    pub ratio: BigRational,
    /// `alpha + n - 1 <= k n`.
    pub within_k: bool,
}

/// The `m = 1` specialization of the Demailly ratio.
pub fn chudnovsky_report(points: &PointSet) -> Result<ChudnovskyReport> {
    let n = points.n();
    let s = points.len();
    if s == 0 {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let alpha = alpha_default(points, 1)?.alpha;
    let k = root_data(&BigInt::from(s), n)?.k;
    let lifted = BigInt::from(alpha) + (n - 1);
    let within_k = lifted.cmp(&(&k * n)) != Ordering::Greater;
    Ok(ChudnovskyReport {
        n,
        s,
        alpha,
        ratio: BigRational::new(lifted, BigInt::from(n)),
        k,
        within_k,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCell {
    pub n: u32,
    pub s: usize,
    pub m: u32,
    pub seed: u64,
}

/// Runs [`run_instance`] over a grid in parallel; results come back in the
/// input order.
pub fn run_grid(cells: &[GridCell], modulus: PrimeModulus) -> Vec<Result<ExperimentReport>> {
    cells
        .par_iter()
        .map(|c| run_instance(c.n, c.s, c.m, modulus, c.seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeModulus {
        PrimeModulus::default()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn run_instance_examples() {
        let r = run_instance(2, 4, 2, fp(), 1).unwrap();
        assert_eq!(r.alpha, 4);
        assert_eq!(r.delta, BigInt::from(5));
        assert_eq!(r.k_bound, Some(BigInt::from(5)));
        assert_eq!(r.demailly_ratio, ratio(5, 3));
        assert_eq!(r.verdicts, Verdicts { thm_a_ok: true, thm_b_ok: Some(true), ratio_le_k: true });

        let r = run_instance(2, 9, 3, fp(), 1).unwrap();
        assert_eq!(r.alpha, 9);
        assert_eq!(r.k_bound, Some(BigInt::from(11)));
        assert_eq!(r.demailly_ratio, ratio(10, 4));
        assert!(r.verdicts.ratio_le_k);

        let r = run_instance(1, 3, 2, fp(), 1).unwrap();
        assert_eq!(r.alpha, 6);
        assert_eq!(r.delta, BigInt::from(6));
        assert!(r.k_bound.is_none() && r.condition_holds.is_none() && r.verdicts.thm_b_ok.is_none());
        assert!(!r.is_fault());
    }

    #[test]
    fn invariant_suite_examples() {
        let one = sample_points(2, 1, fp(), 1).unwrap();
        let rep = invariant_suite(&one, 5).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.alphas, vec![1, 2, 3, 4, 5]);
        let four = sample_points(2, 4, fp(), 1).unwrap();
        let rep = invariant_suite(&four, 4).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_counterexample);
        assert_eq!(rep.checks.len(), InvariantKind::ALL.len());
        assert!(invariant_suite(&four, 1).is_err());
    }

    #[test]
    fn coincident_points_rejected_upstream() {
        assert_eq!(
            PointSet::from_affine(2, fp(), &[vec![5, 5], vec![5, 5]]),
            Err(Error::DuplicatePoint(1))
        );
    }

    #[test]
    fn sweep_rows() {
        let row = sweep_row(2, 15, 2).unwrap();
        assert!(!row.condition_holds);
        assert_eq!(row.mss_class, MssComparison::OnlyMss);
        assert!(!row.violation);
        for m in 1..=50 {
            let row = sweep_row(3, 27, m).unwrap();
            assert!(row.condition_holds && row.sufficient_holds && row.factor_ok, "m={m}");
        }
    }

    #[test]
    fn small_sweep_has_no_violations_and_is_ordered() {
        let spec = SweepSpec::new(2..=3, 150, 12).unwrap();
        let rows = theorem_sweep(&spec).unwrap();
        assert_eq!(rows.len() as u64, spec.cells());
        assert!(rows.iter().all(|r| !r.violation));
        assert!(rows.windows(2).all(|w| (w[0].n, w[0].s, w[0].m) < (w[1].n, w[1].s, w[1].m)));
    }

    #[test]
    fn sweep_spec_validation() {
        assert!(SweepSpec::new(1..=3, 10, 10).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 4..=3;
        assert!(SweepSpec::new(empty, 10, 10).is_err());
        assert!(SweepSpec::new(2..=3, 0, 10).is_err());
    }

    #[test]
    fn chudnovsky_examples() {
        let r = chudnovsky_report(&sample_points(2, 4, fp(), 1).unwrap()).unwrap();
        assert_eq!((r.ratio.clone(), r.k.clone(), r.within_k), (ratio(3, 2), BigInt::from(2), true));
        for n in 1..=3 {
            let r = chudnovsky_report(&sample_points(n, 1, fp(), 1).unwrap()).unwrap();
            assert_eq!(r.ratio, ratio(1, 1));
        }
        let r = chudnovsky_report(&sample_points(2, 2, fp(), 1).unwrap()).unwrap();
        assert_eq!((r.ratio.clone(), r.k.clone(), r.within_k), (ratio(1, 1), BigInt::from(1), true));
    }

    #[test]
    fn grid_preserves_order() {
        let cells: Vec<GridCell> = (1..=4)
            .map(|s| GridCell { n: 2, s, m: 2, seed: 1 })
            .collect();
        let reports = run_grid(&cells, fp());
        let ss: Vec<BigInt> = reports.iter().map(|r| r.as_ref().unwrap().instance.s().clone()).collect();
        assert_eq!(ss, (1..=4).map(BigInt::from).collect::<Vec<_>>());
    }
}
