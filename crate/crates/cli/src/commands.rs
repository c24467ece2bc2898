use std::fmt::Write as _;
use std::fs;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};

use demailly_core::bounds::{self, certificate, max_m_witness, Instance, MaxM};
use demailly_core::exactnum::RadicalComparison;
use demailly_core::interpolation::{
    alpha_of, default_degree_cap, sample_points, waldschmidt_sequence, PointSet, PrimeModulus,
};
use demailly_core::verify::{self, SweepRow, SweepSpec};
use demailly_core::{Error, Sign};

use crate::args::{AlphaArgs, DimArgs, Format, InstanceArgs, PointArgs, SequenceArgs, SweepArgs, VerifyArgs};
use crate::output::{num, opt_bool, opt_num, Report, Table, VERSION};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs the library rejected.
    Usage(String),
    /// Degree cap exceeded or a sign left undecided.
    Unresolved(String),
    /// A bound that holds for every point set failed.
    Fault(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Unresolved(_) => 2,
            CliError::Fault(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Unresolved(m) | CliError::Fault(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::Indeterminate { .. } => CliError::Unresolved(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished report plus an optional error to raise after printing it, so
/// faults still come with their evidence.
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self { report, failure: None }
    }
}

fn instance_inputs(inst: &Instance) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), num(inst.n()));
    m.insert("s".into(), num(inst.s()));
    m.insert("m".into(), num(inst.m()));
    m
}

fn make_instance(a: &InstanceArgs) -> CliResult<Instance> {
    Ok(Instance::new(a.n, a.s.clone(), a.m.clone())?)
}

pub fn bounds_cmd(a: &InstanceArgs) -> CliResult<Outcome> {
    let inst = make_instance(a)?;
    let rep = bounds::bound_report(&inst);
    let mut r = Report::new("bounds");
    r.inputs = instance_inputs(&inst);
    r.results.insert("k".into(), num(&rep.k));
    r.results.insert("epsilon_is_zero".into(), Value::Bool(rep.epsilon_is_zero));
    r.results.insert("delta".into(), num(&rep.delta));
    r.results.insert("k_bound".into(), num(&rep.k_bound));
    let b = rep.part_b.as_ref();
    r.results.insert("condition_holds".into(), opt_bool(b.map(|b| b.condition_holds)));
    r.results.insert("sufficient_holds".into(), opt_bool(b.map(|b| b.sufficient_holds)));
    r.results.insert(
        "factor_results".into(),
        Value::Array(
            b.map(|b| {
                b.factor_results
                    .iter()
                    .map(|&(i, ok)| json!({ "i": num(i), "holds": ok }))
                    .collect()
            })
            .unwrap_or_default(),
        ),
    );
    r.results.insert(
        "mss_comparison".into(),
        b.map_or(Value::Null, |b| Value::String(b.mss_comparison.as_str().into())),
    );
    let chain_ok = b.map(|b| !b.condition_holds || (b.sufficient_holds && rep.factors_ok()));
    r.verdicts.insert("delta_consistent".into(), Value::Bool(bounds::delta_consistent(&inst)));
    r.verdicts.insert("chain_ok".into(), opt_bool(chain_ok));

    let mut t = String::new();
    let _ = writeln!(t, "instance {inst}");
    let _ = writeln!(t, "k = {}{}", rep.k, if rep.epsilon_is_zero { " (s is a perfect n-th power)" } else { "" });
    let _ = writeln!(t, "delta = {}", rep.delta);
    let _ = writeln!(t, "k_bound = {}", rep.k_bound);
    match b {
        Some(b) => {
            let _ = writeln!(t, "condition = {}", b.condition_holds);
            let _ = writeln!(t, "sufficient = {}", b.sufficient_holds);
            for &(i, ok) in &b.factor_results {
                let _ = writeln!(t, "factor[{i}] = {ok}");
            }
            let _ = writeln!(t, "mss = {}", b.mss_comparison);
        }
        None => {
            let _ = writeln!(t, "condition = n/a (n = 1)");
        }
    }
    r.text = t;

    let failure = (chain_ok == Some(false))
        .then(|| CliError::Fault(format!("condition holds but the inequality chain fails at {inst}")));
    Ok(Outcome { report: r, failure })
}

fn comparison_json(c: &RadicalComparison) -> Value {
    json!({
        "a": num(&c.a),
        "b": num(&c.b),
        "lhs": num(&c.lhs),
        "rhs": num(&c.rhs),
        "ordering": format!("{:?}", c.ordering).to_lowercase(),
    })
}

pub fn max_m_cmd(a: &DimArgs) -> CliResult<Outcome> {
    if a.s < BigInt::one() {
        return Err(CliError::Usage(format!("s must be >= 1, got {}", a.s)));
    }
    let res = bounds::max_m(a.n, &a.s)?;
    let mut r = Report::new("max-m");
    r.inputs.insert("n".into(), num(a.n));
    r.inputs.insert("s".into(), num(&a.s));
    let kind = match &res {
        MaxM::None => "none",
        MaxM::Unbounded => "unbounded",
        MaxM::Bounded(_) => "bounded",
    };
    r.results.insert("kind".into(), Value::String(kind.into()));
    r.results.insert(
        "max_m".into(),
        match &res {
            MaxM::Bounded(m) => num(m),
            _ => Value::Null,
        },
    );
    if let Some((at, past)) = max_m_witness(a.n, &a.s)? {
        r.results.insert(
            "witness".into(),
            json!({ "at_max": comparison_json(&at), "past_max": comparison_json(&past) }),
        );
    }
    r.text = format!("{res}\n");
    Ok(r.into())
}

fn load_points(p: &PointArgs) -> CliResult<(PointSet, Map<String, Value>)> {
    let mut inputs = Map::new();
    let points = match &p.points_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let set = PointSet::parse_text(&text)?;
            if p.n.is_some_and(|n| n != set.n()) || p.s.is_some_and(|s| s != set.len()) {
                return Err(CliError::Usage(format!(
                    "--n/--s disagree with {} (n = {}, s = {})",
                    path.display(),
                    set.n(),
                    set.len()
                )));
            }
            inputs.insert("points_file".into(), Value::String(path.display().to_string()));
            set
        }
        None => {
            let (Some(n), Some(s)) = (p.n, p.s) else {
                return Err(CliError::Usage("either --points-file or both --n and --s are required".into()));
            };
            if s < 1 {
                return Err(CliError::Usage("s must be >= 1".into()));
            }
            let modulus = PrimeModulus::new(p.prime)?;
            inputs.insert("seed".into(), num(p.seed));
            sample_points(n, s, modulus, p.seed)?
        }
    };
    inputs.insert("n".into(), num(points.n()));
    inputs.insert("s".into(), num(points.len()));
    inputs.insert("prime".into(), num(points.modulus()));
    Ok((points, inputs))
}

pub fn alpha_cmd(a: &AlphaArgs) -> CliResult<Outcome> {
    let (points, mut inputs) = load_points(&a.points)?;
    if a.m < 1 {
        return Err(CliError::Usage("m must be >= 1".into()));
    }
    let cap = match a.cap {
        Some(c) => c,
        None => default_degree_cap(points.n(), points.len(), a.m)?,
    };
    inputs.insert("m".into(), num(a.m));
    inputs.insert("cap".into(), num(cap));
    let res = alpha_of(&points, a.m, cap)?;
    let mut r = Report::new("alpha");
    r.inputs = inputs;
    r.results.insert("alpha".into(), num(res.alpha));
    r.results.insert(
        "ranks".into(),
        Value::Array(
            res.ranks
                .iter()
                .map(|d| json!({ "degree": num(d.degree), "rank": num(d.rank), "cols": num(d.cols) }))
                .collect(),
        ),
    );
    r.text = format!("{}\n", res.alpha);
    Ok(r.into())
}

pub fn sequence_cmd(a: &SequenceArgs) -> CliResult<Outcome> {
    let (points, mut inputs) = load_points(&a.points)?;
    inputs.insert("max_mult".into(), num(a.max_mult));
    inputs.insert("cap".into(), opt_num(a.cap));
    let seq = waldschmidt_sequence(&points, a.max_mult, a.cap)?;
    let min_ratio = seq.iter().map(|e| e.ratio.clone()).min().expect("max_mult >= 1");
    let mut r = Report::new("sequence");
    r.inputs = inputs;
    r.results.insert(
        "entries".into(),
        Value::Array(
            seq.iter()
                .map(|e| json!({ "m": num(e.m), "alpha": num(e.alpha), "ratio": num(&e.ratio) }))
                .collect(),
        ),
    );
    r.results.insert("min_ratio".into(), num(&min_ratio));
    let mut t = String::from("m alpha ratio\n");
    for e in &seq {
        let _ = writeln!(t, "{} {} {}", e.m, e.alpha, e.ratio);
    }
    let _ = writeln!(t, "min ratio = {min_ratio}");
    r.text = t;
    r.table = Some(Table {
        header: vec!["m", "alpha", "ratio"],
        rows: seq
            .iter()
            .map(|e| vec![e.m.to_string(), e.alpha.to_string(), e.ratio.to_string()])
            .collect(),
    });
    Ok(r.into())
}

pub fn verify_cmd(a: &VerifyArgs) -> CliResult<Outcome> {
    let (points, mut inputs) = load_points(&a.points)?;
    if a.m < 1 {
        return Err(CliError::Usage("m must be >= 1".into()));
    }
    inputs.insert("m".into(), num(a.m));
    let rep = verify::run_on_points(&points, a.m, a.points.seed)?;
    let mut r = Report::new("verify");
    r.results.insert("alpha".into(), num(rep.alpha));
    r.results.insert("k".into(), num(&rep.k));
    r.results.insert("delta".into(), num(&rep.delta));
    r.results.insert("k_bound".into(), opt_num(rep.k_bound.as_ref()));
    r.results.insert("condition_holds".into(), opt_bool(rep.condition_holds));
    r.results.insert("demailly_ratio".into(), num(&rep.demailly_ratio));
    r.verdicts.insert("thm_a_ok".into(), Value::Bool(rep.verdicts.thm_a_ok));
    r.verdicts.insert("thm_b_ok".into(), opt_bool(rep.verdicts.thm_b_ok));
    r.verdicts.insert("ratio_le_k".into(), Value::Bool(rep.verdicts.ratio_le_k));

    let mut t = String::new();
    let _ = writeln!(t, "instance {} seed={} prime={}", rep.instance, rep.seed, rep.prime);
    let _ = writeln!(t, "alpha = {}", rep.alpha);
    let _ = writeln!(t, "delta = {} (alpha <= delta: {})", rep.delta, rep.verdicts.thm_a_ok);
    match (&rep.k_bound, rep.verdicts.thm_b_ok) {
        (Some(kb), Some(ok)) => {
            let _ = writeln!(t, "k_bound = {kb} (alpha <= k_bound: {ok})");
        }
        (Some(kb), None) => {
            let _ = writeln!(t, "k_bound = {kb} (condition fails; not claimed)");
        }
        _ => {}
    }
    let _ = writeln!(t, "(alpha+n-1)/(m+n-1) = {} (<= k: {})", rep.demailly_ratio, rep.verdicts.ratio_le_k);

    let mut failure = rep
        .is_fault()
        .then(|| CliError::Fault(format!("computed alpha exceeds a proven bound at {}", rep.instance)));

    if let Some(max_mult) = a.invariants {
        inputs.insert("invariants".into(), num(max_mult));
        let inv = verify::invariant_suite(&points, max_mult)?;
        let mut checks = Map::new();
        for (kind, ok) in &inv.checks {
            checks.insert(kind.as_str().into(), Value::Bool(*ok));
            let _ = writeln!(t, "invariant {kind}: {}", if *ok { "pass" } else { "FAIL" });
        }
        r.results.insert(
            "invariant_alphas".into(),
            Value::Array(inv.alphas.iter().map(|&x| num(x)).collect()),
        );
        r.verdicts.insert("invariants".into(), Value::Object(checks));
        if let Some(ce) = &inv.first_counterexample {
            r.results.insert("counterexample".into(), Value::String(format!("{}: {}", ce.kind, ce.detail)));
            failure.get_or_insert(CliError::Fault(format!("invariant {} failed: {}", ce.kind, ce.detail)));
        }
    }
    r.inputs = inputs;
    r.text = t;
    Ok(Outcome { report: r, failure })
}

fn sign_value(s: Option<Sign>) -> Value {
    s.map_or(Value::Null, |s| Value::String(s.to_string()))
}

pub fn certificate_cmd(a: &InstanceArgs) -> CliResult<Outcome> {
    let inst = make_instance(a)?;
    let cert = certificate(&inst)?;
    let mut r = Report::new("certificate");
    r.inputs = instance_inputs(&inst);
    let expr = |e: &demailly_core::AlgebraicExpr| Value::String(e.to_string());
    let opt_expr = |e: &Option<demailly_core::AlgebraicExpr>| e.as_ref().map_or(Value::Null, expr);
    r.results.insert("k".into(), num(&cert.k));
    r.results.insert("epsilon_is_zero".into(), Value::Bool(cert.epsilon_is_zero));
    r.results.insert("A".into(), expr(&cert.a));
    r.results.insert("B".into(), expr(&cert.b));
    r.results.insert("C_list".into(), Value::Array(cert.c_list.iter().map(expr).collect()));
    r.results.insert("C_min".into(), expr(&cert.c_min));
    r.results.insert("f".into(), opt_expr(&cert.f));
    r.results.insert("g".into(), opt_expr(&cert.g));
    r.results.insert("boundary_m".into(), opt_expr(&cert.boundary_m));
    r.results.insert(
        "boundary_m_approx".into(),
        cert.boundary_m.as_ref().map_or(Value::Null, |b| num(format!("{:.12}", b.approx_f64()))),
    );
    let v = &cert.verdicts;
    r.verdicts.insert("in_domain_k_ge_2".into(), Value::Bool(cert.in_domain()));
    r.verdicts.insert("sign_A".into(), sign_value(Some(v.a)));
    r.verdicts.insert("sign_C_min".into(), sign_value(Some(v.c_min)));
    r.verdicts.insert("sign_f".into(), sign_value(v.f));
    r.verdicts.insert("sign_g".into(), sign_value(v.g));
    r.verdicts.insert("signs_as_expected".into(), Value::Bool(v.as_expected()));
    r.verdicts.insert("boundary_identity_holds".into(), opt_bool(cert.boundary_identity_holds));

    let mut t = String::new();
    let _ = writeln!(t, "instance {inst}, k = {}", cert.k);
    let _ = writeln!(t, "A = {}  [{}]", cert.a, v.a);
    let _ = writeln!(t, "B = {}", cert.b);
    for (i, c) in cert.c_list.iter().enumerate() {
        let _ = writeln!(t, "C_{i} = {c}");
    }
    let _ = writeln!(t, "C_min = {}  [{}]", cert.c_min, v.c_min);
    if let (Some(f), Some(g), Some(bm)) = (&cert.f, &cert.g, &cert.boundary_m) {
        let _ = writeln!(t, "f = {f}  [{}]", v.f.expect("present with f"));
        let _ = writeln!(t, "g = {g}  [{}]", v.g.expect("present with g"));
        let _ = writeln!(t, "boundary m = {bm} ~ {:.6}", bm.approx_f64());
        let _ = writeln!(t, "boundary identity holds = {}", cert.boundary_identity_holds.unwrap_or(false));
    }
    if !cert.in_domain() {
        let _ = writeln!(t, "note: k < 2, sign expectations are not claimed");
    }
    r.text = t;
    let failure = v
        .any_indeterminate()
        .then(|| CliError::Unresolved("a certificate sign is indeterminate at the precision cap".into()));
    Ok(Outcome { report: r, failure })
}

pub fn compare_cmd(a: &InstanceArgs) -> CliResult<Outcome> {
    let inst = make_instance(a)?;
    let class = bounds::compare_mss(&inst)?;
    let mut r = Report::new("compare");
    r.inputs = instance_inputs(&inst);
    r.results.insert("classification".into(), Value::String(class.as_str().into()));
    r.results.insert("new_condition".into(), Value::Bool(bounds::demailly_condition(&inst)?));
    r.results.insert(
        "mss_condition".into(),
        Value::Bool(matches!(class, bounds::MssComparison::Both | bounds::MssComparison::OnlyMss)),
    );
    r.text = format!("{class}\n");
    Ok(r.into())
}

pub fn chudnovsky_cmd(a: &PointArgs) -> CliResult<Outcome> {
    let (points, inputs) = load_points(a)?;
    let rep = verify::chudnovsky_report(&points)?;
    let mut r = Report::new("chudnovsky");
    r.inputs = inputs;
    r.results.insert("alpha".into(), num(rep.alpha));
    r.results.insert("k".into(), num(&rep.k));
    r.results.insert("ratio".into(), num(&rep.ratio));
    r.verdicts.insert("within_k".into(), Value::Bool(rep.within_k));
    r.text = format!(
        "alpha = {}\n(alpha+n-1)/n = {}\nk = {}\nwithin k = {}\n",
        rep.alpha, rep.ratio, rep.k, rep.within_k
    );
    Ok(r.into())
}

pub fn sample_cmd(a: &PointArgs) -> CliResult<Outcome> {
    if a.points_file.is_some() {
        return Err(CliError::Usage("sample does not take --points-file".into()));
    }
    let (points, inputs) = load_points(a)?;
    let mut r = Report::new("sample");
    r.inputs = inputs;
    r.results.insert(
        "points".into(),
        Value::Array(
            points
                .points()
                .iter()
                .map(|p| Value::Array(p.affine().iter().map(|&c| num(c)).collect()))
                .collect(),
        ),
    );
    r.text = points.to_text();
    r.table = Some(Table {
        header: vec!["index", "affine"],
        rows: points
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let coords: Vec<String> = p.affine().iter().map(u64::to_string).collect();
                vec![i.to_string(), coords.join(" ")]
            })
            .collect(),
    });
    Ok(r.into())
}

const SWEEP_HEADER: [&str; 8] = [
    "n",
    "s",
    "m",
    "condition_holds",
    "sufficient_holds",
    "factor_ok",
    "mss_class",
    "violation",
];

fn sweep_cells(row: &SweepRow) -> Vec<String> {
    vec![
        row.n.to_string(),
        row.s.to_string(),
        row.m.to_string(),
        row.condition_holds.to_string(),
        row.sufficient_holds.to_string(),
        row.factor_ok.to_string(),
        row.mss_class.as_str().to_string(),
        row.violation.to_string(),
    ]
}

fn sweep_row_json(row: &SweepRow) -> Value {
    json!({
        "n": num(row.n),
        "s": num(row.s),
        "m": num(row.m),
        "condition_holds": row.condition_holds,
        "sufficient_holds": row.sufficient_holds,
        "factor_ok": row.factor_ok,
        "mss_class": row.mss_class.as_str(),
        "violation": row.violation,
    })
}

/// Streams rows as they are produced; memory does not grow with the grid.
pub fn sweep_cmd(a: &SweepArgs, format: Format, out: &mut impl Write) -> CliResult<Option<CliError>> {
    let spec = SweepSpec::new(a.n_min..=a.n_max, a.s_max, a.m_max)?;
    let inputs = json!({
        "n_min": num(a.n_min),
        "n_max": num(a.n_max),
        "s_max": num(a.s_max),
        "m_max": num(a.m_max),
    });
    let mut first_violation: Option<SweepRow> = None;
    let mut wrote_any = false;
    match format {
        Format::Json => write!(
            out,
            "{{\"command\":\"sweep\",\"inputs\":{},\"results\":{{\"rows\":[",
            inputs
        )?,
        Format::Csv => writeln!(out, "{}", SWEEP_HEADER.join(","))?,
        Format::Text if a.rows => writeln!(out, "{}", SWEEP_HEADER.join(" "))?,
        Format::Text => {}
    }
    let summary = verify::theorem_sweep_with(&spec, |row| {
        if row.violation && first_violation.is_none() {
            first_violation = Some(row.clone());
        }
        let io = match format {
            Format::Json => {
                let sep = if wrote_any { "," } else { "" };
                wrote_any = true;
                write!(out, "{sep}\n{}", sweep_row_json(row))
            }
            Format::Csv => writeln!(out, "{}", sweep_cells(row).join(",")),
            Format::Text if a.rows => writeln!(out, "{}", sweep_cells(row).join(" ")),
            Format::Text => Ok(()),
        };
        io.map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
    })?;
    let summary_json = json!({
        "rows": num(summary.rows),
        "condition_rows": num(summary.condition_rows),
        "violations": num(summary.violations),
        "only_new": num(summary.only_new),
        "only_mss": num(summary.only_mss),
        "both": num(summary.both),
        "neither": num(summary.neither),
    });
    match format {
        Format::Json => {
            writeln!(
                out,
                "\n],\"summary\":{}}},\"verdicts\":{},\"version\":\"{}\"}}",
                summary_json,
                json!({ "no_violations": summary.violations == 0 }),
                VERSION
            )?;
        }
        Format::Csv => {}
        Format::Text => {
            writeln!(out, "rows = {}", summary.rows)?;
            writeln!(out, "condition rows = {}", summary.condition_rows)?;
            writeln!(out, "violations = {}", summary.violations)?;
            writeln!(
                out,
                "mss classes: only_new = {}, only_mss = {}, both = {}, neither = {}",
                summary.only_new, summary.only_mss, summary.both, summary.neither
            )?;
        }
    }
    Ok(first_violation.map(|row| {
        CliError::Fault(format!(
            "{} violation(s); first at n={} s={} m={}",
            summary.violations, row.n, row.s, row.m
        ))
    }))
}
