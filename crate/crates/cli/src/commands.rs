//! The four subcommands. Each returns the artifact text and whether its checks passed.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::anyhow;
use serde::Serialize;
use sg_core::backlund::{verify_homogeneity, BacklundTable};
use sg_core::currents::{
    compute_s1, compute_s2, current_series, decompose_s1, divergence_onshell, verify_current_degrees, CurrentPair,
};
use sg_core::jet_algebra::Expr;
use sg_core::renorm_counting::{build_ledger, Ambiguity, LedgerComponent, LedgerReport};
use sg_core::wavefront::{enumerate_and_verify, EdgeRule, SweepReport};

use crate::cache::{Cache, CachedCurrent};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExprFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Degrees,
    Conservation,
    Oracle,
    All,
}

/// Failure classes, each mapped to its own exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable, unwritable or corrupt cache.
    Environment(anyhow::Error),
    /// A result that contradicts an identity the engine guarantees by construction.
    Invariant(anyhow::Error),
}

pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

fn invariant(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Invariant(e.into())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(invariant)?;
    s.push('\n');
    Ok(s)
}

fn latex_document(lines: &[(String, String)]) -> String {
    let mut out = String::from("\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n\\begin{align*}\n");
    for (i, (lhs, rhs)) in lines.iter().enumerate() {
        let sep = if i + 1 < lines.len() { " \\\\" } else { "" };
        let _ = writeln!(out, "{lhs} &= {rhs}{sep}");
    }
    out.push_str("\\end{align*}\n\\end{document}\n");
    out
}

#[derive(Serialize)]
struct BacklundArtifact<'a> {
    schema_version: u32,
    max_nu: usize,
    coefficients: &'a [Expr],
}

pub fn backlund(max_nu: usize, format: ExprFormat, cache_dir: &Path) -> Result<Outcome, Failure> {
    let mut cache = Cache::open(cache_dir).map_err(Failure::Environment)?;
    let table = cache.backlund_table(max_nu).map_err(Failure::Environment)?;
    let report = verify_homogeneity(&table);
    if !report.passed() {
        return Err(invariant(anyhow!(
            "homogeneity violated: {} terms, structural {:?}",
            report.violations.len(),
            report.structural_violations
        )));
    }
    let coeffs = table.coefficients();
    let stdout = match format {
        ExprFormat::Text => coeffs
            .iter()
            .enumerate()
            .map(|(nu, a)| format!("A_{nu} = {a}\n"))
            .collect(),
        ExprFormat::Json => to_json(&BacklundArtifact {
            schema_version: REPORT_SCHEMA_VERSION,
            max_nu,
            coefficients: coeffs,
        })?,
        ExprFormat::Latex => latex_document(
            &coeffs
                .iter()
                .enumerate()
                .map(|(nu, a)| (format!("A_{{{nu}}}"), a.to_latex()))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome { stdout, passed: true })
}

#[derive(Serialize)]
struct CurrentEntry {
    #[serde(rename = "N")]
    n: usize,
    s1: Expr,
    s2: Expr,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conservation: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<CheckResult>,
}

#[derive(Serialize)]
struct CheckResult {
    passed: bool,
    detail: Vec<String>,
}

impl CheckResult {
    fn new(detail: Vec<String>) -> Self {
        Self {
            passed: detail.is_empty(),
            detail,
        }
    }
}

#[derive(Serialize)]
struct CurrentsArtifact {
    schema_version: u32,
    #[serde(rename = "max_N")]
    max_n: usize,
    check: Check,
    passed: bool,
    currents: Vec<CurrentEntry>,
}

fn load_currents(cache: &mut Cache, max_n: usize, table: &BacklundTable) -> Result<Vec<CachedCurrent>, Failure> {
    if let Some(c) = cache.currents(max_n).map_err(Failure::Environment)? {
        eprintln!("sg: cache hit for currents N = 0..{max_n}");
        return Ok(c);
    }
    let mut out = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        eprintln!("sg: computing currents N = {n}");
        out.push(CachedCurrent {
            n,
            s1: compute_s1(n, table).map_err(invariant)?,
            s2: compute_s2(n, table).map_err(invariant)?,
        });
    }
    cache.store_currents(&out).map_err(Failure::Environment)?;
    Ok(out)
}

pub fn currents(max_n: usize, check: Check, format: ExprFormat, cache_dir: &Path) -> Result<Outcome, Failure> {
    let mut cache = Cache::open(cache_dir).map_err(Failure::Environment)?;
    let table = cache.backlund_table(2 * max_n + 1).map_err(Failure::Environment)?;
    let stored = load_currents(&mut cache, max_n, &table)?;
    let wants = |c: Check| check == c || check == Check::All;

    let mut entries = Vec::with_capacity(stored.len());
    for c in stored {
        let (q1, r1) = decompose_s1(&c.s1).map_err(invariant)?;
        let pair = CurrentPair {
            n: c.n,
            coupling: table.coupling().clone(),
            s1: c.s1,
            s2: c.s2,
            q1,
            r1,
        };
        let degrees = wants(Check::Degrees).then(|| CheckResult::new(verify_current_degrees(&pair).violations));
        let conservation = if wants(Check::Conservation) {
            let div = divergence_onshell(&pair).map_err(invariant)?;
            let detail = if div.is_zero() {
                Vec::new()
            } else {
                vec![format!("divergence = {div}")]
            };
            Some(CheckResult::new(detail))
        } else {
            None
        };
        let oracle = if wants(Check::Oracle) {
            let series = current_series(pair.n, &table).map_err(invariant)?;
            let mut detail = Vec::new();
            if *series.s1.coeff(2 * pair.n) != pair.s1 {
                detail.push("s1 differs from the generating series".into());
            }
            if *series.s2.coeff(2 * pair.n) != pair.s2 {
                detail.push("s2 differs from the generating series".into());
            }
            for (which, k) in series.odd_order_violations() {
                detail.push(format!("s{which} has a nonzero coefficient at odd order {k}"));
            }
            Some(CheckResult::new(detail))
        } else {
            None
        };
        entries.push(CurrentEntry {
            n: pair.n,
            s1: pair.s1,
            s2: pair.s2,
            degrees,
            conservation,
            oracle,
        });
    }
    let passed = entries.iter().all(|e| {
        [&e.degrees, &e.conservation, &e.oracle]
            .iter()
            .all(|r| r.as_ref().is_none_or(|r| r.passed))
    });

    let stdout = match format {
        ExprFormat::Json => to_json(&CurrentsArtifact {
            schema_version: REPORT_SCHEMA_VERSION,
            max_n,
            check,
            passed,
            currents: entries,
        })?,
        ExprFormat::Text => {
            let mut out = String::new();
            for e in &entries {
                let _ = writeln!(out, "N = {}", e.n);
                let _ = writeln!(out, "  s1 = {}", e.s1);
                let _ = writeln!(out, "  s2 = {}", e.s2);
                for (name, r) in [("degrees", &e.degrees), ("conservation", &e.conservation), ("oracle", &e.oracle)] {
                    if let Some(r) = r {
                        let _ = writeln!(out, "  {name:<13} {}", if r.passed { "pass" } else { "FAIL" });
                        for d in &r.detail {
                            let _ = writeln!(out, "    {d}");
                        }
                    }
                }
            }
            let _ = writeln!(out, "result: {}", if passed { "pass" } else { "FAIL" });
            out
        }
        ExprFormat::Latex => {
            let mut lines = Vec::new();
            for e in &entries {
                lines.push((format!("s_1^{{{}}}", e.n), e.s1.to_latex()));
                lines.push((format!("s_2^{{{}}}", e.n), e.s2.to_latex()));
            }
            latex_document(&lines)
        }
    };
    Ok(Outcome { stdout, passed })
}

/// Expected component bound: `2N` for `s₂ᴺ`, `2(N−1)` for the parts of `s₁ᴺ`.
pub fn expected_bound(n: u32, component: LedgerComponent) -> Ambiguity {
    let d = match component {
        LedgerComponent::S2 => 2 * i64::from(n),
        LedgerComponent::S1 => 2 * (i64::from(n) - 1),
    };
    if d < 0 {
        Ambiguity::Unique
    } else {
        Ambiguity::DeltaDerivativesUpTo(d as u32)
    }
}

fn ambiguity_text(a: Ambiguity) -> String {
    match a {
        Ambiguity::Unique => "unique".into(),
        Ambiguity::DeltaDerivativesUpTo(d) => format!("delta derivatives up to order {d}"),
    }
}

pub fn powercount(
    n: u32,
    t: usize,
    component: LedgerComponent,
    max_p: u32,
    format: ReportFormat,
) -> Result<Outcome, Failure> {
    let report = build_ledger(n, t, component, max_p).map_err(invariant)?;
    // The bound must not move as the number of vertices grows.
    let mut passed = report.verify() && report.ambiguity_bound == expected_bound(n, component);
    for t_prev in 0..t {
        let prev = build_ledger(n, t_prev, component, max_p).map_err(invariant)?;
        passed &= prev.ambiguity_bound == report.ambiguity_bound && prev.verify();
    }
    let stdout = match format {
        ReportFormat::Json => to_json(&report)?,
        ReportFormat::Text => ledger_text(&report, passed),
    };
    Ok(Outcome { stdout, passed })
}

fn ledger_text(r: &LedgerReport, passed: bool) -> String {
    let mut out = String::new();
    let comp = match r.component {
        LedgerComponent::S2 => "s2",
        LedgerComponent::S1 => "s1",
    };
    let _ = writeln!(out, "component {comp}  N = {}  t = {}  max p = {}", r.n, r.t, r.max_p);
    let _ = writeln!(out, "degree budget      {}", r.degree_budget);
    let _ = writeln!(out, "max scaling degree {}", r.max_scaling_degree);
    let _ = writeln!(out, "ambiguity bound    {}", ambiguity_text(r.ambiguity_bound));
    let _ = writeln!(out, "term count         {}", r.term_count);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>3} {:>3} {:>5} {:>14} {:>12} {:>16} {:>4}  ambiguity",
        "l", "p", "args", "pair families", "profiles", "terms", "sd"
    );
    for e in &r.breakdown {
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>5} {:>14} {:>12} {:>16} {:>4}  {}",
            e.l,
            e.p,
            e.vertex_arguments,
            e.pair_families,
            e.derivative_profiles,
            e.term_count,
            e.max_scaling_degree,
            ambiguity_text(e.ambiguity)
        );
    }
    let _ = writeln!(out, "result: {}", if passed { "pass" } else { "FAIL" });
    out
}

pub fn wavefront(n_max: usize, window: i64, rule: EdgeRule, format: ReportFormat) -> Result<Outcome, Failure> {
    eprintln!("sg: sweeping connected graphs with up to {n_max} vertices on a {window}x{window} window");
    let report = enumerate_and_verify(n_max, window, rule);
    eprintln!("sg: checked {} configurations", report.configurations_checked);
    let passed = report.passed();
    let stdout = match format {
        ReportFormat::Json => to_json(&report)?,
        ReportFormat::Text => sweep_text(&report),
    };
    Ok(Outcome { stdout, passed })
}

fn sweep_text(r: &SweepReport) -> String {
    let mut out = String::new();
    let rule = serde_json::to_value(r.rule).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let _ = writeln!(out, "rule {rule}  n_max = {}  window = {}", r.n_max, r.window);
    let _ = writeln!(out, "configurations checked   {}", r.configurations_checked);
    let _ = writeln!(out, "all targets infeasible   {}", r.infeasible_count);
    let _ = writeln!(
        out,
        "fully coincident         {} configurations, {} counterexamples",
        r.fully_coincident.configurations, r.fully_coincident.counterexamples
    );
    let _ = writeln!(
        out,
        "separated                {} configurations, {} counterexamples",
        r.separated.configurations, r.separated.counterexamples
    );
    let _ = writeln!(out, "collapse mismatches      {}", r.collapse_mismatches.len());
    let _ = writeln!(out, "sign-flip mismatches     {}", r.sign_flip_mismatches.len());
    for c in &r.counterexamples {
        let points: Vec<String> = c.immersion.placement.iter().map(ToString::to_string).collect();
        let edges: Vec<String> = c
            .immersion
            .edges
            .iter()
            .map(|e| format!("{}-{}", e.source, e.target))
            .collect();
        let _ = writeln!(
            out,
            "counterexample {:?} feasible {:?}: points [{}] edges [{}]",
            c.class,
            c.feasible_targets,
            points.join(", "),
            edges.join(" ")
        );
    }
    let _ = writeln!(out, "result: {}", if r.passed() { "pass" } else { "FAIL" });
    out
}
