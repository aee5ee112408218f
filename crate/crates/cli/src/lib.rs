//! Library half of the command-line front end: configuration types and the
//! verb runners. The binary in main.rs is a thin argument-parsing wrapper,
//! so every report path is exercisable in tests.

use serde::Serialize;
use splq_core::builders::{
    build_classical, build_osp22_q, build_spl21, build_spl_n1, effective_parameter_rank,
};
use splq_core::docs::{load_custom_table, MatrixDoc};
use splq_core::osp12::{build_osp12_rep, casimir_value, osp12_checks};
use splq_core::param::Param;
use splq_core::qes::{
    canonical_monomials, certify_qes, enveloping_monomials, random_qes_operator, span_dimension,
};
use splq_core::rational::Rat;
use splq_core::rep::{build_osp22_rep, invariance_check, verify_relations, QValue};
use splq_core::rewrite::{check_overlaps, normalize};
use splq_core::scalar::Scalar;
use splq_core::table::StructureTable;
use splq_core::text::{check_indices, parse_expression};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algebra {
    Spl,
    Spl21,
    Osp22,
    Osp12,
    Custom,
}

impl FromStr for Algebra {
    type Err = String;
    fn from_str(s: &str) -> Result<Algebra, String> {
        match s {
            "spl" => Ok(Algebra::Spl),
            "spl21" => Ok(Algebra::Spl21),
            "osp22" => Ok(Algebra::Osp22),
            "osp12" => Ok(Algebra::Osp12),
            "custom" => Ok(Algebra::Custom),
            other => Err(format!("unknown algebra {other:?}")),
        }
    }
}

/// A fully parsed run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: Algebra,
    pub n_rank: Option<u8>,
    pub params: Vec<(String, Rat)>,
    pub table_path: Option<String>,
    pub symbolic: bool,
    pub rep_degree: Option<usize>,
    pub q: Option<Rat>,
    pub qes_degree: Option<usize>,
    pub seed: Option<u64>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            algebra: Algebra::Spl,
            n_rank: None,
            params: Vec::new(),
            table_path: None,
            symbolic: false,
            rep_degree: None,
            q: None,
            qes_degree: None,
            seed: None,
            format: Format::Text,
        }
    }
}

/// Exit status semantics: 0 pass, 1 check failures, 2 usage or config error.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

pub type RunResult = Result<Outcome, String>;

fn usage(msg: impl Into<String>) -> RunResult {
    Err(msg.into())
}

fn parse_param_assignment(s: &str) -> Result<(String, Rat), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("--param expects name=a/b, got {s:?}"))?;
    let v = Rat::from_str(value.trim()).map_err(|e| e.to_string())?;
    Ok((name.trim().to_string(), v))
}

pub fn parse_params(raw: &[String]) -> Result<Vec<(String, Rat)>, String> {
    raw.iter().map(|s| parse_param_assignment(s)).collect()
}

fn lookup(params: &[(String, Rat)], name: &str) -> Option<Rat> {
    params
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v.clone())
}

fn scalar_for(params: &[(String, Rat)], symbolic: bool, p: Param) -> Result<Scalar, String> {
    if symbolic {
        return Ok(Scalar::param(p));
    }
    match lookup(params, &p.name()) {
        Some(v) if v.is_zero() => Err(format!("parameter {p} must be nonzero")),
        Some(v) => Ok(Scalar::from_rat(v)),
        None => Ok(Scalar::param(p)),
    }
}

fn osp22_table_at(q: Option<&Rat>) -> Result<StructureTable, String> {
    let table = build_osp22_q();
    match q {
        Some(v) => {
            if v.is_zero() {
                return Err("q must be nonzero".into());
            }
            let mut map = BTreeMap::new();
            map.insert(Param::Q, (v.clone(), splq_core::scalar::Monomial::one()));
            Ok(table.substitute_monomials(&map, format!("osp(2,2)_q at q = {v}")))
        }
        None => Ok(table),
    }
}

/// Builds the structure table selected by the configuration.
pub fn build_table(config: &RunConfig) -> Result<StructureTable, String> {
    match config.algebra {
        Algebra::Spl => {
            let n = config
                .n_rank
                .ok_or_else(|| "--N is required for --algebra spl".to_string())?;
            let mut q = BTreeMap::new();
            if !config.symbolic {
                for (name, v) in &config.params {
                    let p = Param::parse(name)
                        .ok_or_else(|| format!("unknown parameter {name:?}"))?;
                    let (a, b) = match p {
                        Param::QPair(a, b) => (a, b),
                        _ => return Err(format!("{name} is not a q_ab parameter")),
                    };
                    q.insert((a, b), Scalar::from_rat(v.clone()));
                }
            }
            build_spl_n1(n, &q).map_err(|e| e.to_string())
        }
        Algebra::Spl21 => {
            let p = scalar_for(&config.params, config.symbolic, Param::P)?;
            let r = scalar_for(&config.params, config.symbolic, Param::R)?;
            let s = scalar_for(&config.params, config.symbolic, Param::S)?;
            build_spl21(&p, &r, &s).map_err(|e| e.to_string())
        }
        Algebra::Osp22 => {
            let q = if config.symbolic {
                None
            } else {
                lookup(&config.params, "q")
            };
            osp22_table_at(q.as_ref())
        }
        Algebra::Osp12 => Err(
            "osp12 carries no structure table here; use verify-rep for its checks".into(),
        ),
        Algebra::Custom => {
            let path = config
                .table_path
                .as_ref()
                .ok_or_else(|| "--table is required for --algebra custom".to_string())?;
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            load_custom_table(&text).map_err(|e| e.to_string())
        }
    }
}

#[derive(Serialize)]
struct NormalOrderDoc {
    input: String,
    algebra: String,
    normal_form: String,
    rewrite_steps: usize,
}

#[derive(Serialize)]
struct RepVerifyDoc {
    algebra: String,
    n: usize,
    q: String,
    rules_checked: usize,
    failures: Vec<String>,
    invariance_failures: Vec<String>,
    dimension: usize,
    dimension_note: String,
}

#[derive(Serialize)]
struct Osp12Doc {
    algebra: String,
    n: usize,
    q: String,
    failures: Vec<String>,
    dimension: usize,
    casimir: String,
}

#[derive(Serialize)]
struct CasimirDoc {
    n: usize,
    q: String,
    value: String,
}

#[derive(Serialize)]
struct RankDoc {
    #[serde(rename = "N")]
    n: u8,
    rank: usize,
}

#[derive(Serialize)]
struct QesDoc {
    n: usize,
    q: String,
    degree: usize,
    monomials: usize,
    all_certified: bool,
    span_dimension_degree_one: usize,
    random_operator: Option<QesRandomDoc>,
}

#[derive(Serialize)]
struct QesRandomDoc {
    seed: u64,
    expression: String,
    certified: bool,
    matrix: MatrixDoc,
}

fn render<T: Serialize>(format: Format, doc: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable"),
        Format::Text => text(),
    }
}

pub fn run_consistency(config: &RunConfig) -> RunResult {
    let table = match build_table(config) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let report = check_overlaps(&table).map_err(|e| e.to_string())?;
    let doc = report.to_doc();
    let body = render(config.format, &doc, || {
        let mut out = String::new();
        let _ = writeln!(out, "algebra: {}", doc.algebra);
        let _ = writeln!(out, "overlaps checked: {}", doc.overlaps_checked);
        for f in &doc.failures {
            let _ = writeln!(out, "FAIL {}: residual {}", f.triple, f.residual);
        }
        for c in &doc.corrected_rules_used {
            let _ = writeln!(out, "corrected rule: {c}");
        }
        let _ = writeln!(
            out,
            "result: {}",
            if doc.failures.is_empty() { "pass" } else { "fail" }
        );
        out
    });
    Ok(Outcome {
        body,
        passed: report.passed(),
    })
}

pub fn run_verify_rep(config: &RunConfig) -> RunResult {
    let n = match config.rep_degree {
        Some(n) if n >= 1 => n,
        _ => return usage("--n (>= 1) is required for verify-rep"),
    };
    let qv = match &config.q {
        Some(v) if !v.is_zero() => QValue::At(v.clone()),
        Some(_) => return usage("--q must be nonzero"),
        None => QValue::Symbolic,
    };
    let qtext = match &qv {
        QValue::Symbolic => "symbolic".to_string(),
        QValue::At(v) => v.to_string(),
    };
    match config.algebra {
        Algebra::Osp22 => {
            let rep = build_osp22_rep(n, qv.clone()).map_err(|e| e.to_string())?;
            let table = match &qv {
                QValue::Symbolic => build_osp22_q(),
                QValue::At(v) => osp22_table_at(Some(v))?,
            };
            let report = verify_relations(&rep, &table).map_err(|e| e.to_string())?;
            let inv = invariance_check(&rep);
            let passed = report.passed() && inv.passed();
            let doc = RepVerifyDoc {
                algebra: "osp22".into(),
                n,
                q: qtext,
                rules_checked: report.rules_checked,
                failures: report.failures.iter().map(|f| f.rule.clone()).collect(),
                invariance_failures: inv.failures.clone(),
                dimension: report.dimension,
                dimension_note: report.dimension_note.clone(),
            };
            let body = render(config.format, &doc, || {
                let mut out = String::new();
                let _ = writeln!(out, "algebra: osp22, n = {n}, q = {}", doc.q);
                let _ = writeln!(out, "rules checked: {}", doc.rules_checked);
                for f in &doc.failures {
                    let _ = writeln!(out, "FAIL rule {f}");
                }
                for f in &doc.invariance_failures {
                    let _ = writeln!(out, "FAIL invariance {f}");
                }
                let _ = writeln!(out, "dimension: {} ({})", doc.dimension, doc.dimension_note);
                let _ = writeln!(out, "result: {}", if passed { "pass" } else { "fail" });
                out
            });
            Ok(Outcome { body, passed })
        }
        Algebra::Osp12 => {
            let rep = build_osp12_rep(n, qv.clone()).map_err(|e| e.to_string())?;
            let report = osp12_checks(&rep);
            let casimir = casimir_value(n, &qv).map_err(|e| e.to_string())?;
            let passed = report.passed();
            let doc = Osp12Doc {
                algebra: "osp12".into(),
                n,
                q: qtext,
                failures: report.failures.clone(),
                dimension: report.dimension,
                casimir: casimir.to_string(),
            };
            let body = render(config.format, &doc, || {
                let mut out = String::new();
                let _ = writeln!(out, "algebra: osp12, n = {n}, q = {}", doc.q);
                for f in &doc.failures {
                    let _ = writeln!(out, "FAIL {f}");
                }
                let _ = writeln!(out, "dimension: {}", doc.dimension);
                let _ = writeln!(out, "casimir value: {}", doc.casimir);
                let _ = writeln!(out, "result: {}", if passed { "pass" } else { "fail" });
                out
            });
            Ok(Outcome { body, passed })
        }
        _ => usage("verify-rep supports --algebra osp22 or osp12"),
    }
}

pub fn run_normal_order(config: &RunConfig, expr_text: &str) -> RunResult {
    let table = match build_table(config) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let expr = match parse_expression(expr_text) {
        Ok(e) => e,
        Err(e) => return usage(e.to_string()),
    };
    if let Err(e) = check_indices(&expr, table.n) {
        return usage(e.to_string());
    }
    let (nf, trace) = normalize(&expr, &table).map_err(|e| e.to_string())?;
    let doc = NormalOrderDoc {
        input: expr_text.to_string(),
        algebra: table.name.clone(),
        normal_form: nf.to_string(),
        rewrite_steps: trace.steps.len(),
    };
    let body = render(config.format, &doc, || {
        let mut out = String::new();
        let _ = writeln!(out, "algebra: {}", doc.algebra);
        let _ = writeln!(out, "input: {}", doc.input);
        let _ = writeln!(out, "normal form: {}", doc.normal_form);
        let _ = writeln!(out, "rewrite steps: {}", doc.rewrite_steps);
        out
    });
    Ok(Outcome { body, passed: true })
}

pub fn run_casimir(config: &RunConfig) -> RunResult {
    let n = match config.rep_degree {
        Some(n) => n,
        None => return usage("--n is required for casimir"),
    };
    let qv = match &config.q {
        Some(v) => QValue::At(v.clone()),
        None => QValue::Symbolic,
    };
    let value = match casimir_value(n, &qv) {
        Ok(v) => v,
        Err(e) => return usage(e.to_string()),
    };
    let doc = CasimirDoc {
        n,
        q: match &qv {
            QValue::Symbolic => "symbolic".into(),
            QValue::At(v) => v.to_string(),
        },
        value: value.to_string(),
    };
    let body = render(config.format, &doc, || {
        format!("casimir(n = {}, q = {}) = {}\n", doc.n, doc.q, doc.value)
    });
    Ok(Outcome { body, passed: true })
}

pub fn run_rank(config: &RunConfig) -> RunResult {
    let n = match config.n_rank {
        Some(n) => n,
        None => return usage("--N is required for rank"),
    };
    let rank = match effective_parameter_rank(n) {
        Ok(r) => r,
        Err(e) => return usage(e.to_string()),
    };
    let doc = RankDoc { n, rank };
    let body = render(config.format, &doc, || {
        format!("effective parameter rank(N = {n}) = {rank}\n")
    });
    Ok(Outcome { body, passed: true })
}

pub fn run_qes_enumerate(config: &RunConfig) -> RunResult {
    let n = match config.rep_degree {
        Some(n) if n >= 1 => n,
        _ => return usage("--n (>= 1) is required for qes-enumerate"),
    };
    let q = match &config.q {
        Some(v) if !v.is_zero() => v.clone(),
        _ => return usage("--q (nonzero rational) is required for qes-enumerate"),
    };
    let degree = match config.qes_degree {
        Some(d) if d >= 1 => d,
        _ => return usage("--degree (>= 1) is required for qes-enumerate"),
    };
    let table = build_osp22_q();
    let rep = build_osp22_rep(n, QValue::At(q.clone())).map_err(|e| e.to_string())?;
    let ops = enveloping_monomials(&rep, &table, degree).map_err(|e| e.to_string())?;
    let certify = |m: &splq_core::matrix::Matrix| {
        certify_qes(
            &rep.space,
            m,
            rep.space.upper.degree,
            rep.space.lower.degree,
        )
    };
    let all_certified = ops.iter().all(|op| certify(&op.matrix));
    let degree_one = enveloping_monomials(&rep, &table, 1).map_err(|e| e.to_string())?;
    let span1 = span_dimension(&degree_one[1..]);
    let random_operator = match config.seed {
        None => None,
        Some(seed) => {
            let op = random_qes_operator(&rep, &table, degree, seed).map_err(|e| e.to_string())?;
            let certified = certify(&op.matrix);
            Some(QesRandomDoc {
                seed,
                expression: op.expr.to_string(),
                certified,
                matrix: MatrixDoc::from_matrix(&op.matrix),
            })
        }
    };
    let monomials = canonical_monomials(&table, degree).len();
    let passed = all_certified
        && random_operator
            .as_ref()
            .map(|r| r.certified)
            .unwrap_or(true);
    let doc = QesDoc {
        n,
        q: q.to_string(),
        degree,
        monomials,
        all_certified,
        span_dimension_degree_one: span1,
        random_operator,
    };
    let body = render(config.format, &doc, || {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}, q = {}, degree = {}", doc.n, doc.q, doc.degree);
        let _ = writeln!(out, "monomials: {}", doc.monomials);
        let _ = writeln!(out, "all certified: {}", doc.all_certified);
        let _ = writeln!(
            out,
            "span dimension of degree-1 operators: {}",
            doc.span_dimension_degree_one
        );
        if let Some(r) = &doc.random_operator {
            let _ = writeln!(out, "random operator (seed {}): {}", r.seed, r.expression);
            let _ = writeln!(out, "random operator certified: {}", r.certified);
        }
        let _ = writeln!(out, "result: {}", if passed { "pass" } else { "fail" });
        out
    });
    Ok(Outcome { body, passed })
}

/// The classical spl(2,1) table, exposed for tests.
pub fn classical_table() -> StructureTable {
    build_classical(2).expect("classical table")
}
