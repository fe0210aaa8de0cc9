//! JSON front end for the `artin` binary.
//!
//! A problem document names the variables, fixes a working order and carries the series a
//! command needs. Every command produces a report with the input echoed back, the outputs in
//! canonical series form, the precision they are guaranteed to and a list of checked
//! invariants. Reports are byte-for-byte deterministic unless timestamps are requested.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::artin::{
    artin_approximate_with, corollary1_lift, extract_approximate, reduce_system,
    solve_recursive_with, SolveOptions,
};
use crate::error::{Error, ErrorKind};
use crate::ift::{newton_solve_traced, verify_system, AnalyticSystem};
use crate::linalg::{det_and_adjugate, jacobian, rank_lower_bound, RankMarker, SeriesMatrix};
use crate::series::Series;
use crate::series::{rational_to_string, SeriesText};
use crate::tougeron::{
    check_approximate_with, parametric_solution_with, subordinate_params_with, verify_parametric,
    SubordinationModulus,
};
use crate::weierstrass::{
    divide_by_regular, euclid_pseudo_divide, regular_order_in, regularize, weierstrass_prepare,
    XnPolynomial, DEFAULT_MAX_SHEAR,
};

pub const SCHEMA: &str = "weierstrass-artin/v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Divide,
    Prepare,
    Regularize,
    PseudoDiv,
    Jacobian,
    Adjugate,
    Rank,
    Newton,
    CheckApprox,
    Parametric,
    Subordinate,
    Extract,
    Reduce,
    Solve,
    Approximate,
    Lift,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Divide => "divide",
            Command::Prepare => "prepare",
            Command::Regularize => "regularize",
            Command::PseudoDiv => "pseudo-div",
            Command::Jacobian => "jacobian",
            Command::Adjugate => "adjugate",
            Command::Rank => "rank",
            Command::Newton => "newton",
            Command::CheckApprox => "check-approx",
            Command::Parametric => "parametric",
            Command::Subordinate => "subordinate",
            Command::Extract => "extract",
            Command::Reduce => "reduce",
            Command::Solve => "solve",
            Command::Approximate => "approximate",
            Command::Lift => "lift",
            Command::Verify => "verify",
        }
    }

    fn needs_order(self) -> bool {
        !matches!(
            self,
            Command::Divide
                | Command::Prepare
                | Command::Regularize
                | Command::PseudoDiv
                | Command::Jacobian
                | Command::Adjugate
                | Command::Rank
                | Command::Extract
        )
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "artin",
    version,
    about = "Weierstrass division and Artin approximation over Q"
)]
pub struct Args {
    pub command: Command,
    /// Problem document, or `-` for standard input.
    pub document: PathBuf,
    /// Working order `c`; overrides the document.
    #[arg(long)]
    pub order: Option<u32>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest shear coefficient tried during regularization.
    #[arg(long, default_value_t = DEFAULT_MAX_SHEAR)]
    pub max_shear: u32,
    /// Fail with a precision error unless inputs and outputs reach the working order.
    #[arg(long)]
    pub strict_precision: bool,
    /// Record the generation time, which makes reports non-reproducible.
    #[arg(long)]
    pub timestamps: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub order: Option<u32>,
    pub max_shear: u32,
    pub strict_precision: bool,
    pub timestamps: bool,
}

impl From<&Args> for Flags {
    fn from(a: &Args) -> Self {
        Flags {
            order: a.order,
            max_shear: a.max_shear,
            strict_precision: a.strict_precision,
            timestamps: a.timestamps,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ring {
    pub x: Vec<String>,
    #[serde(default)]
    pub y: Vec<String>,
    /// Names for parameters of parametric and strong solutions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operands {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dividend: Option<Series>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Series>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Series>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Series>>>,
}

impl Operands {
    fn is_empty(&self) -> bool {
        *self == Operands::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema: String,
    pub ring: Ring,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    /// Equations in the ring `(x, y)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub system: Vec<Series>,
    /// Formal solution `ybar(x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<Series>>,
    /// Approximate candidate `y0(x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<Vec<Series>>,
    /// Truncated solution to be lifted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Series>>,
    /// Operands of the ring `x` for the low-level commands.
    #[serde(default, skip_serializing_if = "Operands::is_empty")]
    pub operands: Operands,
}

/// Parse and validate a document.
pub fn parse_document(text: &str) -> Result<ProblemDocument, String> {
    let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    doc.validate()?;
    Ok(doc)
}

impl ProblemDocument {
    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA {
            return Err(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            ));
        }
        let mut seen = BTreeSet::new();
        for name in self.ring.x.iter().chain(&self.ring.y).chain(&self.ring.t) {
            if name.is_empty() {
                return Err("empty variable name".into());
            }
            if !seen.insert(name.as_str()) {
                return Err(format!("duplicate variable name {name:?}"));
            }
        }
        let nx = self.ring.x.len();
        let nxy = nx + self.ring.y.len();
        for (i, f) in self.system.iter().enumerate() {
            if f.nvars() != nxy {
                return Err(format!(
                    "system[{i}] has {} variables, ring (x, y) has {nxy}",
                    f.nvars()
                ));
            }
        }
        for (role, block) in self.solution_blocks() {
            if block.len() != self.ring.y.len() {
                return Err(format!(
                    "{role} has {} components, expected one per y variable ({})",
                    block.len(),
                    self.ring.y.len()
                ));
            }
            for (i, s) in block.iter().enumerate() {
                if s.nvars() != nx {
                    return Err(format!("{role}[{i}] must be a series in the x variables"));
                }
            }
        }
        let ops = &self.operands;
        let singles = [
            ("dividend", ops.dividend.as_ref()),
            ("divisor", ops.divisor.as_ref()),
            ("series", ops.series.as_ref()),
        ];
        for (role, s) in singles {
            if let Some(s) = s {
                if s.nvars() != nx {
                    return Err(format!(
                        "operand {role} must be a series in the x variables"
                    ));
                }
            }
        }
        for s in ops.family.iter().flatten() {
            if s.nvars() != nx {
                return Err("operand family must consist of series in the x variables".into());
            }
        }
        if let Some(rows) = &ops.matrix {
            let cols = rows.first().map(|r| r.len()).unwrap_or(0);
            for row in rows {
                if row.len() != cols {
                    return Err("operand matrix has ragged rows".into());
                }
                if row.iter().any(|s| s.nvars() != nx) {
                    return Err("operand matrix entries must be series in the x variables".into());
                }
            }
        }
        Ok(())
    }

    fn solution_blocks(&self) -> Vec<(&'static str, &Vec<Series>)> {
        [
            ("solution", self.solution.as_ref()),
            ("candidate", self.candidate.as_ref()),
            ("target", self.target.as_ref()),
        ]
        .into_iter()
        .filter_map(|(r, b)| b.map(|b| (r, b)))
        .collect()
    }

    fn all_series(&self) -> Vec<&Series> {
        let ops = &self.operands;
        let mut out: Vec<&Series> = self.system.iter().collect();
        for (_, b) in self.solution_blocks() {
            out.extend(b);
        }
        out.extend(ops.dividend.iter().chain(&ops.divisor).chain(&ops.series));
        out.extend(ops.family.iter().flatten());
        out.extend(ops.matrix.iter().flatten().flatten());
        out
    }
}

/// Exit code and, unless the input was unusable, a report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Value>,
    pub message: Option<String>,
}

fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Precondition => EXIT_PRECONDITION,
        ErrorKind::Precision => EXIT_PRECISION,
    }
}

enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type CmdResult = std::result::Result<Output, Failure>;

#[derive(Default)]
struct Output {
    fields: Map<String, Value>,
    checks: Vec<(String, bool)>,
    guaranteed: Option<u32>,
}

impl Output {
    fn put(&mut self, key: &str, v: Value) {
        self.fields.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, pass: bool) {
        self.checks.push((name.to_string(), pass));
    }

    fn guarantee(&mut self, prec: u32) {
        self.guaranteed = Some(self.guaranteed.map_or(prec, |g| g.min(prec)));
    }
}

/// Run `cmd` on a validated document.
pub fn run(cmd: Command, doc: &ProblemDocument, flags: &Flags) -> Outcome {
    let order = flags.order.or(doc.order);
    if cmd.needs_order() && order.is_none() {
        return usage(format!(
            "{} needs a working order (--order or \"order\")",
            cmd.name()
        ));
    }
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("command".into(), json!(cmd.name()));
    report.insert("order".into(), json!(order));
    report.insert("max_shear".into(), json!(flags.max_shear));
    report.insert("strict_precision".into(), json!(flags.strict_precision));
    report.insert(
        "input".into(),
        serde_json::to_value(doc).expect("document serializes"),
    );
    if flags.timestamps {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.insert("generated_at".into(), json!(secs));
    }

    let strict_order = order.filter(|_| flags.strict_precision);
    let result = match strict_order {
        Some(c) => match doc.all_series().iter().map(|s| s.prec()).min() {
            Some(p) if p < c => Err(Failure::Math(Error::PrecisionShortfall {
                step: "input document".into(),
                needed: c,
                available: p,
            })),
            _ => dispatch(cmd, doc, order, flags),
        },
        None => dispatch(cmd, doc, order, flags),
    };

    let (code, status) = match result {
        Err(Failure::Usage(msg)) => return usage(msg),
        Err(Failure::Math(e)) if e.kind() == ErrorKind::Usage => return usage(e.to_string()),
        Err(Failure::Math(e)) => {
            let code = exit_code(e.kind());
            report.insert(
                "error".into(),
                json!({ "kind": kind_name(e.kind()), "message": e.to_string() }),
            );
            (code, "failed")
        }
        Ok(out) => {
            let short = match (strict_order, out.guaranteed) {
                (Some(c), Some(g)) => g < c,
                _ => false,
            };
            let all_pass = out.checks.iter().all(|(_, p)| *p);
            report.insert("output".into(), Value::Object(out.fields));
            report.insert("guaranteed_prec".into(), json!(out.guaranteed));
            let checks: Vec<Value> = out
                .checks
                .iter()
                .map(|(n, p)| json!({ "name": n, "pass": p }))
                .collect();
            report.insert("checks".into(), Value::Array(checks));
            if !all_pass {
                (EXIT_PRECONDITION, "failed")
            } else if short {
                report.insert(
                    "error".into(),
                    json!({
                        "kind": "precision",
                        "message": "output precision is below the working order",
                    }),
                );
                (EXIT_PRECISION, "failed")
            } else {
                (EXIT_OK, "ok")
            }
        }
    };
    report.insert("status".into(), json!(status));
    report.insert("exit_code".into(), json!(code));
    Outcome {
        code,
        report: Some(Value::Object(report)),
        message: None,
    }
}

fn usage(msg: String) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        report: None,
        message: Some(msg),
    }
}

fn kind_name(k: ErrorKind) -> &'static str {
    match k {
        ErrorKind::Usage => "usage",
        ErrorKind::Precondition => "precondition",
        ErrorKind::Precision => "precision",
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> std::result::Result<&'a T, Failure> {
    v.as_ref()
        .ok_or_else(|| Failure::Usage(format!("document lacks {what}")))
}

fn system_of(doc: &ProblemDocument) -> std::result::Result<AnalyticSystem, Failure> {
    if doc.system.is_empty() {
        return Err(Failure::Usage("document lacks a system".into()));
    }
    Ok(AnalyticSystem::new(
        doc.ring.x.len(),
        doc.ring.y.len(),
        doc.system.clone(),
    )?)
}

/// Candidate if present, else the formal solution.
fn point_of(doc: &ProblemDocument) -> Option<&Vec<Series>> {
    doc.candidate.as_ref().or(doc.solution.as_ref())
}

fn dispatch(cmd: Command, doc: &ProblemDocument, order: Option<u32>, flags: &Flags) -> CmdResult {
    let c = order.unwrap_or(0);
    let x = &doc.ring.x;
    let xy: Vec<String> = x.iter().chain(&doc.ring.y).cloned().collect();
    let opts = SolveOptions {
        max_shear: flags.max_shear,
        ..SolveOptions::default()
    };
    let mut out = Output::default();
    match cmd {
        Command::Divide => {
            let h = need(&doc.operands.dividend, "operands.dividend")?;
            let w = need(&doc.operands.divisor, "operands.divisor")?;
            let var = last_var(x)?;
            let div = divide_by_regular(h, w, var)?;
            let g = div.guaranteed_prec();
            let lhs = h - &(&(&div.quotient * w) + &div.remainder);
            out.put("var", json!(x[var]));
            out.put("degree", json!(div.degree));
            out.put("quotient", emit(&div.quotient, x));
            out.put("remainder", emit(&div.remainder, x));
            out.check("h = q w + r", lhs.truncate(g).is_zero());
            out.check(
                "remainder degree below k",
                div.remainder.degree_in(var).is_none_or(|d| d < div.degree),
            );
            let again = divide_by_regular(&div.remainder, w, var)?;
            out.check(
                "remainder is reduced",
                again.quotient.is_zero() && again.remainder.agrees_with(&div.remainder),
            );
            out.guarantee(g);
        }
        Command::Prepare => {
            let f = need(&doc.operands.series, "operands.series")?;
            let prep = weierstrass_prepare(f)?;
            let w = prep.poly.to_series();
            let g = prep.unit.prec().min(prep.poly.prec());
            out.put("var", json!(x[prep.poly.var()]));
            out.put("degree", json!(prep.poly.degree()));
            out.put("unit", emit(&prep.unit, x));
            out.put("distinguished", emit(&w, x));
            out.put("coefficients", emit_list(prep.poly.coeffs(), x));
            out.check("unit is invertible", prep.unit.is_unit());
            out.check(
                "coefficients vanish at the origin",
                prep.poly
                    .coeffs()
                    .iter()
                    .all(|a| a.constant_term() == zero()),
            );
            out.check("unit w = f", (&(&prep.unit * &w) - f).truncate(g).is_zero());
            out.guarantee(g);
        }
        Command::Regularize => {
            let fs = match (&doc.operands.family, &doc.operands.series) {
                (Some(fs), _) => fs.clone(),
                (None, Some(f)) => vec![f.clone()],
                _ => return Err(Failure::Usage("document lacks operands.family".into())),
            };
            let reg = regularize(&fs, flags.max_shear)?;
            out.put("var", json!(x[reg.var]));
            out.put("shear", json!(reg.shear));
            out.put("matrix", json!(reg.matrix));
            out.put("inverse", json!(reg.inverse));
            out.put("orders", json!(reg.orders));
            out.put("transformed", emit_list(&reg.transformed, x));
            let regular = reg
                .transformed
                .iter()
                .zip(&reg.orders)
                .all(|(t, &k)| regular_order_in(t, reg.var).finite() == Some(k));
            out.check("transformed series are regular", regular);
            out.check(
                "undo inverts apply",
                fs.iter().all(|f| reg.undo(&reg.apply(f)) == *f),
            );
            out.guarantee(min_prec(&reg.transformed));
        }
        Command::PseudoDiv => {
            let h = need(&doc.operands.dividend, "operands.dividend")?;
            let h1 = need(&doc.operands.divisor, "operands.divisor")?;
            let var = last_var(x)?;
            let hp = XnPolynomial::from_polynomial_series(h, var);
            let h1p = XnPolynomial::from_polynomial_series(h1, var);
            let pd = euclid_pseudo_divide(&hp, &h1p)?;
            out.put("var", json!(x[var]));
            out.put("power", json!(pd.power));
            out.put("quotient", emit(&pd.quotient.to_series(), x));
            out.put("remainder", emit(&pd.remainder.to_series(), x));
            out.check("c0^p h = q h1 + r", pd.verify(&hp, &h1p));
            out.check(
                "remainder degree below divisor degree",
                match (pd.remainder.degree(), h1p.degree()) {
                    (None, _) => true,
                    (Some(r), Some(d)) => r < d,
                    (Some(_), None) => false,
                },
            );
            out.guarantee(pd.remainder.prec().min(pd.quotient.prec()));
        }
        Command::Jacobian => {
            let f = system_of(doc)?;
            let jac = jacobian(f.fs(), &f.y_vars())?;
            out.put("matrix", emit_matrix(&jac, &xy));
            if let Some(y) = point_of(doc) {
                let at = jac.compose(&point_args(x.len(), y, jac.prec()))?;
                out.put("at_point", emit_matrix(&at, x));
            }
            out.guarantee(jac.prec());
        }
        Command::Adjugate => {
            let a = matrix_of(doc)?;
            let (delta, adj) = det_and_adjugate(&a)?;
            let m = a.rows();
            let di = SeriesMatrix::identity(m, a.nvars(), delta.prec()).scale(&delta);
            let ma = a.mul(&adj)?;
            let am = adj.mul(&a)?;
            out.put("determinant", emit(&delta, x));
            out.put("adjugate", emit_matrix(&adj, x));
            out.check("M A = det I", ma.agrees_with(&di));
            out.check("A M = det I", am.agrees_with(&di));
            if m > 0 {
                let det_adj = det_and_adjugate(&adj)?.0;
                out.check(
                    "det A = det^(m-1)",
                    det_adj.agrees_with(&delta.pow(m as u32 - 1)),
                );
            }
            out.guarantee(delta.prec().min(adj.prec()));
        }
        Command::Rank => {
            let a = matrix_of(doc)?;
            let cert = rank_lower_bound(&a)?;
            out.put("rank", json!(cert.rank));
            out.put("rows", json!(cert.rows));
            out.put("cols", json!(cert.cols));
            out.put("minor", emit(&cert.minor, x));
            out.put("minor_order", json!(cert.minor_order().finite()));
            out.put(
                "marker",
                json!(match cert.marker {
                    RankMarker::Exact => "exact",
                    RankMarker::AtPrecision => "at_precision",
                }),
            );
            let sub = a.submatrix(&cert.rows, &cert.cols);
            out.check(
                "certificate minor is the chosen determinant",
                cert.rank == 0 || det_and_adjugate(&sub)?.0.agrees_with(&cert.minor),
            );
            out.check(
                "certificate minor is nonzero",
                cert.rank == 0 || !cert.minor.is_zero(),
            );
            out.guarantee(a.prec());
        }
        Command::Newton => {
            let f = system_of(doc)?;
            let trace = newton_solve_traced(&f, c)?;
            out.put("solution", emit_list(&trace.solution, x));
            out.put("residual_orders", json!(trace.residual_orders));
            let rep = verify_system(&f, &trace.solution, c)?;
            out.check("residual vanishes mod m^c", rep.pass);
            out.guarantee(min_prec(&trace.solution).min(rep.known_prec));
        }
        Command::CheckApprox => {
            let f = system_of(doc)?;
            let y0 = need(&doc.candidate, "a candidate")?;
            let cert = check_approximate_with(&f, y0, flags.max_shear)?;
            out.put("certified", json!(cert.certified));
            out.put("delta", emit(&cert.delta, x));
            out.put("g_residuals", emit_list(&cert.g_residuals, x));
            out.check("approximate solution", cert.certified);
            out.guarantee(min_prec(&cert.g_residuals));
        }
        Command::Parametric => {
            let f = system_of(doc)?;
            let y0 = need(&doc.candidate, "a candidate")?;
            let cert = check_approximate_with(&f, y0, flags.max_shear)?;
            let ps = parametric_solution_with(&cert, &f, c, flags.max_shear)?;
            let names = param_names(doc, x, ps.y.first().map_or(0, |y| y.nvars() - x.len()));
            out.put("params", json!(names[x.len()..]));
            out.put("delta", emit(&cert.delta, x));
            out.put("family", emit_list(&ps.y, &names));
            out.check(
                "f(x, y(x, t)) = 0 mod m^c",
                verify_parametric(&ps, &f, c).is_ok(),
            );
            out.guarantee(ps.prec);
        }
        Command::Subordinate => {
            let f = system_of(doc)?;
            let y0 = need(&doc.candidate, "a candidate")?;
            let ybar = need(&doc.solution, "a solution")?;
            let cert = check_approximate_with(&f, y0, flags.max_shear)?;
            let ps = parametric_solution_with(&cert, &f, c, flags.max_shear)?;
            let t = subordinate_params_with(
                &ps,
                &f,
                ybar,
                c,
                SubordinationModulus::Strict,
                flags.max_shear,
            )?;
            let names = param_names(doc, x, ps.y.first().map_or(0, |y| y.nvars() - x.len()));
            out.put("params", json!(names[x.len()..]));
            out.put("family", emit_list(&ps.y, &names));
            out.put("specialization", emit_list(&t, x));
            let back = ps.specialize(&t)?;
            out.check(
                "specialization vanishes at 0",
                t.iter().all(|s| s.constant_term() == zero()),
            );
            out.check("y(x, t(x)) = ybar mod m^c", agree_all(&back, ybar, c));
            out.guarantee(min_prec(&t).min(ps.prec));
        }
        Command::Extract => {
            let f = system_of(doc)?;
            let ybar = need(&doc.solution, "a solution")?;
            let ext = extract_approximate(&f, ybar)?;
            out.put("var", json!(x[ext.var]));
            out.put("p", json!(ext.p));
            out.put("abar", emit(&ext.abar.to_series(), x));
            out.put("unit", emit(&ext.unit, x));
            out.put("vbar", emit_list(&ext.vbar, x));
            out.put(
                "constants",
                json!(ext
                    .constants
                    .iter()
                    .map(rational_to_string)
                    .collect::<Vec<_>>()),
            );
            out.put("tbar", emit_list(&ext.tbar, x));
            out.put("ubar", emit_list(&ext.ubar, x));
            let cert = check_approximate_with(&f, &ext.vbar, flags.max_shear)?;
            out.check("vbar is an approximate solution", cert.certified);
            out.guarantee(min_prec(&ext.vbar));
        }
        Command::Reduce => {
            let f = system_of(doc)?;
            let ybar = need(&doc.solution, "a solution")?;
            let ext = extract_approximate(&f, ybar)?;
            let constants = base_constants(&ext.vbar, ext.var, ext.p);
            let red = reduce_system(&f, &constants, ext.p, c)?;
            let mut names: Vec<String> = x[..x.len() - 1].to_vec();
            for nu in 0..doc.ring.y.len() {
                for j in 0..=red.degree {
                    names.push(format!("V_{}_{}", doc.ring.y[nu], j));
                }
            }
            out.put("var", json!(x[ext.var]));
            out.put("p", json!(red.p));
            out.put("degree", json!(red.degree));
            out.put("components", json!(red.components));
            out.put("unknowns", json!(names[x.len() - 1..]));
            out.put(
                "constants",
                json!(red
                    .constants
                    .iter()
                    .map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            );
            out.put("system", emit_list(red.system.fs(), &names));
            out.put("mx_condition", json!(red.mx_condition));
            out.check("mx condition at the base family", red.mx_condition);
            out.check(
                "2pm components",
                red.components == 2 * red.p as usize * f.m(),
            );
            out.guarantee(red.system.prec());
        }
        Command::Solve => {
            let f = system_of(doc)?;
            let ybar = need(&doc.solution, "a solution")?;
            let sol = solve_recursive_with(&f, ybar, c, opts)?;
            let names = param_names(doc, x, sol.nparams);
            let special = sol.specialize(&sol.params)?;
            let truncated: Vec<Series> = special.iter().map(|s| s.truncate(c)).collect();
            out.put("nparams", json!(sol.nparams));
            out.put("params", json!(names[x.len()..]));
            out.put("family", emit_list(&sol.y, &names));
            out.put("specialization", emit_list(&sol.params, x));
            out.put("solution", emit_list(&truncated, x));
            out.put("agreement", json!(sol.agreement));
            let rep = verify_system(&f, &truncated, c)?;
            out.put("residual_orders", json!(orders_json(&rep.orders)));
            out.check("f(x, y(x, P(x))) = 0 mod m^c", rep.pass);
            out.check(
                "y(x, P(x)) = ybar to the agreed order",
                agree_all(&special, ybar, c),
            );
            out.guarantee(sol.prec);
        }
        Command::Approximate => {
            let f = system_of(doc)?;
            let ybar = need(&doc.solution, "a solution")?;
            let y = artin_approximate_with(&f, ybar, c, opts)?;
            let rep = verify_system(&f, &y, c)?;
            out.put("solution", emit_list(&y, x));
            out.put("residual_orders", json!(orders_json(&rep.orders)));
            out.check("f(x, y) = 0 mod m^c", rep.pass);
            out.check("y = ybar to the agreed order", agree_all(&y, ybar, c));
            out.guarantee(c.min(rep.known_prec));
        }
        Command::Lift => {
            let f = system_of(doc)?;
            let target = need(&doc.target, "a target")?;
            let y = corollary1_lift(&f, target, c)?;
            let rep = verify_system(&f, &y, c)?;
            out.put("solution", emit_list(&y, x));
            out.put("residual_orders", json!(orders_json(&rep.orders)));
            out.check("f(x, y) = 0 mod m^c", rep.pass);
            out.check(
                "lift extends the target",
                y.iter().zip(target).all(|(a, b)| a.agrees_with(b)),
            );
            out.guarantee(min_prec(&y).min(rep.known_prec));
        }
        Command::Verify => {
            let f = system_of(doc)?;
            let y =
                point_of(doc).ok_or_else(|| Failure::Usage("document lacks a solution".into()))?;
            let rep = verify_system(&f, y, c)?;
            out.put("residual_orders", json!(orders_json(&rep.orders)));
            out.put("known_prec", json!(rep.known_prec));
            out.check("f(x, y) = 0 mod m^c", rep.pass);
            out.guarantee(rep.known_prec);
        }
    }
    Ok(out)
}

fn zero() -> BigRational {
    BigRational::from_integer(0.into())
}

fn last_var(x: &[String]) -> std::result::Result<usize, Failure> {
    x.len()
        .checked_sub(1)
        .ok_or_else(|| Failure::Usage("ring has no x variables".into()))
}

fn min_prec(items: &[Series]) -> u32 {
    crate::series::min_prec(items).unwrap_or(u32::MAX)
}

fn orders_json(orders: &[crate::series::Order]) -> Value {
    json!(orders.iter().map(|o| o.finite()).collect::<Vec<_>>())
}

fn agree_all(a: &[Series], b: &[Series], c: u32) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(u, v)| {
            let k = c.min(v.prec()).min(u.prec());
            u.truncate(k) == v.truncate(k)
        })
}

/// `(x_1, ..., x_n, y_1(x), ...)` as arguments for a series in `(x, y)`.
fn point_args(n: usize, y: &[Series], prec: u32) -> Vec<Series> {
    let mut args: Vec<Series> = (0..n).map(|i| Series::var(n, i, prec)).collect();
    args.extend(y.iter().cloned());
    args
}

/// `operands.matrix`, or the Jacobian in `y` at the candidate or solution.
fn matrix_of(doc: &ProblemDocument) -> std::result::Result<SeriesMatrix, Failure> {
    if let Some(rows) = &doc.operands.matrix {
        return Ok(SeriesMatrix::from_rows(rows.clone())?);
    }
    let f = system_of(doc)?;
    let y = point_of(doc)
        .ok_or_else(|| Failure::Usage("document lacks operands.matrix or a solution".into()))?;
    let jac = jacobian(f.fs(), &f.y_vars())?;
    Ok(jac.compose(&point_args(f.n(), y, jac.prec()))?)
}

/// Constant parts of the `x_n`-coefficients `0..=2p` of each `vbar_nu`.
fn base_constants(vbar: &[Series], var: usize, p: u32) -> Vec<Vec<BigRational>> {
    vbar.iter()
        .map(|v| {
            (0..=2 * p)
                .map(|j| v.coefficient_in(var, j).constant_term())
                .collect()
        })
        .collect()
}

/// `x` names followed by the declared parameter names, or `t1, t2, ...`.
fn param_names(doc: &ProblemDocument, x: &[String], k: usize) -> Vec<String> {
    let mut names = x.to_vec();
    if doc.ring.t.len() == k {
        names.extend(doc.ring.t.iter().cloned());
    } else {
        names.extend((1..=k).map(|i| format!("t{i}")));
    }
    names
}

/// Canonical form plus a readable rendering under `text`.
pub fn emit(s: &Series, names: &[String]) -> Value {
    let mut v = serde_json::to_value(SeriesText::from(s)).expect("series serializes");
    if let Value::Object(m) = &mut v {
        m.insert("text".into(), json!(render(s, names)));
    }
    v
}

fn emit_list(items: &[Series], names: &[String]) -> Value {
    Value::Array(items.iter().map(|s| emit(s, names)).collect())
}

fn emit_matrix(a: &SeriesMatrix, names: &[String]) -> Value {
    Value::Array((0..a.rows()).map(|i| emit_list(a.row(i), names)).collect())
}

/// `x + x^2 - 1/2*x1*y + O(8)`.
pub fn render(s: &Series, names: &[String]) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let neg = c < &zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = e
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| {
                let name = names
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| format!("z{}", v + 1));
                if k == 1 {
                    name
                } else {
                    format!("{name}^{k}")
                }
            })
            .collect();
        let one = a == BigRational::from_integer(1.into());
        if mono.is_empty() {
            out.push_str(&a.to_string());
        } else if one {
            out.push_str(&mono.join("*"));
        } else {
            out.push_str(&format!("{a}*{}", mono.join("*")));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(&format!(" + O({})", s.prec()));
    out
}

/// Pretty-printed report with a trailing newline.
pub fn format_report(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Read, run and write; returns the process exit code.
pub fn main_with(args: &Args) -> i32 {
    let text = if args.document.as_os_str() == "-" {
        let mut buf = String::new();
        match std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf) {
            Ok(_) => Ok(buf),
            Err(e) => Err(e),
        }
    } else {
        std::fs::read_to_string(&args.document)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("artin: cannot read {}: {e}", args.document.display());
            return EXIT_USAGE;
        }
    };
    let doc = match parse_document(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("artin: invalid document: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = run(args.command, &doc, &Flags::from(args));
    if let Some(msg) = &outcome.message {
        eprintln!("artin: {msg}");
    }
    if let Some(report) = &outcome.report {
        let body = format_report(report);
        match &args.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("artin: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            None => print!("{body}"),
        }
    }
    outcome.code
}
