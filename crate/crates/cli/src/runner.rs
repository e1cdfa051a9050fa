//! Executes resolved checks. Checks are independent and run in parallel;
//! results come back in configuration order.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use gkernel::cuntz::{parse as parse_cuntz, row_unitary_check, RowVerdict};
use gkernel::graded::{hom_basis, hom_dimension, GradedObject};
use gkernel::group::{coboundary, cohomologous, first_cocycle_violation, Cochain};
use gkernel::kernel::{omega_against_coboundary, MinimalityOptions};
use gkernel::prover::numeric::{numeric_soundness, Soundness};
use gkernel::prover::{run_script, ProofScript, PENTAGON, RULES};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{Check, Context};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub params: Value,
    pub passed: bool,
    pub residual: Option<f64>,
    pub verdict: String,
    pub details: Value,
}

impl CheckRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "residual": self.residual,
            "verdict": self.verdict,
            "details": self.details,
        })
    }
}

struct Outcome {
    passed: bool,
    residual: Option<f64>,
    verdict: String,
    details: Value,
}

impl Outcome {
    fn numeric(residual: f64, tol: f64, details: Value) -> Self {
        let passed = residual <= tol;
        let verdict = if passed { format!("{residual:.3e} <= {tol:e}") } else { format!("{residual:.3e} > {tol:e}") };
        Outcome { passed, residual: Some(residual), verdict, details }
    }

    fn verdict(passed: bool, verdict: impl Into<String>, details: Value) -> Self {
        Outcome { passed, residual: None, verdict: verdict.into(), details }
    }
}

type Res<T> = std::result::Result<T, String>;

fn params(check: &Check) -> Value {
    let mut m = Map::new();
    if !check.objects.is_empty() {
        m.insert("objects".into(), json!(check.objects));
    }
    m.insert("tolerance".into(), json!(check.tolerance));
    let mut opt = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    opt("expect", check.expect.map(Value::from));
    opt("of", check.of.clone().map(Value::from));
    opt("against", check.against.clone().map(Value::from));
    opt("n", check.n.map(Value::from));
    opt("lhs", check.lhs.clone().map(Value::from));
    opt("rhs", check.rhs.clone().map(Value::from));
    opt("mu", check.mu.clone().map(Value::from));
    if check.name == "prove" {
        let script = check.script.as_ref().and_then(|p| p.file_name());
        let label = script.map_or("builtin:pentagon".to_string(), |f| f.to_string_lossy().into_owned());
        m.insert("script".into(), Value::from(label));
    }
    Value::Object(m)
}

fn obj<'a>(ctx: &'a Context, check: &Check, i: usize) -> Res<&'a GradedObject> {
    let name = &check.objects[i];
    ctx.objects.get(name).ok_or_else(|| format!("undeclared object {name:?}"))
}

fn cochain<'a>(ctx: &'a Context, which: Option<&str>) -> Res<&'a Cochain> {
    match which {
        Some("model") => Ok(ctx.model.omega()),
        Some("config") => ctx.cocycle.as_ref().ok_or_else(|| "no [cocycle] in the configuration".to_string()),
        None => Ok(ctx.cocycle.as_ref().unwrap_or(ctx.model.omega())),
        Some(other) => Err(format!("unknown cochain source {other:?}")),
    }
}

fn e2s(e: gkernel::Error) -> String {
    e.to_string()
}

fn evaluate(ctx: &Context, check: &Check) -> Res<Outcome> {
    let tol = check.tolerance;
    let expect = check.expect.unwrap_or(true);
    Ok(match check.name.as_str() {
        "is-cocycle" => {
            let c = cochain(ctx, check.of.as_deref())?;
            let violation = first_cocycle_violation(&ctx.group, c);
            let holds = violation.is_none();
            let verdict = match violation {
                None => "cocycle".to_string(),
                Some(q) => format!("fails at {q:?}"),
            };
            Outcome::verdict(holds == expect, verdict, json!({ "violation": violation }))
        }
        "cohomologous" => {
            let c1 = cochain(ctx, check.of.as_deref())?;
            let trivial = Cochain::trivial(&ctx.group, 3).map_err(e2s)?;
            let c2 = match check.against.as_deref().unwrap_or("trivial") {
                "trivial" => &trivial,
                other => cochain(ctx, Some(other))?,
            };
            match cohomologous(&ctx.group, c1, c2).map_err(e2s)? {
                Some(b) => {
                    let verified = coboundary(&ctx.group, &b).map_err(e2s)? == c1.div(c2).map_err(e2s)?;
                    Outcome::verdict(
                        expect && verified,
                        "cohomologous",
                        json!({ "witness": b.to_table_text(), "witness_verified": verified }),
                    )
                }
                None => Outcome::verdict(!expect, "not cohomologous", json!({ "witness": null })),
            }
        }
        "kernel-identity" => {
            let worst = ctx.model.kernel_identity_residuals().into_iter().fold(([0; 3], 0.0), |a, b| {
                if b.1 > a.1 {
                    b
                } else {
                    a
                }
            });
            let composition = ctx.model.alpha_composition_residual();
            Outcome::numeric(
                worst.1.max(composition),
                tol,
                json!({ "worst_triple": worst.0, "identity": worst.1, "composition": composition }),
            )
        }
        "omega-coboundary" => {
            let (db, measured) = omega_against_coboundary(&ctx.model).map_err(e2s)?;
            let equal = db == measured;
            Outcome::verdict(
                equal == expect,
                if equal { "omega = db" } else { "omega != db" },
                json!({ "omega": measured.to_table_text(), "trivial": measured.is_trivial() }),
            )
        }
        "sigma-hom" => {
            let r = ctx.model.verify_sigma_hom(obj(ctx, check, 0)?).map_err(e2s)?;
            Outcome::numeric(r, tol, json!({}))
        }
        "sigma-tensor" => {
            let r = ctx.model.verify_sigma_tensor(obj(ctx, check, 0)?, obj(ctx, check, 1)?).map_err(e2s)?;
            Outcome::numeric(r, tol, json!({}))
        }
        "pentagon-sigma" => {
            let (x, y, z) = (obj(ctx, check, 0)?, obj(ctx, check, 1)?, obj(ctx, check, 2)?);
            let r = ctx.model.verify_pentagon_sigma(x, y, z).map_err(e2s)?;
            Outcome::numeric(r, tol, json!({}))
        }
        "intertwiners" => {
            let (x, y) = (obj(ctx, check, 0)?, obj(ctx, check, 1)?);
            let basis = ctx.model.intertwiners(x, y).map_err(e2s)?;
            let mut r: f64 = 0.0;
            for t in &basis {
                r = r.max(ctx.model.intertwiner_residual(x, y, t).map_err(e2s)?);
            }
            Outcome::numeric(r, tol, json!({ "dimension": basis.len(), "hom_dimension": hom_dimension(x, y) }))
        }
        "functor-f" => {
            let (x, y) = (obj(ctx, check, 0)?, obj(ctx, check, 1)?);
            let basis = hom_basis(x, y).map_err(e2s)?;
            let mut r: f64 = 0.0;
            let mut injective = true;
            for t in &basis {
                let img = ctx.model.functor_f_sigma(t).map_err(e2s)?;
                r = r.max(img.residual);
                injective &= img.injective;
            }
            let idim = ctx.model.intertwiner_dim(x, y).map_err(e2s)?;
            let mut out = Outcome::numeric(
                r,
                tol,
                json!({
                    "hom_dimension": basis.len(),
                    "intertwiner_dimension": idim,
                    "injective": injective,
                    "full": basis.len() == idim,
                }),
            );
            if !injective {
                out.passed = false;
                out.verdict = "F is not injective on Hom".into();
            }
            out
        }
        "pvm" => {
            let r = obj(ctx, check, 0)?.pvm().defect();
            Outcome::numeric(r, tol, json!({}))
        }
        "minimality" => {
            let n = ctx.group.order();
            let mu = check.mu.clone().unwrap_or_else(|| vec![1.0; n]);
            let opts = MinimalityOptions { seed: ctx.seed, ..MinimalityOptions::default() };
            let rep = ctx.model.minimality_report(&mu, &opts).map_err(e2s)?;
            let min_dim = rep.condition_i.iter().map(|p| p.intertwiner_dim).min();
            let verdict = if rep.minimal { "minimal" } else { "not minimal" };
            let mut passed = rep.conditions_agree;
            if let Some(e) = check.expect {
                passed &= rep.minimal == e;
            }
            Outcome::verdict(
                passed,
                verdict,
                json!({
                    "support": rep.support,
                    "exhaustive": rep.exhaustive,
                    "condition_i": rep.minimal_i,
                    "condition_ii": rep.minimal_ii,
                    "conditions_agree": rep.conditions_agree,
                    "pairs_i": rep.condition_i.len(),
                    "pairs_ii": rep.condition_ii.len(),
                    "min_pair_intertwiner_dim": min_dim,
                    "f_not_full": rep.f_not_full(),
                    "not_full_pairs": rep.not_full_pairs,
                }),
            )
        }
        "cuntz-row" => {
            let n = check.n.unwrap_or(2);
            let v = row_unitary_check(n).map_err(e2s)?;
            let verdict = match v {
                RowVerdict::Pass => "unitary row".to_string(),
                RowVerdict::EntryFails { i, j } => format!("(U*U)_{{{i},{j}}} is wrong"),
                RowVerdict::SumFails => "sum of v_i v_i* is not 1".to_string(),
            };
            Outcome::verdict(v.passed() == expect, verdict, json!({}))
        }
        "cuntz-equals" => {
            let n = check.n.unwrap_or(2);
            let lhs = parse_cuntz(n, check.lhs.as_deref().unwrap_or("1")).map_err(e2s)?;
            let rhs = parse_cuntz(n, check.rhs.as_deref().unwrap_or("1")).map_err(e2s)?;
            let eq = lhs.equals(&rhs).map_err(e2s)?;
            Outcome::verdict(
                eq == expect,
                if eq { "equal" } else { "not equal" },
                json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
            )
        }
        "prove" => {
            let text = match &check.script {
                Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
                None => PENTAGON.to_string(),
            };
            let script = ProofScript::parse(&text).map_err(e2s)?;
            let run = run_script(&script);
            let proved = run.verdict.is_proved();
            Outcome::verdict(
                proved == expect,
                run.verdict.to_string(),
                json!({ "steps": script.steps.len(), "trace_length": run.trace.len() }),
            )
        }
        "numeric-soundness" => {
            let mut objects = BTreeMap::new();
            for (i, var) in ["X", "Y", "Z"].iter().enumerate() {
                objects.insert(var.to_string(), obj(ctx, check, i)?.clone());
            }
            let mut per_rule = Map::new();
            let mut worst: f64 = 0.0;
            let mut symbolic = Vec::new();
            for rule in RULES {
                match numeric_soundness(rule, &ctx.model, &objects).map_err(e2s)? {
                    Soundness::Residual(r) => {
                        worst = worst.max(r);
                        per_rule.insert(rule.to_string(), json!(r));
                    }
                    Soundness::SymbolicOnly => {
                        symbolic.push(*rule);
                        per_rule.insert(rule.to_string(), json!("symbolic-only"));
                    }
                }
            }
            Outcome::numeric(worst, tol, json!({ "rules": per_rule, "symbolic_only": symbolic }))
        }
        other => return Err(format!("unknown check {other:?}")),
    })
}

pub fn run_check(ctx: &Context, check: &Check) -> CheckRecord {
    let out = evaluate(ctx, check).unwrap_or_else(|e| Outcome::verdict(false, format!("error: {e}"), json!({})));
    CheckRecord {
        name: check.name.clone(),
        params: params(check),
        passed: out.passed,
        residual: out.residual,
        verdict: out.verdict,
        details: out.details,
    }
}

/// Runs every check; `threads = None` uses the global pool.
pub fn run_all(ctx: &Context, threads: Option<usize>) -> Result<Vec<(CheckRecord, Duration)>, CliError> {
    let work = || {
        ctx.checks
            .par_iter()
            .map(|c| {
                let t0 = Instant::now();
                let r = run_check(ctx, c);
                (r, t0.elapsed())
            })
            .collect()
    };
    match threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(work))
        }
    }
}
