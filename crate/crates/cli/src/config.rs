//! Suite configuration files.
//!
//! ```toml
//! seed = 7
//!
//! [group]
//! cyclic = 2
//!
//! [cocycle]
//! standard = [2, 1]
//!
//! [model]
//! kind = "diag"
//! phases = ["0", "1/2"]
//!
//! [objects]
//! X = [["x0", 1.0, 0], ["x1", 0.5, 1]]
//!
//! [[checks]]
//! name = "sigma-hom"
//! objects = ["X"]
//! ```

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gkernel::graded::GradedObject;
use gkernel::group::{standard_cyclic_3cocycle, Cochain, FiniteGroup, Phase};
use gkernel::kernel::{cyclic_powers, diag_phases, NumericKernelModel};
use gkernel::linalg::CMatrix;
use gkernel::prover::ProofScript;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;
use crate::explain::CHECK_NAMES;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<(f64, f64)>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: u64,
    /// Run the built-in suite before the listed checks; defaults to true
    /// when no checks are listed.
    pub default_suite: Option<bool>,
    pub group: GroupSpec,
    pub cocycle: Option<CocycleSpec>,
    pub model: ModelSpec,
    #[serde(default)]
    pub objects: BTreeMap<String, Vec<(String, f64, usize)>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub cyclic: Option<usize>,
    /// Direct product of cyclic groups.
    pub product: Option<Vec<usize>>,
    /// Multiplication table with identity 0.
    pub table: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    /// `[n, k]` for the standard cocycle of Z_n.
    pub standard: Option<(usize, i64)>,
    /// Lines `g,h,k = p/q`; unlisted tuples are trivial.
    pub table: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    pub d: Option<usize>,
    /// `diag`: phases of the generator D, with V_g = D^g.
    pub phases: Option<Vec<String>>,
    /// `random`: angle denominator of b.
    pub b_denom: Option<i64>,
    /// `explicit`: one matrix per group element, rows of `[re, im]` pairs.
    pub v: Option<Vec<MatrixRows>>,
    /// Lines `g,h = p/q`; unlisted pairs are trivial.
    pub b: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tolerance")]
    pub numeric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { numeric: DEFAULT_TOLERANCE }
    }
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: Spanned<String>,
    #[serde(default)]
    pub objects: Vec<Spanned<String>>,
    pub tolerance: Option<f64>,
    pub expect: Option<bool>,
    /// Cochain under test: `config` or `model`.
    pub of: Option<String>,
    /// Comparison cochain for `cohomologous`: `trivial`, `config` or `model`.
    pub against: Option<String>,
    pub n: Option<u32>,
    pub lhs: Option<Spanned<String>>,
    pub rhs: Option<Spanned<String>>,
    pub script: Option<String>,
    pub mu: Option<Vec<f64>>,
}

/// A check after name resolution.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub objects: Vec<String>,
    pub tolerance: f64,
    pub expect: Option<bool>,
    pub of: Option<String>,
    pub against: Option<String>,
    pub n: Option<u32>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub script: Option<PathBuf>,
    pub mu: Option<Vec<f64>>,
}

impl Check {
    pub fn new(name: &str, objects: &[&str], tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            tolerance,
            expect: None,
            of: None,
            against: None,
            n: None,
            lhs: None,
            rhs: None,
            script: None,
            mu: None,
        }
    }
}

/// Everything a check needs, built once per run.
#[derive(Debug)]
pub struct Context {
    pub seed: u64,
    pub tolerance: f64,
    pub group: Arc<FiniteGroup>,
    pub cocycle: Option<Cochain>,
    pub model: NumericKernelModel,
    pub objects: BTreeMap<String, GradedObject>,
    pub checks: Vec<Check>,
}

/// Overrides from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

pub fn read(path: &Path) -> Result<(String, SuiteConfig), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg = parse(&text).map_err(|e| e.in_file(path))?;
    Ok((text, cfg))
}

pub fn parse(text: &str) -> Result<SuiteConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        CliError::Config { file: None, line, column, message: e.message().to_string() }
    })
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(text: &str, span: Range<usize>, message: String) -> CliError {
    let (line, column) = line_col(text, span.start);
    CliError::Config { file: None, line, column, message }
}

fn model_err(e: gkernel::Error) -> CliError {
    CliError::Usage(format!("invalid configuration: {e}"))
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        let g = match (&self.cyclic, &self.product, &self.table) {
            (Some(n), None, None) => FiniteGroup::cyclic(*n),
            (None, Some(ns), None) if !ns.is_empty() => ns.iter().try_fold(
                FiniteGroup::cyclic(1).map_err(model_err)?,
                |acc, n| FiniteGroup::cyclic(*n).map(|c| acc.direct_product(&c)),
            ),
            (None, None, Some(t)) => FiniteGroup::from_table(t.clone()),
            _ => return Err(CliError::Usage("[group] needs exactly one of cyclic, product, table".into())),
        };
        g.map_err(model_err)
    }
}

impl CocycleSpec {
    pub fn build(&self, group: &FiniteGroup) -> Result<Cochain, CliError> {
        match (&self.standard, &self.table) {
            (Some((n, k)), None) => {
                if *n != group.order() {
                    return Err(CliError::Usage(format!(
                        "standard cocycle of Z_{n} does not fit a group of order {}",
                        group.order()
                    )));
                }
                standard_cyclic_3cocycle(*n, *k).map_err(model_err)
            }
            (None, Some(t)) => Cochain::from_table_text(group, 3, t).map_err(model_err),
            _ => Err(CliError::Usage("[cocycle] needs exactly one of standard, table".into())),
        }
    }
}

impl ModelSpec {
    pub fn build(&self, group: Arc<FiniteGroup>, seed: u64) -> Result<NumericKernelModel, CliError> {
        let b = match &self.b {
            Some(t) => Cochain::from_table_text(&group, 2, t).map_err(model_err)?,
            None => Cochain::trivial(&group, 2).map_err(model_err)?,
        };
        match self.kind.as_str() {
            "trivial" => {
                let d = self.d.unwrap_or(2);
                let v = vec![gkernel::linalg::identity(d); group.order()];
                NumericKernelModel::new(group, d, v, b).map_err(model_err)
            }
            "diag" => {
                let phases = self
                    .phases
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("diag model needs phases".into()))?
                    .iter()
                    .map(|p| p.parse::<Phase>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(model_err)?;
                let v = cyclic_powers(group.order(), &diag_phases(&phases));
                NumericKernelModel::new(group, phases.len(), v, b).map_err(model_err)
            }
            "random" => {
                if self.b.is_some() {
                    return Err(CliError::Usage("random models draw their own b".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                NumericKernelModel::random(group, self.d.unwrap_or(2), self.b_denom.unwrap_or(4), &mut rng)
                    .map_err(model_err)
            }
            "explicit" => {
                let raw = self.v.as_ref().ok_or_else(|| CliError::Usage("explicit model needs v".into()))?;
                let v = raw.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
                let d = v.first().map_or(0, |m| m.nrows());
                NumericKernelModel::new(group, d, v, b).map_err(model_err)
            }
            other => Err(CliError::Usage(format!(
                "unknown model kind {other:?} (expected trivial, diag, random or explicit)"
            ))),
        }
    }
}

fn matrix(rows: &MatrixRows) -> Result<CMatrix, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage("explicit V_g must be square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1)))
}

impl SuiteConfig {
    /// Builds the group, model and objects and resolves every referenced name.
    pub fn resolve(&self, text: &str, base: &Path, ov: Overrides) -> Result<Context, CliError> {
        let seed = ov.seed.unwrap_or(self.seed);
        let tolerance = ov.tolerance.unwrap_or(self.tolerances.numeric);
        let group = Arc::new(self.group.build()?);
        let cocycle = self.cocycle.as_ref().map(|c| c.build(&group)).transpose()?;
        let model = self.model.build(group.clone(), seed)?;
        let mut objects = BTreeMap::new();
        for (name, points) in &self.objects {
            if name == "M" {
                return Err(CliError::Usage("object name M is reserved".into()));
            }
            let obj = GradedObject::new(group.clone(), points.clone())
                .map_err(|e| CliError::Usage(format!("object {name}: {e}")))?;
            objects.insert(name.clone(), obj);
        }
        let mut checks = Vec::new();
        if self.default_suite.unwrap_or(self.checks.is_empty()) {
            checks.extend(default_checks(&objects, cocycle.is_some(), tolerance));
        }
        for spec in &self.checks {
            checks.push(self.resolve_check(spec, text, base, &objects, tolerance, ov)?);
        }
        Ok(Context { seed, tolerance, group, cocycle, model, objects, checks })
    }

    fn resolve_check(
        &self,
        spec: &CheckSpec,
        text: &str,
        base: &Path,
        objects: &BTreeMap<String, GradedObject>,
        tolerance: f64,
        ov: Overrides,
    ) -> Result<Check, CliError> {
        let name = spec.name.get_ref();
        if !CHECK_NAMES.contains(&name.as_str()) {
            return Err(at(text, spec.name.span(), format!("unknown check {name:?}")));
        }
        for o in &spec.objects {
            if !objects.contains_key(o.get_ref()) {
                return Err(at(text, o.span(), format!("undeclared object {:?}", o.get_ref())));
            }
        }
        let needed = objects_needed(name);
        if spec.objects.len() != needed {
            return Err(at(
                text,
                spec.name.span(),
                format!("{name} takes {needed} object(s), got {}", spec.objects.len()),
            ));
        }
        for side in [&spec.lhs, &spec.rhs].into_iter().flatten() {
            if let Err(e) = gkernel::cuntz::parse(spec.n.unwrap_or(2), side.get_ref()) {
                let column = match e {
                    gkernel::Error::Parse { column, .. } => column,
                    _ => 1,
                };
                // skip the opening quote
                let start = side.span().start + column;
                return Err(at(text, start..start, format!("bad Cuntz expression: {e}")));
            }
        }
        let script = spec.script.as_ref().map(|s| base.join(s));
        if let Some(path) = &script {
            let body = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            ProofScript::parse(&body).map_err(|e| CliError::from(e).in_file(path))?;
        }
        Ok(Check {
            name: name.clone(),
            objects: spec.objects.iter().map(|o| o.get_ref().clone()).collect(),
            tolerance: ov.tolerance.or(spec.tolerance).unwrap_or(tolerance),
            expect: spec.expect,
            of: spec.of.clone(),
            against: spec.against.clone(),
            n: spec.n,
            lhs: spec.lhs.as_ref().map(|s| s.get_ref().clone()),
            rhs: spec.rhs.as_ref().map(|s| s.get_ref().clone()),
            script,
            mu: spec.mu.clone(),
        })
    }
}

pub fn objects_needed(name: &str) -> usize {
    match name {
        "sigma-hom" | "pvm" => 1,
        "sigma-tensor" | "intertwiners" | "functor-f" => 2,
        "pentagon-sigma" | "numeric-soundness" => 3,
        _ => 0,
    }
}

/// One check of every kind, on the declared objects in name order (cycled
/// when fewer than three are declared).
pub fn default_checks(
    objects: &BTreeMap<String, GradedObject>,
    has_cocycle: bool,
    tolerance: f64,
) -> Vec<Check> {
    let names: Vec<&str> = objects.keys().map(String::as_str).collect();
    let pick = |k: usize| -> Vec<&str> { (0..k).map(|i| names[i % names.len()]).collect() };
    let mut out = Vec::new();
    let mut c = Check::new("is-cocycle", &[], tolerance);
    c.of = Some("model".into());
    out.push(c);
    if has_cocycle {
        let mut c = Check::new("is-cocycle", &[], tolerance);
        c.of = Some("config".into());
        out.push(c);
    }
    let mut c = Check::new("cohomologous", &[], tolerance);
    c.of = Some("model".into());
    c.against = Some("trivial".into());
    c.expect = Some(true);
    out.push(c);
    out.push(Check::new("kernel-identity", &[], tolerance));
    out.push(Check::new("omega-coboundary", &[], tolerance));
    if !names.is_empty() {
        for n in &names {
            out.push(Check::new("sigma-hom", &[n], tolerance));
            out.push(Check::new("pvm", &[n], tolerance));
        }
        out.push(Check::new("sigma-tensor", &pick(2), tolerance));
        out.push(Check::new("pentagon-sigma", &pick(3), tolerance));
        out.push(Check::new("intertwiners", &pick(2), tolerance));
        out.push(Check::new("functor-f", &pick(2), tolerance));
        out.push(Check::new("numeric-soundness", &pick(3), tolerance));
    }
    out.push(Check::new("minimality", &[], tolerance));
    let mut c = Check::new("cuntz-row", &[], tolerance);
    c.n = Some(2);
    out.push(c);
    let mut c = Check::new("cuntz-equals", &[], tolerance);
    c.n = Some(2);
    c.lhs = Some("v1 v1* + v2 v2*".into());
    c.rhs = Some("1".into());
    out.push(c);
    out.push(Check::new("prove", &[], tolerance));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_columns() {
        let t = "a = 1\nbb = [\"Q\"]\n";
        assert_eq!(line_col(t, 0), (1, 1));
        assert_eq!(line_col(t, t.find('Q').unwrap() - 1), (2, 7));
    }

    #[test]
    fn explicit_and_diag_models_agree() {
        let head = "[group]\ncyclic = 2\n";
        let diag = parse(&format!("{head}[model]\nkind = \"diag\"\nphases = [\"0\", \"1/2\"]\n")).unwrap();
        let explicit = parse(&format!(
            "{head}[model]\nkind = \"explicit\"\nv = [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],\n     [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]]\n"
        ))
        .unwrap();
        let g = Arc::new(diag.group.build().unwrap());
        let a = diag.model.build(g.clone(), 0).unwrap();
        let b = explicit.model.build(g, 0).unwrap();
        for (x, y) in a.unitaries().iter().zip(b.unitaries()) {
            assert!(gkernel::linalg::op_norm(&(x - y)) < 1e-15);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse("[group]\ncyclic = 2\n[model]\nkind = 3\n").unwrap_err();
        assert!(matches!(err, CliError::Config { line: 4, .. }), "{err}");
    }

    #[test]
    fn groups() {
        let g = GroupSpec { product: Some(vec![2, 2]), ..Default::default() }.build().unwrap();
        assert_eq!(g.order(), 4);
        assert!(GroupSpec::default().build().is_err());
    }
}
