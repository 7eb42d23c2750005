//! TOML scenario files and the JSON reports produced by running them.
//!
//! ```toml
//! seed = 7
//! tasks = ["analyze", "decompose", "descent", "jump"]
//! extensions = ["as:t", "odd:x^3+x+1", ["as:t", "odd:x^3+x+1"], "insep:t"]
//!
//! [field]
//! base = "GF(2)"
//! layers = ["rat:t"]
//!
//! [algebra]
//! type = "adjoint"
//! form = ["1", "t"]
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebras::{AlgebraWithInvolution, InvolutionType};
use crate::alternator::{
    self, brute_force_s, inseparable_jump, is_direct_by_enumeration, septd_suite, verify_separable_descent,
    Anisotropy, Certificate, DescentReport, JumpReport, Provenance, SeptdReport, Verdict,
};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::fields::{BaseField, FieldTower};
use crate::forms::BilinearForm;

pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Analyze,
    Decompose,
    Descent,
    Jump,
    Septd,
    Oracle,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub base: String,
    #[serde(default)]
    pub layers: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AlgebraSpec {
    /// `M_m(F)` with the involution adjoint to the diagonal form.
    Adjoint { form: Vec<String> },
    Quaternion {
        a: String,
        c: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<String>,
    },
    Tensor { factors: Vec<AlgebraSpec> },
}

/// One extension: a single layer or a stack of layers applied in order.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ExtensionSpec {
    Layer(String),
    Composite(Vec<String>),
}

impl ExtensionSpec {
    fn layers(&self) -> Vec<String> {
        match self {
            ExtensionSpec::Layer(l) => vec![l.clone()],
            ExtensionSpec::Composite(ls) => ls.clone(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Extensions {
    One(String),
    Many(Vec<ExtensionSpec>),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub field: FieldSpec,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extensions: Option<Extensions>,
    pub tasks: Vec<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub label: String,
    pub field: FieldTower,
}

/// A parsed scenario with its field, algebra and extensions built.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub source: ScenarioFile,
    pub field: FieldTower,
    pub algebra: AlgebraWithInvolution,
    pub description: String,
    pub extensions: Vec<Extension>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    /// Run the brute-force cross-check even if the scenario does not ask for it.
    pub force_oracle: bool,
}

impl Scenario {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Scenario {
            key: path.display().to_string(),
            message: e.to_string(),
        })?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Scenario> {
        let source: ScenarioFile = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            Error::Syntax { line, column, message: e.message().trim().to_string() }
        })?;
        Scenario::build(source)
    }

    pub fn build(source: ScenarioFile) -> Result<Scenario> {
        let base = BaseField::parse(&source.field.base).map_err(|e| keyed("field.base", e))?;
        let mut field = FieldTower::finite(base);
        for (i, layer) in source.field.layers.iter().enumerate() {
            field = field.extend_parsed(layer).map_err(|e| keyed(&format!("field.layers[{i}]"), e))?;
        }
        let (algebra, description) = build_algebra(&field, &source.algebra, "algebra")?;
        let specs = match &source.extensions {
            None => Vec::new(),
            Some(Extensions::One(l)) => vec![ExtensionSpec::Layer(l.clone())],
            Some(Extensions::Many(v)) => v.clone(),
        };
        let mut extensions = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            let key = format!("extensions[{i}]");
            let mut k = field.clone();
            for layer in spec.layers() {
                k = k.extend_parsed(&layer).map_err(|e| keyed(&key, e))?;
            }
            let separable = k.is_separable_over(&field);
            for task in [Task::Descent, Task::Septd] {
                if !separable && source.tasks.contains(&task) {
                    let name = if task == Task::Descent { "descent" } else { "septd" };
                    return Err(Error::Scenario { key, message: format!("{name} requires separable layers") });
                }
            }
            extensions.push(Extension { label: spec.layers().join(", "), field: k });
        }
        if algebra.classify_type() == InvolutionType::Symplectic {
            return Err(Error::Scenario {
                key: "algebra".into(),
                message: "involution is symplectic; the alternator needs an orthogonal involution".into(),
            });
        }
        Ok(Scenario { source, field, algebra, description, extensions })
    }

    pub fn run(&self, options: RunOptions) -> Result<Report> {
        let seed = options.seed.or(self.source.seed).unwrap_or(0);
        let budget = options.budget.or(self.source.budget).unwrap_or(DEFAULT_BUDGET);
        let tasks = &self.source.tasks;
        let a = &self.algebra;
        let f = &self.field;
        let mut timings = BTreeMap::new();
        let mut failures = Vec::new();
        let mut findings = Vec::new();

        let clock = Instant::now();
        let report = alternator::alternator(a, budget, seed)?;
        timings.insert("analyze".to_string(), elapsed_ms(clock));
        for c in report.certificates.iter().filter(|c| !c.passed) {
            failures.push(format!("certificate {} failed", c.name));
        }
        let alt = &report.alternator;
        let (provenance, isotropy_witness) = match &report.anisotropy {
            Anisotropy::Anisotropic(p) => (Some(*p), None),
            Anisotropy::Isotropic { witness } => (None, Some(a.format_element(witness))),
        };

        let mut results = TaskResults::default();
        if tasks.contains(&Task::Decompose) {
            results.decompose = Some(DecomposeResult {
                verdict: report.decomposable.clone(),
                provenance,
                certificates: report.certificates.iter().filter(|c| is_decomposition_certificate(&c.name)).cloned().collect(),
            });
        }
        if tasks.contains(&Task::Descent) {
            let clock = Instant::now();
            let mut out = Vec::new();
            for ext in &self.extensions {
                let r = verify_separable_descent(a, &ext.field)?;
                if !(r.equal && r.q_agree && r.containment) {
                    failures.push(format!("descent over {} failed", ext.label));
                }
                out.push(Extended { extension: ext.label.clone(), result: r });
            }
            results.descent = Some(out);
            timings.insert("descent".to_string(), elapsed_ms(clock));
        }
        if tasks.contains(&Task::Jump) {
            let clock = Instant::now();
            let mut out = Vec::new();
            for ext in &self.extensions {
                let r = inseparable_jump(a, &ext.field)?;
                if !r.containment {
                    failures.push(format!("containment over {} failed", ext.label));
                }
                if r.jumped && ext.field.is_separable_over(f) {
                    failures.push(format!("S grew over the separable extension {}", ext.label));
                }
                out.push(Extended { extension: ext.label.clone(), result: r });
            }
            results.jump = Some(out);
            timings.insert("jump".to_string(), elapsed_ms(clock));
        }
        if tasks.contains(&Task::Septd) {
            let clock = Instant::now();
            let mut out = Vec::new();
            for ext in &self.extensions {
                let r = septd_suite(a, &ext.field, budget, seed)?;
                if !r.agree {
                    failures.push(format!("decomposability verdicts differ over {}", ext.label));
                }
                if r.oracle_agrees == Some(false) {
                    let det = match r.determinant_square {
                        Some(true) => "square",
                        Some(false) => "not a square",
                        None => "not computed",
                    };
                    findings.push(format!("Pfister-form oracle disagrees with the verdict over {f}; determinant is {det}"));
                }
                out.push(Extended { extension: ext.label.clone(), result: r });
            }
            results.septd = Some(out);
            timings.insert("septd".to_string(), elapsed_ms(clock));
        }
        if options.force_oracle || tasks.contains(&Task::Oracle) {
            let clock = Instant::now();
            let brute = brute_force_s(a)?;
            let direct_by_enumeration = is_direct_by_enumeration(a, alt)?;
            let r = OracleResult {
                dim_brute_force: brute.dim(),
                equal: brute == *alt.s(),
                direct_by_enumeration,
                direct_agrees: direct_by_enumeration == report.direct,
            };
            if !(r.equal && r.direct_agrees) {
                failures.push("brute-force oracle disagrees".to_string());
            }
            results.oracle = Some(r);
            timings.insert("oracle".to_string(), elapsed_ms(clock));
        }

        findings.dedup();
        Ok(Report {
            tool: format!("involab {}", env!("CARGO_PKG_VERSION")),
            scenario: self.source.clone(),
            seed,
            budget,
            field: f.descriptor(),
            algebra: self.description.clone(),
            dims: Dims {
                algebra: a.dim(),
                degree: a.degree(),
                sym: alt.sym().dim(),
                alt: alt.alt().dim(),
                s: report.dim_s,
            },
            verdicts: Verdicts {
                involution: report.involution_type.to_string(),
                contained_in_sym: report.contained_in_sym,
                direct: report.direct,
                decomposable: report.decomposable.clone(),
            },
            s_basis: alt.s().basis().iter().map(|x| a.format_element(x)).collect(),
            q_values: alt.q_values().iter().map(|q| f.format(q)).collect(),
            provenance,
            isotropy_witness,
            certificates: report.certificates.clone(),
            tasks: results,
            status: if failures.is_empty() { "pass" } else { "fail" }.to_string(),
            failures,
            findings,
            timings,
        })
    }
}

fn is_decomposition_certificate(name: &str) -> bool {
    matches!(name, "square-is-q" | "self-centralizing" | "direct")
}

fn build_algebra(field: &FieldTower, spec: &AlgebraSpec, key: &str) -> Result<(AlgebraWithInvolution, String)> {
    let element = |text: &str, k: String| parse_element(field, text).map_err(|e| keyed(&k, e));
    match spec {
        AlgebraSpec::Adjoint { form } => {
            let values = form
                .iter()
                .enumerate()
                .map(|(i, s)| element(s, format!("{key}.form[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let b = BilinearForm::diagonal(field, &values);
            let a = AlgebraWithInvolution::matrix_algebra_adjoint(&b).map_err(|e| keyed(&format!("{key}.form"), e))?;
            let shown: Vec<String> = values.iter().map(|v| field.format(v)).collect();
            Ok((a, format!("adjoint <{}>", shown.join(", "))))
        }
        AlgebraSpec::Quaternion { a, c, twist } => {
            let x = element(a, format!("{key}.a"))?;
            let y = element(c, format!("{key}.c"))?;
            let q = AlgebraWithInvolution::quaternion(field, &x, &y).map_err(|e| keyed(&format!("{key}.c"), e))?;
            let mut description = format!("quaternion ({}, {})", field.format(&x), field.format(&y));
            let q = match twist {
                None => q,
                Some(s) => {
                    let k = format!("{key}.twist");
                    let s_elt = q.parse_element(s).map_err(|e| keyed(&k, e))?;
                    description.push_str(&format!(" twisted by {}", q.format_element(&s_elt)));
                    q.twist(&s_elt).map_err(|e| keyed(&k, e))?
                }
            };
            Ok((q, description))
        }
        AlgebraSpec::Tensor { factors } => {
            let mut parts = Vec::new();
            let mut acc: Option<AlgebraWithInvolution> = None;
            for (i, factor) in factors.iter().enumerate() {
                let (a, d) = build_algebra(field, factor, &format!("{key}.factors[{i}]"))?;
                parts.push(d);
                acc = Some(match acc {
                    None => a,
                    Some(prev) => prev.tensor(&a)?,
                });
            }
            let a = acc.ok_or_else(|| Error::Scenario { key: format!("{key}.factors"), message: "no factors".into() })?;
            Ok((a, parts.join(" ⊗ ")))
        }
    }
}

fn keyed(key: &str, e: Error) -> Error {
    match e {
        Error::Scenario { .. } => e,
        other => Error::Scenario { key: key.to_string(), message: other.to_string() },
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

#[derive(Clone, Debug, Serialize)]
pub struct Dims {
    pub algebra: usize,
    pub degree: usize,
    pub sym: usize,
    pub alt: usize,
    pub s: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub involution: String,
    pub contained_in_sym: bool,
    pub direct: bool,
    pub decomposable: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeResult {
    pub verdict: Verdict,
    pub provenance: Option<Provenance>,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub dim_brute_force: usize,
    pub equal: bool,
    pub direct_by_enumeration: bool,
    pub direct_agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extended<T> {
    pub extension: String,
    #[serde(flatten)]
    pub result: T,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TaskResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decompose: Option<DecomposeResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descent: Option<Vec<Extended<DescentReport>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump: Option<Vec<Extended<JumpReport>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub septd: Option<Vec<Extended<SeptdReport>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
}

/// Result of running a scenario. Apart from `timings`, the content is a
/// function of the scenario, seed and budget.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub scenario: ScenarioFile,
    pub seed: u64,
    pub budget: usize,
    pub field: String,
    pub algebra: String,
    pub dims: Dims,
    pub verdicts: Verdicts,
    pub s_basis: Vec<String>,
    pub q_values: Vec<String>,
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropy_witness: Option<String>,
    pub certificates: Vec<Certificate>,
    pub tasks: TaskResults,
    pub status: String,
    pub failures: Vec<String>,
    pub findings: Vec<String>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
tasks = ["analyze", "decompose"]
[field]
base = "GF(2)"
layers = ["rat:t"]
[algebra]
type = "adjoint"
form = ["1", "t"]
"#;

    #[test]
    fn runs_the_diagonal_example() {
        let report = Scenario::parse(EXAMPLE).unwrap().run(RunOptions::default()).unwrap();
        assert_eq!(report.dims.s, 2);
        assert_eq!(report.verdicts.decomposable, Verdict::Decomposable(true));
        // canonical basis {1, E12 + t⁻¹E21}; ⟨1, 1/t⟩ is ⟨1, t⟩ up to squares
        assert_eq!(report.s_basis, ["E11 + E22", "E12 + (1/t)*E21"]);
        assert_eq!(report.q_values, ["1", "1/t"]);
        assert!(report.passed());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = Scenario::parse("tasks = [\"analyze\"\n[field]").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn malformed_polynomial_names_the_key() {
        let text = EXAMPLE.replace("\"t\"]", "\"t+*s\"]");
        let err = Scenario::parse(&text).unwrap_err();
        let Error::Scenario { key, message } = err else { panic!("{err}") };
        assert_eq!(key, "algebra.form[1]");
        assert!(message.contains("column 3"), "{message}");
    }
}
