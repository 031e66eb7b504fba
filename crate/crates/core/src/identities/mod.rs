//! Registry of curvature identities relating `g` and `g_t`, and the sweep
//! runner that evaluates them on catalog manifolds.

pub mod context;
mod registry;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{get_entry, CatalogEntry, IDS};
use crate::error::{Error, Result};
use crate::geometry::{DiffMode, DifferentiationConfig, Signature};
use crate::sampling::SampleSpec;
use crate::variation::{
    classify_field_in, FieldClassification, Variation, VariationConfig, T_MARGIN,
};

pub use context::{Aux, Member, PointContext};

/// How the two sides of an identity are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `lhs = rhs`.
    Equality,
    /// `lhs ≤ rhs`.
    Inequality,
    /// `lhs < rhs` at one sampled point at least.
    Existence,
}

/// Applicability conditions of an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    /// A classification predicate of `E` on the base metric.
    Predicate(&'static str),
    /// The predicate must clearly fail.
    NotPredicate(&'static str),
    /// A classification predicate of the generator `U = λE`.
    GeneratorPredicate(&'static str),
    RiemannianBase,
    LorentzianBase,
    /// `E` timelike whenever the base is Lorentzian.
    TimelikeIfLorentzian,
    Dim(usize),
    MinDim(usize),
    /// The standard variation `t = −2ε`.
    StandardT,
    /// The catalog records the flow of `E` as complete.
    CompleteField,
    /// The field has a catalog generator `U = λE`.
    HasGenerator,
    /// One metric of the pair is Lorentzian with `E` timelike: the base, or
    /// the varied metric of a standard variation.
    LorentzianMember,
}

pub type EvalFn = fn(&mut Aux) -> Result<Vec<(f64, f64)>>;

pub struct IdentitySpec {
    pub id: &'static str,
    pub citation: &'static str,
    pub kind: Kind,
    pub requires: &'static [Guard],
    /// Auxiliary draws per sample point.
    pub draws: usize,
    pub eval: EvalFn,
}

impl std::fmt::Debug for IdentitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentitySpec")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("requires", &self.requires)
            .finish()
    }
}

impl IdentitySpec {
    /// Residual of one evaluation: the worst pair.
    pub fn residual(&self, pairs: &[(f64, f64)]) -> f64 {
        pairs
            .iter()
            .map(|&(l, r)| {
                let scale = 1.0 + l.abs().max(r.abs());
                let gap = match self.kind {
                    Kind::Equality => (l - r).abs(),
                    Kind::Inequality | Kind::Existence => (l - r).max(0.0),
                };
                if gap.is_nan() {
                    f64::INFINITY
                } else {
                    gap / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

pub fn list_identities() -> &'static [IdentitySpec] {
    registry::REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static IdentitySpec> {
    registry::REGISTRY
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Residual statistics of one identity on one (manifold, field, t) cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub manifold: String,
    pub field: String,
    pub t: f64,
    pub kind: Kind,
    pub samples: usize,
    pub seed: u64,
    pub max_residual: Option<f64>,
    pub mean_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Classification residuals of every predicate the identity requires.
    pub guards: BTreeMap<String, f64>,
    pub citation: String,
}

impl VerificationReport {
    pub fn skipped(&self) -> bool {
        self.skipped_reason.is_some()
    }

    pub fn failed(&self) -> bool {
        self.skipped_reason.is_none() && !self.pass
    }
}

/// Exceeded by no guard residual that counts as satisfied.
pub fn guard_tolerance(cfg: &DifferentiationConfig) -> f64 {
    match cfg.mode {
        DiffMode::ForwardExact => 1e-8,
        DiffMode::FiniteDifference => 1e-4,
    }
}

/// A predicate counts as failing only above this residual.
pub const NOT_PREDICATE_MARGIN: f64 = 1e-6;

/// Margin by which the existence check must be strict.
pub const EXISTENCE_MARGIN: f64 = 1e-8;

/// The `t` values `verify` uses when none are given.
pub const DEFAULT_T_VALUES: [f64; 9] = [-3.0, -2.0, -1.5, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0];

/// Catalog ids swept by default (probe-only entries excluded).
pub fn default_manifolds() -> Vec<String> {
    IDS.iter()
        .filter(|id| !get_entry(id).map(|e| e.probe_only).unwrap_or(true))
        .map(|s| s.to_string())
        .collect()
}

/// Classification of the field and of its generator, shared by all cells of
/// one (manifold, field).
struct FieldData {
    class: FieldClassification,
    generator: Option<FieldClassification>,
}

fn classify(
    entry: &CatalogEntry,
    field: &str,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<FieldData> {
    let e = entry.field(field)?;
    let class = classify_field_in(&entry.chart, &entry.sample_box, e, samples, cfg)?;
    let generator = match entry.generators.get(field) {
        Some(g) => Some(classify_field_in(
            &entry.chart,
            &entry.sample_box,
            &g.u,
            samples,
            cfg,
        )?),
        None => None,
    };
    Ok(FieldData { class, generator })
}

/// Checks guards; returns the recorded residuals and the first failure.
fn check_guards(
    spec: &IdentitySpec,
    entry: &CatalogEntry,
    data: &FieldData,
    var: &Variation,
    cfg: &DifferentiationConfig,
) -> (BTreeMap<String, f64>, Option<String>) {
    let tol = guard_tolerance(cfg);
    let eps = data.class.epsilon;
    let base = entry.chart.signature;
    let mut residuals = BTreeMap::new();
    let mut failure = None;
    let mut fail = |reason: String| {
        if failure.is_none() {
            failure = Some(reason);
        }
    };
    let standard = var.t == -2.0 * eps;
    for guard in spec.requires {
        match *guard {
            Guard::Predicate(name) => {
                let r = data.class.residual(name).unwrap_or(f64::INFINITY);
                residuals.insert(name.to_string(), r);
                if !(r <= tol) {
                    fail(format!("field is not {name} (residual {r:.3e} > {tol:e})"));
                }
            }
            Guard::NotPredicate(name) => {
                let r = data.class.residual(name).unwrap_or(0.0);
                residuals.insert(name.to_string(), r);
                if !(r > NOT_PREDICATE_MARGIN) {
                    fail(format!(
                        "field is {name} (residual {r:.3e} <= {NOT_PREDICATE_MARGIN:e})"
                    ));
                }
            }
            Guard::GeneratorPredicate(name) => match &data.generator {
                Some(g) => {
                    let r = g.residual(name).unwrap_or(f64::INFINITY);
                    residuals.insert(format!("generator_{name}"), r);
                    if !(r <= tol) {
                        fail(format!(
                            "generator is not {name} (residual {r:.3e} > {tol:e})"
                        ));
                    }
                }
                None => fail("field has no generator U = λE".into()),
            },
            Guard::RiemannianBase => {
                if base != Signature::Riemannian {
                    fail("requires a Riemannian base".into());
                }
            }
            Guard::LorentzianBase => {
                if base != Signature::Lorentzian {
                    fail("requires a Lorentzian base".into());
                }
            }
            Guard::TimelikeIfLorentzian => {
                if base == Signature::Lorentzian && eps > 0.0 {
                    fail("requires E timelike on a Lorentzian base".into());
                }
            }
            Guard::Dim(n) => {
                if entry.dim() != n {
                    fail(format!("requires dimension {n}"));
                }
            }
            Guard::MinDim(n) => {
                if entry.dim() < n {
                    fail(format!("requires dimension at least {n}"));
                }
            }
            Guard::StandardT => {
                if !standard {
                    fail(format!(
                        "requires the standard variation t = {}",
                        -2.0 * eps
                    ));
                }
            }
            Guard::CompleteField => {
                if !entry.complete.contains(var.e.name.as_str()) {
                    fail("field is not known to be complete".into());
                }
            }
            Guard::HasGenerator => {
                if data.generator.is_none() {
                    fail("field has no generator U = λE".into());
                }
            }
            Guard::LorentzianMember => {
                let ok = match base {
                    Signature::Lorentzian => eps < 0.0,
                    Signature::Riemannian => {
                        standard && var.varied.signature == Signature::Lorentzian
                    }
                };
                if !ok {
                    fail("requires a Lorentzian member with E timelike".into());
                }
            }
        }
    }
    (residuals, failure)
}

/// Sample points and their contexts for one (manifold, field, t).
struct Group {
    manifold: String,
    field: String,
    t: f64,
    data: std::sync::Arc<FieldData>,
    /// Set when the variation itself cannot be built.
    invalid: Option<String>,
    variation: Option<Variation>,
    contexts: std::result::Result<Vec<PointContext>, String>,
}

fn build_group(
    entry: &CatalogEntry,
    field: &str,
    data: std::sync::Arc<FieldData>,
    t: f64,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Group {
    let mut group = Group {
        manifold: entry.id.clone(),
        field: field.to_string(),
        t,
        data: data.clone(),
        invalid: None,
        variation: None,
        contexts: Ok(Vec::new()),
    };
    let e = match entry.field(field) {
        Ok(e) => e.clone(),
        Err(err) => {
            group.invalid = Some(err.to_string());
            return group;
        }
    };
    let var = Variation::with_epsilon(
        &VariationConfig {
            t,
            base: entry.chart.clone(),
            e,
        },
        data.class.epsilon,
    );
    let var = match var {
        Ok(v) => v,
        Err(err) => {
            group.invalid = Some(err.to_string());
            return group;
        }
    };
    let points = samples.points(&entry.sample_box, &format!("cell:{}:{}", entry.id, field));
    group.contexts = points
        .iter()
        .map(|p| PointContext::new(entry, field, &var, p, cfg))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string());
    group.variation = Some(var);
    group
}

fn evaluate(
    spec: &IdentitySpec,
    group: &Group,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> VerificationReport {
    let tolerance = match spec.kind {
        Kind::Equality => cfg.tolerance("equality"),
        Kind::Inequality | Kind::Existence => cfg.tolerance("inequality"),
    };
    let mut report = VerificationReport {
        identity: spec.id.to_string(),
        manifold: group.manifold.clone(),
        field: group.field.clone(),
        t: group.t,
        kind: spec.kind,
        samples: samples.count,
        seed: samples.seed,
        max_residual: None,
        mean_residual: None,
        tolerance,
        pass: false,
        skipped_reason: None,
        error: None,
        guards: BTreeMap::new(),
        citation: spec.citation.to_string(),
    };
    let var = match &group.variation {
        Some(v) => v,
        None => {
            report.skipped_reason = Some(
                group
                    .invalid
                    .clone()
                    .unwrap_or_else(|| "variation unavailable".into()),
            );
            return report;
        }
    };
    let entry = match get_entry(&group.manifold) {
        Ok(e) => e,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let (guards, failure) = check_guards(spec, &entry, &group.data, var, cfg);
    report.guards = guards;
    if let Some(reason) = failure {
        report.skipped_reason = Some(reason);
        return report;
    }
    let contexts = match &group.contexts {
        Ok(c) => c,
        Err(e) => {
            report.error = Some(e.clone());
            return report;
        }
    };
    let mut rng = samples.rng(&format!(
        "aux:{}:{}:{}:{}",
        spec.id, group.manifold, group.field, group.t
    ));
    let mut per_point = Vec::with_capacity(contexts.len());
    let mut gaps = Vec::new();
    for ctx in contexts {
        let mut aux = Aux { rng: &mut rng, ctx };
        let mut worst: f64 = 0.0;
        for _ in 0..spec.draws.max(1) {
            match (spec.eval)(&mut aux) {
                Ok(pairs) => {
                    if spec.kind == Kind::Existence {
                        gaps.extend(pairs.iter().map(|(l, r)| r - l));
                    }
                    worst = worst.max(spec.residual(&pairs));
                }
                Err(e) => {
                    report.error = Some(e.to_string());
                    return report;
                }
            }
        }
        per_point.push(worst);
    }
    let (max, mean) = if spec.kind == Kind::Existence {
        let best = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let r = (EXISTENCE_MARGIN - best).max(0.0);
        (r, r)
    } else {
        let max = per_point.iter().copied().fold(0.0, f64::max);
        let mean = per_point.iter().sum::<f64>() / per_point.len().max(1) as f64;
        (max, mean)
    };
    report.max_residual = Some(max);
    report.mean_residual = Some(mean);
    report.pass = max <= tolerance;
    report
}

fn order(id: &str) -> usize {
    registry::REGISTRY
        .iter()
        .position(|s| s.id == id)
        .unwrap_or(usize::MAX)
}

fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        order(&a.identity)
            .cmp(&order(&b.identity))
            .then_with(|| a.manifold.cmp(&b.manifold))
            .then_with(|| a.field.cmp(&b.field))
            .then_with(|| a.t.total_cmp(&b.t))
    });
}

/// Cartesian sweep over identities × manifolds × fields × t. Cells never
/// abort the sweep: errors are recorded in the report.
pub fn run_suite(
    manifold_ids: &[String],
    identity_ids: &[String],
    t_values: &[f64],
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let specs = identity_ids
        .iter()
        .map(|id| lookup(id))
        .collect::<Result<Vec<_>>>()?;
    let entries = manifold_ids
        .iter()
        .map(|id| get_entry(id))
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Ok(Vec::new());
    }
    sweep(&entries, None, &specs, t_values, samples, cfg)
}

type Classified<'a> = (
    &'a CatalogEntry,
    String,
    std::result::Result<std::sync::Arc<FieldData>, String>,
);

fn sweep(
    entries: &[CatalogEntry],
    only_field: Option<&str>,
    specs: &[&'static IdentitySpec],
    t_values: &[f64],
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<Vec<VerificationReport>> {
    let pairs: Vec<(&CatalogEntry, String)> = entries
        .iter()
        .flat_map(|e| {
            e.fields
                .keys()
                .filter(|f| only_field.is_none_or(|o| o == f.as_str()))
                .map(move |f| (e, f.clone()))
        })
        .collect();
    let classified: Vec<Classified> = pairs
        .into_par_iter()
        .map(|(e, f)| {
            let d = classify(e, &f, samples, cfg)
                .map(std::sync::Arc::new)
                .map_err(|x| x.to_string());
            (e, f, d)
        })
        .collect();
    let mut reports = Vec::new();
    let mut jobs = Vec::new();
    for (e, f, d) in classified {
        match d {
            Ok(d) => {
                for &t in t_values {
                    jobs.push((e, f.clone(), d.clone(), t));
                }
            }
            Err(msg) => {
                for spec in specs {
                    for &t in t_values {
                        reports.push(error_report(spec, &e.id, &f, t, samples, cfg, &msg));
                    }
                }
            }
        }
    }
    let groups: Vec<Group> = jobs
        .into_par_iter()
        .map(|(e, f, d, t)| build_group(e, &f, d, t, samples, cfg))
        .collect();
    let cells: Vec<(&IdentitySpec, &Group)> = groups
        .iter()
        .flat_map(|g| specs.iter().map(move |s| (*s, g)))
        .collect();
    reports.par_extend(
        cells
            .into_par_iter()
            .map(|(s, g)| evaluate(s, g, samples, cfg)),
    );
    sort_reports(&mut reports);
    Ok(reports)
}

fn error_report(
    spec: &IdentitySpec,
    manifold: &str,
    field: &str,
    t: f64,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
    msg: &str,
) -> VerificationReport {
    VerificationReport {
        identity: spec.id.to_string(),
        manifold: manifold.to_string(),
        field: field.to_string(),
        t,
        kind: spec.kind,
        samples: samples.count,
        seed: samples.seed,
        max_residual: None,
        mean_residual: None,
        tolerance: cfg.tolerance(match spec.kind {
            Kind::Equality => "equality",
            _ => "inequality",
        }),
        pass: false,
        skipped_reason: None,
        error: Some(msg.to_string()),
        guards: BTreeMap::new(),
        citation: spec.citation.to_string(),
    }
}

/// One identity on one manifold over `t_values`, one report per field and
/// `t`. With `field = None` every field of the manifold is checked and a `t`
/// is rejected only when it is forbidden for all of them.
pub fn check_identity(
    id: &str,
    manifold: &str,
    field: Option<&str>,
    t_values: &[f64],
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let spec = lookup(id)?;
    let entry = get_entry(manifold)?;
    let fields: Vec<&String> = match field {
        Some(f) => {
            entry.field(f)?;
            entry.fields.keys().filter(|k| k.as_str() == f).collect()
        }
        None => entry.fields.keys().collect(),
    };
    if fields.is_empty() {
        return Err(Error::UnknownField {
            manifold: manifold.to_string(),
            field: field.unwrap_or_default().to_string(),
        });
    }
    let epsilons = fields
        .iter()
        .map(|f| crate::variation::field_epsilon(&entry.chart, &entry.fields[*f]))
        .collect::<Result<Vec<_>>>()?;
    for &t in t_values {
        if epsilons.iter().all(|eps| (t + eps).abs() < T_MARGIN) || !t.is_finite() {
            return Err(Error::ForbiddenParameter {
                t,
                epsilon: epsilons[0],
                margin: T_MARGIN,
            });
        }
    }
    sweep(
        std::slice::from_ref(&entry),
        field,
        &[spec],
        t_values,
        samples,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<_> = list_identities().iter().map(|s| s.id).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        assert!(n >= 30);
    }

    #[test]
    fn lookup_reports_guards() {
        let s = lookup("cor3.3").unwrap();
        assert_eq!(s.kind, Kind::Equality);
        assert!(s.requires.contains(&Guard::Predicate("geodesic")));
        assert!(s.requires.contains(&Guard::Dim(2)));
        let s = lookup("cor3.4").unwrap();
        assert!(s.requires.contains(&Guard::RiemannianBase));
        assert!(s.requires.contains(&Guard::Predicate("normal")));
        assert!(matches!(lookup("nope"), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn residuals_by_kind() {
        let eq = lookup("cor3.3").unwrap();
        assert_eq!(eq.residual(&[(1.0, 1.0)]), 0.0);
        assert!((eq.residual(&[(2.0, 1.0)]) - 1.0 / 3.0).abs() < 1e-15);
        let ineq = lookup("cor3.4").unwrap();
        assert_eq!(ineq.residual(&[(1.0, 2.0)]), 0.0);
        assert!(ineq.residual(&[(2.0, 1.0)]) > 0.0);
    }
}
