//! Command-line front end.
//!
//! Exit codes: 0 when every check passed or the command is informational,
//! 1 when at least one identity cell or residual check failed, 2 on usage or
//! configuration errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog::{all_entries, get_entry, CatalogEntry, IDS};
use crate::error::Error;
use crate::geodesics::{
    completeness_probe, curve_length, integrate_geodesic, IntegratorConfig, Line, SeedSpec,
};
use crate::geometry::{curvature_bundle, sectional, Chart, DiffMode, DifferentiationConfig};
use crate::identities::{list_identities, lookup, run_suite, DEFAULT_T_VALUES};
use crate::nullsurf::{analyze, get_null_example, NULL_EXAMPLES};
use crate::report::{sweep_json, sweep_table, to_json, write_sink, Format};
use crate::sampling::SampleSpec;
use crate::variation::{Variation, VariationConfig};

/// Residual bound for the lightlike hypersurface checks.
pub const NULLSURF_TOLERANCE: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "canvar",
    version,
    about = "Canonical variations of semi-Riemannian metrics along unit vector fields"
)]
pub struct Cli {
    /// Plain-text `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Finite-difference step.
    #[arg(long = "fd-step", global = true, allow_hyphen_values = true)]
    pub fd_step: Option<f64>,
    /// Tolerance overrides, e.g. `equality=1e-6,inequality=1e-9`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tolerance: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    ForwardExact,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Catalog of example manifolds.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Metric, connection and curvature at one point.
    Curvature(CurvatureArgs),
    /// Run identity checks over the catalog.
    Verify(VerifyArgs),
    /// Integrate one geodesic.
    Geodesic(GeodesicArgs),
    /// Seeded completeness probe.
    Probe(ProbeArgs),
    /// Lightlike hypersurface analysis.
    Nullsurf(NullsurfArgs),
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// List manifolds, lightlike examples and identities.
    List,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    pub manifold: String,
    /// Comma-separated coordinates [default: center of the sample box].
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Evaluate the variation `g_t` instead of the base metric.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated catalog ids [default: all].
    #[arg(long)]
    pub manifolds: Option<String>,
    /// Comma-separated identity ids [default: all].
    #[arg(long)]
    pub identities: Option<String>,
    /// Comma-separated variation parameters [default: -3,-2,-1.5,-0.5,0,0.5,1,2,3].
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Sampling seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points per cell [default: 20].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GeodesicArgs {
    pub manifold: String,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// Affine span.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Use the variation `g_t` along `--field` instead of the catalog's probe chart.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    pub manifold: String,
    /// Number of seeded geodesics [default: 16].
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Affine span per geodesic [default: 10].
    #[arg(long = "T", allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Sampling seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct NullsurfArgs {
    pub example: String,
    /// Sample points on the hypersurface [default: 50].
    #[arg(long)]
    pub points: Option<usize>,
    /// Sampling seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
}

/// A usage or configuration problem, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

type CliResult<T> = std::result::Result<T, UsageError>;

fn flag_err(flag: &str, e: impl std::fmt::Display) -> UsageError {
    UsageError(format!("{flag}: {e}"))
}

const CONFIG_KEYS: &[&str] = &[
    "mode",
    "format",
    "output",
    "fd_step",
    "tolerance",
    "manifolds",
    "identities",
    "t",
    "seed",
    "samples",
    "point",
    "field",
    "p0",
    "v0",
    "T",
    "seeds",
    "points",
];

/// Reads a `key = value` file; `#` starts a comment.
pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| flag_err("--config", format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| flag_err("--config", format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().trim_start_matches("--").replace('-', "_");
        let k = if k == "t_max" { "T".to_string() } else { k };
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(flag_err(
                "--config",
                format!("line {}: unknown key '{k}'", i + 1),
            ));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    /// Flag value, else config value.
    fn get(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.config.get(key).cloned())
    }

    fn parsed<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.config
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| flag_err(&format!("--{key}"), e)))
            .transpose()
    }
}

/// Comma-separated reals, each converted once from its decimal string.
pub fn parse_reals(flag: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| flag_err(flag, format!("'{x}' is not a finite number")))
        })
        .collect()
}

fn parse_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn one_real(flag: &str, s: &str) -> CliResult<f64> {
    match parse_reals(flag, s)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(flag_err(flag, format!("expected one number, got '{s}'"))),
    }
}

fn required(v: Option<String>, flag: &str) -> CliResult<String> {
    v.ok_or_else(|| flag_err(flag, "required"))
}

fn entry(flag: &str, id: &str) -> CliResult<CatalogEntry> {
    get_entry(id).map_err(|e| flag_err(flag, e))
}

fn diff_config(cli: &Cli, s: &Settings) -> CliResult<DifferentiationConfig> {
    let mut cfg = DifferentiationConfig::default();
    let mode = match cli.mode {
        Some(ModeArg::ForwardExact) => Some(DiffMode::ForwardExact),
        Some(ModeArg::FiniteDifference) => Some(DiffMode::FiniteDifference),
        None => match s.config.get("mode").map(String::as_str) {
            None => None,
            Some("forward_exact") => Some(DiffMode::ForwardExact),
            Some("finite_difference") => Some(DiffMode::FiniteDifference),
            Some(other) => return Err(flag_err("--mode", format!("unknown mode '{other}'"))),
        },
    };
    if let Some(m) = mode {
        cfg.mode = m;
    }
    if let Some(h) = s.parsed(cli.fd_step, "fd_step")? {
        cfg.fd_step = h;
    }
    if let Some(t) = s.get(&cli.tolerance, "tolerance") {
        for item in parse_list(&t) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                flag_err("--tolerance", format!("expected class=value, got '{item}'"))
            })?;
            if k != "equality" && k != "inequality" {
                return Err(flag_err("--tolerance", format!("unknown class '{k}'")));
            }
            let v = one_real("--tolerance", v)?;
            if !(v > 0.0) {
                return Err(flag_err("--tolerance", "must be positive"));
            }
            cfg.tolerances.insert(k.to_string(), v);
        }
    }
    cfg.validate().map_err(|e| flag_err("--fd-step", e))?;
    Ok(cfg)
}

fn format_of(cli: &Cli, s: &Settings) -> CliResult<Format> {
    Ok(match cli.format {
        Some(FormatArg::Text) => Format::Text,
        Some(FormatArg::Json) => Format::Json,
        None => match s.config.get("format").map(String::as_str) {
            None | Some("text") => Format::Text,
            Some("json") => Format::Json,
            Some(other) => return Err(flag_err("--format", format!("unknown format '{other}'"))),
        },
    })
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` unless `--output` redirects it.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let sink = cli.output.clone().or_else(|| {
                cli.config
                    .as_ref()
                    .and_then(|p| read_config(p).ok())
                    .and_then(|c| c.get("output").map(PathBuf::from))
            });
            match sink {
                Some(p) => {
                    if let Err(e) = write_sink(&text, Some(&p)) {
                        let _ = writeln!(err, "error: --output: {e}");
                        return 2;
                    }
                }
                None => {
                    if out.write_all(text.as_bytes()).is_err() {
                        let _ = writeln!(err, "error: {}", Error::SinkUnwritable("stdout".into()));
                        return 2;
                    }
                }
            }
            code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = writeln!(err, "run `canvar --help` for usage");
            2
        }
    }
}

fn execute(cli: &Cli) -> CliResult<(String, i32)> {
    let settings = Settings {
        config: match &cli.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        },
    };
    let cfg = diff_config(cli, &settings)?;
    let format = format_of(cli, &settings)?;
    match &cli.command {
        Command::Catalog {
            action: CatalogAction::List,
        } => catalog_list(format),
        Command::Curvature(a) => curvature(a, &settings, &cfg, format),
        Command::Verify(a) => verify(a, &settings, &cfg, format),
        Command::Geodesic(a) => geodesic(a, &settings, &cfg, format),
        Command::Probe(a) => probe(a, &settings, &cfg, format),
        Command::Nullsurf(a) => nullsurf(a, &settings, &cfg, format),
    }
}

fn json_text<T: serde::Serialize>(v: &T) -> CliResult<String> {
    to_json(v).map_err(|e| UsageError(e.to_string()))
}

fn catalog_list(format: Format) -> CliResult<(String, i32)> {
    let entries = all_entries();
    let identities: Vec<_> = list_identities()
        .iter()
        .map(|s| json!({"id": s.id, "kind": s.kind, "citation": s.citation}))
        .collect();
    if format == Format::Json {
        let manifolds: Vec<_> = entries
            .iter()
            .map(|e| {
                json!({
                    "id": e.id,
                    "dim": e.dim(),
                    "signature": e.chart.signature.to_string(),
                    "fields": e.fields.keys().collect::<Vec<_>>(),
                    "generators": e.generators.values().map(|g| g.u.name.clone()).collect::<Vec<_>>(),
                    "provenance": e.provenance,
                })
            })
            .collect();
        let doc = json!({"manifolds": manifolds, "null_examples": NULL_EXAMPLES, "identities": identities});
        return Ok((json_text(&doc)?, 0));
    }
    let mut s = String::from("manifolds\n");
    let w = entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
    for e in &entries {
        let fields: Vec<&str> = e.fields.keys().map(String::as_str).collect();
        s.push_str(&format!(
            "  {:<w$}  dim {}  {:<10}  fields {:<16}  {}\n",
            e.id,
            e.dim(),
            e.chart.signature.to_string(),
            fields.join(","),
            e.provenance
        ));
    }
    s.push_str("lightlike examples\n");
    for id in NULL_EXAMPLES {
        let ex = get_null_example(id).map_err(|e| UsageError(e.to_string()))?;
        s.push_str(&format!("  {:<14}  {}\n", id, ex.description));
    }
    s.push_str("identities\n");
    let w = list_identities()
        .iter()
        .map(|i| i.id.len())
        .max()
        .unwrap_or(0);
    for i in list_identities() {
        s.push_str(&format!("  {:<w$}  {:?}\n", i.id, i.kind));
    }
    Ok((s, 0))
}

/// The chart selected by optional `--t` / `--field` flags.
fn chart_for(
    e: &CatalogEntry,
    t: Option<f64>,
    field: Option<&str>,
    default: Chart,
) -> CliResult<Chart> {
    match t {
        None => {
            if field.is_some() {
                return Err(flag_err("--field", "only meaningful together with --t"));
            }
            Ok(default)
        }
        Some(t) => {
            let f = e
                .field(field.unwrap_or("E"))
                .map_err(|x| flag_err("--field", x))?;
            Variation::new(&VariationConfig {
                t,
                base: e.chart.clone(),
                e: f.clone(),
            })
            .map(|v| v.varied)
            .map_err(|x| flag_err("--t", x))
        }
    }
}

fn curvature(
    a: &CurvatureArgs,
    s: &Settings,
    cfg: &DifferentiationConfig,
    format: Format,
) -> CliResult<(String, i32)> {
    let e = entry("manifold", &a.manifold)?;
    let t = s.get(&a.t, "t").map(|x| one_real("--t", &x)).transpose()?;
    let field = s.get(&a.field, "field");
    let chart = chart_for(&e, t, field.as_deref(), e.chart.clone())?;
    let p = match s.get(&a.point, "point") {
        Some(x) => parse_reals("--point", &x)?,
        None => e.sample_box.center(),
    };
    if p.len() != chart.dim() {
        return Err(flag_err(
            "--point",
            format!("expected {} coordinates, got {}", chart.dim(), p.len()),
        ));
    }
    let b = curvature_bundle(&chart, &p, None, cfg).map_err(|x| flag_err("--point", x))?;
    let n = chart.dim();
    let mut sect = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let k = sectional(&b, &b.frame.vectors[i], &b.frame.vectors[j]).ok();
            sect.push(json!({"plane": [i, j], "value": k}));
        }
    }
    let rows = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    };
    let doc = json!({
        "manifold": e.id,
        "chart": chart.name,
        "t": t,
        "point": p,
        "metric": rows(&b.g),
        "christoffel": b.gamma.data,
        "riemann": b.riemann.data,
        "ricci": rows(&b.ricci),
        "scalar": b.scalar,
        "frame_sectional": sect,
    });
    if format == Format::Json {
        return Ok((json_text(&doc)?, 0));
    }
    let mut out = format!("chart   {}\npoint   {:?}\n", chart.name, p);
    out.push_str("metric\n");
    for r in rows(&b.g) {
        out.push_str(&format!("  {}\n", fmt_row(&r)));
    }
    out.push_str("ricci\n");
    for r in rows(&b.ricci) {
        out.push_str(&format!("  {}\n", fmt_row(&r)));
    }
    out.push_str(&format!("scalar  {:.12e}\n", b.scalar));
    out.push_str("sectional curvature of orthonormal frame planes\n");
    for x in &sect {
        out.push_str(&format!("  {}  {}\n", x["plane"], x["value"]));
    }
    Ok((out, 0))
}

fn fmt_row(r: &[f64]) -> String {
    r.iter()
        .map(|x| format!("{x:>20.12e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verify(
    a: &VerifyArgs,
    s: &Settings,
    cfg: &DifferentiationConfig,
    format: Format,
) -> CliResult<(String, i32)> {
    let manifolds = match s.get(&a.manifolds, "manifolds") {
        Some(x) => parse_list(&x),
        None => IDS.iter().map(|x| x.to_string()).collect(),
    };
    for m in &manifolds {
        entry("--manifolds", m)?;
    }
    let identities = match s.get(&a.identities, "identities") {
        Some(x) => parse_list(&x),
        None => list_identities().iter().map(|i| i.id.to_string()).collect(),
    };
    if identities.is_empty() {
        return Err(flag_err("--identities", "empty list"));
    }
    for i in &identities {
        lookup(i).map_err(|e| flag_err("--identities", e))?;
    }
    let ts = match s.get(&a.t, "t") {
        Some(x) => parse_reals("--t", &x)?,
        None => DEFAULT_T_VALUES.to_vec(),
    };
    let seed = s.parsed(a.seed, "seed")?.unwrap_or(42);
    let count = s.parsed(a.samples, "samples")?.unwrap_or(20);
    if count == 0 {
        return Err(flag_err("--samples", "must be positive"));
    }
    let spec = SampleSpec::new(seed, count);
    let reports = run_suite(&manifolds, &identities, &ts, &spec, cfg)
        .map_err(|e| UsageError(e.to_string()))?;
    let code = i32::from(reports.iter().any(|r| r.failed()));
    let text = match format {
        Format::Json => {
            sweep_json(&reports, seed, cfg.mode).map_err(|e| UsageError(e.to_string()))?
        }
        Format::Text => sweep_table(&reports),
    };
    Ok((text, code))
}

fn geodesic(
    a: &GeodesicArgs,
    s: &Settings,
    cfg: &DifferentiationConfig,
    format: Format,
) -> CliResult<(String, i32)> {
    let e = entry("manifold", &a.manifold)?;
    let t = s.get(&a.t, "t").map(|x| one_real("--t", &x)).transpose()?;
    let field = s.get(&a.field, "field");
    let probe = e.probe_chart().map_err(|x| UsageError(x.to_string()))?;
    let chart = chart_for(&e, t, field.as_deref(), probe)?;
    let p0 = parse_reals("--p0", &required(s.get(&a.p0, "p0"), "--p0")?)?;
    let v0 = parse_reals("--v0", &required(s.get(&a.v0, "v0"), "--v0")?)?;
    let span = one_real("--T", &required(s.get(&a.span, "T"), "--T")?)?;
    for (flag, v) in [("--p0", &p0), ("--v0", &v0)] {
        if v.len() != chart.dim() {
            return Err(flag_err(
                flag,
                format!("expected {} components, got {}", chart.dim(), v.len()),
            ));
        }
    }
    let trace = integrate_geodesic(&chart, &p0, &v0, span, &IntegratorConfig::default(), cfg)
        .map_err(|x| {
            let flag = match x {
                Error::PointOutsideDomain { .. } => "--p0",
                _ => "--T",
            };
            flag_err(flag, x)
        })?;
    let ray = Line {
        origin: p0.clone(),
        direction: v0.clone(),
    };
    let length = curve_length(&chart, &ray, (0.0, span));
    let traced = trace.initial_norm.abs().sqrt() * trace.final_parameter();
    let end = trace
        .samples
        .last()
        .map(|x| x.point.clone())
        .unwrap_or_default();
    if format == Format::Json {
        let doc = json!({
            "chart": chart.name,
            "p0": p0,
            "v0": v0,
            "T": span,
            "termination": trace.termination,
            "final_parameter": trace.final_parameter(),
            "endpoint": end,
            "norm_drift": trace.norm_drift,
            "initial_norm": trace.initial_norm,
            "geodesic_length": traced,
            "length": length.as_ref().ok().map(|l| l.value),
            "length_error": length.as_ref().ok().map(|l| l.error_estimate),
            "length_failure": length.as_ref().err().map(|x| x.to_string()),
            "samples": trace.samples,
        });
        return Ok((json_text(&doc)?, 0));
    }
    let mut out = String::new();
    let mut row = |k: &str, v: String| out.push_str(&format!("{k:<16}{v}\n"));
    row("chart", chart.name.clone());
    row(
        "termination",
        serde_json::to_value(trace.termination)
            .map(|v| v.as_str().unwrap_or("").to_string())
            .unwrap_or_default(),
    );
    row(
        "final_parameter",
        format!("{:.12}", trace.final_parameter()),
    );
    row("endpoint", fmt_vec(&end));
    row("samples", trace.samples.len().to_string());
    row("norm_drift", format!("{:.3e}", trace.norm_drift));
    row("geodesic_length", format!("{traced:.12}"));
    match &length {
        Ok(l) => row(
            "length",
            format!(
                "{:.12} (±{:.1e}, ray p0 + s v0 over [0, T])",
                l.value, l.error_estimate
            ),
        ),
        Err(x) => row("length", format!("- ({x})")),
    }
    Ok((out, 0))
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.9}")).collect();
    format!("({})", parts.join(", "))
}

fn probe(
    a: &ProbeArgs,
    s: &Settings,
    cfg: &DifferentiationConfig,
    format: Format,
) -> CliResult<(String, i32)> {
    let e = entry("manifold", &a.manifold)?;
    let chart = e.probe_chart().map_err(|x| UsageError(x.to_string()))?;
    let seeds = s.parsed(a.seeds, "seeds")?.unwrap_or(16);
    if seeds == 0 {
        return Err(flag_err("--seeds", "must be positive"));
    }
    let span = match s.get(&a.span, "T") {
        Some(x) => one_real("--T", &x)?,
        None => 10.0,
    };
    if !(span > 0.0) {
        return Err(flag_err("--T", "must be positive"));
    }
    let seed = s.parsed(a.seed, "seed")?.unwrap_or(42);
    let spec = SeedSpec {
        samples: SampleSpec::new(seed, seeds),
        seed_box: e.probe.seed_box.clone(),
        direction: e.probe.direction.clone(),
    };
    let summary = completeness_probe(&chart, &spec, span, &IntegratorConfig::default(), cfg)
        .map_err(|x| UsageError(x.to_string()))?;
    if format == Format::Json {
        return Ok((json_text(&summary)?, 0));
    }
    let mut out = format!(
        "chart {}  T {}  seed {}  reached_T {:.1}%\n",
        summary.chart,
        span,
        seed,
        100.0 * summary.fraction_reached
    );
    out.push_str(&format!(
        "{:<28} {:<28} {:<16} {:>14} {:>14}\n",
        "p0", "v0", "termination", "final_param", "length"
    ));
    for r in &summary.runs {
        let term = serde_json::to_value(r.termination)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        out.push_str(&format!(
            "{:<28} {:<28} {:<16} {:>14.9} {:>14.9}\n",
            fmt_short(&r.p0),
            fmt_short(&r.v0),
            term,
            r.final_parameter,
            r.length
        ));
    }
    Ok((out, 0))
}

fn fmt_short(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

fn nullsurf(
    a: &NullsurfArgs,
    s: &Settings,
    cfg: &DifferentiationConfig,
    format: Format,
) -> CliResult<(String, i32)> {
    let ex = get_null_example(&a.example).map_err(|e| flag_err("example", e))?;
    let points = s.parsed(a.points, "points")?.unwrap_or(50);
    if points == 0 {
        return Err(flag_err("--points", "must be positive"));
    }
    let seed = s.parsed(a.seed, "seed")?.unwrap_or(42);
    let report =
        analyze(&ex, &SampleSpec::new(seed, points), cfg).map_err(|e| flag_err("example", e))?;
    let tol = match cfg.mode {
        DiffMode::ForwardExact => NULLSURF_TOLERANCE,
        DiffMode::FiniteDifference => 1e-4,
    };
    let failed = report.max_residuals.values().any(|&r| !(r <= tol));
    let code = i32::from(failed);
    if format == Format::Json {
        return Ok((json_text(&report)?, code));
    }
    let mut out = format!(
        "{}: {}\npoints {}  seed {}  tolerance {:.0e}\n",
        report.example, report.description, points, seed, tol
    );
    out.push_str("max residuals\n");
    for (k, v) in &report.max_residuals {
        let status = if *v <= tol { "ok" } else { "FAIL" };
        out.push_str(&format!("  {k:<12} {v:.3e}  {status}\n"));
    }
    out.push_str("max magnitudes\n");
    for (k, v) in &report.max_magnitudes {
        out.push_str(&format!("  {k:<12} {v:.12e}\n"));
    }
    Ok((out, code))
}
