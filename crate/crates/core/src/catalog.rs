//! Built-in example manifolds with their distinguished unit fields.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{
    Composed, ConstantField, FieldFormula, LnOf, MetricFormula, NormOf, ScalarFieldExpr,
    ScalarFormula, UnitOf, VectorFieldExpr,
};
use crate::geometry::{
    curvature_bundle, sectional, Chart, CoordBox, DifferentiationConfig, FieldCalculus, Local,
    Signature,
};
use crate::jet::Real;
use crate::sampling::{uniform_vector, SampleSpec};
use crate::variation::{classify_field_in, norm_squared, Variation, VariationConfig};

fn zeros<T: Real>(n: usize) -> Vec<T> {
    (0..n * n).map(|_| T::cst(0.0)).collect()
}

/// `diag(s_0, 1, ..., 1)` with `s_0 = ±1`.
pub struct Flat {
    pub dim: usize,
    pub first: f64,
}

impl MetricFormula for Flat {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval<T: Real>(&self, _x: &[T]) -> Vec<T> {
        let n = self.dim;
        let mut g = zeros(n);
        for i in 0..n {
            g[i * n + i] = T::cst(if i == 0 { self.first } else { 1.0 });
        }
        g
    }
}

/// `dx₁² + e^{2x₁} Σ_{i≥2} dx_i²`.
pub struct Hyperbolic(pub usize);

impl MetricFormula for Hyperbolic {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let n = self.0;
        let w = x[0].scale(2.0).exp();
        let mut g = zeros(n);
        g[0] = T::cst(1.0);
        for i in 1..n {
            g[i * n + i] = w.clone();
        }
        g
    }
}

/// `e^{-x₁} ∂_{x_n}`.
pub struct HyperbolicTransverse(pub usize);

impl FieldFormula for HyperbolicTransverse {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let mut v: Vec<T> = (0..self.0).map(|_| T::cst(0.0)).collect();
        v[self.0 - 1] = (-x[0].clone()).exp();
        v
    }
}

/// Round 2-sphere in polar coordinates `(θ, φ)`.
pub struct RoundS2;

impl MetricFormula for RoundS2 {
    fn dim(&self) -> usize {
        2
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let s = x[0].sin();
        vec![T::cst(1.0), T::cst(0.0), T::cst(0.0), s.clone() * s]
    }
}

/// Round 3-sphere in Hopf coordinates `(η, ξ₁, ξ₂)`:
/// `dη² + cos²η dξ₁² + sin²η dξ₂²`.
pub struct HopfS3;

impl MetricFormula for HopfS3 {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let (c, s) = (x[0].cos(), x[0].sin());
        let mut g = zeros(3);
        g[0] = T::cst(1.0);
        g[4] = c.clone() * c;
        g[8] = s.clone() * s;
        g
    }
}

/// Height of the upper unit hemisphere over the disk, `√(1 − |u|²)`.
pub struct CapHeight;

impl ScalarFormula for CapHeight {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> T {
        (T::cst(1.0) - x[0].clone() * x[0].clone() - x[1].clone() * x[1].clone()).sqrt()
    }
}

/// `g₀ + s f² dt²` on (upper hemisphere in graph coordinates) × ℝ, where
/// `g₀ = δ + u uᵀ / (1 − |u|²)` and `f = √(1 − |u|²)`.
pub struct CapProduct {
    pub sign: f64,
}

impl MetricFormula for CapProduct {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let f2 = T::cst(1.0) - x[0].clone() * x[0].clone() - x[1].clone() * x[1].clone();
        let mut g = zeros(3);
        for i in 0..2 {
            for j in 0..2 {
                let d = if i == j { 1.0 } else { 0.0 };
                g[i * 3 + j] = T::cst(d) + x[i].clone() * x[j].clone() / f2.clone();
            }
        }
        g[8] = f2.scale(self.sign);
        g
    }
}

/// `(1/f) ∂_t` on the hemisphere product.
pub struct CapUnit;

impl FieldFormula for CapUnit {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let f = CapHeight.eval(x);
        vec![T::cst(0.0), T::cst(0.0), T::cst(1.0) / f]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Warp {
    One,
    ExpSquare,
}

/// `−dt² + f(t)² (dy² + dz²)`.
pub struct WarpedLine(pub Warp);

impl MetricFormula for WarpedLine {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let f2 = match self.0 {
            Warp::One => T::cst(1.0),
            Warp::ExpSquare => (x[0].clone() * x[0].clone()).scale(2.0).exp(),
        };
        let mut g = zeros(3);
        g[0] = T::cst(-1.0);
        g[4] = f2.clone();
        g[8] = f2;
        g
    }
}

/// `a ∂_x + b ∂_y` with `a = cosh(x+y)`, `b = sinh(x+y)`; equivalently
/// `a = (1+f²)/(2f)`, `b = (1−f²)/(2f)` for `f = e^{−(x+y)}`.
pub struct BoostField;

impl FieldFormula for BoostField {
    fn dim(&self) -> usize {
        2
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let s = x[0].clone() + x[1].clone();
        vec![s.cosh(), s.sinh()]
    }
}

/// `1.5 + 0.5 sin x cos y`.
pub struct RippleHeight;

impl ScalarFormula for RippleHeight {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> T {
        T::cst(1.5) + (x[0].sin() * x[1].cos()).scale(0.5)
    }
}

/// `dx² + dy² − f² dt²` with `f` the ripple height.
pub struct RippleProduct;

impl MetricFormula for RippleProduct {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let f = RippleHeight.eval(x);
        let mut g = zeros(3);
        g[0] = T::cst(1.0);
        g[4] = T::cst(1.0);
        g[8] = -(f.clone() * f);
        g
    }
}

/// `(x+y) ∂x + (y+z) ∂y + (x+z) ∂z`.
pub struct CirculantField;

impl FieldFormula for CirculantField {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        vec![
            x[0].clone() + x[1].clone(),
            x[1].clone() + x[2].clone(),
            x[0].clone() + x[2].clone(),
        ]
    }
}

/// `cos z ∂x + sin z ∂y`.
pub struct HelixField;

impl FieldFormula for HelixField {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        vec![x[2].cos(), x[2].sin(), T::cst(0.0)]
    }
}

/// A Killing (or otherwise distinguished) field `U = λ E` behind a unit field.
#[derive(Clone, Debug)]
pub struct Generator {
    pub u: VectorFieldExpr,
    pub lambda: ScalarFieldExpr,
}

/// Which chart geodesic tools use and how probe seeds are drawn.
#[derive(Clone, Debug)]
pub struct ProbeSpec {
    /// Probe the variation along this field with this parameter, else the chart.
    pub variation: Option<(String, f64)>,
    /// Seed directions cluster around this vector when given.
    pub direction: Option<Vec<f64>>,
    pub seed_box: CoordBox,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// Every sectional curvature of `g_t` equals `value`.
    Sectional {
        field: Option<String>,
        t: f64,
        value: f64,
    },
    /// Scalar curvature of `g_t` equals `value`.
    Scalar {
        field: Option<String>,
        t: f64,
        value: f64,
    },
    /// A classification predicate holds (residual ≤ tolerance) or clearly fails.
    Predicate {
        field: String,
        predicate: String,
        holds: bool,
    },
    /// `g_t(E, E) = value`.
    FieldNorm { field: String, t: f64, value: f64 },
    /// `||A_E||² = Ric(E, E) = value`.
    KillingNorm { field: String, value: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub description: String,
    pub op: String,
    pub tolerance: f64,
    pub check: Check,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub chart: Chart,
    pub fields: BTreeMap<String, VectorFieldExpr>,
    pub scalars: BTreeMap<String, ScalarFieldExpr>,
    pub generators: BTreeMap<String, Generator>,
    /// Fields whose flow is complete on the whole manifold the chart covers.
    pub complete: BTreeSet<String>,
    pub known: Vec<Assertion>,
    pub provenance: String,
    /// Where identity samples are drawn; a sub-box of the chart domain.
    pub sample_box: CoordBox,
    pub probe: ProbeSpec,
    /// Excluded from default verification sweeps.
    pub probe_only: bool,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn field(&self, name: &str) -> Result<&VectorFieldExpr> {
        self.fields
            .get(name)
            .or_else(|| {
                self.generators
                    .values()
                    .find(|g| g.u.name == name)
                    .map(|g| &g.u)
            })
            .ok_or_else(|| Error::UnknownField {
                manifold: self.id.clone(),
                field: name.to_string(),
            })
    }

    /// The chart geodesic tools operate on by default.
    pub fn probe_chart(&self) -> Result<Chart> {
        match &self.probe.variation {
            None => Ok(self.chart.clone()),
            Some((f, t)) => Ok(Variation::new(&VariationConfig {
                t: *t,
                base: self.chart.clone(),
                e: self.field(f)?.clone(),
            })?
            .varied),
        }
    }
}

struct Builder {
    entry: CatalogEntry,
}

impl Builder {
    fn new(
        id: &str,
        domain: CoordBox,
        sig: Signature,
        metric: Arc<dyn crate::expr::MetricFn>,
        provenance: &str,
    ) -> Self {
        let chart = Chart::new(id, domain.clone(), sig, metric);
        Builder {
            entry: CatalogEntry {
                id: id.to_string(),
                chart,
                fields: BTreeMap::new(),
                scalars: BTreeMap::new(),
                generators: BTreeMap::new(),
                complete: BTreeSet::new(),
                known: Vec::new(),
                provenance: provenance.to_string(),
                sample_box: domain.clone(),
                probe: ProbeSpec {
                    variation: None,
                    direction: None,
                    seed_box: domain.shrunk(0.4),
                },
                probe_only: false,
            },
        }
    }

    fn field(mut self, f: VectorFieldExpr) -> Self {
        self.entry.fields.insert(f.name.clone(), f);
        self
    }

    fn complete(mut self, fields: &[&str]) -> Self {
        self.entry
            .complete
            .extend(fields.iter().map(|f| f.to_string()));
        self
    }

    fn scalar(mut self, s: ScalarFieldExpr) -> Self {
        self.entry.scalars.insert(s.name.clone(), s);
        self
    }

    fn generator(mut self, field: &str, u: VectorFieldExpr, lambda: ScalarFieldExpr) -> Self {
        self.entry
            .generators
            .insert(field.to_string(), Generator { u, lambda });
        self
    }

    fn known(mut self, description: &str, op: &str, tolerance: f64, check: Check) -> Self {
        self.entry.known.push(Assertion {
            description: description.to_string(),
            op: op.to_string(),
            tolerance,
            check,
        });
        self
    }

    fn sample_box(mut self, b: CoordBox) -> Self {
        self.entry.sample_box = b;
        self
    }

    fn probe(mut self, p: ProbeSpec) -> Self {
        self.entry.probe = p;
        self
    }

    fn probe_only(mut self) -> Self {
        self.entry.probe_only = true;
        self
    }

    fn done(self) -> CatalogEntry {
        self.entry
    }
}

fn sectional_check(field: Option<&str>, t: f64, value: f64) -> Check {
    Check::Sectional {
        field: field.map(str::to_string),
        t,
        value,
    }
}

fn predicate(field: &str, p: &str, holds: bool) -> Check {
    Check::Predicate {
        field: field.to_string(),
        predicate: p.to_string(),
        holds,
    }
}

fn euclidean(n: usize) -> CatalogEntry {
    let s = 1.0 / (n as f64).sqrt();
    let mut b = Builder::new(
        &format!("euclidean_{n}"),
        CoordBox::cube(n, -10.0, 10.0),
        Signature::Riemannian,
        Arc::new(Flat { dim: n, first: 1.0 }),
        "Euclidean space; the standard variation along a parallel field gives Minkowski space",
    )
    .field(VectorFieldExpr::new("E", ConstantField(vec![s; n])))
    .complete(&["E"])
    .known("flat", "sectional", 1e-12, sectional_check(None, 0.0, 0.0))
    .known(
        "standard variation is Minkowski space, hence flat",
        "sectional",
        1e-12,
        sectional_check(Some("E"), -2.0, 0.0),
    )
    .known(
        "E is parallel",
        "classify_field",
        1e-10,
        predicate("E", "parallel", true),
    );
    if n == 3 {
        b = b
            .field(VectorFieldExpr::new("E_helix", HelixField))
            .complete(&["E_helix"])
            .known(
                "helix field is geodesic",
                "classify_field",
                1e-10,
                predicate("E_helix", "geodesic", true),
            )
            .known(
                "helix field is not Killing",
                "classify_field",
                1e-10,
                predicate("E_helix", "killing", false),
            );
    }
    b.sample_box(CoordBox::cube(n, -2.0, 2.0)).done()
}

fn minkowski(n: usize) -> CatalogEntry {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    Builder::new(
        &format!("minkowski_{n}"),
        CoordBox::cube(n, -10.0, 10.0),
        Signature::Lorentzian,
        Arc::new(Flat {
            dim: n,
            first: -1.0,
        }),
        "ambient space for the lightlike hypersurface examples",
    )
    .field(VectorFieldExpr::new("E", ConstantField(e)))
    .complete(&["E"])
    .known("flat", "sectional", 1e-12, sectional_check(None, 0.0, 0.0))
    .known(
        "E is parallel",
        "classify_field",
        1e-10,
        predicate("E", "parallel", true),
    )
    .sample_box(CoordBox::cube(n, -2.0, 2.0))
    .done()
}

fn hyperbolic(n: usize) -> CatalogEntry {
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    Builder::new(
        &format!("hyperbolic_{n}"),
        CoordBox::cube(n, -1.0, 1.0),
        Signature::Riemannian,
        Arc::new(Hyperbolic(n)),
        "hyperbolic space; its standard variations give pieces of de Sitter and anti-de Sitter space",
    )
    .field(VectorFieldExpr::new("E1", ConstantField(e1)))
    .field(VectorFieldExpr::new("E2", HyperbolicTransverse(n)))
    .complete(&["E1", "E2"])
    .known("constant curvature -1", "sectional", 1e-10, sectional_check(None, 0.0, -1.0))
    .known("standard variation along E1 has curvature +1", "sectional", 1e-8, sectional_check(Some("E1"), -2.0, 1.0))
    .known("standard variation along E2 has curvature -1", "sectional", 1e-8, sectional_check(Some("E2"), -2.0, -1.0))
    .known("scalar curvature -n(n-1)", "curvature_bundle", 1e-10, Check::Scalar { field: None, t: 0.0, value: -((n * (n - 1)) as f64) })
    .known("E1 is closed", "classify_field", 1e-10, predicate("E1", "closed", true))
    .known("E1 is geodesic", "classify_field", 1e-10, predicate("E1", "geodesic", true))
    .known("E1 is not Killing", "classify_field", 1e-10, predicate("E1", "killing", false))
    .known("E2 is not Killing", "classify_field", 1e-10, predicate("E2", "killing", false))
    .done()
}

fn sphere_2() -> CatalogEntry {
    Builder::new(
        "sphere_2",
        CoordBox::new(vec![0.1, -PI], vec![PI - 0.1, PI]).with_periodic(&[1]),
        Signature::Riemannian,
        Arc::new(RoundS2),
        "round unit 2-sphere in polar coordinates",
    )
    .field(VectorFieldExpr::new("E", ConstantField(vec![1.0, 0.0])))
    .known(
        "constant curvature 1",
        "sectional",
        1e-10,
        sectional_check(None, 0.0, 1.0),
    )
    .known(
        "scalar curvature 2",
        "curvature_bundle",
        1e-10,
        Check::Scalar {
            field: None,
            t: 0.0,
            value: 2.0,
        },
    )
    .known(
        "meridian field is closed",
        "classify_field",
        1e-10,
        predicate("E", "closed", true),
    )
    .known(
        "meridian field is geodesic",
        "classify_field",
        1e-10,
        predicate("E", "geodesic", true),
    )
    .sample_box(CoordBox::new(vec![0.1, -PI], vec![PI - 0.1, PI]))
    .done()
}

fn sphere_cap_product() -> CatalogEntry {
    let metric: Arc<dyn crate::expr::MetricFn> = Arc::new(CapProduct { sign: 1.0 });
    let u = VectorFieldExpr::new("U", ConstantField(vec![0.0, 0.0, 1.0]));
    let lambda = ScalarFieldExpr::new("f", CapHeight);
    Builder::new(
        "sphere_cap_product",
        CoordBox::new(vec![-0.6, -0.6, -1.0], vec![0.6, 0.6, 1.0]),
        Signature::Riemannian,
        metric.clone(),
        "open hemisphere times a line warped by the height f(p) = p·v, a piece of the round sphere",
    )
    .field(VectorFieldExpr::new("E", CapUnit))
    .complete(&["E"])
    .scalar(lambda.clone())
    .scalar(ScalarFieldExpr::new(
        "ln_f",
        Composed(LnOf(lambda.value.clone())),
    ))
    .generator("E", u, lambda)
    .known(
        "constant curvature 1",
        "sectional",
        1e-10,
        sectional_check(None, 0.0, 1.0),
    )
    .known(
        "standard variation is a piece of de Sitter space",
        "sectional",
        1e-8,
        sectional_check(Some("E"), -2.0, 1.0),
    )
    .known(
        "scalar curvature 6",
        "curvature_bundle",
        1e-10,
        Check::Scalar {
            field: None,
            t: 0.0,
            value: 6.0,
        },
    )
    .known(
        "E is orthogonally normal",
        "classify_field",
        1e-9,
        predicate("E", "orthogonally_normal", true),
    )
    .known(
        "U = f E is Killing",
        "classify_field",
        1e-10,
        predicate("U", "killing", true),
    )
    .done()
}

fn berger_s3() -> CatalogEntry {
    let mut b = Builder::new(
        "berger_s3",
        CoordBox::new(vec![0.1, -PI, -PI], vec![FRAC_PI_2 - 0.1, PI, PI]).with_periodic(&[1, 2]),
        Signature::Riemannian,
        Arc::new(HopfS3),
        "round 3-sphere in Hopf coordinates; variations along the Hopf field are Berger spheres",
    )
    .field(VectorFieldExpr::new(
        "E",
        ConstantField(vec![0.0, 1.0, 1.0]),
    ))
    .complete(&["E"])
    .generator(
        "E",
        VectorFieldExpr::new("U", ConstantField(vec![0.0, 1.0, 1.0])),
        ScalarFieldExpr::new("one", crate::expr::ConstantScalar { dim: 3, value: 1.0 }),
    )
    .known(
        "Hopf field is Killing",
        "classify_field",
        1e-10,
        predicate("E", "killing", true),
    )
    .known(
        "Hopf field is geodesic",
        "classify_field",
        1e-10,
        predicate("E", "geodesic", true),
    )
    .known(
        "Hopf field is not closed",
        "classify_field",
        1e-10,
        predicate("E", "closed", false),
    )
    .known(
        "||A_E||² = Ric(E,E) = 2",
        "field_calculus",
        1e-9,
        Check::KillingNorm {
            field: "E".into(),
            value: 2.0,
        },
    );
    for t in [-2.0, -0.5, 0.0, 1.0, 5.0] {
        b = b.known(
            "scalar curvature of g_t is 2(3 - t)",
            "curvature_bundle",
            1e-8,
            Check::Scalar {
                field: Some("E".into()),
                t,
                value: 2.0 * (3.0 - t),
            },
        );
    }
    b.done()
}

fn warped_line(warp: Warp) -> CatalogEntry {
    let id = match warp {
        Warp::One => "warped_line",
        Warp::ExpSquare => "warped_line_exp",
    };
    let t_max = match warp {
        Warp::One => 1e3,
        Warp::ExpSquare => 10.0,
    };
    let b = Builder::new(
        id,
        CoordBox::new(vec![-t_max, -PI, -PI], vec![t_max, PI, PI]).with_periodic(&[1, 2]),
        Signature::Lorentzian,
        Arc::new(WarpedLine(warp)),
        "warped products -dt² + f(t)² g₀ over a flat torus, whose standard variation is complete",
    )
    .field(VectorFieldExpr::new(
        "E",
        ConstantField(vec![1.0, 0.0, 0.0]),
    ))
    .complete(&["E"])
    .generator(
        "E",
        VectorFieldExpr::new("U", ConstantField(vec![1.0, 0.0, 0.0])),
        ScalarFieldExpr::new("one", crate::expr::ConstantScalar { dim: 3, value: 1.0 }),
    )
    .sample_box(CoordBox::new(vec![-1.0, -PI, -PI], vec![1.0, PI, PI]))
    .known(
        "∂t is closed",
        "classify_field",
        1e-10,
        predicate("E", "closed", true),
    )
    .known(
        "∂t is geodesic",
        "classify_field",
        1e-10,
        predicate("E", "geodesic", true),
    );
    match warp {
        Warp::One => b
            .known("flat", "sectional", 1e-12, sectional_check(None, 0.0, 0.0))
            .known(
                "E is parallel",
                "classify_field",
                1e-10,
                predicate("E", "parallel", true),
            )
            .probe(ProbeSpec {
                variation: None,
                direction: None,
                seed_box: CoordBox::new(vec![-1.0, -0.5, -0.5], vec![1.0, 0.5, 0.5]),
            })
            .done(),
        Warp::ExpSquare => b
            .probe(ProbeSpec {
                variation: None,
                direction: None,
                seed_box: CoordBox::new(vec![-0.5, -0.5, -0.5], vec![0.5, 0.5, 0.5]),
            })
            .probe_only()
            .done(),
    }
}

fn incomplete_plane() -> CatalogEntry {
    Builder::new(
        "incomplete_plane",
        CoordBox::cube(2, -5.0, 45.0),
        Signature::Lorentzian,
        Arc::new(Flat {
            dim: 2,
            first: -1.0,
        }),
        "unit timelike field on the Lorentzian plane whose standard variation is incomplete",
    )
    .field(VectorFieldExpr::new("E", BoostField))
    .known(
        "E is unit timelike for g_L",
        "evaluate_metric",
        1e-12,
        Check::FieldNorm {
            field: "E".into(),
            t: 0.0,
            value: -1.0,
        },
    )
    .known(
        "E is unit for g_R",
        "evaluate_metric",
        1e-12,
        Check::FieldNorm {
            field: "E".into(),
            t: 2.0,
            value: 1.0,
        },
    )
    .known(
        "g_L is flat",
        "sectional",
        1e-12,
        sectional_check(None, 0.0, 0.0),
    )
    .sample_box(CoordBox::cube(2, -1.5, 1.5))
    .probe(ProbeSpec {
        variation: Some(("E".into(), 2.0)),
        direction: Some(vec![1.0, 1.0]),
        seed_box: CoordBox::cube(2, -0.2, 0.2),
    })
    .done()
}

fn product_circle() -> CatalogEntry {
    let metric: Arc<dyn crate::expr::MetricFn> = Arc::new(RippleProduct);
    let u = VectorFieldExpr::new("U", ConstantField(vec![0.0, 0.0, 1.0]));
    let lambda = ScalarFieldExpr::new("f", RippleHeight);
    let e = VectorFieldExpr {
        name: "E".into(),
        components: Arc::new(Composed(UnitOf {
            metric: metric.clone(),
            field: u.components.clone(),
        })),
    };
    Builder::new(
        "product_circle",
        CoordBox::new(vec![-2.0, -2.0, -PI], vec![2.0, 2.0, PI]).with_periodic(&[2]),
        Signature::Lorentzian,
        metric,
        "N × S¹ with g₀ - f² dt² and the timelike Killing field ∂t",
    )
    .field(e)
    .complete(&["E"])
    .scalar(lambda.clone())
    .scalar(ScalarFieldExpr::new(
        "ln_f",
        Composed(LnOf(lambda.value.clone())),
    ))
    .generator("E", u, lambda)
    .known(
        "U = ∂t is Killing",
        "classify_field",
        1e-10,
        predicate("U", "killing", true),
    )
    .known(
        "E is orthogonally normal",
        "classify_field",
        1e-9,
        predicate("E", "orthogonally_normal", true),
    )
    .known(
        "E is not Killing",
        "classify_field",
        1e-10,
        predicate("E", "killing", false),
    )
    .done()
}

fn normal_field_r3() -> CatalogEntry {
    let metric: Arc<dyn crate::expr::MetricFn> = Arc::new(Flat { dim: 3, first: 1.0 });
    let u = VectorFieldExpr::new("U", CirculantField);
    let e = VectorFieldExpr {
        name: "E".into(),
        components: Arc::new(Composed(UnitOf {
            metric: metric.clone(),
            field: u.components.clone(),
        })),
    };
    let lambda = ScalarFieldExpr {
        name: "norm_U".into(),
        value: Arc::new(Composed(NormOf {
            metric: metric.clone(),
            field: u.components.clone(),
        })),
    };
    Builder::new(
        "normal_field_r3",
        CoordBox::cube(3, 0.5, 1.5),
        Signature::Riemannian,
        metric,
        "a field on R³ with normal associated endomorphism that is neither closed nor conformal",
    )
    .field(e)
    .scalar(lambda.clone())
    .generator("E", u, lambda)
    .known(
        "A_U is normal",
        "classify_field",
        1e-10,
        predicate("U", "normal", true),
    )
    .known(
        "U is not closed",
        "classify_field",
        1e-10,
        predicate("U", "closed", false),
    )
    .known(
        "U is not conformal",
        "classify_field",
        1e-10,
        predicate("U", "conformal", false),
    )
    .done()
}

/// Catalog ids in listing order.
pub const IDS: &[&str] = &[
    "euclidean_2",
    "euclidean_3",
    "euclidean_4",
    "minkowski_3",
    "minkowski_4",
    "hyperbolic_2",
    "hyperbolic_3",
    "sphere_2",
    "sphere_cap_product",
    "berger_s3",
    "warped_line",
    "warped_line_exp",
    "incomplete_plane",
    "product_circle",
    "normal_field_r3",
];

pub fn get_entry(id: &str) -> Result<CatalogEntry> {
    Ok(match id {
        "euclidean_2" => euclidean(2),
        "euclidean_3" => euclidean(3),
        "euclidean_4" => euclidean(4),
        "minkowski_3" => minkowski(3),
        "minkowski_4" => minkowski(4),
        "hyperbolic_2" => hyperbolic(2),
        "hyperbolic_3" => hyperbolic(3),
        "sphere_2" => sphere_2(),
        "sphere_cap_product" => sphere_cap_product(),
        "berger_s3" => berger_s3(),
        "warped_line" => warped_line(Warp::One),
        "warped_line_exp" => warped_line(Warp::ExpSquare),
        "incomplete_plane" => incomplete_plane(),
        "product_circle" => product_circle(),
        "normal_field_r3" => normal_field_r3(),
        other => return Err(Error::UnknownManifold(other.to_string())),
    })
}

pub fn all_entries() -> Vec<CatalogEntry> {
    IDS.iter()
        .map(|id| get_entry(id).expect("catalog id"))
        .collect()
}

pub fn expected_assertions(id: &str) -> Result<Vec<Assertion>> {
    Ok(get_entry(id)?.known)
}

/// Outcome of checking one assertion: the worst deviation seen and whether
/// it is within tolerance (or, for failing predicates, clearly outside).
#[derive(Clone, Debug, Serialize)]
pub struct AssertionOutcome {
    pub description: String,
    pub value: f64,
    pub pass: bool,
}

fn chart_for(entry: &CatalogEntry, field: &Option<String>, t: f64) -> Result<Chart> {
    match field {
        Some(f) if t != 0.0 => Ok(Variation::new(&VariationConfig {
            t,
            base: entry.chart.clone(),
            e: entry.field(f)?.clone(),
        })?
        .varied),
        _ => Ok(entry.chart.clone()),
    }
}

pub fn check_assertion(
    entry: &CatalogEntry,
    a: &Assertion,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<AssertionOutcome> {
    let pts = samples.points(&entry.sample_box, &format!("assert:{}", entry.id));
    let mut rng = samples.rng(&format!("assert-vectors:{}", entry.id));
    let mut worst: f64 = 0.0;
    let pass = match &a.check {
        Check::Sectional { field, t, value } => {
            let chart = chart_for(entry, field, *t)?;
            for p in &pts {
                let b = curvature_bundle(&chart, p, None, cfg)?;
                for _ in 0..4 {
                    let u = b.frame.combine(&uniform_vector(b.dim(), &mut rng));
                    let v = b.frame.combine(&uniform_vector(b.dim(), &mut rng));
                    match sectional(&b, &u, &v) {
                        Ok(k) => worst = worst.max((k - value).abs()),
                        Err(Error::DegeneratePlane { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            worst <= a.tolerance
        }
        Check::Scalar { field, t, value } => {
            let chart = chart_for(entry, field, *t)?;
            for p in &pts {
                let b = curvature_bundle(&chart, p, None, cfg)?;
                worst = worst.max((b.scalar - value).abs() / value.abs().max(1.0));
            }
            worst <= a.tolerance
        }
        Check::Predicate {
            field,
            predicate,
            holds,
        } => {
            let c = classify_field_in(
                &entry.chart,
                &entry.sample_box,
                entry.field(field)?,
                samples,
                cfg,
            )?;
            worst = c
                .residual(predicate)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown predicate '{predicate}'")))?;
            if *holds {
                worst <= a.tolerance
            } else {
                worst > 1e-6
            }
        }
        Check::FieldNorm { field, t, value } => {
            let chart = chart_for(entry, &Some(field.clone()), *t)?;
            let e = entry.field(field)?;
            let wide = samples.points(&entry.chart.domain, &format!("assert-norm:{}", entry.id));
            for p in pts.iter().chain(&wide) {
                worst = worst.max((norm_squared(&chart, e, p) - value).abs());
            }
            worst <= a.tolerance
        }
        Check::KillingNorm { field, value } => {
            let e = entry.field(field)?;
            for p in &pts {
                let local = Local::new(&entry.chart, p, cfg)?;
                let fc = FieldCalculus::from_local(&local, &local.lift_field(&*e.components))?;
                let b = curvature_bundle(&entry.chart, p, None, cfg)?;
                let ric = b.ric(&fc.e, &fc.e);
                let a_norm: f64 = b
                    .frame
                    .vectors
                    .iter()
                    .zip(&b.frame.signs)
                    .map(|(v, s)| {
                        let av: Vec<f64> = crate::geometry::tensor::mat_vec(&fc.a_e, v);
                        s * b.inner(&av, &av)
                    })
                    .sum();
                worst = worst.max((ric - value).abs()).max((a_norm - value).abs());
            }
            worst <= a.tolerance
        }
    };
    Ok(AssertionOutcome {
        description: a.description.clone(),
        value: worst,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_resolves_and_unknown_ids_fail() {
        for id in IDS {
            let e = get_entry(id).unwrap();
            assert_eq!(&e.id, id);
            assert!(!e.fields.is_empty());
        }
        assert!(matches!(get_entry("nope"), Err(Error::UnknownManifold(_))));
    }

    #[test]
    fn catalog_fields_are_unit() {
        for e in all_entries() {
            for f in e.fields.values() {
                crate::variation::field_epsilon(&e.chart, f)
                    .unwrap_or_else(|err| panic!("{}:{} {err}", e.id, f.name));
            }
        }
    }

    #[test]
    fn boost_field_matches_the_exponential_form() {
        let p = [0.3, -0.1];
        let f = (-(p[0] + p[1])).exp();
        let e = VectorFieldExpr::new("E", BoostField).at(&p);
        assert!((e[0] - (1.0 + f * f) / (2.0 * f)).abs() < 1e-15);
        assert!((e[1] - (1.0 - f * f) / (2.0 * f)).abs() < 1e-15);
    }
}
