//! The identity table. Every entry evaluates both sides of one relation at a
//! point; the runner turns the pairs into residuals.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

use super::context::{Aux, Member, PointContext};
use super::{Guard, IdentitySpec, Kind};
use crate::error::Result;
use crate::geometry::{lightlike_sectional, sectional};

type Pairs = Result<Vec<(f64, f64)>>;

fn lin(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

fn scaled(a: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| a * v).collect()
}

/// Componentwise pairs of two vectors, read in the base frame.
fn vector_pairs(c: &PointContext, l: &[f64], r: &[f64]) -> Vec<(f64, f64)> {
    let f = &c.base.bundle.frame;
    let g = &c.base.local.gv;
    f.components(g, l)
        .into_iter()
        .zip(f.components(g, r))
        .collect()
}

/// `√|g_t(E,E)|`, so that `E = r E_t` with `E_t` the varied unit field.
fn varied_ratio(c: &PointContext) -> f64 {
    (c.epsilon + c.t).abs().sqrt()
}

fn prop2_3(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let (u, v, w) = (a.vector(), a.vector(), a.vector());
    let b = &c.base;
    let e = c.e();
    let lhs = c.gt(&c.d_direct(&u, &v), &w);
    let rhs = 0.5
        * c.t
        * (b.g(e, &w) * b.lie(&u, &v) + b.g(e, &u) * b.dw(&v, &w) + b.g(e, &v) * b.dw(&u, &w));
    Ok(vec![(lhs, rhs)])
}

fn cor2_4_1(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let x = a.perp(&[])?;
    let v = a.vector();
    Ok(vec![(c.g(&c.d_direct(&x, &v), &x), 0.0)])
}

fn cor2_4_2(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let v = a.vector();
    Ok(vec![(c.g(&c.d_direct(&v, c.e()), c.e()), 0.0)])
}

fn cor2_4_3(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let (v, w) = (a.vector(), a.vector());
    let e = c.e();
    let acc = c.base.accel();
    let lhs = c.gt(&c.d_direct(&v, e), &w) + c.gt(&c.d_direct(&w, e), &v);
    let rhs = c.t * (c.g(e, &v) * c.g(&w, acc) + c.g(e, &w) * c.g(&v, acc));
    Ok(vec![(lhs, rhs)])
}

fn cor2_4_4(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let r2 = varied_ratio(c).powi(2);
    let lhs = scaled(r2, c.varied.accel());
    let rhs = scaled(c.factor(), c.base.accel());
    Ok(vector_pairs(c, &lhs, &rhs))
}

fn cor2_4_5(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let x = a.perp(&[])?;
    let y = a.perp(&[])?;
    let lhs = c.d_direct(&x, &y);
    let rhs = scaled(c.t / (2.0 * c.factor()) * c.base.lie(&x, &y), c.e());
    Ok(vector_pairs(c, &lhs, &rhs))
}

fn cor2_4_6(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let x = a.perp(&[])?;
    let y = a.perp(&[])?;
    let lhs = varied_ratio(c) * c.varied.lie(&x, &y);
    Ok(vec![(lhs, c.base.lie(&x, &y))])
}

fn cor2_4_7(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    Ok(vec![(c.probe_div.1, c.probe_div.0)])
}

fn lemma3_1(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let (u, v, w) = (a.vector(), a.vector(), a.vector());
    let lhs = c.varied.bundle.r_apply(&u, &v, &w);
    let mut rhs = c.base.bundle.r_apply(&u, &v, &w);
    let terms = [
        (1.0, c.nabla_d(&u, &v, &w)),
        (-1.0, c.nabla_d(&v, &u, &w)),
        (1.0, c.d(&u, &c.d(&v, &w))),
        (-1.0, c.d(&v, &c.d(&u, &w))),
    ];
    for (s, term) in terms {
        rhs = lin(1.0, &rhs, s, &term);
    }
    Ok(vector_pairs(c, &lhs, &rhs))
}

fn thm3_2(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (t, eps) = (c.t, c.epsilon);
    let e = c.e();
    let x = a.perp(&[])?;
    let ax = b.a(&x);
    let lhs = c.varied.rm(&x, e, e, &x);
    let rhs = b.rm(&x, e, e, &x)
        + t * (eps * b.g(&b.nabla_accel(&x), &x) - b.g(b.accel(), &x).powi(2))
        + t * (2.0 * eps + t) / 2.0 * (b.g(&ax, &ax) - b.g(&b.a(&ax), &x));
    Ok(vec![(lhs, rhs)])
}

fn gauss_curvature(m: &Member) -> f64 {
    m.scalar() / 2.0
}

fn cor3_3(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    Ok(vec![(
        gauss_curvature(&c.varied),
        gauss_curvature(&c.base) / c.factor(),
    )])
}

/// `K_t(span(X,E))` and `K(span(X,E))` for `X ⊥ E`.
fn sectionals_with_e(c: &PointContext, x: &[f64]) -> Result<(f64, f64)> {
    Ok((
        sectional(&c.varied.bundle, x, c.e())?,
        sectional(&c.base.bundle, x, c.e())?,
    ))
}

fn cor3_4(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let t = c.t;
    let x = a.perp(&[])?;
    let (kt, kr) = sectionals_with_e(c, &x)?;
    let bound = kr / (1.0 + t);
    Ok(if t == -2.0 || t == 0.0 {
        vec![(kt, bound), (bound, kt)]
    } else if t < -2.0 || (-1.0 < t && t < 0.0) {
        vec![(kt, bound)]
    } else {
        vec![(bound, kt)]
    })
}

fn cor3_4_eq(a: &mut Aux) -> Pairs {
    let x = a.perp(&[])?;
    let (kl, kr) = sectionals_with_e(a.ctx, &x)?;
    Ok(vec![(kl, -kr)])
}

fn cor3_5(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (t, eps) = (c.t, c.epsilon);
    let e = c.e();
    let (_, tr2, norm) = b.restricted_traces();
    let lhs = c.varied.ric(e, e);
    let rhs = b.ric(e, e) + eps * t * b.div_accel + t * (2.0 * eps + t) / 2.0 * (norm - tr2);
    Ok(vec![(lhs, rhs)])
}

fn thm3_6(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (t, eps) = (c.t, c.epsilon);
    let x = a.perp(&[])?;
    let y = a.perp(&[])?;
    let (ax, ay) = (b.a(&x), b.a(&y));
    let lhs = c.varied.rm(&x, &y, &y, &x);
    let rhs = b.rm(&x, &y, &y, &x)
        + t / c.factor()
            * (b.g(&ax, &x) * b.g(&ay, &y)
                - b.g(&ax, &y) * b.g(&ay, &x)
                - (4.0 + 3.0 * eps * t) / 4.0 * b.dw(&x, &y).powi(2));
    Ok(vec![(lhs, rhs)])
}

fn cor3_8(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (t, eps, f) = (c.t, c.epsilon, c.factor());
    let e = c.e();
    let x = a.perp(&[])?;
    let ax = b.a(&x);
    let lhs = c.varied.ric(&x, &x);
    let rhs = b.ric(&x, &x) - t / f * b.rm(&x, e, e, &x)
        + t / f * b.g(&ax, &x) * b.fc.div
        + eps * t * t / f * b.g(&b.a(&ax), &x)
        - t * b.g(&ax, &ax)
        + t / f * (b.g(&b.nabla_accel(&x), &x) - eps * b.g(b.accel(), &x).powi(2));
    Ok(vec![(lhs, rhs)])
}

/// Right side of the scalar-curvature relation obtained by tracing the Ricci
/// relations for `E` and for `X ⊥ E`. The printed statement carries an extra
/// `−t g(∇_E E, ∇_E E)`, kept behind `printed` for comparison.
pub(crate) fn scalar_relation_rhs(c: &PointContext, printed: bool) -> f64 {
    let b = &c.base;
    let (t, eps, f) = (c.t, c.epsilon, c.factor());
    let e = c.e();
    let (tr, tr2, norm) = b.restricted_traces();
    let acc = b.accel();
    let extra = if printed { -t * b.g(acc, acc) } else { 0.0 };
    b.scalar() - 2.0 * t / f * b.ric(e, e)
        + 2.0 * t / f * b.div_accel
        + extra
        + t / f * (tr * tr - tr2)
        + eps * t * t / (2.0 * f) * (tr2 - norm)
}

fn cor3_9(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    Ok(vec![(c.varied.scalar(), scalar_relation_rhs(c, false))])
}

fn prop3_10(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (t, eps) = (c.t, c.epsilon);
    let e = c.e();
    let x = a.perp(&[])?;
    let y = a.perp(&[])?;
    let acc = b.accel();
    let lhs = c.varied.rm(e, &x, &x, &y);
    let rhs = b.rm(e, &x, &x, &y)
        + t / 2.0
            * (-eps * b.nabla_dw(&x, &x, &y) + b.g(&b.a(&x), &x) * b.g(acc, &y)
                - 2.0 * b.g(&x, &b.a(&y)) * b.g(acc, &x)
                + b.g(&b.a(&x), &y) * b.g(acc, &x));
    Ok(vec![(lhs, rhs)])
}

fn eq4_domega(a: &mut Aux) -> Pairs {
    let b = &a.ctx.base;
    let x = a.perp(&[])?;
    let y = a.perp(&[&x])?;
    Ok(vec![(
        b.nabla_dw(&x, &x, &y),
        -2.0 * b.rm(&b.e, &x, &x, &y),
    )])
}

/// `V* = αE − Y` for `V = αE + Y`.
fn mirror(c: &PointContext, v: &[f64]) -> Vec<f64> {
    let alpha = c.g(v, c.e());
    lin(2.0 * alpha, c.e(), -1.0, v)
}

fn eq4_sym(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let x = a.perp(&[])?;
    let y = a.perp(&[&x])?;
    let alpha = a.uniform(-1.0, 1.0);
    let v = lin(alpha, c.e(), 1.0, &y);
    let vs = mirror(c, &v);
    let lhs = c.varied.rm(&v, &x, &x, &v);
    let rhs = b.rm(&vs, &x, &x, &vs) + 6.0 * b.g(&b.a(&x), &y).powi(2);
    Ok(vec![(lhs, rhs)])
}

/// Unit `X ⊥ E` and a unit `V = cos θ E + sin θ Y` with `Y ⊥ E, X`.
fn tilted_plane(a: &mut Aux, theta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let x = a.unit_perp(&[])?;
    let y = a.unit_perp(&[&x])?;
    let v = lin(theta.cos(), a.ctx.e(), theta.sin(), &y);
    Ok((x, v))
}

fn nondegenerate_angle(a: &mut Aux) -> f64 {
    loop {
        let th = a.uniform(0.05, FRAC_PI_2 - 0.05);
        if (2.0 * th).cos().abs() >= 1e-3 {
            return th;
        }
    }
}

fn prop4_1_1(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let th = nondegenerate_angle(a);
    let (x, v) = tilted_plane(a, th)?;
    let kr_star = sectional(&c.base.bundle, &x, &mirror(c, &v))?;
    let kl = sectional(&c.varied.bundle, &x, &v)?;
    Ok(vec![(kr_star, -(2.0 * th).cos() * kl)])
}

fn prop4_1_1_eq(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let x = a.unit_perp(&[])?;
    let kr = sectional(&c.base.bundle, &x, c.e())?;
    let kl = sectional(&c.varied.bundle, &x, c.e())?;
    Ok(vec![(kr, -kl)])
}

/// Unit `X ⊥ E` and a `g_L`-null `u = (±E + Y)/√2` with `Y ⊥ E, X` unit.
fn null_plane(a: &mut Aux) -> Result<(Vec<f64>, Vec<f64>)> {
    let x = a.unit_perp(&[])?;
    let y = a.unit_perp(&[&x])?;
    let s = a.sign();
    Ok((x, lin(s * FRAC_1_SQRT_2, a.ctx.e(), FRAC_1_SQRT_2, &y)))
}

fn prop4_1_2(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let (x, u) = null_plane(a)?;
    let kr_star = sectional(&c.base.bundle, &x, &mirror(c, &u))?;
    let kl = lightlike_sectional(&c.varied.bundle, &u, &x, c.e())?;
    Ok(vec![(2.0 * kr_star, kl)])
}

fn prop4_1_3(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let v = a.vector();
    let x = b.project(&v);
    let ax = b.a(&x);
    let vs = mirror(c, &v);
    Ok(vec![(
        c.varied.ric(&v, &v),
        b.ric(&vs, &vs) + 4.0 * b.g(&ax, &ax),
    )])
}

fn prop4_1_4(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let e = c.e();
    Ok(vec![(
        c.base.scalar() + 2.0 * c.base.ric(e, e),
        c.varied.scalar(),
    )])
}

fn thm4_5(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let t = c.t;
    let gen = b.generator.as_ref().expect("guarded");
    let u = &gen.u;
    let lam = gen.lambda.value;
    let uu = &gen.fc.accel;
    let (_, _, norm) = b.restricted_traces();
    let lhs = c.varied.ric(u, u);
    let rhs = b.ric(u, u) + 2.0 * t / (lam * lam) * b.g(uu, uu) - t * gen.div_accel
        + t * (t - 2.0) * lam * lam * norm;
    Ok(vec![(lhs, rhs)])
}

fn ex4_6(a: &mut Aux) -> Pairs {
    let b = &a.ctx.base;
    let gen = b.generator.as_ref().expect("guarded");
    let u = &gen.u;
    let uu = &gen.fc.accel;
    let grad = &gen.lambda.grad;
    let lhs = b.ric(u, u) - b.g(uu, uu) / b.g(u, u);
    let rhs = -b.g(grad, grad) + gen.div_lambda_grad;
    Ok(vec![(lhs, rhs)])
}

fn lemma4_3_1(a: &mut Aux) -> Pairs {
    let b = &a.ctx.base;
    let gen = b.generator.as_ref().expect("guarded");
    let rho = b.fc.div / (b.dim() as f64 - 1.0);
    Ok(vec![(b.g(&gen.lambda.grad, &b.e), gen.lambda.value * rho)])
}

fn lemma4_3_2(a: &mut Aux) -> Pairs {
    let b = &a.ctx.base;
    let gen = b.generator.as_ref().expect("guarded");
    let x = a.perp(&[])?;
    let lhs = b.epsilon * b.g(&gen.lambda.grad, &x);
    Ok(vec![(lhs, -gen.lambda.value * b.g(b.accel(), &x))])
}

fn lemma4_4(a: &mut Aux) -> Pairs {
    let v = &a.ctx.varied;
    let gen = v.generator.as_ref().expect("guarded");
    let f = &v.bundle.frame;
    let scale = 1.0 + gen.fc.nabla_omega(&v.local.gv).abs().max();
    let mut out = Vec::new();
    for (i, ei) in f.vectors.iter().enumerate() {
        for ej in &f.vectors[i..] {
            out.push((
                crate::geometry::tensor::inner(&gen.fc.lie_g, ei, ej) / scale,
                0.0,
            ));
        }
    }
    Ok(out)
}

fn sec5_connection(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (u, v) = (a.vector(), a.vector());
    let rhs = scaled(2.0 * b.g(&b.a(&u), &v), c.e());
    Ok(vector_pairs(c, &c.d_direct(&u, &v), &rhs))
}

/// `K̂ − K` on `span(X, Y)` for `g`-orthonormal `X, Y ⊥ E`, by the Gauss equation
/// of the leaves orthogonal to `E`.
fn leaf_excess(b: &Member, x: &[f64], y: &[f64]) -> f64 {
    let (ax, ay) = (b.a(x), b.a(y));
    b.g(&ax, x) * b.g(&ay, y) - b.g(&ax, y).powi(2)
}

fn prop5_1_1(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let th = nondegenerate_angle(a);
    let (x, v) = tilted_plane(a, th)?;
    let y = b.project(&v);
    let y = scaled(1.0 / th.sin(), &y);
    let kl = sectional(&c.varied.bundle, &x, &v)?;
    let kr = sectional(&b.bundle, &x, &v)?;
    let rhs = kr + 2.0 * th.sin().powi(2) * leaf_excess(b, &x, &y);
    Ok(vec![(-(2.0 * th).cos() * kl, rhs)])
}

fn prop5_1_2(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let (x, u) = null_plane(a)?;
    let y = scaled(SQRT_2, &b.project(&u));
    let kl = lightlike_sectional(&c.varied.bundle, &u, &x, c.e())?;
    let kr = sectional(&b.bundle, &x, &u)?;
    Ok(vec![(kl, 2.0 * kr + 2.0 * leaf_excess(b, &x, &y))])
}

fn prop5_1_3(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let e = c.e();
    let v = a.vector();
    let av = b.a(&v);
    let rhs = b.ric(&v, &v) + 2.0 * b.g(&av, &v) * b.fc.div
        - 2.0 * b.g(&av, &av)
        - 2.0 * b.rm(&v, e, e, &v);
    Ok(vec![(c.varied.ric(&v, &v), rhs)])
}

fn prop5_1_4(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    let b = &c.base;
    let rhs = b.scalar() + 4.0 * b.e_div + 2.0 * (b.a_norm2() + b.fc.div.powi(2));
    Ok(vec![(c.varied.scalar(), rhs)])
}

fn thm5_2(a: &mut Aux) -> Pairs {
    let c = a.ctx;
    Ok(vec![(c.base.scalar(), c.varied.scalar())])
}

fn lemma6_4(a: &mut Aux) -> Pairs {
    let (l, _) = a.ctx.lorentzian_riemannian();
    let gen = l.generator.as_ref().expect("guarded");
    let e = &l.e;
    let x = a.perp(&[])?;
    let ax = l.a(&x);
    let hess = crate::geometry::tensor::inner(&gen.lambda.hessian, &x, &x);
    Ok(vec![(
        l.rm(&x, e, e, &x),
        hess / gen.lambda.value + l.g(&ax, &ax),
    )])
}

/// `X₀ ⊥ E` with `g_L(X₀,X₀) = 1/2`, `ξ = −E/√2 + X₀` and `N = E/√2 + X₀`.
fn null_pair(a: &mut Aux, l: &Member) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let x = a.perp(&[])?;
    let x0 = scaled(FRAC_1_SQRT_2 / l.g(&x, &x).sqrt(), &x);
    let xi = lin(-FRAC_1_SQRT_2, &l.e, 1.0, &x0);
    let nn = lin(FRAC_1_SQRT_2, &l.e, 1.0, &x0);
    Ok((x0, xi, nn))
}

fn thm6_5(a: &mut Aux) -> Pairs {
    let (l, r) = a.ctx.lorentzian_riemannian();
    let gen = l.generator.as_ref().expect("guarded");
    let (x0, xi, nn) = null_pair(a, l)?;
    let ax0 = l.a(&x0);
    let lhs = r.ric(&nn, &xi);
    let split = -0.5 * r.ric(&l.e, &l.e) + r.ric(&x0, &x0);
    let rhs = l.ric(&nn, &xi) + gen.ln_lambda.laplacian - 4.0 * l.g(&ax0, &ax0);
    Ok(vec![(lhs, split), (lhs, rhs)])
}

fn cor6_6(a: &mut Aux) -> Pairs {
    let (l, _) = a.ctx.lorentzian_riemannian();
    let e = &l.e;
    let (x0, xi, nn) = null_pair(a, l)?;
    let ax0 = l.a(&x0);
    let first = l.g(&ax0, &ax0);
    let mid = l.rm(&x0, e, e, &x0);
    let k = sectional(&l.bundle, &xi, &nn)?;
    Ok(vec![(first, mid), (mid, -0.5 * k)])
}

use Guard::*;

const LORENTZ_TIMELIKE: Guard = TimelikeIfLorentzian;

macro_rules! spec {
    ($id:expr, $cite:expr, $kind:expr, [$($g:expr),*], $draws:expr, $f:expr) => {
        IdentitySpec {
            id: $id,
            citation: $cite,
            kind: $kind,
            requires: &[$($g),*],
            draws: $draws,
            eval: $f,
        }
    };
}

pub(super) static REGISTRY: &[IdentitySpec] = &[
    spec!("prop2.3", "Proposition (difference tensor), \"g_t(D^t(U,V),W)=\\frac{t}{2}(ω(W)(L_E g)(U,V)+ω(U)dω(V,W)+ω(V)dω(U,W))\"", Kind::Equality, [], 3, prop2_3),
    spec!("cor2.4.1", "Corollary (difference tensor consequences) item 1, \"g(D^t(X,V),X)=0\"", Kind::Equality, [], 3, cor2_4_1),
    spec!("cor2.4.2", "Corollary (difference tensor consequences) item 2, \"g(D^t(V,E),E)=0\"", Kind::Equality, [], 3, cor2_4_2),
    spec!("cor2.4.3", "Corollary (difference tensor consequences) item 3, \"g_t(D^t(V,E),W)+g_t(D^t(W,E),V)=t(ω(V)g(W,∇_EE)+ω(W)g(V,∇_EE))\"", Kind::Equality, [], 3, cor2_4_3),
    spec!("cor2.4.4", "Corollary (difference tensor consequences) item 4, \"∇^t_E E=(1+εt)∇_E E\"", Kind::Equality, [], 1, cor2_4_4),
    spec!("cor2.4.5", "Corollary (difference tensor consequences) item 5, \"D^t(X,Y)=\\frac{t}{2(1+εt)}(L_Eg)(X,Y)E\"", Kind::Equality, [], 3, cor2_4_5),
    spec!("cor2.4.6", "Corollary (difference tensor consequences) item 6, \"(L_Eg_t)(X,Y)=(L_Eg)(X,Y)\"", Kind::Equality, [], 3, cor2_4_6),
    spec!("cor2.4.7", "Corollary (difference tensor consequences) item 7, \"div_t V=div V\"", Kind::Equality, [], 1, cor2_4_7),
    spec!("lemma3.1", "Lemma (curvature difference), \"R^t_{UV}W=R_{UV}W+(∇_U D^t)(V,W)−(∇_V D^t)(U,W)+D^t(U,D^t(V,W))−D^t(V,D^t(U,W))\"", Kind::Equality, [], 3, lemma3_1),
    spec!("thm3.2", "Theorem (plane containing E), \"t(εg(∇_X A_E(E),X)−g(A_E(E),X)^2)+\\frac{t(2ε+t)}{2}(g(A_E(X),A_E(X))−g(A^2_E(X),X))\"", Kind::Equality, [Predicate("orthogonally_normal"), LORENTZ_TIMELIKE], 3, thm3_2),
    spec!("cor3.3", "Corollary (surfaces), \"K^t=\\frac{1}{1+εt}K\"", Kind::Equality, [Dim(2), Predicate("geodesic"), LORENTZ_TIMELIKE], 1, cor3_3),
    spec!("cor3.4", "Corollary (sectional inequalities), \"K_t(Π)≤\\frac{1}{1+t}K_R(Π) for t∈(−∞,−2)∪(−1,0); ≥ for t∈(−2,−1)∪(0,∞)\"", Kind::Inequality, [RiemannianBase, Predicate("normal")], 3, cor3_4),
    spec!("cor3.4.eq", "Corollary (sectional inequalities), \"K_L(Π)=−K_R(Π)\"", Kind::Equality, [RiemannianBase, Predicate("normal"), StandardT], 3, cor3_4_eq),
    spec!("cor3.5", "Corollary (Ricci of E), \"Ric_t(E,E)=Ric(E,E)+εt div∇_E E+\\frac{t(2ε+t)}{2}(||A'_E||^2−tr(A'^2_E))\"", Kind::Equality, [Predicate("orthogonally_normal"), LORENTZ_TIMELIKE], 1, cor3_5),
    spec!("thm3.6", "Theorem (orthogonal planes), \"\\frac{t}{1+εt}(g(A_E(X),X)g(A_E(Y),Y)−g(A_E(X),Y)g(A_E(Y),X)−\\frac{4+3εt}{4}dω(X,Y)^2)\"", Kind::Equality, [LORENTZ_TIMELIKE], 3, thm3_6),
    spec!("cor3.8", "Corollary (Ricci of X), \"−\\frac{t}{1+εt}g(R_{XE}E,X)+\\frac{t}{1+εt}g(A_E(X),X)div E+\\frac{εt^2}{1+εt}g(A^2_E(X),X)−tg(A_E(X),A_E(X))\"", Kind::Equality, [Predicate("orthogonally_normal"), LORENTZ_TIMELIKE], 3, cor3_8),
    spec!("cor3.9", "Corollary (scalar curvatures), \"\\frac{t}{1+εt}(tr(A'_E)^2−tr(A'^2_E))+\\frac{εt^2}{2(1+εt)}(tr(A'^2_E)−||A'_E||^2)\"", Kind::Equality, [Predicate("orthogonally_normal"), LORENTZ_TIMELIKE], 1, cor3_9),
    spec!("prop3.10", "Proposition (mixed term), \"\\frac{t}{2}(−ε(∇_X dω)(X,Y)+g(A_E(X),X)g(A_E(E),Y)−2g(X,A_E(Y))g(A_E(E),X)+g(A_E(X),Y)g(A_E(E),X))\"", Kind::Equality, [LORENTZ_TIMELIKE], 3, prop3_10),
    spec!("eq4.domega", "Killing identity, \"∇^R_X(dω)(X,Y)=−2g_R(R^R_{EX}X,Y)\"", Kind::Equality, [MinDim(3), RiemannianBase, Predicate("killing")], 3, eq4_domega),
    spec!("eq4.sym", "Killing standard variation, \"g_L(R^L_{VX}X,V)=g_R(R^R_{V^*X}X,V^*)+6g_R(∇^R_X E,Y)^2\"", Kind::Equality, [MinDim(3), RiemannianBase, Predicate("killing"), StandardT], 3, eq4_sym),
    spec!("prop4.1.1", "Proposition (Killing comparison) item 1, \"K_R(Π^*)≤−cos(2θ)K_L(Π)\"", Kind::Inequality, [MinDim(3), RiemannianBase, Predicate("killing"), StandardT], 3, prop4_1_1),
    spec!("prop4.1.1.eq", "Proposition (Killing comparison) item 1, \"the equality holds if and only if E∈Π\"", Kind::Equality, [RiemannianBase, Predicate("killing"), StandardT], 3, prop4_1_1_eq),
    spec!("prop4.1.2", "Proposition (Killing comparison) item 2, \"2K_R(Π^*)≤\\mathcal{K}_L^E(Π)\"", Kind::Inequality, [MinDim(3), RiemannianBase, Predicate("killing"), StandardT], 3, prop4_1_2),
    spec!("prop4.1.3", "Proposition (Killing comparison) item 3, \"Ric_L(v,v)=Ric_R(v^*,v^*)+4g_R(∇^R_X E,∇^R_X E)\"", Kind::Equality, [RiemannianBase, Predicate("killing"), StandardT], 3, prop4_1_3),
    spec!("prop4.1.4", "Proposition (Killing comparison) item 4, \"S_R+2Ric_R(E,E)=S_L\"", Kind::Equality, [RiemannianBase, Predicate("killing"), StandardT], 1, prop4_1_4),
    spec!("lemma4.3.1", "Lemma (orthogonally conformal rescaling), \"E(λ)=λρ\"", Kind::Equality, [HasGenerator, GeneratorPredicate("conformal"), Predicate("orthogonally_conformal")], 1, lemma4_3_1),
    spec!("lemma4.3.2", "Lemma (orthogonally conformal rescaling), \"cX(λ)=−λg(∇_EE,X)\"", Kind::Equality, [HasGenerator, GeneratorPredicate("conformal"), Predicate("orthogonally_conformal")], 3, lemma4_3_2),
    spec!("lemma4.4", "Lemma (U stays Killing), \"U is also conformal/Killing for the canonical variation along E\"", Kind::Equality, [HasGenerator, GeneratorPredicate("killing")], 1, lemma4_4),
    spec!("thm4.5.integrand", "Theorem (Lorentzian Bochner inequality), proof, \"Ric_L(U,U)+\\frac{2t}{λ^2}g_L(∇^L_UU,∇^L_UU)−t div∇^L_UU+t(t−2)λ^2||A'_E||^2\"", Kind::Equality, [LorentzianBase, LORENTZ_TIMELIKE, HasGenerator, GeneratorPredicate("killing")], 1, thm4_5),
    spec!("ex4.6.integrand", "Example (product with a circle), pointwise integrand, \"Ric_L(U,U)−\\frac{1}{g_L(U,U)}g_L(∇^L_UU,∇^L_UU)\" = −g_L(∇f,∇f)+div_L(f∇f)", Kind::Equality, [LorentzianBase, LORENTZ_TIMELIKE, HasGenerator, GeneratorPredicate("killing"), Predicate("twist_free")], 1, ex4_6),
    spec!("sec5.connection", "Closed standard variation, \"∇^L_UV=∇^R_UV+2g_R(∇^R_U E,V)E\"", Kind::Equality, [RiemannianBase, Predicate("closed"), StandardT], 3, sec5_connection),
    spec!("prop5.1.1", "Proposition (closed comparison) item 1, \"−cos(2θ)K_L(Π)=K_R(Π)+2sin^2(θ)(\\hat{K}_R(\\mathfrak{p}(Π))−K_R(\\mathfrak{p}(Π)))\"", Kind::Equality, [MinDim(3), RiemannianBase, Predicate("closed"), StandardT], 3, prop5_1_1),
    spec!("prop5.1.2", "Proposition (closed comparison) item 2, \"\\mathcal{K}_L^E(Π)=2K_R(Π)+2(\\hat{K}_R(\\mathfrak{p}(Π))−K_R(\\mathfrak{p}(Π)))\"", Kind::Equality, [MinDim(3), RiemannianBase, Predicate("closed"), StandardT], 3, prop5_1_2),
    spec!("prop5.1.3", "Proposition (closed comparison) item 3, \"Ric_L(v,v)=Ric_R(v,v)+2g_R(A_E(v),v)div_R E−2g_R(A_E(v),A_E(v))−2g_R(R^R_{vE}E,v)\"", Kind::Equality, [RiemannianBase, Predicate("closed"), StandardT], 3, prop5_1_3),
    spec!("prop5.1.4", "Proposition (closed comparison) item 4, \"S_L=S_R+4E(div_R E)+2(||A_E||^2+(div_R E)^2)\"", Kind::Equality, [RiemannianBase, Predicate("closed"), StandardT], 1, prop5_1_4),
    spec!("thm5.2.pointwise", "Theorem (closed scalar comparison), \"S_R(p)<S_L(p)\" at some point for a nonparallel closed field", Kind::Existence, [RiemannianBase, Predicate("closed"), NotPredicate("parallel"), CompleteField, StandardT], 1, thm5_2),
    spec!("lemma6.4", "Lemma (Killing timelike field), \"g_L(R^L_{XE}E,X)=\\frac{1}{λ}g_L(∇_X^L∇λ,X)+g_L(∇^L_X E,∇^L_X E)\"", Kind::Equality, [LorentzianMember, HasGenerator, GeneratorPredicate("killing")], 3, lemma6_4),
    spec!("thm6.5.ric", "Theorem (null hypersurfaces of Killing variations), proof, \"Ric_R(N,ξ)=−\\frac{1}{2}Ric_R(E,E)+Ric_R(X_0,X_0)=Ric_L(N,ξ)+Δln λ−4g_L(∇^L_{X_0}E,∇^L_{X_0}E)\"", Kind::Equality, [StandardT, HasGenerator, GeneratorPredicate("killing")], 3, thm6_5),
    spec!("cor6.6.k", "Corollary (unit Killing field), \"g_L(∇^L_{X_0}E,∇^L_{X_0}E)=g_L(R^L_{X_0E}E,X_0)=−\\frac{1}{2}K^L(span(ξ,N))\"", Kind::Equality, [LorentzianMember, Predicate("killing")], 3, cor6_6),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_entry;
    use crate::geometry::DifferentiationConfig;
    use crate::variation::{Variation, VariationConfig};

    #[test]
    fn printed_scalar_relation_is_off_by_the_acceleration_term() {
        let entry = get_entry("hyperbolic_3").unwrap();
        let cfg = DifferentiationConfig::default();
        for t in [-0.5, 1.0, 3.0] {
            let var = Variation::new(&VariationConfig {
                t,
                base: entry.chart.clone(),
                e: entry.field("E2").unwrap().clone(),
            })
            .unwrap();
            let c =
                PointContext::new(&entry, "E2", &var, &entry.sample_box.center(), &cfg).unwrap();
            let acc = c.base.accel();
            let acc2 = c.base.g(acc, acc);
            assert!((acc2 - 1.0).abs() < 1e-12);
            let lhs = c.varied.scalar();
            assert!((lhs - scalar_relation_rhs(&c, false)).abs() < 1e-10);
            let gap = scalar_relation_rhs(&c, true) - lhs;
            assert!((gap + t * acc2).abs() < 1e-10, "t = {t}: gap {gap}");
        }
    }
}
