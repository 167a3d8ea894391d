use crate::error::{domain, range, Error, Result};
use crate::slice_transforms::as_cap_field;
use crate::sphere_core::point::{norm, Coords};
use crate::sphere_core::{Domain, QuadratureRule, ScalarField, SpherePoint, Support};

use super::radon::{radon, semyanistyi_of_data, PlaneFn, RadonData};
use super::stereo::{Hyperplane, StereoMap};

/// `(U_{a,λ} f)(x) = (a+1)P^{n+λ}(x)(f∘π)(x)/D(x)`; `λ = None` gives `U_a`,
/// which is the member `λ = −1`.
///
/// `f` must vanish near the rim `η_{n+1} = a` so the result has compact
/// support; the radius is attached to the returned field.
pub fn op_Ua(f: &ScalarField, a: f64, lambda: Option<f64>) -> Result<ScalarField> {
    let m = StereoMap::new(a)?;
    let g = as_cap_field(f, a)?;
    let h = g.cutoff_height().unwrap_or(a).min(a);
    if !(h < a) {
        return Err(Error::UnboundedSupport(format!(
            "f does not vanish near the rim η_(n+1) = {a}; U_a f has unbounded support"
        )));
    }
    let radius = if h <= -1.0 { 0.0 } else { m.radius_at_height(h) };
    let n = g.n();
    let e = n as f64 + lambda.unwrap_or(-1.0);
    ScalarField::euclidean(n, move |x| {
        let w = m.weights(x);
        let mut eta: Coords = x.iter().map(|c| w.p * c).collect();
        eta.push(w.q);
        (a + 1.0) * w.p.powf(e) / w.d * g.eval(&eta)
    })
    .with_support(Support::Ball { radius })
}

/// Pointwise `U_{a,λ}` without the support requirement.
pub(crate) fn ua_value(f: &ScalarField, m: &StereoMap, lambda: f64, x: &[f64]) -> f64 {
    let w = m.weights(x);
    let mut eta: Coords = x.iter().map(|c| w.p * c).collect();
    eta.push(w.q);
    let v = f.eval(&eta);
    if v == 0.0 {
        return 0.0;
    }
    (m.a() + 1.0) * w.p.powf(x.len() as f64 + lambda) / w.d * v
}

/// `U_{a,λ}⁻¹`: `f(η) = (w(η)/P(π⁻¹η)^λ) g(π⁻¹η)` on the cap, with
/// `P(π⁻¹η) = (a−η_{n+1})/(a+1)`.
///
/// For `λ = −1` this is `(a+1)^{n−1}(1−aη_{n+1})/(a−η_{n+1})^n g(π⁻¹η)`.
pub fn op_Ua_inv(g: &ScalarField, a: f64, lambda: Option<f64>) -> Result<ScalarField> {
    g.require_euclidean("op_Ua_inv")?;
    let m = StereoMap::new(a)?;
    let n = g.n();
    let lam = lambda.unwrap_or(-1.0);
    let g2 = g.clone();
    let f = ScalarField::on_cap(n, a, move |eta: &[f64]| {
        let u = eta[n];
        let x = m.backward(eta);
        let v = g2.eval(&x);
        if v == 0.0 {
            return 0.0;
        }
        m.jacobian(eta) / ((a - u) / (a + 1.0)).powf(lam) * v
    });
    match g.support_radius() {
        Some(r) => f.with_support(Support::CapMargin { delta: a - m.height_at_radius(r) }),
        None => Ok(f),
    }
}

/// `(θ, s)` with `ξ = √(1−s²)θ + s e_{n+1}`.
pub(crate) fn split_xi(xi: &[f64]) -> Result<(Coords, f64)> {
    let n = xi.len() - 1;
    let s = xi[n];
    let r = norm(&xi[..n]);
    if r <= 1e-14 {
        return Err(Error::Pole("ξ = ±p_N has no direction θ".into()));
    }
    Ok((xi[..n].iter().map(|c| c / r).collect(), s))
}

fn va_factor(a: f64, lambda: Option<f64>, s: f64) -> f64 {
    let q = 1.0 - s * s;
    match lambda {
        None => ((1.0 - a * a * s * s) / q).sqrt(),
        Some(l) => q.powf(l / 2.0),
    }
}

/// `(V_a Φ)(ξ) = √((1−a²s²)/(1−s²)) Φ(θ, (a+1)s/√(1−s²))`, or with
/// `λ = Some(l)` the variant `(1−s²)^{l/2} Φ(θ, (a+1)s/√(1−s²))`.
pub fn apply_Va(phi: &dyn Fn(&[f64], f64) -> f64, xi: &SpherePoint, a: f64, lambda: Option<f64>) -> Result<f64> {
    StereoMap::new(a)?;
    if xi.last() < 0.0 {
        return domain(format!("ξ_(n+1) = {} < 0: V_a acts on the upper hemisphere", xi.last()));
    }
    let (theta, s) = split_xi(xi.coords())?;
    let t = (a + 1.0) * s / (1.0 - s * s).sqrt();
    Ok(va_factor(a, lambda, s) * phi(&theta, t))
}

/// [`apply_Va`] as a field on `S^n_+`; it evaluates to NaN at `p_N` and to
/// zero on the lower hemisphere.
pub fn op_Va(phi: PlaneFn, n: usize, a: f64, lambda: Option<f64>) -> Result<ScalarField> {
    StereoMap::new(a)?;
    Ok(ScalarField::on_sphere(n, move |xi: &[f64]| {
        if xi[n] < 0.0 {
            return 0.0;
        }
        match split_xi(xi) {
            Ok((theta, s)) => {
                let t = (a + 1.0) * s / (1.0 - s * s).sqrt();
                va_factor(a, lambda, s) * phi(&theta, t)
            }
            Err(_) => f64::NAN,
        }
    }))
}

/// `(V_a⁻¹ Ψ)(θ, t)`: `ξ = ((a+1)θ + t e_{n+1})/√(t²+(a+1)²)` and the
/// reciprocal of the forward factor at `s = t/√(t²+(a+1)²)`. Negative `t`
/// is handled through `(θ, t) ~ (−θ, −t)`.
pub fn apply_Va_inv(psi: &ScalarField, theta: &[f64], t: f64, a: f64, lambda: Option<f64>) -> Result<f64> {
    StereoMap::new(a)?;
    psi.require_spherical("V_a⁻¹")?;
    if theta.len() != psi.n() {
        return domain("θ must lie in R^n for a field on S^n");
    }
    Ok(va_inv_value(&|p| psi.eval(p), theta, t, a, lambda))
}

pub(crate) fn va_inv_value(
    psi: &dyn Fn(&[f64]) -> f64,
    theta: &[f64],
    t: f64,
    a: f64,
    lambda: Option<f64>,
) -> f64 {
    let sg = if t < 0.0 { -1.0 } else { 1.0 };
    let t = t.abs();
    let k = (t * t + (a + 1.0).powi(2)).sqrt();
    let mut xi: Coords = theta.iter().map(|c| sg * (a + 1.0) * c / k).collect();
    xi.push(t / k);
    let s = t / k;
    psi(&xi) / va_factor(a, lambda, s)
}

/// [`apply_Va_inv`] as Radon-type data supported in `|t| ≤ radius`.
pub fn op_Va_inv(psi: &ScalarField, a: f64, lambda: Option<f64>, radius: f64) -> Result<RadonData> {
    StereoMap::new(a)?;
    psi.require_spherical("V_a⁻¹")?;
    let psi = psi.clone();
    Ok(RadonData::new(psi.n(), radius, move |theta, t| va_inv_value(&|p| psi.eval(p), theta, t, a, lambda)))
}

/// `(V_a R U_a f)(ξ)`.
pub fn factorize_Sa(f: &ScalarField, xi: &SpherePoint, a: f64, rule: &QuadratureRule) -> Result<f64> {
    check(f, xi, rule)?;
    let g = op_Ua(f, a, None)?;
    let rad = |theta: &[f64], t: f64| match Hyperplane::new(theta, t) {
        Ok(p) => radon(&g, &p, rule).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    };
    let v = apply_Va(&rad, xi, a, None)?;
    if v.is_nan() {
        return Err(Error::Numerical("Radon evaluation failed".into()));
    }
    Ok(v)
}

/// `(V_{a,λ} R^λ U_{a,λ} f)(ξ)`, which equals the cap cosine transform.
pub fn factorize_cap_cosine(
    f: &ScalarField,
    xi: &SpherePoint,
    lambda: f64,
    a: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    check(f, xi, rule)?;
    if !(lambda > -1.0 && lambda < 0.0) {
        return range(format!("λ = {lambda} outside (-1, 0)"));
    }
    let g = op_Ua(f, a, Some(lambda))?;
    let data = RadonData::of_field(&g, rule)?;
    let (theta, s) = split_xi(xi.coords())?;
    if s < 0.0 {
        return domain(format!("ξ_(n+1) = {s} < 0: cap transforms use the upper hemisphere"));
    }
    let t = (a + 1.0) * s / (1.0 - s * s).sqrt();
    Ok(va_factor(a, Some(lambda), s) * semyanistyi_of_data(&data, &theta, t, lambda, rule)?)
}

fn check(f: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<()> {
    f.require_spherical("S_a factorization")?;
    if xi.n() != f.n() || rule.n() != f.n() {
        return domain("dimension mismatch in the S_a factorization");
    }
    if let Domain::Cap { a: b } = f.domain() {
        if b <= -1.0 {
            return domain("empty cap");
        }
    }
    Ok(())
}
