//! Funk transform, complete and truncated slice transforms, and the
//! λ-cosine families that tend to them as `λ → −1`.

#![allow(non_snake_case)]

use crate::error::{domain, range, Error, Result};
use crate::sphere_core::constants::{gamma_cosine, sigma};
use crate::sphere_core::mean::SliceFrame;
use crate::sphere_core::point::{canonical_sign, dot, Coords};
use crate::sphere_core::{kernel_pairing, spherical_mean, Domain, QuadratureRule, ScalarField, SpecialPoint, SpherePoint};

/// The slice `γ_a(ξ) = {η : ξ·η = aξ_{n+1}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSpec {
    pub xi: SpherePoint,
    pub a: f64,
}

impl SliceSpec {
    pub fn new(xi: SpherePoint, a: f64) -> Result<Self> {
        check_a(a)?;
        Ok(Self { xi, a })
    }

    /// Offset `aξ_{n+1}` of the slice plane along `ξ`.
    pub fn offset(&self) -> f64 {
        self.a * self.xi.last()
    }

    pub fn center(&self) -> Coords {
        let c = self.offset();
        self.xi.coords().iter().map(|x| c * x).collect()
    }

    pub fn radius(&self) -> f64 {
        (1.0 - self.offset().powi(2)).max(0.0).sqrt()
    }

    /// `center + radius·v` for a unit `v ⊥ ξ`.
    pub fn point_on(&self, v: &[f64]) -> Coords {
        let r = self.radius();
        self.center().iter().zip(v).map(|(c, x)| c + r * x).collect()
    }

    pub fn contains(&self, eta: &[f64], tol: f64) -> bool {
        (dot(self.xi.coords(), eta) - self.offset()).abs() <= tol
    }

    /// The same slice described by `−ξ`.
    pub fn flipped(&self) -> Self {
        Self { xi: self.xi.neg(), a: self.a }
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a > -1.0 && a <= 1.0) {
        return range(format!("slice parameter a = {a} outside (-1, 1]"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > -1.0 && lambda < 1.0) {
        return range(format!("λ = {lambda} outside (-1, 1)"));
    }
    if lambda == 0.0 {
        return range("γ_(n,λ) has a pole at λ = 0");
    }
    Ok(())
}

fn check_dims(f: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<()> {
    f.require_spherical("slice transforms")?;
    if xi.n() != f.n() || rule.n() != f.n() {
        return domain(format!(
            "dimension mismatch: field on S^{}, point on S^{}, rule for S^{}",
            f.n(),
            xi.n(),
            rule.n()
        ));
    }
    Ok(())
}

/// `(F f)(ξ) = (M_ξ f)(0)`.
pub fn funk(f: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<f64> {
    let s = canonical_sign(xi.coords());
    let xi = if s < 0.0 { xi.neg() } else { xi.clone() };
    spherical_mean(f, &xi, 0.0, rule)
}

/// `(F_a f)(ξ) = σ_{n−1}(1−a²ξ_{n+1}²)^{(n−1)/2}(M_ξ f)(aξ_{n+1})`.
///
/// `ξ` is first replaced by its canonical sign representative, so the result
/// is exactly even in `ξ`.
pub fn slice_F(f: &ScalarField, xi: &SpherePoint, a: f64, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f, xi, rule)?;
    check_a(a)?;
    if a == 1.0 && xi.last().abs() >= 1.0 - 1e-14 {
        return Err(Error::Degenerate("a = 1 and ξ = ±p_N: the slice is a single point".into()));
    }
    let s = canonical_sign(xi.coords());
    let c: Coords = xi.coords().iter().map(|x| s * x).collect();
    let frame = SliceFrame::new(&c);
    Ok(slice_value(f, &frame, a * c[c.len() - 1], rule))
}

pub(crate) fn slice_value(f: &ScalarField, frame: &SliceFrame, t: f64, rule: &QuadratureRule) -> f64 {
    let scale = (1.0 - t * t).max(0.0).powf((f.n() as f64 - 1.0) / 2.0);
    if scale == 0.0 {
        return 0.0;
    }
    scale * frame.integrate(&|p| f.eval(p), t, f.cutoff_height(), rule)
}

/// Cap view of `f` at height `a`: sphere fields are restricted, cap fields
/// must live on a cap no larger than `{η_{n+1} < a}`.
pub(crate) fn as_cap_field(f: &ScalarField, a: f64) -> Result<ScalarField> {
    match f.domain() {
        Domain::Sphere => f.restrict_to_cap(a),
        Domain::Cap { a: b } if b <= a + 1e-15 => Ok(f.clone()),
        Domain::Cap { a: b } => domain(format!("field lives on the cap a = {b}, wider than a = {a}")),
        Domain::Euclidean => domain("truncated slices need a spherical field"),
    }
}

/// `(S_a f)(ξ)`: the integral of `f` over `γ_a(ξ) ∩ S^n_a`, computed as
/// `F_a` of the zero extension.
pub fn slice_S(f: &ScalarField, xi: &SpherePoint, a: f64, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f, xi, rule)?;
    if xi.last() < 0.0 {
        return domain(format!("ξ_(n+1) = {} < 0: truncated slices use the upper hemisphere", xi.last()));
    }
    let g = as_cap_field(f, a)?;
    slice_F(&g, xi, a, rule)
}

/// `(C^λ f)(ξ) = γ_{n,λ}∫ f(η)|ξ·η|^λ d_*η`.
pub fn cosine_lambda(f: &ScalarField, xi: &SpherePoint, lambda: f64, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f, xi, rule)?;
    check_lambda(lambda)?;
    let g = gamma_cosine(f.n(), lambda)?;
    let v = kernel_pairing(f, &|_| 1.0, xi, &[SpecialPoint::new(0.0, lambda)], rule)?;
    Ok(g * v / sigma(f.n()))
}

/// `(C_a^λ f)(ξ) = γ_{n,λ}∫ f(η)|ξ·(η − a e_{n+1})|^λ dη`.
pub fn shifted_cosine(f: &ScalarField, xi: &SpherePoint, lambda: f64, a: f64, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f, xi, rule)?;
    check_lambda(lambda)?;
    check_a(a)?;
    let g = gamma_cosine(f.n(), lambda)?;
    let x0 = a * xi.last();
    let v = kernel_pairing(f, &|_| 1.0, xi, &[SpecialPoint::new(x0, lambda)], rule)?;
    Ok(g * v)
}

/// `(𝔠_a^λ f)(ξ) = γ_{n,λ}∫_{S^n_a} f(η)|ξ·η − aξ_{n+1}|^λ dη`.
pub fn cap_cosine(f: &ScalarField, xi: &SpherePoint, lambda: f64, a: f64, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f, xi, rule)?;
    if xi.last() < 0.0 {
        return domain(format!("ξ_(n+1) = {} < 0: cap transforms use the upper hemisphere", xi.last()));
    }
    let g = as_cap_field(f, a)?;
    shifted_cosine(&g, xi, lambda, a, rule)
}
