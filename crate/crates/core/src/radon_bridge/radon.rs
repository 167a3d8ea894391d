use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use crate::error::{range, Error, Result};
use crate::sphere_core::constants::{gamma_cosine, sigma};
use crate::sphere_core::point::orthonormal_complement;
use crate::sphere_core::quadrature::{gauss_legendre, SphereRule};
use crate::sphere_core::{weighted_integral, QuadratureRule, ScalarField, SpecialPoint};

use super::stereo::Hyperplane;

/// Evaluator of a function of `(θ, t) ∈ S^{n−1} × R`.
pub type PlaneFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// Radon-type data `(θ, t) ↦ (Rg)(θ, t)` of a function on `R^n` supported in
/// the ball of the given radius.
#[derive(Clone)]
pub struct RadonData {
    n: usize,
    radius: f64,
    f: PlaneFn,
}

impl std::fmt::Debug for RadonData {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("RadonData").field("n", &self.n).field("radius", &self.radius).finish()
    }
}

impl RadonData {
    pub fn new<F>(n: usize, radius: f64, f: F) -> Self
    where
        F: Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    {
        Self { n, radius, f: Arc::new(f) }
    }

    pub fn from_arc(n: usize, radius: f64, f: PlaneFn) -> Self {
        Self { n, radius, f }
    }

    /// Radon transform of `g`, computed on demand.
    pub fn of_field(g: &ScalarField, rule: &QuadratureRule) -> Result<Self> {
        g.require_euclidean("RadonData::of_field")?;
        let radius = bounded_radius(g)?;
        let g = g.clone();
        let rule = rule.clone();
        Ok(Self::new(g.n(), radius, move |th, t| radon_unchecked(&g, th, t, radius, &rule)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, theta: &[f64], t: f64) -> f64 {
        if t.abs() > self.radius {
            return 0.0;
        }
        (self.f)(theta, t)
    }
}

fn bounded_radius(g: &ScalarField) -> Result<f64> {
    g.support_radius()
        .ok_or_else(|| Error::UnboundedSupport("the Radon transform needs a declared support radius".into()))
}

/// `(Rg)(θ, t) = ∫_{θ^⊥} g(tθ + u) du`, in polar coordinates on the disk
/// `|u| ≤ √(r² − t²)` of the plane.
pub fn radon(g: &ScalarField, plane: &Hyperplane, rule: &QuadratureRule) -> Result<f64> {
    g.require_euclidean("radon")?;
    if plane.dim() != g.n() {
        return Err(Error::Domain(format!("plane in R^{} used with a field on R^{}", plane.dim(), g.n())));
    }
    let radius = bounded_radius(g)?;
    Ok(radon_unchecked(g, plane.theta(), plane.t(), radius, rule))
}

fn radon_unchecked(g: &ScalarField, theta: &[f64], t: f64, radius: f64, rule: &QuadratureRule) -> f64 {
    if t.abs() >= radius {
        return 0.0;
    }
    let n = theta.len();
    let rho = (radius * radius - t * t).sqrt();
    let basis = orthonormal_complement(theta);
    let sub = SphereRule::new(n - 2, rule.lat, rule.lon);
    let gl = gauss_legendre(rule.line);
    let mut x = vec![0.0; n];
    gl.integrate(0.0, rho, |s| {
        let mut acc = 0.0;
        for (omega, w) in sub.iter() {
            for (k, xk) in x.iter_mut().enumerate() {
                let mut v = t * theta[k];
                for (o, b) in omega.iter().zip(&basis) {
                    v += s * o * b[k];
                }
                *xk = v;
            }
            acc += w * g.eval(&x);
        }
        acc * s.powi(n as i32 - 2)
    })
}

/// `σ_{n−2}∫_{|t|}^∞ g0(r)(r²−t²)^{(n−3)/2} r dr`, the Radon transform of a
/// radial function `g0(|x|)` on `R^n`.
///
/// With `w² = r² − t²` the integrand becomes `g0(√(t²+w²))w^{n−2}`; a finite
/// `cutoff` bounds the support of `g0`, otherwise `w = (1+|t|) tan ψ` maps the
/// half-line onto `[0, π/2)`.
pub fn radon_radial(g0: &dyn Fn(f64) -> f64, t: f64, n: usize, cutoff: Option<f64>, rule: &QuadratureRule) -> f64 {
    let t = t.abs();
    let gl = gauss_legendre(rule.line);
    let p = n as i32 - 2;
    let v = match cutoff {
        Some(r) if t >= r => 0.0,
        Some(r) => gl.integrate(0.0, (r * r - t * t).sqrt(), |w| g0((t * t + w * w).sqrt()) * w.powi(p)),
        None => {
            let c = 1.0 + t;
            gl.integrate(0.0, FRAC_PI_2, |psi| {
                let (s, co) = psi.sin_cos();
                if co <= 0.0 {
                    return 0.0;
                }
                let w = c * s / co;
                let v = g0((t * t + w * w).sqrt());
                if v == 0.0 {
                    0.0
                } else {
                    v * w.powi(p) * c / (co * co)
                }
            })
        }
    };
    sigma(n - 2) * v
}

/// `(R^λ g)(θ, t) = γ_{n,λ}∫ g(x)|x·θ − t|^λ dx`, reduced to
/// `γ_{n,λ}∫ (Rg)(θ, y)|y − t|^λ dy`.
pub fn semyanistyi(g: &ScalarField, plane: &Hyperplane, lambda: f64, rule: &QuadratureRule) -> Result<f64> {
    g.require_euclidean("semyanistyi")?;
    if !(lambda > -1.0 && lambda < 0.0) {
        return range(format!("Semyanistyi order λ = {lambda} outside (-1, 0)"));
    }
    if plane.dim() != g.n() {
        return Err(Error::Domain(format!("plane in R^{} used with a field on R^{}", plane.dim(), g.n())));
    }
    let data = RadonData::of_field(g, rule)?;
    semyanistyi_of_data(&data, plane.theta(), plane.t(), lambda, rule)
}

pub(crate) fn semyanistyi_of_data(
    data: &RadonData,
    theta: &[f64],
    t: f64,
    lambda: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let r = data.radius();
    if r <= 0.0 {
        return Ok(0.0);
    }
    let g = gamma_cosine(data.n(), lambda)?;
    let v = weighted_integral(&|y| data.eval(theta, y), -r, r, &[SpecialPoint::new(t, lambda)], rule.panels())?;
    Ok(g * v)
}

/// `∫_{R^n} g dx` by polar coordinates, on a ball or, with `radius = None`,
/// on all of `R^n` through `|x| = tan ψ`.
pub(crate) fn integrate_plane(g: &dyn Fn(&[f64]) -> f64, n: usize, radius: Option<f64>, rule: &QuadratureRule) -> f64 {
    let dirs = SphereRule::new(n - 1, rule.lat, rule.lon);
    let gl = gauss_legendre(rule.line);
    let mut x = vec![0.0; n];
    let mut shell = |s: f64| {
        let mut acc = 0.0;
        for (omega, w) in dirs.iter() {
            for (xk, o) in x.iter_mut().zip(omega) {
                *xk = s * o;
            }
            acc += w * g(&x);
        }
        acc * s.powi(n as i32 - 1)
    };
    match radius {
        Some(r) => gl.integrate(0.0, r, shell),
        None => gl.integrate(0.0, FRAC_PI_2, |psi| {
            let (s, c) = psi.sin_cos();
            if c <= 0.0 {
                return 0.0;
            }
            shell(s / c) / (c * c)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Support;
    use std::f64::consts::PI;

    fn gaussian(n: usize) -> ScalarField {
        ScalarField::euclidean(n, |x| (-x.iter().map(|c| c * c).sum::<f64>()).exp())
            .with_support(Support::Ball { radius: 8.0 })
            .unwrap()
    }

    #[test]
    fn gaussian_radon_is_closed_form() {
        for n in [2, 3] {
            let r = QuadratureRule::new(n, 32).unwrap();
            let g = gaussian(n);
            for (th, t) in [(vec![1.0, 0.0, 0.0], 0.3), (vec![0.3, -0.5, 0.8], -1.2)] {
                let p = Hyperplane::new(&th[..n], t).unwrap();
                let v = radon(&g, &p, &r).unwrap();
                let want = PI.powf((n as f64 - 1.0) / 2.0) * (-t * t).exp();
                assert!((v - want).abs() < 1e-10, "n = {n}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn ball_indicator_and_radial_formula() {
        let r = QuadratureRule::new(3, 32).unwrap();
        let ball = ScalarField::euclidean(3, |x| if x.iter().map(|c| c * c).sum::<f64>() <= 1.0 { 1.0 } else { 0.0 })
            .with_support(Support::Ball { radius: 1.0 })
            .unwrap();
        let p = Hyperplane::new(&[0.2, 0.4, -0.3], 0.5).unwrap();
        assert!((radon(&ball, &p, &r).unwrap() - PI * 0.75).abs() < 1e-12);
        let ind = |s: f64| if s <= 1.0 { 1.0 } else { 0.0 };
        assert!((radon_radial(&ind, 0.5, 3, Some(1.0), &r) - 0.75 * PI).abs() < 1e-12);
        assert_eq!(radon_radial(&ind, 1.5, 3, Some(1.0), &r), 0.0);
    }

    #[test]
    fn radial_formula_without_cutoff() {
        for n in [2, 3] {
            let r = QuadratureRule::new(n, 32).unwrap();
            let g0 = |s: f64| (-s * s).exp();
            let v = radon_radial(&g0, 0.7, n, None, &r);
            let want = PI.powf((n as f64 - 1.0) / 2.0) * (-0.49f64).exp();
            assert!((v - want).abs() < 1e-10, "n = {n}: {v}");
        }
    }

    #[test]
    fn semyanistyi_vanishes_on_odd_data() {
        let r = QuadratureRule::new(2, 32).unwrap();
        let g = ScalarField::euclidean(2, |x| x[0] * (-x[0] * x[0] - x[1] * x[1]).exp())
            .with_support(Support::Ball { radius: 8.0 })
            .unwrap();
        let p = Hyperplane::new(&[1.0, 0.0], 0.0).unwrap();
        assert!(semyanistyi(&g, &p, -0.5, &r).unwrap().abs() < 1e-12);
        assert!(semyanistyi(&g, &p, 0.5, &r).is_err());
    }

    #[test]
    fn unbounded_support_is_rejected() {
        let r = QuadratureRule::new(2, 16).unwrap();
        let g = ScalarField::euclidean(2, |_| 1.0);
        let p = Hyperplane::new(&[1.0, 0.0], 0.0).unwrap();
        assert!(matches!(radon(&g, &p, &r), Err(Error::UnboundedSupport(_))));
    }

    #[test]
    fn plane_integrals() {
        let r = QuadratureRule::new(2, 32).unwrap();
        let v = integrate_plane(&|x| 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]).powi(2), 2, None, &r);
        assert!((v - PI).abs() < 1e-12);
    }
}
