use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{domain, range, Result};
use crate::sphere_core::interp::{extrapolate_to_zero, ChebyshevInterpolant};
use crate::sphere_core::mean::SliceFrame;
use crate::sphere_core::quadrature::gauss_legendre;
use crate::sphere_core::{QuadratureRule, ScalarField, SpherePoint};

use super::meridional::{op_Na, MeridionalMap};

/// Offsets `δ` of the evaluation points `t = 1 − δ` used for the `t → 1` limit.
pub const LIMIT_OFFSETS: [f64; 3] = [0.08, 0.04, 0.02];

/// Step of the central differences in `t`.
pub const DIFF_STEP: f64 = 1.0 / 512.0;

/// `Φ_ξ(s) = (M_ξ Φ)(√(1−s²))` on `[0, 1]` as a Chebyshev interpolant.
fn profile(phi: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> ChebyshevInterpolant {
    let frame = SliceFrame::new(xi.coords());
    let sig = crate::sphere_core::sigma(phi.n() - 1);
    ChebyshevInterpolant::sample(rule.abel_nodes, 0.0, 1.0, |s| {
        let tau = (1.0 - s * s).max(0.0).sqrt();
        frame.integrate(&|p| phi.eval(p), tau, None, rule) / sig
    })
}

fn check_even(phi: &ScalarField, xi: &SpherePoint) {
    let p = phi.eval(xi.coords());
    let q = phi.eval(xi.neg().coords());
    if (p - q).abs() > 1e-8 * (1.0 + p.abs().max(q.abs())) {
        warn!("funk_inverse: data is not even ({p} at ξ, {q} at −ξ); only the even part is recovered");
    }
}

/// `(1/(2t) ∂/∂t)^k g` at `t` by nested central differences.
fn abel_derivative(g: &dyn Fn(f64) -> f64, t: f64, k: usize, h: f64) -> f64 {
    if k == 0 {
        return g(t);
    }
    let up = abel_derivative(g, t + h, k - 1, h);
    let dn = abel_derivative(g, t - h, k - 1, h);
    (up - dn) / (2.0 * h) / (2.0 * t)
}

fn limit_at_one(g: &dyn Fn(f64) -> f64) -> f64 {
    let ys: Vec<f64> = LIMIT_OFFSETS.iter().map(|d| g(1.0 - d)).collect();
    extrapolate_to_zero(&LIMIT_OFFSETS, &ys)
}

fn check(phi: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<()> {
    phi.require_spherical("funk_inverse")?;
    if xi.n() != phi.n() || rule.n() != phi.n() {
        return domain("dimension mismatch in funk_inverse");
    }
    Ok(())
}

/// Inverse Funk transform at `ξ` from spherical means of the data:
///
/// `f(ξ) = lim_{t→1} (1/(2t) ∂_t)^{n−1} [K ∫_0^t (t²−s²)^{(n−3)/2} Φ_ξ(s) s^{n−1} ds]`
/// with `K = 2^{n−1}/(n−2)!`.
///
/// The inner integral is taken after `s = t sin φ`, which removes the
/// endpoint singularity; the limit is extrapolated from `t = 1 − δ`.
pub fn funk_inverse(phi: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<f64> {
    check(phi, xi, rule)?;
    check_even(phi, xi);
    let n = phi.n();
    let prof = profile(phi, xi, rule);
    Ok(abel_inverse(&prof, n, rule))
}

fn abel_inverse(prof: &ChebyshevInterpolant, n: usize, rule: &QuadratureRule) -> f64 {
    let k = 2f64.powi(n as i32 - 1) / gamma(n as f64 - 1.0);
    let gl = gauss_legendre(rule.abel_quad);
    let inner = |t: f64| {
        let v = gl.integrate(0.0, PI / 2.0, |phi| {
            let (s, c) = phi.sin_cos();
            c.powi(n as i32 - 2) * s.powi(n as i32 - 1) * prof.eval(t * s)
        });
        k * t.powi(2 * n as i32 - 3) * v
    };
    limit_at_one(&|t| abel_derivative(&inner, t, n - 1, DIFF_STEP))
}

/// The odd-dimensional shortcut
/// `f(ξ) = lim_{t→1} c_n (1/(2t) ∂_t)^{(n−1)/2} [t^{n−2} Φ_ξ(t)]`.
pub fn funk_inverse_odd(phi: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<f64> {
    check(phi, xi, rule)?;
    let n = phi.n();
    if n % 2 == 0 {
        return range(format!("the shortcut formula needs odd n, got n = {n}"));
    }
    check_even(phi, xi);
    let prof = profile(phi, xi, rule);
    let cn = crate::sphere_core::c_const(n);
    let g = |t: f64| t.powi(n as i32 - 2) * prof.eval(t);
    Ok(limit_at_one(&|t| cn * abel_derivative(&g, t, (n - 1) / 2, DIFF_STEP)))
}

/// `f(η) = (𝓜_a⁻¹ 𝓕⁻¹ 𝓝_a⁻¹ data)(η)` where `data = 𝓕_a f`.
pub fn reconstruct_Fa(data: &ScalarField, eta: &SpherePoint, a: f64, rule: &QuadratureRule) -> Result<f64> {
    let phi = op_Na(data, a, true)?;
    let m = MeridionalMap::new(a)?;
    let n = data.n();
    let target = SpherePoint::new(&m.mu(eta.coords()))?;
    let g = funk_inverse(&phi, &target, rule)?;
    let u = eta.last();
    Ok(((1.0 - a * a) / (1.0 - u * a)).powi(n as i32 - 1) * g)
}

/// [`reconstruct_Fa`] over many points, in parallel.
pub fn reconstruct_Fa_grid(
    data: &ScalarField,
    points: &[SpherePoint],
    a: f64,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    points.par_iter().map(|p| reconstruct_Fa(data, p, a, rule)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abel_derivative_of_power() {
        // (1/(2t) d/dt) t^4 = 2t²
        let v = abel_derivative(&|t: f64| t.powi(4), 0.9, 1, DIFF_STEP);
        assert!((v - 2.0 * 0.81).abs() < 1e-5);
    }

    #[test]
    fn constant_data_inverts_to_constant() {
        for n in [2, 3] {
            let r = QuadratureRule::new(n, 32).unwrap();
            let one = ScalarField::on_sphere(n, |_| 1.0);
            let xi = SpherePoint::axis(n, 0);
            let v = funk_inverse(&one, &xi, &r).unwrap();
            assert!((v - 1.0).abs() < 2e-4, "n = {n}: {v}");
        }
    }
}
