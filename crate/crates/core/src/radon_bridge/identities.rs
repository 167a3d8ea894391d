use crate::error::{domain, range, Error, Result};
use crate::slice_transforms::as_cap_field;
use crate::sphere_core::mean::integrate_below;
use crate::sphere_core::quadrature::{gauss_legendre, SphereRule};
use crate::sphere_core::{QuadratureRule, ScalarField};

use super::operators::ua_value;
use super::radon::{integrate_plane, RadonData};
use super::stereo::StereoMap;

/// Both sides of `∫_{R^n} g dx = ∫_{S^n_a} (g∘π⁻¹)(η) w(η) dη`.
pub fn measure_identity_stereo(g: &ScalarField, a: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    g.require_euclidean("measure_identity_stereo")?;
    let m = StereoMap::new(a)?;
    let n = g.n();
    let r = g
        .support_radius()
        .ok_or_else(|| Error::UnboundedSupport("the stereographic identity needs a support radius".into()))?;
    let lhs = integrate_plane(&|x| g.eval(x), n, Some(r), rule);
    let h = m.height_at_radius(r);
    let rhs = integrate_below(&|eta| g.eval(&m.backward(eta)) * m.jacobian(eta), n, h, rule)?;
    Ok((lhs, rhs))
}

/// Both sides of `∫_{S^n_a} f dη = ∫_{R^n} (f∘π)(x)/(w∘π)(x) dx`.
pub fn measure_identity_cap(f: &ScalarField, a: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let m = StereoMap::new(a)?;
    let g = as_cap_field(f, a)?;
    let n = g.n();
    let h = g.cutoff_height().unwrap_or(a).min(a);
    let lhs = integrate_below(&|eta| g.eval(eta), n, h, rule)?;
    let radius = (h < a).then(|| if h <= -1.0 { 0.0 } else { m.radius_at_height(h) });
    let rhs = integrate_plane(
        &|x| {
            let w = m.weights(x);
            let mut eta: Vec<f64> = x.iter().map(|c| w.p * c).collect();
            eta.push(w.q);
            let v = g.eval(&eta);
            if v == 0.0 {
                0.0
            } else {
                v / w.w
            }
        },
        n,
        radius,
        rule,
    );
    Ok((lhs, rhs))
}

/// Both sides of the weighted norm identity
///
/// `∫ |U_a f|^p P^λ dx = (a+1)^{p−λ+n(1−p)} ∫_{S^n_a} |f|^p (a−η_{n+1})^{λ−1+n(p−1)} (1−aη_{n+1})^{1−p} dη`.
///
/// `p = 1, λ = 1` gives `∫ (U_a f) P dx = ∫_{S^n_a} f`; `a = 0, λ = 0` gives
/// `∫ |U_0 f|^p dx = ∫_{S^n_−} |f|^p |η_{n+1}|^{np−n−1} dη`.
pub fn norm_identity_check(f: &ScalarField, a: f64, p: f64, lambda: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let m = StereoMap::new(a)?;
    if !(p >= 1.0) || !p.is_finite() || !lambda.is_finite() {
        return range(format!("need p >= 1 and finite λ, got p = {p}, λ = {lambda}"));
    }
    let g = as_cap_field(f, a)?;
    let n = g.n();
    if rule.n() != n {
        return domain("quadrature and field dimensions differ");
    }
    let h = g.cutoff_height().unwrap_or(a).min(a);
    let radius = (h < a).then(|| if h <= -1.0 { 0.0 } else { m.radius_at_height(h) });
    let lhs = integrate_plane(
        &|x| {
            let v = ua_value(&g, &m, -1.0, x);
            if v == 0.0 {
                return 0.0;
            }
            v.abs().powf(p) * m.weights(x).p.powf(lambda)
        },
        n,
        radius,
        rule,
    );
    let e = lambda - 1.0 + n as f64 * (p - 1.0);
    let rhs = integrate_below(
        &|eta| {
            let v = g.eval(eta);
            if v == 0.0 {
                return 0.0;
            }
            let u = eta[n];
            v.abs().powf(p) * (a - u).powf(e) * (1.0 - a * u).powf(1.0 - p)
        },
        n,
        h,
        rule,
    )?;
    let k = (a + 1.0).powf(p - lambda + n as f64 * (1.0 - p));
    Ok((lhs, k * rhs))
}

/// Both sides of `∫_{S^{n−1}}∫_R (Rg)(θ, t)(1+t²)^{−n/2} dt d_*θ = ∫_{R^n} g(x)(1+|x|²)^{−1/2} dx`.
pub fn radon_norm_identity(g: &ScalarField, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let data = RadonData::of_field(g, rule)?;
    let n = g.n();
    let r = data.radius();
    let dirs = SphereRule::new(n - 1, rule.lat, rule.lon);
    let gl = gauss_legendre(rule.line);
    let mut lhs = 0.0;
    for (th, w) in dirs.iter() {
        lhs += w * gl.integrate(-r, r, |t| data.eval(th, t) * (1.0 + t * t).powf(-(n as f64) / 2.0));
    }
    lhs /= dirs.total_weight();
    let rhs = integrate_plane(&|x| g.eval(x) / (1.0 + x.iter().map(|c| c * c).sum::<f64>()).sqrt(), n, Some(r), rule);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Support;

    fn rel(p: (f64, f64)) -> f64 {
        (p.0 - p.1).abs() / p.0.abs().max(p.1.abs())
    }

    #[test]
    fn stereographic_measure() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let g = ScalarField::euclidean(2, |x| (-(x[0] - 0.3).powi(2) - x[1] * x[1]).exp())
            .with_support(Support::Ball { radius: 7.0 })
            .unwrap();
        for a in [0.0, 0.5, 1.0] {
            let v = measure_identity_stereo(&g, a, &r).unwrap();
            assert!(rel(v) < 1e-6, "a = {a}: {v:?}");
        }
    }

    #[test]
    fn cap_measure_smooth_field() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let f = ScalarField::on_sphere(2, |p| (0.5 * p[0] - 0.3 * p[2]).exp());
        for a in [0.0, 0.5, 1.0] {
            let v = measure_identity_cap(&f, a, &r).unwrap();
            assert!(rel(v) < 1e-6, "a = {a}: {v:?}");
        }
    }

    #[test]
    fn weighted_norms() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let f = ScalarField::on_sphere(2, |p| (0.5 * p[0] - 0.3 * p[2]).exp());
        let v = norm_identity_check(&f, 0.5, 1.0, 1.0, &r).unwrap();
        assert!(rel(v) < 1e-7, "{v:?}");
        let bump = ScalarField::on_cap(2, 0.0, |p| (1.0 - 1.0 / (1.0 - ((p[2] + 1.0) / 0.8)).max(1e-300)).exp())
            .with_support(Support::CapMargin { delta: 0.2 })
            .unwrap();
        for (p, l) in [(1.0, 0.0), (2.0, 0.0), (1.5, 0.5)] {
            let v = norm_identity_check(&bump, 0.0, p, l, &r).unwrap();
            assert!(rel(v) < 1e-7, "p = {p}, λ = {l}: {v:?}");
        }
    }

    #[test]
    fn radon_weighted_identity() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let g = ScalarField::euclidean(2, |x| (-x[0] * x[0] - 2.0 * x[1] * x[1]).exp())
            .with_support(Support::Ball { radius: 8.0 })
            .unwrap();
        let v = radon_norm_identity(&g, &r).unwrap();
        assert!(rel(v) < 1e-6, "{v:?}");
    }
}
