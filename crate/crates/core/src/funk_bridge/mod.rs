//! Complete slices through `A = a e_{n+1}` reduced to great subspheres:
//! `𝓕_a = 𝓝_a 𝓕 𝓜_a`, the symmetry classes it induces, and inversion.

#![allow(non_snake_case)]

mod inversion;
mod meridional;

pub use inversion::{
    funk_inverse, funk_inverse_odd, reconstruct_Fa, reconstruct_Fa_grid, DIFF_STEP, LIMIT_OFFSETS,
};
pub use meridional::{
    apply_mu, apply_nu, collinearity_defect, make_symmetric, op_Ma, op_Na, reflection, MeridionalMap,
    ReflectionData,
};

use crate::error::{range, Result};
use crate::slice_transforms::funk;
use crate::sphere_core::constants::sigma;
use crate::sphere_core::mean::integrate_below;
use crate::sphere_core::{QuadratureRule, ScalarField, SpherePoint};

/// `(𝓝_a 𝓕 𝓜_a f)(ξ)`.
pub fn factorize_Fa(f: &ScalarField, xi: &SpherePoint, a: f64, rule: &QuadratureRule) -> Result<f64> {
    let m = MeridionalMap::new(a)?;
    let g = op_Ma(f, a, false)?;
    let xt = SpherePoint::new(&m.nu(xi.coords()))?;
    let n = f.n();
    Ok(sigma(n - 1) * (1.0 - a * a).powf((n as f64 - 1.0) / 2.0) * funk(&g, &xt, rule)?)
}

/// Both sides of `∫ f dη = (1−a²)^{n/2} ∫ (f∘μ⁻¹)(η̃)(1+aη̃_{n+1})^{−n} dη̃`.
pub fn measure_identity_mu(f: &ScalarField, a: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    f.require_spherical("measure_identity_mu")?;
    let m = MeridionalMap::new(a)?;
    let n = f.n();
    let lhs = integrate_below(&|p| f.eval(p), n, 1.0, rule)?;
    let rhs = integrate_below(
        &|p| f.eval(&m.mu_inv(p)) / (1.0 + a * p[p.len() - 1]).powi(n as i32),
        n,
        1.0,
        rule,
    )?;
    Ok((lhs, (1.0 - a * a).powf(n as f64 / 2.0) * rhs))
}

/// Both sides of `∫ Φ dξ̃ = √(1−a²) ∫ (Φ∘ν)(ξ)(1−a²ξ_{n+1}²)^{−(n+1)/2} dξ`.
pub fn measure_identity_nu(phi: &ScalarField, a: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    phi.require_spherical("measure_identity_nu")?;
    if !(a.abs() < 1.0) {
        return range(format!("|a| < 1 required, got {a}"));
    }
    let m = MeridionalMap::new(a)?;
    let n = phi.n();
    let lhs = integrate_below(&|p| phi.eval(p), n, 1.0, rule)?;
    let e = (n as f64 + 1.0) / 2.0;
    let rhs = integrate_below(
        &|p| {
            let s = p[p.len() - 1];
            phi.eval(&m.nu(p)) / (1.0 - a * a * s * s).powf(e)
        },
        n,
        1.0,
        rule,
    )?;
    Ok((lhs, (1.0 - a * a).sqrt() * rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice_transforms::slice_F;

    #[test]
    fn factorization_matches_direct_slices() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let f = ScalarField::on_sphere(2, |p| (0.5 * p[0] - 0.3 * p[2]).exp());
        for a in [-0.5, 0.5, 0.9] {
            for xi in [[0.3, -0.1, 0.8], [0.9, 0.2, -0.1], [0.0, 0.0, 1.0]] {
                let xi = SpherePoint::normalized(&xi).unwrap();
                let d = slice_F(&f, &xi, a, &r).unwrap();
                let g = factorize_Fa(&f, &xi, a, &r).unwrap();
                assert!((d - g).abs() < 1e-9, "a = {a}: {d} vs {g}");
            }
        }
    }

    #[test]
    fn funk_inverse_of_quadratic() {
        let r = QuadratureRule::new(2, 64).unwrap();
        let phi = ScalarField::on_sphere(2, |p| (1.0 - p[2] * p[2]) / 2.0);
        let eta = SpherePoint::normalized(&[0.4, 0.1, 0.6]).unwrap();
        let v = funk_inverse(&phi, &eta, &r).unwrap();
        assert!((v - eta.last().powi(2)).abs() < 1e-4, "{v}");
    }

    #[test]
    fn shortcut_matches_general_formula() {
        let r = QuadratureRule::new(3, 32).unwrap();
        let phi = ScalarField::on_sphere(3, |p| 1.0 + p[3] * p[3] - 0.5 * p[0] * p[1]);
        let xi = SpherePoint::normalized(&[0.2, 0.5, -0.3, 0.6]).unwrap();
        let a = funk_inverse(&phi, &xi, &r).unwrap();
        let b = funk_inverse_odd(&phi, &xi, &r).unwrap();
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}
