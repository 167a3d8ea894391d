use smallvec::SmallVec;

use crate::error::{domain, Result};

use super::constants::sigma;
use super::field::ScalarField;
use super::panels::{weighted_integral, SpecialPoint};
use super::point::{complement_of, norm, orthonormal_complement, Coords, SpherePoint};
use super::quadrature::QuadratureRule;

/// `ξ` together with an orthonormal basis of `ξ^⊥`, plus what is needed to
/// clip the slices `{ξ·η = t}` against a horizontal level.
#[derive(Debug, Clone)]
pub struct SliceFrame {
    xi: Coords,
    basis: Vec<Coords>,
    tilt: Option<Tilt>,
}

#[derive(Debug, Clone)]
struct Tilt {
    /// Unit vector along the projection of `e_{n+1}` onto `ξ^⊥`.
    dir: Coords,
    /// Length of that projection, `√(1 − ξ_{n+1}²)`.
    len: f64,
    /// Orthonormal basis of `{ξ, dir}^⊥`.
    rest: Vec<Coords>,
}

impl SliceFrame {
    pub fn new(xi: &[f64]) -> Self {
        Self::with_basis(xi, orthonormal_complement(xi))
    }

    /// Uses a caller-supplied orthonormal basis of `ξ^⊥`.
    pub fn with_basis(xi: &[f64], basis: Vec<Coords>) -> Self {
        let m = xi.len();
        let last = xi[m - 1];
        let mut e: Coords = xi.iter().map(|c| -last * c).collect();
        e[m - 1] += 1.0;
        let len = norm(&e);
        let tilt = if len > 1e-14 {
            for c in e.iter_mut() {
                *c /= len;
            }
            let rest = complement_of(&[xi, &e]);
            Some(Tilt { dir: e, len, rest })
        } else {
            None
        };
        Self { xi: xi.iter().copied().collect(), basis, tilt }
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn basis(&self) -> &[Coords] {
        &self.basis
    }

    /// Values of `t` at which the slice `{ξ·η = t}` touches the level `h`.
    pub fn tangencies(&self, h: f64) -> Vec<f64> {
        if !(h > -1.0 && h < 1.0) {
            return Vec::new();
        }
        let beta = self.xi[self.xi.len() - 1].clamp(-1.0, 1.0).acos();
        let g = h.acos();
        let mut out: Vec<f64> = [beta + g, beta - g, -beta + g, -beta - g]
            .iter()
            .map(|th| th.cos())
            .filter(|t| t.abs() < 1.0)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        out
    }

    /// `∫_{S^{n−1}} f(tξ + √(1−t²)ω) dω`, restricted to heights below `cutoff`.
    pub(crate) fn integrate(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        t: f64,
        cutoff: Option<f64>,
        rule: &QuadratureRule,
    ) -> f64 {
        let m = self.xi.len();
        let r = (1.0 - t * t).max(0.0).sqrt();
        let mut buf: Coords = SmallVec::from_elem(0.0, m);
        let Some(h) = cutoff else {
            return self.full(f, t, r, &mut buf, rule);
        };
        let xl = self.xi[m - 1];
        let centre = t * xl;
        let tilt = match &self.tilt {
            Some(tl) if r * tl.len > 1e-14 => tl,
            _ => return if centre < h { self.full(f, t, r, &mut buf, rule) } else { 0.0 },
        };
        let kappa = (h - centre) / (r * tilt.len);
        if kappa > 1.0 + 1e-12 {
            return self.full(f, t, r, &mut buf, rule);
        }
        // a slice tangent to the level keeps the tangency point off the nodes
        let kappa = kappa.min(1.0);
        if kappa <= -1.0 {
            return 0.0;
        }
        // polar angle φ from `dir`; the slice point has height centre + r·len·cos φ
        let phi0 = kappa.acos();
        let gl = super::quadrature::gauss_legendre(rule.polar);
        let sub = rule.subsubsphere();
        let p = (m - 3) as i32;
        gl.integrate(phi0, std::f64::consts::PI, |phi| {
            let (s, c) = phi.sin_cos();
            let mut acc = 0.0;
            for (zeta, w) in sub.iter() {
                for k in 0..m {
                    let mut v = c * tilt.dir[k];
                    for (z, b) in zeta.iter().zip(&tilt.rest) {
                        v += s * z * b[k];
                    }
                    buf[k] = t * self.xi[k] + r * v;
                }
                acc += w * f(&buf);
            }
            acc * s.powi(p)
        })
    }

    fn full(&self, f: &dyn Fn(&[f64]) -> f64, t: f64, r: f64, buf: &mut Coords, rule: &QuadratureRule) -> f64 {
        let mut acc = 0.0;
        for (omega, w) in rule.subsphere().iter() {
            for k in 0..buf.len() {
                let mut v = 0.0;
                for (o, b) in omega.iter().zip(&self.basis) {
                    v += o * b[k];
                }
                buf[k] = t * self.xi[k] + r * v;
            }
            acc += w * f(buf);
        }
        acc
    }
}

fn check_point(f: &ScalarField, xi: &SpherePoint, rule: &QuadratureRule) -> Result<()> {
    f.require_spherical("this operation")?;
    if xi.n() != f.n() {
        return domain(format!("point on S^{} used with a field on S^{}", xi.n(), f.n()));
    }
    if rule.n() != f.n() {
        return domain(format!("quadrature for S^{} used with a field on S^{}", rule.n(), f.n()));
    }
    Ok(())
}

/// `∫_{S^n} f dη`. Cap fields are integrated as their zero extensions.
pub fn integrate_sphere(f: &ScalarField, rule: &QuadratureRule) -> Result<f64> {
    f.require_spherical("integrate_sphere")?;
    if rule.n() != f.n() {
        return domain(format!("quadrature for S^{} used with a field on S^{}", rule.n(), f.n()));
    }
    match f.cutoff_height() {
        Some(h) if h < 1.0 => integrate_below(&|p| f.eval(p), f.n(), h, rule),
        _ => {
            let mut s = 0.0;
            for (p, w) in rule.sphere().iter() {
                s += w * f.eval(p);
            }
            Ok(s)
        }
    }
}

/// `∫_{S^n_a} f dη` over the cap `{η_{n+1} < a}`.
pub fn integrate_cap(f: &ScalarField, a: f64, rule: &QuadratureRule) -> Result<f64> {
    f.require_spherical("integrate_cap")?;
    let h = f.cutoff_height().map_or(a, |c| c.min(a));
    integrate_below(&|p| f.eval(p), f.n(), h, rule)
}

/// `∫_{η_{n+1} < h} f dη` by latitude slicing.
pub(crate) fn integrate_below(f: &dyn Fn(&[f64]) -> f64, n: usize, h: f64, rule: &QuadratureRule) -> Result<f64> {
    if h <= -1.0 {
        return Ok(0.0);
    }
    let h = h.min(1.0);
    let frame = SliceFrame::new(SpherePoint::north(n).coords());
    let alpha = (n as f64 - 2.0) / 2.0;
    let pts = [SpecialPoint::new(-1.0, alpha), SpecialPoint::new(1.0, alpha)];
    weighted_integral(&|u| frame.integrate(f, u, None, rule), -1.0, h, &pts, rule.panels())
}

/// `∫_{R^n} g dx` for a field with a declared support ball.
pub fn integrate_euclidean(g: &ScalarField, rule: &QuadratureRule) -> Result<f64> {
    g.require_euclidean("integrate_euclidean")?;
    let Some(radius) = g.support_radius() else {
        return Err(crate::Error::UnboundedSupport("integrate_euclidean needs a support radius".into()));
    };
    Ok(integrate_ball(&|x| g.eval(x), g.n(), radius, rule))
}

/// `∫_{|x| < radius} g dx` in polar coordinates.
pub(crate) fn integrate_ball(g: &dyn Fn(&[f64]) -> f64, n: usize, radius: f64, rule: &QuadratureRule) -> f64 {
    let sphere = super::quadrature::SphereRule::new(n - 1, rule.lat, rule.lon);
    let gl = super::quadrature::gauss_legendre(rule.line);
    let mut buf = vec![0.0; n];
    gl.integrate(0.0, radius, |s| {
        let mut acc = 0.0;
        for (omega, w) in sphere.iter() {
            for (b, o) in buf.iter_mut().zip(omega) {
                *b = s * o;
            }
            acc += w * g(&buf);
        }
        acc * s.powi(n as i32 - 1)
    })
}

/// `∫_{S^n ∩ ξ^⊥} f(√(1−t²)ω + tξ) dω`, the unnormalized mean; cap fields
/// are clipped exactly at their cutoff height.
pub fn subsphere_integral(f: &ScalarField, xi: &SpherePoint, t: f64, rule: &QuadratureRule) -> Result<f64> {
    check_point(f, xi, rule)?;
    if !(t.abs() <= 1.0) {
        return domain(format!("slice offset t = {t} outside [-1, 1]"));
    }
    let frame = SliceFrame::new(xi.coords());
    Ok(frame.integrate(&|p| f.eval(p), t, f.cutoff_height(), rule))
}

/// `(M_ξ f)(t)`, with the limiting values `f(±ξ)` at `t = ±1`.
pub fn spherical_mean(f: &ScalarField, xi: &SpherePoint, t: f64, rule: &QuadratureRule) -> Result<f64> {
    spherical_mean_in_frame(f, &SliceFrame::new(xi.coords()), t, rule)
}

/// [`spherical_mean`] computed in a given frame of `ξ^⊥`.
pub fn spherical_mean_in_frame(f: &ScalarField, frame: &SliceFrame, t: f64, rule: &QuadratureRule) -> Result<f64> {
    let xi = SpherePoint::new(frame.xi())?;
    check_point(f, &xi, rule)?;
    if !(t.abs() <= 1.0) {
        return domain(format!("slice offset t = {t} outside [-1, 1]"));
    }
    if t == 1.0 {
        return Ok(f.eval(xi.coords()));
    }
    if t == -1.0 {
        return Ok(f.eval(xi.neg().coords()));
    }
    Ok(frame.integrate(&|p| f.eval(p), t, f.cutoff_height(), rule) / sigma(f.n() - 1))
}

/// `∫_{S^n} h(ξ·η) f(η) dη = ∫_{−1}^{1} h(t) (1−t²)^{(n−2)/2} ∫_{S^{n−1}} f(…) dω dt`.
///
/// `singular` lists the power singularities of `h`; their exponents are
/// folded into the weight, so `h` itself should be the smooth remainder.
/// Cap tangencies of truncated fields are added as kinks automatically.
pub fn kernel_pairing(
    f: &ScalarField,
    h: &dyn Fn(f64) -> f64,
    xi: &SpherePoint,
    singular: &[SpecialPoint],
    rule: &QuadratureRule,
) -> Result<f64> {
    check_point(f, xi, rule)?;
    let frame = SliceFrame::new(xi.coords());
    let cutoff = f.cutoff_height();
    let alpha = (f.n() as f64 - 2.0) / 2.0;
    let mut pts: Vec<SpecialPoint> = singular.to_vec();
    pts.push(SpecialPoint::new(-1.0, alpha));
    pts.push(SpecialPoint::new(1.0, alpha));
    if let Some(c) = cutoff {
        pts.extend(frame.tangencies(c).into_iter().map(SpecialPoint::kink));
    }
    let g = |t: f64| {
        let v = h(t);
        if v == 0.0 {
            0.0
        } else {
            v * frame.integrate(&|p| f.eval(p), t, cutoff, rule)
        }
    };
    weighted_integral(&g, -1.0, 1.0, &pts, rule.panels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_core::point::orthonormal_complement_householder;
    use std::f64::consts::PI;

    fn rule(n: usize) -> QuadratureRule {
        QuadratureRule::new(n, 64).unwrap()
    }

    #[test]
    fn sphere_integrals() {
        let one = ScalarField::on_sphere(2, |_| 1.0);
        assert!((integrate_sphere(&one, &rule(2)).unwrap() - 4.0 * PI).abs() < 1e-12);
        let sq = ScalarField::on_sphere(2, |p| p[2] * p[2]);
        assert!((integrate_sphere(&sq, &rule(2)).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        let one3 = ScalarField::on_sphere(3, |_| 1.0);
        assert!((integrate_sphere(&one3, &rule(3)).unwrap() - 2.0 * PI * PI).abs() < 1e-11);
    }

    #[test]
    fn cap_integral_of_constant() {
        let one = ScalarField::on_cap(2, 0.3, |_| 1.0);
        // area of {η₃ < 0.3} is 2π(1 + 0.3)
        assert!((integrate_sphere(&one, &rule(2)).unwrap() - 2.0 * PI * 1.3).abs() < 1e-11);
        let one3 = ScalarField::on_cap(3, 0.0, |_| 1.0);
        assert!((integrate_sphere(&one3, &rule(3)).unwrap() - PI * PI).abs() < 1e-10);
    }

    #[test]
    fn means() {
        let r = rule(2);
        let sq = ScalarField::on_sphere(2, |p| p[2] * p[2]);
        let north = SpherePoint::north(2);
        for t in [-0.9, -0.2, 0.0, 0.5, 1.0] {
            assert!((spherical_mean(&sq, &north, t, &r).unwrap() - t * t).abs() < 1e-13);
        }
        let e1 = SpherePoint::axis(2, 0);
        assert!((spherical_mean(&sq, &e1, 0.0, &r).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn mean_is_basis_independent() {
        let r = rule(3);
        let f = ScalarField::on_sphere(3, |p| (p[0] - 0.3 * p[3]).exp() * (1.0 + p[1] * p[2]));
        let xi = SpherePoint::normalized(&[0.3, -0.4, 0.5, 0.6]).unwrap();
        let a = SliceFrame::new(xi.coords());
        let b = SliceFrame::with_basis(xi.coords(), orthonormal_complement_householder(xi.coords()));
        for t in [-0.7, 0.1, 0.8] {
            let va = spherical_mean_in_frame(&f, &a, t, &r).unwrap();
            let vb = spherical_mean_in_frame(&f, &b, t, &r).unwrap();
            assert!((va - vb).abs() < 1e-10);
        }
    }

    #[test]
    fn truncated_circle_length() {
        // lower half of a great circle through the poles
        let r = rule(2);
        let f = ScalarField::on_cap(2, 0.0, |_| 1.0);
        let xi = SpherePoint::axis(2, 0);
        assert!((subsphere_integral(&f, &xi, 0.0, &r).unwrap() - PI).abs() < 1e-12);
        // tilted slice, arc below the equator
        let xi = SpherePoint::normalized(&[0.6, 0.0, 0.8]).unwrap();
        let t = 0.3;
        let rr = (1.0f64 - t * t).sqrt();
        let kappa = -t * 0.8 / (rr * 0.6);
        let expect = 2.0 * (PI - kappa.acos());
        assert!((subsphere_integral(&f, &xi, t, &r).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn pairing_examples() {
        let r = rule(2);
        let one = ScalarField::on_sphere(2, |_| 1.0);
        let xi = SpherePoint::normalized(&[0.2, 0.3, 0.9]).unwrap();
        let v = kernel_pairing(&one, &|_| 1.0, &xi, &[], &r).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-11);
        let v = kernel_pairing(&one, &|t| t * t, &xi, &[], &r).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-11);
        let sq = ScalarField::on_sphere(2, |p| p[2] * p[2]);
        let v = kernel_pairing(&sq, &|_| 1.0, &xi, &[], &r).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-11);
    }

    #[test]
    fn pairing_with_singular_kernel() {
        // ∫_{S^2} |ξ·η|^λ dη = 2π·2/(λ+1)
        let r = rule(2);
        let one = ScalarField::on_sphere(2, |_| 1.0);
        let xi = SpherePoint::axis(2, 1);
        for lam in [-0.5, -0.95] {
            let v = kernel_pairing(&one, &|_| 1.0, &xi, &[SpecialPoint::new(0.0, lam)], &r).unwrap();
            assert!((v - 4.0 * PI / (lam + 1.0)).abs() < 1e-10);
        }
    }
}
