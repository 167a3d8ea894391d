use std::sync::Arc;

use crate::error::{domain, range, Result};
use crate::sphere_core::constants::sigma;
use crate::sphere_core::point::{norm, Coords};
use crate::sphere_core::{ScalarField, SpherePoint};

fn check_a(a: f64) -> Result<()> {
    if !(a > -1.0 && a < 1.0) {
        return range(format!("meridional maps need |a| < 1, got a = {a}"));
    }
    Ok(())
}

/// Replaces the height of `p` by `v` and rescales the horizontal part by `scale`.
fn remap(p: &[f64], v: f64, scale: f64) -> Coords {
    let m = p.len();
    let mut out: Coords = p[..m - 1].iter().map(|c| c * scale).collect();
    out.push(v);
    // tidy drift so the result stays on the sphere
    let r = norm(&out);
    for c in out.iter_mut() {
        *c /= r;
    }
    out
}

/// The latitude reparameterizations `μ` (on `η`) and `ν` (on `ξ`) for a
/// fixed `a ∈ (−1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridionalMap {
    a: f64,
}

impl MeridionalMap {
    pub fn new(a: f64) -> Result<Self> {
        check_a(a)?;
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `μ: η(ψ, u) ↦ η̃(ψ, v)` with `v = (u − a)/(1 − au)`.
    pub fn mu(&self, p: &[f64]) -> Coords {
        let a = self.a;
        let u = p[p.len() - 1];
        let d = 1.0 - a * u;
        remap(p, (u - a) / d, (1.0 - a * a).sqrt() / d)
    }

    /// `μ⁻¹: η̃(ψ, v) ↦ η(ψ, u)` with `u = (v + a)/(1 + av)`.
    pub fn mu_inv(&self, p: &[f64]) -> Coords {
        let a = self.a;
        let v = p[p.len() - 1];
        let d = 1.0 + a * v;
        remap(p, (v + a) / d, (1.0 - a * a).sqrt() / d)
    }

    /// `ν: ξ(φ, s) ↦ ξ̃(φ, t)` with `t = s√(1−a²)/√(1−a²s²)`.
    pub fn nu(&self, p: &[f64]) -> Coords {
        let a = self.a;
        let s = p[p.len() - 1];
        let d = (1.0 - a * a * s * s).sqrt();
        remap(p, s * (1.0 - a * a).sqrt() / d, 1.0 / d)
    }

    /// `ν⁻¹: ξ̃(φ, t) ↦ ξ(φ, s)` with `s = t/√(1−a²+a²t²)`.
    pub fn nu_inv(&self, p: &[f64]) -> Coords {
        let a = self.a;
        let t = p[p.len() - 1];
        let d = (1.0 - a * a + a * a * t * t).sqrt();
        remap(p, t / d, (1.0 - a * a).sqrt() / d)
    }
}

pub fn apply_mu(eta: &SpherePoint, a: f64, inverse: bool) -> Result<SpherePoint> {
    let m = MeridionalMap::new(a)?;
    let c = if inverse { m.mu_inv(eta.coords()) } else { m.mu(eta.coords()) };
    SpherePoint::new(&c)
}

pub fn apply_nu(xi: &SpherePoint, a: f64, inverse: bool) -> Result<SpherePoint> {
    let m = MeridionalMap::new(a)?;
    let c = if inverse { m.nu_inv(xi.coords()) } else { m.nu(xi.coords()) };
    SpherePoint::new(&c)
}

/// `𝓜_a f = (f∘μ⁻¹)/(1 + aη̃_{n+1})^{n−1}`, or its inverse
/// `𝓜_a⁻¹ f̃ = ((1−a²)/(1−ua))^{n−1} f̃∘μ`.
pub fn op_Ma(f: &ScalarField, a: f64, inverse: bool) -> Result<ScalarField> {
    f.require_spherical("op_Ma")?;
    let m = MeridionalMap::new(a)?;
    let n = f.n();
    let e = n as i32 - 1;
    let g = f.evaluator();
    let out: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync> = if inverse {
        Arc::new(move |p: &[f64]| {
            let u = p[p.len() - 1];
            ((1.0 - a * a) / (1.0 - u * a)).powi(e) * g(&m.mu(p))
        })
    } else {
        Arc::new(move |p: &[f64]| {
            let v = p[p.len() - 1];
            g(&m.mu_inv(p)) / (1.0 + a * v).powi(e)
        })
    };
    Ok(ScalarField::from_arc(n, crate::Domain::Sphere, out).with_smoothness(f.smoothness()))
}

/// `𝓝_a Φ = σ_{n−1}(1−a²)^{(n−1)/2} Φ∘ν`, or its inverse
/// `𝓝_a⁻¹ Φ̃ = (1−a²)^{(1−n)/2}/σ_{n−1} · Φ̃∘ν⁻¹`.
pub fn op_Na(phi: &ScalarField, a: f64, inverse: bool) -> Result<ScalarField> {
    phi.require_spherical("op_Na")?;
    let m = MeridionalMap::new(a)?;
    let n = phi.n();
    let k = sigma(n - 1) * (1.0 - a * a).powf((n as f64 - 1.0) / 2.0);
    let g = phi.evaluator();
    let out: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync> = if inverse {
        Arc::new(move |p: &[f64]| g(&m.nu_inv(p)) / k)
    } else {
        Arc::new(move |p: &[f64]| k * g(&m.nu(p)))
    };
    Ok(ScalarField::from_arc(n, crate::Domain::Sphere, out).with_smoothness(phi.smoothness()))
}

/// The reflected point `η*` through `A = a e_{n+1}` and the weights
/// `ρ(η)`, `ρ(η*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionData {
    pub eta_star: SpherePoint,
    /// `ρ(η) = ((1+a²−2ua)/(1−a²))^{n−1}`
    pub rho: f64,
    /// `ρ(η*)`
    pub rho_star: f64,
}

fn rho(u: f64, a: f64, n: usize) -> f64 {
    ((1.0 + a * a - 2.0 * u * a) / (1.0 - a * a)).powi(n as i32 - 1)
}

/// `u* = (2a − u(1+a²))/(1+a²−2ua)`, `ψ* = −ψ`.
pub fn reflection(eta: &SpherePoint, a: f64) -> Result<ReflectionData> {
    check_a(a)?;
    let n = eta.n();
    let p = eta.coords();
    let u = eta.last();
    let d = 1.0 + a * a - 2.0 * u * a;
    let us = (2.0 * a - u * (1.0 + a * a)) / d;
    // horizontal part scales by √(1−u*²)/√(1−u²) = (1−a²)/d
    let scale = -(1.0 - a * a) / d;
    let mut c: Coords = p[..n].iter().map(|x| x * scale).collect();
    c.push(us);
    let r = norm(&c);
    for x in c.iter_mut() {
        *x /= r;
    }
    Ok(ReflectionData { eta_star: SpherePoint::new(&c)?, rho: rho(u, a, n), rho_star: rho(us, a, n) })
}

/// Norm of the wedge `(η − A) ∧ (η* − A)`; zero when the three points are collinear.
pub fn collinearity_defect(eta: &SpherePoint, eta_star: &SpherePoint, a: f64) -> f64 {
    let m = eta.coords().len();
    let x: Vec<f64> = (0..m).map(|k| eta.coords()[k] - if k == m - 1 { a } else { 0.0 }).collect();
    let y: Vec<f64> = (0..m).map(|k| eta_star.coords()[k] - if k == m - 1 { a } else { 0.0 }).collect();
    let mut acc = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            acc += (x[i] * y[j] - x[j] * y[i]).powi(2);
        }
    }
    acc.sqrt()
}

/// `𝓜_a⁻¹ P_± 𝓜_a f` with `P_±` the even (`sign = +1`) or odd (`sign = −1`)
/// part; the result satisfies `f(η) = ±ρ(η*) f(η*)`.
pub fn make_symmetric(f: &ScalarField, a: f64, sign: i32) -> Result<ScalarField> {
    if sign != 1 && sign != -1 {
        return domain(format!("sign must be +1 or -1, got {sign}"));
    }
    let g = op_Ma(f, a, false)?;
    let ge = g.evaluator();
    let s = sign as f64;
    let part = ScalarField::on_sphere(f.n(), move |p: &[f64]| {
        let q: Coords = p.iter().map(|c| -c).collect();
        0.5 * (ge(p) + s * ge(&q))
    })
    .with_smoothness(f.smoothness());
    op_Ma(&part, a, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_examples() {
        let m = MeridionalMap::new(0.4).unwrap();
        let p = crate::make_point(&[0.6, 0.8], 0.4).unwrap();
        assert!(m.mu(p.coords())[2].abs() < 1e-15);
        let north = SpherePoint::north(2);
        assert_eq!(m.mu(north.coords()).as_slice(), north.coords());
        let south = SpherePoint::south(2);
        assert_eq!(m.mu(south.coords()).as_slice(), south.coords());
        let id = MeridionalMap::new(0.0).unwrap();
        let q = SpherePoint::normalized(&[0.3, -0.2, 0.5]).unwrap();
        for (x, y) in id.mu(q.coords()).iter().zip(q.coords()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn nu_example() {
        let m = MeridionalMap::new(0.5).unwrap();
        let xi = crate::make_point(&[1.0, 0.0], 0.6).unwrap();
        let t = m.nu(xi.coords())[2];
        let expect = 0.6 * 0.75f64.sqrt() / (1.0f64 - 0.25 * 0.36).sqrt();
        assert!((t - expect).abs() < 1e-15);
        assert!((t - 0.5447).abs() < 1e-4);
        let back = m.nu_inv(&m.nu(xi.coords()));
        for (x, y) in back.iter().zip(xi.coords()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn reflection_examples() {
        let eta = SpherePoint::normalized(&[0.3, 0.4, -0.5]).unwrap();
        let r = reflection(&eta, 0.0).unwrap();
        for (x, y) in r.eta_star.coords().iter().zip(eta.neg().coords()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(r.rho, 1.0);
        let p = crate::make_point(&[0.6, 0.8], 0.3).unwrap();
        let r = reflection(&p, 0.3).unwrap();
        assert!((r.eta_star.last() - 0.3).abs() < 1e-15);
        assert!((r.eta_star.coords()[0] + p.coords()[0]).abs() < 1e-15);
    }

    #[test]
    fn op_Ma_of_constant() {
        let one = ScalarField::on_sphere(2, |_| 1.0);
        let g = op_Ma(&one, 0.5, false).unwrap();
        let p = SpherePoint::normalized(&[0.1, 0.2, 0.7]).unwrap();
        assert!((g.eval(p.coords()) - 1.0 / (1.0 + 0.5 * p.last())).abs() < 1e-15);
    }

    #[test]
    fn op_Na_of_constant() {
        let one = ScalarField::on_sphere(2, |_| 1.0);
        let g = op_Na(&one, 0.5, false).unwrap();
        let p = SpherePoint::normalized(&[0.1, 0.2, 0.7]).unwrap();
        assert!((g.eval(p.coords()) - 2.0 * std::f64::consts::PI * 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn classical_even_part_at_zero() {
        let f = ScalarField::on_sphere(2, |p| p[0] + p[2] * p[2] + p[1] * p[2]);
        let g = make_symmetric(&f, 0.0, 1).unwrap();
        let p = SpherePoint::normalized(&[0.3, 0.4, 0.2]).unwrap();
        let q = p.neg();
        let expect = 0.5 * (f.eval(p.coords()) + f.eval(q.coords()));
        assert!((g.eval(p.coords()) - expect).abs() < 1e-15);
    }
}
