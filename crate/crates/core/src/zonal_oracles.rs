//! One-dimensional closed forms of the Funk and truncated slice transforms
//! for zonal inputs `f(η) = f0(η_{n+1})`.

#![allow(non_snake_case)]

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, range, Error, Result};
use crate::radon_bridge::{radon_radial, StereoMap};
use crate::sphere_core::constants::sigma;
use crate::sphere_core::quadrature::gauss_legendre;
use crate::sphere_core::{weighted_integral, QuadratureRule, ScalarField, SpecialPoint, Support};

/// Profile `f0` on `[−1, a)` of a zonal function on the cap `S^n_a`.
#[derive(Clone)]
pub struct ZonalProfile {
    n: usize,
    a: f64,
    cutoff: Option<f64>,
    f0: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ZonalProfile {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("ZonalProfile")
            .field("n", &self.n)
            .field("a", &self.a)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl ZonalProfile {
    pub fn new<F>(n: usize, a: f64, f0: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if n < 2 {
            return domain("zonal profiles need n >= 2");
        }
        if !(a > -1.0 && a <= 1.0) {
            return range(format!("cap height a = {a} outside (-1, 1]"));
        }
        Ok(Self { n, a, cutoff: None, f0: Arc::new(f0) })
    }

    /// Declares that `f0` vanishes on `[h, a)`.
    pub fn with_cutoff(mut self, h: f64) -> Result<Self> {
        if !(h > -1.0 && h <= self.a) {
            return range(format!("cutoff {h} outside (-1, a]"));
        }
        self.cutoff = Some(h);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn cutoff(&self) -> Option<f64> {
        self.cutoff
    }

    /// `f0(t)`, zero at and above the cutoff and the cap height.
    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.cutoff.unwrap_or(self.a) || (t >= self.a && self.a < 1.0) {
            return 0.0;
        }
        (self.f0)(t)
    }

    /// Exponent `δ` of the integrability weight `(1−t²)^δ`.
    pub fn delta(&self) -> f64 {
        if self.a == 1.0 {
            (self.n as f64 - 3.0) / 2.0
        } else {
            (self.n as f64 - 2.0) / 2.0
        }
    }

    /// `∫_{−1}^{a} |f0(t)|(1−t²)^δ dt`.
    pub fn integrability(&self, rule: &QuadratureRule) -> Result<f64> {
        let d = self.delta();
        let hi = self.cutoff.unwrap_or(self.a);
        let pts = [SpecialPoint::new(-1.0, d), SpecialPoint::new(1.0, d)];
        weighted_integral(&|t| self.eval(t).abs(), -1.0, hi, &pts, rule.panels())
    }

    /// The zonal field on the cap, with its support margin when a cutoff is set.
    pub fn to_field(&self) -> Result<ScalarField> {
        let me = self.clone();
        let n = self.n;
        let f = ScalarField::on_cap(n, self.a, move |p: &[f64]| me.eval(p[n]));
        match self.cutoff {
            Some(h) if h < self.a => f.with_support(Support::CapMargin { delta: self.a - h }),
            _ => Ok(f),
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return range(format!("ρ = {rho} outside [0, 1]"));
    }
    Ok(())
}

/// Zonal Funk transform `c ρ^{2−n}∫_0^ρ f0_e(t)(ρ²−t²)^{(n−3)/2} dt`,
/// `c = 2σ_{n−2}/σ_{n−1}`, at `ρ = √(1−ξ_{n+1}²)`. Only the even part `f0_e`
/// of the profile contributes.
///
/// Evaluated as `c∫_0^{π/2} f0_e(ρ sin φ) cos^{n−2}φ dφ`, which is regular
/// at `t = ρ` and continuous down to `ρ = 0`.
pub fn zonal_funk(f0: &dyn Fn(f64) -> f64, rho: f64, n: usize, rule: &QuadratureRule) -> Result<f64> {
    check_rho(rho)?;
    let c = 2.0 * sigma(n - 2) / sigma(n - 1);
    let p = n as i32 - 2;
    let v = gauss_legendre(rule.line).integrate(0.0, FRAC_PI_2, |phi| {
        let (s, co) = phi.sin_cos();
        let t = rho * s;
        0.5 * (f0(t) + f0(-t)) * co.powi(p)
    });
    Ok(c * v)
}

/// `(S_0 f)(ξ) = (σ_{n−2}/ρ^{n−2})∫_0^ρ f0(−t)(ρ²−t²)^{(n−3)/2} dt` with
/// `ρ = √(1−ξ_{n+1}²)`, as `σ_{n−2}∫_0^{π/2} f0(−ρ sin φ) cos^{n−2}φ dφ`.
pub fn zonal_S0(f0: &dyn Fn(f64) -> f64, rho: f64, n: usize, rule: &QuadratureRule) -> Result<f64> {
    check_rho(rho)?;
    let p = n as i32 - 2;
    let v = gauss_legendre(rule.line).integrate(0.0, FRAC_PI_2, |phi| {
        let (s, co) = phi.sin_cos();
        f0(-rho * s) * co.powi(p)
    });
    Ok(sigma(n - 2) * v)
}

/// `(S_1 f)(ξ) = σ_{n−2}((1−ρ)/2)^{(3−n)/2}∫_ρ^1 f0(t)(t−ρ)^{(n−3)/2}(1−t)^{(n−3)/2} dt`
/// with `ρ = 2ξ_{n+1}² − 1`.
///
/// `t = (1+ρ)/2 − ((1−ρ)/2)cos φ` turns this into
/// `σ_{n−2}((1−ρ)/2)^{(n−1)/2}∫_0^π f0(t(φ)) sin^{n−2}φ dφ`.
pub fn zonal_S1(f0: &dyn Fn(f64) -> f64, rho: f64, n: usize, rule: &QuadratureRule) -> Result<f64> {
    if !(-1.0..1.0).contains(&rho) {
        if rho == 1.0 {
            return Err(Error::Degenerate("ρ = 1: the slice through p_N is a single point".into()));
        }
        return range(format!("ρ = {rho} outside [-1, 1)"));
    }
    let h = (1.0 - rho) / 2.0;
    let m = (1.0 + rho) / 2.0;
    let p = n as i32 - 2;
    let v = gauss_legendre(rule.line).integrate(0.0, PI, |phi| {
        let (s, c) = phi.sin_cos();
        f0(m - h * c) * s.powi(p)
    });
    Ok(sigma(n - 2) * h.powf((n as f64 - 1.0) / 2.0) * v)
}

/// `(V̊_a R̊ Ů_a f0)(s)`: the truncated slice transform of the zonal field at
/// `ξ_{n+1} = s`, through the radial Radon transform of
/// `(Ů_a f0)(r) = (a+1)P_0^{n−1}(r) f0(Q_0(r))/D_0(r)`.
pub fn zonal_pipeline(profile: &ZonalProfile, s: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        if s == 1.0 {
            return Err(Error::Pole("s = 1 is the north pole".into()));
        }
        return range(format!("s = {s} outside [0, 1)"));
    }
    let n = profile.n();
    let a = profile.a();
    let m = StereoMap::new(a)?;
    let radius = profile.cutoff().filter(|h| *h < a).map(|h| if h <= -1.0 { 0.0 } else { m.radius_at_height(h) });
    let g0 = |r: f64| {
        let w = m.weights_r2(r * r, n);
        let v = profile.eval(w.q);
        if v == 0.0 {
            0.0
        } else {
            (a + 1.0) * w.p.powi(n as i32 - 1) / w.d * v
        }
    };
    let t = (a + 1.0) * s / (1.0 - s * s).sqrt();
    let k = ((1.0 - a * a * s * s) / (1.0 - s * s)).sqrt();
    Ok(k * radon_radial(&g0, t, n, radius, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice_transforms::{funk, slice_S};
    use crate::SpherePoint;

    fn rule(n: usize) -> QuadratureRule {
        QuadratureRule::new(n, 64).unwrap()
    }

    #[test]
    fn funk_examples() {
        let r = rule(2);
        for rho in [0.0, 0.3, 1.0] {
            assert!((zonal_funk(&|_| 1.0, rho, 2, &r).unwrap() - 1.0).abs() < 1e-14);
            assert!(zonal_funk(&|t| t, rho, 2, &r).unwrap().abs() < 1e-15);
            assert!((zonal_funk(&|t| t * t, rho, 2, &r).unwrap() - rho * rho / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn funk_matches_generic_transform() {
        for n in [2, 3] {
            let r = rule(n);
            let f0 = |t: f64| (0.7 * t * t).exp() + t.powi(3);
            let f = ScalarField::on_sphere(n, move |p: &[f64]| f0(p[n]));
            let mut xi = vec![0.3; n];
            xi.push(0.5);
            let xi = SpherePoint::normalized(&xi).unwrap();
            let rho = (1.0 - xi.last().powi(2)).sqrt();
            let a = zonal_funk(&f0, rho, n, &r).unwrap();
            let b = funk(&f, &xi, &r).unwrap();
            assert!((a - b).abs() < 1e-8, "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn s0_anchor_values() {
        let r = rule(2);
        assert!((zonal_S0(&|_| 1.0, 0.4, 2, &r).unwrap() - PI).abs() < 1e-13);
        assert!((zonal_S0(&|_| 1.0, 0.4, 3, &r).unwrap() - 2.0 * PI).abs() < 1e-13);
        let upper = |t: f64| if t >= 0.0 { t + 1.0 } else { 0.0 };
        assert_eq!(zonal_S0(&upper, 0.7, 2, &r).unwrap(), 0.0);
    }

    #[test]
    fn s1_anchor_values() {
        let r = rule(3);
        for rho in [-0.5, 0.2, 0.9] {
            let v = zonal_S1(&|_| 1.0, rho, 3, &r).unwrap();
            assert!((v - 2.0 * PI * (1.0 - rho)).abs() < 1e-12);
            let v = zonal_S1(&|_| 1.0, rho, 2, &r).unwrap();
            assert!((v - 2.0 * PI * ((1.0 - rho) / 2.0).sqrt()).abs() < 1e-12);
        }
        assert!(matches!(zonal_S1(&|_| 1.0, 1.0, 2, &r), Err(Error::Degenerate(_))));
        let low = |t: f64| if t < 0.0 { 1.0 } else { 0.0 };
        assert_eq!(zonal_S1(&low, 0.1, 2, &r).unwrap(), 0.0);
    }

    #[test]
    fn s1_decaying_profile_matches_direct_slices() {
        let r = rule(2);
        let prof = ZonalProfile::new(2, 1.0, |t| 1.0 - t).unwrap();
        let f = prof.to_field().unwrap();
        let xi = SpherePoint::axis(2, 0);
        let direct = slice_S(&f, &xi, 1.0, &r).unwrap();
        let v = zonal_S1(&|t| 1.0 - t, -1.0, 2, &r).unwrap();
        assert!((v - direct).abs() < 1e-6, "{v} vs {direct}");
    }

    #[test]
    fn pipeline_agrees_with_closed_forms() {
        for n in [2, 3] {
            let r = rule(n);
            let f0 = |t: f64| 1.0 + t + 0.5 * t * t;
            for s in [0.1, 0.5, 0.8] {
                let p0 = ZonalProfile::new(n, 0.0, f0).unwrap();
                let a = zonal_pipeline(&p0, s, &r).unwrap();
                let b = zonal_S0(&f0, (1.0 - s * s).sqrt(), n, &r).unwrap();
                assert!((a - b).abs() < 1e-8, "a = 0, n = {n}, s = {s}: {a} vs {b}");
                let p1 = ZonalProfile::new(n, 1.0, f0).unwrap();
                let a = zonal_pipeline(&p1, s, &r).unwrap();
                let b = zonal_S1(&f0, 2.0 * s * s - 1.0, n, &r).unwrap();
                assert!((a - b).abs() < 1e-8, "a = 1, n = {n}, s = {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn profile_bookkeeping() {
        let p = ZonalProfile::new(2, 0.5, |_| 1.0).unwrap().with_cutoff(0.2).unwrap();
        assert_eq!(p.eval(0.3), 0.0);
        assert_eq!(p.eval(0.1), 1.0);
        assert_eq!(p.delta(), 0.0);
        let r = rule(2);
        assert!((p.integrability(&r).unwrap() - 1.2).abs() < 1e-12);
        assert_eq!(ZonalProfile::new(2, 1.0, |_| 1.0).unwrap().delta(), -0.5);
    }
}
