use crate::error::{domain, range, Result};
use crate::sphere_core::point::{norm, Coords};
use crate::sphere_core::SpherePoint;

/// The plane `τ(θ, t) = {x ∈ R^n : x·θ = t}`.
///
/// `(θ, t)` and `(−θ, −t)` describe the same plane; [`Hyperplane::new`]
/// stores the representative whose first nonzero coordinate of `θ` is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    theta: Coords,
    t: f64,
}

impl Hyperplane {
    /// Normalizes `theta` and canonicalizes the sign.
    pub fn new(theta: &[f64], t: f64) -> Result<Self> {
        let r = norm(theta);
        if theta.is_empty() || !(r > 1e-300) || !r.is_finite() || !t.is_finite() {
            return domain("a hyperplane needs a nonzero direction and a finite offset");
        }
        let mut th: Coords = theta.iter().map(|c| c / r).collect();
        let first = th.iter().copied().find(|c| *c != 0.0).unwrap_or(1.0);
        let s = if first < 0.0 { -1.0 } else { 1.0 };
        for c in th.iter_mut() {
            *c *= s;
        }
        Ok(Self { theta: th, t: s * t })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        (crate::sphere_core::point::dot(&self.theta, x) - self.t).abs() <= tol
    }
}

/// `P`, `Q`, `D` and `w∘π` at a point of `R^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoWeights {
    pub p: f64,
    pub q: f64,
    pub d: f64,
    /// `(w∘π)(x) = D(x)/((a+1)P^n(x))`.
    pub w: f64,
}

/// Stereographic projection `π : R^n → S^n_a` with pole `A = a e_{n+1}`,
/// `π(x) = P(x)x + Q(x)e_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoMap {
    a: f64,
}

impl StereoMap {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > -1.0 && a <= 1.0) {
            return range(format!("stereographic pole height a = {a} outside (-1, 1]"));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `D`, `P`, `Q` as functions of `|x|²`.
    pub fn weights_r2(&self, r2: f64, n: usize) -> StereoWeights {
        let a = self.a;
        let d = (a + 1.0).sqrt() * (r2 * (1.0 - a) + a + 1.0).sqrt();
        let den = r2 + (a + 1.0).powi(2);
        let p = (a * (a + 1.0) + d) / den;
        let q = (a * r2 - (a + 1.0) * d) / den;
        let w = d / ((a + 1.0) * p.powi(n as i32));
        StereoWeights { p, q, d, w }
    }

    pub fn weights(&self, x: &[f64]) -> StereoWeights {
        self.weights_r2(x.iter().map(|c| c * c).sum(), x.len())
    }

    /// `π(x)` as raw coordinates in `R^{n+1}`.
    pub fn forward(&self, x: &[f64]) -> Coords {
        let w = self.weights(x);
        let mut out: Coords = x.iter().map(|c| w.p * c).collect();
        out.push(w.q);
        out
    }

    /// `π⁻¹(η) = (a+1)η′/(a−η_{n+1})`, without checks.
    pub fn backward(&self, eta: &[f64]) -> Coords {
        let m = eta.len() - 1;
        let k = (self.a + 1.0) / (self.a - eta[m]);
        eta[..m].iter().map(|c| k * c).collect()
    }

    /// `w(η) = (a+1)^n(1−aη_{n+1})/(a−η_{n+1})^{n+1}`.
    pub fn jacobian(&self, eta: &[f64]) -> f64 {
        let n = eta.len() - 1;
        let u = eta[n];
        let a = self.a;
        (a + 1.0).powi(n as i32) * (1.0 - a * u) / (a - u).powi(n as i32 + 1)
    }

    /// Height `Q` of `π(x)` for `|x| = r`; increasing in `r`.
    pub fn height_at_radius(&self, r: f64) -> f64 {
        self.weights_r2(r * r, 1).q
    }

    /// `|π⁻¹(η)|` for `η_{n+1} = h`, the largest over the cap `{η_{n+1} ≤ h}`.
    pub fn radius_at_height(&self, h: f64) -> f64 {
        (self.a + 1.0) * (1.0 - h * h).max(0.0).sqrt() / (self.a - h)
    }
}

pub fn stereo(x: &[f64], a: f64) -> Result<SpherePoint> {
    if x.is_empty() || x.iter().any(|c| !c.is_finite()) {
        return domain("stereo needs a finite point of R^n, n >= 1");
    }
    let m = StereoMap::new(a)?;
    let eta = SpherePoint::new(&m.forward(x))?;
    if !(eta.last() < a) {
        return domain(format!("π(x) has height {} ≥ a = {a}", eta.last()));
    }
    Ok(eta)
}

pub fn stereo_inv(eta: &SpherePoint, a: f64) -> Result<Coords> {
    let m = StereoMap::new(a)?;
    if !(eta.last() < a) {
        return domain(format!("η_(n+1) = {} is not below a = {a}", eta.last()));
    }
    Ok(m.backward(eta.coords()))
}

pub fn stereo_weights(x: &[f64], a: f64) -> Result<StereoWeights> {
    Ok(StereoMap::new(a)?.weights(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        let e = stereo(&[0.0, 0.0], 0.0).unwrap();
        assert_eq!(e.coords(), &[0.0, 0.0, -1.0]);
        let w = stereo_weights(&[0.0, 0.0], 0.0).unwrap();
        assert!((w.p - 1.0).abs() < 1e-15 && (w.q + 1.0).abs() < 1e-15 && (w.d - 1.0).abs() < 1e-15);
        let x = stereo_inv(&SpherePoint::axis(2, 0), 1.0).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15 && x[1].abs() < 1e-15);
        let e = stereo(&[2.0 * 0.6, 2.0 * 0.8], 1.0).unwrap();
        assert!(e.last().abs() < 1e-15);
        let w = stereo_weights(&[0.0, 0.0], 1.0).unwrap();
        assert!((w.d - 2.0).abs() < 1e-15 && (w.p - 1.0).abs() < 1e-15 && (w.q + 1.0).abs() < 1e-15);
    }

    #[test]
    fn special_case_weights() {
        let x = [0.7, -1.3, 0.2];
        let r2: f64 = x.iter().map(|c| c * c).sum();
        let w0 = stereo_weights(&x, 0.0).unwrap();
        assert!((w0.d - (r2 + 1.0).sqrt()).abs() < 1e-14);
        assert!((w0.p - 1.0 / (r2 + 1.0).sqrt()).abs() < 1e-14);
        assert!((w0.w - (r2 + 1.0).powf(2.0)).abs() < 1e-12);
        let w1 = stereo_weights(&x, 1.0).unwrap();
        assert!((w1.d - 2.0).abs() < 1e-14);
        assert!((w1.p - 4.0 / (r2 + 4.0)).abs() < 1e-14);
        assert!((w1.q - (r2 - 4.0) / (r2 + 4.0)).abs() < 1e-14);
    }

    #[test]
    fn round_trip_and_weight_identities() {
        for a in [0.0, 0.5, 1.0, -0.7] {
            let m = StereoMap::new(a).unwrap();
            let x = [0.4, -2.5];
            let eta = stereo(&x, a).unwrap();
            let back = stereo_inv(&eta, a).unwrap();
            assert!((back[0] - x[0]).abs() < 1e-12 && (back[1] - x[1]).abs() < 1e-12);
            let w = m.weights(&x);
            assert!((w.p - (a - eta.last()) / (a + 1.0)).abs() < 1e-13);
            assert!((w.q - eta.last()).abs() < 1e-13);
            assert!((w.w - m.jacobian(eta.coords())).abs() < 1e-10 * w.w);
        }
    }

    #[test]
    fn radius_and_height_are_inverse() {
        let m = StereoMap::new(0.5).unwrap();
        let h = m.height_at_radius(3.0);
        assert!((m.radius_at_height(h) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_canonical_sign() {
        let p = Hyperplane::new(&[-3.0, 4.0], 1.0).unwrap();
        assert_eq!(p.theta(), &[0.6, -0.8]);
        assert_eq!(p.t(), -1.0);
        assert!(p.contains(&[-0.6, 0.8], 1e-15));
        assert!(Hyperplane::new(&[0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn stereo_inv_rejects_points_above_the_pole() {
        assert!(stereo_inv(&SpherePoint::north(2), 0.5).is_err());
        assert!(stereo_inv(&SpherePoint::axis(2, 0), 0.0).is_err());
    }
}
