use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, range, Result};
use crate::sphere_core::interp::extrapolate_to_zero;
use crate::sphere_core::point::dot;
use crate::sphere_core::quadrature::SphereRule;
use crate::sphere_core::{QuadratureRule, ScalarField, SpherePoint};

use super::operators::op_Va_inv;
use super::radon::RadonData;
use super::stereo::StereoMap;

/// Offsets `t/r` at which the odd-dimensional formula is evaluated before
/// extrapolating `t → 0`.
pub const ODD_OFFSETS: [f64; 3] = [0.04, 0.02, 0.01];

/// Central-difference step relative to the support radius.
pub const ODD_STEP: f64 = 1e-3;

/// Inverse hyperplane Radon transform for data supported in `|t| ≤ r`.
///
/// Odd `n`: `g(x) = lim_{t→0} π^{(1−n)/2}(−(1/2t) d/dt)^{(n−1)/2} ∫_{S^{n−1}} (Rg)(θ, t + x·θ) d_*θ`.
/// `n = 2`: filtered backprojection with the discrete ramp filter on a
/// uniform grid of `rule.fbp_samples` offsets and `rule.fbp_angles`
/// directions in `[0, π)`. The filtered profiles are computed once.
pub struct RadonInverter {
    data: RadonData,
    kind: Kind,
}

enum Kind {
    Odd { dirs: SphereRule },
    Fbp { angles: Vec<[f64; 2]>, t0: f64, dt: f64, filtered: Vec<Vec<f64>> },
}

impl RadonInverter {
    pub fn new(data: RadonData, rule: &QuadratureRule) -> Result<Self> {
        let n = data.n();
        if n < 2 {
            return domain("Radon inversion needs n >= 2");
        }
        let kind = if n % 2 == 1 {
            Kind::Odd { dirs: SphereRule::new(n - 1, rule.lat, rule.lon) }
        } else if n == 2 {
            fbp_setup(&data, rule)
        } else {
            return range(format!("even-dimensional inversion is only available for n = 2, got n = {n}"));
        };
        Ok(Self { data, kind })
    }

    pub fn data(&self) -> &RadonData {
        &self.data
    }

    /// The reconstruction at `x`; zero outside the support ball.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = self.data.radius();
        if dot(x, x).sqrt() > r {
            return 0.0;
        }
        match &self.kind {
            Kind::Odd { dirs } => self.odd(dirs, x),
            Kind::Fbp { angles, t0, dt, filtered } => {
                let mut acc = 0.0;
                for (th, q) in angles.iter().zip(filtered) {
                    let p = (x[0] * th[0] + x[1] * th[1] - t0) / dt;
                    let j = p.floor();
                    if j < 0.0 || j as usize + 1 >= q.len() {
                        continue;
                    }
                    let (j, fr) = (j as usize, p - j);
                    acc += (1.0 - fr) * q[j] + fr * q[j + 1];
                }
                PI / angles.len() as f64 * acc
            }
        }
    }

    fn odd(&self, dirs: &SphereRule, x: &[f64]) -> f64 {
        let n = self.data.n();
        let r = self.data.radius();
        let total = dirs.total_weight();
        let mean = |t: f64| {
            let mut acc = 0.0;
            for (th, w) in dirs.iter() {
                acc += w * self.data.eval(th, t + dot(th, x));
            }
            acc / total
        };
        let h = ODD_STEP * r;
        let k = (n - 1) / 2;
        let c = PI.powf((1.0 - n as f64) / 2.0);
        let ts: Vec<f64> = ODD_OFFSETS.iter().map(|o| o * r).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| c * neg_abel(&mean, t, k, h)).collect();
        let t2: Vec<f64> = ts.iter().map(|t| t * t).collect();
        extrapolate_to_zero(&t2, &ys)
    }
}

/// `(−(1/2t) d/dt)^k F` at `t` by nested central differences.
fn neg_abel(f: &dyn Fn(f64) -> f64, t: f64, k: usize, h: f64) -> f64 {
    if k == 0 {
        return f(t);
    }
    let up = neg_abel(f, t + h, k - 1, h);
    let dn = neg_abel(f, t - h, k - 1, h);
    -(up - dn) / (2.0 * h) / (2.0 * t)
}

fn fbp_setup(data: &RadonData, rule: &QuadratureRule) -> Kind {
    let r = data.radius();
    let nt = rule.fbp_samples.max(8);
    let na = rule.fbp_angles.max(4);
    let dt = 2.0 * r / (nt - 1) as f64;
    let t0 = -r;
    let angles: Vec<[f64; 2]> = (0..na)
        .map(|k| {
            let phi = PI * k as f64 / na as f64;
            [phi.cos(), phi.sin()]
        })
        .collect();
    let kernel: Vec<f64> = (0..nt)
        .map(|k| match k {
            0 => 1.0 / (4.0 * dt * dt),
            k if k % 2 == 1 => -1.0 / ((k * k) as f64 * PI * PI * dt * dt),
            _ => 0.0,
        })
        .collect();
    let filtered = angles
        .par_iter()
        .map(|th| {
            let p: Vec<f64> = (0..nt).map(|j| data.eval(th, t0 + j as f64 * dt)).collect();
            (0..nt)
                .map(|j| {
                    let mut acc = 0.0;
                    for (i, pi) in p.iter().enumerate() {
                        if *pi != 0.0 {
                            acc += kernel[j.abs_diff(i)] * pi;
                        }
                    }
                    dt * acc
                })
                .collect()
        })
        .collect();
    Kind::Fbp { angles, t0, dt, filtered }
}

/// `g(x)` from Radon data; see [`RadonInverter`].
pub fn radon_inverse(data: &RadonData, x: &[f64], rule: &QuadratureRule) -> Result<f64> {
    if x.len() != data.n() {
        return domain("x must lie in R^n");
    }
    Ok(RadonInverter::new(data.clone(), rule)?.eval(x))
}

/// `S_a⁻¹ = U_a⁻¹ R⁻¹ V_a⁻¹` for data `S_a f` of a function `f` vanishing
/// above `η_{n+1} = a − δ`.
pub struct SaReconstructor {
    a: f64,
    map: StereoMap,
    cutoff: f64,
    inverter: RadonInverter,
}

impl SaReconstructor {
    pub fn new(data: &ScalarField, a: f64, delta: f64, rule: &QuadratureRule) -> Result<Self> {
        data.require_spherical("reconstruct_Sa")?;
        if rule.n() != data.n() {
            return domain("quadrature and data dimensions differ");
        }
        let map = StereoMap::new(a)?;
        if !(delta > 0.0 && delta <= a + 1.0) {
            return range(format!("support margin δ = {delta} must lie in (0, a + 1]"));
        }
        let cutoff = a - delta;
        let radius = if cutoff <= -1.0 { 0.0 } else { map.radius_at_height(cutoff) };
        let rd = op_Va_inv(data, a, None, radius)?;
        Ok(Self { a, map, cutoff, inverter: RadonInverter::new(rd, rule)? })
    }

    pub fn eval(&self, eta: &SpherePoint) -> Result<f64> {
        let u = eta.last();
        if eta.n() != self.inverter.data().n() {
            return domain("point and data dimensions differ");
        }
        if !(u < self.a) {
            return domain(format!("η_(n+1) = {u} is outside the cap below a = {}", self.a));
        }
        if u >= self.cutoff {
            return Ok(0.0);
        }
        let x = self.map.backward(eta.coords());
        let n = eta.n() as i32;
        let a = self.a;
        let k = (a + 1.0).powi(n - 1) * (1.0 - a * u) / (a - u).powi(n);
        Ok(k * self.inverter.eval(&x))
    }
}

/// `f(η)` from `data = S_a f`, for `f` vanishing above `a − δ`.
pub fn reconstruct_Sa(
    data: &ScalarField,
    eta: &SpherePoint,
    a: f64,
    delta: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    SaReconstructor::new(data, a, delta, rule)?.eval(eta)
}

/// [`reconstruct_Sa`] over many points, sharing the filtered data.
pub fn reconstruct_Sa_grid(
    data: &ScalarField,
    points: &[SpherePoint],
    a: f64,
    delta: f64,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    let rec = SaReconstructor::new(data, a, delta, rule)?;
    points.par_iter().map(|p| rec.eval(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_data(n: usize) -> RadonData {
        let c = PI.powf((n as f64 - 1.0) / 2.0);
        RadonData::new(n, 8.0, move |_, t| c * (-t * t).exp())
    }

    #[test]
    fn odd_inversion_of_gaussian() {
        let r = QuadratureRule::new(3, 32).unwrap();
        let inv = RadonInverter::new(gaussian_data(3), &r).unwrap();
        for x in [[0.0, 0.0, 0.0], [0.5, -0.3, 0.2], [1.0, 0.4, -0.6]] {
            let want = (-dot(&x, &x)).exp();
            let v = inv.eval(&x);
            assert!((v - want).abs() < 1e-3, "{v} vs {want}");
        }
    }

    #[test]
    fn fbp_of_gaussian() {
        let r = QuadratureRule::new(2, 32).unwrap();
        let inv = RadonInverter::new(gaussian_data(2), &r).unwrap();
        for x in [[0.0, 0.0], [0.5, -0.3], [1.0, 0.4]] {
            let want = (-dot(&x, &x)).exp();
            let v = inv.eval(&x);
            assert!((v - want).abs() < 1e-2, "{v} vs {want}");
        }
    }

    #[test]
    fn zero_data() {
        let r = QuadratureRule::new(3, 16).unwrap();
        let z = RadonData::new(3, 1.0, |_, _| 0.0);
        assert_eq!(radon_inverse(&z, &[0.1, 0.2, 0.3], &r).unwrap(), 0.0);
    }
}
