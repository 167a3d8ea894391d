use crate::error::{Error, Result};

use super::quadrature::{gauss_jacobi, gauss_legendre, PanelSpec};

/// A point where the integrand behaves like `|y − at|^exponent`.
///
/// An exponent of zero marks a kink or jump: the integrator still splits and
/// grades there but applies no weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialPoint {
    pub at: f64,
    pub exponent: f64,
}

impl SpecialPoint {
    pub fn new(at: f64, exponent: f64) -> Self {
        Self { at, exponent }
    }

    pub fn kink(at: f64) -> Self {
        Self { at, exponent: 0.0 }
    }
}

fn merge(points: &[SpecialPoint]) -> Vec<SpecialPoint> {
    let mut ps: Vec<SpecialPoint> = points.iter().copied().filter(|p| p.at.is_finite()).collect();
    ps.sort_by(|a, b| a.at.total_cmp(&b.at));
    let mut out: Vec<SpecialPoint> = Vec::with_capacity(ps.len());
    for p in ps {
        match out.last_mut() {
            Some(q) if (q.at - p.at).abs() <= 1e-15 * (1.0 + p.at.abs()) => q.exponent += p.exponent,
            _ => out.push(p),
        }
    }
    out
}

fn weight(y: f64, points: &[SpecialPoint], skip: Option<usize>) -> f64 {
    let mut w = 1.0;
    for (k, p) in points.iter().enumerate() {
        if Some(k) != skip && p.exponent != 0.0 {
            w *= (y - p.at).abs().powf(p.exponent);
        }
    }
    w
}

/// `∫_lo^hi g(y) Π_k |y − p_k|^{e_k} dy`.
///
/// The interval is split at every special point inside it; each piece is
/// covered by panels that halve in width towards a special end (`levels`
/// halvings). The innermost panel at a weighted point uses Gauss–Jacobi with
/// the local exponent, so the weight is integrated exactly there; all other
/// panels use Gauss–Legendre with the weight evaluated pointwise. A point
/// just outside the interval grades the adjacent end.
pub fn weighted_integral(
    g: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    points: &[SpecialPoint],
    spec: PanelSpec,
) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Range(format!("integration limits [{lo}, {hi}] must be finite")));
    }
    if hi < lo {
        return weighted_integral(g, hi, lo, points, spec).map(|v| -v);
    }
    if hi == lo {
        return Ok(0.0);
    }
    let pts = merge(points);
    let len = hi - lo;
    for p in &pts {
        if p.exponent <= -1.0 && p.at >= lo && p.at <= hi {
            return Err(Error::NonIntegrable(format!(
                "|y − {}|^{} is not integrable",
                p.at, p.exponent
            )));
        }
    }

    // breakpoints with a flag saying whether to grade towards them
    let mut breaks: Vec<(f64, Option<usize>, bool)> = vec![(lo, None, false), (hi, None, false)];
    for (k, p) in pts.iter().enumerate() {
        if p.at > lo && p.at < hi {
            breaks.push((p.at, Some(k), true));
        } else if p.at == lo {
            breaks[0] = (lo, Some(k), true);
        } else if p.at == hi {
            breaks[1] = (hi, Some(k), true);
        } else if p.at < lo && lo - p.at < len {
            breaks[0].2 = true;
        } else if p.at > hi && p.at - hi < len {
            breaks[1].2 = true;
        }
    }
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut total = 0.0;
    for win in breaks.windows(2) {
        let (a, ka, ga) = win[0];
        let (b, kb, gb) = win[1];
        if b <= a {
            continue;
        }
        total += match (ga, gb) {
            (true, true) => {
                let m = 0.5 * (a + b);
                graded(g, a, m, ka, &pts, spec)? + graded(g, b, m, kb, &pts, spec)?
            }
            (true, false) => graded(g, a, b, ka, &pts, spec)?,
            (false, true) => graded(g, b, a, kb, &pts, spec)?,
            (false, false) => plain(g, a, b, &pts, spec, 4),
        };
    }
    Ok(total)
}

fn plain(g: &dyn Fn(f64) -> f64, a: f64, b: f64, pts: &[SpecialPoint], spec: PanelSpec, pieces: usize) -> f64 {
    let rule = gauss_legendre(spec.order);
    let h = (b - a) / pieces as f64;
    let mut s = 0.0;
    for k in 0..pieces {
        let lo = a + h * k as f64;
        s += rule.integrate(lo, lo + h, |y| g(y) * weight(y, pts, None));
    }
    s
}

/// Integral from `p` to `q` (oriented as `|q − p|`), panels shrinking towards `p`.
fn graded(
    g: &dyn Fn(f64) -> f64,
    p: f64,
    q: f64,
    kp: Option<usize>,
    pts: &[SpecialPoint],
    spec: PanelSpec,
) -> Result<f64> {
    let len = (q - p).abs();
    let dir = if q >= p { 1.0 } else { -1.0 };
    let rule = gauss_legendre(spec.order);
    let at = |s: f64| p + dir * s;
    let mut total = 0.0;
    let mut outer = len;
    for _ in 0..spec.levels {
        let inner = 0.5 * outer;
        let pieces = ((outer - inner) / (len / 8.0)).ceil().max(1.0) as usize;
        let h = (outer - inner) / pieces as f64;
        for k in 0..pieces {
            let s0 = inner + h * k as f64;
            total += rule.integrate(s0, s0 + h, |s| {
                let y = at(s);
                g(y) * weight(y, pts, None)
            });
        }
        outer = inner;
    }
    let e = kp.map_or(0.0, |k| pts[k].exponent);
    if e == 0.0 {
        total += rule.integrate(0.0, outer, |s| {
            let y = at(s);
            g(y) * weight(y, pts, None)
        });
    } else {
        let jac = gauss_jacobi(spec.inner_order, 0.0, e)?;
        let half = 0.5 * outer;
        let mut s = 0.0;
        for (x, w) in jac.nodes.iter().zip(&jac.weights) {
            let y = at(half * (1.0 + x));
            s += w * g(y) * weight(y, pts, kp);
        }
        total += s * half.powf(e + 1.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integral() {
        let v = weighted_integral(&|y: f64| y.exp(), 0.0, 1.0, &[], PanelSpec::default()).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn interior_power_singularity() {
        // ∫_{-1}^{1} |y − 0.3|^λ dy
        for lam in [-0.5, -0.9, -0.975, -0.99] {
            let v = weighted_integral(&|_| 1.0, -1.0, 1.0, &[SpecialPoint::new(0.3, lam)], PanelSpec::default())
                .unwrap();
            let exact = (1.3f64.powf(lam + 1.0) + 0.7f64.powf(lam + 1.0)) / (lam + 1.0);
            assert!((v - exact).abs() / exact < 1e-12, "λ = {lam}: {v} vs {exact}");
        }
    }

    #[test]
    fn endpoint_weights_and_smooth_factor() {
        // ∫_{-1}^{1} cos(y) (1 − y)^{-1/2} dy against a fine substitution
        let v = weighted_integral(
            &|y: f64| y.cos(),
            -1.0,
            1.0,
            &[SpecialPoint::new(1.0, -0.5)],
            PanelSpec::default(),
        )
        .unwrap();
        // y = 1 − s², dy = −2s ds
        let rule = gauss_legendre(40);
        let exact = rule.integrate(0.0, 2f64.sqrt(), |s| 2.0 * (1.0 - s * s).cos());
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn kink_is_resolved() {
        let v = weighted_integral(&|y: f64| (y - 0.1).abs(), -1.0, 1.0, &[SpecialPoint::kink(0.1)], PanelSpec::default())
            .unwrap();
        assert!((v - (1.1f64.powi(2) + 0.9f64.powi(2)) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_integrable_is_rejected() {
        let r = weighted_integral(&|_| 1.0, -1.0, 1.0, &[SpecialPoint::new(0.0, -1.0)], PanelSpec::default());
        assert!(matches!(r, Err(Error::NonIntegrable(_))));
    }
}
