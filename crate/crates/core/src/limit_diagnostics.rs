//! One-dimensional Riesz potentials and numerical studies of the limits
//! `α → 0` and `λ → −1` of the analytic families used in this crate.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{range, Result};
use crate::sphere_core::constants::gamma_riesz;
use crate::sphere_core::interp::extrapolate_to_zero;
use crate::sphere_core::{weighted_integral, QuadratureRule, SpecialPoint};

/// A function on `R` vanishing outside `[lo, hi]`, with optional interior
/// points where it is not smooth.
#[derive(Clone)]
pub struct CompactFn1d {
    lo: f64,
    hi: f64,
    kinks: Vec<f64>,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CompactFn1d {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("CompactFn1d").field("lo", &self.lo).field("hi", &self.hi).field("kinks", &self.kinks).finish()
    }
}

impl CompactFn1d {
    pub fn new<F>(lo: f64, hi: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return range(format!("support [{lo}, {hi}] must be a finite nonempty interval"));
        }
        Ok(Self { lo, hi, kinks: Vec::new(), f: Arc::new(f) })
    }

    pub fn with_kinks(mut self, kinks: &[f64]) -> Self {
        self.kinks = kinks.iter().copied().filter(|k| *k > self.lo && *k < self.hi).collect();
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y < self.lo || y > self.hi {
            0.0
        } else {
            (self.f)(y)
        }
    }
}

/// `(I^α g)(x) = γ_1(α)⁻¹ ∫ g(y)|x−y|^{α−1} dy`.
pub fn riesz_1d(g: &CompactFn1d, x: f64, alpha: f64, rule: &QuadratureRule) -> Result<f64> {
    let c = gamma_riesz(alpha)?;
    let mut pts: Vec<SpecialPoint> = g.kinks.iter().map(|k| SpecialPoint::kink(*k)).collect();
    pts.push(SpecialPoint::new(x, alpha - 1.0));
    let v = weighted_integral(&|y| g.eval(y), g.lo, g.hi, &pts, rule.panels())?;
    Ok(v / c)
}

/// Values of a one-parameter family on a decreasing grid of `ε`, compared
/// with the expected limit as `ε → 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitStudy {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub target: f64,
    /// `|value − target|` for each `ε`.
    pub discrepancies: Vec<f64>,
    /// Polynomial extrapolation of the values to `ε = 0`.
    pub limit: f64,
    /// `|limit − last value|`.
    pub residual: f64,
    /// `log(d_{k−1}/d_k)/log(ε_{k−1}/ε_k)` from the last two discrepancies.
    pub observed_order: Option<f64>,
    pub tolerance: f64,
    pub monotone: bool,
    pub pass: bool,
}

impl LimitStudy {
    pub fn final_discrepancy(&self) -> f64 {
        *self.discrepancies.last().unwrap_or(&f64::NAN)
    }

    pub fn limit_error(&self) -> f64 {
        (self.limit - self.target).abs()
    }
}

/// Evaluates `family` on `eps_grid` (in parallel) and certifies the limit:
/// the study passes when the discrepancies never increase along the grid and
/// the extrapolated limit is within `tol·max(1, |target|)` of `target`.
pub fn limit_certify<F>(family: F, target: f64, eps_grid: &[f64], tol: f64) -> Result<LimitStudy>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if eps_grid.len() < 2 {
        return range("a limit study needs at least two values of ε");
    }
    if eps_grid.windows(2).any(|w| !(w[1] < w[0])) || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return range("ε values must be positive and strictly decreasing");
    }
    let values: Vec<f64> = eps_grid.par_iter().map(|&e| family(e)).collect::<Result<_>>()?;
    let discrepancies: Vec<f64> = values.iter().map(|v| (v - target).abs()).collect();
    let scale = target.abs().max(1.0);
    let slack = 1e-13 * scale;
    let monotone = discrepancies.windows(2).all(|w| w[1] <= w[0] + slack);
    let limit = extrapolate_to_zero(eps_grid, &values);
    let last = *values.last().expect("nonempty");
    let m = discrepancies.len();
    let (d0, d1) = (discrepancies[m - 2], discrepancies[m - 1]);
    let observed_order = if d0 > slack && d1 > slack {
        Some((d0 / d1).ln() / (eps_grid[m - 2] / eps_grid[m - 1]).ln())
    } else {
        None
    };
    let pass = monotone && (limit - target).abs() <= tol * scale && limit.is_finite();
    Ok(LimitStudy {
        eps: eps_grid.to_vec(),
        values,
        target,
        discrepancies,
        limit,
        residual: (limit - last).abs(),
        observed_order,
        tolerance: tol,
        monotone,
        pass,
    })
}
