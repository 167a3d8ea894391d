use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{range, Result};

/// Surface area `σ_m = 2π^{(m+1)/2}/Γ((m+1)/2)` of the unit sphere `S^m`.
/// `σ_0 = 2` counts the two points of `S^0`.
pub fn sigma(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (m as f64 - 1.0) * sigma(m - 2),
    }
}

/// `γ_{n,λ} = π^{1/2}Γ(−λ/2) / (Γ((n+1)/2)Γ((1+λ)/2))`.
///
/// Poles at `λ = 0, 2, 4, …` are reported as errors.
pub fn gamma_cosine(n: usize, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return range("λ must be finite");
    }
    if lambda >= 0.0 {
        let k = (lambda / 2.0).round();
        if (lambda - 2.0 * k).abs() < 1e-12 {
            return range(format!("γ_(n,λ) has a pole at λ = {lambda}"));
        }
    }
    let h = (n as f64 + 1.0) / 2.0;
    let den = gamma((1.0 + lambda) / 2.0);
    if !den.is_finite() {
        return Ok(0.0);
    }
    Ok(PI.sqrt() * gamma(-lambda / 2.0) / (gamma(h) * den))
}

/// `γ_1(α) = 2^α π^{1/2} Γ(α/2)/Γ((1−α)/2)`, the Riesz normalization on `R`.
pub fn gamma_riesz(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return range(format!("Riesz order α = {alpha} outside (0, 1)"));
    }
    Ok(2f64.powf(alpha) * PI.sqrt() * gamma(alpha / 2.0) / gamma((1.0 - alpha) / 2.0))
}

/// `c_n = π^{1/2}/Γ(n/2)`: limit of the λ-cosine transform relative to Funk.
pub fn c_const(n: usize) -> f64 {
    PI.sqrt() / gamma(n as f64 / 2.0)
}

/// `d_n = π/Γ((n+1)/2)`: limit constant of the Semyanistyi and shifted families.
pub fn d_const(n: usize) -> f64 {
    PI / gamma((n as f64 + 1.0) / 2.0)
}

/// Bundle of the normalizations for a fixed sphere dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConstants {
    pub n: usize,
}

impl NormConstants {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `σ_n`
    pub fn sigma(&self) -> f64 {
        sigma(self.n)
    }

    /// `σ_{n−1}`, the area of a great subsphere.
    pub fn sigma_sub(&self) -> f64 {
        sigma(self.n - 1)
    }

    pub fn gamma_cosine(&self, lambda: f64) -> Result<f64> {
        gamma_cosine(self.n, lambda)
    }

    pub fn c(&self) -> f64 {
        c_const(self.n)
    }

    pub fn d(&self) -> f64 {
        d_const(self.n)
    }
}
