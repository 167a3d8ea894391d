use std::f64::consts::PI;

/// Barycentric interpolant through Chebyshev–Lobatto nodes on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct ChebyshevInterpolant {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ChebyshevInterpolant {
    /// The `m` Lobatto nodes `(lo+hi)/2 − (hi−lo)/2·cos(kπ/(m−1))`, ascending.
    pub fn nodes(m: usize, lo: f64, hi: f64) -> Vec<f64> {
        assert!(m >= 2, "need at least two Lobatto nodes");
        (0..m)
            .map(|k| {
                let c = (PI * k as f64 / (m - 1) as f64).cos();
                0.5 * (lo + hi) - 0.5 * (hi - lo) * c
            })
            .collect()
    }

    /// Samples `f` at the Lobatto nodes.
    pub fn sample(m: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Self {
        let nodes = Self::nodes(m, lo, hi);
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self { lo, hi, nodes, values }
    }

    /// Builds from values already taken at [`ChebyshevInterpolant::nodes`].
    pub fn from_values(lo: f64, hi: f64, values: Vec<f64>) -> Self {
        let nodes = Self::nodes(values.len(), lo, hi);
        Self { lo, hi, nodes, values }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.nodes.len();
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..m {
            let d = x - self.nodes[k];
            if d == 0.0 {
                return self.values[k];
            }
            let mut w = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k == m - 1 {
                w *= 0.5;
            }
            let c = w / d;
            num += c * self.values[k];
            den += c;
        }
        num / den
    }
}

/// Value at zero of the polynomial through `(xs[k], ys[k])` (Neville).
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len();
    let mut p = ys.to_vec();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_smooth_function() {
        let c = ChebyshevInterpolant::sample(33, 0.0, 1.0, |x| (3.0 * x).sin() / (1.0 + x * x));
        for k in 0..50 {
            let x = k as f64 / 49.0;
            assert!((c.eval(x) - (3.0 * x).sin() / (1.0 + x * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn neville_is_exact_on_polynomials() {
        let xs = [0.3, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - x + 4.0 * x * x).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 2.0).abs() < 1e-13);
    }
}
