use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::{FiniteAboveNegOneF64, GaussChebyshevSecondKind, GaussJacobi, GaussLegendre};
use parking_lot::Mutex;

use crate::error::{range, Result};

/// Nodes and weights of a rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    /// Applies the rule on `[lo, hi]` by the affine map.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = 0.5 * (hi - lo);
        let m = 0.5 * (hi + lo);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(m + h * x);
        }
        s * h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

type RuleKey = (u8, usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<Rule1d>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule1d>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: RuleKey, build: impl FnOnce() -> Rule1d) -> Arc<Rule1d> {
    if let Some(r) = cache().lock().get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build());
    cache().lock().entry(key).or_insert(rule).clone()
}

fn nz(m: usize) -> NonZeroUsize {
    NonZeroUsize::new(m.max(1)).expect("nonzero")
}

/// Gauss–Legendre rule with `m` nodes.
pub fn gauss_legendre(m: usize) -> Arc<Rule1d> {
    cached((0, m, 0, 0), || {
        let q = GaussLegendre::new(nz(m));
        let (nodes, weights) = q.iter().map(|(x, w)| (*x, *w)).unzip();
        Rule1d { nodes, weights }
    })
}

/// Gauss–Jacobi rule for the weight `(1−x)^alpha (1+x)^beta`.
pub fn gauss_jacobi(m: usize, alpha: f64, beta: f64) -> Result<Arc<Rule1d>> {
    if alpha == 0.0 && beta == 0.0 {
        return Ok(gauss_legendre(m));
    }
    let (Some(al), Some(be)) = (FiniteAboveNegOneF64::new(alpha), FiniteAboveNegOneF64::new(beta)) else {
        return range(format!("Jacobi exponents ({alpha}, {beta}) must exceed -1"));
    };
    Ok(cached((1, m, alpha.to_bits(), beta.to_bits()), || {
        let q = GaussJacobi::new(nz(m), al, be);
        let (nodes, weights) = q.iter().map(|(x, w)| (*x, *w)).unzip();
        Rule1d { nodes, weights }
    }))
}

/// Gauss rule for the weight `(1−x²)^{1/2}`.
pub fn gauss_chebyshev_u(m: usize) -> Arc<Rule1d> {
    cached((2, m, 0, 0), || {
        let q = GaussChebyshevSecondKind::new(nz(m));
        let (nodes, weights) = q.iter().map(|(x, w)| (*x, *w)).unzip();
        Rule1d { nodes, weights }
    })
}

/// Latitude rule for `∫_{−1}^{1} g(t)(1−t²)^{(m−2)/2} dt`, exact for
/// polynomial `g` of degree `< 2·lat`.
fn latitude_rule(m: usize, lat: usize) -> (Vec<f64>, Vec<f64>) {
    let extra = |t: f64, p: i32| (1.0 - t * t).powi(p);
    if m % 2 == 0 {
        let base = gauss_legendre(lat + (m - 2) / 2);
        let p = ((m - 2) / 2) as i32;
        let w = base.nodes.iter().zip(&base.weights).map(|(t, w)| w * extra(*t, p)).collect();
        (base.nodes.clone(), w)
    } else {
        let base = gauss_chebyshev_u(lat + (m - 3) / 2);
        let p = ((m - 3) / 2) as i32;
        let w = base.nodes.iter().zip(&base.weights).map(|(t, w)| w * extra(*t, p)).collect();
        (base.nodes.clone(), w)
    }
}

/// Product rule on `S^m ⊂ R^{m+1}`: latitude rule times a rule on `S^{m−1}`,
/// bottoming out at uniform angles on `S^1` and the two points of `S^0`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    m: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(m: usize, lat: usize, lon: usize) -> Self {
        match m {
            0 => Self { m, points: vec![1.0, -1.0], weights: vec![1.0, 1.0] },
            1 => {
                let mut points = Vec::with_capacity(2 * lon);
                for k in 0..lon {
                    let phi = 2.0 * PI * k as f64 / lon as f64;
                    points.push(phi.cos());
                    points.push(phi.sin());
                }
                Self { m, points, weights: vec![2.0 * PI / lon as f64; lon] }
            }
            _ => {
                let sub = SphereRule::new(m - 1, lat, lon);
                let (ts, tw) = latitude_rule(m, lat);
                let mut points = Vec::with_capacity(ts.len() * sub.len() * (m + 1));
                let mut weights = Vec::with_capacity(ts.len() * sub.len());
                for (t, w) in ts.iter().zip(&tw) {
                    let r = (1.0 - t * t).sqrt();
                    for (p, pw) in sub.iter() {
                        points.extend(p.iter().map(|c| r * c));
                        points.push(*t);
                        weights.push(w * pw);
                    }
                }
                Self { m, points, weights }
            }
        }
    }

    /// Dimension of the sphere the rule integrates over.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks_exact(self.m + 1).zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Resolution settings for every quadrature in the crate, tied to one
/// sphere dimension `n`.
///
/// `l` is the base resolution; the other counts default to multiples of it
/// and may be overridden field by field.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    n: usize,
    l: usize,
    /// Latitude nodes of the product rules.
    pub lat: usize,
    /// Points on each `S^1` factor.
    pub lon: usize,
    /// Polar-angle nodes on truncated subspheres.
    pub polar: usize,
    /// Gauss–Legendre order per graded panel.
    pub panel_order: usize,
    /// Gauss–Jacobi order on the innermost panel next to a singular point.
    pub inner_order: usize,
    /// Number of halvings in a graded panel sequence.
    pub levels: usize,
    /// Nodes for line and radial integrals in `R^n`.
    pub line: usize,
    /// Nodes for one-dimensional Abel-type integrals.
    pub profile: usize,
    /// Chebyshev nodes for the radial profile in Funk inversion.
    pub abel_nodes: usize,
    /// Gauss–Legendre nodes for the inner integral in Funk inversion.
    pub abel_quad: usize,
    /// Projection angles for filtered backprojection.
    pub fbp_angles: usize,
    /// Samples per projection for filtered backprojection.
    pub fbp_samples: usize,
    sphere: Arc<SphereRule>,
    sub: Arc<SphereRule>,
    subsub: Arc<SphereRule>,
}

impl QuadratureRule {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if n < 2 {
            return range(format!("sphere dimension n = {n} must be at least 2"));
        }
        if l < 4 {
            return range(format!("base resolution L = {l} must be at least 4"));
        }
        let lat = (l / 2).max(4);
        let lon = l;
        Ok(Self {
            n,
            l,
            lat,
            lon,
            polar: l,
            panel_order: 16,
            inner_order: 8,
            levels: 12,
            line: 4 * l,
            profile: 8 * l,
            abel_nodes: 33,
            abel_quad: 48,
            fbp_angles: 256,
            fbp_samples: 512,
            sphere: Arc::new(SphereRule::new(n, lat, lon)),
            sub: Arc::new(SphereRule::new(n - 1, lat, lon)),
            subsub: Arc::new(SphereRule::new(n - 2, lat, lon)),
        })
    }

    /// Rebuilds the product rules with new latitude/longitude counts.
    pub fn with_resolution(mut self, lat: usize, lon: usize) -> Self {
        self.lat = lat.max(1);
        self.lon = lon.max(1);
        self.sphere = Arc::new(SphereRule::new(self.n, self.lat, self.lon));
        self.sub = Arc::new(SphereRule::new(self.n - 1, self.lat, self.lon));
        self.subsub = Arc::new(SphereRule::new(self.n - 2, self.lat, self.lon));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> usize {
        self.l
    }

    /// Rule on `S^n`.
    pub fn sphere(&self) -> &SphereRule {
        &self.sphere
    }

    /// Rule on `S^{n−1}`.
    pub fn subsphere(&self) -> &SphereRule {
        &self.sub
    }

    /// Rule on `S^{n−2}`.
    pub fn subsubsphere(&self) -> &SphereRule {
        &self.subsub
    }

    pub(crate) fn panels(&self) -> PanelSpec {
        PanelSpec { order: self.panel_order, inner_order: self.inner_order, levels: self.levels }
    }
}

/// Graded-panel settings.
#[derive(Debug, Clone, Copy)]
pub struct PanelSpec {
    pub order: usize,
    pub inner_order: usize,
    pub levels: usize,
}

impl Default for PanelSpec {
    fn default() -> Self {
        Self { order: 16, inner_order: 8, levels: 12 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_core::constants::sigma;

    #[test]
    fn sphere_rules_reproduce_area() {
        for m in 0..=4 {
            let r = SphereRule::new(m, 8, 16);
            let rel = (r.total_weight() - sigma(m)).abs() / sigma(m);
            assert!(rel < 1e-13, "m = {m}: rel {rel}");
        }
    }

    #[test]
    fn sphere_rule_points_are_unit() {
        let r = SphereRule::new(3, 6, 12);
        for (p, w) in r.iter() {
            assert!(w > 0.0);
            let s: f64 = p.iter().map(|c| c * c).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_weight_moment() {
        let q = gauss_jacobi(8, 0.0, -0.9).unwrap();
        let s: f64 = q.weights.iter().sum();
        let exact = 2f64.powf(0.1) / 0.1;
        assert!((s - exact).abs() / exact < 1e-13);
        assert!(gauss_jacobi(4, 0.0, -1.0).is_err());
    }

    #[test]
    fn rule_validation() {
        assert!(QuadratureRule::new(1, 16).is_err());
        assert!(QuadratureRule::new(2, 2).is_err());
    }
}
