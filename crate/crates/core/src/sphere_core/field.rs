use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

/// Point evaluator shared between threads.
pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Where a field lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// All of `S^n`.
    Sphere,
    /// The cap `{η_{n+1} < a}`.
    Cap { a: f64 },
    /// `R^n`.
    Euclidean,
}

/// Declared support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Unrestricted,
    /// Euclidean field vanishing for `|x| > radius`.
    Ball { radius: f64 },
    /// Cap field vanishing for `η_{n+1} ≥ a − delta`.
    CapMargin { delta: f64 },
    /// Sphere field vanishing for `η_{n+1} ≥ height`, e.g. a zero extension.
    Below { height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    PiecewiseSmooth,
}

/// A real-valued field on `S^n`, on a cap of `S^n`, or on `R^n`.
///
/// [`ScalarField::eval`] returns exactly zero outside the declared support,
/// so a cap field evaluated anywhere on the sphere is its zero extension.
#[derive(Clone)]
pub struct ScalarField {
    n: usize,
    domain: Domain,
    support: Support,
    smoothness: Smoothness,
    f: EvalFn,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("ScalarField")
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl ScalarField {
    pub fn on_sphere<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(n, Domain::Sphere, Arc::new(f))
    }

    pub fn on_cap<F>(n: usize, a: f64, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(n, Domain::Cap { a }, Arc::new(f))
    }

    pub fn euclidean<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(n, Domain::Euclidean, Arc::new(f))
    }

    pub fn from_arc(n: usize, domain: Domain, f: EvalFn) -> Self {
        Self { n, domain, support: Support::Unrestricted, smoothness: Smoothness::Smooth, f }
    }

    /// Attaches support metadata; the kind must match the domain.
    pub fn with_support(mut self, support: Support) -> Result<Self> {
        match (self.domain, support) {
            (_, Support::Unrestricted) => {}
            (Domain::Euclidean, Support::Ball { radius }) if radius >= 0.0 => {}
            (Domain::Cap { .. }, Support::CapMargin { delta }) if delta >= 0.0 => {}
            (Domain::Sphere, Support::Below { .. }) => {}
            _ => return domain(format!("support {support:?} does not fit domain {:?}", self.domain)),
        }
        self.support = support;
        Ok(self)
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    /// Sphere dimension for spherical domains, space dimension for `R^n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Number of coordinates a point must carry.
    pub fn point_len(&self) -> usize {
        match self.domain {
            Domain::Euclidean => self.n,
            _ => self.n + 1,
        }
    }

    /// Height above which a spherical field vanishes identically, if any.
    pub fn cutoff_height(&self) -> Option<f64> {
        match (self.domain, self.support) {
            (Domain::Cap { a }, Support::CapMargin { delta }) => Some(a - delta),
            (Domain::Cap { a }, _) => Some(a),
            (Domain::Sphere, Support::Below { height }) => Some(height),
            _ => None,
        }
    }

    pub fn support_radius(&self) -> Option<f64> {
        match self.support {
            Support::Ball { radius } => Some(radius),
            _ => None,
        }
    }

    pub fn in_support(&self, p: &[f64]) -> bool {
        match (self.domain, self.support) {
            (Domain::Euclidean, Support::Ball { radius }) => {
                p.iter().map(|c| c * c).sum::<f64>() <= radius * radius
            }
            (Domain::Cap { .. }, _) | (Domain::Sphere, Support::Below { .. }) => {
                p[p.len() - 1] < self.cutoff_height().unwrap_or(f64::INFINITY)
            }
            _ => true,
        }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        if self.in_support(p) {
            (self.f)(p)
        } else {
            0.0
        }
    }

    /// Evaluator including the support indicator, for wrapping in other fields.
    pub fn evaluator(&self) -> EvalFn {
        let me = self.clone();
        Arc::new(move |p: &[f64]| me.eval(p))
    }

    /// Restriction of a spherical field to the cap `{η_{n+1} < a}`.
    pub fn restrict_to_cap(&self, a: f64) -> Result<ScalarField> {
        match self.domain {
            Domain::Sphere => Ok(ScalarField {
                n: self.n,
                domain: Domain::Cap { a },
                support: match self.support {
                    Support::Below { height } if height < a => Support::CapMargin { delta: a - height },
                    _ => Support::Unrestricted,
                },
                smoothness: Smoothness::PiecewiseSmooth,
                f: self.f.clone(),
            }),
            Domain::Cap { a: b } if (a - b).abs() <= 1e-15 => Ok(self.clone()),
            Domain::Cap { a: b } if b <= a => Ok(self.clone()),
            _ => domain(format!("cannot restrict a field on {:?} to the cap a = {a}", self.domain)),
        }
    }

    /// The zero extension of a cap field, viewed as a field on the whole sphere.
    pub fn zero_extension(&self) -> Result<ScalarField> {
        match self.domain {
            Domain::Sphere => Ok(self.clone()),
            Domain::Cap { .. } => {
                let inner = self.clone();
                Ok(ScalarField {
                    n: self.n,
                    domain: Domain::Sphere,
                    support: Support::Below { height: self.cutoff_height().unwrap_or(1.0) },
                    smoothness: if matches!(self.support, Support::CapMargin { delta } if delta > 0.0) {
                        self.smoothness
                    } else {
                        Smoothness::PiecewiseSmooth
                    },
                    f: Arc::new(move |p: &[f64]| inner.eval(p)),
                })
            }
            Domain::Euclidean => domain("a Euclidean field has no spherical zero extension"),
        }
    }

    pub(crate) fn require_spherical(&self, what: &str) -> Result<()> {
        if self.domain == Domain::Euclidean {
            return domain(format!("{what} needs a field on the sphere"));
        }
        Ok(())
    }

    pub(crate) fn require_euclidean(&self, what: &str) -> Result<()> {
        if self.domain != Domain::Euclidean {
            return domain(format!("{what} needs a field on R^n"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_margin_zeroes_above_cutoff() {
        let f = ScalarField::on_cap(2, 0.5, |_| 3.0)
            .with_support(Support::CapMargin { delta: 0.2 })
            .unwrap();
        assert_eq!(f.eval(&[0.0, 0.0, -1.0]), 3.0);
        assert_eq!(f.eval(&[0.0, (1.0f64 - 0.09).sqrt(), 0.3]), 0.0);
        assert_eq!(f.cutoff_height(), Some(0.3));
    }

    #[test]
    fn ball_support_zeroes_outside() {
        let g = ScalarField::euclidean(2, |_| 1.0).with_support(Support::Ball { radius: 1.0 }).unwrap();
        assert_eq!(g.eval(&[0.5, 0.5]), 1.0);
        assert_eq!(g.eval(&[1.0, 0.5]), 0.0);
    }

    #[test]
    fn support_must_match_domain() {
        assert!(ScalarField::on_sphere(2, |_| 1.0).with_support(Support::Ball { radius: 1.0 }).is_err());
        assert!(ScalarField::euclidean(2, |_| 1.0).with_support(Support::CapMargin { delta: 0.1 }).is_err());
    }

    #[test]
    fn zero_extension_of_cap_field() {
        let f = ScalarField::on_cap(2, 0.0, |_| 1.0);
        let e = f.zero_extension().unwrap();
        assert_eq!(e.domain(), Domain::Sphere);
        assert_eq!(e.eval(&[0.0, 0.0, 1.0]), 0.0);
        assert_eq!(e.eval(&[0.0, 0.0, -1.0]), 1.0);
    }
}
