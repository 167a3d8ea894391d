use smallvec::SmallVec;

use crate::error::{domain, Result};

/// Coordinate storage; inline up to `R^8`.
pub type Coords = SmallVec<[f64; 8]>;

const UNIT_TOL: f64 = 1e-10;

/// A unit vector in `R^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Coords,
}

impl SpherePoint {
    /// Accepts coordinates whose norm is within `1e-10` of one and
    /// renormalizes them.
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.len() < 3 {
            return domain(format!("sphere points need n >= 2, got length {}", coords.len()));
        }
        let nrm = norm(coords);
        if !nrm.is_finite() || (nrm - 1.0).abs() > UNIT_TOL {
            return domain(format!("not a unit vector (norm {nrm})"));
        }
        Ok(Self { coords: coords.iter().map(|c| c / nrm).collect() })
    }

    /// Normalizes any nonzero vector onto the sphere.
    pub fn normalized(v: &[f64]) -> Result<Self> {
        if v.len() < 3 {
            return domain(format!("sphere points need n >= 2, got length {}", v.len()));
        }
        let nrm = norm(v);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        Ok(Self { coords: v.iter().map(|c| c / nrm).collect() })
    }

    pub fn north(n: usize) -> Self {
        Self::axis(n, n)
    }

    pub fn south(n: usize) -> Self {
        let mut p = Self::axis(n, n);
        p.coords[n] = -1.0;
        p
    }

    /// Coordinate vector `e_{k+1}` (zero-based `k`) on `S^n`.
    pub fn axis(n: usize, k: usize) -> Self {
        let mut c: Coords = SmallVec::from_elem(0.0, n + 1);
        c[k] = 1.0;
        Self { coords: c }
    }

    /// Sphere dimension `n`.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The last coordinate `η_{n+1}`.
    pub fn last(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Meridional coordinates `(ψ, u)` with `η = √(1−u²)ψ + u e_{n+1}`.
    /// At the poles `ψ` is arbitrary and `e_1` is returned.
    pub fn decompose(&self) -> (Coords, f64) {
        let n = self.n();
        let u = self.last();
        let head = &self.coords[..n];
        let r = norm(head);
        let psi: Coords = if r > 0.0 {
            head.iter().map(|c| c / r).collect()
        } else {
            let mut e: Coords = SmallVec::from_elem(0.0, n);
            e[0] = 1.0;
            e
        };
        (psi, u)
    }
}

/// Builds `η(ψ, u) = √(1−u²)ψ + u e_{n+1}`.
pub fn make_point(psi: &[f64], u: f64) -> Result<SpherePoint> {
    if psi.len() < 2 {
        return domain("ψ must lie on S^{n-1} with n >= 2");
    }
    let r = norm(psi);
    if !r.is_finite() || (r - 1.0).abs() > UNIT_TOL {
        return domain(format!("ψ is not a unit vector (norm {r})"));
    }
    if !u.is_finite() || u.abs() > 1.0 {
        return domain(format!("latitude u = {u} outside [-1, 1]"));
    }
    let s = (1.0 - u * u).max(0.0).sqrt();
    let mut c: Coords = psi.iter().map(|p| s * p / r).collect();
    c.push(u);
    Ok(SpherePoint { coords: c })
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Sign that maps `ξ` to its representative with `ξ_{n+1} > 0`, or, on the
/// equator, with its first nonzero coordinate positive.
pub fn canonical_sign(xi: &[f64]) -> f64 {
    let last = xi[xi.len() - 1];
    if last > 0.0 {
        return 1.0;
    }
    if last < 0.0 {
        return -1.0;
    }
    for &c in xi {
        if c > 0.0 {
            return 1.0;
        }
        if c < 0.0 {
            return -1.0;
        }
    }
    1.0
}

/// Orthonormal basis of `v^⊥` for a unit vector `v` in `R^m`.
///
/// Gram–Schmidt over the coordinate vectors; at every step the candidate with
/// the largest residual is taken, ties going to the lowest index. The first
/// pick is therefore the coordinate vector least aligned with `v`.
pub fn orthonormal_complement(v: &[f64]) -> Vec<Coords> {
    complement_of(&[v])
}

/// Orthonormal basis of the complement of the span of orthonormal `vs`.
pub fn complement_of(vs: &[&[f64]]) -> Vec<Coords> {
    let m = vs[0].len();
    let mut frame: Vec<Coords> = vs.iter().map(|v| v.iter().copied().collect()).collect();
    let mut out = Vec::with_capacity(m - vs.len());
    let mut used = vec![false; m];
    while frame.len() < m {
        let mut best: Option<(usize, Coords, f64)> = None;
        for k in 0..m {
            if used[k] {
                continue;
            }
            let mut r: Coords = SmallVec::from_elem(0.0, m);
            r[k] = 1.0;
            for _ in 0..2 {
                for b in &frame {
                    let p = dot(&r, b);
                    for (ri, bi) in r.iter_mut().zip(b.iter()) {
                        *ri -= p * bi;
                    }
                }
            }
            let rn = norm(&r);
            if best.as_ref().map_or(true, |(_, _, bn)| rn > *bn + 1e-14) {
                best = Some((k, r, rn));
            }
        }
        let (k, mut r, rn) = best.expect("candidate available");
        used[k] = true;
        for ri in r.iter_mut() {
            *ri /= rn;
        }
        frame.push(r.clone());
        out.push(r);
    }
    out
}

/// A second, independent basis of `v^⊥` built from the Householder
/// reflection that sends `v` to `±e_m`.
pub fn orthonormal_complement_householder(v: &[f64]) -> Vec<Coords> {
    let m = v.len();
    let s = if v[m - 1] >= 0.0 { 1.0 } else { -1.0 };
    let mut w: Coords = v.iter().copied().collect();
    w[m - 1] += s;
    let ww = dot(&w, &w);
    (0..m - 1)
        .map(|k| {
            let mut e: Coords = SmallVec::from_elem(0.0, m);
            e[k] = 1.0;
            let p = 2.0 * w[k] / ww;
            for (ei, wi) in e.iter_mut().zip(w.iter()) {
                *ei -= p * wi;
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_point_examples() {
        let p = make_point(&[1.0, 0.0], 0.0).unwrap();
        assert_eq!(p.coords(), &[1.0, 0.0, 0.0]);
        let p = make_point(&[0.6, 0.8], 1.0).unwrap();
        assert_eq!(p.coords(), &[0.0, 0.0, 1.0]);
        let p = make_point(&[1.0, 0.0], 0.6).unwrap();
        assert!((p.coords()[0] - 0.8).abs() < 1e-15);
        assert_eq!(p.last(), 0.6);
    }

    #[test]
    fn make_point_rejects_bad_input() {
        assert!(make_point(&[1.0, 1.0], 0.0).is_err());
        assert!(make_point(&[1.0, 0.0], 1.5).is_err());
        assert!(SpherePoint::new(&[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn decompose_round_trip() {
        let p = SpherePoint::normalized(&[0.3, -0.5, 0.2, 0.7]).unwrap();
        let (psi, u) = p.decompose();
        let q = make_point(&psi, u).unwrap();
        for (a, b) in p.coords().iter().zip(q.coords()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_bases_are_orthonormal() {
        let v = SpherePoint::normalized(&[0.2, -0.9, 0.4]).unwrap();
        for basis in [orthonormal_complement(v.coords()), orthonormal_complement_householder(v.coords())] {
            assert_eq!(basis.len(), 2);
            for (i, b) in basis.iter().enumerate() {
                assert!(dot(b, v.coords()).abs() < 1e-14);
                assert!((norm(b) - 1.0).abs() < 1e-14);
                for c in &basis[i + 1..] {
                    assert!(dot(b, c).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn complement_first_pick_is_least_aligned_axis() {
        let v = SpherePoint::normalized(&[0.9, 0.1, 0.3]).unwrap();
        let basis = orthonormal_complement(v.coords());
        // e_2 has the smallest |v_k|, so it dominates the first vector
        assert!(basis[0][1].abs() > 0.9);
    }

    #[test]
    fn canonical_sign_conventions() {
        assert_eq!(canonical_sign(&[0.0, 1.0, -0.1]), -1.0);
        assert_eq!(canonical_sign(&[0.0, -1.0, 0.0]), -1.0);
        assert_eq!(canonical_sign(&[0.0, 1.0, 0.0]), 1.0);
    }
}
