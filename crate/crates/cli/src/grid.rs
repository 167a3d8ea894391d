//! Evaluation point sets and the sampled-field file format.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spherical_slices::{make_point, ScalarField, SpherePoint};

use crate::error::CliError;

/// `IxJ`.
pub fn parse_dims(s: &str) -> Result<(usize, usize), CliError> {
    let (i, j) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::Config(format!("grid dimensions '{s}' are not of the form IxJ")))?;
    let parse = |v: &str| {
        v.trim().parse::<usize>().map_err(|_| CliError::Config(format!("bad grid dimension '{v}' in '{s}'")))
    };
    Ok((parse(i)?, parse(j)?))
}

/// Directions on `S^{n−1}`: `J` uniform angles for `n = 2`, a spherical
/// Fibonacci set of `J` points for `n = 3`.
fn directions(n: usize, j: usize) -> Vec<Vec<f64>> {
    match n {
        2 => (0..j).map(|k| {
            let phi = 2.0 * PI * k as f64 / j as f64;
            vec![phi.cos(), phi.sin()]
        })
        .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..j)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / j as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
    }
}

/// `I` cell-centred heights in `(lo, hi)` times `J` directions, row-major in height.
pub fn latlon(n: usize, dims: (usize, usize), lo: f64, hi: f64) -> Result<Vec<SpherePoint>, CliError> {
    let (i, j) = dims;
    let dirs = directions(n, j);
    let mut out = Vec::with_capacity(i * j);
    for k in 0..i {
        let u = lo + (hi - lo) * (k as f64 + 0.5) / i as f64;
        for d in &dirs {
            out.push(make_point(d, u).map_err(|e| CliError::Numerical(e.to_string()))?);
        }
    }
    Ok(out)
}

/// `K` seeded uniform points with height in `[lo, hi)`; the upper bound is
/// reached by reflecting through the equator or by rejection.
pub fn random(n: usize, k: usize, seed: u64, lo: f64, hi: f64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let v: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
        let Ok(mut p) = SpherePoint::normalized(&v) else { continue };
        if lo >= 0.0 && p.last() < 0.0 {
            p = p.neg();
        }
        if p.last() >= lo && p.last() < hi {
            out.push(p);
        }
    }
    out
}

/// A field on `S^2` sampled on a latitude-longitude grid, read from text:
/// a header `n=2 kind=latlon dims=IxJ a=<a>` followed by `I·J` values, one
/// per line, row `i` at height `−1 + 2(i+½)/I`, column `j` at angle `2πj/J`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub n: usize,
    pub dims: (usize, usize),
    pub a: f64,
    pub values: Vec<f64>,
}

impl GridFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| CliError::Config("empty grid file".into()))?;
        let (mut n, mut kind, mut dims, mut a) = (None, None, None, None);
        for tok in header.split_whitespace() {
            let (k, v) =
                tok.split_once('=').ok_or_else(|| CliError::Config(format!("bad header token '{tok}'")))?;
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|_| CliError::Config(format!("bad n '{v}'")))?),
                "kind" => kind = Some(v.to_string()),
                "dims" => dims = Some(parse_dims(v)?),
                "a" => a = Some(v.parse::<f64>().map_err(|_| CliError::Config(format!("bad a '{v}'")))?),
                _ => return Err(CliError::Config(format!("unknown header key '{k}'"))),
            }
        }
        let n = n.ok_or_else(|| CliError::Config("grid header lacks n".into()))?;
        let dims = dims.ok_or_else(|| CliError::Config("grid header lacks dims".into()))?;
        let a = a.ok_or_else(|| CliError::Config("grid header lacks a".into()))?;
        if kind.as_deref() != Some("latlon") {
            return Err(CliError::Config("only kind=latlon grids are supported".into()));
        }
        if n != 2 {
            return Err(CliError::Config("sampled grids are supported on S^2 only".into()));
        }
        if !(a > -1.0 && a <= 1.0) {
            return Err(CliError::Config(format!("grid a = {a} outside (-1, 1]")));
        }
        if dims.0 < 2 || dims.1 < 2 {
            return Err(CliError::Config("grid needs at least 2x2 samples".into()));
        }
        let values = lines
            .map(|l| l.parse::<f64>().map_err(|_| CliError::Config(format!("bad grid value '{l}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != dims.0 * dims.1 {
            return Err(CliError::Config(format!(
                "grid has {} values, dims {}x{} need {}",
                values.len(),
                dims.0,
                dims.1,
                dims.0 * dims.1
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("grid values must be finite".into()));
        }
        Ok(Self { n, dims, a, values })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read grid file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Bilinear interpolation in `(u, φ)`, periodic in `φ` and clamped in `u`.
    pub fn eval(&self, p: &[f64]) -> f64 {
        let (ni, nj) = self.dims;
        let u = p[2].clamp(-1.0, 1.0);
        let x = ((u + 1.0) / 2.0 * ni as f64 - 0.5).clamp(0.0, (ni - 1) as f64);
        let i0 = (x.floor() as usize).min(ni - 2);
        let fu = x - i0 as f64;
        let phi = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
        let y = phi / (2.0 * PI) * nj as f64;
        let j0 = (y.floor() as usize) % nj;
        let j1 = (j0 + 1) % nj;
        let fv = y - y.floor();
        let v = |i: usize, j: usize| self.values[i * nj + j];
        (1.0 - fu) * ((1.0 - fv) * v(i0, j0) + fv * v(i0, j1)) + fu * ((1.0 - fv) * v(i0 + 1, j0) + fv * v(i0 + 1, j1))
    }

    /// The interpolant as a field; with `a < 1` it is a field on the cap `{η_3 < a}`.
    pub fn to_field(&self) -> ScalarField {
        let g = self.clone();
        if self.a < 1.0 {
            ScalarField::on_cap(2, self.a, move |p: &[f64]| g.eval(p))
        } else {
            ScalarField::on_sphere(2, move |p: &[f64]| g.eval(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("8x16").unwrap(), (8, 16));
        assert!(parse_dims("8-16").is_err());
        assert!(parse_dims("ax3").is_err());
    }

    #[test]
    fn grid_round_trip_on_linear_data() {
        let (ni, nj) = (40, 64);
        let mut text = format!("n=2 kind=latlon dims={ni}x{nj} a=1\n");
        for i in 0..ni {
            let u = -1.0 + 2.0 * (i as f64 + 0.5) / ni as f64;
            for _ in 0..nj {
                text.push_str(&format!("{}\n", 3.0 * u + 1.0));
            }
        }
        let g = GridFile::parse(&text).unwrap();
        let p = make_point(&[0.6, 0.8], 0.3).unwrap();
        assert!((g.eval(p.coords()) - 1.9).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_bad_files() {
        assert!(GridFile::parse("").is_err());
        assert!(GridFile::parse("n=2 kind=latlon dims=2x2 a=0\n1\n2\n3\n").is_err());
        assert!(GridFile::parse("n=3 kind=latlon dims=2x2 a=0\n1\n2\n3\n4\n").is_err());
        assert!(GridFile::parse("n=2 kind=healpix dims=2x2 a=0\n1\n2\n3\n4\n").is_err());
        assert!(GridFile::parse("n=2 kind=latlon dims=2x2 a=0\n1\n2\nNaN\n4\n").is_err());
        assert!(GridFile::parse("n=2 kind=latlon dims=2x2 a=0\n1\n2\n3\n4\n").is_ok());
    }

    #[test]
    fn random_points_respect_bounds() {
        let pts = random(3, 50, 7, 0.0, 0.9);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| p.last() >= 0.0 && p.last() < 0.9));
        assert_eq!(random(2, 5, 1, -1.0, 1.0), random(2, 5, 1, -1.0, 1.0));
    }
}
