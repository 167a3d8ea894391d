//! `forward` and `reconstruct`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use spherical_slices::catalog;
use spherical_slices::funk_bridge::reconstruct_Fa_grid;
use spherical_slices::radon_bridge::reconstruct_Sa_grid;
use spherical_slices::slice_transforms::{slice_F, slice_S};
use spherical_slices::{QuadratureRule, ScalarField, SpherePoint};

use crate::error::CliError;
use crate::grid::{self, GridFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Transform {
    #[value(name = "F")]
    #[serde(rename = "F")]
    F,
    #[value(name = "S")]
    #[serde(rename = "S")]
    S,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub n: usize,
    pub a: f64,
    pub transform: Transform,
    pub field: String,
    pub resolution: usize,
    pub points: PointSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PointSpec {
    Grid { dims: String },
    Random { count: usize, seed: u64 },
    Explicit { points: Vec<Vec<f64>> },
}

#[derive(Debug, Clone)]
pub enum FieldSource {
    Catalog(String),
    File(PathBuf),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.n == 2 || self.n == 3) {
            return Err(CliError::Config(format!("n = {} unsupported; use 2 or 3", self.n)));
        }
        if !(self.a > -1.0 && self.a <= 1.0) {
            return Err(CliError::Config(format!("a = {} outside (-1, 1]", self.a)));
        }
        if self.resolution < 4 {
            return Err(CliError::Config("resolution must be at least 4".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(CliError::Config("tolerance must be positive".into()));
            }
        }
        Ok(())
    }

    fn points(&self, lo: f64, hi: f64) -> Result<Vec<SpherePoint>, CliError> {
        match &self.points {
            PointSpec::Grid { dims } => grid::latlon(self.n, grid::parse_dims(dims)?, lo, hi),
            PointSpec::Random { count, seed } => Ok(grid::random(self.n, *count, *seed, lo, hi)),
            PointSpec::Explicit { points } => points
                .iter()
                .map(|v| {
                    if v.len() != self.n + 1 {
                        return Err(CliError::Config(format!("point {v:?} does not lie in R^{}", self.n + 1)));
                    }
                    Ok(SpherePoint::normalized(v)?)
                })
                .collect(),
        }
    }

    fn rule(&self) -> Result<QuadratureRule, CliError> {
        Ok(QuadratureRule::new(self.n, self.resolution)?)
    }
}

fn catalog_field(name: &str, n: usize, a: f64) -> Result<ScalarField, CliError> {
    if catalog::EUCLIDEAN_FIELDS.contains(&name) {
        return Err(CliError::Config(format!("field '{name}' lives on R^n; slice transforms need a field on S^n")));
    }
    if !catalog::SPHERE_FIELDS.contains(&name) {
        return Err(CliError::Config(format!(
            "unknown field '{name}'; known fields: {}",
            catalog::SPHERE_FIELDS.join(", ")
        )));
    }
    Ok(catalog::sphere_field(name, n, a)?)
}

fn resolve(cfg: &RunConfig, source: &FieldSource) -> Result<ScalarField, CliError> {
    match source {
        FieldSource::Catalog(name) => catalog_field(name, cfg.n, cfg.a),
        FieldSource::File(path) => {
            let g = GridFile::read(path)?;
            if g.n != cfg.n {
                return Err(CliError::Config(format!("grid file is on S^{}, run asks for n = {}", g.n, cfg.n)));
            }
            Ok(g.to_field())
        }
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn csv(n: usize, extra: &[&str], rows: &[(SpherePoint, Vec<f64>)]) -> String {
    let mut s = String::new();
    let cols: Vec<String> = (1..=n + 1).map(|k| format!("x{k}")).chain(extra.iter().map(|e| e.to_string())).collect();
    s.push_str(&cols.join(","));
    s.push('\n');
    for (p, vals) in rows {
        let items: Vec<String> = p.coords().iter().chain(vals).map(|v| num(*v)).collect();
        let _ = writeln!(s, "{}", items.join(","));
    }
    s
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn evaluate(
    f: &ScalarField,
    transform: Transform,
    a: f64,
    rule: &QuadratureRule,
    xi: &SpherePoint,
) -> spherical_slices::Result<f64> {
    match transform {
        Transform::F => slice_F(f, xi, a, rule),
        Transform::S => slice_S(f, xi, a, rule),
    }
}

/// CSV of `(ξ, T f(ξ))` with `T` the selected transform.
pub fn forward(cfg: &RunConfig, source: &FieldSource) -> Result<(), CliError> {
    cfg.validate()?;
    let f = resolve(cfg, source)?;
    let rule = cfg.rule()?;
    let lo = if cfg.transform == Transform::S { 0.0 } else { -1.0 };
    let pts = cfg.points(lo, 1.0)?;
    log::info!("forward {:?} on {} points", cfg.transform, pts.len());
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|xi| evaluate(&f, cfg.transform, cfg.a, &rule, xi))
        .collect::<spherical_slices::Result<_>>()?;
    let rows: Vec<(SpherePoint, Vec<f64>)> = pts.into_iter().zip(vals).map(|(p, v)| (p, vec![v])).collect();
    emit(&cfg.output, &csv(cfg.n, &["value"], &rows))
}

#[derive(Debug, Serialize)]
pub struct Metrics {
    pub rel_l2: f64,
    pub max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub metrics: Metrics,
    pub pass: bool,
}

/// Reconstructs a catalog field from its computed transform and reports the
/// error against the field itself. Prints the summary and returns whether it passed.
pub fn reconstruct(cfg: &RunConfig, name: &str, omit_timing: bool) -> Result<bool, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let f = catalog_field(name, cfg.n, cfg.a)?;
    let rule = cfg.rule()?;
    let a = cfg.a;
    let (hi, tol) = match cfg.transform {
        Transform::F => {
            if a == 1.0 {
                return Err(CliError::Config("F reconstruction is undefined at a = 1".into()));
            }
            (1.0, cfg.tolerance.unwrap_or(1e-2))
        }
        Transform::S => (a, cfg.tolerance.unwrap_or(2e-2)),
    };
    let pts = cfg.points(-1.0, hi)?;
    let (f2, rule2, tr) = (f.clone(), rule.clone(), cfg.transform);
    let data = ScalarField::on_sphere(cfg.n, move |p: &[f64]| match SpherePoint::new(p) {
        Ok(xi) => evaluate(&f2, tr, a, &rule2, &xi).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    });
    log::info!("reconstruct {:?} on {} points", cfg.transform, pts.len());
    let got = match cfg.transform {
        Transform::F => reconstruct_Fa_grid(&data, &pts, a, &rule)?,
        Transform::S => {
            let h = f.restrict_to_cap(a)?.cutoff_height().filter(|h| *h < a).ok_or_else(|| {
                CliError::Config(format!(
                    "field '{name}' does not vanish near the rim of the cap a = {a}; S reconstruction needs a margin-supported field such as cap_bump"
                ))
            })?;
            reconstruct_Sa_grid(&data, &pts, a, a - h, &rule)?
        }
    };
    if got.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Numerical("reconstruction produced non-finite values".into()));
    }
    let want: Vec<f64> = pts.iter().map(|p| f.eval(p.coords())).collect();
    let num2: f64 = got.iter().zip(&want).map(|(g, w)| (g - w).powi(2)).sum();
    let den2: f64 = want.iter().map(|w| w * w).sum();
    let max_abs = got.iter().zip(&want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let rel_l2 = if den2 > 0.0 { (num2 / den2).sqrt() } else { num2.sqrt() };
    if let Some(out) = &cfg.output {
        let rows: Vec<(SpherePoint, Vec<f64>)> = pts
            .iter()
            .zip(got.iter().zip(&want))
            .map(|(p, (g, w))| (p.clone(), vec![*g, *w, g - w]))
            .collect();
        fs::write(out, csv(cfg.n, &["reconstructed", "truth", "error"], &rows))?;
    }
    let pass = rel_l2 <= tol;
    let summary = Summary {
        command: "reconstruct",
        config: cfg,
        metrics: Metrics {
            rel_l2,
            max_abs,
            runtime_s: (!omit_timing).then(|| start.elapsed().as_secs_f64()),
        },
        pass,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(pass)
}
