//! Invariant suites run by `slicetool selftest`.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;
use spherical_slices::catalog;
use spherical_slices::funk_bridge::{
    collinearity_defect, factorize_Fa, measure_identity_mu, measure_identity_nu, reconstruct_Fa_grid, reflection,
    MeridionalMap,
};
use spherical_slices::limit_diagnostics::{limit_certify, riesz_1d, CompactFn1d};
use spherical_slices::radon_bridge::{
    factorize_Sa, measure_identity_cap, measure_identity_stereo, norm_identity_check, radon, radon_norm_identity,
    reconstruct_Sa_grid, semyanistyi, Hyperplane, RadonData, RadonInverter, StereoMap,
};
use spherical_slices::slice_transforms::{cosine_lambda, funk, shifted_cosine, slice_F, slice_S};
use spherical_slices::sphere_core::{c_const, d_const, sigma};
use spherical_slices::zonal_oracles::{zonal_S0, zonal_S1, zonal_pipeline};
use spherical_slices::{QuadratureRule, Result, ScalarField, SpherePoint};

use crate::grid;

pub const SUITES: [&str; 8] =
    ["geometry", "constant", "funk", "radon", "zonal", "identities", "limits", "reconstruct"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

fn check(name: &str, error: f64, tolerance: f64) -> Check {
    Check { name: name.to_string(), error, tolerance, pass: error <= tolerance }
}

fn rel(p: (f64, f64)) -> f64 {
    (p.0 - p.1).abs() / p.0.abs().max(p.1.abs()).max(f64::MIN_POSITIVE)
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn geometry() -> Result<Vec<Check>> {
    let mut stereo: f64 = 0.0;
    for a in [0.0, 0.5, 1.0] {
        let m = StereoMap::new(a)?;
        for p in grid::random(2, 300, 11, -1.0, a.min(0.99)) {
            let back = m.forward(&m.backward(p.coords()));
            stereo = stereo.max(max_abs(back.iter().zip(p.coords()).map(|(u, v)| (u - v).abs())));
        }
    }
    let (mut merid, mut invol, mut col) = (0.0f64, 0.0f64, 0.0f64);
    for a in [-0.5, 0.0, 0.5, 0.9] {
        let m = MeridionalMap::new(a)?;
        for p in grid::random(2, 300, 12, -1.0, 1.0) {
            let q = m.mu_inv(&m.mu(p.coords()));
            let r = m.nu_inv(&m.nu(p.coords()));
            merid = merid.max(max_abs(q.iter().chain(&r).zip(p.coords().iter().cycle()).map(|(u, v)| (u - v).abs())));
            let refl = reflection(&p, a)?;
            let twice = reflection(&refl.eta_star, a)?.eta_star;
            invol = invol.max(max_abs(twice.coords().iter().zip(p.coords()).map(|(u, v)| (u - v).abs())));
            col = col.max(collinearity_defect(&p, &refl.eta_star, a));
        }
    }
    Ok(vec![
        check("stereo_round_trip", stereo, 1e-10),
        check("meridional_round_trip", merid, 1e-10),
        check("reflection_involution", invol, 1e-10),
        check("collinearity", col, 1e-10),
    ])
}

fn constant() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let rule = QuadratureRule::new(n, 32)?;
        let one = ScalarField::on_sphere(n, |_| 1.0);
        for a in [0.0, 0.5, -0.5, 0.9, 1.0] {
            for xi in grid::random(n, 20, 21, -0.99, 0.99) {
                let want = sigma(n - 1) * (1.0 - a * a * xi.last().powi(2)).powf((n as f64 - 1.0) / 2.0);
                worst = worst.max((slice_F(&one, &xi, a, &rule)? - want).abs() / want);
            }
        }
    }
    Ok(vec![check("constant_field_law", worst, 1e-10)])
}

fn funk_suite() -> Result<Vec<Check>> {
    let rule = QuadratureRule::new(2, 64)?;
    let mut fact: f64 = 0.0;
    for name in catalog::SMOOTH {
        let f = catalog::sphere_field(name, 2, 0.0)?;
        for a in [0.5, -0.5, 0.9] {
            for xi in grid::random(2, 5, 31, -1.0, 1.0) {
                fact = fact.max((slice_F(&f, &xi, a, &rule)? - factorize_Fa(&f, &xi, a, &rule)?).abs());
            }
        }
    }
    let a = 0.5;
    let odd = catalog::sphere_field("sym_odd", 2, a)?;
    let even = catalog::sphere_field("sym_even", 2, a)?;
    let mut kernel: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for p in grid::random(2, 100, 32, -1.0, 1.0) {
        norm = norm.max(odd.eval(p.coords()).abs());
        let r = reflection(&p, a)?;
        sym = sym.max((even.eval(p.coords()) - r.rho_star * even.eval(r.eta_star.coords())).abs());
    }
    for xi in grid::random(2, 20, 33, -1.0, 1.0) {
        kernel = kernel.max(slice_F(&odd, &xi, a, &rule)?.abs());
    }
    Ok(vec![
        check("funk_factorization", fact, 1e-6),
        check("kernel", kernel / norm, 1e-6),
        check("symmetric_part", sym, 1e-10),
    ])
}

fn radon_suite() -> Result<Vec<Check>> {
    let rule = QuadratureRule::new(2, 64)?;
    let mut fact: f64 = 0.0;
    for a in [0.0, 0.5, 1.0] {
        let f = catalog::cap_bump(2, a)?;
        for xi in grid::random(2, 10, 41, 0.0, 0.98) {
            fact = fact.max((slice_S(&f, &xi, a, &rule)? - factorize_Sa(&f, &xi, a, &rule)?).abs());
        }
    }
    let mut gauss: f64 = 0.0;
    for n in [2, 3] {
        let r = QuadratureRule::new(n, 32)?;
        let g = catalog::euclidean_field("gaussian", n)?;
        for t in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            let mut th = vec![0.3; n];
            th[0] = -0.8;
            let v = radon(&g, &Hyperplane::new(&th, t)?, &r)?;
            gauss = gauss.max((v - PI.powf((n as f64 - 1.0) / 2.0) * (-t * t).exp()).abs());
        }
    }
    let r3 = QuadratureRule::new(3, 32)?;
    let ball = catalog::euclidean_field("unit_ball", 3)?;
    let mut unit: f64 = 0.0;
    for t in [0.0, 0.4, -0.8] {
        unit = unit.max((radon(&ball, &Hyperplane::new(&[0.5, 0.5, -0.7], t)?, &r3)? - PI * (1.0 - t * t)).abs());
    }
    let inv = RadonInverter::new(RadonData::new(3, 8.0, |_, t| PI * (-t * t).exp()), &r3)?;
    let mut odd: f64 = 0.0;
    for x in [[0.0, 0.0, 0.0], [0.5, -0.2, 0.3], [1.1, 0.4, -0.6]] {
        odd = odd.max((inv.eval(&x) - (-x.iter().map(|c| c * c).sum::<f64>()).exp()).abs());
    }
    Ok(vec![
        check("radon_factorization", fact, 1e-5),
        check("gaussian_radon", gauss, 1e-8),
        check("unit_ball_radon", unit, 1e-8),
        check("odd_inversion", odd, 1e-2),
    ])
}

fn zonal() -> Result<Vec<Check>> {
    let (mut closed, mut generic) = (0.0f64, 0.0f64);
    for n in [2, 3] {
        let rule = QuadratureRule::new(n, 64)?;
        for a in [0.0, 0.5, 1.0] {
            for (_, prof) in catalog::zonal_profiles(n, a)? {
                let field = prof.to_field()?;
                for s in [0.1, 0.5, 0.85] {
                    let pipe = zonal_pipeline(&prof, s, &rule)?;
                    let f0 = |t: f64| prof.eval(t);
                    if a == 0.0 {
                        closed = closed.max((zonal_S0(&f0, (1.0 - s * s).sqrt(), n, &rule)? - pipe).abs());
                    } else if a == 1.0 {
                        closed = closed.max((zonal_S1(&f0, 2.0 * s * s - 1.0, n, &rule)? - pipe).abs());
                    }
                    let mut c = vec![0.0; n + 1];
                    c[0] = (1.0 - s * s).sqrt();
                    c[n] = s;
                    generic = generic.max((slice_S(&field, &SpherePoint::new(&c)?, a, &rule)? - pipe).abs());
                }
            }
        }
    }
    Ok(vec![check("closed_form_vs_pipeline", closed, 1e-8), check("pipeline_vs_slice_S", generic, 1e-6)])
}

fn identities() -> Result<Vec<Check>> {
    let rule = QuadratureRule::new(2, 64)?;
    let smooth = catalog::sphere_field("exp_mix", 2, 0.0)?;
    let gauss = catalog::euclidean_field("gaussian", 2)?;
    let bump = catalog::cap_bump(2, 0.0)?;
    Ok(vec![
        check("meridional_measure_mu", rel(measure_identity_mu(&smooth, 0.6, &rule)?), 1e-6),
        check("meridional_measure_nu", rel(measure_identity_nu(&smooth, 0.6, &rule)?), 1e-6),
        check("stereo_measure_plane", rel(measure_identity_stereo(&gauss, 0.5, &rule)?), 1e-6),
        check("stereo_measure_cap", rel(measure_identity_cap(&smooth, 0.5, &rule)?), 1e-6),
        check("weighted_norm", rel(norm_identity_check(&smooth, 0.5, 1.0, 1.0, &rule)?), 1e-6),
        check("radon_norm", rel(radon_norm_identity(&gauss, &rule)?), 1e-6),
        check("hemisphere_norm", rel(norm_identity_check(&bump, 0.0, 2.0, 0.0, &rule)?), 1e-6),
    ])
}

fn limits() -> Result<Vec<Check>> {
    const EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
    let rule = QuadratureRule::new(2, 64)?;
    let f = catalog::sphere_field("exp_mix", 2, 0.0)?;
    let xi = SpherePoint::normalized(&[0.3, -0.4, 0.6])?;
    let a = 0.5;
    let studies = [
        ("cosine_to_funk", limit_certify(|e| cosine_lambda(&f, &xi, -1.0 + e, &rule), c_const(2) * funk(&f, &xi, &rule)?, &EPS, 5e-3)?),
        (
            "shifted_cosine_to_slice",
            limit_certify(
                |e| shifted_cosine(&f, &xi, -1.0 + e, a, &rule),
                d_const(2) / (1.0 - a * a * xi.last().powi(2)).sqrt() * slice_F(&f, &xi, a, &rule)?,
                &EPS,
                5e-3,
            )?,
        ),
        ("semyanistyi_to_radon", {
            let g = catalog::euclidean_field("gaussian", 2)?;
            let plane = Hyperplane::new(&[0.6, 0.8], 0.4)?;
            limit_certify(|e| semyanistyi(&g, &plane, -1.0 + e, &rule), d_const(2) * radon(&g, &plane, &rule)?, &EPS, 5e-3)?
        }),
        ("riesz_to_identity", {
            let b = CompactFn1d::new(-1.0, 1.0, |y| catalog::bump(y * y))?;
            limit_certify(|al| riesz_1d(&b, 0.2, al, &rule), b.eval(0.2), &EPS, 5e-3)?
        }),
    ];
    Ok(studies
        .into_iter()
        .map(|(name, s)| {
            let err = if s.monotone { s.limit_error() / s.target.abs().max(1.0) } else { f64::INFINITY };
            check(name, err, s.tolerance)
        })
        .collect())
}

fn rel_l2(got: &[f64], want: &[f64]) -> f64 {
    let num: f64 = got.iter().zip(want).map(|(g, w)| (g - w).powi(2)).sum();
    let den: f64 = want.iter().map(|w| w * w).sum();
    (num / den).sqrt()
}

fn reconstruct() -> Result<Vec<Check>> {
    let a = 0.5;
    let rule = QuadratureRule::new(2, 32)?;
    let f = catalog::sphere_field("sym_even", 2, a)?;
    let (f2, r2) = (f.clone(), rule.clone());
    let data = ScalarField::on_sphere(2, move |p: &[f64]| {
        SpherePoint::new(p).and_then(|xi| slice_F(&f2, &xi, a, &r2)).unwrap_or(f64::NAN)
    });
    let pts = grid::random(2, 20, 51, -1.0, 1.0);
    let got = reconstruct_Fa_grid(&data, &pts, a, &rule)?;
    let want: Vec<f64> = pts.iter().map(|p| f.eval(p.coords())).collect();
    let ef = rel_l2(&got, &want);
    let a = 1.0;
    let f = catalog::cap_bump(2, a)?;
    let h = catalog::bump_height(a);
    let (f2, r2) = (f.clone(), rule.clone());
    let data = ScalarField::on_sphere(2, move |p: &[f64]| {
        SpherePoint::new(p).and_then(|xi| slice_S(&f2, &xi, a, &r2)).unwrap_or(f64::NAN)
    });
    let pts = grid::random(2, 40, 52, -1.0, h);
    let got = reconstruct_Sa_grid(&data, &pts, a, a - h, &rule)?;
    let want: Vec<f64> = pts.iter().map(|p| f.eval(p.coords())).collect();
    let es = rel_l2(&got, &want);
    Ok(vec![check("funk_side_round_trip", ef, 1e-2), check("radon_side_round_trip", es, 2e-2)])
}

fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "geometry" => geometry(),
        "constant" => constant(),
        "funk" => funk_suite(),
        "radon" => radon_suite(),
        "zonal" => zonal(),
        "identities" => identities(),
        "limits" => limits(),
        "reconstruct" => reconstruct(),
        _ => unreachable!("suite names are validated before running"),
    }
}

/// Runs the named suites in order. `perturb` names a suite or check whose
/// measured errors are offset by one, to exercise the failure path.
pub fn run(suites: &[&'static str], perturb: Option<&str>, omit_timing: bool) -> Vec<SuiteReport> {
    suites
        .iter()
        .map(|&name| {
            let start = Instant::now();
            let mut checks = match run_suite(name) {
                Ok(c) => c,
                Err(e) => vec![Check { name: format!("error: {e}"), error: f64::INFINITY, tolerance: 0.0, pass: false }],
            };
            for c in checks.iter_mut() {
                if perturb == Some(name) || perturb == Some(c.name.as_str()) {
                    c.error += 1.0;
                    c.pass = c.error <= c.tolerance;
                }
            }
            let pass = checks.iter().all(|c| c.pass);
            log::info!("suite {name}: {}", if pass { "pass" } else { "FAIL" });
            SuiteReport { name, checks, pass, runtime_s: (!omit_timing).then(|| start.elapsed().as_secs_f64()) }
        })
        .collect()
}

/// Every check name, for validating `--perturb`.
pub fn check_names() -> &'static [&'static str] {
    &[
        "stereo_round_trip",
        "meridional_round_trip",
        "reflection_involution",
        "collinearity",
        "constant_field_law",
        "funk_factorization",
        "kernel",
        "symmetric_part",
        "radon_factorization",
        "gaussian_radon",
        "unit_ball_radon",
        "odd_inversion",
        "closed_form_vs_pipeline",
        "pipeline_vs_slice_S",
        "meridional_measure_mu",
        "meridional_measure_nu",
        "stereo_measure_plane",
        "stereo_measure_cap",
        "weighted_norm",
        "radon_norm",
        "hemisphere_norm",
        "cosine_to_funk",
        "shifted_cosine_to_slice",
        "semyanistyi_to_radon",
        "riesz_to_identity",
        "funk_side_round_trip",
        "radon_side_round_trip",
    ]
}
