//! Named test fields with known structure, shared by the command-line tool
//! and the test suites.

use crate::error::{domain, Result};
use crate::funk_bridge::make_symmetric;
use crate::sphere_core::point::dot;
use crate::sphere_core::{ScalarField, Support};
use crate::zonal_oracles::ZonalProfile;

/// `B(s) = exp(1 − 1/(1−s))` on `[0, 1)`, zero from `s = 1` on; `B(0) = 1`.
pub fn bump(s: f64) -> f64 {
    if !(s < 1.0) {
        0.0
    } else if s <= 0.0 {
        1.0
    } else {
        (1.0 - 1.0 / (1.0 - s)).exp()
    }
}

/// Names accepted by [`sphere_field`].
pub const SPHERE_FIELDS: [&str; 8] =
    ["const1", "eta_last", "eta_last_sq", "exp_mix", "poly_mix", "cap_bump", "sym_even", "sym_odd"];

/// Names accepted by [`euclidean_field`].
pub const EUCLIDEAN_FIELDS: [&str; 2] = ["gaussian", "unit_ball"];

/// The smooth catalog used by the factorization checks.
pub const SMOOTH: [&str; 3] = ["eta_last_sq", "exp_mix", "poly_mix"];

fn exp_mix(p: &[f64]) -> f64 {
    let n = p.len() - 1;
    (0.5 * p[0] - 0.3 * p[n]).exp()
}

/// Height below which [`cap_bump`] lives for the cap parameter `a`.
pub fn bump_height(a: f64) -> f64 {
    a.min(0.0) - 0.3
}

/// A smooth bump supported strictly inside `{η_{n+1} < min(a, 0) − 0.3}`,
/// centred `0.25` rad from the south pole towards `e_1`; a cap field with
/// margin `δ = a − min(a, 0) + 0.3`.
pub fn cap_bump(n: usize, a: f64) -> Result<ScalarField> {
    let h = bump_height(a);
    let radius = (-h).acos() - 0.3;
    let mut c = vec![0.0; n + 1];
    c[0] = 0.25f64.sin();
    c[n] = -(0.25f64.cos());
    let k = 1.0 - radius.cos();
    ScalarField::on_cap(n, a, move |p: &[f64]| bump((1.0 - dot(&c, p)) / k))
        .with_support(Support::CapMargin { delta: a - h })
}

/// A field of the named catalog entry on `S^n`; `a` is used by the
/// cap-dependent entries.
pub fn sphere_field(name: &str, n: usize, a: f64) -> Result<ScalarField> {
    if n < 2 {
        return domain("catalog fields need n >= 2");
    }
    let f = match name {
        "const1" => ScalarField::on_sphere(n, |_| 1.0),
        "eta_last" => ScalarField::on_sphere(n, move |p: &[f64]| p[n]),
        "eta_last_sq" => ScalarField::on_sphere(n, move |p: &[f64]| p[n] * p[n]),
        "exp_mix" => ScalarField::on_sphere(n, exp_mix),
        "poly_mix" => ScalarField::on_sphere(n, move |p: &[f64]| 1.0 + p[0] * p[1] + p[n].powi(3)),
        "cap_bump" => cap_bump(n, a)?,
        "sym_even" => make_symmetric(&ScalarField::on_sphere(n, exp_mix), a, 1)?,
        "sym_odd" => make_symmetric(&ScalarField::on_sphere(n, exp_mix), a, -1)?,
        _ => return domain(format!("unknown catalog field '{name}'")),
    };
    Ok(f)
}

/// A compactly supported field of the named entry on `R^n`.
pub fn euclidean_field(name: &str, n: usize) -> Result<ScalarField> {
    let f = match name {
        "gaussian" => ScalarField::euclidean(n, |x| (-dot(x, x)).exp()).with_support(Support::Ball { radius: 8.0 })?,
        "unit_ball" => ScalarField::euclidean(n, |x| if dot(x, x) <= 1.0 { 1.0 } else { 0.0 })
            .with_support(Support::Ball { radius: 1.0 })?,
        _ => return domain(format!("unknown Euclidean catalog field '{name}'")),
    };
    Ok(f)
}

/// The zonal catalog `{1, t, t², 1−t, bump on (−1, a−0.2)}` for the cap `a`.
pub fn zonal_profiles(n: usize, a: f64) -> Result<Vec<(&'static str, ZonalProfile)>> {
    let h = a - 0.2;
    Ok(vec![
        ("one", ZonalProfile::new(n, a, |_| 1.0)?),
        ("t", ZonalProfile::new(n, a, |t| t)?),
        ("t_sq", ZonalProfile::new(n, a, |t| t * t)?),
        ("one_minus_t", ZonalProfile::new(n, a, |t| 1.0 - t)?),
        ("bump", ZonalProfile::new(n, a, move |t| bump((t + 1.0) / (h + 1.0)))?.with_cutoff(h)?),
    ])
}
