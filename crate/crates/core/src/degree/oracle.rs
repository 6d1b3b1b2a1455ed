//! Independent degree oracle.
//!
//! Re-derives intersection numbers through a different route than the main
//! engine: dense non-adaptive sampling with explicit per-segment crossing
//! extraction for n = 2, a signed solid-angle (Kronecker) sum for full
//! spheres in n = 3, and a gnomonic-projection count for hemispheres in
//! n = 3. Used by the acceptance suite to cross-check every index.

use crate::charts::LocalField;
use crate::degree::{arc, tri, Side};
use crate::error::{Error, Result};
use crate::geom::{angle2, wrap_angle, VecN};
use std::f64::consts::{FRAC_PI_2, TAU};

const DENSE_SAMPLES: usize = 100_000;

/// Independent computation of the intersection number of the normalized map
/// with `d`. Must agree with `intersection_number`/`full_sphere_degree` on
/// every acceptance case.
pub fn oracle_degree(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    side: Side,
    d: &VecN,
    zero_tol: f64,
) -> Result<i64> {
    match field.dim() {
        1 => oracle_1d(field, a, eps, side, d, zero_tol),
        2 => oracle_dense_winding(field, a, eps, side, d, zero_tol),
        3 => {
            let map = tri::build_tri(field, a, eps, side == Side::Hemisphere, zero_tol)?;
            match side {
                Side::FullSphere => tri::solid_angle_degree(&map),
                Side::Hemisphere => tri::gnomonic_count(&map, d),
            }
        }
        _ => unreachable!(),
    }
}

fn oracle_1d(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    side: Side,
    d: &VecN,
    zero_tol: f64,
) -> Result<i64> {
    let sample = |x: VecN| -> Result<f64> {
        let v = field.eval(&x)?;
        v.unit(zero_tol)
            .map(|u| u[0])
            .ok_or(Error::ZeroOnSphere { point: x, norm: v.norm() })
    };
    let right = sample(*a + VecN::v1(eps))?;
    match side {
        Side::Hemisphere => {
            let ds = d[0].signum();
            Ok(if (right - ds).abs() < 0.5 { ds as i64 } else { 0 })
        }
        Side::FullSphere => {
            let left = sample(*a - VecN::v1(eps))?;
            Ok(((right - left) / 2.0).round() as i64)
        }
    }
}

/// Dense uniform sampling of the accumulated angle, then localized crossing
/// extraction segment by segment.
fn oracle_dense_winding(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    side: Side,
    d: &VecN,
    zero_tol: f64,
) -> Result<i64> {
    let (t0, t1) = match side {
        Side::Hemisphere => (-FRAC_PI_2, FRAC_PI_2),
        Side::FullSphere => (0.0, TAU),
    };
    let beta = angle2(d);
    let mut prev_angle: Option<f64> = None;
    let mut lifted_prev = 0.0;
    let mut count = 0i64;
    for k in 0..=DENSE_SAMPLES {
        let t = t0 + (t1 - t0) * k as f64 / DENSE_SAMPLES as f64;
        let x = arc::arc_point(a, eps, t);
        let v = field.eval(&x)?;
        let u = v
            .unit(zero_tol)
            .ok_or(Error::ZeroOnSphere { point: x, norm: v.norm() })?;
        let raw = angle2(&u);
        let lifted = match prev_angle {
            None => raw,
            Some(_) => lifted_prev + wrap_angle(raw - lifted_prev),
        };
        if prev_angle.is_some() {
            // localized crossing extraction on the segment: each dense
            // segment turns by less than pi, so it can cross at most one
            // lattice line; classify it explicitly by bracketing
            let ga = lifted_prev - beta;
            let gb = lifted - beta;
            let ka = (ga / TAU).floor();
            let kb = (gb / TAU).floor();
            if kb > ka {
                count += 1; // upward pass through beta + 2*pi*(ka+1)
            } else if kb < ka {
                count -= 1; // downward pass through beta + 2*pi*ka
            }
        }
        prev_angle = Some(raw);
        lifted_prev = lifted;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{full_sphere_degree, intersection_number, normalize_map};
    use crate::error::Result as CResult;
    use crate::Params;

    fn field2(f: impl Fn(&VecN) -> VecN + 'static) -> impl LocalField {
        (2usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })
    }

    #[test]
    fn oracle_matches_engine_on_radial_hemisphere() {
        let a = VecN::v2(1.0, 0.0);
        let f = field2(|y| *y - VecN::v2(1.0, 0.0));
        let params = Params::default();
        let m = normalize_map(&f, &a, 0.05, Side::Hemisphere, &params).unwrap();
        for d in [VecN::v2(1.0, 0.0), crate::geom::unit2(0.4), crate::geom::unit2(-1.2)] {
            let i = intersection_number(&m, &d).unwrap();
            let o = oracle_degree(&f, &a, 0.05, Side::Hemisphere, &d, params.zero_tol).unwrap();
            assert_eq!(i, o, "direction {d:?}");
        }
    }

    #[test]
    fn oracle_matches_engine_on_saddle_sphere() {
        let a = VecN::v2(0.0, 0.0);
        let f = field2(|y| VecN::v2(y[0], -y[1]));
        let params = Params::default();
        let m = normalize_map(&f, &a, 0.05, Side::FullSphere, &params).unwrap();
        let d = VecN::v2(1.0, 0.0);
        assert_eq!(
            full_sphere_degree(&m, &d, &params).unwrap(),
            oracle_degree(&f, &a, 0.05, Side::FullSphere, &d, params.zero_tol).unwrap()
        );
    }

    #[test]
    fn oracle_matches_on_3d_maps() {
        let params = Params::default();
        let a = VecN::v3(0.0, 0.0, 0.0);
        let lin = (3usize, |y: &VecN| -> CResult<VecN> {
            Ok(VecN::v3(
                2.0 * y[0] + 0.3 * y[1],
                -y[1] + 0.1 * y[2],
                0.2 * y[0] + y[2],
            ))
        });
        let d = VecN::v3(0.48, 0.6, 0.64).unit(0.0).unwrap();
        let m = normalize_map(&lin, &a, 0.05, Side::FullSphere, &params).unwrap();
        let engine = full_sphere_degree(&m, &d, &params).unwrap();
        let oracle = oracle_degree(&lin, &a, 0.05, Side::FullSphere, &d, params.zero_tol).unwrap();
        assert_eq!(engine, oracle);
        assert_eq!(engine, -1); // det of the linear part is negative

        let ah = VecN::v3(1.0, 0.0, 0.0);
        let hemi = (3usize, |y: &VecN| -> CResult<VecN> {
            Ok(VecN::v3(-(y[0] - 1.0), y[1] + 0.2 * y[2], y[2]))
        });
        let mh = normalize_map(&hemi, &ah, 0.05, Side::Hemisphere, &params).unwrap();
        for d in [
            VecN::v3(1.0, 0.0, 0.0),
            VecN::v3(-1.0, 0.0, 0.0),
            VecN::v3(0.5, 0.6, 0.624_499_799_839_84),
            VecN::v3(-0.5, 0.6, 0.624_499_799_839_84),
        ] {
            let i = intersection_number(&mh, &d).unwrap();
            let o = oracle_degree(&hemi, &ah, 0.05, Side::Hemisphere, &d, params.zero_tol).unwrap();
            assert_eq!(i, o, "direction {d:?}");
        }
    }
}
