//! Sampled circle maps for n = 2: adaptive arc sampling, angle lifting, and
//! exact signed crossing counts.
//!
//! The crossing count of a lifted angle path through the lattice
//! `beta + 2*pi*Z` telescopes to a difference of floors, which makes the
//! count exact and insensitive to tangential touches at interior samples.

use crate::charts::LocalField;
use crate::error::{Error, Result};
use crate::geom::{angle2, wrap_angle, VecN};
use std::f64::consts::{FRAC_PI_2, TAU};

pub const MAX_ANGLE_GAP: f64 = 0.2;
pub const MAX_BISECT_DEPTH: usize = 12;

/// Sampled map from an arc (half-circle or full circle) to the unit circle.
#[derive(Clone, Debug)]
pub struct ArcMap {
    /// Arc parameters, strictly increasing. Hemisphere: theta in
    /// [-pi/2, pi/2] measured from the chart-normal axis. Full circle:
    /// theta in [0, 2*pi] with the last sample equal to the first point.
    pub params: Vec<f64>,
    /// Unit vectors v(x)/|v(x)| per sample.
    pub values: Vec<VecN>,
    /// Continuously lifted angles of `values`.
    pub lifted: Vec<f64>,
    /// Raw (unnormalized) field values at the two rim endpoints, hemisphere only.
    pub raw_rim: Option<[VecN; 2]>,
}

/// Domain point on the circle of radius `eps` around `a` at arc parameter `t`.
pub fn arc_point(a: &VecN, eps: f64, t: f64) -> VecN {
    *a + VecN::v2(eps * t.cos(), eps * t.sin())
}

fn sample_unit(field: &dyn LocalField, a: &VecN, eps: f64, t: f64, zero_tol: f64) -> Result<(VecN, VecN)> {
    let x = arc_point(a, eps, t);
    let v = field.eval(&x)?;
    let u = v.unit(zero_tol).ok_or(Error::ZeroOnSphere {
        point: x,
        norm: v.norm(),
    })?;
    Ok((u, v))
}

/// Build an adaptively refined arc map.
pub fn build_arc(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    closed: bool,
    zero_tol: f64,
) -> Result<ArcMap> {
    let (t0, t1, n0) = if closed {
        (0.0, TAU, 256)
    } else {
        (-FRAC_PI_2, FRAC_PI_2, 64)
    };
    let mut params: Vec<f64> = (0..=n0).map(|k| t0 + (t1 - t0) * k as f64 / n0 as f64).collect();
    let mut values: Vec<VecN> = Vec::with_capacity(params.len());
    let mut raws: Vec<VecN> = Vec::with_capacity(params.len());
    for &t in &params {
        let (u, v) = sample_unit(field, a, eps, t, zero_tol)?;
        values.push(u);
        raws.push(v);
    }

    // adaptive bisection of any segment with a large angular gap
    let mut depth = 0;
    loop {
        let mut new_params = Vec::with_capacity(params.len() * 2);
        let mut new_values = Vec::with_capacity(params.len() * 2);
        let mut new_raws = Vec::with_capacity(params.len() * 2);
        let mut split_any = false;
        for i in 0..params.len() - 1 {
            new_params.push(params[i]);
            new_values.push(values[i]);
            new_raws.push(raws[i]);
            let gap = values[i].angle_to(&values[i + 1]);
            if gap > MAX_ANGLE_GAP {
                let tm = 0.5 * (params[i] + params[i + 1]);
                let (u, v) = sample_unit(field, a, eps, tm, zero_tol)?;
                new_params.push(tm);
                new_values.push(u);
                new_raws.push(v);
                split_any = true;
            }
        }
        new_params.push(*params.last().unwrap());
        new_values.push(*values.last().unwrap());
        new_raws.push(*raws.last().unwrap());
        params = new_params;
        values = new_values;
        raws = new_raws;
        if !split_any {
            break;
        }
        depth += 1;
        if depth > MAX_BISECT_DEPTH {
            let worst = values
                .windows(2)
                .map(|w| w[0].angle_to(&w[1]))
                .fold(0.0, f64::max);
            return Err(Error::RefinementOverflow {
                gap: worst,
                depth,
            });
        }
    }

    // continuous angle lift
    let mut lifted = Vec::with_capacity(values.len());
    let mut alpha = angle2(&values[0]);
    lifted.push(alpha);
    for i in 1..values.len() {
        let raw = angle2(&values[i]);
        alpha += wrap_angle(raw - alpha);
        lifted.push(alpha);
    }

    let raw_rim = if closed {
        None
    } else {
        Some([raws[0], *raws.last().unwrap()])
    };
    Ok(ArcMap {
        params,
        values,
        lifted,
        raw_rim,
    })
}

/// Exact net signed crossings of the lifted path through `beta + 2 pi Z`:
/// `floor((alpha_end - beta)/2pi) - floor((alpha_start - beta)/2pi)`.
pub fn net_crossings(lifted: &[f64], beta: f64) -> i64 {
    let f = |alpha: f64| ((alpha - beta) / TAU).floor() as i64;
    f(*lifted.last().unwrap()) - f(lifted[0])
}

/// Winding number of a closed lifted path.
pub fn winding(lifted: &[f64]) -> i64 {
    ((lifted.last().unwrap() - lifted[0]) / TAU).round() as i64
}

/// Smallest angular distance from direction `d` to the two rim values.
pub fn rim_margin_arc(map: &ArcMap, d: &VecN) -> f64 {
    match &map.raw_rim {
        None => f64::INFINITY,
        Some(_) => {
            let first = map.values[0];
            let last = *map.values.last().unwrap();
            first.angle_to(d).min(last.angle_to(d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result as CResult;

    fn field(f: impl Fn(&VecN) -> VecN + 'static) -> impl LocalField {
        (2usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })
    }

    #[test]
    fn radial_source_crossings() {
        let a = VecN::v2(1.0, 0.0);
        let f = field(move |y| *y - VecN::v2(1.0, 0.0));
        let m = build_arc(&f, &a, 0.05, false, 1e-8).unwrap();
        // v(theta) = (cos theta, sin theta): one positive crossing of e1, none of -e1
        assert_eq!(net_crossings(&m.lifted, 0.0), 1);
        assert_eq!(net_crossings(&m.lifted, std::f64::consts::PI), 0);
    }

    #[test]
    fn constant_field_no_crossings() {
        let a = VecN::v2(1.0, 0.0);
        let f = field(|_| VecN::v2(1.0, 0.0));
        let m = build_arc(&f, &a, 0.05, false, 1e-8).unwrap();
        assert_eq!(net_crossings(&m.lifted, 1.0), 0);
        assert_eq!(net_crossings(&m.lifted, -2.0), 0);
    }

    #[test]
    fn zero_on_sphere_detected() {
        let a = VecN::v2(1.0, 0.0);
        let f = field(move |y| VecN::v2(y[0] - 1.05, y[1]));
        // the field vanishes at (1.05, 0), exactly on the sampling circle
        match build_arc(&f, &a, 0.05, false, 1e-8) {
            Err(Error::ZeroOnSphere { .. }) => {}
            other => panic!("expected ZeroOnSphere, got {other:?}"),
        }
    }

    #[test]
    fn full_circle_winding_of_squared_field() {
        let a = VecN::v2(0.0, 0.0);
        // complex square: winding 2 around the zero
        let f = field(|y| VecN::v2(y[0] * y[0] - y[1] * y[1], 2.0 * y[0] * y[1]));
        let m = build_arc(&f, &a, 0.05, true, 1e-12).unwrap();
        assert_eq!(winding(&m.lifted), 2);
        for beta in [0.0, 1.0, 2.0, -0.5] {
            assert_eq!(net_crossings(&m.lifted, beta), 2);
        }
    }

    #[test]
    fn saddle_has_winding_minus_one() {
        let a = VecN::v2(0.0, 0.0);
        let f = field(|y| VecN::v2(y[0], -y[1]));
        let m = build_arc(&f, &a, 0.05, true, 1e-12).unwrap();
        assert_eq!(winding(&m.lifted), -1);
    }

    #[test]
    fn tangential_touch_counts_zero() {
        // lifted path that rises to exactly beta and retreats
        let lifted = vec![-0.1, 0.0, -0.1];
        assert_eq!(net_crossings(&lifted, 0.0), 0);
        let lifted = vec![-0.1, 0.05, -0.1];
        assert_eq!(net_crossings(&lifted, 0.0), 0);
        let lifted = vec![-0.1, 0.2];
        assert_eq!(net_crossings(&lifted, 0.0), 1);
        let lifted = vec![0.2, -0.1];
        assert_eq!(net_crossings(&lifted, 0.0), -1);
    }
}
