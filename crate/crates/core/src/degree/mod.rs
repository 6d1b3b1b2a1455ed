//! Degree engine: normalized sphere/hemisphere maps, signed intersection
//! numbers, admissible antipodal pairs, averaged half-integer indices, and
//! full-sphere degrees, with an independent oracle for cross-checking.
//!
//! Orientation conventions: the domain hemisphere/sphere of radius eps is
//! oriented as the boundary of the (half-)ball in chart coordinates with the
//! outward normal first; the target unit sphere carries the standard
//! orientation of the chart vector space. For n = 1 the sphere S^0 = {+1,-1}
//! is oriented +1 at +1 and -1 at -1, which makes the intersection number of
//! a map hitting `d` equal to sign(d).

mod arc;
mod halfint;
mod oracle;
mod tri;

pub use halfint::HalfInt;
pub use oracle::oracle_degree;

use crate::charts::LocalField;
use crate::error::{Error, Result};
use crate::geom::{angle2, VecN};
use crate::Params;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use tri::count_soup;

pub(crate) use arc::{build_arc, net_crossings, winding, ArcMap};
pub(crate) use tri::{build_tri, count_containing, rim_margin_tri, TriMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Hemisphere,
    FullSphere,
}

#[derive(Clone, Debug)]
pub(crate) enum MapData {
    /// n = 1 hemisphere: the single sample at a + eps.
    Point { unit: f64 },
    /// n = 1 full sphere: samples at a + eps and a - eps.
    PointPair { right: f64, left: f64 },
    Arc(ArcMap),
    Tri(TriMap),
}

/// Diagnostics describing how a map was sampled; carried into reports.
#[derive(Clone, Debug, Default)]
pub struct MapDiagnostics {
    pub samples: usize,
    pub refinement: usize,
}

/// Sampled normalized map `v/|v|` on a hemisphere or sphere of radius `eps`
/// around the chart point `a`.
#[derive(Clone, Debug)]
pub struct HemisphereMap {
    pub n: usize,
    pub center: VecN,
    pub radius: f64,
    pub side: Side,
    pub margin_min: f64,
    pub(crate) data: MapData,
    pub diagnostics: MapDiagnostics,
}

/// Build the normalized map by sampling `field` on the hemisphere (chart
/// side `y1 >= 1`) or the full sphere around `a`.
pub fn normalize_map(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    side: Side,
    params: &Params,
) -> Result<HemisphereMap> {
    let n = field.dim();
    let zero_tol = params.zero_tol;
    let (data, diagnostics) = match (n, side) {
        (1, Side::Hemisphere) => {
            let x = *a + VecN::v1(eps);
            let v = field.eval(&x)?;
            let unit = v
                .unit(zero_tol)
                .ok_or(Error::ZeroOnSphere { point: x, norm: v.norm() })?;
            (
                MapData::Point { unit: unit[0] },
                MapDiagnostics { samples: 1, refinement: 0 },
            )
        }
        (1, Side::FullSphere) => {
            let mut vals = [0.0; 2];
            for (i, s) in [1.0f64, -1.0].iter().enumerate() {
                let x = *a + VecN::v1(s * eps);
                let v = field.eval(&x)?;
                let u = v
                    .unit(zero_tol)
                    .ok_or(Error::ZeroOnSphere { point: x, norm: v.norm() })?;
                vals[i] = u[0];
            }
            (
                MapData::PointPair { right: vals[0], left: vals[1] },
                MapDiagnostics { samples: 2, refinement: 0 },
            )
        }
        (2, _) => {
            let m = build_arc(field, a, eps, side == Side::FullSphere, zero_tol)?;
            let d = MapDiagnostics { samples: m.params.len(), refinement: 0 };
            (MapData::Arc(m), d)
        }
        (3, _) => {
            let m = build_tri(field, a, eps, side == Side::Hemisphere, zero_tol)?;
            let d = MapDiagnostics { samples: m.verts.len(), refinement: m.level };
            (MapData::Tri(m), d)
        }
        _ => unreachable!("dimension restricted to 1..=3"),
    };
    Ok(HemisphereMap {
        n,
        center: *a,
        radius: eps,
        side,
        margin_min: params.margin_min,
        data,
        diagnostics,
    })
}

impl HemisphereMap {
    /// Angular clearance of `d` from the image of the rim sphere. Infinite
    /// for full spheres and for n = 1 (the rim is empty).
    pub fn rim_margin(&self, d: &VecN) -> f64 {
        match &self.data {
            MapData::Point { .. } | MapData::PointPair { .. } => f64::INFINITY,
            MapData::Arc(m) => arc::rim_margin_arc(m, d),
            MapData::Tri(m) => rim_margin_tri(m, d),
        }
    }

    pub(crate) fn arc_data(&self) -> &ArcMap {
        match &self.data {
            MapData::Arc(m) => m,
            _ => panic!("not an arc map"),
        }
    }

    pub(crate) fn tri_data(&self) -> &TriMap {
        match &self.data {
            MapData::Tri(m) => m,
            _ => panic!("not a triangulated map"),
        }
    }

    /// Value of the normalized map at the single n = 1 hemisphere sample.
    pub fn point_value(&self) -> f64 {
        match &self.data {
            MapData::Point { unit } => *unit,
            _ => panic!("not a point map"),
        }
    }
}

/// Signed algebraic intersection number of the map with direction `d`.
pub fn intersection_number(map: &HemisphereMap, d: &VecN) -> Result<i64> {
    debug_assert_eq!(d.dim(), map.n);
    if map.side == Side::Hemisphere {
        let margin = map.rim_margin(d);
        if margin < map.margin_min {
            return Err(Error::NotAdmissibleDirection {
                margin,
                required: map.margin_min,
            });
        }
    }
    match &map.data {
        MapData::Point { unit } => {
            let ds = d[0].signum();
            Ok(if (unit - ds).abs() < 0.5 { ds as i64 } else { 0 })
        }
        MapData::PointPair { right, left } => {
            // intersection of the oriented 0-sphere map with {d}
            let ds = d[0].signum();
            let mut total = 0i64;
            if (right - ds).abs() < 0.5 {
                total += ds as i64;
            }
            if (left - ds).abs() < 0.5 {
                total -= ds as i64;
            }
            Ok(total)
        }
        MapData::Arc(m) => Ok(net_crossings(&m.lifted, angle2(d))),
        MapData::Tri(m) => count_containing(m, d),
    }
}

/// Both `d` and `-d` clear the rim image by the required margin.
/// Always true for n = 1.
pub fn is_admissible_pair(map: &HemisphereMap, d: &VecN) -> bool {
    if map.n == 1 || map.side == Side::FullSphere {
        return true;
    }
    map.rim_margin(d) >= map.margin_min && map.rim_margin(&-*d) >= map.margin_min
}

/// The averaged, possibly half-integer index over the admissible pair
/// `{d, -d}`: exact arithmetic on doubled integers.
pub fn averaged_index(map: &HemisphereMap, d: &VecN) -> Result<HalfInt> {
    if !is_admissible_pair(map, d) {
        let margin = map.rim_margin(d).min(map.rim_margin(&-*d));
        return Err(Error::NotAdmissiblePair {
            margin,
            required: map.margin_min,
        });
    }
    let plus = intersection_number(map, d)?;
    let minus = intersection_number(map, &-*d)?;
    Ok(HalfInt::average(plus, minus))
}

/// Degree of the normalized map on the full sphere, validated across probe
/// directions drawn from a fixed seed.
pub fn full_sphere_degree(map: &HemisphereMap, d: &VecN, params: &Params) -> Result<i64> {
    assert_eq!(map.side, Side::FullSphere);
    match &map.data {
        MapData::PointPair { right, left } => Ok(((right - left) / 2.0).round() as i64),
        MapData::Arc(m) => {
            let w = winding(&m.lifted);
            let mut counts = vec![net_crossings(&m.lifted, angle2(d))];
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed_d15c);
            for _ in 0..2 {
                let beta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                counts.push(net_crossings(&m.lifted, beta));
            }
            if counts.iter().any(|&c| c != w) {
                return Err(Error::DirectionDisagreement { counts });
            }
            Ok(w)
        }
        MapData::Tri(m) => {
            let mut counts = vec![count_containing(m, d)?];
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed_d15c);
            for _ in 0..3 {
                let dir = random_unit(&mut rng, 3);
                counts.push(count_containing(m, &dir)?);
            }
            if counts.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::DirectionDisagreement { counts });
            }
            Ok(counts[0])
        }
        MapData::Point { .. } => unreachable!(),
    }
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> VecN {
    loop {
        let mut v = VecN::zero(dim);
        for i in 0..dim {
            v[i] = rng.gen_range(-1.0..1.0);
        }
        if let Some(u) = v.unit(1e-3) {
            if v.norm() <= 1.0 {
                return u;
            }
        }
    }
}
