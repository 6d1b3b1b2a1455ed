//! Triangulated sphere and hemisphere maps for n = 3.
//!
//! The domain is a geodesic subdivision of the octahedron (full sphere) or of
//! its four faces with first coordinate >= 0 (right hemisphere; the equator
//! is then an exact sub-complex, which keeps the rim polyline clean). The
//! subdivision level is raised until every mapped edge has an angular gap
//! below the arc threshold, so the image triangles are small and the
//! point-in-spherical-triangle test is unambiguous.
//!
//! The intersection count of the map with a direction `d` is the sum of
//! orientation signs over mapped triangles containing `d`. When `d` falls on
//! (or nearly on) a mapped edge, the count is re-run with an infinitesimally
//! perturbed probe: the count is locally constant in `d` away from the rim
//! image, so this does not change the defined quantity.

use crate::charts::LocalField;
use crate::charts::{octa_sphere, subdivide};
use crate::error::{Error, Result};
use crate::geom::{orthonormal_frame, MatN, VecN};

pub const MAX_ANGLE_GAP: f64 = 0.2;
const BASE_LEVEL: usize = 5;
const MAX_LEVEL: usize = 9;
const DEGENERACY_EPS: f64 = 1e-10;

/// Sampled map from a triangulated sphere or hemisphere into the unit sphere.
#[derive(Clone, Debug)]
pub struct TriMap {
    /// Unit domain directions; the domain point is `a + eps * vert`.
    pub verts: Vec<VecN>,
    /// Outward-oriented triangles (`det[a,b,c] > 0`).
    pub tris: Vec<[u32; 3]>,
    /// Normalized field values per vertex.
    pub values: Vec<VecN>,
    /// Raw field values per vertex.
    pub raws: Vec<VecN>,
    /// Rim vertex indices ordered by angle in the (u2, u3) plane; empty for
    /// the full sphere.
    pub rim: Vec<u32>,
    pub level: usize,
}

fn hemisphere_base() -> (Vec<VecN>, Vec<[u32; 3]>) {
    let verts = vec![
        VecN::v3(1.0, 0.0, 0.0),
        VecN::v3(0.0, 1.0, 0.0),
        VecN::v3(0.0, -1.0, 0.0),
        VecN::v3(0.0, 0.0, 1.0),
        VecN::v3(0.0, 0.0, -1.0),
    ];
    // outward-oriented faces of the octahedron with u1 >= 0
    let tris = vec![[0, 1, 3], [0, 3, 2], [0, 2, 4], [0, 4, 1]];
    (verts, tris)
}

/// Build the map at increasing subdivision levels until all mapped edges are
/// short. `hemisphere = true` clips the domain to `u1 >= 0`.
pub fn build_tri(
    field: &dyn LocalField,
    a: &VecN,
    eps: f64,
    hemisphere: bool,
    zero_tol: f64,
) -> Result<TriMap> {
    let mut worst_gap = 0.0;
    for level in BASE_LEVEL..=MAX_LEVEL {
        let (mut verts, mut tris) = if hemisphere {
            hemisphere_base()
        } else {
            octa_sphere(0)
        };
        subdivide(&mut verts, &mut tris, level);

        let mut values = Vec::with_capacity(verts.len());
        let mut raws = Vec::with_capacity(verts.len());
        for u in &verts {
            let x = *a + u.scale(eps);
            let v = field.eval(&x)?;
            let unit = v.unit(zero_tol).ok_or(Error::ZeroOnSphere {
                point: x,
                norm: v.norm(),
            })?;
            values.push(unit);
            raws.push(v);
        }

        worst_gap = 0.0;
        for t in &tris {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let gap = values[e.0 as usize].angle_to(&values[e.1 as usize]);
                if gap > worst_gap {
                    worst_gap = gap;
                }
            }
        }
        if worst_gap <= MAX_ANGLE_GAP {
            let mut rim: Vec<u32> = if hemisphere {
                verts
                    .iter()
                    .enumerate()
                    .filter(|(_, u)| u[0] == 0.0)
                    .map(|(i, _)| i as u32)
                    .collect()
            } else {
                Vec::new()
            };
            rim.sort_by(|&i, &j| {
                let ang = |k: u32| {
                    let u = verts[k as usize];
                    u[2].atan2(u[1])
                };
                ang(i).partial_cmp(&ang(j)).unwrap()
            });
            return Ok(TriMap {
                verts,
                tris,
                values,
                raws,
                rim,
                level,
            });
        }
    }
    Err(Error::RefinementOverflow {
        gap: worst_gap,
        depth: MAX_LEVEL,
    })
}

fn det3(a: &VecN, b: &VecN, c: &VecN) -> f64 {
    MatN::from_cols(&[*a, *b, *c]).det()
}

enum Containment {
    Inside(i64),
    Outside,
    Degenerate,
}

fn triangle_contains(a: &VecN, b: &VecN, c: &VecN, d: &VecN) -> Containment {
    // quick reject: image triangles are small, so anything containing d has
    // all vertices close to it
    if a.dot(d) < 0.8 && b.dot(d) < 0.8 && c.dot(d) < 0.8 {
        return Containment::Outside;
    }
    let s1 = det3(a, b, d);
    let s2 = det3(b, c, d);
    let s3 = det3(c, a, d);
    classify_signs(s1, s2, s3, DEGENERACY_EPS)
}

/// Verdict from the three orientation signs. A verdict is degenerate only
/// when perturbing determinants within `eps` could flip it to (or from)
/// "inside": a robustly mixed sign pattern stays outside even when one of
/// the determinants is tiny (which happens for folded, near-zero-area image
/// triangles far away from the probe).
fn classify_signs(s1: f64, s2: f64, s3: f64, eps: f64) -> Containment {
    if s1 > eps && s2 > eps && s3 > eps {
        Containment::Inside(1)
    } else if s1 < -eps && s2 < -eps && s3 < -eps {
        Containment::Inside(-1)
    } else if (s1 > -eps && s2 > -eps && s3 > -eps) || (s1 < eps && s2 < eps && s3 < eps) {
        Containment::Degenerate
    } else {
        Containment::Outside
    }
}

/// Sum of orientation signs of mapped triangles containing `d`, with a
/// deterministic probe-perturbation fallback near mapped edges.
pub fn count_containing(map: &TriMap, d: &VecN) -> Result<i64> {
    count_soup(&map.values, &map.tris, d)
}

/// Containment count over an arbitrary oriented triangle soup of unit
/// vectors (used for both hemisphere maps and assembled capsule maps).
pub fn count_soup(values: &[VecN], tris: &[[u32; 3]], d: &VecN) -> Result<i64> {
    let (q2, q3) = orthonormal_frame(d);
    'attempt: for attempt in 0..40 {
        let probe = if attempt == 0 {
            *d
        } else {
            // golden-angle spiral of tiny perturbations, growing slowly
            let eta = (1e-9 * 3f64.powi(attempt)).min(5e-5);
            let phi = 2.399_963_229_728_653 * attempt as f64;
            (*d + q2.scale(eta * phi.cos()) + q3.scale(eta * phi.sin()))
                .unit(0.0)
                .unwrap()
        };
        let mut total = 0i64;
        for t in tris {
            let a = &values[t[0] as usize];
            let b = &values[t[1] as usize];
            let c = &values[t[2] as usize];
            match triangle_contains(a, b, c, &probe) {
                Containment::Inside(s) => total += s,
                Containment::Outside => {}
                Containment::Degenerate => continue 'attempt,
            }
        }
        return Ok(total);
    }
    Err(Error::DegenerateTriangle { dir: *d })
}

/// Angular distance from `d` to the image of the rim polyline.
pub fn rim_margin_tri(map: &TriMap, d: &VecN) -> f64 {
    if map.rim.is_empty() {
        return f64::INFINITY;
    }
    let mut min = f64::INFINITY;
    let k = map.rim.len();
    for i in 0..k {
        let u = map.values[map.rim[i] as usize];
        let w = map.values[map.rim[(i + 1) % k] as usize];
        min = min.min(arc_distance(&u, &w, d));
    }
    min
}

/// Angular distance from point `d` to the geodesic segment from `u` to `w`.
fn arc_distance(u: &VecN, w: &VecN, d: &VecN) -> f64 {
    let cross = u.cross(w);
    let n = match cross.unit(1e-14) {
        Some(n) => n,
        None => return u.angle_to(d), // degenerate arc
    };
    // foot of d on the great circle lies inside the segment?
    let dp = *d - n.scale(d.dot(&n));
    if let Some(dp) = dp.unit(1e-14) {
        let inside = u.cross(&dp).dot(&n) >= 0.0 && dp.cross(w).dot(&n) >= 0.0;
        if inside {
            return d.dot(&n).clamp(-1.0, 1.0).asin().abs();
        }
    }
    u.angle_to(d).min(w.angle_to(d))
}

/// Kronecker-style oracle: total signed solid angle of the mapped
/// triangulation divided by 4 pi. Equals the degree for full-sphere maps.
pub fn solid_angle_degree(map: &TriMap) -> Result<i64> {
    let mut total = 0.0;
    for t in &map.tris {
        let a = map.values[t[0] as usize];
        let b = map.values[t[1] as usize];
        let c = map.values[t[2] as usize];
        // Van Oosterom-Strackee
        let num = det3(&a, &b, &c);
        let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
        total += 2.0 * num.atan2(den);
    }
    let deg = total / (4.0 * std::f64::consts::PI);
    let rounded = deg.round();
    if (deg - rounded).abs() > 0.01 {
        return Err(Error::DirectionDisagreement {
            counts: vec![(deg * 1000.0) as i64, (rounded * 1000.0) as i64],
        });
    }
    Ok(rounded as i64)
}

/// Independent hemisphere-capable oracle: gnomonic projection centered at `d`
/// and a planar point-in-triangle test for the origin, with the same
/// deterministic probe perturbation near degeneracies as the main counter.
pub fn gnomonic_count(map: &TriMap, d: &VecN) -> Result<i64> {
    let (q2, q3) = orthonormal_frame(d);
    'attempt: for attempt in 0..40 {
        let probe = if attempt == 0 {
            *d
        } else {
            let eta = (1e-9 * 3f64.powi(attempt)).min(5e-5);
            let phi = 2.399_963_229_728_653 * attempt as f64;
            (*d + q2.scale(eta * phi.cos()) + q3.scale(eta * phi.sin()))
                .unit(0.0)
                .unwrap()
        };
        let project = |u: &VecN| -> Option<(f64, f64)> {
            let t = u.dot(&probe);
            if t < 0.75 {
                return None; // cannot belong to a small triangle containing d
            }
            let p = u.scale(1.0 / t) - probe;
            Some((p.dot(&q2), p.dot(&q3)))
        };
        let mut total = 0i64;
        for t in &map.tris {
            let pa = project(&map.values[t[0] as usize]);
            let pb = project(&map.values[t[1] as usize]);
            let pc = project(&map.values[t[2] as usize]);
            let (pa, pb, pc) = match (pa, pb, pc) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => continue,
            };
            // signed areas of (origin, edge) wedges
            let s1 = pa.0 * pb.1 - pa.1 * pb.0;
            let s2 = pb.0 * pc.1 - pb.1 * pc.0;
            let s3 = pc.0 * pa.1 - pc.1 * pa.0;
            match classify_signs(s1, s2, s3, 1e-12) {
                Containment::Inside(s) => total += s,
                Containment::Outside => {}
                Containment::Degenerate => continue 'attempt,
            }
        }
        return Ok(total);
    }
    Err(Error::DegenerateTriangle { dir: *d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result as CResult;

    fn field(f: impl Fn(&VecN) -> VecN + 'static) -> impl LocalField {
        (3usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })
    }

    #[test]
    fn radial_source_full_sphere_degree_one() {
        let a = VecN::v3(0.0, 0.0, 0.0);
        let f = field(|y| *y);
        let m = build_tri(&f, &a, 0.05, false, 1e-12).unwrap();
        for d in [
            VecN::v3(1.0, 0.0, 0.0),
            VecN::v3(0.0, 0.0, -1.0),
            VecN::v3(0.6, -0.48, 0.64).unit(0.0).unwrap(),
        ] {
            assert_eq!(count_containing(&m, &d).unwrap(), 1, "at {d:?}");
        }
        assert_eq!(solid_angle_degree(&m).unwrap(), 1);
        assert_eq!(gnomonic_count(&m, &VecN::v3(0.0, 1.0, 0.0)).unwrap(), 1);
    }

    #[test]
    fn point_reflection_has_degree_minus_one() {
        let a = VecN::v3(0.0, 0.0, 0.0);
        let f = field(|y| -*y);
        let m = build_tri(&f, &a, 0.05, false, 1e-12).unwrap();
        let d = VecN::v3(0.3, 0.5, -0.8).unit(0.0).unwrap();
        assert_eq!(count_containing(&m, &d).unwrap(), -1);
        assert_eq!(solid_angle_degree(&m).unwrap(), -1);
    }

    #[test]
    fn hemisphere_radial_counts() {
        let a = VecN::v3(1.0, 0.0, 0.0);
        let center = a;
        let f = field(move |y| *y - center);
        let m = build_tri(&f, &a, 0.05, true, 1e-12).unwrap();
        assert!(!m.rim.is_empty());
        // identity-like hemisphere map: e1 is covered once, -e1 never
        assert_eq!(count_containing(&m, &VecN::v3(1.0, 0.0, 0.0)).unwrap(), 1);
        assert_eq!(count_containing(&m, &VecN::v3(-1.0, 0.0, 0.0)).unwrap(), 0);
        assert_eq!(gnomonic_count(&m, &VecN::v3(1.0, 0.0, 0.0)).unwrap(), 1);
        // rim maps to the equator: the margin of +-e1 is about pi/2
        let margin = rim_margin_tri(&m, &VecN::v3(1.0, 0.0, 0.0));
        assert!((margin - std::f64::consts::FRAC_PI_2).abs() < 0.05, "{margin}");
    }

    #[test]
    fn degenerate_probe_is_perturbed_deterministically() {
        let a = VecN::v3(0.0, 0.0, 0.0);
        let f = field(|y| *y);
        let m = build_tri(&f, &a, 0.05, false, 1e-12).unwrap();
        // octahedron vertices map exactly onto themselves: the naive test at
        // a vertex direction is degenerate and must fall back to perturbation
        let d = VecN::v3(0.0, 1.0, 0.0);
        assert_eq!(count_containing(&m, &d).unwrap(), 1);
        let again = count_containing(&m, &d).unwrap();
        assert_eq!(again, 1);
    }

    #[test]
    fn squared_axis_field_degree_two() {
        // suspension of the longitude-doubling circle map: degree 2, and the
        // scale 0.05 keeps the vertical part commensurate on the 0.05-sphere
        let a = VecN::v3(0.0, 0.0, 0.0);
        let f = field(|y| {
            let (x, yy, z) = (y[0], y[1], y[2]);
            VecN::v3(x * x - yy * yy, 2.0 * x * yy, 0.05 * z)
        });
        let m = build_tri(&f, &a, 0.05, false, 1e-15).unwrap();
        let d = VecN::v3(0.6, 0.7, 0.39).unit(0.0).unwrap();
        let got = count_containing(&m, &d).unwrap();
        assert_eq!(got, solid_angle_degree(&m).unwrap());
        assert_eq!(got, 2);
    }
}
