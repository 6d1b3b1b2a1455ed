//! Doubled and twisted-doubled field maps around boundary zeros, and the
//! collar push that moves boundary zeros into the interior.
//!
//! Around a boundary zero the doubled field lives on a capsule: the right
//! hemisphere map, its reflected copy, and a cylinder over the rim where the
//! field interpolates linearly between the value and its (possibly negated)
//! reflection. On the cylinder the interpolation has the closed forms
//!   untwisted: (t*v1, v')      twisted: (v1, t*v')
//! in chart coordinates (v1 normal, v' tangential), so seams match exactly.
//! The local index of the doubled zero is the intersection count of the
//! assembled map with a probe direction.

use crate::charts::{
    boundary_grid, find_zeros, outward_normal, ComponentShape, LocalField, ModelManifold,
    ZeroKind,
};
use crate::degree::{count_soup, full_sphere_degree, normalize_map, HalfInt, HemisphereMap, Side};
use crate::error::{Error, Result};
use crate::fieldlang::{eval_field, FieldDef};
use crate::geom::{angle2, wrap_angle, VecN};
use crate::indices::tangential_local_index;
use crate::Params;

const CYLINDER_T_STEPS: usize = 64;

/// Which boundary-zero case a doubled map is probed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleCase {
    /// Zero of the field itself on the boundary (type 0), probe e1.
    Type0,
    /// Zero of the boundary field where the field points inward, probe e2.
    TypeMinus,
    /// Zero of the boundary field where the field points outward, probe e2.
    TypePlus,
    /// Tangency: zero of the normal field that is not a zero of the field
    /// (twisted double only), probe e2.
    Tangency,
}

#[derive(Clone, Debug)]
enum CapsuleData {
    /// n = 1: unit values at the two capsule endpoints (right, left).
    Points { right: f64, left: f64 },
    /// n = 2: lifted angles of the closed capsule loop.
    Loop { lifted: Vec<f64> },
    /// n = 3: triangle soup of mapped unit values.
    Soup { values: Vec<VecN>, tris: Vec<[u32; 3]> },
}

/// Sampled doubled (or twisted-doubled) map on the capsule around the zero
/// segment.
#[derive(Clone, Debug)]
pub struct DoubledMap {
    pub n: usize,
    pub twisted: bool,
    /// Largest angular jump between adjacent samples across piece seams.
    pub seam_gap: f64,
    data: CapsuleData,
}

fn reflect_value(w: &VecN, twisted: bool) -> VecN {
    // untwisted: r o v o r; twisted: r o A o v o r
    let mut out = *w;
    if twisted {
        for i in 1..w.dim() {
            out[i] = -w[i];
        }
    } else {
        out[0] = -w[0];
    }
    out
}

fn cylinder_value(raw_rim: &VecN, t: f64, twisted: bool, zero_tol: f64) -> Result<VecN> {
    let mut v = *raw_rim;
    if twisted {
        for i in 1..v.dim() {
            v[i] *= t;
        }
    } else {
        v[0] *= t;
    }
    v.unit(zero_tol).ok_or(Error::ZeroOnCylinder {
        t,
        rim: *raw_rim,
    })
}

/// Assemble the doubled map from a hemisphere map at the zero's boundary
/// chart.
pub fn build_doubled_map(hemi: &HemisphereMap, twisted: bool, params: &Params) -> Result<DoubledMap> {
    assert_eq!(hemi.side, Side::Hemisphere);
    let zero_tol = params.zero_tol;
    match hemi.n {
        1 => {
            let w = hemi.point_value();
            let left = if twisted { w } else { -w };
            Ok(DoubledMap {
                n: 1,
                twisted,
                seam_gap: 0.0,
                data: CapsuleData::Points { right: w, left },
            })
        }
        2 => {
            let arc = hemi.arc_data();
            let raw_rim = arc.raw_rim.expect("hemisphere arc has rim");
            let mut values: Vec<VecN> = Vec::new();
            // right arc, bottom rim to top rim
            values.extend(arc.values.iter().copied());
            let mut seam_gap: f64 = 0.0;
            // top cylinder, t from 1 to -1 at the top rim value
            let top = raw_rim[1];
            for k in 0..=CYLINDER_T_STEPS {
                let t = 1.0 - 2.0 * k as f64 / CYLINDER_T_STEPS as f64;
                let u = cylinder_value(&top, t, twisted, zero_tol)?;
                if k == 0 {
                    seam_gap = seam_gap.max(u.angle_to(values.last().unwrap()));
                }
                values.push(u);
            }
            // left arc: parameter from top to bottom, values reflected
            let first_left = reflect_value(arc.values.last().unwrap(), twisted);
            seam_gap = seam_gap.max(first_left.angle_to(values.last().unwrap()));
            for w in arc.values.iter().rev() {
                values.push(reflect_value(w, twisted));
            }
            // bottom cylinder, t from -1 back to 1 at the bottom rim value
            let bottom = raw_rim[0];
            for k in 0..=CYLINDER_T_STEPS {
                let t = -1.0 + 2.0 * k as f64 / CYLINDER_T_STEPS as f64;
                let u = cylinder_value(&bottom, t, twisted, zero_tol)?;
                if k == 0 {
                    seam_gap = seam_gap.max(u.angle_to(values.last().unwrap()));
                }
                values.push(u);
            }
            seam_gap = seam_gap.max(values[0].angle_to(values.last().unwrap()));
            // lift angles along the closed loop
            let mut lifted = Vec::with_capacity(values.len() + 1);
            let mut alpha = angle2(&values[0]);
            lifted.push(alpha);
            for v in values.iter().skip(1).chain(std::iter::once(&values[0])) {
                alpha += wrap_angle(angle2(v) - alpha);
                lifted.push(alpha);
            }
            Ok(DoubledMap {
                n: 2,
                twisted,
                seam_gap,
                data: CapsuleData::Loop { lifted },
            })
        }
        3 => {
            let tri = hemi.tri_data();
            let nverts = tri.verts.len() as u32;
            let mut values: Vec<VecN> = tri.values.clone();
            let mut tris: Vec<[u32; 3]> = tri.tris.clone();
            // reflected hemisphere: same vertex order, reversed triangles
            values.extend(tri.values.iter().map(|w| reflect_value(w, twisted)));
            tris.extend(tri.tris.iter().map(|t| [t[0] + nverts, t[2] + nverts, t[1] + nverts]));
            let mut seam_gap: f64 = 0.0;
            // cylinder grid over the ordered rim loop
            let rim = &tri.rim;
            let k = rim.len();
            let base = values.len() as u32;
            let rows = CYLINDER_T_STEPS + 1;
            for i in 0..rows {
                let t = 1.0 - 2.0 * i as f64 / CYLINDER_T_STEPS as f64;
                for &rj in rim.iter() {
                    let raw = tri.raws[rj as usize];
                    let u = cylinder_value(&raw, t, twisted, zero_tol)?;
                    if i == 0 {
                        seam_gap = seam_gap.max(u.angle_to(&tri.values[rj as usize]));
                    }
                    if i == rows - 1 {
                        let mirrored = reflect_value(&tri.values[rj as usize], twisted);
                        seam_gap = seam_gap.max(u.angle_to(&mirrored));
                    }
                    values.push(u);
                }
            }
            for i in 0..rows - 1 {
                for j in 0..k {
                    let j1 = (j + 1) % k;
                    let a = base + (i * k + j) as u32;
                    let b = base + (i * k + j1) as u32;
                    let c = base + ((i + 1) * k + j) as u32;
                    let d = base + ((i + 1) * k + j1) as u32;
                    // outward-oriented quad split; t decreases as the row
                    // index grows, which reverses the usual winding
                    tris.push([a, c, b]);
                    tris.push([b, c, d]);
                }
            }
            Ok(DoubledMap {
                n: 3,
                twisted,
                seam_gap,
                data: CapsuleData::Soup { values, tris },
            })
        }
        _ => unreachable!(),
    }
}

impl DoubledMap {
    fn probe(&self, case: DoubleCase) -> VecN {
        let idx = match (self.n, self.twisted, case) {
            (1, _, _) => 0,
            (_, true, _) => 1,
            (_, false, DoubleCase::Type0) => 0,
            (_, false, _) => 1,
        };
        VecN::basis(self.n, idx)
    }
}

/// Algebraic intersection number of the doubled map with the probe direction
/// for the given case.
pub fn doubled_zero_index(map: &DoubledMap, case: DoubleCase) -> Result<i64> {
    let d = map.probe(case);
    match &map.data {
        CapsuleData::Points { right, left } => {
            // oriented 0-sphere: +1 at the right point, -1 at the left
            let ds = d[0].signum();
            let mut total = 0;
            if (right - ds).abs() < 0.5 {
                total += ds as i64;
            }
            if (left - ds).abs() < 0.5 {
                total -= ds as i64;
            }
            Ok(total)
        }
        CapsuleData::Loop { lifted } => {
            // a closed loop crosses every direction the same net number of
            // times: the winding number
            Ok(((lifted.last().unwrap() - lifted[0]) / std::f64::consts::TAU).round() as i64)
        }
        CapsuleData::Soup { values, tris } => count_soup(values, tris, &d),
    }
}

// ---------------------------------------------------------------------------
// collar push
// ---------------------------------------------------------------------------

/// A field extended over a collar glued along one boundary component, with
/// the former boundary zeros pushed into the interior.
pub struct CollarPushed<'a> {
    pub manifold: &'a ModelManifold,
    pub component_id: usize,
    /// Geometric thickness of the collar embedding (the collar coordinate
    /// s in [0, 1] maps to this thickness).
    pub width: f64,
    /// Former boundary zeros, now interior zeros of the extended field.
    pub pushed_zeros: Vec<VecN>,
    /// Tangential local indices of the original field at those zeros.
    pub old_tangential: Vec<HalfInt>,
    /// +1 when the component is outward-type, -1 for inward-type.
    pub side_sign: f64,
    field: &'a FieldDef,
    shape: ComponentShape,
    bump_radius: f64,
}

impl CollarPushed<'_> {
    /// Collar coordinate s of an ambient point: s <= 0 inside the original
    /// manifold, s in (0, 1] inside the collar.
    pub fn collar_coord(&self, x: &VecN) -> f64 {
        -self.manifold.boundary_distance(x) / self.width
    }

    fn boundary_projection(&self, x: &VecN) -> VecN {
        match &self.shape {
            ComponentShape::Sphere { radius } => x.unit(1e-12).unwrap().scale(*radius),
            ComponentShape::Torus { major, minor } => {
                let (theta, psi) = crate::charts::torus_angles(x, *major);
                crate::charts::torus_point(theta, psi, *major, *minor)
            }
            _ => unreachable!("collar push is 3-dimensional only"),
        }
    }

    /// The extended field value at an ambient point of the enlarged domain.
    pub fn eval(&self, x: &VecN) -> Result<VecN> {
        let s = self.collar_coord(x);
        if s <= 0.0 {
            return eval_field(self.field, x);
        }
        let b = self.boundary_projection(x);
        let base = eval_field(self.field, &b)?;
        let dir = outward_normal(&self.shape, &b).scale(self.side_sign);
        let mut bump = 0.0;
        for z in &self.pushed_zeros {
            let d2 = b.dist(z).powi(2);
            bump += (self.bump_radius.powi(2) - d2).max(0.0);
        }
        Ok(base + dir.scale(s * bump))
    }
}

struct ExtendedField<'a>(&'a CollarPushed<'a>);

impl LocalField for ExtendedField<'_> {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, y: &VecN) -> Result<VecN> {
        self.0.eval(y)
    }
}

/// Glue a collar along boundary component `component_id` and extend the
/// field so that its boundary zeros become interior zeros (with local index
/// equal to the former tangential local index) and the new boundary carries
/// a uniform outward (resp. inward) field.
pub fn collar_push<'a>(
    m: &'a ModelManifold,
    field: &'a FieldDef,
    component_id: usize,
    params: &Params,
) -> Result<CollarPushed<'a>> {
    if m.dim < 3 {
        return Err(Error::HypothesisViolated {
            requirement: "collar push requires dimension >= 3".into(),
            witness: None,
        });
    }
    let comp = m
        .boundary
        .iter()
        .find(|c| c.id == component_id)
        .ok_or_else(|| Error::HypothesisViolated {
            requirement: format!("boundary component {component_id} exists"),
            witness: None,
        })?;
    let width = match &comp.shape {
        ComponentShape::Sphere { .. } => 1.0,
        // tube radius 2 would touch the torus axis; embed the unit collar
        // coordinate with a smaller geometric thickness
        ComponentShape::Torus { .. } => 0.8,
        _ => unreachable!(),
    };

    let boundary_zeros: Vec<VecN> = find_zeros(m, field, ZeroKind::BoundaryZeroOfV, params)?
        .into_iter()
        .filter(|z| z.component_id == Some(component_id))
        .map(|z| z.location)
        .collect();

    // classification: uniform sign away from the zeros
    let grid = boundary_grid(&comp.shape, params.grid_h.max(0.05));
    let clearance = 6.0 * params.grid_h.max(0.05);
    let mut has_pos = false;
    let mut has_neg = false;
    for q in grid.iter().step_by((grid.len() / 512).max(1)) {
        if boundary_zeros.iter().any(|z| z.dist(q) < clearance) {
            continue;
        }
        let vn = eval_field(field, q)?.dot(&outward_normal(&comp.shape, q));
        if vn > params.zero_tol {
            has_pos = true;
        } else if vn < -params.zero_tol {
            has_neg = true;
        }
    }
    let side_sign = match (has_pos, has_neg) {
        (true, false) => 1.0,
        (false, true) => -1.0,
        _ => {
            return Err(Error::HypothesisViolated {
                requirement: "component is uniformly outward- or inward-type away from zeros"
                    .into(),
                witness: None,
            })
        }
    };

    let mut min_dist = f64::INFINITY;
    for (i, a) in boundary_zeros.iter().enumerate() {
        for b in boundary_zeros.iter().skip(i + 1) {
            min_dist = min_dist.min(a.dist(b));
        }
    }
    let bump_radius = (0.5 * min_dist).min(0.45);

    let mut old_tangential = Vec::new();
    for z in &boundary_zeros {
        old_tangential.push(tangential_local_index(m, field, z, params)?);
    }

    Ok(CollarPushed {
        manifold: m,
        component_id,
        width,
        pushed_zeros: boundary_zeros,
        old_tangential,
        side_sign,
        field,
        shape: comp.shape.clone(),
        bump_radius,
    })
}

/// Interior local index of the extended field at a pushed zero.
pub fn pushed_zero_index(pushed: &CollarPushed<'_>, z: &VecN, params: &Params) -> Result<i64> {
    let ext = ExtendedField(pushed);
    let eps = params.epsilon.min(0.5 * pushed.bump_radius);
    let map = normalize_map(&ext, z, eps, Side::FullSphere, params)?;
    full_sphere_degree(&map, &VecN::basis(3, 0), params)
}

/// Verify that the new boundary of the extended domain has no zeros and a
/// uniform outward/inward field; returns the minimum |normal component|.
pub fn new_boundary_margin(pushed: &CollarPushed<'_>, params: &Params) -> Result<f64> {
    let grid = boundary_grid(&pushed.shape, params.grid_h.max(0.05));
    let mut min_abs = f64::INFINITY;
    for q in grid.iter().step_by((grid.len() / 1024).max(1)) {
        // scale the boundary point out to the new boundary
        let n_out = outward_normal(&pushed.shape, q);
        let x = *q + n_out.scale(pushed.width);
        let v = pushed.eval(&x)?;
        let vn = v.dot(&n_out) * pushed.side_sign;
        if vn <= params.zero_tol {
            return Err(Error::HypothesisViolated {
                requirement: "extended field is uniformly one-sided on the new boundary".into(),
                witness: Some(x),
            });
        }
        min_abs = min_abs.min(vn.abs());
    }
    Ok(min_abs)
}

// re-exported for verification convenience
pub use crate::indices::local_index_interior as interior_index;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ManifoldName;
    use crate::error::Result as CResult;
    use crate::fieldlang::parse_field;

    fn hemi_from(
        f: impl Fn(&VecN) -> VecN + 'static,
        n: usize,
        eps: f64,
    ) -> HemisphereMap {
        let field: Box<dyn LocalField> = match n {
            1 => Box::new((1usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })),
            2 => Box::new((2usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })),
            _ => Box::new((3usize, move |y: &VecN| -> CResult<VecN> { Ok(f(y)) })),
        };
        let a = VecN::basis(n, 0) + VecN::zero(n); // a = (1, 0, .., 0)
        let mut start = VecN::zero(n);
        start[0] = 1.0;
        debug_assert_eq!(a, start);
        normalize_map(field.as_ref(), &start, eps, Side::Hemisphere, &Params::default()).unwrap()
    }

    #[test]
    fn untwisted_radial_capsule_has_index_one() {
        // v = y - a around a type-0 zero: the doubled map is the outward
        // normal map of the capsule, intersection with e1 is
        // i(v,a;e1) + i(v,a;-e1) = 1 + 0
        let hemi = hemi_from(|y| *y - VecN::v2(1.0, 0.0), 2, 0.05);
        let dm = build_doubled_map(&hemi, false, &Params::default()).unwrap();
        assert!(dm.seam_gap < 0.1, "seam gap {}", dm.seam_gap);
        assert_eq!(doubled_zero_index(&dm, DoubleCase::Type0).unwrap(), 1);
    }

    #[test]
    fn twisted_flat_radial_vanishes_on_cylinder() {
        // the flat radial field is tangent to the boundary at the rim, so
        // the twisted interpolation vanishes at t = 0
        let hemi = hemi_from(|y| *y - VecN::v2(1.0, 0.0), 2, 0.05);
        match build_doubled_map(&hemi, true, &Params::default()) {
            Err(Error::ZeroOnCylinder { .. }) => {}
            other => panic!("expected ZeroOnCylinder, got {other:?}"),
        }
    }

    #[test]
    fn one_dimensional_doubles() {
        // v(y1) = y1 - 1: untwisted double has index 1 = 2 * (1/2),
        // twisted double has index 0
        let hemi = hemi_from(|y| VecN::v1(y[0] - 1.0), 1, 0.05);
        let untw = build_doubled_map(&hemi, false, &Params::default()).unwrap();
        assert_eq!(doubled_zero_index(&untw, DoubleCase::Type0).unwrap(), 1);
        let tw = build_doubled_map(&hemi, true, &Params::default()).unwrap();
        assert_eq!(doubled_zero_index(&tw, DoubleCase::Type0).unwrap(), 0);
    }

    #[test]
    fn collar_push_rejects_low_dimension() {
        let m = ModelManifold::get(ManifoldName::Disk2);
        let f = parse_field("(1, 0)", 2).unwrap();
        match collar_push(&m, &f, 0, &Params::default()) {
            Err(Error::HypothesisViolated { .. }) => {}
            Err(other) => panic!("expected HypothesisViolated, got {other:?}"),
            Ok(_) => panic!("expected HypothesisViolated, got a collar"),
        }
    }

    #[test]
    fn collar_push_outward_radial_is_vacuous() {
        let m = ModelManifold::get(ManifoldName::Ball3);
        let f = parse_field("(x1, x2, x3)", 3).unwrap();
        let params = Params::default();
        let pushed = collar_push(&m, &f, 0, &params).unwrap();
        assert!(pushed.pushed_zeros.is_empty());
        assert_eq!(pushed.side_sign, 1.0);
        // field agrees with the original inside the manifold
        let x = VecN::v3(0.2, -0.1, 0.4);
        assert_eq!(pushed.eval(&x).unwrap().as_slice(), x.as_slice());
        // uniform outward on the new boundary, no zeros
        let margin = new_boundary_margin(&pushed, &params).unwrap();
        assert!(margin > 0.5, "margin {margin}");
    }
}
