//! Boundary-adapted local charts.
//!
//! Around a boundary point `p` the chart maps a neighborhood of `p` in the
//! manifold to the half-space `y1 >= 1` in chart coordinates, with the
//! boundary on the hyperplane `y1 = 1`, the interior at `y1 > 1`, and
//! `p` itself at `a = (1, 0, .., 0)`. Tangential coordinates are arclength
//! scaled at `p`. Within one manifold every chart has the same handedness,
//! so chart bases are positively oriented for a single orientation of the
//! manifold.

use crate::charts::manifolds::{
    outward_normal, torus_angles, ComponentShape, ModelManifold,
};
use crate::error::{Error, Result};
use crate::fieldlang::{eval_field, FieldDef};
use crate::geom::{orthonormal_frame, wrap_angle, MatN, VecN};

/// A field expressed in chart-local coordinates. This is the object the
/// degree engine consumes; implementations must be pure.
pub trait LocalField {
    fn dim(&self) -> usize;
    fn eval(&self, y: &VecN) -> Result<VecN>;
}

impl<F> LocalField for (usize, F)
where
    F: Fn(&VecN) -> Result<VecN>,
{
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, y: &VecN) -> Result<VecN> {
        (self.1)(y)
    }
}

#[derive(Clone, Debug)]
enum ChartKind {
    /// y1 = 1 + inward*(x - x0)
    Interval { x0: f64, inward: f64 },
    /// Circle boundary: y1 = 1 + s*(R - r), y2 = arclength along the circle.
    /// `tangent_dir` is +-1 and fixes the arclength direction so that all
    /// charts of one manifold share a handedness.
    Circle {
        center: VecN,
        radius: f64,
        inward_sign: f64,
        theta0: f64,
        tangent_dir: f64,
    },
    /// Sphere boundary: y1 = 1 + (R - rho), (y2, y3) = exponential-map
    /// coordinates on the sphere in the frame (t2, t3).
    Sphere { radius: f64, pole: VecN, t2: VecN, t3: VecN },
    /// Torus boundary: y1 = 1 + (minor - tau), y2/y3 arclength in the
    /// azimuthal/tube angles.
    Torus {
        major: f64,
        minor: f64,
        theta0: f64,
        psi0: f64,
    },
}

/// Boundary-adapted chart at a boundary point.
#[derive(Clone, Debug)]
pub struct BoundaryChart {
    pub center: VecN,
    pub n: usize,
    pub component_id: usize,
    /// Sign of det(d from_chart) at the center: the ambient handedness of the
    /// chart basis. Constant per manifold.
    pub orientation_sign: f64,
    /// Largest chart radius with a well-defined inverse.
    pub max_radius: f64,
    kind: ChartKind,
}

impl BoundaryChart {
    /// The distinguished chart center `a = (1, 0, .., 0)`.
    pub fn a(&self) -> VecN {
        let mut a = VecN::zero(self.n);
        a[0] = 1.0;
        a
    }

    pub fn from_chart(&self, y: &VecN) -> VecN {
        match &self.kind {
            ChartKind::Interval { x0, inward } => VecN::v1(x0 + inward * (y[0] - 1.0)),
            ChartKind::Circle {
                center,
                radius,
                inward_sign,
                theta0,
                tangent_dir,
            } => {
                let r = radius - inward_sign * (y[0] - 1.0);
                let theta = theta0 + tangent_dir * y[1] / radius;
                *center + VecN::v2(r * theta.cos(), r * theta.sin())
            }
            ChartKind::Sphere { radius, pole, t2, t3 } => {
                let rho = radius - (y[0] - 1.0);
                let w = t2.scale(y[1]) + t3.scale(y[2]);
                let phi = w.norm() / radius;
                let u = if phi < 1e-14 {
                    *pole
                } else {
                    let wh = w.unit(1e-300).unwrap();
                    pole.scale(phi.cos()) + wh.scale(phi.sin())
                };
                u.scale(rho)
            }
            ChartKind::Torus {
                major,
                minor,
                theta0,
                psi0,
            } => {
                let tau = minor - (y[0] - 1.0);
                let a_theta = major + minor * psi0.cos();
                let theta = theta0 + y[1] / a_theta;
                let psi = psi0 + y[2] / minor;
                let s = major + tau * psi.cos();
                VecN::v3(s * theta.cos(), s * theta.sin(), tau * psi.sin())
            }
        }
    }

    pub fn to_chart(&self, x: &VecN) -> VecN {
        match &self.kind {
            ChartKind::Interval { x0, inward } => VecN::v1(1.0 + inward * (x[0] - x0)),
            ChartKind::Circle {
                center,
                radius,
                inward_sign,
                theta0,
                tangent_dir,
            } => {
                let d = *x - *center;
                let r = d.norm();
                let theta = d[1].atan2(d[0]);
                VecN::v2(
                    1.0 + inward_sign * (radius - r),
                    tangent_dir * radius * wrap_angle(theta - theta0),
                )
            }
            ChartKind::Sphere { radius, pole, t2, t3 } => {
                let rho = x.norm();
                let u = x.scale(1.0 / rho);
                let c = u.dot(pole).clamp(-1.0, 1.0);
                let phi = c.acos();
                let w = u - pole.scale(c);
                let (y2, y3) = match w.unit(1e-14) {
                    Some(wh) => (radius * phi * wh.dot(t2), radius * phi * wh.dot(t3)),
                    None => (0.0, 0.0),
                };
                VecN::v3(1.0 + (radius - rho), y2, y3)
            }
            ChartKind::Torus {
                major,
                minor,
                theta0,
                psi0,
            } => {
                let (theta, psi) = torus_angles(x, *major);
                let sigma = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let tau = ((sigma - major).powi(2) + x[2] * x[2]).sqrt();
                let a_theta = major + minor * psi0.cos();
                VecN::v3(
                    1.0 + (minor - tau),
                    a_theta * wrap_angle(theta - theta0),
                    minor * wrap_angle(psi - psi0),
                )
            }
        }
    }

    /// Jacobian of `from_chart` at chart point `y` (columns are the pushforwards
    /// of the chart basis vectors into ambient coordinates).
    pub fn jacobian_from(&self, y: &VecN) -> MatN {
        match &self.kind {
            ChartKind::Interval { inward, .. } => {
                let mut m = MatN::zero(1);
                m.set(0, 0, *inward);
                m
            }
            ChartKind::Circle {
                radius,
                inward_sign,
                theta0,
                tangent_dir,
                ..
            } => {
                let r = radius - inward_sign * (y[0] - 1.0);
                let theta = theta0 + tangent_dir * y[1] / radius;
                let (s, c) = theta.sin_cos();
                MatN::from_cols(&[
                    VecN::v2(-inward_sign * c, -inward_sign * s),
                    VecN::v2(-tangent_dir * r * s / radius, tangent_dir * r * c / radius),
                ])
            }
            ChartKind::Sphere { radius, pole, t2, t3 } => {
                let rho = radius - (y[0] - 1.0);
                let z = VecN::v2(y[1], y[2]);
                let phi = z.norm() / radius;
                // u(z) = cos(phi) pole + g(phi) (z2 t2 + z3 t3)/radius,
                // g(phi) = sin(phi)/phi
                let (u, du2, du3) = if phi < 1e-7 {
                    // series: g ~ 1 - phi^2/6, derivatives collapse to t_i/radius
                    let u = *pole;
                    (u, t2.scale(1.0 / radius), t3.scale(1.0 / radius))
                } else {
                    let tz = t2.scale(y[1]) + t3.scale(y[2]);
                    let g = phi.sin() / phi;
                    let gp = (phi.cos() * phi - phi.sin()) / (phi * phi);
                    let u = pole.scale(phi.cos()) + tz.scale(g / radius);
                    // d phi / d z_i = z_i / (radius^2 * phi)
                    let dphi2 = y[1] / (radius * radius * phi);
                    let dphi3 = y[2] / (radius * radius * phi);
                    let du2 = pole.scale(-phi.sin() * dphi2)
                        + tz.scale(gp * dphi2 / radius)
                        + t2.scale(g / radius);
                    let du3 = pole.scale(-phi.sin() * dphi3)
                        + tz.scale(gp * dphi3 / radius)
                        + t3.scale(g / radius);
                    (u, du2, du3)
                };
                MatN::from_cols(&[-u, du2.scale(rho), du3.scale(rho)])
            }
            ChartKind::Torus {
                major,
                minor,
                theta0,
                psi0,
            } => {
                let tau = minor - (y[0] - 1.0);
                let a_theta = major + minor * psi0.cos();
                let theta = theta0 + y[1] / a_theta;
                let psi = psi0 + y[2] / minor;
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = psi.sin_cos();
                let s = major + tau * cp;
                // d x / d y1 = -(cp ct, cp st, sp)
                // d x / d y2 = (-s st, s ct, 0) / a_theta
                // d x / d y3 = (-tau sp ct, -tau sp st, tau cp) / minor
                MatN::from_cols(&[
                    VecN::v3(-cp * ct, -cp * st, -sp),
                    VecN::v3(-s * st / a_theta, s * ct / a_theta, 0.0),
                    VecN::v3(-tau * sp * ct / minor, -tau * sp * st / minor, tau * cp / minor),
                ])
            }
        }
    }

    /// Push an ambient vector at `from_chart(y)` forward into chart coordinates.
    pub fn push_vector(&self, y: &VecN, ambient_vec: &VecN) -> Result<VecN> {
        self.jacobian_from(y)
            .solve(ambient_vec)
            .ok_or(Error::ChartRadiusTooSmall {
                requested: (*y - self.a()).norm(),
                max: self.max_radius,
            })
    }

    pub fn check_radius(&self, eps: f64) -> Result<()> {
        if eps > self.max_radius {
            Err(Error::ChartRadiusTooSmall {
                requested: eps,
                max: self.max_radius,
            })
        } else {
            Ok(())
        }
    }
}

/// Construct the boundary-adapted chart of `m` at the boundary point `p`.
pub fn boundary_chart(m: &ModelManifold, p: &VecN) -> Result<BoundaryChart> {
    let comp = m
        .boundary_component_of(p, 1e-9)
        .ok_or_else(|| Error::NotOnBoundary {
            manifold: m.name.to_string(),
            point: *p,
        })?;
    let (kind, max_radius, orientation_sign) = match &comp.shape {
        ComponentShape::Point { x, inward } => {
            (ChartKind::Interval { x0: *x, inward: *inward }, 0.9, *inward)
        }
        ComponentShape::Circle {
            center,
            radius,
            inward_sign,
        } => {
            let d = *p - *center;
            let theta0 = d[1].atan2(d[0]);
            // tangent_dir chosen so that det(jacobian) is negative for every
            // chart of the manifold: counterclockwise on outer boundaries,
            // clockwise on holes.
            let tangent_dir = *inward_sign;
            (
                ChartKind::Circle {
                    center: *center,
                    radius: *radius,
                    inward_sign: *inward_sign,
                    theta0,
                    tangent_dir,
                },
                0.45 * radius.min(1.0),
                -1.0,
            )
        }
        ComponentShape::Sphere { radius } => {
            let pole = p.unit(1e-12).unwrap();
            let (t2, t3) = orthonormal_frame(&pole);
            (
                ChartKind::Sphere {
                    radius: *radius,
                    pole,
                    t2,
                    t3,
                },
                0.45 * radius,
                -1.0,
            )
        }
        ComponentShape::Torus { major, minor } => {
            let (theta0, psi0) = torus_angles(p, *major);
            (
                ChartKind::Torus {
                    major: *major,
                    minor: *minor,
                    theta0,
                    psi0,
                },
                0.45 * minor,
                -1.0,
            )
        }
    };
    // project the center onto the boundary exactly so that to_chart(center) = a
    let chart = BoundaryChart {
        center: *p,
        n: m.dim,
        component_id: comp.id,
        orientation_sign,
        max_radius,
        kind,
    };
    Ok(chart)
}

/// The chart-local field `v(y) = J_from(y)^{-1} V(from_chart(y))`.
pub struct PushforwardField<'a> {
    pub chart: BoundaryChart,
    pub field: &'a FieldDef,
}

impl LocalField for PushforwardField<'_> {
    fn dim(&self) -> usize {
        self.chart.n
    }
    fn eval(&self, y: &VecN) -> Result<VecN> {
        let x = self.chart.from_chart(y);
        let v = eval_field(self.field, &x)?;
        self.chart.push_vector(y, &v)
    }
}

/// Chart-local tangential/normal split of the field at a boundary point `q`
/// in the chart domain: returns `(tangential, normal)` chart vectors whose
/// sum is the full chart-local vector at `q`.
pub fn boundary_decompose(
    chart: &BoundaryChart,
    field: &FieldDef,
    q: &VecN,
) -> Result<(VecN, VecN)> {
    let y = chart.to_chart(q);
    if (y[0] - 1.0).abs() > 1e-9 {
        return Err(Error::NotOnBoundary {
            manifold: String::from("chart domain"),
            point: *q,
        });
    }
    let v = PushforwardField {
        chart: chart.clone(),
        field,
    }
    .eval(&y)?;
    let mut tangential = v;
    tangential[0] = 0.0;
    let mut normal = VecN::zero(v.dim());
    normal[0] = v[0];
    Ok((tangential, normal))
}

/// Ambient-space orthogonal split against the outward normal:
/// `V = tangential + (V . n_out) n_out`. The zero sets of either part agree
/// with the chart-metric split; only the vector values differ.
pub fn ambient_decompose(shape: &ComponentShape, field: &FieldDef, q: &VecN) -> Result<(VecN, f64)> {
    let v = eval_field(field, q)?;
    if q.dim() == 1 {
        // the whole vector is normal on a 0-dimensional boundary
        let n_out = outward_normal(shape, q);
        return Ok((VecN::v1(0.0), v.dot(&n_out)));
    }
    let n_out = outward_normal(shape, q);
    let vn = v.dot(&n_out);
    Ok((v - n_out.scale(vn), vn))
}

/// Identity chart for interior points: chart coordinates are the ambient ones.
pub struct AmbientField<'a> {
    pub field: &'a FieldDef,
}

impl LocalField for AmbientField<'_> {
    fn dim(&self) -> usize {
        self.field.ambient_dim
    }
    fn eval(&self, y: &VecN) -> Result<VecN> {
        eval_field(self.field, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::manifolds::{torus_point, ManifoldName};
    use crate::fieldlang::parse_field;

    fn get(m: ManifoldName) -> ModelManifold {
        ModelManifold::get(m)
    }

    #[test]
    fn disk_chart_canonical_values() {
        let m = get(ManifoldName::Disk2);
        let c = boundary_chart(&m, &VecN::v2(1.0, 0.0)).unwrap();
        let y = c.to_chart(&VecN::v2(1.0, 0.0));
        assert!(y.dist(&VecN::v2(1.0, 0.0)) < 1e-12);
        let y = c.to_chart(&VecN::v2(0.9, 0.0));
        assert!(y.dist(&VecN::v2(1.1, 0.0)) < 1e-12);
    }

    #[test]
    fn interval_chart_is_shifted_coordinate() {
        let m = get(ManifoldName::Interval);
        let c = boundary_chart(&m, &VecN::v1(0.0)).unwrap();
        assert!((c.to_chart(&VecN::v1(0.25))[0] - 1.25).abs() < 1e-15);
        let f = parse_field("(x1)", 1).unwrap();
        let pf = PushforwardField { chart: c, field: &f };
        // v(y1) = y1 - 1
        for y1 in [1.0, 1.1, 1.5] {
            let v = pf.eval(&VecN::v1(y1)).unwrap();
            assert!((v[0] - (y1 - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn not_on_boundary() {
        let m = get(ManifoldName::Disk2);
        match boundary_chart(&m, &VecN::v2(0.0, 0.0)) {
            Err(Error::NotOnBoundary { .. }) => {}
            other => panic!("expected NotOnBoundary, got {other:?}"),
        }
    }

    #[test]
    fn constant_field_points_inward_in_chart_at_east_pole() {
        let m = get(ManifoldName::Disk2);
        let c = boundary_chart(&m, &VecN::v2(1.0, 0.0)).unwrap();
        let f = parse_field("(1, 0)", 2).unwrap();
        let pf = PushforwardField { chart: c.clone(), field: &f };
        let v = pf.eval(&c.a()).unwrap();
        assert!(v[0] < 0.0, "outward ambient vector must have negative chart-normal part");
        assert!((v[0] + 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
    }

    #[test]
    fn boundary_zero_of_field_maps_to_zero() {
        let m = get(ManifoldName::Disk2);
        let c = boundary_chart(&m, &VecN::v2(1.0, 0.0)).unwrap();
        let f = parse_field("(x1 - 1, x2)", 2).unwrap();
        let pf = PushforwardField { chart: c.clone(), field: &f };
        let v = pf.eval(&c.a()).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn decompose_constant_field_on_circle() {
        let m = get(ManifoldName::Disk2);
        let f = parse_field("(1, 0)", 2).unwrap();
        for &theta in &[0.3f64, 1.2, 2.5, -0.7, 3.0] {
            let q = VecN::v2(theta.cos(), theta.sin());
            let c = boundary_chart(&m, &q).unwrap();
            let (tang, norm) = boundary_decompose(&c, &f, &q).unwrap();
            // tangential magnitude -sin(theta) in the counterclockwise direction,
            // chart-normal component -cos(theta) (inward positive)
            assert!((tang[1] - (-theta.sin())).abs() < 1e-10, "theta={theta}");
            assert!((norm[0] - (-theta.cos())).abs() < 1e-10, "theta={theta}");
            // exact reconstruction
            let y = c.to_chart(&q);
            let v = PushforwardField { chart: c.clone(), field: &f }.eval(&y).unwrap();
            assert!((tang + norm).dist(&v) < 1e-12);
        }
    }

    #[test]
    fn radial_minus_one_field_normal_defect() {
        // V = (x1-1, x2) at angle theta points outward with normal magnitude
        // 1 - cos(theta) >= 0, so the inward-positive chart component is its
        // negative
        let m = get(ManifoldName::Disk2);
        let f = parse_field("(x1 - 1, x2)", 2).unwrap();
        for &theta in &[0.4f64, 1.0, 2.0] {
            let q = VecN::v2(theta.cos(), theta.sin());
            let c = boundary_chart(&m, &q).unwrap();
            let (_, norm) = boundary_decompose(&c, &f, &q).unwrap();
            assert!((norm[0] - (theta.cos() - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn chart_roundtrip_all_manifolds() {
        let probes: Vec<(ManifoldName, VecN)> = vec![
            (ManifoldName::Interval, VecN::v1(0.0)),
            (ManifoldName::Interval, VecN::v1(1.0)),
            (ManifoldName::Disk2, VecN::v2(0.6f64.cos(), 0.6f64.sin())),
            (ManifoldName::Annulus, VecN::v2(2.0 * 0.9f64.cos(), 2.0 * 0.9f64.sin())),
            (ManifoldName::Annulus, VecN::v2(1.0 * 2.2f64.cos(), 1.0 * 2.2f64.sin())),
            (
                ManifoldName::Pants,
                VecN::v2(-1.2 + 0.7 * 1.3f64.cos(), 0.7 * 1.3f64.sin()),
            ),
            (ManifoldName::Ball3, VecN::v3(0.0, 0.6, 0.8)),
            (
                ManifoldName::SolidTorus,
                torus_point(0.7, 1.9, 2.0, 1.0),
            ),
        ];
        for (name, p) in probes {
            let m = get(name);
            let c = boundary_chart(&m, &p).unwrap();
            assert!(c.to_chart(&p).dist(&c.a()) < 1e-9, "{name}: center maps to a");
            // sample chart points, map down and back
            let n = m.dim;
            for k in 0..40 {
                let t = k as f64 / 40.0 * std::f64::consts::TAU;
                let mut y = c.a();
                y[0] += 0.03 * (1.0 + (0.5 * t).sin().abs());
                if n >= 2 {
                    y[1] = 0.04 * t.cos();
                }
                if n >= 3 {
                    y[2] = 0.04 * t.sin();
                }
                let x = c.from_chart(&y);
                let back = c.to_chart(&x);
                assert!(back.dist(&y) < 1e-10, "{name}: roundtrip at {y:?} gave {back:?}");
                assert!(m.boundary_distance(&x) > -1e-9, "{name}: chart image left the manifold");
            }
            // boundary points map to y1 = 1, interior points to y1 > 1
            for k in 0..1000 {
                let t = k as f64 / 1000.0 * std::f64::consts::TAU;
                let mut y = c.a();
                if n >= 2 {
                    y[1] = 0.05 * t.cos();
                }
                if n >= 3 {
                    y[2] = 0.05 * t.sin();
                }
                let on_boundary = c.from_chart(&y);
                let yy = c.to_chart(&on_boundary);
                assert!((yy[0] - 1.0).abs() < 1e-9);
                y[0] += 1e-3 + 0.02 * (t.sin() * t.sin());
                let inside = c.from_chart(&y);
                assert!(c.to_chart(&inside)[0] > 1.0);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let cases: Vec<(ManifoldName, VecN)> = vec![
            (ManifoldName::Disk2, VecN::v2(0.3f64.cos(), 0.3f64.sin())),
            (ManifoldName::Ball3, VecN::v3(0.48, -0.6, 0.64).unit(0.0).unwrap()),
            (ManifoldName::SolidTorus, torus_point(-0.4, 0.9, 2.0, 1.0)),
        ];
        for (name, p) in cases {
            let m = get(name);
            let c = boundary_chart(&m, &p).unwrap();
            let mut y = c.a();
            y[0] += 0.02;
            if m.dim >= 2 {
                y[1] = -0.015;
            }
            if m.dim >= 3 {
                y[2] = 0.01;
            }
            let jac = c.jacobian_from(&y);
            let h = 1e-6;
            for j in 0..m.dim {
                let mut yp = y;
                let mut ym = y;
                yp[j] += h;
                ym[j] -= h;
                let fd = (c.from_chart(&yp) - c.from_chart(&ym)).scale(1.0 / (2.0 * h));
                assert!(
                    fd.dist(&jac.col(j)) < 1e-7,
                    "{name}: jacobian column {j} mismatch: {fd:?} vs {:?}",
                    jac.col(j)
                );
            }
        }
    }

    #[test]
    fn chart_handedness_uniform_per_manifold() {
        for name in [
            ManifoldName::Disk2,
            ManifoldName::Annulus,
            ManifoldName::Pants,
            ManifoldName::Ball3,
            ManifoldName::SolidTorus,
        ] {
            let m = get(name);
            let mut dets = Vec::new();
            for comp in &m.boundary {
                for q in crate::charts::manifolds::boundary_grid(&comp.shape, 0.4) {
                    let c = boundary_chart(&m, &q).unwrap();
                    dets.push(c.jacobian_from(&c.a()).det());
                }
            }
            assert!(
                dets.iter().all(|d| d.signum() == dets[0].signum()),
                "{name}: mixed chart handedness"
            );
        }
    }
}
