//! The fixed catalog of model manifolds.
//!
//! Six manifolds of dimension 1..=3, each with hand-verified Euler
//! characteristics and boundary parametrizations. The catalog is closed:
//! every entry needs verified charts, so extensibility is a non-goal.

use crate::error::{Error, Result};
use crate::geom::{orthonormal_frame, VecN};
use std::f64::consts::{PI, TAU};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ManifoldName {
    Interval,
    Disk2,
    Annulus,
    Pants,
    Ball3,
    SolidTorus,
}

impl ManifoldName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ManifoldName::Interval => "interval",
            ManifoldName::Disk2 => "disk2",
            ManifoldName::Annulus => "annulus",
            ManifoldName::Pants => "pants",
            ManifoldName::Ball3 => "ball3",
            ManifoldName::SolidTorus => "solidtorus",
        }
    }
}

impl fmt::Display for ManifoldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ManifoldName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "interval" => ManifoldName::Interval,
            "disk2" => ManifoldName::Disk2,
            "annulus" => ManifoldName::Annulus,
            "pants" => ManifoldName::Pants,
            "ball3" => ManifoldName::Ball3,
            "solidtorus" => ManifoldName::SolidTorus,
            other => return Err(Error::UnknownManifold(other.to_string())),
        })
    }
}

/// Geometry of one boundary component.
#[derive(Clone, Debug)]
pub enum ComponentShape {
    /// Endpoint of an interval; `inward` is the unit direction into the manifold.
    Point { x: f64, inward: f64 },
    /// Circle boundary in the plane. `inward_sign = +1` when the manifold lies
    /// toward the circle center (outer boundaries), `-1` when it lies away
    /// (holes / inner boundaries).
    Circle {
        center: VecN,
        radius: f64,
        inward_sign: f64,
    },
    /// Unit-ish sphere centered at the origin.
    Sphere { radius: f64 },
    /// Torus around the z-axis with the given major/minor radii.
    Torus { major: f64, minor: f64 },
}

#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    pub id: usize,
    pub euler: i64,
    pub shape: ComponentShape,
}

/// One of the six catalog manifolds.
#[derive(Clone, Debug)]
pub struct ModelManifold {
    pub name: ManifoldName,
    pub dim: usize,
    pub ambient_dim: usize,
    pub euler: i64,
    pub boundary: Vec<BoundaryComponent>,
}

// Fixed geometry constants for the catalog.
pub const ANNULUS_INNER: f64 = 1.0;
pub const ANNULUS_OUTER: f64 = 2.0;
pub const PANTS_OUTER: f64 = 3.0;
pub const PANTS_HOLE_RADIUS: f64 = 0.7;
pub const PANTS_HOLE_X: f64 = 1.2;
pub const TORUS_MAJOR: f64 = 2.0;
pub const TORUS_MINOR: f64 = 1.0;

impl ModelManifold {
    pub fn get(name: ManifoldName) -> ModelManifold {
        match name {
            ManifoldName::Interval => ModelManifold {
                name,
                dim: 1,
                ambient_dim: 1,
                euler: 1,
                boundary: vec![
                    BoundaryComponent {
                        id: 0,
                        euler: 1,
                        shape: ComponentShape::Point { x: 0.0, inward: 1.0 },
                    },
                    BoundaryComponent {
                        id: 1,
                        euler: 1,
                        shape: ComponentShape::Point { x: 1.0, inward: -1.0 },
                    },
                ],
            },
            ManifoldName::Disk2 => ModelManifold {
                name,
                dim: 2,
                ambient_dim: 2,
                euler: 1,
                boundary: vec![BoundaryComponent {
                    id: 0,
                    euler: 0,
                    shape: ComponentShape::Circle {
                        center: VecN::v2(0.0, 0.0),
                        radius: 1.0,
                        inward_sign: 1.0,
                    },
                }],
            },
            ManifoldName::Annulus => ModelManifold {
                name,
                dim: 2,
                ambient_dim: 2,
                euler: 0,
                boundary: vec![
                    BoundaryComponent {
                        id: 0,
                        euler: 0,
                        shape: ComponentShape::Circle {
                            center: VecN::v2(0.0, 0.0),
                            radius: ANNULUS_INNER,
                            inward_sign: -1.0,
                        },
                    },
                    BoundaryComponent {
                        id: 1,
                        euler: 0,
                        shape: ComponentShape::Circle {
                            center: VecN::v2(0.0, 0.0),
                            radius: ANNULUS_OUTER,
                            inward_sign: 1.0,
                        },
                    },
                ],
            },
            ManifoldName::Pants => ModelManifold {
                name,
                dim: 2,
                ambient_dim: 2,
                euler: -1,
                boundary: vec![
                    BoundaryComponent {
                        id: 0,
                        euler: 0,
                        shape: ComponentShape::Circle {
                            center: VecN::v2(0.0, 0.0),
                            radius: PANTS_OUTER,
                            inward_sign: 1.0,
                        },
                    },
                    BoundaryComponent {
                        id: 1,
                        euler: 0,
                        shape: ComponentShape::Circle {
                            center: VecN::v2(-PANTS_HOLE_X, 0.0),
                            radius: PANTS_HOLE_RADIUS,
                            inward_sign: -1.0,
                        },
                    },
                    BoundaryComponent {
                        id: 2,
                        euler: 0,
                        shape: ComponentShape::Circle {
                            center: VecN::v2(PANTS_HOLE_X, 0.0),
                            radius: PANTS_HOLE_RADIUS,
                            inward_sign: -1.0,
                        },
                    },
                ],
            },
            ManifoldName::Ball3 => ModelManifold {
                name,
                dim: 3,
                ambient_dim: 3,
                euler: 1,
                boundary: vec![BoundaryComponent {
                    id: 0,
                    euler: 2,
                    shape: ComponentShape::Sphere { radius: 1.0 },
                }],
            },
            ManifoldName::SolidTorus => ModelManifold {
                name,
                dim: 3,
                ambient_dim: 3,
                euler: 0,
                boundary: vec![BoundaryComponent {
                    id: 0,
                    euler: 0,
                    shape: ComponentShape::Torus {
                        major: TORUS_MAJOR,
                        minor: TORUS_MINOR,
                    },
                }],
            },
        }
    }

    /// Euler characteristic of the whole boundary.
    pub fn boundary_euler(&self) -> i64 {
        self.boundary.iter().map(|c| c.euler).sum()
    }

    /// Signed distance to the boundary: positive inside, zero on the
    /// boundary, negative outside.
    pub fn boundary_distance(&self, p: &VecN) -> f64 {
        match self.name {
            ManifoldName::Interval => p[0].min(1.0 - p[0]),
            ManifoldName::Disk2 => 1.0 - p.norm(),
            ManifoldName::Annulus => {
                let r = p.norm();
                (r - ANNULUS_INNER).min(ANNULUS_OUTER - r)
            }
            ManifoldName::Pants => {
                let d_outer = PANTS_OUTER - p.norm();
                let d1 = p.dist(&VecN::v2(-PANTS_HOLE_X, 0.0)) - PANTS_HOLE_RADIUS;
                let d2 = p.dist(&VecN::v2(PANTS_HOLE_X, 0.0)) - PANTS_HOLE_RADIUS;
                d_outer.min(d1).min(d2)
            }
            ManifoldName::Ball3 => 1.0 - p.norm(),
            ManifoldName::SolidTorus => TORUS_MINOR - tube_distance(p),
        }
    }

    pub fn contains(&self, p: &VecN) -> bool {
        p.dim() == self.ambient_dim && self.boundary_distance(p) >= -1e-12
    }

    /// Which boundary component (if any) the point lies on, within `tol`.
    pub fn boundary_component_of(&self, p: &VecN, tol: f64) -> Option<&BoundaryComponent> {
        self.boundary.iter().find(|c| match &c.shape {
            ComponentShape::Point { x, .. } => (p[0] - x).abs() <= tol,
            ComponentShape::Circle { center, radius, .. } => (p.dist(center) - radius).abs() <= tol,
            ComponentShape::Sphere { radius } => (p.norm() - radius).abs() <= tol,
            ComponentShape::Torus { minor, .. } => (tube_distance(p) - minor).abs() <= tol,
        })
    }

    /// Axis-aligned bounding box of the manifold (lo, hi per axis).
    pub fn bounding_box(&self) -> (VecN, VecN) {
        match self.name {
            ManifoldName::Interval => (VecN::v1(0.0), VecN::v1(1.0)),
            ManifoldName::Disk2 => (VecN::v2(-1.0, -1.0), VecN::v2(1.0, 1.0)),
            ManifoldName::Annulus => (
                VecN::v2(-ANNULUS_OUTER, -ANNULUS_OUTER),
                VecN::v2(ANNULUS_OUTER, ANNULUS_OUTER),
            ),
            ManifoldName::Pants => (
                VecN::v2(-PANTS_OUTER, -PANTS_OUTER),
                VecN::v2(PANTS_OUTER, PANTS_OUTER),
            ),
            ManifoldName::Ball3 => (VecN::v3(-1.0, -1.0, -1.0), VecN::v3(1.0, 1.0, 1.0)),
            ManifoldName::SolidTorus => {
                let r = TORUS_MAJOR + TORUS_MINOR;
                (VecN::v3(-r, -r, -TORUS_MINOR), VecN::v3(r, r, TORUS_MINOR))
            }
        }
    }
}

/// Distance from the solid torus center circle to `p` inside the tube plane.
pub fn tube_distance(p: &VecN) -> f64 {
    let sigma = (p[0] * p[0] + p[1] * p[1]).sqrt();
    ((sigma - TORUS_MAJOR).powi(2) + p[2] * p[2]).sqrt()
}

/// Outward unit normal of the manifold at a boundary point of the component.
pub fn outward_normal(shape: &ComponentShape, p: &VecN) -> VecN {
    match shape {
        ComponentShape::Point { inward, .. } => VecN::v1(-inward),
        ComponentShape::Circle {
            center,
            inward_sign,
            ..
        } => (*p - *center).unit(1e-12).expect("point at circle center").scale(*inward_sign),
        ComponentShape::Sphere { .. } => p.unit(1e-12).expect("point at sphere center"),
        ComponentShape::Torus { major, .. } => {
            let sigma = (p[0] * p[0] + p[1] * p[1]).sqrt();
            let c = VecN::v3(major * p[0] / sigma, major * p[1] / sigma, 0.0);
            (*p - c).unit(1e-12).expect("point on center circle")
        }
    }
}

/// Dimension of the boundary component's parameter space (0, 1 or 2).
pub fn param_dim(shape: &ComponentShape) -> usize {
    match shape {
        ComponentShape::Point { .. } => 0,
        ComponentShape::Circle { .. } => 1,
        ComponentShape::Sphere { .. } | ComponentShape::Torus { .. } => 2,
    }
}

/// A local arclength-scaled parametrization of the boundary around a point,
/// used for zero refinement and isolation certificates. `u` has `param_dim`
/// entries; `u = 0` maps to the anchor point.
pub fn local_boundary_param(shape: &ComponentShape, anchor: &VecN) -> impl Fn(&[f64]) -> VecN {
    let shape = shape.clone();
    let anchor = *anchor;
    move |u: &[f64]| match &shape {
        ComponentShape::Point { x, .. } => VecN::v1(*x),
        ComponentShape::Circle { center, radius, .. } => {
            let theta0 = (anchor[1] - center[1]).atan2(anchor[0] - center[0]);
            let theta = theta0 + u[0] / radius;
            *center + VecN::v2(radius * theta.cos(), radius * theta.sin())
        }
        ComponentShape::Sphere { radius } => {
            let n = anchor.unit(1e-12).unwrap();
            let (t2, t3) = orthonormal_frame(&n);
            let w = t2.scale(u[0]) + t3.scale(u[1]);
            let phi = w.norm() / radius;
            if phi < 1e-300 {
                return n.scale(*radius);
            }
            let wh = w.unit(1e-300).unwrap();
            (n.scale(phi.cos()) + wh.scale(phi.sin())).scale(*radius)
        }
        ComponentShape::Torus { major, minor } => {
            let (theta0, psi0) = torus_angles(&anchor, *major);
            let a_theta = major + minor * psi0.cos();
            let theta = theta0 + u[0] / a_theta;
            let psi = psi0 + u[1] / minor;
            torus_point(theta, psi, *major, *minor)
        }
    }
}

pub fn torus_angles(p: &VecN, major: f64) -> (f64, f64) {
    let theta = p[1].atan2(p[0]);
    let sigma = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let psi = p[2].atan2(sigma - major);
    (theta, psi)
}

pub fn torus_point(theta: f64, psi: f64, major: f64, minor: f64) -> VecN {
    let s = major + minor * psi.cos();
    VecN::v3(s * theta.cos(), s * theta.sin(), minor * psi.sin())
}

/// Grid of boundary sample points for scanning, roughly `h`-spaced.
pub fn boundary_grid(shape: &ComponentShape, h: f64) -> Vec<VecN> {
    match shape {
        ComponentShape::Point { x, .. } => vec![VecN::v1(*x)],
        ComponentShape::Circle { center, radius, .. } => {
            let n = ((TAU * radius / h).ceil() as usize).max(16);
            (0..n)
                .map(|k| {
                    let theta = TAU * k as f64 / n as f64;
                    *center + VecN::v2(radius * theta.cos(), radius * theta.sin())
                })
                .collect()
        }
        ComponentShape::Sphere { radius } => {
            // octahedral geodesic vertices at a level matching the spacing
            let level = ((PI / 2.0 / h).log2().ceil() as usize).clamp(3, 8);
            let (verts, _) = octa_sphere(level);
            verts.into_iter().map(|v| v.scale(*radius)).collect()
        }
        ComponentShape::Torus { major, minor } => {
            let n_theta = ((TAU * (major + minor) / h).ceil() as usize).max(16);
            let n_psi = ((TAU * minor / h).ceil() as usize).max(16);
            let mut out = Vec::with_capacity(n_theta * n_psi);
            for i in 0..n_theta {
                let theta = TAU * i as f64 / n_theta as f64;
                for j in 0..n_psi {
                    let psi = TAU * j as f64 / n_psi as f64;
                    out.push(torus_point(theta, psi, *major, *minor));
                }
            }
            out
        }
    }
}

/// Subdivided octahedron on the unit sphere: (vertices, triangles).
/// Triangles are oriented outward (counterclockwise seen from outside).
pub fn octa_sphere(level: usize) -> (Vec<VecN>, Vec<[u32; 3]>) {
    let mut verts = vec![
        VecN::v3(1.0, 0.0, 0.0),
        VecN::v3(-1.0, 0.0, 0.0),
        VecN::v3(0.0, 1.0, 0.0),
        VecN::v3(0.0, -1.0, 0.0),
        VecN::v3(0.0, 0.0, 1.0),
        VecN::v3(0.0, 0.0, -1.0),
    ];
    let mut tris: Vec<[u32; 3]> = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    subdivide(&mut verts, &mut tris, level);
    (verts, tris)
}

/// 4-way geodesic subdivision with shared-edge midpoint caching.
pub fn subdivide(verts: &mut Vec<VecN>, tris: &mut Vec<[u32; 3]>, levels: usize) {
    use std::collections::HashMap;
    for _ in 0..levels {
        let mut cache: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, verts: &mut Vec<VecN>| -> u32 {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let m = (verts[a as usize] + verts[b as usize]).unit(1e-300).unwrap();
                verts.push(m);
                (verts.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for &[a, b, c] in tris.iter() {
            let ab = midpoint(a, b, verts);
            let bc = midpoint(b, c, verts);
            let ca = midpoint(c, a, verts);
            next.push([a, ab, ca]);
            next.push([ab, b, bc]);
            next.push([ca, bc, c]);
            next.push([ab, bc, ca]);
        }
        *tris = next;
    }
}
