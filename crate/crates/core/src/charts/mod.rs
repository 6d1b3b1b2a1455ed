//! Model manifold catalog, boundary-adapted charts, and zero location.

mod chart;
mod manifolds;
mod zeros;

pub use chart::{
    ambient_decompose, boundary_chart, boundary_decompose, AmbientField, BoundaryChart,
    LocalField, PushforwardField,
};
pub use manifolds::{
    boundary_grid, local_boundary_param, octa_sphere, outward_normal, param_dim, subdivide,
    torus_angles, torus_point, tube_distance, BoundaryComponent, ComponentShape, ManifoldName,
    ModelManifold,
};
pub use zeros::{classify_boundary_zero, find_zeros, ZeroKind, ZeroRecord, ZeroType};

/// The full catalog, in a fixed order.
pub fn catalog() -> Vec<ModelManifold> {
    [
        ManifoldName::Interval,
        ManifoldName::Disk2,
        ManifoldName::Annulus,
        ManifoldName::Pants,
        ManifoldName::Ball3,
        ManifoldName::SolidTorus,
    ]
    .into_iter()
    .map(ModelManifold::get)
    .collect()
}
