//! Local indices of vector fields at isolated zeros, including zeros on the
//! boundary of a manifold, where normal and tangential indices can take
//! half-integer values. The crate evaluates both sides of the associated
//! index identities exactly over a small catalog of model manifolds of
//! dimension 1 to 3.
//!
//! Index arithmetic is exact ([`HalfInt`] stores doubled integers); floats
//! appear only in field evaluation and geometry.

pub mod charts;
pub mod degree;
pub mod doubling;
pub mod error;
pub mod fieldlang;
pub mod geom;
pub mod indices;
pub mod verify;

pub use charts::{
    boundary_chart, boundary_decompose, catalog, classify_boundary_zero, find_zeros,
    BoundaryChart, ManifoldName, ModelManifold, ZeroKind, ZeroRecord, ZeroType,
};
pub use degree::{
    averaged_index, full_sphere_degree, intersection_number, is_admissible_pair, normalize_map,
    oracle_degree, HalfInt, HemisphereMap, Side,
};
pub use error::{Error, Result};
pub use fieldlang::{eval_field, negate_field, parse_field, FieldDef};
pub use geom::VecN;
pub use indices::{compute_bundle, IndexBundle, IndexMode};
pub use verify::{TheoremId, TheoremReport};

/// Numerical parameters shared across the pipeline. All values are
/// overridable per scene; the defaults below are the documented ones.
#[derive(Clone, Debug)]
pub struct Params {
    /// Zero tolerance: a point counts as a zero when the squared field norm
    /// is below this value. Also the floor for "field vanishes on sphere"
    /// checks.
    pub zero_tol: f64,
    /// Grid spacing for the zero scan, in ambient coordinates.
    pub grid_h: f64,
    /// Default sampling radius for hemisphere/sphere maps; shrunk
    /// automatically when admissibility or isolation demands it.
    pub epsilon: f64,
    /// Required angular clearance of probe directions from the rim image.
    pub margin_min: f64,
    /// Seed for the fixed validation-direction streams.
    pub seed: u64,
    /// Optional starting points for the zero search, refined and certified
    /// like grid seeds.
    pub zero_hints: Vec<VecN>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            zero_tol: 1e-8,
            grid_h: 0.02,
            epsilon: 0.05,
            margin_min: 1e-3,
            seed: 0,
            zero_hints: Vec::new(),
        }
    }
}
