//! Crate-wide error type.

use crate::geom::VecN;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- field language ----
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("field has {got} component(s), expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("domain error evaluating component {component}: {what} at {point:?}")]
    Domain {
        component: usize,
        what: String,
        point: VecN,
    },

    // ---- charts ----
    #[error("point {point:?} is not on the boundary of {manifold}")]
    NotOnBoundary { manifold: String, point: VecN },
    #[error("requested chart radius {requested} exceeds injectivity radius {max}")]
    ChartRadiusTooSmall { requested: f64, max: f64 },
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),

    // ---- zero finding ----
    #[error("non-isolated zero of {field_kind} near {witness:?}: {detail}")]
    NonIsolatedZero {
        field_kind: String,
        witness: VecN,
        detail: String,
    },
    #[error("zero refinement failed to converge from {seed:?}")]
    ConvergenceFailure { seed: VecN },

    // ---- degree engine ----
    #[error("field vanishes on the sampling sphere at {point:?} (norm {norm:.3e})")]
    ZeroOnSphere { point: VecN, norm: f64 },
    #[error("adaptive refinement overflow (gap {gap:.3} rad after depth {depth})")]
    RefinementOverflow { gap: f64, depth: usize },
    #[error("direction not admissible: rim margin {margin:.3e} < {required:.3e}")]
    NotAdmissibleDirection { margin: f64, required: f64 },
    #[error("antipodal pair not admissible: rim margin {margin:.3e} < {required:.3e}")]
    NotAdmissiblePair { margin: f64, required: f64 },
    #[error("degenerate triangle intersection for probe direction {dir:?}")]
    DegenerateTriangle { dir: VecN },
    #[error("sphere degree disagrees across probe directions: {counts:?}")]
    DirectionDisagreement { counts: Vec<i64> },

    // ---- index assembly ----
    #[error("pair inadmissible at all sampling radii down from {eps_start}")]
    InadmissibleAtAllScales { eps_start: f64 },
    #[error("equatorial directions disagree: {counts:?}")]
    EquatorDisagreement { counts: Vec<i64> },
    #[error("ambiguous zero type: normal component {value:.3e} inside tolerance band ({lo:.1e}, {hi:.1e})")]
    AmbiguousType { value: f64, lo: f64, hi: f64 },
    #[error("hypothesis violated: {requirement} (witness {witness:?})")]
    HypothesisViolated { requirement: String, witness: Option<VecN> },

    // ---- doubling ----
    #[error("interpolated field vanishes on the doubling cylinder at t={t:.3}, rim point {rim:?}")]
    ZeroOnCylinder { t: f64, rim: VecN },
}

impl Error {
    /// True for errors that mean "a theorem's precondition fails", as opposed
    /// to malformed input or an internal numerical failure.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::HypothesisViolated { .. } | Error::NonIsolatedZero { .. }
        )
    }
}
