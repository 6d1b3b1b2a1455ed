//! Local and global index assembly.
//!
//! Local indices: the classical interior index (full-sphere degree), the
//! normal local index (averaged intersection number over the chart-normal
//! pair {+-e1}), the tangential local index (equatorial directions), and the
//! index of the boundary field as a field on the closed boundary manifold.
//! Global: the four aggregate bundles consumed by the verification layer.
//! Every hypothesis is checked eagerly and failures carry a witness point.

use crate::charts::{
    boundary_chart, boundary_grid, find_zeros, outward_normal, AmbientField, LocalField,
    ModelManifold, PushforwardField, ZeroKind, ZeroRecord, ZeroType,
};
use crate::degree::{
    averaged_index, full_sphere_degree, intersection_number, normalize_map,
    HalfInt, HemisphereMap, Side,
};
use crate::error::{Error, Result};
use crate::fieldlang::{eval_field, FieldDef};
use crate::geom::VecN;
use crate::Params;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EPS_SHRINK_STEPS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMode {
    Normal,
    Tangential,
    ExpandedNormal,
    ExpandedTangential,
}

impl IndexMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexMode::Normal => "normal",
            IndexMode::Tangential => "tangential",
            IndexMode::ExpandedNormal => "expanded_normal",
            IndexMode::ExpandedTangential => "expanded_tangential",
        }
    }
}

/// How one boundary component sits relative to the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryClass {
    /// Vectors point outward away from the listed zeros.
    Outward,
    /// Vectors point inward away from the listed zeros.
    Inward,
    /// A 1-dimensional boundary point at which the field vanishes.
    ZeroPoint,
    /// Mixed signs (only legal when the right-hand side does not need the
    /// classification, i.e. for even n).
    Mixed,
}

impl BoundaryClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryClass::Outward => "outward",
            BoundaryClass::Inward => "inward",
            BoundaryClass::ZeroPoint => "zero",
            BoundaryClass::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerZeroIndex {
    pub record: ZeroRecord,
    pub index: HalfInt,
    pub definition: &'static str,
}

/// All index aggregates for one (manifold, field, mode) triple.
#[derive(Clone, Debug)]
pub struct IndexBundle {
    pub mode: IndexMode,
    /// Sum of classical indices over interior zeros (always integer-valued).
    pub interior_sum: HalfInt,
    pub ind_nu: Option<HalfInt>,
    pub ind_tau: Option<HalfInt>,
    pub ind_d_plus: i64,
    pub ind_d_minus: i64,
    pub ind_d_zero: i64,
    pub ind_star_nu: Option<HalfInt>,
    pub ind_star_tau: Option<HalfInt>,
    pub per_zero: Vec<PerZeroIndex>,
    pub boundary_classes: Vec<(usize, BoundaryClass)>,
    pub hypothesis_log: Vec<String>,
}

impl IndexBundle {
    fn new(mode: IndexMode) -> Self {
        IndexBundle {
            mode,
            interior_sum: HalfInt::ZERO,
            ind_nu: None,
            ind_tau: None,
            ind_d_plus: 0,
            ind_d_minus: 0,
            ind_d_zero: 0,
            ind_star_nu: None,
            ind_star_tau: None,
            per_zero: Vec::new(),
            boundary_classes: Vec::new(),
            hypothesis_log: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// local indices
// ---------------------------------------------------------------------------

/// Classical local index of an isolated interior zero: the degree of the
/// normalized field on a small ambient sphere around it.
pub fn local_index_interior(
    m: &ModelManifold,
    field: &FieldDef,
    z: &VecN,
    params: &Params,
) -> Result<i64> {
    let eps0 = params
        .epsilon
        .min(0.5 * m.boundary_distance(z).max(1e-6));
    let local = AmbientField { field };
    let d = VecN::basis(m.ambient_dim, 0);
    with_shrinking_eps(eps0, |eps| {
        let map = normalize_map(&local, z, eps, Side::FullSphere, params)?;
        full_sphere_degree(&map, &d, params)
    })
}

/// Construct the hemisphere map at a boundary point, shrinking the radius
/// while the closure keeps failing for scale-dependent reasons.
fn with_shrinking_eps<T>(eps0: f64, mut attempt: impl FnMut(f64) -> Result<T>) -> Result<T> {
    let mut eps = eps0;
    let mut last: Option<Error> = None;
    for _ in 0..=EPS_SHRINK_STEPS {
        match attempt(eps) {
            Ok(v) => return Ok(v),
            Err(
                e @ (Error::ZeroOnSphere { .. }
                | Error::NotAdmissibleDirection { .. }
                | Error::NotAdmissiblePair { .. }
                | Error::DegenerateTriangle { .. }),
            ) => {
                last = Some(e);
                eps *= 0.5;
            }
            Err(other) => return Err(other),
        }
    }
    match last {
        Some(Error::ZeroOnSphere { point, norm }) => Err(Error::ZeroOnSphere { point, norm }),
        _ => Err(Error::InadmissibleAtAllScales { eps_start: eps0 }),
    }
}

/// Normal local index at a boundary zero of the boundary field: the averaged
/// intersection number over the pair {+-e1}, with the sampling radius shrunk
/// until the pair is admissible.
pub fn normal_local_index(
    m: &ModelManifold,
    field: &FieldDef,
    p: &VecN,
    params: &Params,
) -> Result<HalfInt> {
    let chart = boundary_chart(m, p)?;
    let eps0 = params.epsilon.min(chart.max_radius);
    let e1 = VecN::basis(m.dim, 0);
    let local = PushforwardField {
        chart: chart.clone(),
        field,
    };
    with_shrinking_eps(eps0, |eps| {
        let map = normalize_map(&local, &chart.a(), eps, Side::Hemisphere, params)?;
        averaged_index(&map, &e1)
    })
}

/// Tangential local index at a boundary zero of the normal field.
///
/// n = 1: equals the normal local index. n = 2: averaged index over {+-e2}.
/// n = 3: intersection number with an equatorial direction, picked with the
/// largest rim clearance and validated against four more seeded equatorial
/// directions (all must agree).
pub fn tangential_local_index(
    m: &ModelManifold,
    field: &FieldDef,
    p: &VecN,
    params: &Params,
) -> Result<HalfInt> {
    match m.dim {
        1 => normal_local_index(m, field, p, params),
        2 => {
            let chart = boundary_chart(m, p)?;
            let eps0 = params.epsilon.min(chart.max_radius);
            let e2 = VecN::basis(2, 1);
            let local = PushforwardField {
                chart: chart.clone(),
                field,
            };
            with_shrinking_eps(eps0, |eps| {
                let map = normalize_map(&local, &chart.a(), eps, Side::Hemisphere, params)?;
                averaged_index(&map, &e2)
            })
        }
        _ => {
            let chart = boundary_chart(m, p)?;
            let eps0 = params.epsilon.min(chart.max_radius);
            let local = PushforwardField {
                chart: chart.clone(),
                field,
            };
            let count = with_shrinking_eps(eps0, |eps| {
                let map = normalize_map(&local, &chart.a(), eps, Side::Hemisphere, params)?;
                equatorial_count(&map, params)
            })?;
            Ok(HalfInt::from_int(count))
        }
    }
}

/// Pick the equatorial direction with the best rim clearance, count, and
/// validate with seeded equatorial directions.
fn equatorial_count(map: &HemisphereMap, params: &Params) -> Result<i64> {
    let equator_dir = |phi: f64| VecN::v3(0.0, phi.cos(), phi.sin());
    let mut best_phi = 0.0;
    let mut best_margin = -1.0;
    for k in 0..64 {
        let phi = std::f64::consts::TAU * k as f64 / 64.0;
        let margin = map.rim_margin(&equator_dir(phi));
        if margin > best_margin {
            best_margin = margin;
            best_phi = phi;
        }
    }
    if best_margin < params.margin_min {
        return Err(Error::NotAdmissibleDirection {
            margin: best_margin,
            required: params.margin_min,
        });
    }
    let base = intersection_number(map, &equator_dir(best_phi))?;
    let mut counts = vec![base];
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0xe9aa_0b1d);
    let mut validated = 0;
    let mut tries = 0;
    while validated < 4 && tries < 64 {
        tries += 1;
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = equator_dir(phi);
        if map.rim_margin(&d) < params.margin_min {
            continue;
        }
        counts.push(intersection_number(map, &d)?);
        validated += 1;
    }
    if counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::EquatorDisagreement { counts });
    }
    Ok(base)
}

/// Local index of the boundary field, viewed as a vector field on the closed
/// (n-1)-manifold boundary, at one of its zeros. Always 1 for n = 1.
pub fn boundary_field_index(
    m: &ModelManifold,
    field: &FieldDef,
    z: &VecN,
    params: &Params,
) -> Result<i64> {
    match m.dim {
        1 => Ok(1),
        2 => {
            let comp = m
                .boundary_component_of(z, 1e-7)
                .ok_or_else(|| Error::NotOnBoundary {
                    manifold: m.name.to_string(),
                    point: *z,
                })?;
            let shape = comp.shape.clone();
            let param = crate::charts::local_boundary_param(&shape, z);
            let g = |t: f64| -> Result<f64> {
                let q = param(&[t]);
                let v = eval_field(field, &q)?;
                let n_out = outward_normal(&shape, &q);
                let tangential = v - n_out.scale(v.dot(&n_out));
                // signed component along the parametrization direction
                let h = 1e-6;
                let dir = (param(&[t + h]) - param(&[t - h])).unit(1e-300).unwrap();
                Ok(tangential.dot(&dir))
            };
            let delta = params.epsilon;
            let right = g(delta)?;
            let left = g(-delta)?;
            Ok(((right.signum() - left.signum()) / 2.0) as i64)
        }
        _ => {
            // winding of the chart-tangential components around the zero in
            // the oriented surface chart of the boundary
            let chart = boundary_chart(m, z)?;
            let pf = PushforwardField {
                chart: chart.clone(),
                field,
            };
            let chart2 = chart.clone();
            let surface_field = (2usize, move |u: &VecN| -> Result<VecN> {
                let y = VecN::v3(1.0, u[0], u[1]);
                let v = pf.eval(&y)?;
                Ok(VecN::v2(v[1], v[2]))
            });
            let local: &dyn LocalField = &surface_field;
            let eps0 = params.epsilon.min(chart2.max_radius);
            with_shrinking_eps(eps0, |eps| {
                let map = normalize_map(local, &VecN::v2(0.0, 0.0), eps, Side::FullSphere, params)?;
                full_sphere_degree(&map, &VecN::v2(1.0, 0.0), params)
            })
        }
    }
}

// ---------------------------------------------------------------------------
// boundary component classification
// ---------------------------------------------------------------------------

/// Classify each boundary component by the sign of the outward field
/// component away from the listed singular points.
pub fn classify_components(
    m: &ModelManifold,
    field: &FieldDef,
    singular: &[VecN],
    params: &Params,
) -> Result<Vec<(usize, BoundaryClass)>> {
    let mut out = Vec::new();
    for comp in &m.boundary {
        if m.dim == 1 {
            let q = match comp.shape {
                crate::charts::ComponentShape::Point { x, .. } => VecN::v1(x),
                _ => unreachable!(),
            };
            let v = eval_field(field, &q)?;
            let n_out = outward_normal(&comp.shape, &q);
            let vn = v.dot(&n_out);
            let class = if singular.iter().any(|s| s.dist(&q) < 1e-6) || v.norm() < params.zero_tol
            {
                BoundaryClass::ZeroPoint
            } else if vn > 0.0 {
                BoundaryClass::Outward
            } else {
                BoundaryClass::Inward
            };
            out.push((comp.id, class));
            continue;
        }
        let grid = boundary_grid(&comp.shape, params.grid_h.max(0.05));
        let step = (grid.len() / 256).max(1);
        let mut has_pos = false;
        let mut has_neg = false;
        let clearance = 6.0 * params.grid_h.max(0.05);
        for q in grid.iter().step_by(step) {
            if singular.iter().any(|s| s.dist(q) < clearance) {
                continue;
            }
            let v = eval_field(field, q)?;
            let vn = v.dot(&outward_normal(&comp.shape, q));
            if vn > params.zero_tol {
                has_pos = true;
            } else if vn < -params.zero_tol {
                has_neg = true;
            }
        }
        let class = match (has_pos, has_neg) {
            (true, false) => BoundaryClass::Outward,
            (false, true) => BoundaryClass::Inward,
            _ => BoundaryClass::Mixed,
        };
        out.push((comp.id, class));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// bundle assembly
// ---------------------------------------------------------------------------

fn zero_params(params: &Params, record: &ZeroRecord) -> Params {
    let mut p = params.clone();
    p.epsilon = params.epsilon.min(0.5 * record.isolation_radius);
    p
}

/// Compute the aggregate index bundle for the requested mode, with eager,
/// named hypothesis checks.
pub fn compute_bundle(
    m: &ModelManifold,
    field: &FieldDef,
    mode: IndexMode,
    params: &Params,
) -> Result<IndexBundle> {
    let mut bundle = IndexBundle::new(mode);

    let interior = find_zeros(m, field, ZeroKind::InteriorZeroOfV, params)?;
    bundle
        .hypothesis_log
        .push(format!("interior zeros of V isolated: ok ({} found)", interior.len()));
    let boundary_v = find_zeros(m, field, ZeroKind::BoundaryZeroOfV, params)?;
    bundle.hypothesis_log.push(format!(
        "boundary zeros of V isolated: ok ({} found)",
        boundary_v.len()
    ));

    let mut interior_sum = HalfInt::ZERO;
    for z in &interior {
        let idx = local_index_interior(m, field, &z.location, &zero_params(params, z))?;
        interior_sum = interior_sum + HalfInt::from_int(idx);
        bundle.per_zero.push(PerZeroIndex {
            record: z.clone(),
            index: HalfInt::from_int(idx),
            definition: "interior local index",
        });
    }
    bundle.interior_sum = interior_sum;

    match mode {
        IndexMode::Normal | IndexMode::ExpandedNormal => {
            let dv = find_zeros(m, field, ZeroKind::ZeroOfBoundaryField, params)?;
            bundle.hypothesis_log.push(format!(
                "zeros of the boundary field isolated: ok ({} found)",
                dv.len()
            ));

            // boundary-field local indices by type
            for z in &dv {
                let idx = boundary_field_index(m, field, &z.location, &zero_params(params, z))?;
                match z.type_tag {
                    ZeroType::Plus => bundle.ind_d_plus += idx,
                    ZeroType::Minus => bundle.ind_d_minus += idx,
                    ZeroType::Zero => bundle.ind_d_zero += idx,
                    ZeroType::NotApplicable => {}
                }
                bundle.per_zero.push(PerZeroIndex {
                    record: z.clone(),
                    index: HalfInt::from_int(idx),
                    definition: "boundary-field local index",
                });
            }

            // normal local indices at the zeros of V on the boundary
            let mut nu = interior_sum;
            for z in &boundary_v {
                let idx = normal_local_index(m, field, &z.location, &zero_params(params, z))?;
                nu = nu + idx;
                bundle.per_zero.push(PerZeroIndex {
                    record: z.clone(),
                    index: idx,
                    definition: "normal local index",
                });
            }
            bundle.ind_nu = Some(nu);

            if mode == IndexMode::ExpandedNormal {
                // extend by the normal indices at the non-V zeros of the
                // boundary field
                let mut star = nu;
                for z in dv.iter().filter(|z| z.type_tag != ZeroType::Zero) {
                    let idx = normal_local_index(m, field, &z.location, &zero_params(params, z))?;
                    star = star + idx;
                    bundle.per_zero.push(PerZeroIndex {
                        record: z.clone(),
                        index: idx,
                        definition: "normal local index (expanded)",
                    });
                }
                bundle.ind_star_nu = Some(star);
            }
        }
        IndexMode::Tangential | IndexMode::ExpandedTangential => {
            let dperp = find_zeros(m, field, ZeroKind::ZeroOfNormalField, params)?;
            bundle.hypothesis_log.push(format!(
                "zeros of the normal field isolated: ok ({} found)",
                dperp.len()
            ));

            if mode == IndexMode::Tangential {
                // the zeros of V on the boundary must be the only zeros of
                // the normal field
                for z in &dperp {
                    let covered = boundary_v.iter().any(|b| b.location.dist(&z.location) < 1e-5);
                    if !covered {
                        return Err(Error::HypothesisViolated {
                            requirement:
                                "boundary zeros of V are the only zeros of the normal field"
                                    .into(),
                            witness: Some(z.location),
                        });
                    }
                }
                bundle
                    .hypothesis_log
                    .push("every zero of the normal field is a zero of V: ok".into());
                let mut tau = interior_sum;
                for z in &boundary_v {
                    let idx = tangential_local_index(m, field, &z.location, &zero_params(params, z))?;
                    tau = tau + idx;
                    bundle.per_zero.push(PerZeroIndex {
                        record: z.clone(),
                        index: idx,
                        definition: "tangential local index",
                    });
                }
                bundle.ind_tau = Some(tau);
            } else {
                let mut star = interior_sum;
                for z in &dperp {
                    let idx = tangential_local_index(m, field, &z.location, &zero_params(params, z))?;
                    star = star + idx;
                    let is_v_zero = boundary_v.iter().any(|b| b.location.dist(&z.location) < 1e-5);
                    bundle.per_zero.push(PerZeroIndex {
                        record: z.clone(),
                        index: idx,
                        definition: if is_v_zero {
                            "tangential local index"
                        } else {
                            "tangential local index (expanded)"
                        },
                    });
                }
                bundle.ind_star_tau = Some(star);
            }

            let singular: Vec<VecN> = dperp.iter().map(|z| z.location).collect();
            bundle.boundary_classes = classify_components(m, field, &singular, params)?;
            for (id, class) in &bundle.boundary_classes {
                bundle
                    .hypothesis_log
                    .push(format!("boundary component {id}: {}", class.as_str()));
            }
        }
    }

    // n >= 3 integrality of tangential indices is structural (integer count),
    // and n = 1 normal/tangential agreement is definitional; both are also
    // covered by tests.
    Ok(bundle)
}
