//! Exact evaluation of both sides of the index identities, with per-zero
//! provenance and eager hypothesis checking. Pass flags come from exact
//! half-integer equality, never from float comparison.

use crate::charts::{find_zeros, ModelManifold, ZeroKind, ZeroType};
use crate::degree::{normalize_map, HalfInt, Side};
use crate::doubling::{build_doubled_map, doubled_zero_index, DoubleCase};
use crate::error::{Error, Result};
use crate::fieldlang::FieldDef;
use crate::geom::VecN;
use crate::indices::{
    compute_bundle, local_index_interior, normal_local_index, tangential_local_index,
    BoundaryClass, IndexBundle, IndexMode,
};
use crate::charts::{boundary_chart, LocalField, PushforwardField};
use crate::Params;

pub const METRIC_NOTE: &str =
    "metric: chart-Euclidean in each canonical boundary chart (zero sets and \
     inward/outward signs are metric-independent)";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    S3a,
    S3b,
    DoubleCheck,
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T1 => "T1",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
            TheoremId::T4 => "T4",
            TheoremId::S3a => "S3a",
            TheoremId::S3b => "S3b",
            TheoremId::DoubleCheck => "double_check",
        }
    }
}

/// Both sides of one identity, with the bundle that produced the left side.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub manifold: crate::charts::ManifoldName,
    pub field_src: String,
    pub lhs: HalfInt,
    pub rhs: HalfInt,
    pub pass: bool,
    pub bundle: IndexBundle,
    pub hypothesis_log: Vec<String>,
    pub metric_note: String,
}

fn report(
    theorem: TheoremId,
    m: &ModelManifold,
    field: &FieldDef,
    lhs: HalfInt,
    rhs: HalfInt,
    bundle: IndexBundle,
    extra_note: Option<&str>,
) -> TheoremReport {
    let mut log = bundle.hypothesis_log.clone();
    log.push(format!("lhs = {lhs}, rhs = {rhs}"));
    let metric_note = match extra_note {
        Some(n) => format!("{METRIC_NOTE}; {n}"),
        None => METRIC_NOTE.to_string(),
    };
    TheoremReport {
        theorem,
        manifold: m.name,
        field_src: field.source_text.clone(),
        pass: lhs == rhs,
        lhs,
        rhs,
        bundle,
        hypothesis_log: log,
        metric_note,
    }
}

/// ind_nu(V) + (1/2) ind(dV, type 0) + ind(dV, type -) = chi(X).
pub fn verify_theorem1(m: &ModelManifold, field: &FieldDef, params: &Params) -> Result<TheoremReport> {
    let bundle = compute_bundle(m, field, IndexMode::Normal, params)?;
    let lhs = bundle.ind_nu.unwrap()
        + HalfInt::from_doubled(bundle.ind_d_zero)
        + HalfInt::from_int(bundle.ind_d_minus);
    let rhs = HalfInt::from_int(m.euler);
    Ok(report(TheoremId::T1, m, field, lhs, rhs, bundle, None))
}

fn chi_of_class(
    m: &ModelManifold,
    classes: &[(usize, BoundaryClass)],
    want: BoundaryClass,
) -> Result<i64> {
    let mut chi = 0;
    for (id, class) in classes {
        if *class == BoundaryClass::Mixed && m.dim != 2 {
            return Err(Error::HypothesisViolated {
                requirement: format!(
                    "boundary component {id} is uniformly outward- or inward-type"
                ),
                witness: None,
            });
        }
        if *class == want {
            chi += m
                .boundary
                .iter()
                .find(|c| c.id == *id)
                .map(|c| c.euler)
                .unwrap_or(0);
        }
    }
    Ok(chi)
}

fn tangential_rhs(
    m: &ModelManifold,
    classes: &[(usize, BoundaryClass)],
) -> Result<(HalfInt, Option<String>)> {
    let chi = HalfInt::from_int(m.euler);
    match m.dim {
        1 => {
            let chi_zero = chi_of_class(m, classes, BoundaryClass::ZeroPoint)?;
            let chi_minus = chi_of_class(m, classes, BoundaryClass::Inward)?;
            Ok((
                chi - HalfInt::from_doubled(chi_zero) - HalfInt::from_int(chi_minus),
                None,
            ))
        }
        n if n % 2 == 0 => {
            if n >= 3 {
                // for even n >= 4 both case rows apply and must agree;
                // chi of an odd-dimensional closed manifold vanishes
                let chi_minus = chi_of_class(m, classes, BoundaryClass::Inward)?;
                if chi_minus != 0 {
                    return Err(Error::HypothesisViolated {
                        requirement: "chi of odd-dimensional inward boundary must vanish".into(),
                        witness: None,
                    });
                }
                return Ok((chi, Some("even-dimension and n>=3 rows agree".into())));
            }
            Ok((chi, None))
        }
        _ => {
            let chi_minus = chi_of_class(m, classes, BoundaryClass::Inward)?;
            Ok((chi - HalfInt::from_int(chi_minus), None))
        }
    }
}

/// ind_tau(V) = chi(X) (n even), chi(X) - chi(inward boundary) (n >= 3), or
/// chi(X) - (1/2) chi(zero boundary) - chi(inward boundary) (n = 1).
pub fn verify_theorem2(m: &ModelManifold, field: &FieldDef, params: &Params) -> Result<TheoremReport> {
    let bundle = compute_bundle(m, field, IndexMode::Tangential, params)?;
    let lhs = bundle.ind_tau.unwrap();
    let (rhs, note) = tangential_rhs(m, &bundle.boundary_classes)?;
    Ok(report(TheoremId::T2, m, field, lhs, rhs, bundle, note.as_deref()))
}

/// Expanded normal index: chi(X) for even n, 0 for odd n.
pub fn verify_theorem3(m: &ModelManifold, field: &FieldDef, params: &Params) -> Result<TheoremReport> {
    let bundle = compute_bundle(m, field, IndexMode::ExpandedNormal, params)?;
    let lhs = bundle.ind_star_nu.unwrap();
    let rhs = if m.dim % 2 == 0 {
        HalfInt::from_int(m.euler)
    } else {
        HalfInt::ZERO
    };
    Ok(report(TheoremId::T3, m, field, lhs, rhs, bundle, None))
}

/// Expanded tangential index: same case table as Theorem 2.
pub fn verify_theorem4(m: &ModelManifold, field: &FieldDef, params: &Params) -> Result<TheoremReport> {
    let bundle = compute_bundle(m, field, IndexMode::ExpandedTangential, params)?;
    let lhs = bundle.ind_star_tau.unwrap();
    let (rhs, note) = tangential_rhs(m, &bundle.boundary_classes)?;
    Ok(report(TheoremId::T4, m, field, lhs, rhs, bundle, note.as_deref()))
}

/// The two aggregate identities behind Theorem 1:
///   (a) 2 ind_nu(V) + ind(dV,-) - ind(dV,+) = 2 chi(X) - chi(boundary)
///   (b) ind(dV,0) + ind(dV,-) + ind(dV,+) = chi(boundary)
/// Identity (b) is compared against chi of the boundary manifold.
pub fn verify_section3_identities(
    m: &ModelManifold,
    field: &FieldDef,
    params: &Params,
) -> Result<(TheoremReport, TheoremReport)> {
    let bundle = compute_bundle(m, field, IndexMode::Normal, params)?;
    let chi_boundary = m.boundary_euler();

    let lhs_a = bundle.ind_nu.unwrap().scale_int(2)
        + HalfInt::from_int(bundle.ind_d_minus - bundle.ind_d_plus);
    let rhs_a = HalfInt::from_int(2 * m.euler - chi_boundary);
    let a = report(TheoremId::S3a, m, field, lhs_a, rhs_a, bundle.clone(), None);

    let lhs_b = HalfInt::from_int(bundle.ind_d_zero + bundle.ind_d_minus + bundle.ind_d_plus);
    let rhs_b = HalfInt::from_int(chi_boundary);
    let b = report(
        TheoremId::S3b,
        m,
        field,
        lhs_b,
        rhs_b,
        bundle,
        Some("identity (b) right-hand side taken as chi of the boundary manifold"),
    );
    Ok((a, b))
}

/// Check the doubled and twisted-doubled local-index identities at one
/// boundary zero:
///   type 0, untwisted: index = 2 ind_nu(V,p)     (probe e1)
///   type -, untwisted: index = ind(dV,p)          (probe e2)
///   type +, untwisted: index = -ind(dV,p)         (probe e2)
///   zero of V or tangency, twisted: index = 2 ind_tau(V,p) for even n,
///                                   0 for odd n   (probe e2)
pub fn verify_double_consistency(
    m: &ModelManifold,
    field: &FieldDef,
    p: &VecN,
    params: &Params,
) -> Result<TheoremReport> {
    let mut bundle = empty_bundle();
    let mut log: Vec<String> = Vec::new();

    // classify the point from the chart-local field value: this avoids
    // scanning zero sets the check does not depend on
    let chart = boundary_chart(m, p)?;
    let local = PushforwardField {
        chart: chart.clone(),
        field,
    };
    let v_at = local.eval(&chart.a())?;
    let cut = params.zero_tol.sqrt();
    let tangential_norm = if m.dim >= 2 { v_at.tangential().norm() } else { 0.0 };
    let case = if v_at.norm() < cut {
        DoubleCase::Type0
    } else if m.dim >= 2 && tangential_norm < cut {
        match crate::charts::classify_boundary_zero(m, field, p, params.zero_tol)? {
            ZeroType::Plus => DoubleCase::TypePlus,
            ZeroType::Minus => DoubleCase::TypeMinus,
            _ => DoubleCase::Type0,
        }
    } else if v_at[0].abs() < cut {
        DoubleCase::Tangency
    } else {
        return Err(Error::HypothesisViolated {
            requirement: "point is a boundary zero of the boundary or normal field".into(),
            witness: Some(*p),
        });
    };

    // isolation radius from the zero list the case actually depends on
    let iso_kind = match case {
        DoubleCase::Type0 => ZeroKind::BoundaryZeroOfV,
        DoubleCase::TypeMinus | DoubleCase::TypePlus => ZeroKind::ZeroOfBoundaryField,
        DoubleCase::Tangency => ZeroKind::ZeroOfNormalField,
    };
    let iso = find_zeros(m, field, iso_kind, params)?
        .iter()
        .find(|z| z.location.dist(p) < 1e-5)
        .map(|z| z.isolation_radius)
        .ok_or(Error::HypothesisViolated {
            requirement: "point is an isolated zero of the selected field".into(),
            witness: Some(*p),
        })?;
    let eps = params.epsilon.min(0.5 * iso).min(chart.max_radius);
    let hemi = normalize_map(&local, &chart.a(), eps, Side::Hemisphere, params)?;

    let mut lhs = HalfInt::ZERO;
    let mut rhs = HalfInt::ZERO;
    let mut first = true;
    let mut all_pass = true;
    let mut put = |computed: HalfInt, predicted: HalfInt, what: &str, log: &mut Vec<String>| {
        log.push(format!("{what}: computed {computed}, predicted {predicted}"));
        if first {
            lhs = computed;
            rhs = predicted;
            first = false;
        }
        if computed != predicted {
            all_pass = false;
        }
    };

    // untwisted double
    match case {
        DoubleCase::Type0 => {
            let dm = build_doubled_map(&hemi, false, params)?;
            let computed = HalfInt::from_int(doubled_zero_index(&dm, DoubleCase::Type0)?);
            let nu = normal_local_index(m, field, p, params)?;
            put(computed, nu.scale_int(2), "untwisted double at type-0 zero", &mut log);
            log.push(format!("seam gap {:.4} rad", dm.seam_gap));
        }
        DoubleCase::TypeMinus | DoubleCase::TypePlus => {
            let dm = build_doubled_map(&hemi, false, params)?;
            let computed = HalfInt::from_int(doubled_zero_index(&dm, case)?);
            let dv_index = crate::indices::boundary_field_index(m, field, p, params)?;
            let predicted = if case == DoubleCase::TypeMinus {
                HalfInt::from_int(dv_index)
            } else {
                HalfInt::from_int(-dv_index)
            };
            let what = if case == DoubleCase::TypeMinus {
                "untwisted double at type - zero"
            } else {
                "untwisted double at type + zero"
            };
            put(computed, predicted, what, &mut log);
            log.push(format!("seam gap {:.4} rad", dm.seam_gap));
        }
        DoubleCase::Tangency => {
            log.push("untwisted double: no zero here (boundary field does not vanish)".into());
        }
    }

    // twisted double applies at zeros of V on the boundary and at tangencies
    match case {
        DoubleCase::Type0 | DoubleCase::Tangency => {
            let dm = build_doubled_map(&hemi, true, params)?;
            let computed = HalfInt::from_int(doubled_zero_index(&dm, case)?);
            let predicted = if m.dim % 2 == 0 {
                tangential_local_index(m, field, p, params)?.scale_int(2)
            } else {
                HalfInt::ZERO
            };
            let what = if m.dim % 2 == 0 {
                "twisted double (even n, 2 ind_tau)"
            } else {
                "twisted double (odd n, 0)"
            };
            put(computed, predicted, what, &mut log);
            log.push(format!("twisted seam gap {:.4} rad", dm.seam_gap));
        }
        _ => {
            log.push(
                "twisted double: no zero here (field is not tangent to the boundary)".into(),
            );
        }
    }

    bundle.hypothesis_log = log.clone();
    let mut rep = report(TheoremId::DoubleCheck, m, field, lhs, rhs, bundle, None);
    rep.pass = all_pass;
    rep.hypothesis_log = log;
    Ok(rep)
}

fn empty_bundle() -> IndexBundle {
    // the double check carries its findings in the log rather than in sums
    crate::indices::IndexBundle {
        mode: IndexMode::Normal,
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

/// Also expose the interior-index helper for collar-push validation.
pub fn interior_index_at(
    m: &ModelManifold,
    field: &FieldDef,
    z: &VecN,
    params: &Params,
) -> Result<i64> {
    local_index_interior(m, field, z, params)
}
