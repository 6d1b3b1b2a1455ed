//! Zero location with isolation certificates.
//!
//! Grid scan for candidate minima of the selected field norm, damped
//! Gauss-Newton (Levenberg-Marquardt) refinement on the squared norm with a
//! finite-difference Jacobian, deduplication, and per-zero isolation
//! certificates. Lists are returned in canonical coordinate order so runs are
//! reproducible.

use crate::charts::chart::{boundary_chart, LocalField, PushforwardField};
use crate::charts::manifolds::{
    boundary_grid, local_boundary_param, outward_normal, param_dim, ComponentShape, ModelManifold,
};
use crate::error::{Error, Result};
use crate::fieldlang::{eval_field, FieldDef};
use crate::geom::VecN;
use crate::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroKind {
    InteriorZeroOfV,
    BoundaryZeroOfV,
    ZeroOfBoundaryField,
    ZeroOfNormalField,
}

impl ZeroKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroKind::InteriorZeroOfV => "interior zero of V",
            ZeroKind::BoundaryZeroOfV => "boundary zero of V",
            ZeroKind::ZeroOfBoundaryField => "zero of the boundary field",
            ZeroKind::ZeroOfNormalField => "zero of the normal field",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroType {
    Plus,
    Minus,
    Zero,
    NotApplicable,
}

impl ZeroType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroType::Plus => "plus",
            ZeroType::Minus => "minus",
            ZeroType::Zero => "zero",
            ZeroType::NotApplicable => "n/a",
        }
    }
}

/// A located, certified zero.
#[derive(Clone, Debug)]
pub struct ZeroRecord {
    pub location: VecN,
    pub kind: ZeroKind,
    pub type_tag: ZeroType,
    pub isolation_radius: f64,
    /// Norm of the selected field at the refined location.
    pub residual: f64,
    /// Boundary component the zero lies on, for boundary kinds.
    pub component_id: Option<usize>,
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt on the squared norm
// ---------------------------------------------------------------------------

const LM_MAX_ITER: usize = 60;
const LM_STEP_TOL: f64 = 1e-12;

/// Minimize |F(u)|^2 from `u0`. `F` returns `None` where it is undefined
/// (treated as an infinitely bad step). Returns the refined point, the final
/// residual norm, and whether the step tolerance was reached.
fn lm_refine<F>(f: F, u0: &[f64], out_dim: usize) -> (Vec<f64>, f64, bool)
where
    F: Fn(&[f64]) -> Option<VecN>,
{
    let k = u0.len();
    let mut u = u0.to_vec();
    let mut fu = match f(&u) {
        Some(v) => v,
        None => return (u, f64::INFINITY, false),
    };
    let mut g = fu.norm_sq();
    let mut lambda = 1e-3;
    let mut converged = false;

    for _ in 0..LM_MAX_ITER {
        if g < 1e-30 {
            converged = true;
            break;
        }
        // finite-difference Jacobian, step scaled to the current point
        let scale: f64 = 1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let h = 1e-7 * scale;
        let mut jac = vec![vec![0.0; k]; out_dim]; // jac[i][j] = dF_i/du_j
        let mut ok = true;
        for j in 0..k {
            let mut up = u.clone();
            let mut um = u.clone();
            up[j] += h;
            um[j] -= h;
            match (f(&up), f(&um)) {
                (Some(fp), Some(fm)) => {
                    for i in 0..out_dim {
                        jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
                    }
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        // normal equations J^T J + lambda diag, J^T F
        let mut jtj = vec![vec![0.0; k]; k];
        let mut jtf = vec![0.0; k];
        for a in 0..k {
            for b in 0..k {
                let mut s = 0.0;
                for i in 0..out_dim {
                    s += jac[i][a] * jac[i][b];
                }
                jtj[a][b] = s;
            }
            let mut s = 0.0;
            for i in 0..out_dim {
                s += jac[i][a] * fu[i];
            }
            jtf[a] = s;
        }

        let mut improved = false;
        for _ in 0..10 {
            // solve (JtJ + lambda I) step = -JtF with a tiny dense solver
            let mut a = jtj.clone();
            for d in 0..k {
                a[d][d] += lambda * (1.0 + jtj[d][d]);
            }
            let step = match solve_dense(&mut a, &jtf) {
                Some(s) => s,
                None => break,
            };
            let mut unew = u.clone();
            for j in 0..k {
                unew[j] -= step[j];
            }
            if let Some(fnew) = f(&unew) {
                let gnew = fnew.norm_sq();
                if gnew < g {
                    let step_norm: f64 = step.iter().map(|s| s * s).sum::<f64>().sqrt();
                    u = unew;
                    fu = fnew;
                    g = gnew;
                    lambda = (lambda * 0.25).max(1e-12);
                    improved = true;
                    if step_norm < LM_STEP_TOL * scale {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if converged || !improved {
            // no further progress at any damping: accept the current point
            if !improved {
                converged = g < 1e-20 || lambda > 1e12;
            }
            break;
        }
    }
    (u, g.sqrt(), converged || g < 1e-20)
}

fn solve_dense(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut rhs = b.to_vec();
    for kcol in 0..n {
        let mut piv = kcol;
        for i in (kcol + 1)..n {
            if a[i][kcol].abs() > a[piv][kcol].abs() {
                piv = i;
            }
        }
        if a[piv][kcol].abs() < 1e-300 {
            return None;
        }
        a.swap(kcol, piv);
        rhs.swap(kcol, piv);
        for i in (kcol + 1)..n {
            let fct = a[i][kcol] / a[kcol][kcol];
            for j in kcol..n {
                a[i][j] -= fct * a[kcol][j];
            }
            rhs[i] -= fct * rhs[kcol];
        }
    }
    let mut x = vec![0.0; n];
    for kcol in (0..n).rev() {
        let mut s = rhs[kcol];
        for j in (kcol + 1)..n {
            s -= a[kcol][j] * x[j];
        }
        x[kcol] = s / a[kcol][kcol];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// field selectors
// ---------------------------------------------------------------------------

/// The ambient-space vector whose norm vanishes exactly at zeros of the
/// selected kind. For the normal field the value is the scalar normal
/// component as a 1-vector (the zero set is metric-independent).
fn selected_value(
    kind: ZeroKind,
    field: &FieldDef,
    shape: Option<&ComponentShape>,
    x: &VecN,
) -> Option<VecN> {
    let v = eval_field(field, x).ok()?;
    match kind {
        ZeroKind::InteriorZeroOfV | ZeroKind::BoundaryZeroOfV => Some(v),
        ZeroKind::ZeroOfBoundaryField => {
            let shape = shape.expect("boundary kind needs a component");
            if x.dim() == 1 {
                // the boundary of an interval is 0-dimensional: the boundary
                // field is identically zero there
                return Some(VecN::v1(0.0));
            }
            let n_out = outward_normal(shape, x);
            Some(v - n_out.scale(v.dot(&n_out)))
        }
        ZeroKind::ZeroOfNormalField => {
            let shape = shape.expect("boundary kind needs a component");
            let n_out = outward_normal(shape, x);
            Some(VecN::v1(v.dot(&n_out)))
        }
    }
}

// ---------------------------------------------------------------------------
// find_zeros
// ---------------------------------------------------------------------------

/// Locate all zeros of the selected kind, with isolation certificates.
pub fn find_zeros(
    m: &ModelManifold,
    field: &FieldDef,
    kind: ZeroKind,
    params: &Params,
) -> Result<Vec<ZeroRecord>> {
    let mut records = match kind {
        ZeroKind::InteriorZeroOfV => interior_zeros(m, field, params)?,
        _ => boundary_zeros(m, field, kind, params)?,
    };
    // canonical order
    records.sort_by(|a, b| {
        a.location
            .as_slice()
            .partial_cmp(b.location.as_slice())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(records)
}

fn interior_zeros(m: &ModelManifold, field: &FieldDef, params: &Params) -> Result<Vec<ZeroRecord>> {
    let h = params.grid_h;
    let (lo, hi) = m.bounding_box();
    let n = m.ambient_dim;
    let mut counts = [1usize; 3];
    for j in 0..n {
        counts[j] = ((hi[j] - lo[j]) / h).round() as usize + 1;
    }
    let total: usize = counts[..n].iter().product();
    let idx = |ijk: &[usize; 3]| -> usize {
        let mut s = 0;
        for j in 0..n {
            s = s * counts[j] + ijk[j];
        }
        s
    };
    let point_at = |ijk: &[usize; 3]| -> VecN {
        let mut p = VecN::zero(n);
        for j in 0..n {
            p[j] = lo[j] + ijk[j] as f64 * h;
        }
        p
    };

    // norms on the grid; INFINITY outside the manifold
    let mut norms = vec![f64::INFINITY; total];
    let mut ijk = [0usize; 3];
    let mut scale_samples: Vec<f64> = Vec::new();
    loop {
        let p = point_at(&ijk);
        if m.contains(&p) {
            match eval_field(field, &p) {
                Ok(v) => {
                    let nv = v.norm();
                    norms[idx(&ijk)] = nv;
                    if scale_samples.len() < 4096 {
                        scale_samples.push(nv);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        // increment the multi-index
        let mut j = n;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            ijk[j] += 1;
            if ijk[j] < counts[j] {
                break;
            }
            ijk[j] = 0;
            if j == 0 {
                break;
            }
        }
        if ijk[..n].iter().all(|&v| v == 0) {
            break;
        }
    }
    let scale = median(&mut scale_samples).max(1e-300);

    // seeds: local grid minima at a plausible zero scale, plus anything
    // already at zero to tolerance (catches flat zero plateaus)
    let near_zero_cut = params.zero_tol.sqrt() * scale.max(1.0);
    let min_cut = 20.0 * h * scale;
    let mut seeds: Vec<VecN> = Vec::new();
    let mut ijk = [0usize; 3];
    loop {
        let here = norms[idx(&ijk)];
        if here.is_finite() {
            let mut is_min = true;
            for j in 0..n {
                for d in [-1isize, 1] {
                    let mut nb = ijk;
                    let v = nb[j] as isize + d;
                    if v < 0 || v as usize >= counts[j] {
                        continue;
                    }
                    nb[j] = v as usize;
                    if norms[idx(&nb)] < here {
                        is_min = false;
                    }
                }
            }
            if (is_min && here < min_cut) || here <= near_zero_cut {
                seeds.push(point_at(&ijk));
            }
        }
        let mut j = n;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            ijk[j] += 1;
            if ijk[j] < counts[j] {
                break;
            }
            ijk[j] = 0;
            if j == 0 {
                break;
            }
        }
        if ijk[..n].iter().all(|&v| v == 0) {
            break;
        }
    }
    if seeds.len() > 20_000 {
        return Err(Error::NonIsolatedZero {
            field_kind: "V".into(),
            witness: seeds[0],
            detail: "zero set at tolerance scale covers the scan grid".into(),
        });
    }
    for hint in &params.zero_hints {
        if hint.dim() == n && m.contains(hint) {
            seeds.push(*hint);
        }
    }

    // refine
    let eval = |u: &[f64]| -> Option<VecN> {
        let p = VecN::from_slice(u);
        eval_field(field, &p).ok()
    };
    let accept = params.zero_tol.sqrt() * scale.max(1.0);
    let mut found: Vec<(VecN, f64)> = Vec::new();
    for seed in seeds {
        let (u, resid, converged) = lm_refine(eval, seed.as_slice(), n);
        if !converged || resid > accept {
            continue;
        }
        let p = VecN::from_slice(&u);
        if !m.contains(&p) || m.boundary_distance(&p) < h {
            // boundary zeros are reported under the boundary kinds
            continue;
        }
        found.push((p, resid));
    }
    let deduped = dedup(found, 4.0 * h);

    // certificates
    let mut records = Vec::new();
    let positions: Vec<VecN> = deduped.iter().map(|(p, _)| *p).collect();
    for (p, resid) in &deduped {
        let ring = |r: f64| -> Vec<VecN> { ambient_ring(p, r, n) };
        let value_norm = |q: &VecN| -> Option<f64> { eval_field(field, q).ok().map(|v| v.norm()) };
        let iso = certify(
            p,
            &positions,
            ring,
            value_norm,
            accept,
            2.0 * h,
            m.boundary_distance(p),
        )
        .ok_or_else(|| Error::NonIsolatedZero {
            field_kind: "V".into(),
            witness: *p,
            detail: "isolation certificate failed".into(),
        })?;
        records.push(ZeroRecord {
            location: *p,
            kind: ZeroKind::InteriorZeroOfV,
            type_tag: ZeroType::NotApplicable,
            isolation_radius: iso,
            residual: *resid,
            component_id: None,
        });
    }
    Ok(records)
}

fn boundary_zeros(
    m: &ModelManifold,
    field: &FieldDef,
    kind: ZeroKind,
    params: &Params,
) -> Result<Vec<ZeroRecord>> {
    let h = params.grid_h;
    let mut records: Vec<ZeroRecord> = Vec::new();

    for comp in &m.boundary {
        let k = param_dim(&comp.shape);
        let grid = boundary_grid(&comp.shape, h);

        if k == 0 {
            // interval endpoints: evaluate directly
            let x = grid[0];
            let val = selected_value(kind, field, Some(&comp.shape), &x)
                .ok_or(Error::ConvergenceFailure { seed: x })?;
            let cutoff = params.zero_tol.sqrt();
            let is_zero = match kind {
                ZeroKind::ZeroOfBoundaryField => true, // always zero on points
                _ => val.norm() < cutoff,
            };
            if is_zero {
                let type_tag = if kind == ZeroKind::ZeroOfBoundaryField {
                    classify_boundary_zero(m, field, &x, params.zero_tol)?
                } else {
                    ZeroType::NotApplicable
                };
                records.push(ZeroRecord {
                    location: x,
                    kind,
                    type_tag,
                    isolation_radius: 0.1,
                    residual: val.norm(),
                    component_id: Some(comp.id),
                });
            }
            continue;
        }

        // scale estimate for seed cutoffs
        let mut sample_norms: Vec<f64> = grid
            .iter()
            .step_by((grid.len() / 512).max(1))
            .filter_map(|q| selected_value(kind, field, Some(&comp.shape), q).map(|v| v.norm()))
            .collect();
        let scale = median(&mut sample_norms).max(1e-300);
        let seed_cutoff = (10.0 * h * scale).max(params.zero_tol.sqrt());

        let mut seeds: Vec<VecN> = grid
            .iter()
            .filter(|q| {
                selected_value(kind, field, Some(&comp.shape), q)
                    .map(|v| v.norm() < seed_cutoff)
                    .unwrap_or(false)
            })
            .copied()
            .collect();
        for hint in &params.zero_hints {
            if hint.dim() == m.ambient_dim {
                let projected = project_to_component(&comp.shape, hint);
                if projected.dist(hint) < 0.3 {
                    seeds.push(projected);
                }
            }
        }

        let out_dim = match kind {
            ZeroKind::ZeroOfNormalField => 1,
            _ => m.ambient_dim,
        };
        let accept = params.zero_tol.sqrt() * scale.max(1.0);
        let mut found: Vec<(VecN, f64)> = Vec::new();
        for seed in seeds {
            // refine in a local frame, re-anchoring once
            let mut anchor = seed;
            let mut last = (anchor, f64::INFINITY, false);
            for _ in 0..2 {
                let param = local_boundary_param(&comp.shape, &anchor);
                let eval = |u: &[f64]| -> Option<VecN> {
                    selected_value(kind, field, Some(&comp.shape), &param(u))
                };
                let (u, resid, converged) = lm_refine(eval, &vec![0.0; k], out_dim);
                let q = param(&u);
                last = (q, resid, converged);
                anchor = q;
            }
            let (q, resid, converged) = last;
            if converged && resid <= accept {
                found.push((q, resid));
            }
        }
        let deduped = dedup(found, 4.0 * h);
        let positions: Vec<VecN> = deduped.iter().map(|(p, _)| *p).collect();

        for (q, resid) in &deduped {
            // sign test for the scalar normal field on a surface: an isolated
            // zero of a continuous scalar cannot change sign on a small ring
            if kind == ZeroKind::ZeroOfNormalField && k == 2 {
                let param = local_boundary_param(&comp.shape, q);
                let mut has_pos = false;
                let mut has_neg = false;
                for s in 0..96 {
                    let ang = std::f64::consts::TAU * s as f64 / 96.0;
                    let r = 6.0 * h;
                    let p = param(&[r * ang.cos(), r * ang.sin()]);
                    if let Some(v) = selected_value(kind, field, Some(&comp.shape), &p) {
                        if v[0] > 0.0 {
                            has_pos = true;
                        }
                        if v[0] < 0.0 {
                            has_neg = true;
                        }
                    }
                }
                if has_pos && has_neg {
                    return Err(Error::NonIsolatedZero {
                        field_kind: kind.as_str().into(),
                        witness: *q,
                        detail: "normal component changes sign around the zero".into(),
                    });
                }
            }

            let param = local_boundary_param(&comp.shape, q);
            let ring = |r: f64| -> Vec<VecN> {
                if k == 1 {
                    vec![param(&[r]), param(&[-r])]
                } else {
                    (0..64 * m.dim)
                        .map(|s| {
                            let ang = std::f64::consts::TAU * s as f64 / (64 * m.dim) as f64;
                            param(&[r * ang.cos(), r * ang.sin()])
                        })
                        .collect()
                }
            };
            let value_norm = |p: &VecN| -> Option<f64> {
                selected_value(kind, field, Some(&comp.shape), p).map(|v| v.norm())
            };
            let iso = certify(q, &positions, ring, value_norm, accept, 2.0 * h, f64::INFINITY)
                .ok_or_else(|| Error::NonIsolatedZero {
                    field_kind: kind.as_str().into(),
                    witness: *q,
                    detail: "isolation certificate failed".into(),
                })?;

            let type_tag = if kind == ZeroKind::ZeroOfBoundaryField {
                classify_boundary_zero(m, field, q, params.zero_tol)?
            } else {
                ZeroType::NotApplicable
            };
            records.push(ZeroRecord {
                location: *q,
                kind,
                type_tag,
                isolation_radius: iso,
                residual: *resid,
                component_id: Some(comp.id),
            });
        }
    }
    Ok(records)
}

/// Classify a zero of the boundary field by the chart-normal component of the
/// field: outward (`plus`), inward (`minus`), or a zero of the field itself
/// (`zero`). Values inside the band `(tol/10, tol)` signal a tolerance
/// misconfiguration and error out.
pub fn classify_boundary_zero(
    m: &ModelManifold,
    field: &FieldDef,
    z: &VecN,
    tol: f64,
) -> Result<ZeroType> {
    let chart = boundary_chart(m, z)?;
    let v = PushforwardField {
        chart: chart.clone(),
        field,
    }
    .eval(&chart.a())?;
    let normal = v[0];
    if normal < -tol {
        Ok(ZeroType::Plus)
    } else if normal > tol {
        Ok(ZeroType::Minus)
    } else if normal.abs() <= tol / 10.0 {
        Ok(ZeroType::Zero)
    } else {
        Err(Error::AmbiguousType {
            value: normal,
            lo: tol / 10.0,
            hi: tol,
        })
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn median(xs: &mut Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

fn dedup(mut found: Vec<(VecN, f64)>, radius: f64) -> Vec<(VecN, f64)> {
    found.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.as_slice().partial_cmp(b.0.as_slice()).unwrap())
    });
    let mut kept: Vec<(VecN, f64)> = Vec::new();
    for (p, r) in found {
        if kept.iter().all(|(q, _)| q.dist(&p) > radius) {
            kept.push((p, r));
        }
    }
    kept
}

fn ambient_ring(center: &VecN, r: f64, n: usize) -> Vec<VecN> {
    match n {
        1 => vec![*center + VecN::v1(r), *center - VecN::v1(r)],
        2 => (0..128)
            .map(|s| {
                let a = std::f64::consts::TAU * s as f64 / 128.0;
                *center + VecN::v2(r * a.cos(), r * a.sin())
            })
            .collect(),
        _ => {
            // Fibonacci sphere, deterministic
            let count = 192;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    *center + VecN::v3(r * rho * a.cos(), r * rho * a.sin(), r * z)
                })
                .collect()
        }
    }
}

/// Largest radius r <= 0.1 (halving schedule) such that the field norm stays
/// above `floor` on the sampled ring of radius r and no other located zero
/// sits within 2r. Returns `None` when no radius >= `r_min` qualifies.
fn certify<R, V>(
    center: &VecN,
    all: &[VecN],
    ring: R,
    value_norm: V,
    floor: f64,
    r_min: f64,
    max_inside: f64,
) -> Option<f64>
where
    R: Fn(f64) -> Vec<VecN>,
    V: Fn(&VecN) -> Option<f64>,
{
    let nearest_other = all
        .iter()
        .filter(|q| q.dist(center) > 1e-14)
        .map(|q| q.dist(center))
        .fold(f64::INFINITY, f64::min);
    let mut r = 0.1f64.min(max_inside.max(r_min));
    while r >= r_min {
        let spacing_ok = nearest_other >= 2.0 * r;
        if spacing_ok {
            let min_norm = ring(r)
                .iter()
                .map(|p| value_norm(p).unwrap_or(f64::INFINITY))
                .fold(f64::INFINITY, f64::min);
            if min_norm > floor {
                return Some(r);
            }
        }
        r *= 0.5;
    }
    None
}

fn project_to_component(shape: &ComponentShape, p: &VecN) -> VecN {
    match shape {
        ComponentShape::Point { x, .. } => VecN::v1(*x),
        ComponentShape::Circle { center, radius, .. } => {
            let d = *p - *center;
            *center + d.unit(1e-12).map(|u| u.scale(*radius)).unwrap_or(VecN::v2(*radius, 0.0))
        }
        ComponentShape::Sphere { radius } => p
            .unit(1e-12)
            .map(|u| u.scale(*radius))
            .unwrap_or(VecN::v3(*radius, 0.0, 0.0)),
        ComponentShape::Torus { major, minor } => {
            let (theta, psi) = crate::charts::manifolds::torus_angles(p, *major);
            crate::charts::manifolds::torus_point(theta, psi, *major, *minor)
        }
    }
}
