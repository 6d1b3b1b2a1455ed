//! Structured report emission. Half-integers serialize as
//! `{"num": k, "den": 1 or 2}` so values stay exact in transit; reports are
//! built field-by-field in a fixed order, making output byte-reproducible
//! for a fixed scene and seed.

use serde_json::{json, Map, Value};
use std::fs;
use std::io::Write;
use std::path::Path;
use vfindex::indices::{IndexBundle, PerZeroIndex};
use vfindex::{HalfInt, Params, TheoremReport, VecN};

pub fn half_to_json(h: HalfInt) -> Value {
    let (num, den) = h.num_den();
    json!({ "num": num, "den": den })
}

#[cfg(test)]
pub fn half_from_json(v: &Value) -> Option<HalfInt> {
    let num = v.get("num")?.as_i64()?;
    let den = v.get("den")?.as_i64()?;
    match den {
        1 => Some(HalfInt::from_int(num)),
        2 => Some(HalfInt::from_doubled(num)),
        _ => None,
    }
}

fn point_to_json(p: &VecN) -> Value {
    Value::Array(p.as_slice().iter().map(|x| json!(x)).collect())
}

fn per_zero_to_json(pz: &PerZeroIndex) -> Value {
    let mut m = Map::new();
    m.insert("location".into(), point_to_json(&pz.record.location));
    m.insert("kind".into(), json!(pz.record.kind.as_str()));
    m.insert("type".into(), json!(pz.record.type_tag.as_str()));
    m.insert("index".into(), half_to_json(pz.index));
    m.insert("definition".into(), json!(pz.definition));
    m.insert(
        "isolation_radius".into(),
        json!(pz.record.isolation_radius),
    );
    m.insert("residual".into(), json!(pz.record.residual));
    Value::Object(m)
}

fn bundle_to_json(b: &IndexBundle) -> Value {
    let mut m = Map::new();
    m.insert("mode".into(), json!(b.mode.as_str()));
    m.insert("interior_sum".into(), half_to_json(b.interior_sum));
    let opt = |v: Option<HalfInt>| v.map(half_to_json).unwrap_or(Value::Null);
    m.insert("ind_nu".into(), opt(b.ind_nu));
    m.insert("ind_tau".into(), opt(b.ind_tau));
    m.insert("ind_d_plus".into(), json!(b.ind_d_plus));
    m.insert("ind_d_minus".into(), json!(b.ind_d_minus));
    m.insert("ind_d_zero".into(), json!(b.ind_d_zero));
    m.insert("ind_star_nu".into(), opt(b.ind_star_nu));
    m.insert("ind_star_tau".into(), opt(b.ind_star_tau));
    m.insert(
        "per_zero".into(),
        Value::Array(b.per_zero.iter().map(per_zero_to_json).collect()),
    );
    m.insert(
        "boundary_classes".into(),
        Value::Array(
            b.boundary_classes
                .iter()
                .map(|(id, c)| json!({ "component": id, "class": c.as_str() }))
                .collect(),
        ),
    );
    Value::Object(m)
}

fn options_to_json(p: &Params) -> Value {
    json!({
        "epsilon": p.epsilon,
        "tol": p.zero_tol,
        "grid_h": p.grid_h,
        "margin_min": p.margin_min,
        "seed": p.seed,
    })
}

pub fn theorem_report_to_json(rep: &TheoremReport, params: &Params) -> Value {
    let mut m = Map::new();
    m.insert("theorem".into(), json!(rep.theorem.as_str()));
    m.insert("manifold".into(), json!(rep.manifold.as_str()));
    m.insert("field".into(), json!(rep.field_src));
    m.insert("lhs".into(), half_to_json(rep.lhs));
    m.insert("rhs".into(), half_to_json(rep.rhs));
    m.insert("pass".into(), json!(rep.pass));
    m.insert("metric_note".into(), json!(rep.metric_note));
    m.insert(
        "hypotheses".into(),
        Value::Array(rep.hypothesis_log.iter().map(|s| json!(s)).collect()),
    );
    m.insert("bundle".into(), bundle_to_json(&rep.bundle));
    m.insert("options".into(), options_to_json(params));
    Value::Object(m)
}

pub fn multi_report_to_json(reports: &[TheoremReport], params: &Params) -> Value {
    let pass = reports.iter().all(|r| r.pass);
    let mut m = Map::new();
    m.insert("pass".into(), json!(pass));
    m.insert(
        "reports".into(),
        Value::Array(
            reports
                .iter()
                .map(|r| theorem_report_to_json(r, params))
                .collect(),
        ),
    );
    Value::Object(m)
}

/// Single-index report with admissibility diagnostics.
#[allow(clippy::too_many_arguments)]
pub fn index_report_to_json(
    manifold: &str,
    field: &str,
    kind: &str,
    point: &VecN,
    index: HalfInt,
    epsilon_used: f64,
    isolation_radius: f64,
    rim_margins: &[(String, f64)],
    params: &Params,
) -> Value {
    let mut m = Map::new();
    m.insert("manifold".into(), json!(manifold));
    m.insert("field".into(), json!(field));
    m.insert("kind".into(), json!(kind));
    m.insert("point".into(), point_to_json(point));
    m.insert("index".into(), half_to_json(index));
    m.insert(
        "diagnostics".into(),
        json!({
            "epsilon_used": epsilon_used,
            "isolation_radius": isolation_radius,
            "rim_margins": rim_margins.iter()
                .map(|(d, v)| json!({"direction": d, "margin": v}))
                .collect::<Vec<_>>(),
        }),
    );
    m.insert("options".into(), options_to_json(params));
    Value::Object(m)
}

/// Write atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_round_trips() {
        for h in [
            HalfInt::from_int(3),
            HalfInt::from_doubled(-1),
            HalfInt::ZERO,
            HalfInt::from_doubled(5),
        ] {
            let v = half_to_json(h);
            assert_eq!(half_from_json(&v), Some(h));
        }
    }
}
