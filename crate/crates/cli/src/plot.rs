//! Deterministic SVG plots for 1- and 2-dimensional scenes: manifold
//! outline, arrow glyphs on a grid, zeros marked by kind, and per-zero index
//! labels as exact fractions.

use crate::scene::Scene;
use std::fmt::Write as _;
use vfindex::charts::ComponentShape;
use vfindex::indices::{boundary_field_index, local_index_interior, normal_local_index};
use vfindex::{
    eval_field, find_zeros, parse_field, FieldDef, HalfInt, ModelManifold, Params, VecN, ZeroKind,
    ZeroType,
};

const SIZE: f64 = 700.0;

pub struct PlotError(pub String);

struct Mapper {
    scale: f64,
    cx: f64,
    cy: f64,
    x0: f64,
    y0: f64,
}

impl Mapper {
    fn new(lo: &VecN, hi: &VecN) -> Mapper {
        let (x0, x1) = (lo[0], hi[0]);
        let (y0, y1) = if lo.dim() >= 2 { (lo[1], hi[1]) } else { (-0.5, 0.5) };
        let w = x1 - x0;
        let h = y1 - y0;
        let scale = (SIZE - 80.0) / w.max(h);
        Mapper {
            scale,
            cx: 40.0 + scale * (w.max(h) - w) / 2.0,
            cy: 40.0 + scale * (w.max(h) - h) / 2.0,
            x0,
            y0: y1.max(y0 + w.max(h)), // flip y: svg grows downward
        }
    }

    fn map(&self, p: &VecN) -> (f64, f64) {
        let x = self.cx + self.scale * (p[0] - self.x0);
        let py = if p.dim() >= 2 { p[1] } else { 0.0 };
        let y = self.cy + self.scale * (self.y0 - py);
        (x, y)
    }
}

fn fmt_pt(v: f64) -> String {
    format!("{v:.2}")
}

fn label_for(
    m: &ModelManifold,
    f: &FieldDef,
    z: &VecN,
    tag: ZeroType,
    params: &Params,
) -> Result<HalfInt, PlotError> {
    match tag {
        ZeroType::Zero => {
            normal_local_index(m, f, z, params).map_err(|e| PlotError(e.to_string()))
        }
        _ => boundary_field_index(m, f, z, params)
            .map(HalfInt::from_int)
            .map_err(|e| PlotError(e.to_string())),
    }
}

pub fn render_svg(scene: &Scene) -> Result<String, PlotError> {
    let m = ModelManifold::get(scene.manifold);
    if m.dim == 3 {
        return Err(PlotError(format!(
            "unsupported dimension: {} is 3-dimensional, plots cover dimensions 1 and 2",
            m.name
        )));
    }
    let f = parse_field(&scene.field_src, m.ambient_dim).map_err(|e| PlotError(e.to_string()))?;
    let params = &scene.params;

    let (lo, hi) = m.bounding_box();
    let mapper = Mapper::new(&lo, &hi);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="20" y="24" font-family="monospace" font-size="14">{} | {}</text>"#,
        m.name, scene.field_src
    );

    // manifold outline
    for comp in &m.boundary {
        match &comp.shape {
            ComponentShape::Point { x, .. } => {
                let (px, py) = mapper.map(&VecN::v1(*x));
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
                    fmt_pt(px),
                    fmt_pt(py - 12.0),
                    fmt_pt(px),
                    fmt_pt(py + 12.0)
                );
            }
            ComponentShape::Circle { center, radius, .. } => {
                let (cx, cy) = mapper.map(center);
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                    fmt_pt(cx),
                    fmt_pt(cy),
                    fmt_pt(radius * mapper.scale)
                );
            }
            _ => {}
        }
    }
    if m.dim == 1 {
        let (ax, ay) = mapper.map(&VecN::v1(0.0));
        let (bx, by) = mapper.map(&VecN::v1(1.0));
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            fmt_pt(ax),
            fmt_pt(ay),
            fmt_pt(bx),
            fmt_pt(by)
        );
    }

    // quiver arrows on a grid
    let steps = 17usize;
    let mut positions: Vec<VecN> = Vec::new();
    if m.dim == 1 {
        for i in 0..=steps {
            positions.push(VecN::v1(i as f64 / steps as f64));
        }
    } else {
        for i in 0..=steps {
            for j in 0..=steps {
                let p = VecN::v2(
                    lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64,
                    lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64,
                );
                if m.boundary_distance(&p) > 1e-9 {
                    positions.push(p);
                }
            }
        }
    }
    let arrow_len = 0.55 * (hi[0] - lo[0]) / steps as f64 * mapper.scale;
    for p in &positions {
        let v = match eval_field(&f, p) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let u = match v.unit(1e-12) {
            Some(u) => u,
            None => continue,
        };
        let (x, y) = mapper.map(p);
        let (dx, dy) = if m.dim == 1 {
            (u[0], 0.0)
        } else {
            (u[0], -u[1]) // svg y grows downward
        };
        let (x2, y2) = (x + arrow_len * dx, y + arrow_len * dy);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="steelblue" stroke-width="1"/>"#,
            fmt_pt(x),
            fmt_pt(y),
            fmt_pt(x2),
            fmt_pt(y2)
        );
        // arrowhead
        let (hx, hy) = (x2 - 0.3 * arrow_len * dx, y2 - 0.3 * arrow_len * dy);
        let (nx, ny) = (-dy, dx);
        let s = 0.15 * arrow_len;
        let _ = writeln!(
            svg,
            r#"<polygon points="{},{} {},{} {},{}" fill="steelblue"/>"#,
            fmt_pt(x2),
            fmt_pt(y2),
            fmt_pt(hx + s * nx),
            fmt_pt(hy + s * ny),
            fmt_pt(hx - s * nx),
            fmt_pt(hy - s * ny)
        );
    }

    // zeros with glyphs and exact index labels
    let interior =
        find_zeros(&m, &f, ZeroKind::InteriorZeroOfV, params).map_err(|e| PlotError(e.to_string()))?;
    for z in &interior {
        let idx = local_index_interior(&m, &f, &z.location, params)
            .map_err(|e| PlotError(e.to_string()))?;
        let (x, y) = mapper.map(&z.location);
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="5" fill="black"/>"#,
            fmt_pt(x),
            fmt_pt(y)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="16">{}</text>"#,
            fmt_pt(x + 8.0),
            fmt_pt(y - 8.0),
            HalfInt::from_int(idx)
        );
    }
    let boundary = find_zeros(&m, &f, ZeroKind::ZeroOfBoundaryField, params)
        .map_err(|e| PlotError(e.to_string()))?;
    for z in &boundary {
        let (x, y) = mapper.map(&z.location);
        match z.type_tag {
            ZeroType::Plus => {
                // cross glyph
                for (a, b, c, d) in [(-6.0, 0.0, 6.0, 0.0), (0.0, -6.0, 0.0, 6.0)] {
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" stroke-width="2"/>"#,
                        fmt_pt(x + a),
                        fmt_pt(y + b),
                        fmt_pt(x + c),
                        fmt_pt(y + d)
                    );
                }
            }
            ZeroType::Minus => {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="6" fill="none" stroke="crimson" stroke-width="2"/>"#,
                    fmt_pt(x),
                    fmt_pt(y)
                );
            }
            _ => {
                // diamond for a type-0 zero
                let _ = writeln!(
                    svg,
                    r#"<polygon points="{},{} {},{} {},{} {},{}" fill="crimson"/>"#,
                    fmt_pt(x),
                    fmt_pt(y - 7.0),
                    fmt_pt(x + 7.0),
                    fmt_pt(y),
                    fmt_pt(x),
                    fmt_pt(y + 7.0),
                    fmt_pt(x - 7.0),
                    fmt_pt(y)
                );
            }
        }
        let label = label_for(&m, &f, &z.location, z.type_tag, params)?;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="16" fill="crimson">{}</text>"#,
            fmt_pt(x + 10.0),
            fmt_pt(y - 10.0),
            label
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
