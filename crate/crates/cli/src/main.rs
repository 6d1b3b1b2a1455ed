//! Command-line front end: scene files in, structured JSON reports and SVG
//! plots out.
//!
//! Exit codes: 0 when every checked identity passes, 2 when a theorem
//! hypothesis is violated (including non-isolated zeros), 1 for any other
//! error (bad input, parse failure, numerical failure).

mod plot;
mod report;
mod scene;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vfindex::indices::{local_index_interior, normal_local_index, tangential_local_index};
use vfindex::verify::{
    verify_double_consistency, verify_section3_identities, verify_theorem1, verify_theorem2,
    verify_theorem3, verify_theorem4,
};
use vfindex::{
    catalog, find_zeros, parse_field, Error as CoreError, ModelManifold, TheoremReport, VecN,
    ZeroKind,
};

#[derive(Parser)]
#[command(
    name = "vfindex",
    version,
    about = "Local indices of vector field zeros on model manifolds, with exact index-identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremArg {
    #[value(name = "1")]
    T1,
    #[value(name = "2")]
    T2,
    #[value(name = "3")]
    T3,
    #[value(name = "4")]
    T4,
    #[value(name = "s3")]
    S3,
    #[value(name = "double")]
    Double,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IndexKind {
    Interior,
    Normal,
    Tangential,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of an index identity on a scene.
    Verify {
        #[arg(long)]
        scene: PathBuf,
        /// Which identity to check; defaults to the scene's `mode`.
        #[arg(long)]
        theorem: Option<TheoremArg>,
        /// Restrict the `double` check to one boundary zero "x,y[,z]".
        #[arg(long)]
        point: Option<String>,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a single local index at a point.
    Index {
        #[arg(long)]
        scene: PathBuf,
        /// Point "x,y[,z]" near the zero of interest.
        #[arg(long)]
        point: String,
        #[arg(long)]
        kind: IndexKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the scene as an SVG (dimensions 1 and 2).
    Plot {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the model manifolds.
    Catalog,
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => report::write_atomic(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn parse_point_arg(raw: &str, dim: usize) -> Result<VecN, String> {
    let coords: Result<Vec<f64>, _> = raw.split(',').map(|c| c.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|_| format!("cannot parse point `{raw}`"))?;
    if coords.len() != dim {
        return Err(format!(
            "point `{raw}` has {} coordinates, the manifold is {dim}-dimensional",
            coords.len()
        ));
    }
    Ok(VecN::from_slice(&coords))
}

enum RunError {
    /// Exit code 2: a theorem hypothesis failed.
    Hypothesis(String),
    /// Exit code 1.
    Other(String),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        if e.is_hypothesis_violation() {
            RunError::Hypothesis(e.to_string())
        } else {
            RunError::Other(e.to_string())
        }
    }
}

impl From<String> for RunError {
    fn from(s: String) -> Self {
        RunError::Other(s)
    }
}

fn load_scene(path: &Path) -> Result<scene::Scene, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Other(format!("cannot read {}: {e}", path.display())))?;
    scene::parse_scene(&text).map_err(|e| RunError::Other(e.to_string()))
}

fn run_verify(
    scene_path: &Path,
    theorem: Option<TheoremArg>,
    point: Option<String>,
    out: Option<&Path>,
) -> Result<bool, RunError> {
    let sc = load_scene(scene_path)?;
    let m = ModelManifold::get(sc.manifold);
    let f = parse_field(&sc.field_src, m.ambient_dim)?;
    let params = &sc.params;

    let theorem = match theorem {
        Some(t) => t,
        None => match sc.mode.as_deref() {
            Some("1") => TheoremArg::T1,
            Some("2") => TheoremArg::T2,
            Some("3") => TheoremArg::T3,
            Some("4") => TheoremArg::T4,
            Some("s3") => TheoremArg::S3,
            Some("double") => TheoremArg::Double,
            Some(other) => {
                return Err(RunError::Other(format!("unknown mode `{other}` in scene")))
            }
            None => {
                return Err(RunError::Other(
                    "no --theorem given and the scene has no `mode`".into(),
                ))
            }
        },
    };

    let reports: Vec<TheoremReport> = match theorem {
        TheoremArg::T1 => vec![verify_theorem1(&m, &f, params)?],
        TheoremArg::T2 => vec![verify_theorem2(&m, &f, params)?],
        TheoremArg::T3 => vec![verify_theorem3(&m, &f, params)?],
        TheoremArg::T4 => vec![verify_theorem4(&m, &f, params)?],
        TheoremArg::S3 => {
            let (a, b) = verify_section3_identities(&m, &f, params)?;
            vec![a, b]
        }
        TheoremArg::Double => {
            let points: Vec<VecN> = match &point {
                Some(raw) => vec![parse_point_arg(raw, m.ambient_dim)?],
                None => {
                    // every zero of the boundary field, plus isolated
                    // tangencies when the normal field allows them
                    let mut pts: Vec<VecN> =
                        find_zeros(&m, &f, ZeroKind::ZeroOfBoundaryField, params)?
                            .iter()
                            .map(|z| z.location)
                            .collect();
                    match find_zeros(&m, &f, ZeroKind::ZeroOfNormalField, params) {
                        Ok(zs) => {
                            for z in zs {
                                if pts.iter().all(|p| p.dist(&z.location) > 1e-5) {
                                    pts.push(z.location);
                                }
                            }
                        }
                        Err(e) if e.is_hypothesis_violation() => {
                            // tangency checks impossible; boundary-field
                            // zeros can still be verified
                        }
                        Err(e) => return Err(e.into()),
                    }
                    pts
                }
            };
            if points.is_empty() {
                return Err(RunError::Other(
                    "no boundary zeros found for the double check".into(),
                ));
            }
            let mut reports = Vec::new();
            for p in &points {
                reports.push(verify_double_consistency(&m, &f, p, params)?);
            }
            reports
        }
    };

    let value = if reports.len() == 1 {
        report::theorem_report_to_json(&reports[0], params)
    } else {
        report::multi_report_to_json(&reports, params)
    };
    let pass = reports.iter().all(|r| r.pass);
    emit(out, &serde_json::to_string_pretty(&value).unwrap())?;
    Ok(pass)
}

fn run_index(
    scene_path: &Path,
    point_raw: &str,
    kind: IndexKind,
    out: Option<&Path>,
) -> Result<(), RunError> {
    let sc = load_scene(scene_path)?;
    let m = ModelManifold::get(sc.manifold);
    let f = parse_field(&sc.field_src, m.ambient_dim)?;
    let mut params = sc.params.clone();
    let point = parse_point_arg(point_raw, m.ambient_dim)?;
    params.zero_hints.push(point);

    let zero_kind = match kind {
        IndexKind::Interior => ZeroKind::InteriorZeroOfV,
        IndexKind::Normal => ZeroKind::ZeroOfBoundaryField,
        IndexKind::Tangential => ZeroKind::ZeroOfNormalField,
    };
    let zeros = find_zeros(&m, &f, zero_kind, &params)?;
    let z = zeros
        .iter()
        .min_by(|a, b| {
            a.location
                .dist(&point)
                .partial_cmp(&b.location.dist(&point))
                .unwrap()
        })
        .filter(|z| z.location.dist(&point) < 0.3)
        .ok_or_else(|| {
            RunError::Other(format!(
                "no {} within 0.3 of the requested point",
                zero_kind.as_str()
            ))
        })?;

    let mut zero_params = params.clone();
    zero_params.epsilon = params.epsilon.min(0.5 * z.isolation_radius);
    let (index, kind_str) = match kind {
        IndexKind::Interior => (
            vfindex::HalfInt::from_int(local_index_interior(&m, &f, &z.location, &zero_params)?),
            "interior",
        ),
        IndexKind::Normal => (
            normal_local_index(&m, &f, &z.location, &zero_params)?,
            "normal",
        ),
        IndexKind::Tangential => (
            tangential_local_index(&m, &f, &z.location, &zero_params)?,
            "tangential",
        ),
    };

    // admissibility diagnostics at the radius the computation used
    let mut margins: Vec<(String, f64)> = Vec::new();
    if !matches!(kind, IndexKind::Interior) && m.dim >= 2 {
        if let Ok(chart) = vfindex::boundary_chart(&m, &z.location) {
            let local = vfindex::charts::PushforwardField {
                chart: chart.clone(),
                field: &f,
            };
            if let Ok(map) = vfindex::normalize_map(
                &local,
                &chart.a(),
                zero_params.epsilon.min(chart.max_radius),
                vfindex::Side::Hemisphere,
                &zero_params,
            ) {
                let mut dirs: Vec<(String, VecN)> = Vec::new();
                for (name, idx, sign) in [
                    ("+e1", 0usize, 1.0f64),
                    ("-e1", 0, -1.0),
                    ("+e2", 1, 1.0),
                    ("-e2", 1, -1.0),
                ] {
                    let mut d = VecN::zero(m.dim);
                    d[idx] = sign;
                    dirs.push((name.to_string(), d));
                }
                for (name, d) in dirs {
                    margins.push((name, map.rim_margin(&d)));
                }
            }
        }
    }

    let value = report::index_report_to_json(
        m.name.as_str(),
        &sc.field_src,
        kind_str,
        &z.location,
        index,
        zero_params.epsilon,
        z.isolation_radius,
        &margins,
        &params,
    );
    emit(out, &serde_json::to_string_pretty(&value).unwrap())?;
    Ok(())
}

fn run_plot(scene_path: &Path, out: &Path) -> Result<(), RunError> {
    let sc = load_scene(scene_path)?;
    let svg = plot::render_svg(&sc).map_err(|e| RunError::Other(e.0))?;
    report::write_atomic(out, &svg)
        .map_err(|e| RunError::Other(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}

fn run_catalog() {
    for m in catalog() {
        let boundary: Vec<String> = m
            .boundary
            .iter()
            .map(|c| format!("component {} (chi = {})", c.id, c.euler))
            .collect();
        println!(
            "{:<11} dim {}  chi = {:>2}  boundary: {}",
            m.name.to_string(),
            m.dim,
            m.euler,
            boundary.join(", ")
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, RunError> = match &cli.command {
        Command::Verify {
            scene,
            theorem,
            point,
            out,
        } => run_verify(scene, *theorem, point.clone(), out.as_deref()),
        Command::Index {
            scene,
            point,
            kind,
            out,
        } => run_index(scene, point, *kind, out.as_deref()).map(|_| true),
        Command::Plot { scene, out } => run_plot(scene, out).map(|_| true),
        Command::Catalog => {
            run_catalog();
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed: see report");
            ExitCode::from(1)
        }
        Err(RunError::Hypothesis(msg)) => {
            eprintln!("hypothesis violation: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
