//! Acceptance suite: each test evaluates one acceptance criterion end to end
//! and prints one pass line per checked identity. All equality checks are
//! exact (doubled-integer half-integer comparisons); no float tolerances
//! enter any verdict.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use vfindex::charts::{boundary_chart, LocalField, PushforwardField};
use vfindex::doubling::{collar_push, new_boundary_margin, pushed_zero_index};
use vfindex::indices::{normal_local_index, tangential_local_index};
use vfindex::verify::{
    verify_double_consistency, verify_section3_identities, verify_theorem1, verify_theorem2,
    verify_theorem3, verify_theorem4,
};
use vfindex::{
    find_zeros, intersection_number, normalize_map, oracle_degree, parse_field, Error, FieldDef,
    HalfInt, ManifoldName, ModelManifold, Params, Side, VecN, ZeroKind, ZeroType,
};

// ---------------------------------------------------------------------------
// fixture table (mirrors the scene files shipped under fixtures/)
// ---------------------------------------------------------------------------

const SWIRL: &str =
    "(x1*(1 - 2/sqrt(x1^2 + x2^2)) - 0.3*x2, x2*(1 - 2/sqrt(x1^2 + x2^2)) + 0.3*x1, x3)";
const BUMP: &str = "(-x1, -x2, -x3 + max(1 - 8*(x1^2 + x2^2 + (x3 - 1)^2), 0))";
const TILTED: &str = "(x3 - x1, -x2, -x1)";

fn params_for(name: ManifoldName) -> Params {
    let mut p = Params::default();
    if ModelManifold::get(name).dim == 3 {
        p.grid_h = 0.05;
    }
    p
}

fn scene(name: ManifoldName, src: &str) -> (ModelManifold, FieldDef, Params) {
    let m = ModelManifold::get(name);
    let f = parse_field(src, m.ambient_dim).unwrap();
    let p = params_for(name);
    (m, f, p)
}

fn theorem1_fixtures() -> Vec<(ManifoldName, &'static str)> {
    vec![
        (ManifoldName::Interval, "(x1 - 0.5)"),
        (ManifoldName::Interval, "(x1)"),
        (ManifoldName::Disk2, "(1, 0)"),
        (ManifoldName::Annulus, "(1, 0)"),
        (ManifoldName::Pants, "(1, 0)"),
        (ManifoldName::Ball3, "(1, 0, 0)"),
        (ManifoldName::SolidTorus, SWIRL),
    ]
}

// ---------------------------------------------------------------------------
// criterion 1: Theorem 1 on the fixture scenes, exactly, within 10 seconds
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_theorem1_exact_on_fixtures() {
    let start = Instant::now();
    for (name, src) in theorem1_fixtures() {
        let (m, f, p) = scene(name, src);
        let rep = verify_theorem1(&m, &f, &p).unwrap();
        assert!(
            rep.pass,
            "Theorem 1 failed on {name}/{src}: lhs={} rhs={}",
            rep.lhs, rep.rhs
        );
        assert_eq!(rep.lhs.doubled(), 2 * m.euler);
        println!("ACCEPT 1 PASS: T1 {name} {src}: {} = chi = {}", rep.lhs, rep.rhs);
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "Theorem 1 suite took {elapsed:?}, budget is 10 s"
    );
    println!("ACCEPT 1 PASS: runtime {elapsed:?} < 10 s");
}

// ---------------------------------------------------------------------------
// criterion 2: Theorem 2 across all three case rows
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_theorem2_all_rows() {
    let cases: Vec<(ManifoldName, &str, i64)> = vec![
        // n = 1 row: 1/2 = 1 - (1/2)*1 - 0
        (ManifoldName::Interval, "(x1)", 1),
        // n = 2 (even) row: 1 = chi(disk)
        (ManifoldName::Disk2, "(x1 - 1, x2)", 2),
        // n = 3 row with inward boundary = S^2: -1 = 1 - 2
        (ManifoldName::Ball3, "(-x1, -x2, -x3)", -2),
        // n = 3 row with empty inward boundary: 1 = 1 - 0
        (ManifoldName::Ball3, "(x1, x2, x3)", 2),
        // extra coverage: chi = 0 on the solid torus, no zeros at all
        (ManifoldName::SolidTorus, SWIRL, 0),
        // extra coverage: boundary zero with tangential index -1
        (ManifoldName::Ball3, BUMP, -2),
    ];
    for (name, src, expected_doubled) in cases {
        let (m, f, p) = scene(name, src);
        let rep = verify_theorem2(&m, &f, &p).unwrap();
        assert!(rep.pass, "Theorem 2 failed on {name}/{src}");
        assert_eq!(rep.lhs.doubled(), expected_doubled, "{name}/{src}");
        println!("ACCEPT 2 PASS: T2 {name} {src}: {} = {}", rep.lhs, rep.rhs);
    }
}

// ---------------------------------------------------------------------------
// criterion 3: Theorem 3 exact values
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_theorem3_values() {
    let cases: Vec<(ManifoldName, &str, i64)> = vec![
        (ManifoldName::Interval, "(x1 - 0.5)", 0), // odd dimension
        (ManifoldName::Disk2, "(1, 0)", 2),        // chi = 1, even dimension
        (ManifoldName::Ball3, "(1, 0, 0)", 0),     // odd dimension
    ];
    for (name, src, expected_doubled) in cases {
        let (m, f, p) = scene(name, src);
        let rep = verify_theorem3(&m, &f, &p).unwrap();
        assert!(rep.pass, "Theorem 3 failed on {name}/{src}");
        assert_eq!(rep.lhs.doubled(), expected_doubled);
        println!("ACCEPT 3 PASS: T3 {name} {src}: {} = {}", rep.lhs, rep.rhs);
    }
}

// ---------------------------------------------------------------------------
// criterion 4: Theorem 4, with vanishing tangential contributions at
// non-zeros of V in dimension 3 confirmed per zero
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_theorem4() {
    // disk with the constant field: the two tangencies contribute 1/2 each
    let (m, f, p) = scene(ManifoldName::Disk2, "(1, 0)");
    let rep = verify_theorem4(&m, &f, &p).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.lhs, HalfInt::from_int(1));
    let halves: Vec<HalfInt> = rep
        .bundle
        .per_zero
        .iter()
        .filter(|z| z.definition.contains("tangential"))
        .map(|z| z.index)
        .collect();
    assert_eq!(halves, vec![HalfInt::from_doubled(1), HalfInt::from_doubled(1)]);
    println!("ACCEPT 4 PASS: T4 disk2 (1, 0): 1/2 + 1/2 = 1 = chi");

    // ball with isolated tangencies at the poles: Theorem-2-consistent value
    // -1 = chi(ball) - chi(S^2) with both pole contributions exactly zero
    let (m, f, p) = scene(ManifoldName::Ball3, TILTED);
    let rep = verify_theorem4(&m, &f, &p).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.lhs, HalfInt::from_int(-1));
    let expanded: Vec<&vfindex::indices::PerZeroIndex> = rep
        .bundle
        .per_zero
        .iter()
        .filter(|z| z.definition == "tangential local index (expanded)")
        .collect();
    assert_eq!(expanded.len(), 2, "two pole tangencies expected");
    for z in &expanded {
        assert_eq!(z.index, HalfInt::ZERO, "pole contribution must vanish exactly");
        assert!(z.record.location[2].abs() > 0.999);
    }
    println!("ACCEPT 4 PASS: T4 ball3 {TILTED}: -1 = 1 - 2, pole contributions 0 exactly");

    // the literal constant field: its tangential index at a tangency point is
    // zero, and the aggregate theorem honestly reports the non-isolated
    // normal-field zero set instead of a number
    let (m, f, p) = scene(ManifoldName::Ball3, "(1, 0, 0)");
    let idx = tangential_local_index(&m, &f, &VecN::v3(0.0, 0.0, 1.0), &p).unwrap();
    assert_eq!(idx, HalfInt::ZERO);
    match verify_theorem4(&m, &f, &p) {
        Err(Error::NonIsolatedZero { .. }) => {}
        other => panic!("expected NonIsolatedZero for the equator tangency circle, got {other:?}"),
    }
    println!("ACCEPT 4 PASS: ball3 (1, 0, 0): per-point tangential index 0; aggregate rejects the non-isolated tangency circle");
}

// ---------------------------------------------------------------------------
// criterion 5: both aggregate identities behind Theorem 1, on every fixture
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_section3_identities() {
    for (name, src) in theorem1_fixtures() {
        let (m, f, p) = scene(name, src);
        let (a, b) = verify_section3_identities(&m, &f, &p).unwrap();
        assert!(a.pass, "(a) failed on {name}/{src}: {} vs {}", a.lhs, a.rhs);
        assert!(b.pass, "(b) failed on {name}/{src}: {} vs {}", b.lhs, b.rhs);
        println!(
            "ACCEPT 5 PASS: {name} {src}: (a) {} = {}; (b) {} = {} (rhs = chi of boundary)",
            a.lhs, a.rhs, b.lhs, b.rhs
        );
    }
}

// ---------------------------------------------------------------------------
// criterion 6: doubled and twisted-doubled local indices at every fixture
// boundary zero
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_double_consistency() {
    let cases: Vec<(ManifoldName, &str, VecN)> = vec![
        (ManifoldName::Interval, "(x1)", VecN::v1(0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(-1.0, 0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(0.0, 1.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(0.0, -1.0)),
        (ManifoldName::Disk2, "(x1 - 1, x2)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Ball3, "(1, 0, 0)", VecN::v3(1.0, 0.0, 0.0)),
        (ManifoldName::Ball3, "(1, 0, 0)", VecN::v3(-1.0, 0.0, 0.0)),
        (ManifoldName::Ball3, TILTED, VecN::v3(0.0, 0.0, 1.0)),
        (ManifoldName::Ball3, TILTED, VecN::v3(0.0, 0.0, -1.0)),
        (ManifoldName::Ball3, BUMP, VecN::v3(0.0, 0.0, 1.0)),
        (ManifoldName::Annulus, "(1, 0)", VecN::v2(2.0, 0.0)),
        (ManifoldName::Annulus, "(1, 0)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Pants, "(1, 0)", VecN::v2(3.0, 0.0)),
        (ManifoldName::Pants, "(1, 0)", VecN::v2(-0.5, 0.0)),
    ];
    for (name, src, pt) in cases {
        let (m, f, p) = scene(name, src);
        let rep = verify_double_consistency(&m, &f, &pt, &p).unwrap();
        assert!(
            rep.pass,
            "double check failed at {name}/{src} @ {pt:?}: {:?}",
            rep.hypothesis_log
        );
        println!("ACCEPT 6 PASS: {name} {src} @ {pt:?}: {:?}", rep.hypothesis_log);
    }
}

// ---------------------------------------------------------------------------
// criterion 7: oracle equivalence on fixtures and random polynomial fields
// ---------------------------------------------------------------------------

struct PolyField {
    dim: usize,
    // coefficient per component per monomial (exponent tuples)
    monos: Vec<[u32; 3]>,
    coeffs: Vec<Vec<f64>>,
}

impl LocalField for PolyField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, y: &VecN) -> vfindex::Result<VecN> {
        let mut out = VecN::zero(self.dim);
        for c in 0..self.dim {
            let mut s = 0.0;
            for (mono, coeff) in self.monos.iter().zip(&self.coeffs[c]) {
                let mut term = *coeff;
                for (j, &e) in mono.iter().take(self.dim).enumerate() {
                    term *= y[j].powi(e as i32);
                }
                s += term;
            }
            out[c] = s;
        }
        Ok(out)
    }
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize) -> PolyField {
    let mut monos = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            for c in 0..=3u32 {
                let used = a + b + if dim == 3 { c } else { 0 };
                if used <= 3 && (dim == 3 || c == 0) {
                    monos.push([a, b, c]);
                }
            }
        }
    }
    let coeffs = (0..dim)
        .map(|_| monos.iter().map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    PolyField { dim, monos, coeffs }
}

#[test]
fn criterion_07_oracle_equivalence() {
    let p = Params::default();
    // fixture boundary zeros: engine vs oracle on the directions each index
    // definition uses
    let fixture_probes: Vec<(ManifoldName, &str, VecN)> = vec![
        (ManifoldName::Interval, "(x1)", VecN::v1(0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(-1.0, 0.0)),
        (ManifoldName::Disk2, "(x1 - 1, x2)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Ball3, "(1, 0, 0)", VecN::v3(1.0, 0.0, 0.0)),
        (ManifoldName::Ball3, TILTED, VecN::v3(0.0, 0.0, 1.0)),
    ];
    for (name, src, pt) in fixture_probes {
        let (m, f, _) = scene(name, src);
        let chart = boundary_chart(&m, &pt).unwrap();
        let local = PushforwardField { chart: chart.clone(), field: &f };
        let map = normalize_map(&local, &chart.a(), 0.05, Side::Hemisphere, &p).unwrap();
        let mut dirs: Vec<VecN> = Vec::new();
        for i in 0..m.dim {
            dirs.push(VecN::basis(m.dim, i));
            dirs.push(-VecN::basis(m.dim, i));
        }
        let mut checked = 0;
        for d in dirs {
            if map.rim_margin(&d) < p.margin_min {
                continue;
            }
            let engine = intersection_number(&map, &d).unwrap();
            let oracle =
                oracle_degree(&local, &chart.a(), 0.05, Side::Hemisphere, &d, p.zero_tol).unwrap();
            assert_eq!(engine, oracle, "{name}/{src} @ {pt:?}, d = {d:?}");
            checked += 1;
        }
        assert!(checked > 0);
        println!("ACCEPT 7 PASS: {name} {src} @ {pt:?}: engine == oracle on {checked} directions");
    }

    // 20 random degree-<=3 polynomial fields per dimension, fixed seed
    for dim in [2usize, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut kept = 0;
        let mut attempts = 0;
        while kept < 20 && attempts < 400 {
            attempts += 1;
            let field = random_poly(&mut rng, dim);
            let a = VecN::zero(dim);
            for side in [Side::FullSphere, Side::Hemisphere] {
                let map = match normalize_map(&field, &a, 0.05, side, &p) {
                    Ok(m) => m,
                    Err(_) => continue, // field vanishes on the sphere: resample
                };
                let d = {
                    let mut d = VecN::zero(dim);
                    let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    d[0] = ang.cos();
                    d[1] = ang.sin();
                    if dim == 3 {
                        let z: f64 = rng.gen_range(-0.7..0.7);
                        d[2] = z;
                        d = d.unit(0.0).unwrap();
                    }
                    d
                };
                if side == Side::Hemisphere && map.rim_margin(&d) < p.margin_min {
                    continue;
                }
                let engine = match intersection_number(&map, &d) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let oracle = match oracle_degree(&field, &a, 0.05, side, &d, p.zero_tol) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                assert_eq!(engine, oracle, "dim {dim}, attempt {attempts}, {side:?}");
                kept += 1;
            }
        }
        assert!(kept >= 20, "only {kept} comparisons in dimension {dim}");
        println!("ACCEPT 7 PASS: dimension {dim}: engine == oracle on {kept} random polynomial maps");
    }
}

// ---------------------------------------------------------------------------
// criterion 8: invariance suites
// ---------------------------------------------------------------------------

fn scale_src(src: &str, dim: usize, c: f64) -> FieldDef {
    let f = parse_field(src, dim).unwrap();
    let comps: Vec<String> = f.components.iter().map(|e| format!("{c}*({e})")).collect();
    parse_field(&format!("({})", comps.join(", ")), dim).unwrap()
}

#[test]
fn criterion_08_invariance_suites() {
    // epsilon halving leaves every fixture boundary index unchanged
    let zero_pts: Vec<(ManifoldName, &str, VecN)> = vec![
        (ManifoldName::Interval, "(x1)", VecN::v1(0.0)),
        (ManifoldName::Disk2, "(1, 0)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Disk2, "(x1 - 1, x2)", VecN::v2(1.0, 0.0)),
        (ManifoldName::Ball3, "(1, 0, 0)", VecN::v3(1.0, 0.0, 0.0)),
        (ManifoldName::Ball3, TILTED, VecN::v3(0.0, 0.0, 1.0)),
    ];
    for (name, src, pt) in &zero_pts {
        let (m, f, p) = scene(*name, src);
        let mut half = p.clone();
        half.epsilon = p.epsilon / 2.0;
        let a = normal_local_index(&m, &f, pt, &p);
        let b = normal_local_index(&m, &f, pt, &half);
        match (a, b) {
            (Ok(x), Ok(y)) => assert_eq!(x, y, "normal index changed under eps halving"),
            // inadmissible at this point for both scales is also stable
            (Err(_), Err(_)) => {}
            (x, y) => panic!("eps halving changed admissibility: {x:?} vs {y:?}"),
        }
        let a = tangential_local_index(&m, &f, pt, &p);
        let b = tangential_local_index(&m, &f, pt, &half);
        match (a, b) {
            (Ok(x), Ok(y)) => assert_eq!(x, y, "tangential index changed under eps halving"),
            (Err(_), Err(_)) => {}
            (x, y) => panic!("eps halving changed admissibility: {x:?} vs {y:?}"),
        }
        println!("ACCEPT 8 PASS: eps-halving stable at {name} {src} @ {pt:?}");
    }

    // positive rescaling leaves the whole bundle unchanged
    for (name, src) in theorem1_fixtures() {
        let (m, f, p) = scene(name, src);
        let scaled = scale_src(src, m.ambient_dim, 3.0);
        let b1 = vfindex::compute_bundle(&m, &f, vfindex::IndexMode::Normal, &p).unwrap();
        let b2 = vfindex::compute_bundle(&m, &scaled, vfindex::IndexMode::Normal, &p).unwrap();
        assert_eq!(b1.ind_nu, b2.ind_nu, "{name}/{src}");
        assert_eq!(b1.ind_d_plus, b2.ind_d_plus);
        assert_eq!(b1.ind_d_minus, b2.ind_d_minus);
        assert_eq!(b1.ind_d_zero, b2.ind_d_zero);
        println!("ACCEPT 8 PASS: positive rescaling stable on {name} {src}");
    }

    // local constancy in d: perturbing an admissible direction by 1e-4 rad
    // never changes the intersection number
    for (name, src, pt) in &zero_pts {
        let (m, f, p) = scene(*name, src);
        if m.dim < 2 {
            continue;
        }
        let chart = boundary_chart(&m, pt).unwrap();
        let local = PushforwardField { chart: chart.clone(), field: &f };
        let map = normalize_map(&local, &chart.a(), 0.05, Side::Hemisphere, &p).unwrap();
        let mut checked = 0;
        for i in 0..m.dim {
            for sign in [1.0, -1.0] {
                let d = VecN::basis(m.dim, i).scale(sign);
                if map.rim_margin(&d) < p.margin_min + 2e-4 {
                    continue;
                }
                let base = intersection_number(&map, &d).unwrap();
                for k in 0..4 {
                    let mut q = VecN::zero(m.dim);
                    q[(i + 1) % m.dim] = 1.0;
                    let angle = 1e-4 * ((k + 1) as f64) / 4.0;
                    let d2 = (d.scale(angle.cos()) + q.scale(angle.sin())).unit(0.0).unwrap();
                    assert_eq!(intersection_number(&map, &d2).unwrap(), base);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
        println!("ACCEPT 8 PASS: local d-constancy at {name} {src} @ {pt:?} ({checked} probes)");
    }

    // tangent-coordinate rotation invariance (3-dimensional charts)
    {
        let (m, f, p) = scene(ManifoldName::Ball3, TILTED);
        let pt = VecN::v3(0.0, 0.0, 1.0);
        let chart = boundary_chart(&m, &pt).unwrap();
        let base_field = PushforwardField { chart: chart.clone(), field: &f };
        let phi = 0.73f64;
        let rot = move |v: &VecN| {
            VecN::v3(
                v[0],
                phi.cos() * v[1] - phi.sin() * v[2],
                phi.sin() * v[1] + phi.cos() * v[2],
            )
        };
        let rot_inv = move |v: &VecN| {
            VecN::v3(
                v[0],
                phi.cos() * v[1] + phi.sin() * v[2],
                -phi.sin() * v[1] + phi.cos() * v[2],
            )
        };
        let a = VecN::v3(1.0, 0.0, 0.0);
        let rotated = (3usize, move |y: &VecN| -> vfindex::Result<VecN> {
            let yr = rot_inv(&(*y - a)) + a;
            Ok(rot(&base_field.eval(&yr)?))
        });
        let base_field2 = PushforwardField { chart: chart.clone(), field: &f };
        let m0 = normalize_map(&base_field2, &a, 0.05, Side::Hemisphere, &p).unwrap();
        let m1 = normalize_map(&rotated, &a, 0.05, Side::Hemisphere, &p).unwrap();
        let mut checked = 0;
        for k in 0..8 {
            let ang = std::f64::consts::TAU * k as f64 / 8.0;
            let d = VecN::v3(0.0, ang.cos(), ang.sin());
            if m0.rim_margin(&d) < p.margin_min || m1.rim_margin(&rot(&d)) < p.margin_min {
                continue;
            }
            assert_eq!(
                intersection_number(&m0, &d).unwrap(),
                intersection_number(&m1, &rot(&d)).unwrap()
            );
            checked += 1;
        }
        assert!(checked >= 4);
        println!("ACCEPT 8 PASS: tangent rotation invariance on ball3 chart ({checked} directions)");
    }

    // equator independence in dimension 3: five directions agree
    for (name, src, pt) in [
        (ManifoldName::Ball3, TILTED, VecN::v3(0.0, 0.0, 1.0)),
        (ManifoldName::Ball3, BUMP, VecN::v3(0.0, 0.0, 1.0)),
    ] {
        let (m, f, p) = scene(name, src);
        let chart = boundary_chart(&m, &pt).unwrap();
        let local = PushforwardField { chart: chart.clone(), field: &f };
        let map = normalize_map(&local, &chart.a(), 0.05, Side::Hemisphere, &p).unwrap();
        let mut counts = Vec::new();
        let mut k = 0;
        while counts.len() < 5 && k < 64 {
            let ang = std::f64::consts::TAU * k as f64 / 64.0 + 0.05;
            k += 1;
            let d = VecN::v3(0.0, ang.cos(), ang.sin());
            if map.rim_margin(&d) < p.margin_min {
                continue;
            }
            counts.push(intersection_number(&map, &d).unwrap());
        }
        assert!(counts.len() >= 5);
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
        println!("ACCEPT 8 PASS: equator independence at {name} @ {pt:?}: counts {counts:?}");
    }
}

// ---------------------------------------------------------------------------
// criterion 9: the one-dimensional half-integer values, literally
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_one_dimensional_values() {
    let p = Params::default();
    // v with normalized value +1 at 1 + eps: i(v, 1; +-1) = +1/2
    let up = (1usize, |y: &VecN| -> vfindex::Result<VecN> { Ok(VecN::v1(y[0] - 1.0)) });
    let a = VecN::v1(1.0);
    let map = normalize_map(&up, &a, 0.05, Side::Hemisphere, &p).unwrap();
    assert_eq!(map.point_value(), 1.0);
    let avg = vfindex::averaged_index(&map, &VecN::v1(1.0)).unwrap();
    assert_eq!(avg, HalfInt::from_doubled(1));
    // v with normalized value -1: i(v, 1; +-1) = -1/2
    let down = (1usize, |y: &VecN| -> vfindex::Result<VecN> { Ok(VecN::v1(1.0 - y[0])) });
    let map = normalize_map(&down, &a, 0.05, Side::Hemisphere, &p).unwrap();
    assert_eq!(map.point_value(), -1.0);
    let avg = vfindex::averaged_index(&map, &VecN::v1(1.0)).unwrap();
    assert_eq!(avg, HalfInt::from_doubled(-1));
    println!("ACCEPT 9 PASS: i(v,1;+-1) = +1/2 when v(1+eps) points up, -1/2 when down");

    // and through the full pipeline on the interval fixtures
    let (m, f, _) = scene(ManifoldName::Interval, "(x1)");
    assert_eq!(
        normal_local_index(&m, &f, &VecN::v1(0.0), &p).unwrap(),
        HalfInt::from_doubled(1)
    );
    let (m, f, _) = scene(ManifoldName::Interval, "(x1 - 0.5)");
    assert_eq!(
        normal_local_index(&m, &f, &VecN::v1(0.0), &p).unwrap(),
        HalfInt::from_doubled(-1)
    );
    println!("ACCEPT 9 PASS: interval pipeline reproduces +-1/2");
}

// ---------------------------------------------------------------------------
// criterion 10: hypothesis violations fail loudly with witnesses
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_hypothesis_violations() {
    // plain tangential mode on the constant disk field aborts with a witness
    // at one of the tangency points (0, +-1)
    let (m, f, p) = scene(ManifoldName::Disk2, "(1, 0)");
    match verify_theorem2(&m, &f, &p) {
        Err(Error::HypothesisViolated { witness: Some(w), requirement }) => {
            assert!(
                w[0].abs() < 1e-4 && (w[1].abs() - 1.0).abs() < 1e-4,
                "witness {w:?} is not a tangency point"
            );
            println!("ACCEPT 10 PASS: T2 disk2 (1, 0) aborts: {requirement} at {w:?}");
        }
        other => panic!("expected HypothesisViolated with witness, got {other:?}"),
    }

    // the complex-square field's boundary part vanishes identically
    let (m, f, p) = scene(ManifoldName::Disk2, "((x1 - 1)^2 - x2^2, 2*(x1 - 1)*x2)");
    match find_zeros(&m, &f, ZeroKind::ZeroOfBoundaryField, &p) {
        Err(Error::NonIsolatedZero { witness, .. }) => {
            println!("ACCEPT 10 PASS: complex square triggers NonIsolatedZero near {witness:?}");
        }
        other => panic!("expected NonIsolatedZero, got {other:?}"),
    }
    match verify_theorem1(&m, &f, &p) {
        Err(e) if e.is_hypothesis_violation() => {}
        other => panic!("Theorem 1 must refuse the complex square, got {other:?}"),
    }
    println!("ACCEPT 10 PASS: both violations fail loudly, no numbers returned");
}

// ---------------------------------------------------------------------------
// collar push: boundary zeros move inside with unchanged indices
// ---------------------------------------------------------------------------

#[test]
fn collar_push_preserves_tangential_indices() {
    let (m, f, p) = scene(ManifoldName::Ball3, BUMP);
    let pushed = collar_push(&m, &f, 0, &p).unwrap();
    assert_eq!(pushed.side_sign, -1.0, "inward-type component");
    assert_eq!(pushed.pushed_zeros.len(), 1);
    let mut total_old = HalfInt::ZERO;
    for (z, old) in pushed.pushed_zeros.iter().zip(&pushed.old_tangential) {
        let new_index = pushed_zero_index(&pushed, z, &p).unwrap();
        assert_eq!(HalfInt::from_int(new_index), *old, "index changed across the collar push");
        total_old = total_old + *old;
    }
    assert_eq!(total_old, HalfInt::from_int(-1));
    let margin = new_boundary_margin(&pushed, &p).unwrap();
    assert!(margin > 0.0);
    println!("collar push: pole index preserved (-1), new boundary margin {margin:.3}");

    // vacuous push on the outward radial field
    let (m, f, p) = scene(ManifoldName::Ball3, "(x1, x2, x3)");
    let pushed = collar_push(&m, &f, 0, &p).unwrap();
    assert!(pushed.pushed_zeros.is_empty());
    assert!(new_boundary_margin(&pushed, &p).unwrap() > 0.5);

    // dimension guard
    let (m, f, p) = scene(ManifoldName::Disk2, "(1, 0)");
    match collar_push(&m, &f, 0, &p) {
        Err(Error::HypothesisViolated { .. }) => {}
        Err(other) => panic!("expected dimension guard, got {other:?}"),
        Ok(_) => panic!("collar push must reject 2-dimensional manifolds"),
    }
}

// ---------------------------------------------------------------------------
// per-zero consistency: classification types recorded in zero lists match
// the boundary-field indices used by the identities
// ---------------------------------------------------------------------------

#[test]
fn fixture_zero_tables() {
    let (m, f, p) = scene(ManifoldName::Disk2, "(1, 0)");
    let zs = find_zeros(&m, &f, ZeroKind::ZeroOfBoundaryField, &p).unwrap();
    let table: Vec<(f64, ZeroType)> = zs
        .iter()
        .map(|z| (z.location[0].round(), z.type_tag))
        .collect();
    assert_eq!(table, vec![(-1.0, ZeroType::Minus), (1.0, ZeroType::Plus)]);

    let (m, f, p) = scene(ManifoldName::Ball3, "(1, 0, 0)");
    let zs = find_zeros(&m, &f, ZeroKind::ZeroOfBoundaryField, &p).unwrap();
    assert_eq!(zs.len(), 2);
    assert_eq!(zs[0].type_tag, ZeroType::Minus); // (-1, 0, 0)
    assert_eq!(zs[1].type_tag, ZeroType::Plus); // (+1, 0, 0)
}
