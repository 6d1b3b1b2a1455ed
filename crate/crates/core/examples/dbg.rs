use vfindex::geom::VecN;
use vfindex::{parse_field, verify, ManifoldName, ModelManifold, Params};

fn main() {
    let mut p = Params::default();
    p.grid_h = 0.05;
    let m = ModelManifold::get(ManifoldName::Ball3);
    let src = "(-x1, -x2, -x3 + max(1 - 8*(x1^2 + x2^2 + (x3 - 1)^2), 0))";
    let f = parse_field(src, 3).unwrap();
    match verify::verify_double_consistency(&m, &f, &VecN::v3(0.0, 0.0, 1.0), &p) {
        Ok(r) => {
            println!("bump pole double: pass={}", r.pass);
            for l in &r.hypothesis_log { println!("  {l}"); }
        }
        Err(e) => println!("ERR: {e}"),
    }
    // also check normal index value there
    let nu = vfindex::indices::normal_local_index(&m, &f, &VecN::v3(0.0,0.0,1.0), &p);
    println!("ind_nu(pole) = {nu:?}");
    let t1 = verify::verify_theorem1(&m, &f, &p);
    match t1 { Ok(r) => println!("T1 bump: lhs={} rhs={} pass={}", r.lhs, r.rhs, r.pass), Err(e) => println!("T1 ERR {e}") }
    let t3 = verify::verify_theorem3(&m, &f, &p);
    match t3 { Ok(r) => println!("T3 bump: lhs={} rhs={} pass={}", r.lhs, r.rhs, r.pass), Err(e) => println!("T3 ERR {e}") }
}
