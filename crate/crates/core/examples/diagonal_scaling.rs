// Diagonal rescalings D∘f of an imperturbable map keep a positive eigenvector.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use topical::checks::{Checker, Condition, Engine};
use topical::expr::{parse_map, MapExpr};
use topical::spectral::{power_iteration, PowerOptions};

fn main() {
    let a = parse_map(include_str!("matrix_A.map")).expect("parses");
    let e2 = parse_map(include_str!("e2.map")).expect("parses");
    let mut rng = StdRng::seed_from_u64(11);
    for (name, f) in [("matrix_A", a), ("E2", e2)] {
        let imp = Checker::new(&f).check(Condition::Imperturbable, Engine::Auto).expect("decidable");
        println!("{name}: imperturbable {}", imp.verdict);
        for _ in 0..3 {
            let d: Vec<f64> = (0..f.dim()).map(|_| rng.random_range(0.2..5.0)).collect();
            let g = MapExpr::diag(d.clone(), f.clone());
            let r = power_iteration(&g, &vec![1.0; g.dim()], &PowerOptions::default()).expect("interior");
            println!(
                "  D = {d:.3?}: converged {}, eigenvalue {:.6}, eigenvector {:.6?}",
                r.converged, r.eigenvalue, r.vector
            );
        }
    }

    // The identity is not imperturbable, and D∘id has no positive eigenvector
    // unless D is constant: iteration drifts to the boundary.
    let id = MapExpr::identity(2);
    let r = power_iteration(&MapExpr::diag(vec![1.0, 2.0], id), &[1.0, 1.0], &PowerOptions::default())
        .expect("interior");
    println!("D∘id: converged {}, {}", r.converged, r.diagnostic.unwrap_or_default());
}
