// Spot checks of f(x^λ y^(1-λ)) <= f(x)^λ f(y)^(1-λ).

use rand::rngs::StdRng;
use rand::SeedableRng;
use topical::expr::{parse_map, MapExpr};
use topical::gen::MapGen;
use topical::spectral::{mconvexity_spot_check, MConvexity};

fn main() {
    let mut rng = StdRng::seed_from_u64(5);
    let maps = [
        ("E2", parse_map(include_str!("e2.map")).expect("parses")),
        ("[[1,1],[1,1]]", MapExpr::linear(&[vec![1.0, 1.0], vec![1.0, 1.0]])),
        ("random, exponents >= 0", MapGen::nonnegative(4).sample(&mut rng)),
        ("min(x1, x2)", parse_map("(entries (avg -inf (0.5 0.5)) (x 2))").expect("parses")),
    ];
    for (name, f) in maps {
        match mconvexity_spot_check(&f, 200, 1e-10, &mut rng).expect("evaluates") {
            MConvexity::Pass => println!("{name}: pass"),
            MConvexity::Violation { entry, lhs, rhs, lambda, .. } => {
                println!("{name}: entry {} violates at lambda = {lambda:.3}: {lhs:.6} > {rhs:.6}", entry + 1)
            }
        }
    }
}
