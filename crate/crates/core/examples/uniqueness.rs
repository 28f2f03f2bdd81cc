// Conditions (M) and (N) at a point: is the positive eigenvector unique?

use topical::checks::Engine;
use topical::expr::parse_map;
use topical::sat::SolverConfig;
use topical::signature::DEFAULT_TIE_TOL;
use topical::spectral::{condition_m, condition_n, power_iteration, PowerOptions};

fn main() {
    let cfg = SolverConfig::default();

    let e2 = parse_map(include_str!("e2.map")).expect("parses");
    let u = power_iteration(&e2, &[1.0, 5.0], &PowerOptions::default()).expect("interior").vector;
    for r in [
        condition_m(&e2, &u, Engine::Auto, DEFAULT_TIE_TOL, &cfg),
        condition_n(&e2, &u, Engine::Auto, DEFAULT_TIE_TOL, &cfg),
    ] {
        println!("E2: {}", r.expect("decidable").render_text());
    }

    // f(x) = (x1, max(x1, x2)) has the eigenvectors (1, t) for every t >= 1.
    let e4 = parse_map(include_str!("e4.map")).expect("parses");
    for u in [[1.0, 2.0], [1.0, 1.0]] {
        for engine in [Engine::Brute, Engine::Sat] {
            let r = condition_n(&e4, &u, engine, DEFAULT_TIE_TOL, &cfg).expect("decidable");
            println!("E4: {}", r.render_text());
        }
    }
    let r = condition_m(&e4, &[1.0, 1.0], Engine::Auto, DEFAULT_TIE_TOL, &cfg).expect("decidable");
    println!("E4: {}", r.render_text());

    // Away from an eigenvector the encoding still runs, but the verdict is flagged.
    let r = condition_n(&e2, &[1.0, 3.0], Engine::Auto, DEFAULT_TIE_TOL, &cfg).expect("decidable");
    println!("E2 off the eigenvector: {}", r.render_text());
}
