// Positive eigenpairs by normalized power iteration.

use topical::expr::{parse_map, MapExpr};
use topical::spectral::{collatz_wielandt, power_iteration, PowerOptions};

fn main() {
    let opts = PowerOptions::default();

    let e2 = parse_map(include_str!("e2.map")).expect("parses");
    let r = power_iteration(&e2, &[3.0, 1.0], &opts).expect("interior start");
    println!("E2 from (3,1):\n{}\n", r.render_text());

    let a = MapExpr::linear(&[vec![2.0, 1.0, 0.5], vec![1.0, 3.0, 1.0], vec![0.2, 0.4, 1.0]]);
    let mut brackets = Vec::new();
    let r = topical::spectral::power_iteration_observed(&a, &[1.0, 1.0, 1.0], &opts, |s| {
        brackets.push((s.alpha, s.beta))
    })
    .expect("interior start");
    println!("positive matrix:\n{}", r.render_text());
    for (k, (lo, hi)) in brackets.iter().take(5).enumerate() {
        println!("  bracket at iterate {k}: [{lo:.6}, {hi:.6}]");
    }

    println!("\nCollatz-Wielandt bracket of E1 at (1,1,1): {:?}", collatz_wielandt(
        &parse_map(include_str!("e1.map")).expect("parses"),
        &[1.0, 1.0, 1.0],
    ).expect("interior"));

    // A period-two orbit: reported, not an error.
    let swap = parse_map(include_str!("swap.map")).expect("parses");
    let r = power_iteration(&swap, &[2.0, 1.0], &PowerOptions { tol: 1e-10, max_iter: 50 }).expect("interior");
    println!("\nswap from (2,1): converged = {}, {}", r.converged, r.diagnostic.unwrap_or_default());
}
