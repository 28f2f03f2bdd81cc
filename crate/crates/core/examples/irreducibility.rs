// Decide all five conditions for the bundled examples with every engine.

use topical::checks::{Checker, Condition, Engine};
use topical::expr::parse_map;

fn main() {
    let maps = [
        ("e1.map", include_str!("e1.map")),
        ("e2.map", include_str!("e2.map")),
        ("matrix_A.map", include_str!("matrix_A.map")),
        ("e4.map", include_str!("e4.map")),
    ];
    for (name, src) in maps {
        let checker = Checker::new(&parse_map(src).expect("example parses"));
        println!("== {name} (class {})", checker.class);
        for cond in Condition::ALL {
            let report = checker.check(cond, Engine::Auto).expect("decidable");
            println!("{}", report.render_text());
            // Cross-check with the SAT engine.
            let sat = checker.check(cond, Engine::Sat).expect("decidable");
            assert_eq!(sat.verdict, report.verdict);
        }
    }
}
