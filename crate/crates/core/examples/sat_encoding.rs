// Encode a condition as CNF, solve it, and exchange it as DIMACS.

use topical::checks::{encode, Checker, Condition};
use topical::expr::parse_map;
use topical::sat::{model_check, parse_dimacs, parse_model, solve, to_dimacs, SolveOutcome};

fn main() {
    let checker = Checker::new(&parse_map(include_str!("matrix_A.map")).expect("parses"));

    for cond in [Condition::Facial, Condition::Partial, Condition::Imperturbable] {
        let cnf = encode(cond, &checker.lower, &checker.upper).expect("n >= 2");
        println!("-- {cond}: {} variables, {} clauses", cnf.num_vars(), cnf.clauses().len());
        print!("{}", to_dimacs(&cnf));
        match solve(&cnf) {
            SolveOutcome::Sat(a) => {
                assert_eq!(model_check(&cnf, &a), Ok(true));
                let x: Vec<u8> = (1..=2).map(|v| u8::from(a.value(v))).collect();
                println!("SAT, so {cond} fails; x = {x:?}");
            }
            SolveOutcome::Unsat => println!("UNSAT, so {cond} holds"),
            SolveOutcome::Unknown => println!("decision cap reached"),
        }
    }

    // Round trip, and a model as an external solver would print it.
    let cnf = encode(Condition::Facial, &checker.lower, &checker.upper).expect("n >= 2");
    let text = to_dimacs(&cnf);
    assert_eq!(to_dimacs(&parse_dimacs(&text).expect("own output parses")), text);
    let external = "s SATISFIABLE\nv 1 -2 0\n";
    let a = parse_model(external, cnf.num_vars()).expect("complete model");
    println!("external model satisfies the formula: {}", model_check(&cnf, &a).expect("total"));
}
