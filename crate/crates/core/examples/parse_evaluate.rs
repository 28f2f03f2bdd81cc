// Parse a map description and evaluate it on interior and boundary points.

use topical::boolfn::BitVec;
use topical::expr::{parse_map, ExtPoint};

fn main() {
    let f = parse_map(include_str!("e1.map")).expect("e1.map parses");
    println!("map: {f}");
    println!("dimension: {}, class: {}", f.dim(), f.classify());

    let x = [1.0, 2.0, 4.0];
    println!("f{:?} = {:?}", x, f.eval_real(&x).expect("interior point"));

    // Boundary points: e_J has zeros off J, omega_J has infinities on J.
    for idx in [&[1usize][..], &[3], &[1, 2]] {
        let j = BitVec::from_indices(3, idx);
        let at_e = f.eval(&ExtPoint::indicator(&j)).expect("evaluates");
        let at_w = f.eval(&ExtPoint::omega(&j)).expect("evaluates");
        println!("J = {j}: f(e_J) = {:?}, f(omega_J) = {:?}", at_e.0, at_w.0);
    }

    // Large inputs are handled in log coordinates.
    let logs = f.eval_log(&[0.0, 800.0, 0.0]);
    println!("log f(1, e^800, 1) = {logs:?}");

    match parse_map("(entries (avg 2 (0.5 0.4)))") {
        Ok(_) => unreachable!("weights do not sum to one"),
        Err(e) => println!("rejected: {e}"),
    }
}
