// Upper and lower signatures, globally and at interior points.

use topical::expr::parse_map;
use topical::signature::{local_signatures, lower_signature, upper_signature, DEFAULT_TIE_TOL};

fn show(title: &str, g: &topical::boolfn::BoolMap) {
    let g = g.simplify();
    println!("{title}:");
    for i in 0..g.n() {
        println!("  {}: {}", i + 1, g.render(i));
    }
}

fn main() {
    for (name, src) in [("E1", include_str!("e1.map")), ("E2", include_str!("e2.map"))] {
        let f = parse_map(src).expect("example parses");
        show(&format!("{name} upper"), &upper_signature(&f));
        show(&format!("{name} lower"), &lower_signature(&f));
    }

    // Local signatures of f(x) = (x1, max(x1, x2)) depend on which argument is maximal.
    let e4 = parse_map(include_str!("e4.map")).expect("e4.map parses");
    for u in [[1.0, 2.0], [1.0, 1.0]] {
        let l = local_signatures(&e4, &u, DEFAULT_TIE_TOL).expect("interior point");
        show(&format!("E4 local upper at {u:?}"), &l.upper);
        show(&format!("E4 local lower at {u:?}"), &l.lower);
        for t in l.ties.ties() {
            println!("  tie at {}: argmax {}", t.path, t.argmax);
        }
    }
}
