// The arc graph of a map: strongly connected components, final classes, DOT.

use topical::checks::adjacency_graph;
use topical::expr::parse_map;

fn main() {
    for (name, src) in [("e1.map", include_str!("e1.map")), ("e4.map", include_str!("e4.map"))] {
        let g = adjacency_graph(&parse_map(src).expect("parses"));
        let arcs: Vec<String> = g.arcs().iter().map(|(i, j)| format!("{}->{}", i + 1, j + 1)).collect();
        println!("{name}: arcs {}", arcs.join(" "));
        for c in 0..g.components().len() {
            let final_class = g.final_components().contains(&c);
            println!("  component {}{}", g.component_set(c), if final_class { " (final)" } else { "" });
        }
        println!("  strongly connected: {}", g.is_strongly_connected());
        print!("{}", g.to_dot());
    }
}
