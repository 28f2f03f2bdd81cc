use std::fmt::Write;

use crate::boolfn::BitVec;
use crate::expr::MapExpr;
use crate::signature::upper_signature;

/// A directed graph on nodes `0..n` with its strongly connected components.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    n: usize,
    succ: Vec<Vec<usize>>,
    /// Components in topological order of the condensation.
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    finals: Vec<usize>,
}

impl Digraph {
    /// Builds the graph from 0-based arcs and runs Tarjan's algorithm.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut succ = vec![Vec::new(); n];
        for (i, j) in arcs {
            assert!(i < n && j < n, "arc ({i}, {j}) outside {n} nodes");
            succ[i].push(j);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut emitted = tarjan(&succ);
        // Tarjan emits sink components first.
        emitted.reverse();
        let mut component_of = vec![0; n];
        for (c, members) in emitted.iter_mut().enumerate() {
            members.sort_unstable();
            for &v in members.iter() {
                component_of[v] = c;
            }
        }
        let finals = (0..emitted.len())
            .filter(|&c| emitted[c].iter().all(|&v| succ[v].iter().all(|&w| component_of[w] == c)))
            .collect();
        Digraph {
            n,
            succ,
            components: emitted,
            component_of,
            finals,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.succ[i].binary_search(&j).is_ok()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    /// All arcs in lexicographic order, 0-based.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| self.succ[i].iter().map(move |&j| (i, j))).collect()
    }

    /// Strongly connected components, topologically ordered by the
    /// condensation (a component comes before every component it reaches).
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// Arcs between distinct components, as component indices.
    pub fn condensation_arcs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .arcs()
            .into_iter()
            .map(|(i, j)| (self.component_of[i], self.component_of[j]))
            .filter(|(a, b)| a != b)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Indices of components with no arc leaving them.
    pub fn final_components(&self) -> &[usize] {
        &self.finals
    }

    pub fn final_classes(&self) -> Vec<BitVec> {
        self.finals.iter().map(|&c| self.component_set(c)).collect()
    }

    pub fn component_set(&self, c: usize) -> BitVec {
        let mut b = BitVec::zeros(self.n);
        for &v in &self.components[c] {
            b.set(v, true);
        }
        b
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() <= 1
    }

    /// Graphviz rendering with one cluster per component and final classes
    /// drawn with a double border. Nodes are labelled 1-based.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for (c, members) in self.components.iter().enumerate() {
            let final_class = self.finals.contains(&c);
            let _ = writeln!(out, "  subgraph cluster_{c} {{");
            let _ = writeln!(
                out,
                "    label=\"{}{}\";",
                self.component_set(c),
                if final_class { " final" } else { "" }
            );
            for &v in members {
                if final_class {
                    let _ = writeln!(out, "    {} [peripheries=2];", v + 1);
                } else {
                    let _ = writeln!(out, "    {};", v + 1);
                }
            }
            out.push_str("  }\n");
        }
        for (i, j) in self.arcs() {
            let _ = writeln!(out, "  {} -> {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }
}

fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // Explicit call stack of (node, next successor position).
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(comp);
            }
        }
    }
    out
}

/// The arc graph of `f`: an arc `i → j` iff `f̄(e_j)ᵢ = 1`.
pub fn adjacency_graph(f: &MapExpr) -> Digraph {
    let upper = upper_signature(f);
    let n = upper.n();
    let mut arcs = Vec::new();
    for j in 0..n {
        let mut e = BitVec::zeros(n);
        e.set(j, true);
        let col = upper.eval(&e).expect("dimension matches");
        arcs.extend((0..n).filter(|&i| col.get(i)).map(|i| (i, j)));
    }
    Digraph::new(n, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_map;

    const E1: &str = "(entries (+ (x 2) (x 3)) (+ (x 1) (x 3)) (* 0.5 (avg -1 (0.5 0.5 0))))";

    #[test]
    fn e1_graph() {
        let g = adjacency_graph(&parse_map(E1).unwrap());
        assert_eq!(g.arcs(), [(0, 1), (0, 2), (1, 0), (1, 2)]);
        assert_eq!(g.components(), [vec![0, 1], vec![2]]);
        assert_eq!(g.final_classes(), [BitVec::from_indices(3, &[3])]);
        assert!(!g.is_strongly_connected());
        assert_eq!(g.condensation_arcs(), [(0, 1)]);
    }

    #[test]
    fn e2_graph_is_complete() {
        let e2 = "(entries (+ (x 1) (avg 0 (0.5 0.5))) (+ (x 2) (avg 0 (0.5 0.5))))";
        let g = adjacency_graph(&parse_map(e2).unwrap());
        assert_eq!(g.arcs().len(), 4);
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn identity_graph_has_three_final_loops() {
        let g = adjacency_graph(&MapExpr::identity(3));
        assert_eq!(g.arcs(), [(0, 0), (1, 1), (2, 2)]);
        assert_eq!(g.components().len(), 3);
        assert_eq!(g.final_components().len(), 3);
    }

    #[test]
    fn cycle_with_tail() {
        // 0 → 1 → 2 → 0, 3 → 0, 2 → 4
        let g = Digraph::new(5, [(0, 1), (1, 2), (2, 0), (3, 0), (2, 4)]);
        assert_eq!(g.components(), [vec![3], vec![0, 1, 2], vec![4]]);
        assert_eq!(g.final_components(), [2]);
    }

    #[test]
    fn dot_marks_final_classes() {
        let dot = adjacency_graph(&parse_map(E1).unwrap()).to_dot();
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("3 [peripheries=2];"));
        assert!(dot.contains("label=\"{3} final\""));
        assert!(dot.contains("label=\"{1,2}\""));
    }
}
