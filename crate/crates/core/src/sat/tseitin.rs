use super::{CnfFormula, Lit};
use crate::boolfn::{BoolCircuit, BoolMap, Gate, GateArena, GateRef};

/// Encodes the gates reachable from `roots`, mapping input `i` (0-based) to
/// variable `base + i`. Returns one literal per root.
fn encode(cnf: &mut CnfFormula, arena: &GateArena, roots: &[GateRef], base: usize) -> Vec<Lit> {
    let live = arena.reachable(roots);
    let mut lit: Vec<Option<Lit>> = vec![None; arena.len()];
    // Children are interned before their parents, so index order is topological.
    for (k, gate) in arena.gates().iter().enumerate() {
        if !live[k] {
            continue;
        }
        let kids = |c: &[GateRef]| -> Vec<Lit> { c.iter().map(|r| lit[r.index()].expect("child encoded")).collect() };
        lit[k] = Some(match gate {
            Gate::Input(i) => Lit::pos(base + i),
            Gate::Const(b) => {
                let g = Lit::pos(cnf.new_var());
                cnf.push([if *b { g } else { !g }]);
                g
            }
            Gate::And(c) => {
                let c = kids(c);
                let g = Lit::pos(cnf.new_var());
                for &x in &c {
                    cnf.push([!g, x]);
                }
                cnf.push(std::iter::once(g).chain(c.iter().map(|&x| !x)));
                g
            }
            Gate::Or(c) => {
                let c = kids(c);
                let g = Lit::pos(cnf.new_var());
                cnf.push(std::iter::once(!g).chain(c.iter().copied()));
                for &x in &c {
                    cnf.push([g, !x]);
                }
                g
            }
        });
    }
    roots.iter().map(|r| lit[r.index()].expect("root encoded")).collect()
}

/// Tseitin encoding of independent circuits sharing the input block starting
/// at variable `input_var_base`.
pub fn circuit_to_cnf(cnf: &mut CnfFormula, circuits: &[BoolCircuit], input_var_base: usize) -> Vec<Lit> {
    circuits
        .iter()
        .map(|c| encode(cnf, c.arena(), &[c.output()], input_var_base)[0])
        .collect()
}

/// Tseitin encoding of every output of a Boolean map, sharing common gates.
pub fn map_to_cnf(cnf: &mut CnfFormula, map: &BoolMap, input_var_base: usize) -> Vec<Lit> {
    encode(cnf, map.arena(), map.outputs(), input_var_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BitVec;
    use crate::sat::{model_check, solve, SolveOutcome};

    fn lits(c: &[i64]) -> Vec<Lit> {
        c.iter().map(|&v| Lit::from_dimacs(v).unwrap()).collect()
    }

    #[test]
    fn single_or_gate() {
        let c = BoolCircuit::parse(2, "(or (x 1) (x 2))").unwrap();
        let mut f = CnfFormula::new(2);
        let out = circuit_to_cnf(&mut f, &[c], 1);
        assert_eq!(out, [Lit::pos(3)]);
        assert_eq!(f.clauses(), [lits(&[-3, 1, 2]), lits(&[3, -1]), lits(&[3, -2])]);
    }

    #[test]
    fn single_and_gate() {
        let c = BoolCircuit::parse(2, "(and (x 1) (x 2))").unwrap();
        let mut f = CnfFormula::new(2);
        circuit_to_cnf(&mut f, &[c], 1);
        assert_eq!(f.clauses(), [lits(&[-3, 1]), lits(&[-3, 2]), lits(&[3, -1, -2])]);
    }

    #[test]
    fn input_gate_emits_nothing() {
        let c = BoolCircuit::parse(3, "(x 3)").unwrap();
        let mut f = CnfFormula::new(6);
        let out = circuit_to_cnf(&mut f, &[c], 4);
        assert_eq!(out, [Lit::pos(6)]);
        assert!(f.clauses().is_empty());
        assert_eq!(f.num_vars(), 6);
    }

    #[test]
    fn constants_get_unit_clauses() {
        let c = BoolCircuit::parse(1, "(const 1)").unwrap();
        let mut f = CnfFormula::new(1);
        let out = circuit_to_cnf(&mut f, &[c], 1);
        assert_eq!(f.clauses(), [vec![out[0]]]);
    }

    #[test]
    fn outputs_are_forced_to_circuit_values() {
        let g = BoolMap::parse(3, &["(or (x 1) (and (x 2) (x 3)))", "(and (x 1) (or (x 2) (x 3)))", "(x 2)"]).unwrap();
        for mask in 0..8u64 {
            let x = BitVec::from_mask(mask, 3);
            let want = g.eval(&x).unwrap();
            let mut f = CnfFormula::new(3);
            let out = map_to_cnf(&mut f, &g, 1);
            for i in 0..3 {
                f.push([Lit::new(i + 1, x.get(i))]);
            }
            let SolveOutcome::Sat(a) = solve(&f) else { panic!("inputs fixed, must be SAT") };
            assert!(model_check(&f, &a).unwrap());
            let got: Vec<bool> = out.iter().map(|&l| a.satisfies(l)).collect();
            assert_eq!(got, want.as_slice());
        }
    }
}
