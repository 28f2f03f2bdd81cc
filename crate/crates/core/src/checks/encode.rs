use super::{CheckError, Condition};
use crate::boolfn::{BitVec, BoolMap, GateArena};
use crate::sat::{map_to_cnf, CnfFormula, Lit};

/// The Boolean linear map of the arc graph read off an upper signature:
/// `A(x)ᵢ = ∨ { x_j : f̄(e_j)ᵢ = 1 }`.
pub fn arc_map(upper: &BoolMap) -> BoolMap {
    let n = upper.n();
    let cols: Vec<BitVec> = (0..n)
        .map(|j| {
            let mut e = BitVec::zeros(n);
            e.set(j, true);
            upper.eval(&e).expect("dimension matches")
        })
        .collect();
    let mut arena = GateArena::new();
    let inputs: Vec<_> = (0..n).map(|j| arena.input(j)).collect();
    let outputs = (0..n)
        .map(|i| {
            let kids = (0..n).filter(|&j| cols[j].get(i)).map(|j| inputs[j]).collect();
            arena.or(kids)
        })
        .collect();
    BoolMap::new(n, arena, outputs)
}

fn named_block(cnf: &mut CnfFormula, prefix: &str, base: usize, n: usize) {
    for i in 0..n {
        cnf.name(format!("{prefix}{}", i + 1), base + i);
    }
}

/// Clauses for a nontrivial `x` over variables `1..=n` with `g(x) ≤ x`, and
/// additionally `g(x) ≥ x` when `equal` is set.
pub(crate) fn encode_subfixed(g: &BoolMap, equal: bool) -> CnfFormula {
    let n = g.n();
    let mut cnf = CnfFormula::new(n);
    named_block(&mut cnf, "x", 1, n);
    let out = map_to_cnf(&mut cnf, g, 1);
    cnf.push((1..=n).map(Lit::pos));
    cnf.push((1..=n).map(Lit::neg));
    for (i, &o) in out.iter().enumerate() {
        cnf.push([Lit::pos(i + 1), !o]);
        if equal {
            cnf.push([Lit::neg(i + 1), o]);
        }
    }
    cnf
}

/// CNF whose satisfiability means `condition` fails. Problem vector `x`
/// occupies variables `1..=n`; for imperturbability `y` occupies
/// `n+1..=2n`. Auxiliary gate variables follow.
pub fn encode(condition: Condition, lower: &BoolMap, upper: &BoolMap) -> Result<CnfFormula, CheckError> {
    let n = upper.n();
    if lower.n() != n {
        return Err(CheckError::DimensionMismatch {
            lower: lower.n(),
            upper: n,
        });
    }
    if n < 2 {
        return Err(CheckError::TooSmall { condition, n });
    }
    Ok(match condition {
        Condition::Facial => encode_subfixed(lower, false),
        Condition::Indecomposable => encode_subfixed(upper, false),
        Condition::Partial => encode_subfixed(lower, true),
        Condition::Graphical => encode_subfixed(&arc_map(upper), false),
        Condition::Imperturbable => {
            let mut cnf = CnfFormula::new(2 * n);
            named_block(&mut cnf, "x", 1, n);
            named_block(&mut cnf, "y", n + 1, n);
            let lo = map_to_cnf(&mut cnf, lower, 1);
            let up = map_to_cnf(&mut cnf, upper, n + 1);
            cnf.push((1..=n).map(Lit::pos));
            cnf.push((n + 1..=2 * n).map(Lit::neg));
            for i in 0..n {
                let (x, y) = (i + 1, n + i + 1);
                cnf.push([Lit::neg(x), Lit::pos(y)]);
                cnf.push([Lit::neg(x), lo[i]]);
                cnf.push([Lit::pos(y), !up[i]]);
            }
            cnf
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{solve, SolveOutcome};

    fn a_signatures() -> (BoolMap, BoolMap) {
        let g = BoolMap::parse(2, &["(x 2)", "(x 2)"]).unwrap();
        (g.clone(), g)
    }

    fn model_x(cnf: &CnfFormula, n: usize, offset: usize) -> BitVec {
        let SolveOutcome::Sat(a) = solve(cnf) else { panic!("expected SAT") };
        BitVec::from_bools((1..=n).map(|i| a.value(offset + i)))
    }

    #[test]
    fn partial_on_matrix_is_unsat() {
        let (lo, up) = a_signatures();
        assert_eq!(solve(&encode(Condition::Partial, &lo, &up).unwrap()), SolveOutcome::Unsat);
    }

    #[test]
    fn facial_on_matrix_finds_first_coordinate() {
        let (lo, up) = a_signatures();
        let cnf = encode(Condition::Facial, &lo, &up).unwrap();
        assert_eq!(model_x(&cnf, 2, 0).tuple(), "(1,0)");
    }

    #[test]
    fn imperturbable_on_e4() {
        let g = BoolMap::parse(2, &["(x 1)", "(or (x 1) (x 2))"]).unwrap();
        let cnf = encode(Condition::Imperturbable, &g, &g).unwrap();
        assert_eq!(model_x(&cnf, 2, 0).tuple(), "(0,1)");
        assert_eq!(model_x(&cnf, 2, 2).tuple(), "(0,1)");
        assert_eq!(cnf.symbol("y1"), Some(3));
    }

    #[test]
    fn e1_indecomposability_is_unsat() {
        let up = BoolMap::parse(3, &["(or (x 2) (x 3))", "(or (x 1) (x 3))", "(and (x 1) (x 2))"]).unwrap();
        let cnf = encode(Condition::Indecomposable, &up, &up).unwrap();
        assert_eq!(solve(&cnf), SolveOutcome::Unsat);
        assert_eq!(cnf.symbols().len(), 3);
    }

    #[test]
    fn small_dimension_is_rejected() {
        let g = BoolMap::identity(1);
        assert!(matches!(encode(Condition::Facial, &g, &g), Err(CheckError::TooSmall { .. })));
    }

    #[test]
    fn arc_map_of_e1() {
        let up = BoolMap::parse(3, &["(or (x 2) (x 3))", "(or (x 1) (x 3))", "(and (x 1) (x 2))"]).unwrap();
        let a = arc_map(&up);
        let want = BoolMap::parse(3, &["(or (x 2) (x 3))", "(or (x 1) (x 3))", "(const 0)"]).unwrap();
        assert!(a.equivalent(&want));
    }
}
