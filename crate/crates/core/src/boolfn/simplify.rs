//! Local rewriting: constant folding, flattening, duplicate removal and absorption.

use super::circuit::{BoolCircuit, BoolMap, Gate, GateArena, GateRef};

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    And,
    Or,
}

fn children_of(arena: &GateArena, r: GateRef, kind: Kind) -> Option<&[GateRef]> {
    match (arena.gate(r), kind) {
        (Gate::And(c), Kind::And) | (Gate::Or(c), Kind::Or) => Some(c),
        _ => None,
    }
}

fn is_subset(small: &[GateRef], big: &[GateRef]) -> bool {
    small.iter().all(|s| big.binary_search(s).is_ok())
}

fn rebuild(dst: &mut GateArena, kind: Kind, simplified: &[GateRef]) -> GateRef {
    // Identity and absorbing constants for this gate kind.
    let (unit, zero) = match kind {
        Kind::And => (true, false),
        Kind::Or => (false, true),
    };
    let mut kids = Vec::with_capacity(simplified.len());
    for &c in simplified {
        match dst.gate(c) {
            Gate::Const(b) if *b == unit => {}
            Gate::Const(_) => return dst.constant(zero),
            _ => match children_of(dst, c, kind) {
                Some(inner) => kids.extend_from_slice(inner),
                None => kids.push(c),
            },
        }
    }
    kids.sort_unstable();
    kids.dedup();

    // Absorption: a ∧ (a ∨ b) = a and (a ∨ b) ∧ (a ∨ b ∨ c) = a ∨ b, and dually.
    let dual = match kind {
        Kind::And => Kind::Or,
        Kind::Or => Kind::And,
    };
    let keep: Vec<bool> = kids
        .iter()
        .map(|&d| {
            let Some(dk) = children_of(dst, d, dual) else {
                return true;
            };
            !kids.iter().any(|&s| {
                s != d
                    && match children_of(dst, s, dual) {
                        Some(sk) => sk.len() < dk.len() && is_subset(sk, dk),
                        None => dk.binary_search(&s).is_ok(),
                    }
            })
        })
        .collect();
    let kids: Vec<GateRef> = kids
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect();

    match (kids.len(), kind) {
        (0, _) => dst.constant(unit),
        (1, _) => kids[0],
        (_, Kind::And) => dst.intern(Gate::And(kids)),
        (_, Kind::Or) => dst.intern(Gate::Or(kids)),
    }
}

fn simplify_roots(src: &GateArena, roots: &[GateRef]) -> (GateArena, Vec<GateRef>) {
    let live = src.reachable(roots);
    let mut dst = GateArena::new();
    // Inputs first, so sorting children by reference sorts inputs by index.
    for i in 0..=max_input(src) {
        dst.input(i);
    }
    let mut image: Vec<Option<GateRef>> = vec![None; src.len()];
    for (k, g) in src.gates().iter().enumerate() {
        if !live[k] {
            continue;
        }
        let mapped = |c: &[GateRef], image: &[Option<GateRef>]| -> Vec<GateRef> {
            c.iter().map(|r| image[r.index()].expect("child first")).collect()
        };
        image[k] = Some(match g {
            Gate::Input(i) => dst.input(*i),
            Gate::Const(b) => dst.constant(*b),
            Gate::And(c) => {
                let m = mapped(c, &image);
                rebuild(&mut dst, Kind::And, &m)
            }
            Gate::Or(c) => {
                let m = mapped(c, &image);
                rebuild(&mut dst, Kind::Or, &m)
            }
        });
    }
    let outs: Vec<GateRef> = roots.iter().map(|r| image[r.index()].expect("root")).collect();
    // Drop gates orphaned by rewriting.
    let mut compact = GateArena::new();
    let inputs: Vec<GateRef> = (0..=max_input(&dst)).map(|i| compact.input(i)).collect();
    let outs = compact.import(&dst, &outs, &inputs);
    (compact, outs)
}

fn max_input(a: &GateArena) -> usize {
    a.gates()
        .iter()
        .filter_map(|g| match g {
            Gate::Input(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

impl BoolCircuit {
    /// Extensionally equal circuit after local rewriting.
    pub fn simplify(&self) -> BoolCircuit {
        let (arena, outs) = simplify_roots(self.arena(), &[self.output()]);
        BoolCircuit::new(self.n(), arena, outs[0])
    }
}

impl BoolMap {
    /// Simplifies every output, keeping shared structure.
    pub fn simplify(&self) -> BoolMap {
        let (arena, outs) = simplify_roots(self.arena(), self.outputs());
        BoolMap::new(self.n(), arena, outs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simp(n: usize, text: &str) -> String {
        BoolCircuit::parse(n, text).unwrap().simplify().to_string()
    }

    #[test]
    fn absorption() {
        assert_eq!(simp(2, "(or (x 1) (and (x 1) (x 2)))"), "(x 1)");
        assert_eq!(simp(2, "(and (x 1) (or (x 1) (x 2)))"), "(x 1)");
        assert_eq!(
            simp(3, "(or (and (x 1) (x 2)) (and (x 1) (x 2) (x 3)))"),
            "(and (x 1) (x 2))"
        );
    }

    #[test]
    fn constants_fold() {
        assert_eq!(simp(2, "(and (const 1) (x 2))"), "(x 2)");
        assert_eq!(simp(2, "(and (const 0) (x 2))"), "(const 0)");
        assert_eq!(simp(2, "(or (const 1) (x 2))"), "(const 1)");
        assert_eq!(simp(2, "(or (const 0) (const 0))"), "(const 0)");
    }

    #[test]
    fn duplicates_and_nesting() {
        assert_eq!(simp(2, "(or (x 1) (x 1))"), "(x 1)");
        assert_eq!(simp(3, "(or (x 3) (or (x 1) (x 2)))"), "(or (x 1) (x 2) (x 3))");
        assert_eq!(simp(3, "(and (and (x 2) (x 1)) (x 2))"), "(and (x 1) (x 2))");
    }

    #[test]
    fn map_simplify_keeps_outputs_aligned() {
        let m = BoolMap::parse(2, &["(or (x 1) (and (x 1) (x 2)))", "(or (x 2) (and (x 1) (x 2)))"]).unwrap();
        let s = m.simplify();
        assert_eq!(s.render(0), "(x 1)");
        assert_eq!(s.render(1), "(x 2)");
        assert!(s.equivalent(&m));
    }
}
