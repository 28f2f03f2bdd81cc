use std::collections::HashMap;
use std::fmt;

use super::BitVec;

/// Index of a gate inside a [`GateArena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateRef(u32);

impl GateRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A node of a monotone circuit. Inputs are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    And(Vec<GateRef>),
    Or(Vec<GateRef>),
}

/// Hash-consed gate storage. Children always precede their parents, so the
/// arena order is a topological order.
#[derive(Debug, Clone, Default)]
pub struct GateArena {
    gates: Vec<Gate>,
    index: HashMap<Gate, GateRef>,
}

impl GateArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, r: GateRef) -> &Gate {
        &self.gates[r.index()]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Stores `gate` or returns the existing identical node.
    pub fn intern(&mut self, gate: Gate) -> GateRef {
        if let Gate::And(c) | Gate::Or(c) = &gate {
            assert!(!c.is_empty(), "And/Or gates need at least one child");
            assert!(c.iter().all(|r| r.index() < self.gates.len()), "dangling child");
        }
        if let Some(&r) = self.index.get(&gate) {
            return r;
        }
        let r = GateRef(u32::try_from(self.gates.len()).expect("arena overflow"));
        self.index.insert(gate.clone(), r);
        self.gates.push(gate);
        r
    }

    pub fn input(&mut self, i: usize) -> GateRef {
        self.intern(Gate::Input(i))
    }

    pub fn constant(&mut self, value: bool) -> GateRef {
        self.intern(Gate::Const(value))
    }

    /// Conjunction; a single child is returned as is and no children gives `1`.
    pub fn and(&mut self, children: Vec<GateRef>) -> GateRef {
        match children.len() {
            0 => self.constant(true),
            1 => children[0],
            _ => self.intern(Gate::And(children)),
        }
    }

    /// Disjunction; a single child is returned as is and no children gives `0`.
    pub fn or(&mut self, children: Vec<GateRef>) -> GateRef {
        match children.len() {
            0 => self.constant(false),
            1 => children[0],
            _ => self.intern(Gate::Or(children)),
        }
    }

    /// Values of every gate for the given input bits.
    pub(crate) fn eval_all(&self, inputs: &[bool]) -> Vec<bool> {
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(i) => inputs[*i],
                Gate::Const(b) => *b,
                Gate::And(c) => c.iter().all(|r| vals[r.index()]),
                Gate::Or(c) => c.iter().any(|r| vals[r.index()]),
            };
            vals.push(v);
        }
        vals
    }

    /// Copies the cone of `roots` from `src`, replacing `Input(i)` with
    /// `inputs[i]`. Returns the images of `roots`.
    pub(crate) fn import(&mut self, src: &GateArena, roots: &[GateRef], inputs: &[GateRef]) -> Vec<GateRef> {
        let live = src.reachable(roots);
        let mut image: Vec<Option<GateRef>> = vec![None; src.len()];
        for (k, g) in src.gates.iter().enumerate() {
            if !live[k] {
                continue;
            }
            let mapped = |c: &Vec<GateRef>| c.iter().map(|r| image[r.index()].expect("child first")).collect();
            image[k] = Some(match g {
                Gate::Input(i) => inputs[*i],
                Gate::Const(b) => self.constant(*b),
                Gate::And(c) => {
                    let c = mapped(c);
                    self.intern(Gate::And(c))
                }
                Gate::Or(c) => {
                    let c = mapped(c);
                    self.intern(Gate::Or(c))
                }
            });
        }
        roots.iter().map(|r| image[r.index()].expect("root")).collect()
    }

    pub(crate) fn reachable(&self, roots: &[GateRef]) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        for r in roots {
            live[r.index()] = true;
        }
        for k in (0..self.gates.len()).rev() {
            if live[k] {
                if let Gate::And(c) | Gate::Or(c) = &self.gates[k] {
                    for r in c {
                        live[r.index()] = true;
                    }
                }
            }
        }
        live
    }

    fn render(&self, r: GateRef, out: &mut String) {
        match self.gate(r) {
            Gate::Input(i) => out.push_str(&format!("(x {})", i + 1)),
            Gate::Const(b) => out.push_str(if *b { "(const 1)" } else { "(const 0)" }),
            Gate::And(c) | Gate::Or(c) => {
                out.push_str(if matches!(self.gate(r), Gate::And(_)) { "(and" } else { "(or" });
                for ch in c {
                    out.push(' ');
                    self.render(*ch, out);
                }
                out.push(')');
            }
        }
    }

    fn max_input(&self, roots: &[GateRef]) -> Option<usize> {
        let live = self.reachable(roots);
        self.gates
            .iter()
            .enumerate()
            .filter(|(k, _)| live[*k])
            .filter_map(|(_, g)| match g {
                Gate::Input(i) => Some(*i),
                _ => None,
            })
            .max()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitParseError {
    #[error("malformed circuit text near byte {0}")]
    Syntax(usize),
    #[error("input x{index} out of range for n = {n}")]
    InputOutOfRange { index: usize, n: usize },
    #[error("expected {expected} circuits, found {found}")]
    Arity { expected: usize, found: usize },
}

/// A single-output monotone circuit over `n` inputs.
#[derive(Debug, Clone)]
pub struct BoolCircuit {
    n: usize,
    arena: GateArena,
    output: GateRef,
}

impl BoolCircuit {
    pub fn new(n: usize, arena: GateArena, output: GateRef) -> Self {
        if let Some(i) = arena.max_input(&[output]) {
            assert!(i < n, "circuit reads input {} beyond n = {n}", i + 1);
        }
        BoolCircuit { n, arena, output }
    }

    /// Parses circuit text such as `(or (x 1) (and (x 2) (x 3)))`.
    pub fn parse(n: usize, text: &str) -> Result<Self, CircuitParseError> {
        let mut arena = GateArena::new();
        let output = parse_gate(&mut arena, n, text.as_bytes(), &mut 0)?;
        Ok(BoolCircuit { n, arena, output })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arena(&self) -> &GateArena {
        &self.arena
    }

    pub fn output(&self) -> GateRef {
        self.output
    }

    pub fn eval(&self, x: &BitVec) -> bool {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        self.arena.eval_all(x.as_slice())[self.output.index()]
    }

    /// Number of gates reachable from the output.
    pub fn size(&self) -> usize {
        self.arena.reachable(&[self.output]).iter().filter(|b| **b).count()
    }
}

impl fmt::Display for BoolCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.arena.render(self.output, &mut s);
        f.write_str(&s)
    }
}

/// `n` monotone circuits over a shared arena and a common input set.
#[derive(Debug, Clone)]
pub struct BoolMap {
    n: usize,
    arena: GateArena,
    outputs: Vec<GateRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {0} vs {1}")]
pub struct DimensionMismatch(pub usize, pub usize);

impl BoolMap {
    pub fn new(n: usize, arena: GateArena, outputs: Vec<GateRef>) -> Self {
        assert_eq!(outputs.len(), n, "a BoolMap on n inputs has n outputs");
        if let Some(i) = arena.max_input(&outputs) {
            assert!(i < n, "circuit reads input {} beyond n = {n}", i + 1);
        }
        BoolMap { n, arena, outputs }
    }

    pub fn identity(n: usize) -> Self {
        let mut arena = GateArena::new();
        let outputs = (0..n).map(|i| arena.input(i)).collect();
        BoolMap { n, arena, outputs }
    }

    pub fn constant(n: usize, value: bool) -> Self {
        let mut arena = GateArena::new();
        let c = arena.constant(value);
        BoolMap {
            n,
            arena,
            outputs: vec![c; n],
        }
    }

    /// Parses one circuit text per output.
    pub fn parse(n: usize, entries: &[&str]) -> Result<Self, CircuitParseError> {
        if entries.len() != n {
            return Err(CircuitParseError::Arity {
                expected: n,
                found: entries.len(),
            });
        }
        let mut arena = GateArena::new();
        let outputs = entries
            .iter()
            .map(|t| parse_gate(&mut arena, n, t.as_bytes(), &mut 0))
            .collect::<Result<_, _>>()?;
        Ok(BoolMap { n, arena, outputs })
    }

    pub fn from_circuits(circuits: &[BoolCircuit]) -> Self {
        let n = circuits.len();
        let mut arena = GateArena::new();
        let inputs: Vec<GateRef> = (0..n).map(|i| arena.input(i)).collect();
        let outputs = circuits
            .iter()
            .map(|c| {
                assert_eq!(c.n, n, "circuit arity differs from map dimension");
                arena.import(&c.arena, &[c.output], &inputs)[0]
            })
            .collect();
        BoolMap { n, arena, outputs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arena(&self) -> &GateArena {
        &self.arena
    }

    pub fn outputs(&self) -> &[GateRef] {
        &self.outputs
    }

    /// Extracts output `i` as a standalone circuit.
    pub fn circuit(&self, i: usize) -> BoolCircuit {
        let mut arena = GateArena::new();
        let inputs: Vec<GateRef> = (0..self.n).map(|k| arena.input(k)).collect();
        let output = arena.import(&self.arena, &[self.outputs[i]], &inputs)[0];
        BoolCircuit {
            n: self.n,
            arena,
            output,
        }
    }

    pub fn eval(&self, x: &BitVec) -> Result<BitVec, DimensionMismatch> {
        if x.len() != self.n {
            return Err(DimensionMismatch(self.n, x.len()));
        }
        let vals = self.arena.eval_all(x.as_slice());
        Ok(BitVec::from_bools(self.outputs.iter().map(|r| vals[r.index()])))
    }

    /// Evaluation on bitmasks, bit `i` standing for coordinate `i`.
    pub fn eval_mask(&self, mask: u64) -> u64 {
        assert!(self.n <= 64);
        let bits: Vec<bool> = (0..self.n).map(|i| mask >> i & 1 == 1).collect();
        let vals = self.arena.eval_all(&bits);
        self.outputs
            .iter()
            .enumerate()
            .fold(0, |m, (i, r)| if vals[r.index()] { m | 1 << i } else { m })
    }

    /// `self ∘ inner`: the circuits of `inner` are substituted for the inputs of `self`.
    pub fn compose(&self, inner: &BoolMap) -> Result<BoolMap, DimensionMismatch> {
        if self.n != inner.n {
            return Err(DimensionMismatch(self.n, inner.n));
        }
        let mut arena = GateArena::new();
        let inputs: Vec<GateRef> = (0..self.n).map(|i| arena.input(i)).collect();
        let mid = arena.import(&inner.arena, &inner.outputs, &inputs);
        let outputs = arena.import(&self.arena, &self.outputs, &mid);
        Ok(BoolMap {
            n: self.n,
            arena,
            outputs,
        })
    }

    /// Entrywise disjunction.
    pub fn join_or(&self, other: &BoolMap) -> Result<BoolMap, DimensionMismatch> {
        if self.n != other.n {
            return Err(DimensionMismatch(self.n, other.n));
        }
        let mut arena = GateArena::new();
        let inputs: Vec<GateRef> = (0..self.n).map(|i| arena.input(i)).collect();
        let a = arena.import(&self.arena, &self.outputs, &inputs);
        let b = arena.import(&other.arena, &other.outputs, &inputs);
        let outputs = a
            .into_iter()
            .zip(b)
            .map(|(p, q)| if p == q { p } else { arena.or(vec![p, q]) })
            .collect();
        Ok(BoolMap {
            n: self.n,
            arena,
            outputs,
        })
    }

    /// Whether the two maps agree on all `2ⁿ` inputs.
    pub fn equivalent(&self, other: &BoolMap) -> bool {
        assert!(self.n <= 24, "exhaustive comparison limited to n <= 24");
        self.n == other.n && (0..1u64 << self.n).all(|m| self.eval_mask(m) == other.eval_mask(m))
    }

    /// Gates reachable from the outputs.
    pub fn size(&self) -> usize {
        self.arena.reachable(&self.outputs).iter().filter(|b| **b).count()
    }

    /// Circuit text of output `i`.
    pub fn render(&self, i: usize) -> String {
        let mut s = String::new();
        self.arena.render(self.outputs[i], &mut s);
        s
    }

    /// Whether any constant gate is reachable from the outputs.
    pub fn has_constants(&self) -> bool {
        let live = self.arena.reachable(&self.outputs);
        self.arena
            .gates
            .iter()
            .enumerate()
            .any(|(k, g)| live[k] && matches!(g, Gate::Const(_)))
    }
}

impl fmt::Display for BoolMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            writeln!(f, "{}: {}", i + 1, self.render(i))?;
        }
        Ok(())
    }
}

fn skip_ws(s: &[u8], at: &mut usize) {
    while *at < s.len() && s[*at].is_ascii_whitespace() {
        *at += 1;
    }
}

fn word<'a>(s: &'a [u8], at: &mut usize) -> &'a [u8] {
    skip_ws(s, at);
    let start = *at;
    while *at < s.len() && !s[*at].is_ascii_whitespace() && s[*at] != b'(' && s[*at] != b')' {
        *at += 1;
    }
    &s[start..*at]
}

fn expect(s: &[u8], at: &mut usize, c: u8) -> Result<(), CircuitParseError> {
    skip_ws(s, at);
    if s.get(*at) == Some(&c) {
        *at += 1;
        Ok(())
    } else {
        Err(CircuitParseError::Syntax(*at))
    }
}

fn parse_gate(arena: &mut GateArena, n: usize, s: &[u8], at: &mut usize) -> Result<GateRef, CircuitParseError> {
    expect(s, at, b'(')?;
    let head = word(s, at);
    let r = match head {
        b"x" | b"const" => {
            let pos = *at;
            let v: usize = std::str::from_utf8(word(s, at))
                .ok()
                .and_then(|t| t.parse().ok())
                .ok_or(CircuitParseError::Syntax(pos))?;
            if head == b"const" {
                match v {
                    0 | 1 => arena.constant(v == 1),
                    _ => return Err(CircuitParseError::Syntax(pos)),
                }
            } else if v == 0 || v > n {
                return Err(CircuitParseError::InputOutOfRange { index: v, n });
            } else {
                arena.input(v - 1)
            }
        }
        b"and" | b"or" => {
            let mut children = Vec::new();
            loop {
                skip_ws(s, at);
                if s.get(*at) == Some(&b')') {
                    break;
                }
                children.push(parse_gate(arena, n, s, at)?);
            }
            if children.is_empty() {
                return Err(CircuitParseError::Syntax(*at));
            }
            let g = if head == b"and" { Gate::And(children) } else { Gate::Or(children) };
            arena.intern(g)
        }
        _ => return Err(CircuitParseError::Syntax(*at)),
    };
    expect(s, at, b')')?;
    Ok(r)
}
