use super::{Assignment, CnfFormula};

/// Default cap on branching decisions before giving up with `Unknown`.
pub const DEFAULT_MAX_DECISIONS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_decisions: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_decisions: DEFAULT_MAX_DECISIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Assignment),
    Unsat,
    /// The decision cap was reached before the search finished.
    Unknown,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }
}

// Literal codes: 2·(var−1) for the positive literal, +1 for the negation.
type Code = usize;

const UNASSIGNED: u8 = 2;

struct Level {
    start: usize,
    decision: Code,
    flipped: bool,
}

struct Search {
    clauses: Vec<Vec<Code>>,
    watches: Vec<Vec<usize>>,
    value: Vec<u8>,
    trail: Vec<Code>,
    qhead: usize,
    levels: Vec<Level>,
}

fn lit_value(value: &[u8], l: Code) -> u8 {
    match value[l >> 1] {
        UNASSIGNED => UNASSIGNED,
        v => v ^ (l as u8 & 1),
    }
}

impl Search {
    /// Returns false if `l` is already false.
    fn enqueue(&mut self, l: Code) -> bool {
        match lit_value(&self.value, l) {
            1 => true,
            0 => false,
            _ => {
                self.value[l >> 1] = 1 ^ (l as u8 & 1);
                self.trail.push(l);
                true
            }
        }
    }

    /// Unit propagation over watched literals. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[falsified]);
            let (mut i, mut j) = (0, 0);
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let cl = &mut self.clauses[ci];
                if cl[0] == falsified {
                    cl.swap(0, 1);
                }
                if lit_value(&self.value, cl[0]) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                if let Some(k) = (2..cl.len()).find(|&k| lit_value(&self.value, cl[k]) != 0) {
                    cl.swap(1, k);
                    self.watches[cl[1]].push(ci);
                    continue;
                }
                ws[j] = ci;
                j += 1;
                let unit = cl[0];
                if !self.enqueue(unit) {
                    ok = false;
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                }
            }
            ws.truncate(j);
            self.watches[falsified] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, start: usize) {
        for &l in &self.trail[start..] {
            self.value[l >> 1] = UNASSIGNED;
        }
        self.trail.truncate(start);
        self.qhead = start;
    }

    /// Chronological backtracking: flip the deepest unflipped decision.
    fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            self.undo_to(level.start);
            if !level.flipped {
                let flipped = level.decision ^ 1;
                self.levels.push(Level {
                    start: level.start,
                    decision: flipped,
                    flipped: true,
                });
                self.enqueue(flipped);
                return true;
            }
        }
        false
    }
}

pub fn solve(f: &CnfFormula) -> SolveOutcome {
    solve_with(f, &SolverConfig::default())
}

/// Complete DPLL search. Branches on the lowest-index unassigned variable,
/// trying `true` first, so results are deterministic.
pub fn solve_with(f: &CnfFormula, config: &SolverConfig) -> SolveOutcome {
    let n = f.num_vars();
    let code = |l: super::Lit| 2 * (l.var() - 1) + usize::from(!l.is_positive());
    let mut s = Search {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![UNASSIGNED; n],
        trail: Vec::new(),
        qhead: 0,
        levels: Vec::new(),
    };
    let mut units = Vec::new();
    for clause in f.clauses() {
        let mut c: Vec<Code> = clause.iter().map(|&l| code(l)).collect();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue;
        }
        if c.len() == 1 {
            units.push(c[0]);
            continue;
        }
        let ci = s.clauses.len();
        s.watches[c[0]].push(ci);
        s.watches[c[1]].push(ci);
        s.clauses.push(c);
    }
    for u in units {
        if !s.enqueue(u) {
            return SolveOutcome::Unsat;
        }
    }
    let mut decisions = 0u64;
    let mut next = 0usize;
    loop {
        if !s.propagate() {
            if !s.backtrack() {
                return SolveOutcome::Unsat;
            }
            next = 0;
            continue;
        }
        while next < n && s.value[next] != UNASSIGNED {
            next += 1;
        }
        if next == n {
            return SolveOutcome::Sat(Assignment::new(s.value.iter().map(|&v| v == 1).collect()));
        }
        decisions += 1;
        if decisions > config.max_decisions {
            return SolveOutcome::Unknown;
        }
        s.levels.push(Level {
            start: s.trail.len(),
            decision: 2 * next,
            flipped: false,
        });
        s.enqueue(2 * next);
    }
}
