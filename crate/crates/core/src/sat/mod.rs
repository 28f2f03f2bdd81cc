//! CNF formulas, the Tseitin encoding of monotone circuits, a DPLL solver and
//! DIMACS interchange.

mod dimacs;
mod solver;
mod tseitin;

use std::fmt;
use std::ops::Not;

pub use dimacs::{parse_dimacs, parse_model, to_dimacs, DimacsError};
pub use solver::{solve, solve_with, SolveOutcome, SolverConfig, DEFAULT_MAX_DECISIONS};
pub use tseitin::{circuit_to_cnf, map_to_cnf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clauses must be nonempty")]
    EmptyClause,
    #[error("variable {var} exceeds variable count {num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("assignment covers {found} variables, formula has {expected}")]
    PartialAssignment { expected: usize, found: usize },
}

/// A literal: a variable index `≥ 1` with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i64);

impl Lit {
    pub fn pos(var: usize) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Lit(var as i64)
    }

    pub fn neg(var: usize) -> Self {
        !Lit::pos(var)
    }

    pub fn new(var: usize, positive: bool) -> Self {
        if positive {
            Lit::pos(var)
        } else {
            Lit::neg(var)
        }
    }

    pub fn from_dimacs(v: i64) -> Option<Self> {
        (v != 0).then_some(Lit(v))
    }

    pub fn to_dimacs(self) -> i64 {
        self.0
    }

    pub fn var(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A CNF formula over variables `1..=num_vars` with a symbol table naming
/// problem variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    symbols: Vec<(String, usize)>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn new_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars
    }

    pub fn name(&mut self, name: impl Into<String>, var: usize) {
        self.symbols.push((name.into(), var));
    }

    /// Index of a named problem variable.
    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|(s, _)| s == name).map(|&(_, v)| v)
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) -> Result<(), CnfError> {
        let clause: Vec<Lit> = lits.into_iter().collect();
        if clause.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        if let Some(l) = clause.iter().find(|l| l.var() > self.num_vars) {
            return Err(CnfError::VariableOutOfRange {
                var: l.var(),
                num_vars: self.num_vars,
            });
        }
        self.clauses.push(clause);
        Ok(())
    }

    /// Convenience for encoders that only build well-formed clauses.
    pub(crate) fn push(&mut self, lits: impl IntoIterator<Item = Lit>) {
        self.add_clause(lits).expect("encoder produced a malformed clause");
    }
}

/// A total assignment to variables `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}

/// True iff every clause has a satisfied literal.
pub fn model_check(f: &CnfFormula, a: &Assignment) -> Result<bool, CnfError> {
    if a.len() != f.num_vars() {
        return Err(CnfError::PartialAssignment {
            expected: f.num_vars(),
            found: a.len(),
        });
    }
    Ok(f.clauses().iter().all(|c| c.iter().any(|&l| a.satisfies(l))))
}
