use std::fmt;
use std::time::{Duration, Instant};

use crate::boolfn::{BitVec, BoolMap};
use crate::checks::{encode_subfixed, Engine, Witness};
use crate::expr::MapExpr;
use crate::sat::{map_to_cnf, solve_with, CnfFormula, Lit, SolveOutcome, SolverConfig};
use crate::signature::{local_signatures, SignatureError};

use super::collatz_wielandt;

/// Relative bracket width below which `u` is treated as an eigenvector.
pub const EIGENVECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniquenessCondition {
    M,
    N,
}

impl fmt::Display for UniquenessCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniquenessCondition::M => "M",
            UniquenessCondition::N => "N",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    Certified,
    Refuted,
    Unknown,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certification::Certified => "certified",
            Certification::Refuted => "refuted",
            Certification::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UniquenessError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("engine {0} cannot decide pointwise conditions")]
    NotApplicable(Engine),
    #[error("brute force capped at n = {cap}, map has n = {n}")]
    BruteCap { n: usize, cap: usize },
    #[error("witness does not re-verify against the local signatures")]
    BadWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub condition: UniquenessCondition,
    pub verdict: Certification,
    pub engine: Engine,
    /// `Set(J)` for M; `Pair { i: I, j: J }` with disjoint `I`, `J` for N.
    pub witness: Option<Witness>,
    pub point: Vec<f64>,
    pub tie_tol: f64,
    /// Number of `max`/`min` nodes with tied arguments at the point.
    pub ties: usize,
    /// `β/α − 1` of the bracket at the point.
    pub eigen_residual: f64,
    pub elapsed: Duration,
}

impl UniquenessReport {
    pub fn is_eigenvector(&self) -> bool {
        self.eigen_residual <= EIGENVECTOR_TOL
    }

    fn witness_fields(&self) -> Vec<(&'static str, String)> {
        match &self.witness {
            None => vec![],
            Some(Witness::Set(j)) => vec![("J", j.to_string())],
            Some(Witness::Pair { i, j }) => vec![("I", i.to_string()), ("J", j.to_string())],
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = format!(
            "condition {}: {} [engine {}] at u = ({})",
            self.condition,
            self.verdict,
            self.engine,
            super::join(&self.point)
        );
        let w = self.witness_fields();
        if !w.is_empty() {
            let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            s.push_str(&format!("\n  witness {}", parts.join(", ")));
        }
        s.push_str(&format!("\n  tie tolerance {:e}, {} tied node(s)", self.tie_tol, self.ties));
        if self.condition == UniquenessCondition::N && !self.is_eigenvector() {
            s.push_str(&format!(
                "\n  note: u is not an eigenvector (bracket ratio - 1 = {:e}), so the verdict says nothing about uniqueness",
                self.eigen_residual
            ));
        }
        s
    }

    pub fn render_structured(&self) -> String {
        let mut s = format!(
            "record: unique\ncondition: {}\nverdict: {}\nengine: {}\npoint: {}\n",
            self.condition,
            self.verdict,
            self.engine,
            super::join(&self.point)
        );
        for (k, v) in self.witness_fields() {
            s.push_str(&format!("witness_{}: {v}\n", k.to_lowercase()));
        }
        s.push_str(&format!(
            "tie_tol: {:e}\nties: {}\neigen_residual: {:e}\nis_eigenvector: {}\nelapsed_us: {}\n\n",
            self.tie_tol,
            self.ties,
            self.eigen_residual,
            self.is_eigenvector(),
            self.elapsed.as_micros()
        ));
        s
    }
}

const BRUTE_CAP_M: usize = 24;
const BRUTE_CAP_N: usize = 14;
const AUTO_BRUTE_M: usize = 16;
const AUTO_BRUTE_N: usize = 10;

fn resolve(engine: Engine, n: usize, auto_cap: usize, cap: usize) -> Result<Engine, UniquenessError> {
    let e = match engine {
        Engine::Auto if n <= auto_cap => Engine::Brute,
        Engine::Auto => Engine::Sat,
        Engine::Sat | Engine::Brute => engine,
        other => return Err(UniquenessError::NotApplicable(other)),
    };
    if e == Engine::Brute && n > cap {
        return Err(UniquenessError::BruteCap { n, cap });
    }
    Ok(e)
}

fn mask_le(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Clauses for condition (N): `x` is the indicator of `I^c`, `y` of `J^c`.
fn encode_n(lower: &BoolMap, upper: &BoolMap) -> CnfFormula {
    let n = upper.n();
    let mut cnf = CnfFormula::new(2 * n);
    for i in 0..n {
        cnf.name(format!("x{}", i + 1), i + 1);
    }
    for i in 0..n {
        cnf.name(format!("y{}", i + 1), n + i + 1);
    }
    let lo = map_to_cnf(&mut cnf, lower, 1);
    let up = map_to_cnf(&mut cnf, upper, n + 1);
    cnf.push((1..=n).map(Lit::neg));
    cnf.push((n + 1..=2 * n).map(Lit::neg));
    for i in 0..n {
        cnf.push([Lit::pos(i + 1), Lit::pos(n + i + 1)]);
        cnf.push([Lit::pos(i + 1), !lo[i]]);
        cnf.push([Lit::pos(n + i + 1), !up[i]]);
    }
    cnf
}

fn verify_n(lower: &BoolMap, upper: &BoolMap, i: &BitVec, j: &BitVec) -> bool {
    let (x, y) = (i.complement(), j.complement());
    !i.is_zero()
        && !j.is_zero()
        && i.le(&y)
        && lower.eval(&x).is_ok_and(|v| v.le(&x))
        && upper.eval(&y).is_ok_and(|v| v.le(&y))
}

fn verify_m(upper: &BoolMap, j: &BitVec) -> bool {
    j.is_nontrivial() && upper.eval(j).is_ok_and(|v| v.le(j))
}

struct Setup {
    lower: BoolMap,
    upper: BoolMap,
    ties: usize,
    residual: f64,
    start: Instant,
}

fn setup(f: &MapExpr, u: &[f64], tie_tol: f64) -> Result<Setup, UniquenessError> {
    let start = Instant::now();
    let local = local_signatures(f, u, tie_tol)?;
    let (alpha, beta) = collatz_wielandt(f, u).map_err(|_| SignatureError::NotInterior { expected: f.dim() })?;
    Ok(Setup {
        ties: local.ties.ties().count(),
        lower: local.lower,
        upper: local.upper,
        residual: beta / alpha - 1.0,
        start,
    })
}

/// Condition (M) at `u`: certified iff no nontrivial `x` has `f̄_u(x) ≤ x`.
pub fn condition_m(
    f: &MapExpr,
    u: &[f64],
    engine: Engine,
    tie_tol: f64,
    solver: &SolverConfig,
) -> Result<UniquenessReport, UniquenessError> {
    let s = setup(f, u, tie_tol)?;
    let n = s.upper.n();
    let engine = resolve(engine, n, AUTO_BRUTE_M, BRUTE_CAP_M)?;
    let mut verdict = Certification::Certified;
    let mut witness = None;
    if n >= 2 {
        let found = match engine {
            Engine::Brute => {
                let full = (1u64 << n) - 1;
                (1..full).find(|&m| mask_le(s.upper.eval_mask(m), m)).map(|m| BitVec::from_mask(m, n))
            }
            _ => match solve_with(&encode_subfixed(&s.upper, false), solver) {
                SolveOutcome::Sat(a) => Some(BitVec::from_bools((1..=n).map(|v| a.value(v)))),
                SolveOutcome::Unsat => None,
                SolveOutcome::Unknown => {
                    verdict = Certification::Unknown;
                    None
                }
            },
        };
        if let Some(j) = found {
            if !verify_m(&s.upper, &j) {
                return Err(UniquenessError::BadWitness);
            }
            verdict = Certification::Refuted;
            witness = Some(Witness::Set(j));
        }
    }
    Ok(UniquenessReport {
        condition: UniquenessCondition::M,
        verdict,
        engine,
        witness,
        point: u.to_vec(),
        tie_tol,
        ties: s.ties,
        eigen_residual: s.residual,
        elapsed: s.start.elapsed(),
    })
}

/// Condition (N) at `u`: certified iff no nonempty disjoint `I`, `J` have
/// `f̲_u(e_{I^c}) ≤ e_{I^c}` and `f̄_u(e_{J^c}) ≤ e_{J^c}`. Brute force reports
/// the first pair with `I` outermost in increasing bitmask order.
pub fn condition_n(
    f: &MapExpr,
    u: &[f64],
    engine: Engine,
    tie_tol: f64,
    solver: &SolverConfig,
) -> Result<UniquenessReport, UniquenessError> {
    let s = setup(f, u, tie_tol)?;
    let n = s.upper.n();
    let engine = resolve(engine, n, AUTO_BRUTE_N, BRUTE_CAP_N)?;
    let mut verdict = Certification::Certified;
    let mut witness = None;
    if n >= 2 {
        let found = match engine {
            Engine::Brute => {
                let full = (1u64 << n) - 1;
                let mut found = None;
                'outer: for i in 1..full {
                    let x = full & !i;
                    if !mask_le(s.lower.eval_mask(x), x) {
                        continue;
                    }
                    let free = x;
                    let mut j = free & free.wrapping_neg();
                    while j != 0 {
                        let y = full & !j;
                        if mask_le(s.upper.eval_mask(y), y) {
                            found = Some((i, j));
                            break 'outer;
                        }
                        j = (j.wrapping_sub(free)) & free;
                    }
                }
                found.map(|(i, j)| (BitVec::from_mask(i, n), BitVec::from_mask(j, n)))
            }
            _ => match solve_with(&encode_n(&s.lower, &s.upper), solver) {
                SolveOutcome::Sat(a) => {
                    let x = BitVec::from_bools((1..=n).map(|v| a.value(v)));
                    let y = BitVec::from_bools((n + 1..=2 * n).map(|v| a.value(v)));
                    Some((x.complement(), y.complement()))
                }
                SolveOutcome::Unsat => None,
                SolveOutcome::Unknown => {
                    verdict = Certification::Unknown;
                    None
                }
            },
        };
        if let Some((i, j)) = found {
            if !verify_n(&s.lower, &s.upper, &i, &j) {
                return Err(UniquenessError::BadWitness);
            }
            verdict = Certification::Refuted;
            witness = Some(Witness::Pair { i, j });
        }
    }
    Ok(UniquenessReport {
        condition: UniquenessCondition::N,
        verdict,
        engine,
        witness,
        point: u.to_vec(),
        tie_tol,
        ties: s.ties,
        eigen_residual: s.residual,
        elapsed: s.start.elapsed(),
    })
}
