//! The five irreducibility conditions, decided by SAT, exhaustive search or
//! graph algorithms.

mod encode;
mod graph;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use encode::{arc_map, encode};
pub(crate) use encode::encode_subfixed;
pub use graph::{adjacency_graph, Digraph};

use crate::boolfn::{BitVec, BoolMap};
use crate::expr::{MapClass, MapExpr};
use crate::sat::{solve_with, SolveOutcome, SolverConfig};
use crate::signature::{lower_signature, upper_signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Facial,
    Graphical,
    Partial,
    Indecomposable,
    Imperturbable,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Facial,
        Condition::Graphical,
        Condition::Partial,
        Condition::Indecomposable,
        Condition::Imperturbable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Facial => "facial",
            Condition::Graphical => "graphical",
            Condition::Partial => "partial",
            Condition::Indecomposable => "indecomposable",
            Condition::Imperturbable => "imperturbable",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown condition {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Sat,
    Brute,
    Graph,
    Fastpath,
    Auto,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Sat => "sat",
            Engine::Brute => "brute",
            Engine::Graph => "graph",
            Engine::Fastpath => "fastpath",
            Engine::Auto => "auto",
        })
    }
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "sat" => Engine::Sat,
            "brute" => Engine::Brute,
            "graph" => Engine::Graph,
            "fastpath" => Engine::Fastpath,
            "auto" => Engine::Auto,
            _ => return Err(format!("unknown engine {s:?}")),
        })
    }
}

/// A failing subset. For imperturbability `i ⊆ j` with `e_I` a
/// sub-fixed point of `f̲` and `e_J` a super-fixed point of `f̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Set(BitVec),
    Pair { i: BitVec, j: BitVec },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("{condition} needs n >= 2, map has n = {n}")]
    TooSmall { condition: Condition, n: usize },
    #[error("lower signature has dimension {lower}, upper has {upper}")]
    DimensionMismatch { lower: usize, upper: usize },
    #[error("brute force capped at n = {cap}, map has n = {n}")]
    BruteCap { n: usize, cap: usize },
    #[error("engine {engine} does not decide {condition} for this map")]
    NotApplicable { engine: Engine, condition: Condition },
    #[error("map is not in the nonnegative-exponent class")]
    NotNonnegativeClass,
    #[error("{engine} produced a witness for {condition} that does not re-verify")]
    BadWitness { engine: Engine, condition: Condition },
    #[error("fastpath and witness search disagree on imperturbability")]
    Disagreement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub condition: Condition,
    pub verdict: Verdict,
    pub engine: Engine,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    fn witness_fields(&self) -> Vec<(&'static str, String)> {
        match &self.witness {
            None => vec![],
            Some(Witness::Set(j)) => vec![("J", j.to_string())],
            Some(Witness::Pair { i, j }) => vec![("I", i.to_string()), ("J", j.to_string())],
        }
    }

    /// One-line human summary followed by the witness, if any.
    pub fn render_text(&self) -> String {
        let mut s = format!(
            "{}: {} [engine {}, {:.3} ms]",
            self.condition,
            self.verdict,
            self.engine,
            self.elapsed.as_secs_f64() * 1e3
        );
        let w = self.witness_fields();
        if !w.is_empty() {
            let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            s.push_str(&format!("\n  witness {}", parts.join(", ")));
        }
        s
    }

    /// `key: value` record terminated by a blank line.
    pub fn render_structured(&self) -> String {
        let mut s = format!(
            "record: check\ncondition: {}\nverdict: {}\nengine: {}\n",
            self.condition, self.verdict, self.engine
        );
        for (k, v) in self.witness_fields() {
            s.push_str(&format!("witness_{}: {v}\n", k.to_lowercase()));
        }
        s.push_str(&format!("elapsed_us: {}\n\n", self.elapsed.as_micros()));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub solver: SolverConfig,
    /// Largest n for single-vector brute force.
    pub brute_cap: usize,
    /// Largest n for pair enumeration (imperturbability).
    pub brute_pair_cap: usize,
    /// Largest n the automatic engine sends to brute force.
    pub auto_brute: usize,
    pub auto_brute_pair: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            solver: SolverConfig::default(),
            brute_cap: 24,
            brute_pair_cap: 14,
            auto_brute: 16,
            auto_brute_pair: 10,
        }
    }
}

fn mask_le(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn unit(n: usize, j: usize) -> BitVec {
    let mut e = BitVec::zeros(n);
    e.set(j, true);
    e
}

/// Direct check that `w` witnesses failure of `condition`.
pub fn verify_witness(condition: Condition, lower: &BoolMap, upper: &BoolMap, w: &Witness) -> bool {
    let ev = |g: &BoolMap, x: &BitVec| g.eval(x).ok();
    match (condition, w) {
        (Condition::Imperturbable, Witness::Pair { i, j }) => {
            !i.is_zero()
                && !j.is_all_ones()
                && i.le(j)
                && ev(lower, i).is_some_and(|v| i.le(&v))
                && ev(upper, j).is_some_and(|v| v.le(j))
        }
        (Condition::Imperturbable, _) | (_, Witness::Pair { .. }) => false,
        (_, Witness::Set(x)) if !x.is_nontrivial() || x.len() != upper.n() => false,
        (Condition::Facial, Witness::Set(x)) => ev(lower, x).is_some_and(|v| v.le(x)),
        (Condition::Indecomposable, Witness::Set(x)) => ev(upper, x).is_some_and(|v| v.le(x)),
        (Condition::Partial, Witness::Set(x)) => ev(lower, x).is_some_and(|v| &v == x),
        (Condition::Graphical, Witness::Set(x)) => {
            // No arc from outside the set into it.
            let n = x.len();
            (0..n).filter(|&j| x.get(j)).all(|j| {
                let col = upper.eval(&unit(n, j)).expect("dimension matches");
                col.le(x)
            })
        }
    }
}

/// Exhaustive search over nontrivial subsets (pairs for imperturbability),
/// in increasing bitmask order with bit `i−1` standing for `xᵢ`. Reports the
/// first witness found.
pub fn brute_force(condition: Condition, lower: &BoolMap, upper: &BoolMap) -> Result<CheckReport, CheckError> {
    brute_force_with(condition, lower, upper, &CheckOptions::default())
}

pub fn brute_force_with(
    condition: Condition,
    lower: &BoolMap,
    upper: &BoolMap,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = upper.n();
    let cap = if condition == Condition::Imperturbable {
        opts.brute_pair_cap
    } else {
        opts.brute_cap
    };
    if n > cap.min(63) {
        return Err(CheckError::BruteCap { n, cap });
    }
    let full = full_mask(n);
    let set_of = |m: u64| Witness::Set(BitVec::from_mask(m, n));
    let witness = if n < 2 {
        None
    } else {
        match condition {
            Condition::Facial => (1..full).find(|&m| mask_le(lower.eval_mask(m), m)).map(set_of),
            Condition::Indecomposable => (1..full).find(|&m| mask_le(upper.eval_mask(m), m)).map(set_of),
            Condition::Partial => (1..full).find(|&m| lower.eval_mask(m) == m).map(set_of),
            Condition::Graphical => {
                let a = arc_map(upper);
                (1..full).find(|&m| mask_le(a.eval_mask(m), m)).map(set_of)
            }
            Condition::Imperturbable => {
                let mut super_fixed: Vec<Option<bool>> = vec![None; 1 << n];
                let mut found = None;
                'outer: for x in 1..=full {
                    if !mask_le(x, lower.eval_mask(x)) {
                        continue;
                    }
                    // Supersets of x below the full set, ascending.
                    let free = full & !x;
                    let mut sub = 0u64;
                    loop {
                        let y = x | sub;
                        if y != full {
                            let ok = *super_fixed[y as usize].get_or_insert_with(|| mask_le(upper.eval_mask(y), y));
                            if ok {
                                found = Some((x, y));
                                break 'outer;
                            }
                        }
                        if sub == free {
                            break;
                        }
                        sub = (sub.wrapping_sub(free)) & free;
                    }
                }
                found.map(|(x, y)| Witness::Pair {
                    i: BitVec::from_mask(x, n),
                    j: BitVec::from_mask(y, n),
                })
            }
        }
    };
    Ok(CheckReport {
        condition,
        verdict: if witness.is_some() { Verdict::Fails } else { Verdict::Holds },
        engine: Engine::Brute,
        witness,
        elapsed: start.elapsed(),
    })
}

/// Class of a map by the signs of its average exponents.
pub fn classify_class(f: &MapExpr) -> MapClass {
    f.classify()
}

/// Signatures and arc graph of one map, computed once and shared by all checks.
#[derive(Debug, Clone)]
pub struct Checker {
    pub lower: BoolMap,
    pub upper: BoolMap,
    pub graph: Digraph,
    pub class: MapClass,
    pub options: CheckOptions,
}

impl Checker {
    pub fn new(f: &MapExpr) -> Self {
        Checker {
            lower: lower_signature(f),
            upper: upper_signature(f),
            graph: adjacency_graph(f),
            class: f.classify(),
            options: CheckOptions::default(),
        }
    }

    pub fn with_options(mut self, options: CheckOptions) -> Self {
        self.options = options;
        self
    }

    pub fn n(&self) -> usize {
        self.upper.n()
    }

    fn report(&self, condition: Condition, engine: Engine, witness: Option<Witness>, start: Instant) -> CheckReport {
        CheckReport {
            condition,
            verdict: if witness.is_some() { Verdict::Fails } else { Verdict::Holds },
            engine,
            witness,
            elapsed: start.elapsed(),
        }
    }

    /// Engine chosen by `Engine::Auto`.
    pub fn auto_engine(&self, condition: Condition) -> Engine {
        let n = self.n();
        match condition {
            Condition::Graphical => Engine::Graph,
            Condition::Imperturbable if n <= self.options.auto_brute_pair => Engine::Brute,
            Condition::Imperturbable => Engine::Sat,
            _ if n <= self.options.auto_brute => Engine::Brute,
            _ => Engine::Sat,
        }
    }

    pub fn check(&self, condition: Condition, engine: Engine) -> Result<CheckReport, CheckError> {
        let start = Instant::now();
        let engine = if engine == Engine::Auto {
            self.auto_engine(condition)
        } else {
            engine
        };
        if self.n() < 2 {
            // No nontrivial proper subsets exist.
            return Ok(self.report(condition, engine, None, start));
        }
        let report = match engine {
            Engine::Brute => brute_force_with(condition, &self.lower, &self.upper, &self.options)?,
            Engine::Sat => self.check_sat(condition, start)?,
            Engine::Graph => self.check_graph(condition, start)?,
            Engine::Fastpath => {
                if condition != Condition::Imperturbable {
                    return Err(CheckError::NotApplicable { engine, condition });
                }
                self.fastpath()?
            }
            Engine::Auto => unreachable!("resolved above"),
        };
        if let Some(w) = &report.witness {
            if !verify_witness(condition, &self.lower, &self.upper, w) {
                return Err(CheckError::BadWitness {
                    engine: report.engine,
                    condition,
                });
            }
        }
        Ok(report)
    }

    fn check_sat(&self, condition: Condition, start: Instant) -> Result<CheckReport, CheckError> {
        let n = self.n();
        let cnf = encode(condition, &self.lower, &self.upper)?;
        let witness = match solve_with(&cnf, &self.options.solver) {
            SolveOutcome::Unsat => None,
            SolveOutcome::Unknown => {
                return Ok(CheckReport {
                    condition,
                    verdict: Verdict::Unknown,
                    engine: Engine::Sat,
                    witness: None,
                    elapsed: start.elapsed(),
                })
            }
            SolveOutcome::Sat(a) => {
                let x = BitVec::from_bools((1..=n).map(|v| a.value(v)));
                Some(if condition == Condition::Imperturbable {
                    let y = BitVec::from_bools((n + 1..=2 * n).map(|v| a.value(v)));
                    Witness::Pair { i: x, j: y }
                } else {
                    Witness::Set(x)
                })
            }
        };
        Ok(self.report(condition, Engine::Sat, witness, start))
    }

    /// A set closed under predecessors: the complement of a final class.
    fn graph_witness(&self) -> Option<Witness> {
        if self.graph.is_strongly_connected() {
            return None;
        }
        let first = self.graph.final_classes().into_iter().next().expect("finite graphs have a final class");
        Some(Witness::Set(first.complement()))
    }

    fn check_graph(&self, condition: Condition, start: Instant) -> Result<CheckReport, CheckError> {
        match condition {
            Condition::Graphical => Ok(self.report(condition, Engine::Graph, self.graph_witness(), start)),
            Condition::Indecomposable if self.class == MapClass::Plus => {
                Ok(self.report(condition, Engine::Graph, self.graph_witness(), start))
            }
            Condition::Imperturbable if self.class == MapClass::Plus => self.fastpath(),
            _ => Err(CheckError::NotApplicable {
                engine: Engine::Graph,
                condition,
            }),
        }
    }

    /// Imperturbability for nonnegative-exponent maps: holds iff the arc
    /// graph has a single final class `I` and iterating `f̲` from `e_{I^c}`
    /// reaches zero.
    pub fn fastpath(&self) -> Result<CheckReport, CheckError> {
        let start = Instant::now();
        if self.class != MapClass::Plus {
            return Err(CheckError::NotNonnegativeClass);
        }
        let finals = self.graph.final_classes();
        let holds = finals.len() == 1 && {
            let mut x = finals[0].complement();
            let mut seen = HashSet::new();
            // Zero is absorbing, so a repeated nonzero state means it is never reached.
            while !x.is_zero() && seen.insert(x.clone()) {
                x = self.lower.eval(&x).expect("dimension matches");
            }
            x.is_zero()
        };
        let witness = if holds || self.n() < 2 {
            None
        } else {
            // The fastpath decides; a concrete pair comes from search.
            let search = if self.n() <= self.options.brute_pair_cap {
                brute_force_with(Condition::Imperturbable, &self.lower, &self.upper, &self.options)?
            } else {
                self.check_sat(Condition::Imperturbable, start)?
            };
            match (search.verdict, search.witness) {
                (Verdict::Fails, Some(w)) => Some(w),
                (Verdict::Unknown, _) => {
                    return Ok(CheckReport {
                        condition: Condition::Imperturbable,
                        verdict: Verdict::Unknown,
                        engine: Engine::Fastpath,
                        witness: None,
                        elapsed: start.elapsed(),
                    })
                }
                _ => return Err(CheckError::Disagreement),
            }
        };
        Ok(self.report(Condition::Imperturbable, Engine::Fastpath, witness, start))
    }
}

/// Decides `condition` for `f` with the given engine.
pub fn check(f: &MapExpr, condition: Condition, engine: Engine) -> Result<CheckReport, CheckError> {
    Checker::new(f).check(condition, engine)
}

/// Imperturbability fastpath for maps whose exponents are all nonnegative.
pub fn imperturbable_fastpath_mconvex(f: &MapExpr) -> Result<CheckReport, CheckError> {
    Checker::new(f).fastpath()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_map;

    const E1: &str = "(entries (+ (x 2) (x 3)) (+ (x 1) (x 3)) (* 0.5 (avg -1 (0.5 0.5 0))))";
    const E2: &str = "(entries (+ (x 1) (avg 0 (0.5 0.5))) (+ (x 2) (avg 0 (0.5 0.5))))";
    const A: &str = "(entries (x 2) (x 2))";
    const E4: &str = "(entries (x 1) (avg inf (0.5 0.5)))";

    fn verdicts(src: &str, engine: Engine) -> Vec<Verdict> {
        let c = Checker::new(&parse_map(src).unwrap());
        Condition::ALL
            .iter()
            .map(|&cond| match c.check(cond, engine) {
                Ok(r) => r.verdict,
                Err(CheckError::NotApplicable { .. }) => c.check(cond, Engine::Auto).unwrap().verdict,
                Err(e) => panic!("{e}"),
            })
            .collect()
    }

    use Verdict::{Fails as F, Holds as H};

    #[test]
    fn worked_examples_on_every_engine() {
        // Order: facial, graphical, partial, indecomposable, imperturbable.
        for engine in [Engine::Auto, Engine::Brute, Engine::Sat, Engine::Graph] {
            assert_eq!(verdicts(E1, engine), [H, F, H, H, H], "{engine}");
            assert_eq!(verdicts(E2, engine), [F, H, F, H, H], "{engine}");
            assert_eq!(verdicts(A, engine), [F, F, H, F, H], "{engine}");
            assert_eq!(verdicts(E4, engine), [F, F, F, F, F], "{engine}");
        }
    }

    #[test]
    fn brute_witnesses_are_lexicographically_first() {
        let a = Checker::new(&parse_map(A).unwrap());
        let r = brute_force(Condition::Indecomposable, &a.lower, &a.upper).unwrap();
        assert_eq!(r.witness, Some(Witness::Set(BitVec::from_indices(2, &[1]))));
        let id = Checker::new(&MapExpr::identity(2));
        let r = brute_force(Condition::Partial, &id.lower, &id.upper).unwrap();
        assert_eq!(r.witness, Some(Witness::Set(BitVec::from_indices(2, &[1]))));
        let e2 = Checker::new(&parse_map(E2).unwrap());
        let r = e2.check(Condition::Partial, Engine::Brute).unwrap();
        assert_eq!(r.witness, Some(Witness::Set(BitVec::from_indices(2, &[1]))));
        let e4 = Checker::new(&parse_map(E4).unwrap());
        let r = e4.check(Condition::Imperturbable, Engine::Brute).unwrap();
        let j = BitVec::from_indices(2, &[2]);
        assert_eq!(r.witness, Some(Witness::Pair { i: j.clone(), j }));
    }

    #[test]
    fn identity_fails_everything() {
        let c = Checker::new(&MapExpr::identity(3));
        for cond in Condition::ALL {
            let r = c.check(cond, Engine::Auto).unwrap();
            assert_eq!(r.verdict, Verdict::Fails, "{cond}");
        }
    }

    #[test]
    fn one_dimensional_maps_hold_vacuously() {
        let c = Checker::new(&MapExpr::identity(1));
        for cond in Condition::ALL {
            assert!(c.check(cond, Engine::Sat).unwrap().holds());
        }
    }

    #[test]
    fn fastpath_examples() {
        let r = imperturbable_fastpath_mconvex(&parse_map(A).unwrap()).unwrap();
        assert_eq!((r.verdict, r.engine), (Verdict::Holds, Engine::Fastpath));
        let r = imperturbable_fastpath_mconvex(&parse_map(E4).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witness.is_some());
        let r = imperturbable_fastpath_mconvex(&MapExpr::identity(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(
            imperturbable_fastpath_mconvex(&parse_map(E1).unwrap()),
            Err(CheckError::NotNonnegativeClass)
        );
    }

    #[test]
    fn graph_engine_rejects_conditions_it_cannot_decide() {
        let c = Checker::new(&parse_map(E1).unwrap());
        assert!(matches!(c.check(Condition::Facial, Engine::Graph), Err(CheckError::NotApplicable { .. })));
        assert!(matches!(c.check(Condition::Indecomposable, Engine::Graph), Err(CheckError::NotApplicable { .. })));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_class(&parse_map(E2).unwrap()), MapClass::Plus);
        assert_eq!(classify_class(&parse_map(E1).unwrap()), MapClass::Mixed);
        assert_eq!(classify_class(&MapExpr::identity(3)), MapClass::Plus);
    }

    #[test]
    fn auto_engine_thresholds() {
        let c = Checker::new(&MapExpr::identity(12));
        assert_eq!(c.auto_engine(Condition::Facial), Engine::Brute);
        assert_eq!(c.auto_engine(Condition::Imperturbable), Engine::Sat);
        assert_eq!(c.auto_engine(Condition::Graphical), Engine::Graph);
    }

    #[test]
    fn brute_cap_is_enforced() {
        let c = Checker::new(&MapExpr::identity(30));
        assert!(matches!(c.check(Condition::Facial, Engine::Brute), Err(CheckError::BruteCap { .. })));
        assert_eq!(c.check(Condition::Facial, Engine::Sat).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn renderings() {
        let c = Checker::new(&parse_map(E1).unwrap());
        let r = c.check(Condition::Graphical, Engine::Graph).unwrap();
        assert!(r.render_text().starts_with("graphical: fails [engine graph"));
        assert!(r.render_text().contains("witness J = {1,2}"));
        let s = r.render_structured();
        assert!(s.starts_with("record: check\ncondition: graphical\nverdict: fails\nengine: graph\nwitness_j: {1,2}\n"));
        assert!(s.ends_with("\n\n"));
    }
}
