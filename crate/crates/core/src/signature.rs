//! Boolean signatures of power-mean maps.
//!
//! The upper signature records which entries blow up along `1 + t·e_J` as
//! `t → ∞`; the lower signature records which entries of `f(e_J)` are
//! positive. Local signatures at an interior point `u` record strict increase
//! under `u + t·e_J` and strict decrease under `u − t·e_J`.
//!
//! Both are read off the expression tree: power means become `∨` or `∧` over
//! the weight support, coefficients are dropped, sums become `∨`, and a
//! composition substitutes the inner signature into the outer one.

use crate::boolfn::{BitVec, BoolMap, GateArena, GateRef};
use crate::expr::{AvgExponent, EvalError, ExtPoint, MapExpr, ScalarExpr, Weights};

/// Default relative tolerance for ties among `max`/`min` arguments.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
/// Default log-scale magnitude `T` for the numeric upper oracle.
pub const ORACLE_MAGNITUDE: f64 = 40.0;
/// Default log-scale threshold `θ` for the numeric upper oracle.
pub const ORACLE_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignatureError {
    #[error("point must have {expected} strictly positive finite coordinates")]
    NotInterior { expected: usize },
    #[error("intermediate point at {path} left the interior of the cone")]
    IntermediateNotInterior { path: String },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("tie tolerance must be in [0, 1)")]
    BadTolerance,
}

/// Argmax/argmin pattern at one `max` or `min` node, evaluated at that
/// node's input.
#[derive(Debug, Clone, PartialEq)]
pub struct TieNode {
    pub path: String,
    pub exponent: AvgExponent,
    pub argmax: BitVec,
    pub argmin: BitVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TiePattern {
    pub tol: f64,
    pub nodes: Vec<TieNode>,
}

impl TiePattern {
    /// Nodes whose argmax or argmin has more than one element.
    pub fn ties(&self) -> impl Iterator<Item = &TieNode> {
        self.nodes
            .iter()
            .filter(|n| n.argmax.count_ones() > 1 || n.argmin.count_ones() > 1)
    }
}

#[derive(Debug, Clone)]
pub struct LocalSignatures {
    pub upper: BoolMap,
    pub lower: BoolMap,
    pub ties: TiePattern,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Upper,
    Lower,
    LocalUpper,
    LocalLower,
}

struct Builder<'a> {
    arena: GateArena,
    mode: Mode,
    tol: f64,
    ties: Option<&'a mut Vec<TieNode>>,
}

fn extreme_sets(weights: &Weights, p: &[f64], tol: f64) -> (Vec<usize>, Vec<usize>) {
    let support: Vec<usize> = weights.support().collect();
    let hi = support.iter().map(|&i| p[i]).fold(f64::NEG_INFINITY, f64::max);
    let lo = support.iter().map(|&i| p[i]).fold(f64::INFINITY, f64::min);
    let argmax = support.iter().copied().filter(|&i| p[i] >= (1.0 - tol) * hi).collect();
    let argmin = support.iter().copied().filter(|&i| p[i] <= (1.0 + tol) * lo).collect();
    (argmax, argmin)
}

impl Builder<'_> {
    fn gates(&mut self, idx: &[usize], inputs: &[GateRef], conj: bool) -> GateRef {
        let kids = idx.iter().map(|&i| inputs[i]).collect();
        if conj {
            self.arena.and(kids)
        } else {
            self.arena.or(kids)
        }
    }

    fn avg(
        &mut self,
        r: AvgExponent,
        w: &Weights,
        inputs: &[GateRef],
        point: Option<&[f64]>,
        path: &str,
    ) -> GateRef {
        let support: Vec<usize> = w.support().collect();
        match self.mode {
            Mode::Upper => self.gates(&support, inputs, !r.is_nonnegative()),
            Mode::Lower => self.gates(&support, inputs, r.as_f64() <= 0.0),
            Mode::LocalUpper | Mode::LocalLower => {
                let p = point.expect("local mode carries a point");
                let (argmax, argmin) = extreme_sets(w, p, self.tol);
                if let (Some(ties), AvgExponent::PosInfinity | AvgExponent::NegInfinity) =
                    (self.ties.as_deref_mut(), r)
                {
                    let n = w.len();
                    ties.push(TieNode {
                        path: path.to_string(),
                        exponent: r,
                        argmax: bits(n, &argmax),
                        argmin: bits(n, &argmin),
                    });
                }
                let upper = self.mode == Mode::LocalUpper;
                match r {
                    AvgExponent::Finite(_) => self.gates(&support, inputs, false),
                    AvgExponent::PosInfinity => self.gates(&argmax, inputs, !upper),
                    AvgExponent::NegInfinity => self.gates(&argmin, inputs, upper),
                }
            }
        }
    }

    fn scalar(
        &mut self,
        e: &ScalarExpr,
        inputs: &[GateRef],
        point: Option<&[f64]>,
        path: &str,
    ) -> GateRef {
        match e {
            ScalarExpr::Var(i) => inputs[*i],
            ScalarExpr::Avg { r, weights } => self.avg(*r, weights, inputs, point, path),
            ScalarExpr::LinComb(terms) => {
                let mut kids: Vec<GateRef> = terms
                    .iter()
                    .enumerate()
                    .map(|(k, (_, t))| self.scalar(t, inputs, point, &format!("{path}.term[{}]", k + 1)))
                    .collect();
                kids.dedup();
                self.arena.or(kids)
            }
        }
    }

    fn map(
        &mut self,
        f: &MapExpr,
        inputs: &[GateRef],
        point: Option<&[f64]>,
        path: &str,
    ) -> Result<Vec<GateRef>, SignatureError> {
        Ok(match f {
            MapExpr::Entries(entries) => entries
                .iter()
                .enumerate()
                .map(|(i, e)| self.scalar(e, inputs, point, &format!("{path}.entry[{}]", i + 1)))
                .collect(),
            MapExpr::Compose { outer, inner } => {
                let mid = self.map(inner, inputs, point, &format!("{path}.inner"))?;
                let next = match point {
                    Some(p) => {
                        let v = inner.eval_real(p)?;
                        if !v.iter().all(|x| x.is_finite() && *x > 0.0) {
                            return Err(SignatureError::IntermediateNotInterior {
                                path: format!("{path}.inner"),
                            });
                        }
                        Some(v)
                    }
                    None => None,
                };
                self.map(outer, &mid, next.as_deref(), &format!("{path}.outer"))?
            }
            MapExpr::Sum { f, g, .. } => {
                let a = self.map(f, inputs, point, &format!("{path}.f"))?;
                let b = self.map(g, inputs, point, &format!("{path}.g"))?;
                a.into_iter()
                    .zip(b)
                    .map(|(p, q)| if p == q { p } else { self.arena.or(vec![p, q]) })
                    .collect()
            }
            // Positive diagonal scaling changes neither finiteness, positivity nor strict monotonicity.
            MapExpr::DiagScale { f, .. } => self.map(f, inputs, point, &format!("{path}.f"))?,
        })
    }
}

fn bits(n: usize, idx: &[usize]) -> BitVec {
    let mut b = BitVec::zeros(n);
    for &i in idx {
        b.set(i, true);
    }
    b
}

fn build(f: &MapExpr, mode: Mode, point: Option<&[f64]>, tol: f64, ties: Option<&mut Vec<TieNode>>) -> Result<BoolMap, SignatureError> {
    let n = f.dim();
    let mut b = Builder {
        arena: GateArena::new(),
        mode,
        tol,
        ties,
    };
    let inputs: Vec<GateRef> = (0..n).map(|i| b.arena.input(i)).collect();
    let outputs = b.map(f, &inputs, point, "map")?;
    Ok(BoolMap::new(n, b.arena, outputs))
}

fn fixes_trivial_points(g: &BoolMap) -> bool {
    let n = g.n();
    g.eval(&BitVec::zeros(n)).map(|v| v.is_zero()).unwrap_or(false)
        && g.eval(&BitVec::ones(n)).map(|v| v.is_all_ones()).unwrap_or(false)
}

/// Upper signature `f̄`: `f̄(e_J)ᵢ = 1` iff `f(1 + t e_J)ᵢ → ∞`.
pub fn upper_signature(f: &MapExpr) -> BoolMap {
    let g = build(f, Mode::Upper, None, 0.0, None).expect("global signatures never evaluate");
    debug_assert!(fixes_trivial_points(&g));
    g
}

/// Lower signature `f̲`: `f̲(e_J)ᵢ = 1` iff `f(e_J)ᵢ > 0`.
pub fn lower_signature(f: &MapExpr) -> BoolMap {
    let g = build(f, Mode::Lower, None, 0.0, None).expect("global signatures never evaluate");
    debug_assert!(fixes_trivial_points(&g));
    g
}

/// Upper and lower local signatures at the interior point `u`, with
/// `max`/`min` ties resolved inclusively within relative tolerance `tol`.
pub fn local_signatures(f: &MapExpr, u: &[f64], tol: f64) -> Result<LocalSignatures, SignatureError> {
    let n = f.dim();
    if u.len() != n || !u.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(SignatureError::NotInterior { expected: n });
    }
    if !(0.0..1.0).contains(&tol) {
        return Err(SignatureError::BadTolerance);
    }
    let mut nodes = Vec::new();
    let upper = build(f, Mode::LocalUpper, Some(u), tol, Some(&mut nodes))?;
    let lower = build(f, Mode::LocalLower, Some(u), tol, None)?;
    Ok(LocalSignatures {
        upper,
        lower,
        ties: TiePattern { tol, nodes },
    })
}

/// Finite-`t` surrogate for the upper signature: bit `i` is set iff
/// `log f(exp(T·e_J))ᵢ > θ`.
pub fn numeric_upper_oracle(f: &MapExpr, set: &BitVec, magnitude: f64, threshold: f64) -> BitVec {
    let u: Vec<f64> = set.iter().map(|b| if b { magnitude } else { 0.0 }).collect();
    BitVec::from_bools(f.eval_log(&u).into_iter().map(|v| v > threshold))
}

/// Lower signature by direct evaluation: bit `i` is set iff `f(e_J)ᵢ > 0`.
pub fn numeric_lower_oracle(f: &MapExpr, set: &BitVec) -> Result<BitVec, EvalError> {
    Ok(f.eval(&ExtPoint::indicator(set))?.positive_pattern())
}

/// Upper signature by extended evaluation at `ω_J`: bit `i` is set iff
/// `f(ω_J)ᵢ = ∞`.
pub fn extended_upper_oracle(f: &MapExpr, set: &BitVec) -> Result<BitVec, EvalError> {
    Ok(f.eval(&ExtPoint::omega(set))?.infinite_pattern())
}
