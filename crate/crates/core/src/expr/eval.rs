//! Evaluation on `[0, ∞]ⁿ` and in logarithmic coordinates.

use std::fmt;

use super::{AvgExponent, MapExpr, ScalarExpr, Weights};
use crate::boolfn::BitVec;

/// A nonnegative extended real. Infinity is carried explicitly rather than
/// through float overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn is_zero(self) -> bool {
        self == ExtReal::ZERO
    }

    pub fn is_infinite(self) -> bool {
        self == ExtReal::Infinity
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    fn scale(self, c: f64) -> ExtReal {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(c * v),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    fn add(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

/// A point of `[0, ∞]ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtPoint(pub Vec<ExtReal>);

impl ExtPoint {
    pub fn from_reals(x: &[f64]) -> Self {
        ExtPoint(
            x.iter()
                .map(|&v| {
                    if v == f64::INFINITY {
                        ExtReal::Infinity
                    } else {
                        ExtReal::Finite(v)
                    }
                })
                .collect(),
        )
    }

    pub fn ones(n: usize) -> Self {
        ExtPoint(vec![ExtReal::Finite(1.0); n])
    }

    /// The lattice point `e_J` of the standard cone.
    pub fn indicator(set: &BitVec) -> Self {
        ExtPoint(
            set.iter()
                .map(|b| ExtReal::Finite(if b { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    /// The lattice point `ω_J = lim (1 + t e_J)` of the inverted cone.
    pub fn omega(set: &BitVec) -> Self {
        ExtPoint(
            set.iter()
                .map(|b| if b { ExtReal::Infinity } else { ExtReal::Finite(1.0) })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries as reals when all are finite and strictly positive.
    pub fn interior(&self) -> Option<Vec<f64>> {
        self.0
            .iter()
            .map(|v| v.finite().filter(|x| *x > 0.0 && x.is_finite()))
            .collect()
    }

    /// Support pattern `{i : x_i > 0}`.
    pub fn positive_pattern(&self) -> BitVec {
        BitVec::from_bools(self.0.iter().map(|v| !v.is_zero()))
    }

    /// Pattern `{i : x_i = ∞}`.
    pub fn infinite_pattern(&self) -> BitVec {
        BitVec::from_bools(self.0.iter().map(|v| v.is_infinite()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("geometric mean mixes zero and infinite coordinates (0·∞ is undefined)")]
    Indeterminate,
    #[error("point has dimension {found}, map has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input contains a negative or NaN coordinate")]
    InvalidInput,
}

fn avg_ext(r: AvgExponent, w: &Weights, x: &[ExtReal]) -> Result<ExtReal, EvalError> {
    let support = || w.support().map(|i| (w.entries()[i], x[i]));
    match r {
        AvgExponent::PosInfinity => Ok(support().map(|(_, v)| v).fold(ExtReal::ZERO, |m, v| {
            if m.to_f64() >= v.to_f64() {
                m
            } else {
                v
            }
        })),
        AvgExponent::NegInfinity => Ok(support()
            .map(|(_, v)| v)
            .fold(ExtReal::Infinity, |m, v| if m.to_f64() <= v.to_f64() { m } else { v })),
        AvgExponent::Finite(r) if r == 0.0 => {
            let any_zero = support().any(|(_, v)| v.is_zero());
            let any_inf = support().any(|(_, v)| v.is_infinite());
            match (any_zero, any_inf) {
                (true, true) => Err(EvalError::Indeterminate),
                (true, false) => Ok(ExtReal::ZERO),
                (false, true) => Ok(ExtReal::Infinity),
                (false, false) => Ok(ExtReal::Finite(
                    support()
                        .map(|(s, v)| s * v.to_f64().ln())
                        .sum::<f64>()
                        .exp(),
                )),
            }
        }
        AvgExponent::Finite(r) if r > 0.0 => {
            if support().any(|(_, v)| v.is_infinite()) {
                return Ok(ExtReal::Infinity);
            }
            let m = support().map(|(_, v)| v.to_f64()).fold(0.0, f64::max);
            if m == 0.0 {
                return Ok(ExtReal::ZERO);
            }
            let s: f64 = support().map(|(s, v)| s * (v.to_f64() / m).powf(r)).sum();
            Ok(ExtReal::Finite(m * s.powf(1.0 / r)))
        }
        AvgExponent::Finite(r) => {
            // r < 0: 0ʳ = ∞ drives the mean to 0, and ∞ʳ = 0 drops out.
            if support().any(|(_, v)| v.is_zero()) {
                return Ok(ExtReal::ZERO);
            }
            let m = support()
                .filter_map(|(_, v)| v.finite())
                .fold(f64::INFINITY, f64::min);
            if m == f64::INFINITY {
                return Ok(ExtReal::Infinity);
            }
            let s: f64 = support()
                .filter_map(|(s, v)| v.finite().map(|v| s * (v / m).powf(r)))
                .sum();
            Ok(ExtReal::Finite(m * s.powf(1.0 / r)))
        }
    }
}

fn scalar_ext(e: &ScalarExpr, x: &[ExtReal]) -> Result<ExtReal, EvalError> {
    match e {
        ScalarExpr::Var(i) => Ok(x[*i]),
        ScalarExpr::Avg { r, weights } => avg_ext(*r, weights, x),
        ScalarExpr::LinComb(terms) => terms.iter().try_fold(ExtReal::ZERO, |acc, (c, t)| {
            Ok(acc.add(scalar_ext(t, x)?.scale(*c)))
        }),
    }
}

fn map_ext(f: &MapExpr, x: &[ExtReal]) -> Result<Vec<ExtReal>, EvalError> {
    match f {
        MapExpr::Entries(entries) => entries.iter().map(|e| scalar_ext(e, x)).collect(),
        MapExpr::Compose { outer, inner } => map_ext(outer, &map_ext(inner, x)?),
        MapExpr::Sum { a, f, b, g } => Ok(map_ext(f, x)?
            .into_iter()
            .zip(map_ext(g, x)?)
            .map(|(u, v)| u.scale(*a).add(v.scale(*b)))
            .collect()),
        MapExpr::DiagScale { d, f } => Ok(map_ext(f, x)?
            .into_iter()
            .zip(d)
            .map(|(v, s)| v.scale(*s))
            .collect()),
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn scalar_log(e: &ScalarExpr, u: &[f64]) -> f64 {
    match e {
        ScalarExpr::Var(i) => u[*i],
        ScalarExpr::Avg { r, weights } => {
            let support = weights.support().map(|i| (weights.entries()[i], u[i]));
            match *r {
                AvgExponent::PosInfinity => support.map(|(_, v)| v).fold(f64::NEG_INFINITY, f64::max),
                AvgExponent::NegInfinity => support.map(|(_, v)| v).fold(f64::INFINITY, f64::min),
                AvgExponent::Finite(r) if r == 0.0 => support.map(|(s, v)| s * v).sum(),
                AvgExponent::Finite(r) => {
                    let terms: Vec<f64> = support.map(|(s, v)| s.ln() + r * v).collect();
                    log_sum_exp(&terms) / r
                }
            }
        }
        ScalarExpr::LinComb(terms) => {
            let vals: Vec<f64> = terms.iter().map(|(c, t)| c.ln() + scalar_log(t, u)).collect();
            log_sum_exp(&vals)
        }
    }
}

fn map_log(f: &MapExpr, u: &[f64]) -> Vec<f64> {
    match f {
        MapExpr::Entries(entries) => entries.iter().map(|e| scalar_log(e, u)).collect(),
        MapExpr::Compose { outer, inner } => map_log(outer, &map_log(inner, u)),
        MapExpr::Sum { a, f, b, g } => map_log(f, u)
            .into_iter()
            .zip(map_log(g, u))
            .map(|(p, q)| log_sum_exp(&[a.ln() + p, b.ln() + q]))
            .collect(),
        MapExpr::DiagScale { d, f } => map_log(f, u)
            .into_iter()
            .zip(d)
            .map(|(v, s)| v + s.ln())
            .collect(),
    }
}

impl MapExpr {
    /// Evaluates on `[0, ∞]ⁿ` using the extended conventions
    /// `0ʳ = ∞` and `∞^{1/r} = 0` for `r < 0`.
    pub fn eval(&self, x: &ExtPoint) -> Result<ExtPoint, EvalError> {
        let n = self.dim();
        if x.len() != n {
            return Err(EvalError::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        if x.0.iter().any(|v| v.finite().is_some_and(|f| !(f >= 0.0))) {
            return Err(EvalError::InvalidInput);
        }
        map_ext(self, &x.0).map(ExtPoint)
    }

    /// Evaluates at a finite nonnegative real point.
    pub fn eval_real(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        Ok(self
            .eval(&ExtPoint::from_reals(x))?
            .0
            .into_iter()
            .map(ExtReal::to_f64)
            .collect())
    }

    /// `log f(exp u)`, computed with shifted log-sum-exp so that large `|uᵢ|`
    /// never overflows.
    pub fn eval_log(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.dim(), "dimension mismatch in eval_log");
        map_log(self, u)
    }
}
