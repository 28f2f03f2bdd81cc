//! Map expressions built from weighted power means.
//!
//! A [`MapExpr`] describes a square, homogeneous, order-preserving map on the
//! nonnegative cone. Every entry is a positive linear combination of power
//! means `M_{r,σ}(x) = (Σ σᵢ xᵢʳ)^{1/r}` (geometric mean for `r = 0`, max and
//! min over `supp(σ)` for `r = ±∞`), and maps may be summed, composed and
//! scaled by positive diagonal matrices.

mod eval;
mod parse;

use std::fmt;

pub use eval::{EvalError, ExtPoint, ExtReal};
pub use parse::{parse_map, ParseError};

/// Relative tolerance within which user-supplied weights are renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-6;

/// Errors raised while constructing or validating expressions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("{path}: weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOL}")]
    WeightSum { path: String, sum: f64 },
    #[error("{path}: weight vector has empty support")]
    EmptySupport { path: String },
    #[error("{path}: weight {value} is negative or not finite")]
    BadWeight { path: String, value: f64 },
    #[error("{path}: coefficient {value} must be finite and strictly positive")]
    NonPositiveCoefficient { path: String, value: f64 },
    #[error("{path}: linear combination has no terms")]
    EmptyCombination { path: String },
    #[error("{path}: dimension mismatch, expected {expected} but found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: variable x{index} out of range 1..={n}")]
    VariableOutOfRange { path: String, index: usize, n: usize },
    #[error("{path}: exponent is NaN")]
    NanExponent { path: String },
    #[error("map has dimension zero")]
    ZeroDimension,
}

/// Exponent `r` of a power mean, in the extended reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AvgExponent {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl AvgExponent {
    pub fn from_f64(r: f64) -> Self {
        if r == f64::INFINITY {
            AvgExponent::PosInfinity
        } else if r == f64::NEG_INFINITY {
            AvgExponent::NegInfinity
        } else {
            AvgExponent::Finite(r)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            AvgExponent::NegInfinity => f64::NEG_INFINITY,
            AvgExponent::Finite(r) => r,
            AvgExponent::PosInfinity => f64::INFINITY,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self.as_f64() >= 0.0
    }
}

impl fmt::Display for AvgExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AvgExponent::NegInfinity => f.write_str("-inf"),
            AvgExponent::PosInfinity => f.write_str("inf"),
            AvgExponent::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Probability weights `σ` of a power mean. Always normalized, with nonempty support.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    /// Builds a weight vector, renormalizing when the sum is within
    /// [`WEIGHT_SUM_TOL`] of one.
    pub fn new(entries: Vec<f64>) -> Result<Self, ExprError> {
        Self::new_at(entries, "weights")
    }

    pub(crate) fn new_at(entries: Vec<f64>, path: &str) -> Result<Self, ExprError> {
        if let Some(&value) = entries.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(ExprError::BadWeight {
                path: path.to_string(),
                value,
            });
        }
        let sum: f64 = entries.iter().sum();
        if sum == 0.0 {
            return Err(ExprError::EmptySupport {
                path: path.to_string(),
            });
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(ExprError::WeightSum {
                path: path.to_string(),
                sum,
            });
        }
        if (sum - 1.0).abs() <= 1e-12 {
            // Already normalized up to rounding; keep printed weights stable.
            return Ok(Weights(entries));
        }
        Ok(Weights(entries.into_iter().map(|w| w / sum).collect()))
    }

    /// Uniform weights on the given zero-based indices of an `n`-vector.
    pub fn uniform(n: usize, support: &[usize]) -> Self {
        let mut w = vec![0.0; n];
        let share = 1.0 / support.len() as f64;
        for &i in support {
            w[i] += share;
        }
        Weights::new(w).expect("uniform weights on a nonempty support")
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based indices with positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, _)| i)
    }
}

/// One entry of an [`MapExpr::Entries`] map.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    /// Coordinate `x_i`, zero-based.
    Var(usize),
    Avg { r: AvgExponent, weights: Weights },
    /// `Σ cₖ · termₖ` with every `cₖ > 0`.
    LinComb(Vec<(f64, ScalarExpr)>),
}

impl ScalarExpr {
    pub fn avg(r: f64, weights: Weights) -> Self {
        ScalarExpr::Avg {
            r: AvgExponent::from_f64(r),
            weights,
        }
    }

    fn visit_exponents(&self, out: &mut Vec<Option<AvgExponent>>) {
        match self {
            ScalarExpr::Var(_) => out.push(None),
            ScalarExpr::Avg { r, .. } => out.push(Some(*r)),
            ScalarExpr::LinComb(terms) => terms.iter().for_each(|(_, t)| t.visit_exponents(out)),
        }
    }

    fn validate(&self, n: usize, path: &str) -> Result<(), ExprError> {
        match self {
            ScalarExpr::Var(i) => {
                if *i >= n {
                    return Err(ExprError::VariableOutOfRange {
                        path: path.to_string(),
                        index: i + 1,
                        n,
                    });
                }
            }
            ScalarExpr::Avg { r, weights } => {
                if let AvgExponent::Finite(v) = r {
                    if v.is_nan() {
                        return Err(ExprError::NanExponent {
                            path: path.to_string(),
                        });
                    }
                }
                if weights.len() != n {
                    return Err(ExprError::DimensionMismatch {
                        path: format!("{path}.weights"),
                        expected: n,
                        found: weights.len(),
                    });
                }
            }
            ScalarExpr::LinComb(terms) => {
                if terms.is_empty() {
                    return Err(ExprError::EmptyCombination {
                        path: path.to_string(),
                    });
                }
                for (k, (c, t)) in terms.iter().enumerate() {
                    let sub = format!("{path}.term[{}]", k + 1);
                    check_coefficient(*c, &sub)?;
                    t.validate(n, &sub)?;
                }
            }
        }
        Ok(())
    }
}

/// A map `ℝⁿ₊ → ℝⁿ₊` in the class generated by power means under positive
/// linear combination and composition.
#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Entries(Vec<ScalarExpr>),
    /// `outer ∘ inner`.
    Compose {
        outer: Box<MapExpr>,
        inner: Box<MapExpr>,
    },
    /// `a·f + b·g`.
    Sum {
        a: f64,
        f: Box<MapExpr>,
        b: f64,
        g: Box<MapExpr>,
    },
    /// `D ∘ f` with `D = diag(d)`.
    DiagScale { d: Vec<f64>, f: Box<MapExpr> },
}

/// Sign class of the power-mean exponents appearing in a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    /// Every exponent is nonnegative (coordinates count as linear terms).
    Plus,
    /// Every exponent is negative and no bare coordinate appears.
    Minus,
    Mixed,
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapClass::Plus => "M+",
            MapClass::Minus => "M-",
            MapClass::Mixed => "M",
        })
    }
}

fn check_coefficient(c: f64, path: &str) -> Result<(), ExprError> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(ExprError::NonPositiveCoefficient {
            path: path.to_string(),
            value: c,
        })
    }
}

impl MapExpr {
    pub fn identity(n: usize) -> Self {
        MapExpr::Entries((0..n).map(ScalarExpr::Var).collect())
    }

    /// The linear map `x ↦ Ax`; zero entries are omitted, so every row needs
    /// at least one positive entry.
    pub fn linear(matrix: &[Vec<f64>]) -> Self {
        MapExpr::Entries(
            matrix
                .iter()
                .map(|row| {
                    ScalarExpr::LinComb(
                        row.iter()
                            .enumerate()
                            .filter(|(_, a)| **a > 0.0)
                            .map(|(j, a)| (*a, ScalarExpr::Var(j)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn compose(outer: MapExpr, inner: MapExpr) -> Self {
        MapExpr::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn sum(a: f64, f: MapExpr, b: f64, g: MapExpr) -> Self {
        MapExpr::Sum {
            a,
            f: Box::new(f),
            b,
            g: Box::new(g),
        }
    }

    pub fn diag(d: Vec<f64>, f: MapExpr) -> Self {
        MapExpr::DiagScale { d, f: Box::new(f) }
    }

    /// Checks every structural invariant and returns the dimension `n`.
    pub fn validate(&self) -> Result<usize, ExprError> {
        self.validate_at("map")
    }

    fn validate_at(&self, path: &str) -> Result<usize, ExprError> {
        match self {
            MapExpr::Entries(entries) => {
                let n = entries.len();
                if n == 0 {
                    return Err(ExprError::ZeroDimension);
                }
                for (i, e) in entries.iter().enumerate() {
                    e.validate(n, &format!("{path}.entry[{}]", i + 1))?;
                }
                Ok(n)
            }
            MapExpr::Compose { outer, inner } => {
                let n_out = outer.validate_at(&format!("{path}.outer"))?;
                let n_in = inner.validate_at(&format!("{path}.inner"))?;
                same_dim(path, n_out, n_in)
            }
            MapExpr::Sum { a, f, b, g } => {
                check_coefficient(*a, &format!("{path}.a"))?;
                check_coefficient(*b, &format!("{path}.b"))?;
                let nf = f.validate_at(&format!("{path}.f"))?;
                let ng = g.validate_at(&format!("{path}.g"))?;
                same_dim(path, nf, ng)
            }
            MapExpr::DiagScale { d, f } => {
                for (i, v) in d.iter().enumerate() {
                    check_coefficient(*v, &format!("{path}.diag[{}]", i + 1))?;
                }
                let n = f.validate_at(&format!("{path}.f"))?;
                same_dim(path, n, d.len())
            }
        }
    }

    /// Dimension without validation; assumes a validated map.
    pub fn dim(&self) -> usize {
        match self {
            MapExpr::Entries(e) => e.len(),
            MapExpr::Compose { outer, .. } => outer.dim(),
            MapExpr::Sum { f, .. } => f.dim(),
            MapExpr::DiagScale { d, .. } => d.len(),
        }
    }

    /// Classifies the map by the signs of its power-mean exponents. A bare
    /// coordinate `x_i` is a linear term and counts as `r = 1`.
    pub fn classify(&self) -> MapClass {
        let mut exps = Vec::new();
        self.visit_exponents(&mut exps);
        let nonneg = exps.iter().all(|e| e.is_none_or(|r| r.is_nonnegative()));
        let neg = exps.iter().all(|e| e.is_some_and(|r| !r.is_nonnegative()));
        if nonneg {
            MapClass::Plus
        } else if neg {
            MapClass::Minus
        } else {
            MapClass::Mixed
        }
    }

    fn visit_exponents(&self, out: &mut Vec<Option<AvgExponent>>) {
        match self {
            MapExpr::Entries(e) => e.iter().for_each(|s| s.visit_exponents(out)),
            MapExpr::Compose { outer, inner } => {
                outer.visit_exponents(out);
                inner.visit_exponents(out);
            }
            MapExpr::Sum { f, g, .. } => {
                f.visit_exponents(out);
                g.visit_exponents(out);
            }
            MapExpr::DiagScale { f, .. } => f.visit_exponents(out),
        }
    }
}

fn same_dim(path: &str, expected: usize, found: usize) -> Result<usize, ExprError> {
    if expected == found {
        Ok(expected)
    } else {
        Err(ExprError::DimensionMismatch {
            path: path.to_string(),
            expected,
            found,
        })
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{:?}` keeps round-trip precision for f64.
    write!(f, "{v:?}")
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Var(i) => write!(f, "(x {})", i + 1),
            ScalarExpr::Avg { r, weights } => {
                f.write_str("(avg ")?;
                match r {
                    AvgExponent::Finite(v) => write_num(f, *v)?,
                    other => write!(f, "{other}")?,
                }
                f.write_str(" (")?;
                for (k, w) in weights.entries().iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write_num(f, *w)?;
                }
                f.write_str("))")
            }
            ScalarExpr::LinComb(terms) => {
                let write_term = |f: &mut fmt::Formatter<'_>, c: f64, t: &ScalarExpr| {
                    if c == 1.0 {
                        write!(f, "{t}")
                    } else {
                        f.write_str("(* ")?;
                        write_num(f, c)?;
                        write!(f, " {t})")
                    }
                };
                if let [(c, t)] = terms.as_slice() {
                    if *c != 1.0 {
                        return write_term(f, *c, t);
                    }
                }
                f.write_str("(+")?;
                for (c, t) in terms {
                    f.write_str(" ")?;
                    write_term(f, *c, t)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Entries(entries) => {
                f.write_str("(entries")?;
                for e in entries {
                    write!(f, " {e}")?;
                }
                f.write_str(")")
            }
            MapExpr::Compose { outer, inner } => write!(f, "(compose {outer} {inner})"),
            MapExpr::Sum { a, f: m, b, g } => {
                f.write_str("(sum ")?;
                write_num(f, *a)?;
                write!(f, " {m} ")?;
                write_num(f, *b)?;
                write!(f, " {g})")
            }
            MapExpr::DiagScale { d, f: m } => {
                f.write_str("(diag (")?;
                for (k, v) in d.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write_num(f, *v)?;
                }
                write!(f, ") {m})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_renormalize_within_tolerance() {
        let w = Weights::new(vec![0.5, 0.5000001]).unwrap();
        let s: f64 = w.entries().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(matches!(
            Weights::new(vec![0.5, 0.6]),
            Err(ExprError::WeightSum { .. })
        ));
    }

    #[test]
    fn empty_support_is_rejected() {
        assert!(matches!(
            Weights::new(vec![0.0, 0.0]),
            Err(ExprError::EmptySupport { .. })
        ));
        assert!(matches!(
            Weights::new(vec![-0.5, 1.5]),
            Err(ExprError::BadWeight { .. })
        ));
    }

    #[test]
    fn validate_identity() {
        assert_eq!(MapExpr::identity(3).validate(), Ok(3));
    }

    #[test]
    fn validate_reports_dimension_mismatch() {
        let f = MapExpr::compose(MapExpr::identity(2), MapExpr::identity(3));
        let err = f.validate().unwrap_err();
        assert!(matches!(err, ExprError::DimensionMismatch { expected: 2, found: 3, .. }));
    }

    #[test]
    fn validate_reports_bad_coefficient_with_path() {
        let f = MapExpr::Entries(vec![
            ScalarExpr::Var(0),
            ScalarExpr::LinComb(vec![(0.0, ScalarExpr::Var(0))]),
        ]);
        match f.validate().unwrap_err() {
            ExprError::NonPositiveCoefficient { path, .. } => {
                assert_eq!(path, "map.entry[2].term[1]")
            }
            e => panic!("unexpected {e:?}"),
        }
        let g = MapExpr::Entries(vec![ScalarExpr::Var(2), ScalarExpr::Var(0)]);
        assert!(matches!(
            g.validate(),
            Err(ExprError::VariableOutOfRange { index: 3, n: 2, .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let e1 = parse_map(
            "(entries (+ (x 2) (x 3)) (+ (x 1) (x 3)) (* 0.5 (avg -1 (0.5 0.5 0))))",
        )
        .unwrap();
        let e2 = parse_map(
            "(entries (+ (x 1) (avg 0 (0.5 0.5))) (+ (x 2) (avg 0 (0.5 0.5))))",
        )
        .unwrap();
        assert_eq!(e1.classify(), MapClass::Mixed);
        assert_eq!(e2.classify(), MapClass::Plus);
        assert_eq!(MapExpr::identity(3).classify(), MapClass::Plus);
        let harmonic = parse_map("(entries (avg -1 (0.5 0.5)) (avg -inf (0.5 0.5)))").unwrap();
        assert_eq!(harmonic.classify(), MapClass::Minus);
    }
}
