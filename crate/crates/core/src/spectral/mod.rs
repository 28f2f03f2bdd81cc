//! Eigenpairs by normalized power iteration, Hilbert-metric quantities and
//! pointwise uniqueness conditions.

mod uniqueness;

use std::fmt::Write;

use rand::Rng;

pub use uniqueness::{condition_m, condition_n, Certification, UniquenessCondition, UniquenessError, UniquenessReport};

use crate::expr::{EvalError, MapExpr};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("point must have {expected} strictly positive finite coordinates")]
    NotInterior { expected: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

fn is_interior(x: &[f64]) -> bool {
    !x.is_empty() && x.iter().all(|v| v.is_finite() && *v > 0.0)
}

fn require_interior(x: &[f64], n: usize) -> Result<(), SpectralError> {
    if x.len() == n && is_interior(x) {
        Ok(())
    } else {
        Err(SpectralError::NotInterior { expected: n })
    }
}

fn ratio_bounds(x: &[f64], y: &[f64]) -> (f64, f64) {
    x.iter().zip(y).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
        let q = b / a;
        (lo.min(q), hi.max(q))
    })
}

/// Hilbert's projective metric `log(max yᵢ/xᵢ) − log(min yᵢ/xᵢ)`.
pub fn hilbert_distance(x: &[f64], y: &[f64]) -> Result<f64, SpectralError> {
    require_interior(x, x.len())?;
    require_interior(y, x.len())?;
    let (lo, hi) = ratio_bounds(x, y);
    Ok((hi.ln() - lo.ln()).max(0.0))
}

/// Tightest `(α, β)` with `αx ≤ f(x) ≤ βx`.
pub fn collatz_wielandt(f: &MapExpr, x: &[f64]) -> Result<(f64, f64), SpectralError> {
    require_interior(x, f.dim())?;
    let y = f.eval_real(x)?;
    Ok(ratio_bounds(x, &y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// State passed to an observer at every iterate.
#[derive(Debug, Clone, Copy)]
pub struct IterStep<'a> {
    pub iteration: usize,
    pub point: &'a [f64],
    pub alpha: f64,
    pub beta: f64,
    pub hilbert_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Sup-norm normalized point at which the bracket was measured.
    pub vector: Vec<f64>,
    /// Geometric mean `√(αβ)` of the bracket.
    pub eigenvalue: f64,
    pub bracket: (f64, f64),
    pub converged: bool,
    pub iterations: usize,
    pub hilbert_step: f64,
    /// Why the iteration stopped without converging.
    pub diagnostic: Option<String>,
}

impl EigenResult {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "eigenvalue: {}", self.eigenvalue);
        let _ = writeln!(s, "eigenvector: ({})", join(&self.vector));
        let _ = writeln!(s, "bracket: [{}, {}]", self.bracket.0, self.bracket.1);
        let _ = writeln!(s, "converged: {}", self.converged);
        let _ = writeln!(s, "iterations: {}", self.iterations);
        let _ = write!(s, "hilbert_step: {:e}", self.hilbert_step);
        if let Some(d) = &self.diagnostic {
            let _ = write!(s, "\ndiagnostic: {d}");
        }
        s
    }

    pub fn render_structured(&self) -> String {
        let mut s = String::from("record: eigen\n");
        let _ = writeln!(s, "eigenvalue: {:e}", self.eigenvalue);
        let _ = writeln!(s, "eigenvector: {}", join(&self.vector));
        let _ = writeln!(s, "alpha: {:e}", self.bracket.0);
        let _ = writeln!(s, "beta: {:e}", self.bracket.1);
        let _ = writeln!(s, "converged: {}", self.converged);
        let _ = writeln!(s, "iterations: {}", self.iterations);
        let _ = writeln!(s, "hilbert_step: {:e}", self.hilbert_step);
        if let Some(d) = &self.diagnostic {
            let _ = writeln!(s, "diagnostic: {d}");
        }
        s.push('\n');
        s
    }
}

pub(crate) fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let m = x.iter().copied().fold(0.0, f64::max);
    x.iter().map(|v| v / m).collect()
}

pub fn power_iteration(f: &MapExpr, x0: &[f64], opts: &PowerOptions) -> Result<EigenResult, SpectralError> {
    power_iteration_observed(f, x0, opts, |_| {})
}

/// Iterates `x ↦ f(x)/‖f(x)‖∞` until the Hilbert step and the bracket ratio
/// are both within `tol`. Running out of iterations, or an iterate reaching
/// the boundary, is reported through `converged = false`.
pub fn power_iteration_observed(
    f: &MapExpr,
    x0: &[f64],
    opts: &PowerOptions,
    mut observer: impl FnMut(&IterStep),
) -> Result<EigenResult, SpectralError> {
    require_interior(x0, f.dim())?;
    if !(opts.tol > 0.0) {
        return Err(SpectralError::BadTolerance);
    }
    let mut x = normalized(x0);
    // Last point at which the bracket was measured.
    let mut last: Option<(Vec<f64>, f64, f64, f64)> = None;
    let stop = |last: Option<(Vec<f64>, f64, f64, f64)>, x: Vec<f64>, k: usize, msg: String| {
        let (vector, alpha, beta, step) = last.unwrap_or((x, f64::NAN, f64::NAN, f64::INFINITY));
        EigenResult {
            eigenvalue: (alpha * beta).sqrt(),
            vector,
            bracket: (alpha, beta),
            converged: false,
            iterations: k,
            hilbert_step: step,
            diagnostic: Some(msg),
        }
    };
    for k in 0..opts.max_iter {
        let y = f.eval_real(&x)?;
        if !is_interior(&y) {
            return Ok(stop(last, x, k, format!("iterate {} left the interior of the cone", k + 1)));
        }
        let (alpha, beta) = ratio_bounds(&x, &y);
        let next = normalized(&y);
        if !is_interior(&next) {
            return Ok(stop(last, x, k, format!("iterate {} underflowed to the boundary", k + 1)));
        }
        let step = hilbert_distance(&x, &next)?;
        observer(&IterStep {
            iteration: k,
            point: &x,
            alpha,
            beta,
            hilbert_step: step,
        });
        if step <= opts.tol && beta / alpha <= 1.0 + opts.tol {
            return Ok(EigenResult {
                eigenvalue: (alpha * beta).sqrt(),
                vector: x,
                bracket: (alpha, beta),
                converged: true,
                iterations: k + 1,
                hilbert_step: step,
                diagnostic: None,
            });
        }
        last = Some((std::mem::replace(&mut x, next), alpha, beta, step));
    }
    Ok(stop(last, x, opts.max_iter, format!("no convergence within {} iterations", opts.max_iter)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum MConvexity {
    Pass,
    Violation {
        x: Vec<f64>,
        y: Vec<f64>,
        lambda: f64,
        /// 0-based output coordinate.
        entry: usize,
        lhs: f64,
        rhs: f64,
    },
}

/// Samples interior `x`, `y` and `λ ∈ (0,1)` and tests
/// `f(x^λ y^{1−λ}) ≤ f(x)^λ f(y)^{1−λ}` entrywise up to relative `tol`.
pub fn mconvexity_spot_check(
    f: &MapExpr,
    samples: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<MConvexity, SpectralError> {
    let n = f.dim();
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0f64..3.0).exp()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0f64..3.0).exp()).collect();
        let lambda = rng.random_range(0.001..0.999);
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.powf(lambda) * b.powf(1.0 - lambda)).collect();
        let (fx, fy, fm) = (f.eval_real(&x)?, f.eval_real(&y)?, f.eval_real(&mid)?);
        for i in 0..n {
            let rhs = fx[i].powf(lambda) * fy[i].powf(1.0 - lambda);
            if fm[i] > rhs * (1.0 + tol) {
                return Ok(MConvexity::Violation {
                    x,
                    y,
                    lambda,
                    entry: i,
                    lhs: fm[i],
                    rhs,
                });
            }
        }
    }
    Ok(MConvexity::Pass)
}
