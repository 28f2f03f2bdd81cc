//! Random maps for property tests, benchmarks and examples.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::expr::{MapExpr, ScalarExpr, Weights};

/// Shape parameters for random power-mean maps.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGen {
    pub n: usize,
    /// Exponents to draw from; may include `±∞`.
    pub exponents: Vec<f64>,
    /// Nesting depth of linear combinations inside an entry.
    pub max_depth: usize,
    /// Number of composition, sum or scaling layers above the entries.
    pub max_layers: usize,
    pub var_prob: f64,
    /// Expected support size of an average.
    pub support: f64,
    pub weight_range: (f64, f64),
    pub coef_range: (f64, f64),
}

impl MapGen {
    /// Mixed exponent signs, geometric means and all structural operations.
    pub fn broad(n: usize) -> Self {
        MapGen {
            n,
            exponents: vec![f64::NEG_INFINITY, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY],
            max_depth: 2,
            max_layers: 2,
            var_prob: 0.3,
            support: 2.0,
            weight_range: (0.05, 1.0),
            coef_range: (0.1, 10.0),
        }
    }

    /// Only exponents `r ≥ 0`, so every average is m-convex.
    pub fn nonnegative(n: usize) -> Self {
        MapGen {
            exponents: vec![0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY],
            ..MapGen::broad(n)
        }
    }

    /// Maps whose divergence along `1 + t·e_J` is visible at `t = e⁴⁰`
    /// against the threshold `e²⁰`: no geometric means, exponents bounded
    /// away from zero, balanced weights and coefficients, one layer.
    pub fn log_resolvable(n: usize) -> Self {
        MapGen {
            n,
            exponents: vec![f64::NEG_INFINITY, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0, f64::INFINITY],
            max_depth: 2,
            max_layers: 1,
            var_prob: 0.3,
            support: 2.0,
            weight_range: (1.0, 3.0),
            coef_range: (0.5, 2.0),
        }
    }

    fn weights(&self, rng: &mut impl Rng) -> Weights {
        let p = (self.support / self.n as f64).min(1.0);
        let mut w: Vec<f64> = (0..self.n)
            .map(|_| if rng.random_bool(p) { rng.random_range(self.weight_range.0..=self.weight_range.1) } else { 0.0 })
            .collect();
        if w.iter().all(|&v| v == 0.0) {
            w[rng.random_range(0..self.n)] = rng.random_range(self.weight_range.0..=self.weight_range.1);
        }
        let total: f64 = w.iter().sum();
        Weights::new(w.into_iter().map(|v| v / total).collect()).expect("normalized weights")
    }

    fn coef(&self, rng: &mut impl Rng) -> f64 {
        rng.random_range(self.coef_range.0..=self.coef_range.1)
    }

    fn scalar(&self, depth: usize, rng: &mut impl Rng) -> ScalarExpr {
        if rng.random_bool(self.var_prob) {
            return ScalarExpr::Var(rng.random_range(0..self.n));
        }
        if depth > 0 && rng.random_bool(0.4) {
            let k = rng.random_range(1..=3);
            return ScalarExpr::LinComb((0..k).map(|_| (self.coef(rng), self.scalar(depth - 1, rng))).collect());
        }
        let r = *self.exponents.choose(rng).expect("nonempty exponent list");
        ScalarExpr::avg(r, self.weights(rng))
    }

    fn map(&self, layers: usize, rng: &mut impl Rng) -> MapExpr {
        if layers > 0 && rng.random_bool(0.35) {
            return match rng.random_range(0..3) {
                0 => MapExpr::compose(self.map(layers - 1, rng), self.map(layers - 1, rng)),
                1 => MapExpr::sum(self.coef(rng), self.map(layers - 1, rng), self.coef(rng), self.map(layers - 1, rng)),
                _ => MapExpr::diag((0..self.n).map(|_| self.coef(rng)).collect(), self.map(layers - 1, rng)),
            };
        }
        MapExpr::Entries((0..self.n).map(|_| self.scalar(self.max_depth, rng)).collect())
    }

    pub fn sample(&self, rng: &mut impl Rng) -> MapExpr {
        let f = self.map(self.max_layers, rng);
        debug_assert_eq!(f.validate(), Ok(self.n));
        f
    }
}

/// Entrywise-positive matrix with entries uniform in `[0.1, 1]`.
pub fn random_positive_matrix(n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..n).map(|_| rng.random_range(0.1..=1.0)).collect()).collect()
}
