use super::{GridNetwork, PathDecomposition};
use crate::rounding::{Direction, Estimator, RoundingError};

/// Chernoff-style pessimistic estimator for "some edge carries more than `T`
/// paths":
///
/// ```text
/// Σ_e exp(−λT) · Π_{P ∋ e} (1 − y_P + y_P·e^λ)
/// ```
///
/// Fixed paths contribute `e^λ` or `1`, fractional ones the moment bound of a
/// Bernoulli variable. Along any pair line the score is concave, so the better
/// corner never increases it.
#[derive(Clone, Debug)]
pub struct CongestionEstimator {
    edge_vars: Vec<Vec<usize>>,
    num_vars: usize,
    target: f64,
    lambda: f64,
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

impl CongestionEstimator {
    /// Estimator with explicit target and λ.
    pub fn with_params(net: &GridNetwork, decomp: &PathDecomposition, target: f64, lambda: f64) -> Self {
        let mut edge_vars = vec![Vec::new(); net.num_edges()];
        let mut v = 0;
        for p in decomp.paths.iter().flatten() {
            for &e in &p.edges {
                edge_vars[e].push(v);
            }
            v += 1;
        }
        Self {
            edge_vars,
            num_vars: v,
            target,
            lambda,
        }
    }

    /// Chooses `T` by doubling from `⌈C*⌉` until the best initial score drops
    /// below 1, with λ minimizing the initial score for each candidate `T`.
    pub fn new(net: &GridNetwork, decomp: &PathDecomposition) -> Self {
        let mut est = Self::with_params(net, decomp, 1.0, 1.0);
        let y: Vec<f64> = decomp.paths.iter().flatten().map(|p| p.weight).collect();
        let c_star = decomp.fractional_congestion(net);
        let mut target = (c_star - 1e-9).ceil().max(1.0);
        loop {
            est.target = target;
            est.lambda = est.best_lambda(&y);
            if est.ln_score(&y, est.lambda) < 0.0 || target > 1e6 {
                return est;
            }
            target *= 2.0;
        }
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn ln_score(&self, y: &[f64], lambda: f64) -> f64 {
        let g = lambda.exp_m1();
        log_sum_exp(
            self.edge_vars
                .iter()
                .map(|vars| vars.iter().map(|&v| (g * y[v]).ln_1p()).sum::<f64>() - lambda * self.target),
        )
    }

    /// Golden-section search for the λ minimizing the (convex) log score at `y`.
    fn best_lambda(&self, y: &[f64]) -> f64 {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (1e-6, 20.0);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (self.ln_score(y, c), self.ln_score(y, d));
        for _ in 0..100 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = self.ln_score(y, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = self.ln_score(y, d);
            }
        }
        (a + b) / 2.0
    }
}

impl Estimator for CongestionEstimator {
    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn evaluate(&self, point: &[f64]) -> Result<f64, RoundingError> {
        if point.len() != self.num_vars {
            return Err(RoundingError::Estimator(format!(
                "point of length {} for {} paths",
                point.len(),
                self.num_vars
            )));
        }
        Ok(self.ln_score(point, self.lambda).exp())
    }
}
