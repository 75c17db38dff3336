//! Weighted max-coverage with set costs and a budget.
//!
//! The solvers share one instance type and one solution type:
//!
//! * [`greedy_cover`] takes the best ratio of newly covered weight to cost.
//! * [`solve_cover_lp`] solves the relaxation; its optimum `y*` is rounded by
//!   [`best_of_k`], [`derand_cover`] or [`gradient_cover`], all guided by the
//!   expected coverage `F(y)` of independent rounding ([`eval_f`], [`grad_f`]).
//! * [`enforce_budget`] repairs roundings that overshoot the budget.
//! * [`hybrid_cover`] spends part of the budget greedily and the rest on the
//!   LP of the reduced instance.

mod greedy;
mod hybrid;
mod relax;
mod round;

pub use greedy::{greedy_cover, greedy_cover_ordered, greedy_cover_permuted};
pub use hybrid::{hybrid_cover, HybridResult};
pub use relax::{
    build_cover_ilp, build_cover_lp, eval_f, grad_f, solve_cover_ilp, solve_cover_lp, CoverageOracle, ExactCover,
    FractionalCover,
};
pub use round::{best_of_k, derand_cover, enforce_budget, gradient_cover, round_cover, BestOfK, CoverMode, RoundedCover};

use crate::lp::LpError;
use crate::rounding::RoundingError;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CoverError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("LP relaxation ended with status {0:?}")]
    Solve(crate::lp::LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
}

/// On-disk layout of an instance.
#[derive(Serialize, Deserialize)]
struct RawInstance {
    m: usize,
    n: usize,
    budget: f64,
    costs: Vec<f64>,
    weights: Vec<f64>,
    sets: Vec<Vec<usize>>,
}

/// Sets over weighted elements, with set costs and a budget.
///
/// The canonical JSON form is
///
/// ```json
/// {"m": 3, "n": 2, "budget": 1, "costs": [1, 1], "weights": [1, 2, 1], "sets": [[0, 1], [2]]}
/// ```
///
/// where `m` counts elements, `n` counts sets and each set lists element
/// indices. Elements of weight zero are dropped (and the rest renumbered) when
/// an instance is read.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageInstance {
    sets: Vec<Vec<usize>>,
    costs: Vec<f64>,
    weights: Vec<f64>,
    budget: f64,
    /// Sets containing each element, ascending.
    covers: Vec<Vec<usize>>,
}

impl CoverageInstance {
    /// Builds an instance; sets are sorted and deduplicated.
    pub fn new(sets: Vec<Vec<usize>>, costs: Vec<f64>, weights: Vec<f64>, budget: f64) -> Result<Self, CoverError> {
        let m = weights.len();
        if costs.len() != sets.len() {
            return Err(CoverError::Invalid(format!("{} costs for {} sets", costs.len(), sets.len())));
        }
        if let Some(c) = costs.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return Err(CoverError::Invalid(format!("set cost {c} is not positive")));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(CoverError::Invalid(format!("element weight {w} is negative")));
        }
        if !(budget > 0.0 && budget.is_finite()) {
            return Err(CoverError::Invalid(format!("budget {budget} is not positive")));
        }
        let mut sets = sets;
        let mut covers = vec![Vec::new(); m];
        for (j, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            for &e in s.iter() {
                if e >= m {
                    return Err(CoverError::Invalid(format!("set {j} names element {e} of {m}")));
                }
                covers[e].push(j);
            }
        }
        Ok(Self {
            sets,
            costs,
            weights,
            budget,
            covers,
        })
    }

    /// Unit costs and the given weights.
    pub fn unit_cost(sets: Vec<Vec<usize>>, weights: Vec<f64>, budget: f64) -> Result<Self, CoverError> {
        let n = sets.len();
        Self::new(sets, vec![1.0; n], weights, budget)
    }

    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        if raw.sets.len() != raw.n || raw.weights.len() != raw.m {
            return Err(CoverError::Invalid(format!(
                "header says m={} n={} but found {} weights and {} sets",
                raw.m,
                raw.n,
                raw.weights.len(),
                raw.sets.len()
            )));
        }
        Self::new(raw.sets, raw.costs, raw.weights, raw.budget).map(|inst| inst.without_zero_weights())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawInstance {
            m: self.num_elements(),
            n: self.num_sets(),
            budget: self.budget,
            costs: self.costs.clone(),
            weights: self.weights.clone(),
            sets: self.sets.clone(),
        })
        .expect("instances always serialize")
    }

    /// Drops elements of weight zero and renumbers the rest in order.
    pub fn without_zero_weights(&self) -> Self {
        let mut new_id = vec![usize::MAX; self.num_elements()];
        let mut weights = Vec::new();
        for (e, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                new_id[e] = weights.len();
                weights.push(w);
            }
        }
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().filter(|&&e| new_id[e] != usize::MAX).map(|&e| new_id[e]).collect())
            .collect();
        Self::new(sets, self.costs.clone(), weights, self.budget).expect("subset of a valid instance")
    }

    pub fn with_budget(&self, budget: f64) -> Result<Self, CoverError> {
        Self::new(self.sets.clone(), self.costs.clone(), self.weights.clone(), budget)
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn num_elements(&self) -> usize {
        self.weights.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Sets containing element `e`.
    pub fn covering(&self, e: usize) -> &[usize] {
        &self.covers[e]
    }

    pub fn is_unit_cost(&self) -> bool {
        self.costs.iter().all(|&c| c == 1.0)
    }

    pub fn max_cost(&self) -> f64 {
        self.costs.iter().cloned().fold(0.0, f64::max)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weight of the union of the chosen sets.
    pub fn value(&self, chosen: &[usize]) -> f64 {
        let mut covered = vec![false; self.num_elements()];
        for &j in chosen {
            for &e in &self.sets[j] {
                covered[e] = true;
            }
        }
        covered.iter().zip(&self.weights).filter(|(c, _)| **c).map(|(_, w)| w).sum()
    }

    pub fn cost(&self, chosen: &[usize]) -> f64 {
        chosen.iter().map(|&j| self.costs[j]).sum()
    }

    /// A solution for the chosen sets with value and cost filled in.
    pub fn solution(&self, chosen: impl IntoIterator<Item = usize>) -> CoverSolution {
        let mut chosen: Vec<usize> = chosen.into_iter().collect();
        chosen.sort_unstable();
        chosen.dedup();
        CoverSolution {
            value: self.value(&chosen),
            cost: self.cost(&chosen),
            chosen,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSolution {
    /// Chosen set indices, ascending.
    pub chosen: Vec<usize>,
    pub value: f64,
    pub cost: f64,
}

impl CoverSolution {
    pub fn within_budget(&self, inst: &CoverageInstance) -> bool {
        self.cost <= inst.budget() + 1e-9
    }
}
