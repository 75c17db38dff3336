//! Randomized roundings that keep disjoint cardinality constraints.
//!
//! A [`RoundingProblem`] is a vector of values in `[0, 1]` together with
//! disjoint index groups. In cardinality mode every group sums to an integer
//! and every rounding here returns a 0/1 vector with exactly the same group
//! sums, while each coordinate is 1 with probability equal to its value.
//!
//! * [`round_tree`] pairs fractional entries along a balanced binary tree over
//!   each group and resolves each pair with [`pair_round`].
//! * [`round_bitwise`] works on a fixed-point representation and clears one
//!   binary digit per level by pairing entries that carry it.
//! * [`derandomize`] walks either structure deterministically, keeping at every
//!   step the alternative that does not worsen an [`Estimator`].
//! * [`round_budget_preserving`] and [`gradient_round`] are the max-coverage
//!   variants: pairs move along `c_i y_i + c_j y_j = const` so a weighted budget
//!   is kept up to a single item.
//! * [`round_independent`] is the classical baseline with no guarantee.

mod bitwise;
mod budget;
mod derand;
mod gradient;
mod pair;
mod tree;

pub use bitwise::{round_bitwise, DEFAULT_PRECISION_BITS};
pub use budget::{round_budget_preserving, round_weighted, BudgetRounding};
pub use derand::{derandomize, DerandOutcome, Pairing};
pub use gradient::gradient_round;
pub use pair::{pair_corners, pair_round, round_independent, PairCorners};
pub use tree::round_tree;

use serde::{Deserialize, Serialize};

/// Group sums within this distance of an integer count as integral, and values
/// this close to 0 or 1 are snapped before rounding.
pub const INTEGRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoundingError {
    #[error("infeasible cardinality constraint: group {group} sums to {sum}")]
    InfeasibleCardinality { group: usize, sum: f64 },
    #[error("value {value} at index {index} is outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("index {index} appears in more than one group or is out of range")]
    BadGroup { index: usize },
    #[error("cost {cost} at index {index} is not strictly positive")]
    BadCost { index: usize, cost: f64 },
    #[error("pair ({0}, {1}) is not strictly fractional")]
    DegeneratePair(f64, f64),
    #[error("weighted sum {total} exceeds budget {budget}")]
    BudgetExceeded { total: f64, budget: f64 },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("estimator failed: {0}")]
    Estimator(String),
}

/// Snaps values within [`INTEGRAL_TOL`] of 0 or 1.
pub(crate) fn snap(v: f64) -> f64 {
    if v <= INTEGRAL_TOL {
        0.0
    } else if v >= 1.0 - INTEGRAL_TOL {
        1.0
    } else {
        v
    }
}

pub(crate) fn is_fractional(v: f64) -> bool {
    v > INTEGRAL_TOL && v < 1.0 - INTEGRAL_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingProblem {
    values: Vec<f64>,
    groups: Vec<Vec<usize>>,
    costs: Option<Vec<f64>>,
}

impl RoundingProblem {
    /// Builds a cardinality-mode problem. Groups are stored sorted; values within
    /// [`INTEGRAL_TOL`] of 0 or 1 are snapped. Group sums are checked by the
    /// rounding routines, not here.
    pub fn new(values: Vec<f64>, groups: Vec<Vec<usize>>) -> Result<Self, RoundingError> {
        let n = values.len();
        let mut values = values;
        for (index, v) in values.iter_mut().enumerate() {
            if !(-INTEGRAL_TOL..=1.0 + INTEGRAL_TOL).contains(v) {
                return Err(RoundingError::ValueOutOfRange { index, value: *v });
            }
            *v = snap(*v);
        }
        let mut seen = vec![false; n];
        let mut groups = groups;
        for g in &mut groups {
            g.sort_unstable();
            for &index in g.iter() {
                if index >= n || seen[index] {
                    return Err(RoundingError::BadGroup { index });
                }
                seen[index] = true;
            }
        }
        Ok(Self {
            values,
            groups,
            costs: None,
        })
    }

    /// A problem with no groups: every index is free.
    pub fn ungrouped(values: Vec<f64>) -> Result<Self, RoundingError> {
        Self::new(values, Vec::new())
    }

    pub fn with_costs(mut self, costs: Vec<f64>) -> Result<Self, RoundingError> {
        if costs.len() != self.values.len() {
            return Err(RoundingError::LengthMismatch(format!(
                "{} costs for {} values",
                costs.len(),
                self.values.len()
            )));
        }
        if let Some((index, &cost)) = costs.iter().enumerate().find(|(_, &c)| !(c > 0.0 && c.is_finite())) {
            return Err(RoundingError::BadCost { index, cost });
        }
        self.costs = Some(costs);
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn costs(&self) -> Option<&[f64]> {
        self.costs.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices that belong to no group, ascending.
    pub fn free_indices(&self) -> Vec<usize> {
        let mut in_group = vec![false; self.values.len()];
        for g in &self.groups {
            for &i in g {
                in_group[i] = true;
            }
        }
        (0..self.values.len()).filter(|&i| !in_group[i]).collect()
    }

    pub fn group_sum(&self, group: usize) -> f64 {
        self.groups[group].iter().map(|&i| self.values[i]).sum()
    }

    /// Fails unless every group sum is integral within [`INTEGRAL_TOL`].
    pub fn check_cardinality(&self) -> Result<(), RoundingError> {
        for group in 0..self.groups.len() {
            let sum = self.group_sum(group);
            if (sum - sum.round()).abs() > INTEGRAL_TOL {
                return Err(RoundingError::InfeasibleCardinality { group, sum });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundingMethod {
    Independent,
    Tree,
    Bitwise,
    DerandTree,
    DerandSequential,
    DerandBitwise,
    Weighted,
    BudgetPreserving,
    Gradient,
}

impl RoundingMethod {
    pub fn name(self) -> &'static str {
        match self {
            RoundingMethod::Independent => "independent",
            RoundingMethod::Tree => "tree",
            RoundingMethod::Bitwise => "bitwise",
            RoundingMethod::DerandTree => "derand-tree",
            RoundingMethod::DerandSequential => "derand-sequential",
            RoundingMethod::DerandBitwise => "derand-bitwise",
            RoundingMethod::Weighted => "weighted",
            RoundingMethod::BudgetPreserving => "budget-preserving",
            RoundingMethod::Gradient => "gradient",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            RoundingMethod::Independent | RoundingMethod::Tree | RoundingMethod::Bitwise | RoundingMethod::Weighted
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingResult {
    pub bits: Vec<u8>,
    pub method: RoundingMethod,
    /// Seed of the generator for randomized methods, when the caller supplied one.
    pub rng_seed: Option<u64>,
}

impl RoundingResult {
    pub(crate) fn from_values(values: &[f64], method: RoundingMethod) -> Self {
        Self {
            bits: values.iter().map(|&v| u8::from(v >= 0.5)).collect(),
            method,
            rng_seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = Some(seed);
        self
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| f64::from(b)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// A score over partially rounded points that guides derandomization.
///
/// Points hold the current value of every coordinate: already rounded ones are
/// 0 or 1, the rest still fractional.
pub trait Estimator {
    fn direction(&self) -> Direction;

    fn evaluate(&self, point: &[f64]) -> Result<f64, RoundingError>;

    /// Score of `point` with the listed coordinates replaced. Implementations may
    /// override this with an incremental update.
    fn evaluate_with(&self, point: &[f64], changes: &[(usize, f64)]) -> Result<f64, RoundingError> {
        let mut p = point.to_vec();
        for &(i, v) in changes {
            p[i] = v;
        }
        self.evaluate(&p)
    }

    /// True if `a` is strictly better than `b`.
    fn better(&self, a: f64, b: f64) -> bool {
        match self.direction() {
            Direction::Minimize => a < b,
            Direction::Maximize => a > b,
        }
    }
}

impl<E: Estimator + ?Sized> Estimator for &E {
    fn direction(&self) -> Direction {
        (**self).direction()
    }
    fn evaluate(&self, point: &[f64]) -> Result<f64, RoundingError> {
        (**self).evaluate(point)
    }
    fn evaluate_with(&self, point: &[f64], changes: &[(usize, f64)]) -> Result<f64, RoundingError> {
        (**self).evaluate_with(point, changes)
    }
}

/// Checks that `bits` keeps every group sum of `problem`.
pub fn preserves_groups(problem: &RoundingProblem, bits: &[u8]) -> bool {
    problem.groups().iter().enumerate().all(|(g, members)| {
        let ones: usize = members.iter().map(|&i| usize::from(bits[i])).sum();
        ones as f64 == problem.group_sum(g).round()
    })
}
