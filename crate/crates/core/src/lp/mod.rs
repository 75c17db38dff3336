//! Dense linear and integer programming.
//!
//! [`LinearProgram`] is a plain model: variables with bounds, objective
//! coefficients and integrality flags, and sparse rows with a relation and a
//! right-hand side. [`solve_lp`] runs a bounded-variable two-phase primal
//! simplex on a dense tableau; [`solve_ilp`] wraps it in best-first
//! branch-and-bound whose nodes are re-optimized with the dual simplex from the
//! root basis. [`export_model`] and [`import_solution`] speak the CPLEX LP text
//! format for use with an external solver.

mod branch;
mod lpfile;
mod simplex;

pub use branch::{solve_ilp, IlpOptions, IlpSolution};
pub use lpfile::{export_model, import_solution, read_solution, write_model};
pub use simplex::solve_lp;

use serde::{Deserialize, Serialize};
use std::fmt;

/// Constraint and bound violations up to this size are considered satisfied.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// A value within this distance of an integer counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub objective: f64,
    pub lower: f64,
    pub upper: f64,
    pub integer: bool,
}

/// A linear row `Σ coeff·x relation rhs`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * values[j]).sum()
    }

    /// Amount by which `values` violates the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub vars: Vec<Variable>,
    pub rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            vars: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds a continuous variable with bounds `[lower, upper]` and returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, objective: f64, lower: f64, upper: f64) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            objective,
            lower,
            upper,
            integer: false,
        });
        self.vars.len() - 1
    }

    pub fn add_int_var(&mut self, name: impl Into<String>, objective: f64, lower: f64, upper: f64) -> usize {
        let j = self.add_var(name, objective, lower, upper);
        self.vars[j].integer = true;
        j
    }

    pub fn add_row(&mut self, name: impl Into<String>, terms: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.rows.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn objective(&self) -> Vec<f64> {
        self.vars.iter().map(|v| v.objective).collect()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.vars.iter().zip(values).map(|(v, x)| v.objective * x).sum()
    }

    /// Drops all integrality flags.
    pub fn relaxed(&self) -> Self {
        let mut lp = self.clone();
        for v in &mut lp.vars {
            v.integer = false;
        }
        lp
    }

    pub fn has_integers(&self) -> bool {
        self.vars.iter().any(|v| v.integer)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.vars.len();
        for (j, v) in self.vars.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(LpError::InvalidModel(format!(
                    "variable {} ({}) has bounds [{}, {}]",
                    j, v.name, v.lower, v.upper
                )));
            }
            if v.lower == f64::INFINITY || v.upper == f64::NEG_INFINITY {
                return Err(LpError::InvalidModel(format!("variable {} has an infinite fixed bound", v.name)));
            }
            if !v.objective.is_finite() {
                return Err(LpError::InvalidModel(format!("variable {} has objective {}", v.name, v.objective)));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::InvalidModel(format!("row {} has rhs {}", i, row.rhs)));
            }
            for &(j, a) in &row.terms {
                if j >= n {
                    return Err(LpError::InvalidModel(format!("row {} references variable {} of {}", i, j, n)));
                }
                if !a.is_finite() {
                    return Err(LpError::InvalidModel(format!("row {} has coefficient {}", i, a)));
                }
            }
        }
        Ok(())
    }

    /// Largest row or bound violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(values)).fold(0.0, f64::max);
        let bounds = self
            .vars
            .iter()
            .zip(values)
            .map(|(v, &x)| (v.lower - x).max(x - v.upper).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }

    pub fn is_feasible(&self, values: &[f64], tol: f64) -> bool {
        values.len() == self.vars.len() && self.max_violation(values) <= tol
    }

    pub fn is_integral(&self, values: &[f64]) -> bool {
        self.vars
            .iter()
            .zip(values)
            .all(|(v, &x)| !v.integer || (x - x.round()).abs() <= INTEGRALITY_TOL)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// Branch-and-bound stopped on its time limit before closing the gap.
    TimeLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    pub(crate) fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown variable `{0}` in solution file")]
    UnknownVariable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
