//! Best-first branch-and-bound over LP relaxations.
//!
//! Nodes are ordered by their bound, rounded up when the objective is
//! integral; among nodes with the same rounded bound the deepest goes first,
//! which dives toward incumbents. Each node is a set of tightened bounds. Nodes are re-optimized with the
//! dual simplex starting from the optimal root tableau, so the relaxation is
//! factorized only once. Branching picks the most fractional integer
//! variable, ties going to the lowest index. Bounds are rounded up only when
//! every objective coefficient sits on an integer variable and is itself
//! integral.

use super::simplex::{Outcome, Tableau};
use super::{LinearProgram, LpError, LpSolution, LpStatus, Sense, FEASIBILITY_TOL, INTEGRALITY_TOL};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct IlpOptions {
    pub time_limit: Option<Duration>,
    /// Relative gap `(incumbent − bound) / max(1, |incumbent|)` at which the search stops.
    pub gap_limit: f64,
    pub node_limit: Option<usize>,
    /// A known feasible integral point used as the starting incumbent.
    pub incumbent: Option<Vec<f64>>,
}

impl Default for IlpOptions {
    fn default() -> Self {
        Self {
            time_limit: None,
            gap_limit: 1e-9,
            node_limit: None,
            incumbent: None,
        }
    }
}

impl IlpOptions {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_incumbent(mut self, values: Vec<f64>) -> Self {
        self.incumbent = Some(values);
        self
    }
}

#[derive(Clone, Debug)]
pub struct IlpSolution {
    /// `Optimal` when the gap closed; `TimeLimit`/`IterationLimit` otherwise, in
    /// which case `solution.values` holds the incumbent if there is one.
    pub solution: LpSolution,
    /// Best proven bound on the optimum, in the model's own sense.
    pub best_bound: f64,
    pub nodes: usize,
}

impl IlpSolution {
    pub fn has_incumbent(&self) -> bool {
        !self.solution.values.is_empty()
    }

    pub fn gap(&self) -> f64 {
        if !self.has_incumbent() {
            return f64::INFINITY;
        }
        (self.solution.objective_value - self.best_bound).abs() / self.solution.objective_value.abs().max(1.0)
    }
}

struct Node {
    /// Bound after rounding up for integral objectives; the primary key.
    key: f64,
    bound: f64,
    depth: usize,
    seq: usize,
    bounds: Vec<(usize, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Max-heap: lowest rounded bound first, then deepest (diving among equal
    // keys), then lowest raw bound, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(self.depth.cmp(&other.depth))
            .then(other.bound.total_cmp(&self.bound))
            .then(other.seq.cmp(&self.seq))
    }
}

fn has_integral_objective(lp: &LinearProgram) -> bool {
    lp.vars
        .iter()
        .all(|v| v.objective == 0.0 || (v.integer && v.objective == v.objective.round()))
}

/// Solves `lp` respecting its integrality flags.
pub fn solve_ilp(lp: &LinearProgram, options: &IlpOptions) -> Result<IlpSolution, LpError> {
    lp.validate()?;
    let start = Instant::now();
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let finish = |status: LpStatus, incumbent: Option<(Vec<f64>, f64)>, bound: f64, nodes: usize| {
        let solution = match incumbent {
            Some((values, _)) => LpSolution {
                status,
                objective_value: lp.objective_value(&values),
                values,
            },
            None => LpSolution::without_point(status),
        };
        IlpSolution {
            solution,
            best_bound: sign * bound,
            nodes,
        }
    };

    let mut incumbent: Option<(Vec<f64>, f64)> = None;
    if let Some(start_point) = &options.incumbent {
        if lp.is_feasible(start_point, 1e-6) && lp.is_integral(start_point) {
            let values = snap_integers(lp, start_point);
            let obj = sign * lp.objective_value(&values);
            incumbent = Some((values, obj));
        }
    }

    let (root, out) = Tableau::solve(lp);
    match out {
        Outcome::Optimal => {}
        Outcome::Infeasible => return Ok(finish(LpStatus::Infeasible, None, f64::INFINITY, 1)),
        Outcome::Unbounded => return Ok(finish(LpStatus::Unbounded, incumbent, f64::NEG_INFINITY, 1)),
        _ => return Ok(finish(LpStatus::IterationLimit, incumbent, f64::NEG_INFINITY, 1)),
    }
    let int_obj = has_integral_objective(lp);
    let effective = |b: f64| if int_obj { (b - 1e-6).ceil() } else { b };
    let abs_tol = |inc: f64| (options.gap_limit * inc.abs().max(1.0)).max(1e-9);
    let cutoff_of = |inc: &Option<(Vec<f64>, f64)>| match inc {
        Some((_, v)) if int_obj => v - 1.0 + 1e-6,
        Some((_, v)) => v - abs_tol(*v),
        None => f64::INFINITY,
    };

    let limit = 20_000 + 50 * (lp.num_rows() + lp.num_vars());
    let mut heap = BinaryHeap::new();
    let root_obj: f64 = root.structural_values().iter().zip(lp.vars.iter()).map(|(x, v)| sign * v.objective * x).sum();
    heap.push(Node {
        key: effective(root_obj),
        bound: root_obj,
        depth: 0,
        seq: 0,
        bounds: Vec::new(),
    });
    let mut seq = 1usize;
    let mut nodes = 0usize;
    let mut incomplete = false;
    let mut skipped_bound = f64::INFINITY;
    let mut stopped: Option<LpStatus> = None;

    while let Some(node) = heap.peek() {
        if let Some((_, inc)) = &incumbent {
            if node.key >= inc - abs_tol(*inc) {
                // Lowest open bound already matches the incumbent: done.
                heap.clear();
                break;
            }
        }
        if options.time_limit.is_some_and(|l| start.elapsed() >= l) {
            stopped = Some(LpStatus::TimeLimit);
            break;
        }
        if options.node_limit.is_some_and(|l| nodes >= l) {
            stopped = Some(LpStatus::IterationLimit);
            break;
        }
        let node = heap.pop().expect("peeked");
        nodes += 1;

        let mut tab = root.clone();
        if !node.bounds.is_empty() {
            tab.iterations = 0;
            for &(j, lo, hi) in &node.bounds {
                tab.set_bounds(j, lo, hi);
            }
            match tab.reoptimize(cutoff_of(&incumbent), limit) {
                Outcome::Optimal => {}
                Outcome::Infeasible | Outcome::Cutoff => continue,
                Outcome::Unbounded | Outcome::IterationLimit => {
                    incomplete = true;
                    skipped_bound = skipped_bound.min(node.bound);
                    continue;
                }
            }
        }
        let x = tab.structural_values();
        let obj: f64 = x.iter().zip(lp.vars.iter()).map(|(x, v)| sign * v.objective * x).sum();
        if let Some((_, inc)) = &incumbent {
            if effective(obj) >= inc - abs_tol(*inc) {
                continue;
            }
        }

        let mut branch: Option<(usize, f64)> = None;
        let mut best_frac = INTEGRALITY_TOL;
        for (j, v) in lp.vars.iter().enumerate() {
            if !v.integer {
                continue;
            }
            let f = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
            if f > best_frac + 1e-12 {
                best_frac = f;
                branch = Some((j, x[j]));
            }
        }
        match branch {
            None => {
                let values = snap_integers(lp, x);
                if lp.max_violation(&values) <= FEASIBILITY_TOL * 10.0 {
                    let value = sign * lp.objective_value(&values);
                    if incumbent.as_ref().is_none_or(|(_, inc)| value < *inc) {
                        incumbent = Some((values, value));
                    }
                } else {
                    incomplete = true;
                    skipped_bound = skipped_bound.min(obj);
                }
            }
            Some((j, v)) => {
                let (lo, hi) = node
                    .bounds
                    .iter()
                    .rev()
                    .find(|b| b.0 == j)
                    .map(|b| (b.1, b.2))
                    .unwrap_or((lp.vars[j].lower, lp.vars[j].upper));
                let down = (j, lo, v.floor());
                let up = (j, v.ceil(), hi);
                let (first, second) = if v - v.floor() >= 0.5 { (up, down) } else { (down, up) };
                for b in [first, second] {
                    let mut bounds = node.bounds.clone();
                    bounds.retain(|c| c.0 != j);
                    bounds.push(b);
                    heap.push(Node {
                        key: effective(obj),
                        bound: obj,
                        depth: node.depth + 1,
                        seq,
                        bounds,
                    });
                    seq += 1;
                }
            }
        }
    }

    // Bound over everything not fully explored; nodes dropped on solver
    // trouble keep their parent bound.
    let mut bound = heap.iter().map(|n| n.bound).fold(skipped_bound, f64::min);
    if bound.is_finite() {
        bound = effective(bound);
    }
    if let Some((_, inc)) = &incumbent {
        bound = bound.min(*inc);
    }
    let status = match (stopped, incomplete, &incumbent) {
        (Some(s), _, _) => s,
        (None, true, _) => LpStatus::IterationLimit,
        (None, false, Some(_)) => LpStatus::Optimal,
        (None, false, None) => LpStatus::Infeasible,
    };
    Ok(finish(status, incumbent, bound, nodes))
}

fn snap_integers(lp: &LinearProgram, x: &[f64]) -> Vec<f64> {
    lp.vars
        .iter()
        .zip(x)
        .map(|(v, &x)| if v.integer { x.round() } else { x.clamp(v.lower, v.upper) })
        .collect()
}
