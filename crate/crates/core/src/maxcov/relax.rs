use super::{CoverError, CoverageInstance};
use super::CoverSolution;
use crate::lp::{solve_ilp, solve_lp, IlpOptions, LinearProgram, LpStatus, Relation, Sense};
use crate::rounding::{Direction, Estimator, RoundingError};

/// Optimum `(x*, y*)` of the relaxation with value `W*`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalCover {
    /// Set variables.
    pub y: Vec<f64>,
    /// Element variables.
    pub x: Vec<f64>,
    pub w_star: f64,
}

/// The LP relaxation: maximize `Σ w_i x_i` subject to `Σ c_j y_j ≤ L` and
/// `x_i ≤ Σ_{j ∋ i} y_j`, all variables in `[0, 1]`. Columns are the `y_j`
/// followed by the `x_i`.
pub fn build_cover_lp(inst: &CoverageInstance) -> LinearProgram {
    let n = inst.num_sets();
    let mut lp = LinearProgram::new(Sense::Maximize);
    for j in 0..n {
        lp.add_var(format!("y_{j}"), 0.0, 0.0, 1.0);
    }
    for (i, &w) in inst.weights().iter().enumerate() {
        lp.add_var(format!("x_{i}"), w, 0.0, 1.0);
    }
    lp.add_row("budget", inst.costs().iter().copied().enumerate().collect(), Relation::Le, inst.budget());
    for i in 0..inst.num_elements() {
        let mut terms = vec![(n + i, 1.0)];
        terms.extend(inst.covering(i).iter().map(|&j| (j, -1.0)));
        lp.add_row(format!("cover_{i}"), terms, Relation::Le, 0.0);
    }
    lp
}

/// [`build_cover_lp`] with every variable integral.
pub fn build_cover_ilp(inst: &CoverageInstance) -> LinearProgram {
    let mut lp = build_cover_lp(inst);
    for v in &mut lp.vars {
        v.integer = true;
    }
    lp
}

/// Result of the exact solve.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCover {
    /// Best selection found; optimal when `proven`.
    pub solution: CoverSolution,
    pub proven: bool,
    /// Proven upper bound on the optimum.
    pub bound: f64,
}

/// Solves the coverage ILP by branch-and-bound.
pub fn solve_cover_ilp(inst: &CoverageInstance, options: &IlpOptions) -> Result<ExactCover, CoverError> {
    let sol = solve_ilp(&build_cover_ilp(inst), options)?;
    if !sol.has_incumbent() {
        return Err(CoverError::Solve(sol.solution.status));
    }
    let n = inst.num_sets();
    Ok(ExactCover {
        solution: inst.solution((0..n).filter(|&j| sol.solution.values[j] >= 0.5)),
        proven: sol.solution.status == LpStatus::Optimal,
        bound: sol.best_bound,
    })
}

pub fn solve_cover_lp(inst: &CoverageInstance) -> Result<FractionalCover, CoverError> {
    let lp = build_cover_lp(inst);
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(CoverError::Solve(sol.status));
    }
    let n = inst.num_sets();
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    Ok(FractionalCover {
        y: sol.values[..n].iter().map(|&v| clamp(v)).collect(),
        x: sol.values[n..].iter().map(|&v| clamp(v)).collect(),
        w_star: sol.objective_value,
    })
}

/// Expected covered weight when set `j` is taken independently with
/// probability `y_j`: `Σ_i w_i (1 − Π_{j ∋ i} (1 − y_j))`.
pub fn eval_f(inst: &CoverageInstance, y: &[f64]) -> f64 {
    (0..inst.num_elements())
        .map(|i| {
            let miss: f64 = inst.covering(i).iter().map(|&j| 1.0 - y[j]).product();
            inst.weights()[i] * (1.0 - miss)
        })
        .sum()
}

/// `∂F/∂y_j = Σ_{i ∈ S_j} w_i Π_{k ∋ i, k ≠ j} (1 − y_k)`, computed with prefix and
/// suffix products so no division by `1 − y_j` is needed.
pub fn grad_f(inst: &CoverageInstance, y: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; inst.num_sets()];
    let mut suffix = Vec::new();
    for i in 0..inst.num_elements() {
        let ks = inst.covering(i);
        let w = inst.weights()[i];
        suffix.clear();
        suffix.resize(ks.len() + 1, 1.0);
        for p in (0..ks.len()).rev() {
            suffix[p] = suffix[p + 1] * (1.0 - y[ks[p]]);
        }
        let mut prefix = 1.0;
        for (p, &j) in ks.iter().enumerate() {
            g[j] += w * prefix * suffix[p + 1];
            prefix *= 1.0 - y[j];
        }
    }
    g
}

/// `F` as a maximizing estimator. Entries past the last set (padding used by
/// the cardinality roundings) are ignored.
#[derive(Clone, Copy, Debug)]
pub struct CoverageOracle<'a> {
    pub instance: &'a CoverageInstance,
}

impl Estimator for CoverageOracle<'_> {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn evaluate(&self, point: &[f64]) -> Result<f64, RoundingError> {
        if point.len() < self.instance.num_sets() {
            return Err(RoundingError::Estimator(format!(
                "point of length {} for {} sets",
                point.len(),
                self.instance.num_sets()
            )));
        }
        Ok(eval_f(self.instance, point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn relaxation_of_one_big_set() {
        let inst = CoverageInstance::new(vec![vec![0, 1, 2]], vec![2.0], vec![1.0, 2.0, 3.0], 2.0).unwrap();
        let f = solve_cover_lp(&inst).unwrap();
        assert!((f.w_star - 6.0).abs() < 1e-9);
    }

    #[test]
    fn f_at_corners() {
        let inst = CoverageInstance::unit_cost(vec![vec![0, 1], vec![1, 2]], vec![1.0, 2.0, 4.0], 1.0).unwrap();
        assert_eq!(eval_f(&inst, &[0.0, 0.0]), 0.0);
        assert_eq!(eval_f(&inst, &[1.0, 0.0]), 3.0);
        assert_eq!(eval_f(&inst, &[1.0, 1.0]), 7.0);
        // Element 1 is missed with probability 1/4.
        assert!((eval_f(&inst, &[0.5, 0.5]) - (0.5 + 2.0 * 0.75 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn f_matches_sampling() {
        let mut rng = rng_from_seed(21);
        let sets: Vec<Vec<usize>> = (0..3).map(|_| (0..6).filter(|_| rng.gen_bool(0.5)).collect()).collect();
        let weights: Vec<f64> = (0..6).map(|_| rng.gen_range(0.5..3.0)).collect();
        let inst = CoverageInstance::unit_cost(sets, weights, 2.0).unwrap();
        let y: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
        let trials = 1_000_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..trials {
            let chosen: Vec<usize> = (0..3).filter(|&j| rng.gen::<f64>() < y[j]).collect();
            let v = inst.value(&chosen);
            sum += v;
            sq += v * v;
        }
        let mean = sum / trials as f64;
        let sd = ((sq / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!((mean - eval_f(&inst, &y)).abs() < 3.0 * sd, "{mean} vs {}", eval_f(&inst, &y));
    }

    #[test]
    fn gradient_special_cases() {
        let singletons = CoverageInstance::unit_cost(vec![vec![0], vec![1]], vec![2.0, 5.0], 1.0).unwrap();
        assert_eq!(grad_f(&singletons, &[0.3, 0.9]), vec![2.0, 5.0]);
        // Set 1 contains all of set 0 and is taken: nothing left for set 0.
        let nested = CoverageInstance::unit_cost(vec![vec![0], vec![0, 1]], vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(grad_f(&nested, &[0.2, 1.0])[0], 0.0);
    }

    #[test]
    fn gradient_matches_differences() {
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let sets: Vec<Vec<usize>> = (0..8).map(|_| (0..10).filter(|_| rng.gen_bool(0.3)).collect()).collect();
            let weights: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..2.0)).collect();
            let inst = CoverageInstance::unit_cost(sets, weights, 3.0).unwrap();
            let y: Vec<f64> = (0..8).map(|_| rng.gen_range(0.05..0.95)).collect();
            let g = grad_f(&inst, &y);
            for j in 0..8 {
                let h = 1e-5;
                let (mut a, mut b) = (y.clone(), y.clone());
                a[j] += h;
                b[j] -= h;
                let fd = (eval_f(&inst, &a) - eval_f(&inst, &b)) / (2.0 * h);
                assert!((fd - g[j]).abs() <= 1e-6 * g[j].abs().max(1.0));
            }
        }
    }
}
