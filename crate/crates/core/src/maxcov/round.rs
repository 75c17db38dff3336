use super::{eval_f, grad_f, CoverError, CoverSolution, CoverageInstance, CoverageOracle, FractionalCover};
use crate::rounding::{
    derandomize, gradient_round, round_budget_preserving, round_tree, round_weighted, Pairing, RoundingProblem,
};
use rand::Rng;

/// How a fractional cover is turned into a selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    /// Best of this many randomized roundings.
    BestOfK(usize),
    /// Derandomized rounding guided by `F`.
    Derand,
    /// Gradient-guided rounding.
    Gradient,
}

impl CoverMode {
    pub fn name(self) -> String {
        match self {
            CoverMode::BestOfK(k) => format!("best-of-{k}"),
            CoverMode::Derand => "derand".to_owned(),
            CoverMode::Gradient => "gradient".to_owned(),
        }
    }
}

/// Outcome of one deterministic rounding of `y*`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedCover {
    /// Selection after [`enforce_budget`].
    pub solution: CoverSolution,
    /// Cost of the rounding before any set was discarded.
    pub raw_cost: f64,
    /// `F` at the start and after every step.
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestOfK {
    pub best: CoverSolution,
    /// `F(y*)`, the expected value of one independent rounding.
    pub expectation: f64,
    /// Mean value over the trials, after budget enforcement.
    pub mean: f64,
    /// Largest cost of any trial before enforcement.
    pub max_raw_cost: f64,
}

/// `y*` plus one slack coordinate that lifts the sum to an integer, for the
/// cardinality roundings used with unit costs. Rounding noise above an integer
/// is taken off the largest entry.
fn padded(y: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = y.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
    let s: f64 = v.iter().sum();
    let target = if (s - s.round()).abs() <= 1e-6 { s.round() } else { s.ceil() };
    if s > target {
        let big = (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
        v[big] -= s - target;
    }
    let rest: f64 = v.iter().sum();
    v.push((target - rest).clamp(0.0, 1.0));
    v
}

fn chosen_sets(bits: &[u8], n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..n).filter(move |&j| bits[j] == 1)
}

/// Discards chosen sets until the cost fits the budget. Each round drops the
/// set losing the least covered weight per unit of cost, lowest index on ties.
pub fn enforce_budget(solution: &CoverSolution, inst: &CoverageInstance) -> CoverSolution {
    let mut chosen = solution.chosen.clone();
    let mut count = vec![0usize; inst.num_elements()];
    for &j in &chosen {
        for &e in inst.set(j) {
            count[e] += 1;
        }
    }
    let mut cost = inst.cost(&chosen);
    while cost > inst.budget() + 1e-9 && !chosen.is_empty() {
        let loss = |j: usize| -> f64 {
            inst.set(j).iter().filter(|&&e| count[e] == 1).map(|&e| inst.weights()[e]).sum::<f64>() / inst.costs()[j]
        };
        let (pos, _) = chosen
            .iter()
            .enumerate()
            .map(|(p, &j)| (p, loss(j)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        let j = chosen.remove(pos);
        for &e in inst.set(j) {
            count[e] -= 1;
        }
        cost -= inst.costs()[j];
    }
    inst.solution(chosen)
}

/// Keeps the best of `k` randomized roundings of `y*`.
///
/// With unit costs each trial is a tree rounding that keeps `Σ y` (padded to an
/// integer); otherwise it is the weighted rounding that keeps `Σ c_j y_j` up to
/// one set. Over-budget trials go through [`enforce_budget`].
pub fn best_of_k<R: Rng + ?Sized>(
    inst: &CoverageInstance,
    frac: &FractionalCover,
    k: usize,
    rng: &mut R,
) -> Result<BestOfK, CoverError> {
    let n = inst.num_sets();
    let unit = inst.is_unit_cost();
    let problem = if unit {
        let v = padded(&frac.y);
        let all = (0..v.len()).collect();
        Some(RoundingProblem::new(v, vec![all])?)
    } else {
        None
    };
    let mut best: Option<CoverSolution> = None;
    let mut total = 0.0;
    let mut max_raw_cost: f64 = 0.0;
    for _ in 0..k.max(1) {
        let bits = match &problem {
            Some(p) => round_tree(p, rng)?.bits,
            None => round_weighted(&frac.y, inst.costs(), rng)?.bits,
        };
        let raw = inst.solution(chosen_sets(&bits, n));
        max_raw_cost = max_raw_cost.max(raw.cost);
        let s = enforce_budget(&raw, inst);
        total += s.value;
        if best.as_ref().is_none_or(|b| s.value > b.value) {
            best = Some(s);
        }
    }
    Ok(BestOfK {
        best: best.expect("at least one trial"),
        expectation: eval_f(inst, &frac.y),
        mean: total / k.max(1) as f64,
        max_raw_cost,
    })
}

/// Derandomized rounding of `y*` with `F` as the estimator, pairing in index
/// order. With unit costs this is the cardinality walk, so the result covers at
/// least `F(y*)`; otherwise the budget-preserving walk is used.
pub fn derand_cover(inst: &CoverageInstance, frac: &FractionalCover) -> Result<RoundedCover, CoverError> {
    let n = inst.num_sets();
    let oracle = CoverageOracle { instance: inst };
    let (bits, trace) = if inst.is_unit_cost() {
        let v = padded(&frac.y);
        let all = (0..v.len()).collect();
        let out = derandomize(&RoundingProblem::new(v, vec![all])?, &oracle, Pairing::Sequential)?;
        (out.result.bits, out.trace)
    } else {
        let out = round_budget_preserving(&frac.y, inst.costs(), inst.budget(), &oracle)?;
        (out.result.bits, out.trace)
    };
    Ok(finish(inst, &bits[..n], trace))
}

/// Gradient-guided rounding of `y*` using [`grad_f`], divided by the set costs
/// unless all costs are 1.
pub fn gradient_cover(inst: &CoverageInstance, frac: &FractionalCover) -> Result<RoundedCover, CoverError> {
    let n = inst.num_sets();
    let oracle = CoverageOracle { instance: inst };
    let out = if inst.is_unit_cost() {
        let grad = |y: &[f64]| {
            let mut g = grad_f(inst, y);
            g.push(0.0);
            g
        };
        gradient_round(&padded(&frac.y), grad, None, &oracle)?
    } else {
        gradient_round(&frac.y, |y: &[f64]| grad_f(inst, y), Some(inst.costs()), &oracle)?
    };
    Ok(finish(inst, &out.result.bits[..n], out.trace))
}

fn finish(inst: &CoverageInstance, bits: &[u8], trace: Vec<f64>) -> RoundedCover {
    let raw = inst.solution(chosen_sets(bits, bits.len()));
    RoundedCover {
        solution: enforce_budget(&raw, inst),
        raw_cost: raw.cost,
        trace,
    }
}

/// Rounds `y*` in the given mode; best-of-k is reported with its best trial and
/// an empty trace.
pub fn round_cover<R: Rng + ?Sized>(
    inst: &CoverageInstance,
    frac: &FractionalCover,
    mode: CoverMode,
    rng: &mut R,
) -> Result<RoundedCover, CoverError> {
    match mode {
        CoverMode::BestOfK(k) => {
            let b = best_of_k(inst, frac, k, rng)?;
            Ok(RoundedCover {
                solution: b.best,
                raw_cost: b.max_raw_cost,
                trace: Vec::new(),
            })
        }
        CoverMode::Derand => derand_cover(inst, frac),
        CoverMode::Gradient => gradient_cover(inst, frac),
    }
}
