use super::round::round_cover;
use super::{greedy_cover_ordered, solve_cover_lp, CoverError, CoverMode, CoverSolution, CoverageInstance};
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct HybridResult {
    /// Union of the greedy and rounded selections.
    pub solution: CoverSolution,
    /// The greedy pre-selection.
    pub greedy: CoverSolution,
    /// Value of the pre-selection plus the sets the reduced LP already set to 1.
    pub integral_part_value: f64,
    /// `W*` of the reduced LP (0 when nothing was left to solve).
    pub lp_value: f64,
}

/// Greedy pre-selection with budget `ρ L`, then LP and rounding on the rest.
///
/// Greedy runs in set index order. The reduced instance keeps the sets greedy
/// did not take, drops the elements it covered and gets the budget `L` minus
/// what greedy actually spent.
pub fn hybrid_cover<R: Rng + ?Sized>(
    inst: &CoverageInstance,
    rho: f64,
    mode: CoverMode,
    rng: &mut R,
) -> Result<HybridResult, CoverError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(CoverError::Invalid(format!("greedy fraction {rho} is outside [0, 1)")));
    }
    let order: Vec<usize> = (0..inst.num_sets()).collect();
    let greedy = greedy_cover_ordered(inst, rho * inst.budget(), &order);
    let rest_budget = inst.budget() - greedy.cost;

    let mut covered = vec![false; inst.num_elements()];
    for &j in &greedy.chosen {
        for &e in inst.set(j) {
            covered[e] = true;
        }
    }
    let keep: Vec<usize> = (0..inst.num_sets()).filter(|j| greedy.chosen.binary_search(j).is_err()).collect();
    let weights: Vec<f64> = inst.weights().iter().zip(&covered).map(|(&w, &c)| if c { 0.0 } else { w }).collect();

    let mut chosen = greedy.chosen.clone();
    let mut integral = chosen.clone();
    let mut lp_value = 0.0;
    if rest_budget > 1e-9 && !keep.is_empty() && weights.iter().any(|&w| w > 0.0) {
        let reduced = CoverageInstance::new(
            keep.iter().map(|&j| inst.set(j).to_vec()).collect(),
            keep.iter().map(|&j| inst.costs()[j]).collect(),
            weights,
            rest_budget,
        )?
        .without_zero_weights();
        let frac = solve_cover_lp(&reduced)?;
        lp_value = frac.w_star;
        integral.extend(frac.y.iter().enumerate().filter(|(_, &v)| v >= 1.0 - 1e-9).map(|(j, _)| keep[j]));
        let rounded = round_cover(&reduced, &frac, mode, rng)?;
        chosen.extend(rounded.solution.chosen.iter().map(|&j| keep[j]));
    }
    Ok(HybridResult {
        solution: inst.solution(chosen),
        integral_part_value: inst.value(&integral),
        greedy,
        lp_value,
    })
}
