use super::{CoverSolution, CoverageInstance};
use rand::seq::SliceRandom;
use rand::Rng;

/// Ratio greedy in set index order.
pub fn greedy_cover(inst: &CoverageInstance) -> CoverSolution {
    let order: Vec<usize> = (0..inst.num_sets()).collect();
    greedy_cover_ordered(inst, inst.budget(), &order)
}

/// Ratio greedy with ties broken by a random permutation of the sets.
pub fn greedy_cover_permuted<R: Rng + ?Sized>(inst: &CoverageInstance, rng: &mut R) -> CoverSolution {
    let mut order: Vec<usize> = (0..inst.num_sets()).collect();
    order.shuffle(rng);
    greedy_cover_ordered(inst, inst.budget(), &order)
}

/// Repeatedly takes the set that fits into the remaining `budget` and has the
/// largest ratio of newly covered weight to cost, until no fitting set adds
/// weight. Among equal ratios the set appearing first in `order` wins.
pub fn greedy_cover_ordered(inst: &CoverageInstance, budget: f64, order: &[usize]) -> CoverSolution {
    let mut covered = vec![false; inst.num_elements()];
    let mut taken = vec![false; inst.num_sets()];
    let mut chosen = Vec::new();
    let mut remaining = budget;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for &j in order {
            let c = inst.costs()[j];
            if taken[j] || c > remaining + 1e-9 {
                continue;
            }
            let gain: f64 = inst.set(j).iter().filter(|&&e| !covered[e]).map(|&e| inst.weights()[e]).sum();
            if gain <= 0.0 {
                continue;
            }
            let ratio = gain / c;
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some((j, ratio));
            }
        }
        let Some((j, _)) = best else { break };
        taken[j] = true;
        remaining -= inst.costs()[j];
        for &e in inst.set(j) {
            covered[e] = true;
        }
        chosen.push(j);
    }
    inst.solution(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn big_budget_covers_everything_coverable() {
        let inst = CoverageInstance::unit_cost(vec![vec![0, 1], vec![1], vec![2], vec![]], vec![1.0, 1.0, 1.0, 5.0], 10.0).unwrap();
        let s = greedy_cover(&inst);
        assert_eq!(s.value, 3.0);
        assert_eq!(s.chosen, vec![0, 2]);
    }

    #[test]
    fn ratio_beats_raw_gain() {
        // Set 0 covers weight 4 at cost 4, set 1 weight 3 at cost 1.
        let inst = CoverageInstance::new(vec![vec![0], vec![1]], vec![4.0, 1.0], vec![4.0, 3.0], 4.0).unwrap();
        assert_eq!(greedy_cover(&inst).chosen, vec![1]);
    }

    #[test]
    fn order_breaks_ties() {
        let inst = CoverageInstance::unit_cost(vec![vec![0], vec![1]], vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(greedy_cover_ordered(&inst, 1.0, &[1, 0]).chosen, vec![1]);
        assert_eq!(greedy_cover(&inst).chosen, vec![0]);
        let a = greedy_cover_permuted(&inst, &mut rng_from_seed(4));
        let b = greedy_cover_permuted(&inst, &mut rng_from_seed(4));
        assert_eq!(a, b);
    }
}
