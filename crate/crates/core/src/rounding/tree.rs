use super::{is_fractional, pair_round, snap, RoundingError, RoundingMethod, RoundingProblem, RoundingResult};
use rand::Rng;

/// Walks a balanced binary tree whose leaves are `members` in order. Each
/// subtree hands up at most one fractional representative; two representatives
/// meeting at an inner node are passed to `resolve`, which must make at least
/// one of them integral.
pub(crate) fn tree_walk<F>(members: &[usize], values: &mut [f64], mut resolve: F) -> Result<(), RoundingError>
where
    F: FnMut(usize, usize, &mut [f64]) -> Result<(), RoundingError>,
{
    let mut reps: Vec<Option<usize>> = members.iter().map(|&i| is_fractional(values[i]).then_some(i)).collect();
    while reps.len() > 1 {
        let mut next = Vec::with_capacity(reps.len().div_ceil(2));
        for chunk in reps.chunks(2) {
            next.push(match *chunk {
                [Some(a), Some(b)] => {
                    resolve(a, b, values)?;
                    values[a] = snap(values[a]);
                    values[b] = snap(values[b]);
                    if is_fractional(values[a]) {
                        Some(a)
                    } else if is_fractional(values[b]) {
                        Some(b)
                    } else {
                        None
                    }
                }
                [a, b] => a.or(b),
                [a] => a,
                _ => unreachable!(),
            });
        }
        reps = next;
    }
    // An integral group sum leaves nothing but rounding noise at the root.
    if let Some(Some(i)) = reps.first() {
        values[*i] = values[*i].round();
    }
    Ok(())
}

/// Tree-based dependent rounding.
///
/// Within every group the fractional entries are paired bottom-up along a
/// balanced binary tree over the members in index order, and each pair is
/// resolved with [`pair_round`]. Indices outside all groups are rounded
/// independently.
pub fn round_tree<R: Rng + ?Sized>(problem: &RoundingProblem, rng: &mut R) -> Result<RoundingResult, RoundingError> {
    problem.check_cardinality()?;
    let mut values = problem.values().to_vec();
    for members in problem.groups() {
        tree_walk(members, &mut values, |a, b, v| {
            let (x, y) = pair_round(v[a], v[b], rng)?;
            v[a] = x;
            v[b] = y;
            Ok(())
        })?;
    }
    for i in problem.free_indices() {
        if is_fractional(values[i]) {
            values[i] = if rng.gen::<f64>() < values[i] { 1.0 } else { 0.0 };
        }
    }
    Ok(RoundingResult::from_values(&values, RoundingMethod::Tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::rounding::preserves_groups;

    #[test]
    fn integral_input_is_unchanged() {
        let p = RoundingProblem::new(vec![1.0, 0.0], vec![vec![0, 1]]).unwrap();
        for seed in 0..20 {
            assert_eq!(round_tree(&p, &mut rng_from_seed(seed)).unwrap().bits, vec![1, 0]);
        }
    }

    #[test]
    fn rejects_non_integral_group() {
        let p = RoundingProblem::new(vec![0.5, 0.6], vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            round_tree(&p, &mut rng_from_seed(0)),
            Err(RoundingError::InfeasibleCardinality { group: 0, .. })
        ));
    }

    fn marginals(p: &RoundingProblem, trials: usize, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0usize; p.len()];
        for _ in 0..trials {
            let r = round_tree(p, &mut rng).unwrap();
            assert!(preserves_groups(p, &r.bits));
            for (c, b) in counts.iter_mut().zip(&r.bits) {
                *c += usize::from(*b);
            }
        }
        counts.iter().map(|&c| c as f64 / trials as f64).collect()
    }

    #[test]
    fn four_halves_keep_two_ones() {
        let p = RoundingProblem::new(vec![0.5; 4], vec![vec![0, 1, 2, 3]]).unwrap();
        for m in marginals(&p, 100_000, 9) {
            assert!((m - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn uneven_values_keep_marginals() {
        let target = [0.6, 0.6, 0.8];
        let p = RoundingProblem::new(target.to_vec(), vec![vec![0, 1, 2]]).unwrap();
        let n = 100_000.0;
        for (m, t) in marginals(&p, 100_000, 4).iter().zip(target) {
            assert!((m - t).abs() < 3.0 * (t * (1.0 - t) / n).sqrt(), "{m} vs {t}");
        }
    }

    #[test]
    fn same_seed_same_bits() {
        let p = RoundingProblem::new(vec![0.3, 0.7, 0.45, 0.55, 0.2], vec![vec![0, 1], vec![2, 3]]).unwrap();
        let a = round_tree(&p, &mut rng_from_seed(77)).unwrap();
        let b = round_tree(&p, &mut rng_from_seed(77)).unwrap();
        assert_eq!(a, b);
    }
}
