use super::{RoundingError, RoundingMethod, RoundingProblem, RoundingResult, INTEGRAL_TOL};
use rand::Rng;

pub const DEFAULT_PRECISION_BITS: u32 = 20;

/// Values as integers on the grid `k / 2^p`.
pub(crate) struct FixedPoint {
    pub(crate) bits: u32,
    pub(crate) k: Vec<u64>,
}

impl FixedPoint {
    pub(crate) fn one(&self) -> u64 {
        1u64 << self.bits
    }

    pub(crate) fn value(&self, i: usize) -> f64 {
        self.k[i] as f64 / self.one() as f64
    }

    pub(crate) fn values(&self) -> Vec<f64> {
        (0..self.k.len()).map(|i| self.value(i)).collect()
    }

    /// Snaps every value to the grid, using `tail` to decide whether the
    /// remainder below the last digit rounds up, then repairs group sums.
    pub(crate) fn snap<F>(problem: &RoundingProblem, bits: u32, mut tail: F) -> Result<Self, RoundingError>
    where
        F: FnMut(f64) -> bool,
    {
        if !(1..=52).contains(&bits) {
            return Err(RoundingError::LengthMismatch(format!("precision of {bits} bits is outside 1..=52")));
        }
        let one = 1u64 << bits;
        let k = problem
            .values()
            .iter()
            .map(|&v| {
                let s = v * one as f64;
                let f = s.floor();
                let up = s > f && tail(s - f);
                (f as u64 + u64::from(up)).min(one)
            })
            .collect();
        let mut fp = FixedPoint { bits, k };
        for (g, members) in problem.groups().iter().enumerate() {
            fp.compensate(g, members, problem.group_sum(g))?;
        }
        Ok(fp)
    }

    /// Moves the grid sum of a group back onto `round(sum) * 2^p`, starting with
    /// the largest fractional member.
    fn compensate(&mut self, group: usize, members: &[usize], sum: f64) -> Result<(), RoundingError> {
        let one = self.one();
        let target = sum.round() as i128 * one as i128;
        let current: i128 = members.iter().map(|&i| self.k[i] as i128).sum();
        let mut diff = target - current;
        if diff == 0 {
            return Ok(());
        }
        let mut order: Vec<usize> = members.iter().copied().filter(|&i| !self.k[i].is_multiple_of(one)).collect();
        order.sort_by(|&a, &b| self.k[b].cmp(&self.k[a]).then(a.cmp(&b)));
        for i in order {
            if diff > 0 {
                let room = (one - self.k[i]).min(diff as u64);
                self.k[i] += room;
                diff -= room as i128;
            } else if diff < 0 {
                let room = self.k[i].min((-diff) as u64);
                self.k[i] -= room;
                diff += room as i128;
            }
        }
        if diff != 0 {
            return Err(RoundingError::InfeasibleCardinality { group, sum });
        }
        Ok(())
    }

    /// Indices whose digit at `level` is set, ascending.
    pub(crate) fn carrying(&self, members: &[usize], level: u32) -> Vec<usize> {
        members.iter().copied().filter(|&i| self.k[i] >> level & 1 == 1).collect()
    }
}

/// Bit-wise randomized rounding.
///
/// Values are snapped to `precision_bits` binary digits by randomly rounding
/// the tail, then digits are cleared from the least significant upward. At
/// each level the group members carrying the digit are paired in index order
/// and a fair coin decides which of the two absorbs the other's share: one
/// gains `2^-(p-level)`, the other loses it. Free indices form one extra pool
/// per level whose leftover member flips its own coin.
pub fn round_bitwise<R: Rng + ?Sized>(
    problem: &RoundingProblem,
    rng: &mut R,
    precision_bits: u32,
) -> Result<RoundingResult, RoundingError> {
    problem.check_cardinality()?;
    let mut fp = FixedPoint::snap(problem, precision_bits, |t| rng.gen::<f64>() < t)?;
    let free = problem.free_indices();
    for level in 0..precision_bits {
        let step = 1u64 << level;
        for members in problem.groups().iter().map(Vec::as_slice).chain(std::iter::once(free.as_slice())) {
            let carry = fp.carrying(members, level);
            for pair in carry.chunks(2) {
                match *pair {
                    [a, b] => {
                        let (up, down) = if rng.gen::<bool>() { (a, b) } else { (b, a) };
                        fp.k[up] += step;
                        fp.k[down] -= step;
                    }
                    [a] => {
                        // Only reachable for free indices: group totals are
                        // multiples of 2^p, so carriers come in pairs.
                        if rng.gen::<bool>() {
                            fp.k[a] += step;
                        } else {
                            fp.k[a] -= step;
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    debug_assert!(fp.k.iter().all(|&k| k == 0 || k == fp.one()));
    let values = fp.values();
    debug_assert!(values.iter().all(|v| (v - v.round()).abs() < INTEGRAL_TOL));
    Ok(RoundingResult::from_values(&values, RoundingMethod::Bitwise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::rounding::preserves_groups;

    fn frequencies(p: &RoundingProblem, trials: usize, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0usize; p.len()];
        for _ in 0..trials {
            let r = round_bitwise(p, &mut rng, DEFAULT_PRECISION_BITS).unwrap();
            assert!(preserves_groups(p, &r.bits));
            for (c, b) in counts.iter_mut().zip(&r.bits) {
                *c += usize::from(*b);
            }
        }
        counts.iter().map(|&c| c as f64 / trials as f64).collect()
    }

    #[test]
    fn halves_split_evenly() {
        let p = RoundingProblem::new(vec![0.5, 0.5], vec![vec![0, 1]]).unwrap();
        let f = frequencies(&p, 100_000, 1);
        assert!((f[0] - 0.5).abs() < 0.01);
    }

    #[test]
    fn quarters_pick_exactly_one() {
        let p = RoundingProblem::new(vec![0.25; 4], vec![vec![0, 1, 2, 3]]).unwrap();
        let n = 100_000.0;
        for f in frequencies(&p, 100_000, 2) {
            assert!((f - 0.25).abs() < 4.0 * (0.25f64 * 0.75 / n).sqrt(), "{f}");
        }
    }

    #[test]
    fn three_quarters_and_one_quarter() {
        // Two coin levels: (1,0) with probability 1/2 + 1/4.
        let p = RoundingProblem::new(vec![0.75, 0.25], vec![vec![0, 1]]).unwrap();
        let n = 100_000.0;
        let f = frequencies(&p, 100_000, 3);
        assert!((f[0] - 0.75).abs() < 4.0 * (0.75f64 * 0.25 / n).sqrt());
    }

    #[test]
    fn free_indices_and_off_grid_values() {
        let target = [0.1, 0.2, 0.7, 1.0 / 3.0, 0.9];
        let p = RoundingProblem::new(target.to_vec(), vec![vec![0, 1, 2]]).unwrap();
        let n = 100_000.0;
        for (f, t) in frequencies(&p, 100_000, 4).iter().zip(target) {
            assert!((f - t).abs() < 4.0 * (t * (1.0 - t) / n).sqrt(), "{f} vs {t}");
        }
    }

    #[test]
    fn compensation_restores_group_sums() {
        // Thirds snap off the grid; the group must still sum to exactly 2.
        let p = RoundingProblem::new(vec![2.0 / 3.0; 3], vec![vec![0, 1, 2]]).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let fp = FixedPoint::snap(&p, 4, |t| rng.gen::<f64>() < t).unwrap();
            assert_eq!(fp.k.iter().sum::<u64>(), 2 * 16);
        }
    }

    #[test]
    fn rejects_bad_precision() {
        let p = RoundingProblem::new(vec![0.5, 0.5], vec![vec![0, 1]]).unwrap();
        assert!(round_bitwise(&p, &mut rng_from_seed(0), 0).is_err());
        assert!(round_bitwise(&p, &mut rng_from_seed(0), 60).is_err());
    }
}
