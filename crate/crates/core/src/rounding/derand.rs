use super::bitwise::{FixedPoint, DEFAULT_PRECISION_BITS};
use super::tree::tree_walk;
use super::{
    is_fractional, pair_corners, snap, Estimator, RoundingError, RoundingMethod, RoundingProblem, RoundingResult,
};

/// Pair structure walked by [`derandomize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// Balanced binary tree over each group, as in [`super::round_tree`].
    Tree,
    /// A running representative paired with the next fractional member.
    Sequential,
    /// The digit levels of [`super::round_bitwise`] with the default precision.
    Bitwise,
}

impl Pairing {
    fn method(self) -> RoundingMethod {
        match self {
            Pairing::Tree => RoundingMethod::DerandTree,
            Pairing::Sequential => RoundingMethod::DerandSequential,
            Pairing::Bitwise => RoundingMethod::DerandBitwise,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerandOutcome {
    pub result: RoundingResult,
    /// Score of the starting point followed by the score after every decision.
    pub trace: Vec<f64>,
    /// Number of oracle calls spent comparing alternatives.
    pub evaluations: usize,
}

impl DerandOutcome {
    pub fn initial_score(&self) -> f64 {
        self.trace[0]
    }

    pub fn final_score(&self) -> f64 {
        *self.trace.last().unwrap()
    }
}

struct Walker<'a, E: ?Sized> {
    oracle: &'a E,
    trace: Vec<f64>,
    evaluations: usize,
}

impl<E: Estimator + ?Sized> Walker<'_, E> {
    /// Scores both alternatives and applies the better one; ties go to `first`.
    fn choose(
        &mut self,
        values: &mut [f64],
        first: &[(usize, f64)],
        second: &[(usize, f64)],
    ) -> Result<(), RoundingError> {
        let a = self.oracle.evaluate_with(values, first)?;
        let b = self.oracle.evaluate_with(values, second)?;
        self.evaluations += 2;
        let (changes, score) = if self.oracle.better(b, a) { (second, b) } else { (first, a) };
        for &(i, v) in changes {
            values[i] = v;
        }
        self.trace.push(score);
        Ok(())
    }

    fn resolve_pair(&mut self, a: usize, b: usize, values: &mut [f64]) -> Result<(), RoundingError> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let c = pair_corners(values[lo], values[hi])?;
        self.choose(values, &[(lo, c.up.0), (hi, c.up.1)], &[(lo, c.down.0), (hi, c.down.1)])
    }

    fn resolve_single(&mut self, i: usize, values: &mut [f64]) -> Result<(), RoundingError> {
        self.choose(values, &[(i, 1.0)], &[(i, 0.0)])
    }
}

/// Derandomized dependent rounding by the method of conditional estimators.
///
/// The pair structure of the chosen [`Pairing`] is walked deterministically.
/// At each pair both extreme adjustments are scored by `oracle` and the better
/// one is kept; on a tie the corner raising the lower index wins. Free indices
/// are set to whichever of 0 and 1 scores better, preferring 1.
///
/// If a maximizing oracle is convex along every pair line, or a minimizing one
/// concave, the score never worsens and the final score is at least as good as
/// the initial one.
///
/// With [`Pairing::Bitwise`] the values are first moved to the nearest point of
/// the 20-digit grid, so the trace starts at the score of that point.
pub fn derandomize<E: Estimator + ?Sized>(
    problem: &RoundingProblem,
    oracle: &E,
    pairing: Pairing,
) -> Result<DerandOutcome, RoundingError> {
    problem.check_cardinality()?;
    let mut w = Walker {
        oracle,
        trace: Vec::new(),
        evaluations: 0,
    };
    let values = match pairing {
        Pairing::Tree | Pairing::Sequential => {
            let mut values = problem.values().to_vec();
            w.trace.push(oracle.evaluate(&values)?);
            for members in problem.groups() {
                if pairing == Pairing::Tree {
                    tree_walk(members, &mut values, |a, b, v| w.resolve_pair(a, b, v))?;
                } else {
                    sequential_walk(members, &mut values, |a, b, v| w.resolve_pair(a, b, v))?;
                }
            }
            for i in problem.free_indices() {
                if is_fractional(values[i]) {
                    w.resolve_single(i, &mut values)?;
                }
            }
            values
        }
        Pairing::Bitwise => derand_bitwise(problem, &mut w)?,
    };
    Ok(DerandOutcome {
        result: RoundingResult::from_values(&values, pairing.method()),
        trace: w.trace,
        evaluations: w.evaluations,
    })
}

/// Pairs a running fractional representative with each further fractional
/// member in index order.
pub(crate) fn sequential_walk<F>(members: &[usize], values: &mut [f64], mut resolve: F) -> Result<(), RoundingError>
where
    F: FnMut(usize, usize, &mut [f64]) -> Result<(), RoundingError>,
{
    let mut rep: Option<usize> = None;
    for &i in members {
        if !is_fractional(values[i]) {
            continue;
        }
        match rep {
            None => rep = Some(i),
            Some(r) => {
                resolve(r, i, values)?;
                values[r] = snap(values[r]);
                values[i] = snap(values[i]);
                rep = if is_fractional(values[r]) {
                    Some(r)
                } else if is_fractional(values[i]) {
                    Some(i)
                } else {
                    None
                };
            }
        }
    }
    if let Some(r) = rep {
        values[r] = values[r].round();
    }
    Ok(())
}

fn derand_bitwise<E: Estimator + ?Sized>(
    problem: &RoundingProblem,
    w: &mut Walker<'_, E>,
) -> Result<Vec<f64>, RoundingError> {
    let bits = DEFAULT_PRECISION_BITS;
    let mut fp = FixedPoint::snap(problem, bits, |t| t >= 0.5)?;
    let mut values = fp.values();
    w.trace.push(w.oracle.evaluate(&values)?);
    let free = problem.free_indices();
    let one = fp.one() as f64;
    for level in 0..bits {
        let step = 1u64 << level;
        let delta = step as f64 / one;
        for members in problem.groups().iter().map(Vec::as_slice).chain(std::iter::once(free.as_slice())) {
            let carry = fp.carrying(members, level);
            for pair in carry.chunks(2) {
                match *pair {
                    [a, b] => {
                        let first = [(a, values[a] + delta), (b, values[b] - delta)];
                        let second = [(a, values[a] - delta), (b, values[b] + delta)];
                        w.choose(&mut values, &first, &second)?;
                        if values[a] > fp.value(a) {
                            fp.k[a] += step;
                            fp.k[b] -= step;
                        } else {
                            fp.k[a] -= step;
                            fp.k[b] += step;
                        }
                    }
                    [a] => {
                        let first = [(a, values[a] + delta)];
                        let second = [(a, values[a] - delta)];
                        w.choose(&mut values, &first, &second)?;
                        if values[a] > fp.value(a) {
                            fp.k[a] += step;
                        } else {
                            fp.k[a] -= step;
                        }
                    }
                    _ => unreachable!(),
                }
                for &i in pair {
                    values[i] = fp.value(i);
                }
            }
        }
    }
    Ok(values)
}
