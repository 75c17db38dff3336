use super::{is_fractional, snap, Estimator, RoundingError, RoundingMethod, RoundingResult};
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetRounding {
    pub result: RoundingResult,
    /// Oracle score at the start and after every step, the final round-up included.
    pub trace: Vec<f64>,
    /// `Σ c_i ỹ_i` of the result.
    pub cost: f64,
}

pub(crate) fn check_inputs(y: &[f64], costs: &[f64]) -> Result<(), RoundingError> {
    if y.len() != costs.len() {
        return Err(RoundingError::LengthMismatch(format!("{} values for {} costs", y.len(), costs.len())));
    }
    for (index, (&value, &cost)) in y.iter().zip(costs).enumerate() {
        if !(-1e-9..=1.0 + 1e-9).contains(&value) {
            return Err(RoundingError::ValueOutOfRange { index, value });
        }
        if !(cost > 0.0 && cost.is_finite()) {
            return Err(RoundingError::BadCost { index, cost });
        }
    }
    Ok(())
}

pub(crate) fn weighted_sum(y: &[f64], costs: &[f64]) -> f64 {
    y.iter().zip(costs).map(|(a, b)| a * b).sum()
}

/// The two ends of the segment through `(y_i, y_j)` on which `c_i y_i + c_j y_j`
/// is constant. `up` raises `y_i`; each end makes at least one coordinate
/// integral. Also returns the budget shifts `(t_up, t_down)`.
pub(crate) fn weighted_corners(yi: f64, yj: f64, ci: f64, cj: f64) -> ([f64; 2], [f64; 2], f64, f64) {
    let t_up = ((1.0 - yi) * ci).min(yj * cj);
    let t_down = (yi * ci).min((1.0 - yj) * cj);
    let up = if (1.0 - yi) * ci <= yj * cj {
        [1.0, snap(yj - t_up / cj)]
    } else {
        [snap(yi + t_up / ci), 0.0]
    };
    let down = if yi * ci <= (1.0 - yj) * cj {
        [0.0, snap(yj + t_down / cj)]
    } else {
        [snap(yi - t_down / ci), 1.0]
    };
    (up, down, t_up, t_down)
}

/// Walks fractional entries in index order, pairing a running representative
/// with the next fractional entry. Returns the leftover fractional index.
fn weighted_walk<F>(y: &mut [f64], mut step: F) -> Result<Option<usize>, RoundingError>
where
    F: FnMut(usize, usize, &mut [f64]) -> Result<(), RoundingError>,
{
    let mut rep: Option<usize> = None;
    for j in 0..y.len() {
        if !is_fractional(y[j]) {
            y[j] = snap(y[j]);
            continue;
        }
        let Some(i) = rep else {
            rep = Some(j);
            continue;
        };
        step(i, j, y)?;
        rep = if is_fractional(y[i]) {
            Some(i)
        } else if is_fractional(y[j]) {
            Some(j)
        } else {
            None
        };
    }
    Ok(rep)
}

/// Deterministic budget-preserving rounding for a maximizing oracle.
///
/// Fractional entries are paired in index order and each pair moves along the
/// line on which `c_i y_i + c_j y_j` is constant, to whichever end scores better
/// (the lower index going up on ties). The last fractional entry, if any, is
/// rounded up, so the weighted sum exceeds `budget` by less than `max_i c_i`.
/// An oracle convex along these lines never loses value.
pub fn round_budget_preserving<E: Estimator + ?Sized>(
    y: &[f64],
    costs: &[f64],
    budget: f64,
    oracle: &E,
) -> Result<BudgetRounding, RoundingError> {
    check_inputs(y, costs)?;
    let total = weighted_sum(y, costs);
    if total > budget + 1e-9 * budget.abs().max(1.0) {
        return Err(RoundingError::BudgetExceeded { total, budget });
    }
    let mut y = y.to_vec();
    let mut trace = vec![oracle.evaluate(&y)?];
    let rest = weighted_walk(&mut y, |i, j, y| {
        let (up, down, _, _) = weighted_corners(y[i], y[j], costs[i], costs[j]);
        let a = oracle.evaluate_with(y, &[(i, up[0]), (j, up[1])])?;
        let b = oracle.evaluate_with(y, &[(i, down[0]), (j, down[1])])?;
        let (corner, score) = if oracle.better(b, a) { (down, b) } else { (up, a) };
        y[i] = corner[0];
        y[j] = corner[1];
        trace.push(score);
        Ok(())
    })?;
    if let Some(i) = rest {
        y[i] = 1.0;
        trace.push(oracle.evaluate(&y)?);
    }
    let result = RoundingResult::from_values(&y, RoundingMethod::BudgetPreserving);
    Ok(BudgetRounding {
        cost: weighted_sum(&result.as_f64(), costs),
        result,
        trace,
    })
}

/// Randomized counterpart of [`round_budget_preserving`].
///
/// Each pair moves to the end raising `y_i` with probability
/// `t_down / (t_up + t_down)`, which keeps every marginal and the weighted sum.
/// The last fractional entry is rounded independently.
pub fn round_weighted<R: Rng + ?Sized>(y: &[f64], costs: &[f64], rng: &mut R) -> Result<RoundingResult, RoundingError> {
    check_inputs(y, costs)?;
    let mut y = y.to_vec();
    let rest = weighted_walk(&mut y, |i, j, y| {
        let (up, down, t_up, t_down) = weighted_corners(y[i], y[j], costs[i], costs[j]);
        let corner = if rng.gen::<f64>() * (t_up + t_down) < t_down { up } else { down };
        y[i] = corner[0];
        y[j] = corner[1];
        Ok(())
    })?;
    if let Some(i) = rest {
        y[i] = if rng.gen::<f64>() < y[i] { 1.0 } else { 0.0 };
    }
    Ok(RoundingResult::from_values(&y, RoundingMethod::Weighted))
}
