use super::budget::{check_inputs, weighted_corners, weighted_sum, BudgetRounding};
use super::{is_fractional, snap, Estimator, RoundingError, RoundingMethod, RoundingResult, INTEGRAL_TOL};

/// Gradient-guided pairing for a maximizing objective.
///
/// Every step recomputes `grad(y)`, picks among the fractional entries the one
/// with the largest and the one with the smallest partial derivative (divided
/// by the cost when `costs` is given, lowest index on ties) and moves mass from
/// the latter to the former until one of them is integral. Without costs the
/// plain sum is kept and must be integral; with costs the weighted sum is kept
/// and a final fractional entry is rounded up.
///
/// `oracle` only records the score after each step in the returned trace; for a
/// multilinear objective the score never decreases.
pub fn gradient_round<G, E>(
    y: &[f64],
    grad: G,
    costs: Option<&[f64]>,
    oracle: &E,
) -> Result<BudgetRounding, RoundingError>
where
    G: Fn(&[f64]) -> Vec<f64>,
    E: Estimator + ?Sized,
{
    let unit;
    let c = match costs {
        Some(c) => c,
        None => {
            unit = vec![1.0; y.len()];
            &unit
        }
    };
    check_inputs(y, c)?;
    if costs.is_none() {
        let sum: f64 = y.iter().sum();
        if (sum - sum.round()).abs() > INTEGRAL_TOL {
            return Err(RoundingError::InfeasibleCardinality { group: 0, sum });
        }
    }
    let mut y: Vec<f64> = y.iter().map(|&v| snap(v)).collect();
    let mut trace = vec![oracle.evaluate(&y)?];
    loop {
        let frac: Vec<usize> = (0..y.len()).filter(|&i| is_fractional(y[i])).collect();
        if frac.len() < 2 {
            if let Some(&i) = frac.first() {
                y[i] = if costs.is_some() { 1.0 } else { y[i].round() };
                trace.push(oracle.evaluate(&y)?);
            }
            break;
        }
        let g = grad(&y);
        if g.len() != y.len() {
            return Err(RoundingError::LengthMismatch(format!("gradient of length {} for {} values", g.len(), y.len())));
        }
        let scaled = |i: usize| g[i] / c[i];
        let mut hi = frac[0];
        let mut lo = frac[1];
        for &i in &frac {
            if scaled(i) > scaled(hi) {
                hi = i;
            }
        }
        for &i in &frac {
            if i != hi && (lo == hi || scaled(i) < scaled(lo)) {
                lo = i;
            }
        }
        if lo == hi {
            lo = frac[0];
        }
        // Raise `hi`, lower `lo`.
        let (up, _, _, _) = weighted_corners(y[hi], y[lo], c[hi], c[lo]);
        y[hi] = up[0];
        y[lo] = up[1];
        trace.push(oracle.evaluate(&y)?);
    }
    let result = RoundingResult::from_values(&y, RoundingMethod::Gradient);
    Ok(BudgetRounding {
        cost: weighted_sum(&result.as_f64(), c),
        result,
        trace,
    })
}
