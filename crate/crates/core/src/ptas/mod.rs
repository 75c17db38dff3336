//! Shifted-grid approximation for max-domination in unit-disk graphs.
//!
//! Points closer than `d` are adjacent and every point dominates its closed
//! neighborhood. The plane is cut into square cells of side `d`. For a shift
//! `(h, v)` every `ℓ`-th column and row of cells is marked, points in marked
//! cells lose their profit, and the board falls apart into framed subgrids
//! whose unmarked points can only be dominated from inside the frame. Each
//! subgrid gets a [`SubgridProfile`] (best payoff for every number of chosen
//! points) and [`knapsack_combine`] spreads the budget over the subgrids. The
//! best of the `ℓ²` shifts is returned; it loses at most a `2/ℓ` fraction of
//! the optimum.

use crate::lp::{solve_ilp, IlpOptions, LinearProgram, LpError, LpStatus, Relation, Sense};
use crate::maxcov::{CoverError, CoverSolution, CoverageInstance};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum PtasError {
    #[error("invalid point set: {0}")]
    Invalid(String),
    #[error("PTAS requires unit costs")]
    NonUnitCosts,
    #[error("the shifting parameter must be at least 3, got {0}")]
    BadShift(usize),
    #[error("subgrid solve ended with status {0:?}")]
    Solve(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Weighted points with an adjacency radius.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    coords: Vec<[f64; 2]>,
    profits: Vec<f64>,
    d: f64,
}

impl PointSet {
    pub fn new(coords: Vec<[f64; 2]>, profits: Vec<f64>, d: f64) -> Result<Self, PtasError> {
        if coords.len() != profits.len() {
            return Err(PtasError::Invalid(format!("{} points but {} profits", coords.len(), profits.len())));
        }
        if coords.iter().flatten().any(|c| !c.is_finite()) {
            return Err(PtasError::Invalid("coordinates must be finite".into()));
        }
        if profits.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(PtasError::Invalid("profits must be finite and non-negative".into()));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(PtasError::Invalid(format!("diameter {d} is not positive")));
        }
        Ok(Self { coords, profits, d })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn diameter(&self) -> f64 {
        self.d
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let (p, q) = (self.coords[a], self.coords[b]);
        (p[0] - q[0]).hypot(p[1] - q[1]) <= self.d
    }

    /// Cell `(column, row)` of a point; cells are half-open `[k d, (k + 1) d)`.
    pub fn cell(&self, i: usize) -> (i64, i64) {
        let [x, y] = self.coords[i];
        ((x / self.d).floor() as i64, (y / self.d).floor() as i64)
    }
}

/// The unit-disk graph as max-coverage: set `j` is the closed neighborhood of
/// point `j`, element `i` weighs the profit of point `i`, all costs are 1.
pub fn build_udg(points: &PointSet, budget: f64) -> Result<CoverageInstance, PtasError> {
    let n = points.len();
    let sets = (0..n).map(|j| (0..n).filter(|&i| points.adjacent(i, j)).collect()).collect();
    Ok(CoverageInstance::unit_cost(sets, points.profits.clone(), budget)?)
}

/// Best payoffs of one framed subgrid for `t = 0, 1, …` chosen points.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgridProfile {
    pub payoffs: Vec<f64>,
    /// A selection achieving each payoff.
    pub choices: Vec<Vec<usize>>,
}

impl SubgridProfile {
    pub fn t_max(&self) -> usize {
        self.payoffs.len() - 1
    }
}

/// Exact profile of the targets (unmarked points of positive profit inside the
/// subgrid) over the given candidate dominators, for `t = 0..=t_cap`. The
/// profile stops early once every target is dominated.
fn subgrid_profile(
    points: &PointSet,
    targets: &[usize],
    candidates: &[usize],
    t_cap: usize,
) -> Result<SubgridProfile, PtasError> {
    let total: f64 = targets.iter().map(|&i| points.profits[i]).sum();
    let useful: Vec<usize> =
        candidates.iter().copied().filter(|&j| targets.iter().any(|&i| points.adjacent(i, j))).collect();
    let mut profile = SubgridProfile {
        payoffs: vec![0.0],
        choices: vec![Vec::new()],
    };
    if useful.is_empty() || total <= 0.0 {
        return Ok(profile);
    }
    let mut lp = LinearProgram::new(Sense::Maximize);
    for &j in &useful {
        lp.add_int_var(format!("y_{j}"), 0.0, 0.0, 1.0);
    }
    let first_x = useful.len();
    for &i in targets {
        lp.add_var(format!("x_{i}"), points.profits[i], 0.0, 1.0);
    }
    for (k, &i) in targets.iter().enumerate() {
        let mut terms = vec![(first_x + k, 1.0)];
        terms.extend(useful.iter().enumerate().filter(|&(_, &j)| points.adjacent(i, j)).map(|(c, _)| (c, -1.0)));
        lp.add_row(format!("dom_{i}"), terms, Relation::Le, 0.0);
    }
    let card = lp.add_row("card", (0..useful.len()).map(|c| (c, 1.0)).collect(), Relation::Le, 0.0);
    for t in 1..=t_cap.min(useful.len()) {
        lp.rows[card].rhs = t as f64;
        let sol = solve_ilp(&lp, &IlpOptions::default())?;
        if sol.solution.status != LpStatus::Optimal {
            return Err(PtasError::Solve(sol.solution.status));
        }
        let chosen: Vec<usize> =
            useful.iter().enumerate().filter(|&(c, _)| sol.solution.values[c] >= 0.5).map(|(_, &j)| j).collect();
        let payoff = targets
            .iter()
            .filter(|&&i| chosen.iter().any(|&j| points.adjacent(i, j)))
            .map(|&i| points.profits[i])
            .sum::<f64>()
            .max(*profile.payoffs.last().unwrap());
        profile.payoffs.push(payoff);
        profile.choices.push(chosen);
        if payoff >= total - 1e-9 {
            break;
        }
    }
    Ok(profile)
}

/// Splits `budget` over the profiles to maximize the summed payoff by dynamic
/// programming over `(profile, budget used)`. Returns the total and the budget
/// given to each profile; among equal totals smaller allocations to earlier
/// profiles win.
pub fn knapsack_combine(profiles: &[SubgridProfile], budget: usize) -> (f64, Vec<usize>) {
    let k = profiles.len();
    // best[i][t]: best payoff of the first i profiles with at most t budget.
    let mut best = vec![vec![0.0f64; budget + 1]; k + 1];
    let mut take = vec![vec![0usize; budget + 1]; k + 1];
    for (i, p) in profiles.iter().enumerate() {
        for t in 0..=budget {
            let mut b = f64::NEG_INFINITY;
            let mut s_best = 0;
            for s in 0..=t.min(p.t_max()) {
                let v = best[i][t - s] + p.payoffs[s];
                if v > b + 1e-12 {
                    b = v;
                    s_best = s;
                }
            }
            best[i + 1][t] = b;
            take[i + 1][t] = s_best;
        }
    }
    let mut alloc = vec![0; k];
    let mut t = budget;
    for i in (0..k).rev() {
        alloc[i] = take[i + 1][t];
        t -= alloc[i];
    }
    (best[k][budget], alloc)
}

/// Outcome of one shift.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOutcome {
    pub shift: (usize, usize),
    /// Sum of the subgrid payoffs picked by the dynamic program.
    pub combined: f64,
    /// Weight of unmarked points dominated by the selection.
    pub unmarked_value: f64,
    pub solution: CoverSolution,
    pub subgrids: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtasResult {
    /// Best selection over all shifts, valued with the full profits.
    pub solution: CoverSolution,
    pub shifts: Vec<ShiftOutcome>,
}

/// Column `c` is marked for the horizontal shift `h` when `c ≡ h (mod ℓ)`.
pub fn is_marked(cell: i64, shift: usize, ell: usize) -> bool {
    (cell - shift as i64).rem_euclid(ell as i64) == 0
}

fn run_shift(
    points: &PointSet,
    inst: &CoverageInstance,
    budget: usize,
    ell: usize,
    shift: (usize, usize),
) -> Result<ShiftOutcome, PtasError> {
    let l = ell as i64;
    let block = |c: i64, s: usize| (c - s as i64).div_euclid(l);
    let cells: Vec<(i64, i64)> = (0..points.len()).map(|i| points.cell(i)).collect();
    let marked = |i: usize| is_marked(cells[i].0, shift.0, ell) || is_marked(cells[i].1, shift.1, ell);

    // Targets by subgrid, keyed by block coordinates.
    let mut targets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, &(cx, cy)) in cells.iter().enumerate() {
        if !marked(i) && points.profits[i] > 0.0 {
            targets.entry((block(cx, shift.0), block(cy, shift.1))).or_default().push(i);
        }
    }
    let mut profiles = Vec::with_capacity(targets.len());
    for (&(bx, by), ts) in &targets {
        // The closed frame: the block's own lines plus the marked line after it.
        let in_frame = |c: i64, s: usize, b: i64| {
            let lo = b * l + s as i64;
            (lo..=lo + l).contains(&c)
        };
        let candidates: Vec<usize> =
            (0..points.len()).filter(|&j| in_frame(cells[j].0, shift.0, bx) && in_frame(cells[j].1, shift.1, by)).collect();
        profiles.push(subgrid_profile(points, ts, &candidates, budget)?);
    }
    let (combined, alloc) = knapsack_combine(&profiles, budget);
    let chosen: Vec<usize> = profiles.iter().zip(&alloc).flat_map(|(p, &t)| p.choices[t].iter().copied()).collect();
    let solution = inst.solution(chosen);
    let unmarked: Vec<bool> = (0..points.len()).map(|i| !marked(i)).collect();
    let mut dominated = vec![false; points.len()];
    for &j in &solution.chosen {
        for &i in inst.set(j) {
            dominated[i] = true;
        }
    }
    let unmarked_value = (0..points.len()).filter(|&i| dominated[i] && unmarked[i]).map(|i| points.profits[i]).sum();
    Ok(ShiftOutcome {
        shift,
        combined,
        unmarked_value,
        solution,
        subgrids: profiles.len(),
    })
}

/// Runs every shift `(h, v) ∈ {0..ℓ−1}²` and returns the best selection of at
/// most `budget` points.
pub fn ptas_solve(points: &PointSet, budget: usize, ell: usize) -> Result<PtasResult, PtasError> {
    if ell < 3 {
        return Err(PtasError::BadShift(ell));
    }
    let inst = build_udg(points, budget.max(1) as f64)?;
    ptas_on_instance(points, &inst, budget, ell)
}

/// As [`ptas_solve`] but checks that `inst` is the unit-cost graph of `points`.
pub fn ptas_on_instance(
    points: &PointSet,
    inst: &CoverageInstance,
    budget: usize,
    ell: usize,
) -> Result<PtasResult, PtasError> {
    if ell < 3 {
        return Err(PtasError::BadShift(ell));
    }
    if !inst.is_unit_cost() {
        return Err(PtasError::NonUnitCosts);
    }
    if inst.num_sets() != points.len() {
        return Err(PtasError::Invalid(format!("{} sets for {} points", inst.num_sets(), points.len())));
    }
    let mut shifts = Vec::with_capacity(ell * ell);
    for h in 0..ell {
        for v in 0..ell {
            shifts.push(run_shift(points, inst, budget, ell, (h, v))?);
        }
    }
    let best = shifts
        .iter()
        .fold(None::<&ShiftOutcome>, |b, s| match b {
            Some(b) if b.solution.value >= s.solution.value => Some(b),
            _ => Some(s),
        })
        .expect("at least one shift");
    Ok(PtasResult {
        solution: best.solution.clone(),
        shifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(p: &[f64]) -> SubgridProfile {
        SubgridProfile {
            payoffs: p.to_vec(),
            choices: vec![Vec::new(); p.len()],
        }
    }

    #[test]
    fn udg_neighborhoods() {
        let far = PointSet::new(vec![[0.0, 0.0], [2.0, 0.0]], vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(build_udg(&far, 1.0).unwrap().sets(), &[vec![0], vec![1]]);
        let near = PointSet::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(build_udg(&near, 1.0).unwrap().sets(), &[vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn knapsack_small_cases() {
        assert_eq!(knapsack_combine(&[profile(&[0.0, 2.0, 3.0, 3.5])], 2), (3.0, vec![2]));
        assert_eq!(knapsack_combine(&[profile(&[0.0, 5.0]), profile(&[0.0, 4.0])], 1), (5.0, vec![1, 0]));
    }

    #[test]
    fn each_line_marked_for_one_shift() {
        for c in -7..7 {
            assert_eq!((0..5).filter(|&h| is_marked(c, h, 5)).count(), 1);
        }
    }

    #[test]
    fn one_cell_instance_is_solved_exactly() {
        let pts = PointSet::new(vec![[1.1, 1.1], [1.5, 1.2], [1.9, 1.9], [1.2, 1.8]], vec![1.0, 2.0, 3.0, 4.0], 0.5)
            .unwrap();
        let r = ptas_solve(&pts, 2, 3).unwrap();
        let inst = build_udg(&pts, 2.0).unwrap();
        let best = (0u32..16)
            .filter(|m| m.count_ones() <= 2)
            .map(|m| inst.value(&(0..4).filter(|j| m >> j & 1 == 1).collect::<Vec<_>>()))
            .fold(0.0, f64::max);
        assert_eq!(r.solution.value, best);
        assert!(r.solution.chosen.len() <= 2);
    }

    #[test]
    fn rejects_bad_input() {
        let pts = PointSet::new(vec![[0.0, 0.0]], vec![1.0], 1.0).unwrap();
        assert!(matches!(ptas_solve(&pts, 1, 2), Err(PtasError::BadShift(2))));
        let costly = CoverageInstance::new(vec![vec![0]], vec![2.0], vec![1.0], 2.0).unwrap();
        assert!(matches!(ptas_on_instance(&pts, &costly, 1, 3), Err(PtasError::NonUnitCosts)));
        assert!(PointSet::new(vec![[0.0, f64::NAN]], vec![1.0], 1.0).is_err());
        assert!(PointSet::new(vec![[0.0, 0.0]], vec![-1.0], 1.0).is_err());
    }
}
