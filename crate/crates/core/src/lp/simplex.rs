//! Bounded-variable simplex on a dense tableau.
//!
//! Every row `a·x rel b` gets a slack `s` with `a·x + s = b` and bounds
//! `[0, ∞)` for `≤`, `(-∞, 0]` for `≥` and `[0, 0]` for `=`. Rows whose slack
//! cannot absorb the initial residual receive an artificial variable that the
//! first phase drives to zero. The tableau stores `B⁻¹[A | I | Art]`, so the
//! slack block doubles as `B⁻¹` when basic values are recomputed.

use super::{LinearProgram, LpError, LpSolution, LpStatus, Relation, Sense, FEASIBILITY_TOL};

const PIVOT_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-14;
/// Consecutive degenerate pivots tolerated before the bounds of degenerate
/// basic variables are widened.
const STALL_LIMIT: usize = 64;
/// Widening rounds before falling back to Bland's rule.
const MAX_PERTURBATIONS: usize = 20;
/// Relative size of a bound widening.
const PERTURBATION: f64 = 1e-7;
const NONBASIC: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Cutoff,
}

#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    m: usize,
    nc: usize,
    n_struct: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
    row_of: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    cost: Vec<f64>,
    d: Vec<f64>,
    b: Vec<f64>,
    /// Internal costs of the structural columns (minimization form).
    obj: Vec<f64>,
    pub(crate) iterations: usize,
    scratch: Vec<(usize, f64)>,
    /// Original bounds of variables widened to escape a degenerate vertex.
    perturbed: Vec<(usize, f64, f64)>,
}

/// Solves the continuous relaxation of `lp` (integrality flags are ignored).
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let (tab, status) = Tableau::solve(lp);
    Ok(match status {
        Outcome::Optimal => tab.solution(lp),
        Outcome::Infeasible => LpSolution::without_point(LpStatus::Infeasible),
        Outcome::Unbounded => LpSolution::without_point(LpStatus::Unbounded),
        Outcome::IterationLimit | Outcome::Cutoff => LpSolution::without_point(LpStatus::IterationLimit),
    })
}

fn finite_or(v: f64, other: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        other
    }
}

impl Tableau {
    /// Builds the initial tableau, runs both phases and returns the final state.
    pub(crate) fn solve(lp: &LinearProgram) -> (Tableau, Outcome) {
        let mut tab = Tableau::build(lp);
        let limit = 20_000 + 50 * (tab.m + tab.nc);
        if tab.nc > tab.n_struct + tab.m {
            tab.cost = vec![0.0; tab.nc];
            for c in &mut tab.cost[tab.n_struct + tab.m..] {
                *c = 1.0;
            }
            tab.recompute_reduced_costs();
            match tab.primal(limit) {
                Outcome::Optimal => {}
                Outcome::Unbounded => unreachable!("phase one objective is bounded below by zero"),
                other => return (tab, other),
            }
            tab.refresh_basic_values();
            let infeasibility: f64 = (tab.n_struct + tab.m..tab.nc).map(|j| tab.x[j]).sum();
            if infeasibility > FEASIBILITY_TOL {
                return (tab, Outcome::Infeasible);
            }
            tab.retire_artificials();
        }
        tab.cost = vec![0.0; tab.nc];
        tab.cost[..tab.n_struct].copy_from_slice(&tab.obj);
        tab.recompute_reduced_costs();
        let out = tab.primal(limit);
        tab.refresh_basic_values();
        (tab, out)
    }

    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let obj: Vec<f64> = lp.vars.iter().map(|v| sign * v.objective).collect();
        let mut lo: Vec<f64> = lp.vars.iter().map(|v| v.lower).collect();
        let mut hi: Vec<f64> = lp.vars.iter().map(|v| v.upper).collect();
        let mut x: Vec<f64> = lp
            .vars
            .iter()
            .map(|v| finite_or(v.lower, finite_or(v.upper, 0.0)))
            .collect();

        // Slack bounds and the residual each slack must absorb.
        let mut art_sign = vec![0.0f64; m];
        let mut slack_val = vec![0.0f64; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let (slo, shi) = match row.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lo.push(slo);
            hi.push(shi);
            let r = row.rhs - row.activity(&x);
            let s = r.clamp(slo, shi);
            slack_val[i] = s;
            if r != s {
                art_sign[i] = (r - s).signum();
            }
        }
        let n_art = art_sign.iter().filter(|&&s| s != 0.0).count();
        let nc = n + m + n_art;
        x.extend_from_slice(&slack_val);
        let mut t = vec![0.0; m * nc];
        let mut basis = vec![0; m];
        let mut row_of = vec![NONBASIC; nc];
        let mut art = n + m;
        for (i, row) in lp.rows.iter().enumerate() {
            let s = if art_sign[i] != 0.0 { art_sign[i] } else { 1.0 };
            let base = i * nc;
            for &(j, a) in &row.terms {
                t[base + j] += s * a;
            }
            t[base + n + i] = s;
            if art_sign[i] != 0.0 {
                t[base + art] = 1.0;
                basis[i] = art;
                row_of[art] = i;
                lo.push(0.0);
                hi.push(f64::INFINITY);
                x.push((row.rhs - row.activity(&x[..n]) - slack_val[i]).abs());
                art += 1;
            } else {
                basis[i] = n + i;
                row_of[n + i] = i;
            }
        }
        Tableau {
            m,
            nc,
            n_struct: n,
            t,
            basis,
            row_of,
            lo,
            hi,
            x,
            cost: vec![0.0; nc],
            d: vec![0.0; nc],
            b: lp.rows.iter().map(|r| r.rhs).collect(),
            obj,
            iterations: 0,
            scratch: Vec::new(),
            perturbed: Vec::new(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.nc + j]
    }

    fn is_basic(&self, j: usize) -> bool {
        self.row_of[j] != NONBASIC
    }

    fn recompute_reduced_costs(&mut self) {
        self.d.copy_from_slice(&self.cost);
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * self.nc..(i + 1) * self.nc];
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for &j in &self.basis {
            self.d[j] = 0.0;
        }
    }

    /// Recomputes basic values as `B⁻¹b − Σ_N T_j x_j`, removing drift.
    fn refresh_basic_values(&mut self) {
        let n = self.n_struct;
        for i in 0..self.m {
            let row = &self.t[i * self.nc..(i + 1) * self.nc];
            let mut v = 0.0;
            for k in 0..self.m {
                v += row[n + k] * self.b[k];
            }
            for (j, &a) in row.iter().enumerate() {
                if self.row_of[j] == NONBASIC && a != 0.0 {
                    v -= a * self.x[j];
                }
            }
            self.x[self.basis[i]] = v;
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let nc = self.nc;
        let inv = 1.0 / self.t[r * nc + q];
        self.scratch.clear();
        {
            let row = &mut self.t[r * nc..(r + 1) * nc];
            for (j, v) in row.iter_mut().enumerate() {
                if *v != 0.0 {
                    *v *= inv;
                    if v.abs() < DROP_TOL {
                        *v = 0.0;
                    } else {
                        self.scratch.push((j, *v));
                    }
                }
            }
            row[q] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * nc);
        let (_, after) = rest.split_at_mut(nc);
        for chunk in before.chunks_exact_mut(nc).chain(after.chunks_exact_mut(nc)) {
            let f = chunk[q];
            if f != 0.0 {
                for &(j, v) in &self.scratch {
                    chunk[j] -= f * v;
                }
                chunk[q] = 0.0;
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for &(j, v) in &self.scratch {
                self.d[j] -= f * v;
            }
        }
        self.d[q] = 0.0;
        let leaving = self.basis[r];
        self.row_of[leaving] = NONBASIC;
        self.basis[r] = q;
        self.row_of[q] = r;
        self.iterations += 1;
    }

    fn objective_internal(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.nc {
            if self.is_basic(j) || self.lo[j] == self.hi[j] {
                continue;
            }
            let dj = self.d[j];
            let dir = if dj < -DUAL_TOL && self.x[j] < self.hi[j] {
                1.0
            } else if dj > DUAL_TOL && self.x[j] > self.lo[j] {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if dj.abs() > best_score {
                best_score = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    /// Primal simplex from a primal feasible basis. Bounds widened on the way
    /// are restored at the end and the small infeasibility this leaves is
    /// repaired with the dual simplex.
    fn primal(&mut self, limit: usize) -> Outcome {
        let out = self.primal_pass(limit, true);
        if self.perturbed.is_empty() {
            return out;
        }
        self.restore_bounds();
        if out != Outcome::Optimal {
            return out;
        }
        match self.dual(f64::INFINITY, limit) {
            Outcome::Optimal => self.primal_pass(limit, false),
            other => other,
        }
    }

    /// Widens the bounds of basic variables sitting at a bound by a small
    /// amount that differs per variable.
    fn perturb_degenerate(&mut self) {
        for i in 0..self.m {
            let bi = self.basis[i];
            let u = (crate::rng::mix64(bi as u64 ^ (self.iterations as u64) << 20) >> 11) as f64 / (1u64 << 53) as f64;
            let (lo, hi) = (self.lo[bi], self.hi[bi]);
            let at_lo = lo.is_finite() && self.x[bi] - lo <= PRIMAL_TOL;
            let at_hi = hi.is_finite() && hi - self.x[bi] <= PRIMAL_TOL;
            if !(at_lo || at_hi) {
                continue;
            }
            if !self.perturbed.iter().any(|&(j, _, _)| j == bi) {
                self.perturbed.push((bi, lo, hi));
            }
            if at_lo {
                self.lo[bi] -= PERTURBATION * (1.0 + u) * (1.0 + lo.abs());
            }
            if at_hi {
                self.hi[bi] += PERTURBATION * (1.0 + u) * (1.0 + hi.abs());
            }
        }
    }

    fn restore_bounds(&mut self) {
        for (j, lo, hi) in std::mem::take(&mut self.perturbed) {
            self.lo[j] = lo;
            self.hi[j] = hi;
            if !self.is_basic(j) {
                self.x[j] = self.x[j].clamp(lo, hi);
            }
        }
        self.refresh_basic_values();
    }

    fn primal_pass(&mut self, limit: usize, allow_perturb: bool) -> Outcome {
        let mut stall = 0usize;
        let mut bland = false;
        let mut perturbations = 0;
        loop {
            if self.iterations >= limit {
                return Outcome::IterationLimit;
            }
            let Some((q, dir)) = self.choose_entering(bland) else {
                return Outcome::Optimal;
            };
            let flip = self.hi[q] - self.lo[q];
            // Harris two-pass ratio test: relax bounds by PRIMAL_TOL, then pick the
            // largest pivot among the rows blocking within the relaxed step.
            let mut relaxed = f64::INFINITY;
            for i in 0..self.m {
                let alpha = self.at(i, q);
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -alpha * dir;
                let bi = self.basis[i];
                let lim = if rate < 0.0 {
                    (self.x[bi] - self.lo[bi] + PRIMAL_TOL) / -rate
                } else {
                    (self.hi[bi] - self.x[bi] + PRIMAL_TOL) / rate
                };
                if lim < relaxed {
                    relaxed = lim;
                }
            }
            let mut leave: Option<(usize, f64)> = None;
            if relaxed.is_finite() {
                let mut best_alpha = 0.0;
                let mut best_var = usize::MAX;
                for i in 0..self.m {
                    let alpha = self.at(i, q);
                    if alpha.abs() <= PIVOT_TOL {
                        continue;
                    }
                    let rate = -alpha * dir;
                    let bi = self.basis[i];
                    let exact = if rate < 0.0 {
                        (self.x[bi] - self.lo[bi]) / -rate
                    } else {
                        (self.hi[bi] - self.x[bi]) / rate
                    };
                    if !exact.is_finite() || exact > relaxed {
                        continue;
                    }
                    // Under Bland's rule the textbook ratio test is kept: smallest
                    // step, then smallest variable index.
                    let better = if bland {
                        let cur = leave.map_or(f64::INFINITY, |(_, t)| t);
                        exact.max(0.0) < cur - PRIMAL_TOL || (exact.max(0.0) <= cur + PRIMAL_TOL && bi < best_var)
                    } else {
                        alpha.abs() > best_alpha
                    };
                    if better {
                        best_alpha = alpha.abs();
                        best_var = bi;
                        leave = Some((i, exact.max(0.0)));
                    }
                }
            }
            let theta = match leave {
                Some((_, th)) if th < flip => th,
                _ if flip.is_finite() => flip,
                _ => return Outcome::Unbounded,
            };
            if theta <= 1e-12 {
                stall += 1;
                if stall > STALL_LIMIT {
                    if allow_perturb && perturbations < MAX_PERTURBATIONS {
                        perturbations += 1;
                        stall = 0;
                        self.perturb_degenerate();
                        continue;
                    }
                    bland = true;
                }
            } else {
                stall = 0;
                bland = false;
            }
            for i in 0..self.m {
                let alpha = self.at(i, q);
                if alpha != 0.0 {
                    let bi = self.basis[i];
                    self.x[bi] -= alpha * dir * theta;
                }
            }
            match leave {
                Some((r, th)) if th < flip => {
                    let bi = self.basis[r];
                    let rate = -self.at(r, q) * dir;
                    self.x[bi] = if rate < 0.0 { self.lo[bi] } else { self.hi[bi] };
                    self.x[q] += dir * theta;
                    self.pivot(r, q);
                }
                _ => {
                    self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
                    self.iterations += 1;
                }
            }
        }
    }

    /// Dual simplex from a dual feasible basis. Stops early once the objective
    /// (a lower bound while dual feasible) exceeds `cutoff`.
    pub(crate) fn dual(&mut self, cutoff: f64, limit: usize) -> Outcome {
        loop {
            if self.iterations >= limit {
                return Outcome::IterationLimit;
            }
            let mut r = usize::MAX;
            let mut worst = PRIMAL_TOL * 10.0;
            for i in 0..self.m {
                let bi = self.basis[i];
                let v = (self.lo[bi] - self.x[bi]).max(self.x[bi] - self.hi[bi]);
                if v > worst {
                    worst = v;
                    r = i;
                }
            }
            if r == usize::MAX {
                return Outcome::Optimal;
            }
            if self.objective_internal() > cutoff {
                return Outcome::Cutoff;
            }
            let leaving = self.basis[r];
            let below = self.x[leaving] < self.lo[leaving];
            let target = if below { self.lo[leaving] } else { self.hi[leaving] };
            let row = r * self.nc;
            // Eligible entering columns and their dual ratios.
            let mut relaxed = f64::INFINITY;
            for j in 0..self.nc {
                if self.row_of[j] != NONBASIC || self.lo[j] == self.hi[j] {
                    continue;
                }
                let alpha = self.t[row + j];
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                if let Some(dv) = self.dual_slack(j, alpha, below) {
                    relaxed = relaxed.min((dv + DUAL_TOL) / alpha.abs());
                }
            }
            if !relaxed.is_finite() {
                return Outcome::Infeasible;
            }
            let mut q = usize::MAX;
            let mut best_alpha = 0.0;
            for j in 0..self.nc {
                if self.row_of[j] != NONBASIC || self.lo[j] == self.hi[j] {
                    continue;
                }
                let alpha = self.t[row + j];
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                if let Some(dv) = self.dual_slack(j, alpha, below) {
                    if dv / alpha.abs() <= relaxed && alpha.abs() > best_alpha {
                        best_alpha = alpha.abs();
                        q = j;
                    }
                }
            }
            let alpha = self.t[row + q];
            let dx = (self.x[leaving] - target) / alpha;
            for i in 0..self.m {
                let a = self.at(i, q);
                if a != 0.0 {
                    let bi = self.basis[i];
                    self.x[bi] -= a * dx;
                }
            }
            self.x[q] += dx;
            self.x[leaving] = target;
            self.pivot(r, q);
        }
    }

    /// Dual slack of nonbasic `j` if moving it in the direction that repairs the
    /// leaving row is allowed by its bounds.
    fn dual_slack(&self, j: usize, alpha: f64, below: bool) -> Option<f64> {
        // Basic value moves by -alpha·dx; `below` needs it to grow.
        let increase = if below { alpha < 0.0 } else { alpha > 0.0 };
        if increase {
            (self.x[j] < self.hi[j]).then(|| self.d[j].max(0.0))
        } else {
            (self.x[j] > self.lo[j]).then(|| (-self.d[j]).max(0.0))
        }
    }

    /// Pivots basic artificials out where possible and fixes all artificials at zero.
    fn retire_artificials(&mut self) {
        let first_art = self.n_struct + self.m;
        for r in 0..self.m {
            if self.basis[r] < first_art {
                continue;
            }
            let mut best = None;
            let mut best_abs = 1e-7;
            for j in 0..first_art {
                if self.is_basic(j) {
                    continue;
                }
                let a = self.at(r, j).abs();
                if a > best_abs {
                    best_abs = a;
                    best = Some(j);
                }
            }
            if let Some(q) = best {
                let art = self.basis[r];
                // Degenerate pivot: the artificial sits at (numerically) zero.
                self.x[art] = 0.0;
                self.pivot(r, q);
            }
        }
        for j in first_art..self.nc {
            self.lo[j] = 0.0;
            self.hi[j] = 0.0;
            if !self.is_basic(j) {
                self.x[j] = 0.0;
            }
        }
    }

    /// Tightens the bounds of structural `j` in place, keeping dual feasibility.
    pub(crate) fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lo[j] = lo;
        self.hi[j] = hi;
        if self.is_basic(j) {
            return;
        }
        let target = if self.d[j] > DUAL_TOL && lo.is_finite() {
            lo
        } else if self.d[j] < -DUAL_TOL && hi.is_finite() {
            hi
        } else if lo.is_finite() && (!hi.is_finite() || (self.x[j] - lo).abs() <= (hi - self.x[j]).abs()) {
            lo
        } else {
            finite_or(hi, 0.0)
        };
        let delta = target - self.x[j];
        if delta != 0.0 {
            for i in 0..self.m {
                let a = self.at(i, j);
                if a != 0.0 {
                    let bi = self.basis[i];
                    self.x[bi] -= a * delta;
                }
            }
            self.x[j] = target;
        }
    }

    /// Re-optimizes after bound changes: dual simplex, then primal clean-up.
    pub(crate) fn reoptimize(&mut self, cutoff: f64, limit: usize) -> Outcome {
        match self.dual(cutoff, limit) {
            Outcome::Optimal => {}
            other => return other,
        }
        let out = self.primal(limit);
        self.refresh_basic_values();
        out
    }

    pub(crate) fn structural_values(&self) -> &[f64] {
        &self.x[..self.n_struct]
    }

    pub(crate) fn solution(&self, lp: &LinearProgram) -> LpSolution {
        let values: Vec<f64> = lp
            .vars
            .iter()
            .zip(self.structural_values())
            .map(|(v, &x)| x.clamp(v.lower, v.upper))
            .collect();
        LpSolution {
            status: LpStatus::Optimal,
            objective_value: lp.objective_value(&values),
            values,
        }
    }
}
