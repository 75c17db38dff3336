use super::round::PathRounding;
use super::{
    build_routing_ilp, build_slack_lp, edge_loads, flows_from_solution, round_decomposition, x_index, GridNetwork,
    PathDecomposition, RoutingError, RoutingInstance, RoutingSolution,
};
use crate::lp::{solve_ilp, solve_lp, IlpOptions, LpStatus};
use crate::rng::{derive_seed, rng_from_seed};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

/// The rows of a routing table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoutingMethod {
    Opt,
    RrTree,
    RrBitwise,
    RrPlus,
    DerandBitwise,
    DerandTree,
    DerandPlus,
    Independent,
}

impl RoutingMethod {
    pub const ALL: [RoutingMethod; 8] = [
        RoutingMethod::Opt,
        RoutingMethod::RrTree,
        RoutingMethod::RrBitwise,
        RoutingMethod::RrPlus,
        RoutingMethod::DerandBitwise,
        RoutingMethod::DerandTree,
        RoutingMethod::DerandPlus,
        RoutingMethod::Independent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RoutingMethod::Opt => "OPT",
            RoutingMethod::RrTree => "RR-tree",
            RoutingMethod::RrBitwise => "RR-bitwise",
            RoutingMethod::RrPlus => "RR+",
            RoutingMethod::DerandBitwise => "DeRR-bitwise",
            RoutingMethod::DerandTree => "DeRR-tree",
            RoutingMethod::DerandPlus => "DeRR+",
            RoutingMethod::Independent => "independent",
        }
    }

    /// Rounding used, and whether it runs on the slack-LP flow.
    fn rounding(self) -> Option<(PathRounding, bool)> {
        match self {
            RoutingMethod::Opt => None,
            RoutingMethod::RrTree => Some((PathRounding::Tree, false)),
            RoutingMethod::RrBitwise => Some((PathRounding::Bitwise, false)),
            RoutingMethod::RrPlus => Some((PathRounding::Bitwise, true)),
            RoutingMethod::DerandBitwise => Some((PathRounding::DerandBitwise, false)),
            RoutingMethod::DerandTree => Some((PathRounding::DerandTree, false)),
            RoutingMethod::DerandPlus => Some((PathRounding::DerandTree, true)),
            RoutingMethod::Independent => Some((PathRounding::Independent, false)),
        }
    }
}

impl fmt::Display for RoutingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoutingMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RoutingMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown routing method `{s}`"))
    }
}

/// Settings of a single routing run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub methods: Vec<RoutingMethod>,
    pub delta: f64,
    /// Time limit for the exact solve; `None` runs to optimality.
    pub ilp_time_limit: Option<Duration>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            methods: RoutingMethod::ALL.to_vec(),
            delta: 1.0,
            ilp_time_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: RoutingMethod,
    pub congestion: u32,
    pub feasible: bool,
    /// Estimator scores never increased (always true for randomized methods).
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedReport {
    pub seed: u64,
    pub c_star: f64,
    /// Largest fractional edge load after the slack re-solve, when it ran.
    pub slack_max_load: Option<f64>,
    /// Best integral congestion found by branch-and-bound.
    pub opt: Option<u32>,
    /// The exact solve closed its gap.
    pub opt_proven: bool,
    pub results: Vec<MethodResult>,
}

impl SeedReport {
    pub fn congestion(&self, method: RoutingMethod) -> Option<f64> {
        if method == RoutingMethod::Opt {
            return self.opt.map(f64::from);
        }
        self.results.iter().find(|r| r.method == method).map(|r| f64::from(r.congestion))
    }
}

/// ILP start point from a rounded solution, if its paths form a 0/1 flow.
fn incumbent(net: &GridNetwork, k: usize, sol: &RoutingSolution) -> Option<Vec<f64>> {
    let mut x = vec![0.0; k * net.num_edges() + 1];
    for (i, ps) in sol.paths.iter().enumerate() {
        for &e in ps.iter().flatten() {
            let j = x_index(net, i, e);
            if x[j] != 0.0 {
                return None;
            }
            x[j] = 1.0;
        }
    }
    x[k * net.num_edges()] = f64::from(sol.congestion);
    Some(x)
}

/// Solves the relaxation, strips paths, runs every requested method and, when
/// `Opt` is requested, the exact program warm-started from the best feasible
/// rounding. Each method draws from its own stream derived from `instance.seed`.
pub fn run_seed(instance: &RoutingInstance, options: &RunOptions) -> Result<SeedReport, RoutingError> {
    let net = instance.network();
    let reqs = &instance.requests;
    let k = reqs.len();
    let lp = build_routing_ilp(&net, reqs, true)?;
    let relaxed = solve_lp(&lp)?;
    if relaxed.status != LpStatus::Optimal {
        return Err(RoutingError::Solve(relaxed.status));
    }
    let c_star = relaxed.objective_value;
    let flows = flows_from_solution(&net, k, &relaxed.values);
    let base = PathDecomposition::from_flows(&net, reqs, &flows)?;

    let needs_slack = options.methods.iter().any(|m| matches!(m.rounding(), Some((_, true))));
    let mut slack_max_load = None;
    let slack = if needs_slack {
        // A hair of room keeps the re-solve feasible against the first LP's tolerance.
        let slp = build_slack_lp(&net, reqs, c_star + 1e-9, options.delta.min(c_star))?;
        let s = solve_lp(&slp)?;
        if s.status != LpStatus::Optimal {
            return Err(RoutingError::Solve(s.status));
        }
        let flows = flows_from_solution(&net, k, &s.values);
        slack_max_load = Some(edge_loads(&flows).into_iter().fold(0.0, f64::max));
        Some(PathDecomposition::from_flows(&net, reqs, &flows)?)
    } else {
        None
    };

    let mut results = Vec::new();
    let mut best: Option<RoutingSolution> = None;
    for &method in &options.methods {
        let Some((rounding, on_slack)) = method.rounding() else { continue };
        let decomp = if on_slack { slack.as_ref().unwrap() } else { &base };
        let mut rng = rng_from_seed(derive_seed(instance.seed, method.name(), 0));
        let sol = round_decomposition(&net, reqs, decomp, rounding, &mut rng)?;
        results.push(MethodResult {
            method,
            congestion: sol.congestion,
            feasible: sol.feasible,
            monotone: sol.trace.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12),
        });
        if sol.feasible && best.as_ref().is_none_or(|b| sol.congestion < b.congestion) {
            best = Some(sol);
        }
    }

    let (mut opt, mut opt_proven) = (None, false);
    if options.methods.contains(&RoutingMethod::Opt) {
        let ilp = build_routing_ilp(&net, reqs, false)?;
        let mut ilp_options = IlpOptions::default();
        if let Some(limit) = options.ilp_time_limit {
            ilp_options = ilp_options.with_time_limit(limit);
        }
        if let Some(x) = best.as_ref().and_then(|b| incumbent(&net, k, b)) {
            ilp_options = ilp_options.with_incumbent(x);
        }
        let sol = solve_ilp(&ilp, &ilp_options)?;
        if sol.has_incumbent() {
            opt = Some(sol.solution.objective_value.round() as u32);
            opt_proven = sol.solution.status == LpStatus::Optimal;
        }
    }
    Ok(SeedReport {
        seed: instance.seed,
        c_star,
        slack_max_load,
        opt,
        opt_proven,
        results,
    })
}
