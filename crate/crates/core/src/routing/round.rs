use super::{CongestionEstimator, GridNetwork, PathDecomposition, RoutingError, RoutingRequest};
use crate::rounding::{derandomize, round_bitwise, round_independent, round_tree, Pairing, DEFAULT_PRECISION_BITS};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// How the path weights of a decomposition are rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathRounding {
    Tree,
    Bitwise,
    DerandTree,
    DerandBitwise,
    Independent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingSolution {
    /// Edge lists of the chosen paths, per request.
    pub paths: Vec<Vec<Vec<usize>>>,
    pub congestion: u32,
    /// Every request received exactly its demand in paths.
    pub feasible: bool,
    /// Estimator scores of a derandomized run, empty for randomized ones.
    pub trace: Vec<f64>,
}

/// Maximum number of chosen paths sharing an edge.
pub fn measure_congestion(net: &GridNetwork, paths: &[Vec<Vec<usize>>]) -> u32 {
    let mut load = vec![0u32; net.num_edges()];
    for p in paths.iter().flatten() {
        for &e in p {
            load[e] += 1;
        }
    }
    load.into_iter().max().unwrap_or(0)
}

/// Rounds path weights to a 0/1 choice per path. Dependent methods keep one
/// cardinality group per request; derandomized ones are driven by
/// [`CongestionEstimator::new`]. Variables are ordered request-major.
pub fn round_decomposition<R: Rng + ?Sized>(
    net: &GridNetwork,
    requests: &[RoutingRequest],
    decomp: &PathDecomposition,
    method: PathRounding,
    rng: &mut R,
) -> Result<RoutingSolution, RoutingError> {
    let problem = decomp.rounding_problem()?;
    let mut trace = Vec::new();
    let bits = match method {
        PathRounding::Tree => round_tree(&problem, rng)?.bits,
        PathRounding::Bitwise => round_bitwise(&problem, rng, DEFAULT_PRECISION_BITS)?.bits,
        PathRounding::Independent => round_independent(problem.values(), rng),
        PathRounding::DerandTree | PathRounding::DerandBitwise => {
            let oracle = CongestionEstimator::new(net, decomp);
            let pairing = if method == PathRounding::DerandTree {
                Pairing::Tree
            } else {
                Pairing::Bitwise
            };
            let out = derandomize(&problem, &oracle, pairing)?;
            trace = out.trace;
            out.result.bits
        }
    };
    let mut paths = vec![Vec::new(); decomp.paths.len()];
    for ((i, p), b) in decomp.index().into_iter().zip(bits) {
        if b == 1 {
            paths[i].push(decomp.paths[i][p].edges.clone());
        }
    }
    let feasible = paths.iter().zip(requests).all(|(ps, r)| ps.len() == r.demand as usize);
    Ok(RoutingSolution {
        congestion: measure_congestion(net, &paths),
        paths,
        feasible,
        trace,
    })
}
