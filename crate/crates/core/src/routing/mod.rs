//! Low-congestion routing on bidirected grids.
//!
//! A run goes through these stages:
//!
//! 1. [`build_routing_ilp`] writes the multicommodity flow program: one 0/1
//!    variable per request and directed edge, plus the congestion `C` that
//!    bounds every edge load, minimized.
//! 2. The relaxation is solved and [`path_strip`] turns each request's flow
//!    into weighted simple paths whose weights sum to the demand.
//! 3. [`round_decomposition`] picks exactly `r_i` paths per request with one of
//!    the dependent roundings, or a derandomization guided by
//!    [`CongestionEstimator`].
//! 4. [`build_slack_lp`] optionally re-solves the relaxation with the congestion
//!    fixed, pushing flow off saturated edges before stripping.
//!
//! [`run_seed`] strings the stages together for one instance.

mod estimator;
mod experiment;
mod model;
mod round;
mod strip;

pub use estimator::CongestionEstimator;
pub use experiment::{run_seed, MethodResult, RoutingMethod, RunOptions, SeedReport};
pub use model::{build_routing_ilp, build_slack_lp, edge_disjoint_paths, edge_loads, flows_from_solution, x_index};
pub use round::{measure_congestion, round_decomposition, PathRounding, RoutingSolution};
pub use strip::{path_strip, recompose, PathDecomposition, WeightedPath};

use crate::lp::LpError;
use crate::rounding::RoundingError;
use serde::{Deserialize, Serialize};

/// Vertex `(row, col)` has id `row * width + col`.
pub type Vertex = usize;

#[derive(Debug, thiserror::Error)]
pub enum RoutingError {
    #[error("vertex {0} is outside the grid")]
    VertexOutOfRange(Vertex),
    #[error("request {0} has equal source and target")]
    Loop(usize),
    #[error("request {0} has zero demand")]
    ZeroDemand(usize),
    #[error("request {request} needs {demand} edge-disjoint paths but only {available} exist")]
    Capacity { request: usize, demand: u32, available: u32 },
    #[error("not a flow: {0}")]
    NotAFlow(String),
    #[error("delta {delta} outside [0, {c_star}]")]
    Delta { delta: f64, c_star: f64 },
    #[error("LP solve ended with status {0:?}")]
    Solve(crate::lp::LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
}

/// Directions in the fixed neighbor order used everywhere: north, east, south, west.
const DIRS: [(isize, isize); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

/// A `width × height` grid with both directions of every 4-neighbor edge.
///
/// Edges are numbered vertex by vertex, and within a vertex in N, E, S, W order
/// of the head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridNetwork {
    width: usize,
    height: usize,
    tails: Vec<Vertex>,
    heads: Vec<Vertex>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl GridNetwork {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        let n = width * height;
        let mut net = GridNetwork {
            width,
            height,
            tails: Vec::new(),
            heads: Vec::new(),
            out_edges: vec![Vec::new(); n],
            in_edges: vec![Vec::new(); n],
        };
        for v in 0..n {
            let (r, c) = (v / width, v % width);
            for (dr, dc) in DIRS {
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr >= height as isize || nc >= width as isize {
                    continue;
                }
                let u = nr as usize * width + nc as usize;
                let e = net.tails.len();
                net.tails.push(v);
                net.heads.push(u);
                net.out_edges[v].push(e);
                net.in_edges[u].push(e);
            }
        }
        net
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_vertices(&self) -> usize {
        self.width * self.height
    }

    pub fn num_edges(&self) -> usize {
        self.tails.len()
    }

    pub fn vertex(&self, row: usize, col: usize) -> Vertex {
        assert!(row < self.height && col < self.width);
        row * self.width + col
    }

    pub fn coords(&self, v: Vertex) -> (usize, usize) {
        (v / self.width, v % self.width)
    }

    pub fn tail(&self, e: usize) -> Vertex {
        self.tails[e]
    }

    pub fn head(&self, e: usize) -> Vertex {
        self.heads[e]
    }

    /// Outgoing edges of `v` in N, E, S, W order.
    pub fn out_edges(&self, v: Vertex) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: Vertex) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn edge(&self, from: Vertex, to: Vertex) -> Option<usize> {
        self.out_edges[from].iter().copied().find(|&e| self.heads[e] == to)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.out_edges[v].len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingRequest {
    pub source: Vertex,
    pub target: Vertex,
    pub demand: u32,
}

/// Everything needed to replay a run: grid size, requests and the seed they
/// came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingInstance {
    pub width: usize,
    pub height: usize,
    pub requests: Vec<RoutingRequest>,
    pub seed: u64,
}

impl RoutingInstance {
    pub fn network(&self) -> GridNetwork {
        GridNetwork::new(self.width, self.height)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("routing instances always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Checks endpoints, demands and that every demand fits into edge-disjoint paths.
pub fn validate_requests(net: &GridNetwork, requests: &[RoutingRequest]) -> Result<(), RoutingError> {
    for (i, r) in requests.iter().enumerate() {
        for v in [r.source, r.target] {
            if v >= net.num_vertices() {
                return Err(RoutingError::VertexOutOfRange(v));
            }
        }
        if r.source == r.target {
            return Err(RoutingError::Loop(i));
        }
        if r.demand == 0 {
            return Err(RoutingError::ZeroDemand(i));
        }
        let available = edge_disjoint_paths(net, r.source, r.target);
        if available < r.demand {
            return Err(RoutingError::Capacity {
                request: i,
                demand: r.demand,
                available,
            });
        }
    }
    Ok(())
}
