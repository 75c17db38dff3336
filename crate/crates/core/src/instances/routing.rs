use crate::rng::rng_from_seed;
use crate::routing::{edge_disjoint_paths, GridNetwork, RoutingInstance, RoutingRequest};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DemandMode {
    /// Every demand is 3.
    Fixed3,
    /// Demands uniform on `{1, …, 5}`.
    Uniform1To5,
}

impl fmt::Display for DemandMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DemandMode::Fixed3 => "fixed3",
            DemandMode::Uniform1To5 => "u1-5",
        })
    }
}

impl FromStr for DemandMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed3" => Ok(DemandMode::Fixed3),
            "u1-5" | "uniform1to5" => Ok(DemandMode::Uniform1To5),
            _ => Err(format!("unknown demand mode `{s}` (expected fixed3 or u1-5)")),
        }
    }
}

/// One raw demand draw.
pub fn sample_demand<R: Rng + ?Sized>(mode: DemandMode, rng: &mut R) -> u32 {
    match mode {
        DemandMode::Fixed3 => 3,
        DemandMode::Uniform1To5 => rng.gen_range(1..=5),
    }
}

/// `k` requests with source and target uniform on the vertices, redrawn while
/// equal. A request whose demand exceeds the number of edge-disjoint paths
/// between its endpoints is redrawn as a whole; requests are independent, so
/// this is the same as rejecting whole instances that contain one.
pub fn gen_routing_instance(width: usize, height: usize, k: usize, mode: DemandMode, seed: u64) -> RoutingInstance {
    let net = GridNetwork::new(width, height);
    let n = net.num_vertices();
    assert!(n >= 2, "a grid with one vertex has no requests");
    let mut rng = rng_from_seed(seed);
    let requests = (0..k)
        .map(|_| loop {
            let source = rng.gen_range(0..n);
            let target = rng.gen_range(0..n);
            if source == target {
                continue;
            }
            let demand = sample_demand(mode, &mut rng);
            if edge_disjoint_paths(&net, source, target) >= demand {
                break RoutingRequest { source, target, demand };
            }
        })
        .collect();
    RoutingInstance {
        width,
        height,
        requests,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::validate_requests;

    #[test]
    fn fixed_demands_are_three() {
        let inst = gen_routing_instance(5, 5, 10, DemandMode::Fixed3, 1);
        assert_eq!(inst.requests.len(), 10);
        assert!(inst.requests.iter().all(|r| r.demand == 3 && r.source != r.target));
        validate_requests(&inst.network(), &inst.requests).unwrap();
    }

    #[test]
    fn uniform_demand_frequencies() {
        let mut rng = rng_from_seed(3);
        let mut counts = [0usize; 6];
        let n = 100_000;
        for _ in 0..n {
            counts[sample_demand(DemandMode::Uniform1To5, &mut rng) as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        for c in &counts[1..] {
            assert!((*c as f64 / n as f64 - 0.2).abs() < 0.01);
        }
    }

    #[test]
    fn replay_is_identical() {
        let a = gen_routing_instance(5, 5, 10, DemandMode::Uniform1To5, 42);
        let b = gen_routing_instance(5, 5, 10, DemandMode::Uniform1To5, 42);
        assert_eq!(a.to_json(), b.to_json());
        validate_requests(&a.network(), &a.requests).unwrap();
    }
}
