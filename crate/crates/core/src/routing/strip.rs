use super::{GridNetwork, RoutingError, RoutingRequest, Vertex};
use crate::rounding::{RoundingError, RoundingProblem};

/// Flow values at or below this are treated as zero.
const SUPPORT_EPS: f64 = 1e-9;
/// Conservation slack accepted from an LP solution.
const CONSERVATION_TOL: f64 = 1e-6;
/// Path weights this close to 0 or 1 are solver noise.
const WEIGHT_EPS: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPath {
    /// Edge ids from source to target.
    pub edges: Vec<usize>,
    pub weight: f64,
}

/// Weighted paths per request, in request order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathDecomposition {
    pub paths: Vec<Vec<WeightedPath>>,
}

impl PathDecomposition {
    /// Strips every request's flow. `flows[i][e]` is the flow of request `i` on edge `e`.
    pub fn from_flows(
        net: &GridNetwork,
        requests: &[RoutingRequest],
        flows: &[Vec<f64>],
    ) -> Result<Self, RoutingError> {
        let paths = requests
            .iter()
            .zip(flows)
            .map(|(r, f)| path_strip(net, r, f))
            .collect::<Result<_, _>>()?;
        Ok(Self { paths })
    }

    pub fn num_paths(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    /// `(request, path)` for every flattened variable index, request-major.
    pub fn index(&self) -> Vec<(usize, usize)> {
        self.paths
            .iter()
            .enumerate()
            .flat_map(|(i, ps)| (0..ps.len()).map(move |p| (i, p)))
            .collect()
    }

    /// One rounding variable per path, one group per request.
    pub fn rounding_problem(&self) -> Result<RoundingProblem, RoundingError> {
        let mut values = Vec::with_capacity(self.num_paths());
        let mut groups = Vec::with_capacity(self.paths.len());
        for ps in &self.paths {
            let start = values.len();
            values.extend(ps.iter().map(|p| p.weight));
            groups.push((start..values.len()).collect());
        }
        RoundingProblem::new(values, groups)
    }

    /// Edge loads `Σ_P y_P` of the fractional decomposition.
    pub fn loads(&self, net: &GridNetwork) -> Vec<f64> {
        let mut load = vec![0.0; net.num_edges()];
        for p in self.paths.iter().flatten() {
            for &e in &p.edges {
                load[e] += p.weight;
            }
        }
        load
    }

    pub fn fractional_congestion(&self, net: &GridNetwork) -> f64 {
        self.loads(net).into_iter().fold(0.0, f64::max)
    }
}

/// Edge flow `Σ_P y_P f_P` of a list of weighted paths.
pub fn recompose(net: &GridNetwork, paths: &[WeightedPath]) -> Vec<f64> {
    let mut flow = vec![0.0; net.num_edges()];
    for p in paths {
        for &e in &p.edges {
            flow[e] += p.weight;
        }
    }
    flow
}

fn check_conservation(net: &GridNetwork, r: &RoutingRequest, flow: &[f64]) -> Result<(), RoutingError> {
    if flow.len() != net.num_edges() {
        return Err(RoutingError::NotAFlow(format!("{} values for {} edges", flow.len(), net.num_edges())));
    }
    if let Some(e) = flow.iter().position(|&f| !(f >= -CONSERVATION_TOL && f.is_finite())) {
        return Err(RoutingError::NotAFlow(format!("negative flow {} on edge {e}", flow[e])));
    }
    let demand = f64::from(r.demand);
    for v in 0..net.num_vertices() {
        let net_out: f64 = net.out_edges(v).iter().map(|&e| flow[e]).sum::<f64>()
            - net.in_edges(v).iter().map(|&e| flow[e]).sum::<f64>();
        let want = if v == r.source {
            demand
        } else if v == r.target {
            -demand
        } else {
            0.0
        };
        if (net_out - want).abs() > CONSERVATION_TOL {
            return Err(RoutingError::NotAFlow(format!("net outflow {net_out} at vertex {v}, expected {want}")));
        }
    }
    Ok(())
}

/// A directed cycle in the support, as a list of edges, found by DFS.
fn find_cycle(net: &GridNetwork, flow: &[f64]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let n = net.num_vertices();
    let mut color = vec![WHITE; n];
    let mut via: Vec<usize> = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != WHITE {
            continue;
        }
        // Stack of (vertex, next out-edge position).
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        color[root] = GREY;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            let outs = net.out_edges(v);
            if *pos == outs.len() {
                color[v] = BLACK;
                stack.pop();
                continue;
            }
            let e = outs[*pos];
            *pos += 1;
            if flow[e] <= SUPPORT_EPS {
                continue;
            }
            let u = net.head(e);
            match color[u] {
                WHITE => {
                    color[u] = GREY;
                    via[u] = e;
                    stack.push((u, 0));
                }
                GREY => {
                    let mut cycle = vec![e];
                    let mut w = v;
                    while w != u {
                        cycle.push(via[w]);
                        w = net.tail(via[w]);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                _ => {}
            }
        }
    }
    None
}

/// An s→t path in the support, first-found by DFS in N, E, S, W order.
fn find_path(net: &GridNetwork, flow: &[f64], s: Vertex, t: Vertex) -> Option<Vec<usize>> {
    let mut visited = vec![false; net.num_vertices()];
    let mut stack: Vec<(Vertex, usize)> = vec![(s, 0)];
    let mut edges: Vec<usize> = Vec::new();
    visited[s] = true;
    while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
        if v == t {
            return Some(edges);
        }
        let outs = net.out_edges(v);
        if *pos == outs.len() {
            stack.pop();
            edges.pop();
            continue;
        }
        let e = outs[*pos];
        *pos += 1;
        let u = net.head(e);
        if flow[e] > SUPPORT_EPS && !visited[u] {
            visited[u] = true;
            edges.push(e);
            stack.push((u, 0));
        }
    }
    None
}

/// Removes solver noise from path weights: weights within [`WEIGHT_EPS`] of 0
/// or 1 are snapped, and the fractional rest is rescaled so the weights sum to
/// `demand` exactly.
fn normalize_weights(paths: &mut Vec<WeightedPath>, demand: f64) {
    for _ in 0..4 {
        paths.retain(|p| p.weight > WEIGHT_EPS);
        for p in paths.iter_mut() {
            if p.weight >= 1.0 - WEIGHT_EPS {
                p.weight = 1.0;
            }
        }
        let ones = paths.iter().filter(|p| p.weight == 1.0).count() as f64;
        let frac: f64 = paths.iter().filter(|p| p.weight < 1.0).map(|p| p.weight).sum();
        if frac == 0.0 {
            return;
        }
        let scale = (demand - ones) / frac;
        let mut clean = true;
        for p in paths.iter_mut().filter(|p| p.weight < 1.0) {
            p.weight *= scale;
            clean &= p.weight > WEIGHT_EPS && p.weight < 1.0 - WEIGHT_EPS;
        }
        if clean {
            return;
        }
    }
}

/// Decomposes one request's edge flow into weighted simple paths.
///
/// Flow around directed cycles of the support is cancelled first. Paths are
/// then stripped one at a time, each carrying the bottleneck value along it,
/// until no source-target path remains. Finally weights within 1e-7 of 0 or 1
/// are snapped and the others rescaled so they sum to the demand exactly.
pub fn path_strip(net: &GridNetwork, request: &RoutingRequest, edge_flow: &[f64]) -> Result<Vec<WeightedPath>, RoutingError> {
    check_conservation(net, request, edge_flow)?;
    let mut flow: Vec<f64> = edge_flow.iter().map(|&f| if f <= SUPPORT_EPS { 0.0 } else { f }).collect();
    while let Some(cycle) = find_cycle(net, &flow) {
        let m = cycle.iter().map(|&e| flow[e]).fold(f64::INFINITY, f64::min);
        for e in cycle {
            flow[e] -= m;
            if flow[e] <= SUPPORT_EPS {
                flow[e] = 0.0;
            }
        }
    }
    let mut paths = Vec::new();
    while let Some(edges) = find_path(net, &flow, request.source, request.target) {
        let w = edges.iter().map(|&e| flow[e]).fold(f64::INFINITY, f64::min);
        for &e in &edges {
            flow[e] -= w;
            if flow[e] <= SUPPORT_EPS {
                flow[e] = 0.0;
            }
        }
        paths.push(WeightedPath { edges, weight: w });
    }
    let total: f64 = paths.iter().map(|p| p.weight).sum();
    let demand = f64::from(request.demand);
    if (total - demand).abs() > CONSERVATION_TOL * net.num_edges() as f64 {
        return Err(RoutingError::NotAFlow(format!("stripped weight {total} differs from demand {demand}")));
    }
    normalize_weights(&mut paths, demand);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::solve_lp;
    use crate::routing::{build_routing_ilp, flows_from_solution};

    fn flow_on(net: &GridNetwork, hops: &[(Vertex, Vertex, f64)]) -> Vec<f64> {
        let mut f = vec![0.0; net.num_edges()];
        for &(a, b, w) in hops {
            f[net.edge(a, b).unwrap()] += w;
        }
        f
    }

    #[test]
    fn single_unit_path() {
        let net = GridNetwork::new(3, 1);
        let r = RoutingRequest { source: 0, target: 2, demand: 1 };
        let paths = path_strip(&net, &r, &flow_on(&net, &[(0, 1, 1.0), (1, 2, 1.0)])).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].weight, 1.0);
        assert_eq!(paths[0].edges, vec![net.edge(0, 1).unwrap(), net.edge(1, 2).unwrap()]);
    }

    #[test]
    fn symmetric_split() {
        // 0 1
        // 2 3, half via 1 and half via 2.
        let net = GridNetwork::new(2, 2);
        let r = RoutingRequest { source: 0, target: 3, demand: 1 };
        let f = flow_on(&net, &[(0, 1, 0.5), (1, 3, 0.5), (0, 2, 0.5), (2, 3, 0.5)]);
        let paths = path_strip(&net, &r, &f).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.weight == 0.5));
        assert_eq!(recompose(&net, &paths), f);
    }

    #[test]
    fn cycles_are_cancelled() {
        let net = GridNetwork::new(2, 2);
        let r = RoutingRequest { source: 0, target: 1, demand: 1 };
        // Direct edge plus a unit circulation 0→2→3→1→0 riding on top.
        let f = flow_on(&net, &[(0, 1, 1.0), (0, 2, 0.4), (2, 3, 0.4), (3, 1, 0.4), (1, 0, 0.4)]);
        let paths = path_strip(&net, &r, &f).unwrap();
        let back = recompose(&net, &paths);
        assert!(back.iter().zip(&f).all(|(b, o)| *b <= o + 1e-12));
        assert!((paths.iter().map(|p| p.weight).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn broken_conservation_is_reported() {
        let net = GridNetwork::new(3, 1);
        let r = RoutingRequest { source: 0, target: 2, demand: 1 };
        let err = path_strip(&net, &r, &flow_on(&net, &[(0, 1, 1.0)])).unwrap_err();
        assert!(matches!(err, RoutingError::NotAFlow(_)));
    }

    #[test]
    fn lp_flows_recompose_within_original() {
        let net = GridNetwork::new(4, 4);
        let reqs = [
            RoutingRequest { source: 0, target: 15, demand: 2 },
            RoutingRequest { source: 3, target: 12, demand: 2 },
            RoutingRequest { source: 5, target: 10, demand: 3 },
        ];
        let sol = solve_lp(&build_routing_ilp(&net, &reqs, true).unwrap()).unwrap();
        let flows = flows_from_solution(&net, reqs.len(), &sol.values);
        let d = PathDecomposition::from_flows(&net, &reqs, &flows).unwrap();
        for ((ps, f), r) in d.paths.iter().zip(&flows).zip(&reqs) {
            let back = recompose(&net, ps);
            assert!(back.iter().zip(f).all(|(b, o)| *b <= o + 1e-6));
            let sum: f64 = ps.iter().map(|p| p.weight).sum();
            assert!((sum - f64::from(r.demand)).abs() < 1e-9);
            for p in ps {
                assert_eq!(net.tail(p.edges[0]), r.source);
                assert_eq!(net.head(*p.edges.last().unwrap()), r.target);
                let mut seen = std::collections::HashSet::new();
                assert!(p.edges.iter().all(|&e| seen.insert(net.tail(e))));
            }
        }
        assert!(d.fractional_congestion(&net) <= sol.objective_value + 1e-6);
        d.rounding_problem().unwrap().check_cardinality().unwrap();
    }
}
