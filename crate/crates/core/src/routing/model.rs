use super::{validate_requests, GridNetwork, RoutingError, RoutingRequest, Vertex};
use crate::lp::{LinearProgram, Relation, Sense};
use std::collections::VecDeque;

/// Column of `x_{i,e}` in the routing programs.
pub fn x_index(net: &GridNetwork, request: usize, edge: usize) -> usize {
    request * net.num_edges() + edge
}

fn flow_rows(lp: &mut LinearProgram, net: &GridNetwork, requests: &[RoutingRequest]) {
    for (i, r) in requests.iter().enumerate() {
        for v in 0..net.num_vertices() {
            if v == r.target {
                continue;
            }
            let mut terms: Vec<(usize, f64)> = net.out_edges(v).iter().map(|&e| (x_index(net, i, e), 1.0)).collect();
            terms.extend(net.in_edges(v).iter().map(|&e| (x_index(net, i, e), -1.0)));
            let (name, rhs) = if v == r.source {
                (format!("src_{i}"), f64::from(r.demand))
            } else {
                (format!("flow_{i}_{v}"), 0.0)
            };
            lp.add_row(name, terms, Relation::Eq, rhs);
        }
    }
}

fn flow_vars(lp: &mut LinearProgram, net: &GridNetwork, requests: &[RoutingRequest], relax: bool) {
    for i in 0..requests.len() {
        for e in 0..net.num_edges() {
            let name = format!("x_{i}_{e}");
            if relax {
                lp.add_var(name, 0.0, 0.0, 1.0);
            } else {
                lp.add_int_var(name, 0.0, 0.0, 1.0);
            }
        }
    }
}

/// The congestion program: minimize `C` subject to every edge load being at
/// most `C`, net outflow `r_i` at each source and conservation at every vertex
/// other than source and target.
///
/// Columns are `x_{i,e}` at [`x_index`] followed by `C`. In the integer version
/// `C` is flagged integral too, which lets branch-and-bound round its bounds up.
pub fn build_routing_ilp(
    net: &GridNetwork,
    requests: &[RoutingRequest],
    relax: bool,
) -> Result<LinearProgram, RoutingError> {
    validate_requests(net, requests)?;
    let mut lp = LinearProgram::new(Sense::Minimize);
    flow_vars(&mut lp, net, requests, relax);
    let c = if relax {
        lp.add_var("C", 1.0, 0.0, f64::INFINITY)
    } else {
        lp.add_int_var("C", 1.0, 0.0, f64::INFINITY)
    };
    for e in 0..net.num_edges() {
        let mut terms: Vec<(usize, f64)> = (0..requests.len()).map(|i| (x_index(net, i, e), 1.0)).collect();
        terms.push((c, -1.0));
        lp.add_row(format!("cap_{e}"), terms, Relation::Le, 0.0);
    }
    flow_rows(&mut lp, net, requests);
    Ok(lp)
}

/// The second LP with the congestion fixed: loads are capped at
/// `C* − δ + z_e` with `z_e ∈ [0, δ]` and `Σ z_e` is minimized. Columns are
/// `x_{i,e}` followed by the `z_e`.
pub fn build_slack_lp(
    net: &GridNetwork,
    requests: &[RoutingRequest],
    c_star: f64,
    delta: f64,
) -> Result<LinearProgram, RoutingError> {
    if !(0.0..=c_star).contains(&delta) {
        return Err(RoutingError::Delta { delta, c_star });
    }
    validate_requests(net, requests)?;
    let mut lp = LinearProgram::new(Sense::Minimize);
    flow_vars(&mut lp, net, requests, true);
    for e in 0..net.num_edges() {
        lp.add_var(format!("z_{e}"), 1.0, 0.0, delta);
    }
    let z0 = requests.len() * net.num_edges();
    for e in 0..net.num_edges() {
        let mut terms: Vec<(usize, f64)> = (0..requests.len()).map(|i| (x_index(net, i, e), 1.0)).collect();
        terms.push((z0 + e, -1.0));
        lp.add_row(format!("cap_{e}"), terms, Relation::Le, c_star - delta);
    }
    flow_rows(&mut lp, net, requests);
    Ok(lp)
}

/// Splits a solution vector into per-request edge flows.
pub fn flows_from_solution(net: &GridNetwork, k: usize, values: &[f64]) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| (0..net.num_edges()).map(|e| values[x_index(net, i, e)]).collect())
        .collect()
}

/// Total load per edge over all requests.
pub fn edge_loads(flows: &[Vec<f64>]) -> Vec<f64> {
    let m = flows.first().map_or(0, Vec::len);
    (0..m).map(|e| flows.iter().map(|f| f[e]).sum()).collect()
}

/// Maximum number of edge-disjoint directed paths from `s` to `t`.
pub fn edge_disjoint_paths(net: &GridNetwork, s: Vertex, t: Vertex) -> u32 {
    if s == t {
        return 0;
    }
    let mut used = vec![false; net.num_edges()];
    let mut count = 0;
    loop {
        // BFS in the residual graph: forward along unused edges, backward along used ones.
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; net.num_vertices()];
        let mut seen = vec![false; net.num_vertices()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &e in net.out_edges(v) {
                let u = net.head(e);
                if !used[e] && !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((e, true));
                    queue.push_back(u);
                }
            }
            for &e in net.in_edges(v) {
                let u = net.tail(e);
                if used[e] && !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((e, false));
                    queue.push_back(u);
                }
            }
        }
        if !seen[t] {
            return count;
        }
        let mut v = t;
        while v != s {
            let (e, forward) = parent[v].unwrap();
            used[e] = forward;
            v = if forward { net.tail(e) } else { net.head(e) };
        }
        count += 1;
    }
}
