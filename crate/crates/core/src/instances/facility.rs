use crate::maxcov::{CoverError, CoverageInstance};
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("customer {customer} has zero demand; distances cannot be descaled")]
    ZeroDemand { customer: usize },
    #[error("descaling needs demands and applies to distance matrices only")]
    NoDemands,
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Input layouts accepted by [`convert_facility`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacilityFormat {
    /// One `x y demand` line per point; every point is both a facility and a
    /// customer.
    Points,
    /// A facility-by-customer cost matrix in the plain UflLib layout.
    Ufllib,
}

impl FromStr for FacilityFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "points" | "orlib_points" => Ok(FacilityFormat::Points),
            "ufllib" => Ok(FacilityFormat::Ufllib),
            _ => Err(format!("unknown facility format `{s}` (expected points or ufllib)")),
        }
    }
}

/// Non-empty lines with `#` comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn number(tok: &str, line: usize) -> Result<f64, InstanceError> {
    tok.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| InstanceError::Parse {
        line,
        message: format!("`{tok}` is not a number"),
    })
}

/// Reads `x y profit` lines. A leading line holding a single integer is taken
/// as the point count and checked.
pub fn read_points(text: &str) -> Result<(Vec<[f64; 2]>, Vec<f64>), InstanceError> {
    let mut coords = Vec::new();
    let mut profits = Vec::new();
    let mut declared: Option<(usize, usize)> = None;
    let mut last_line = 0;
    for (idx, (line, l)) in content_lines(text).enumerate() {
        last_line = line;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if idx == 0 && toks.len() == 1 {
            let n = toks[0].parse::<usize>().map_err(|_| InstanceError::Parse {
                line,
                message: format!("`{}` is not a point count", toks[0]),
            })?;
            declared = Some((n, line));
            continue;
        }
        if toks.len() != 3 {
            return Err(InstanceError::Parse {
                line,
                message: format!("expected `x y profit`, found {} fields", toks.len()),
            });
        }
        coords.push([number(toks[0], line)?, number(toks[1], line)?]);
        let p = number(toks[2], line)?;
        if p < 0.0 {
            return Err(InstanceError::Parse {
                line,
                message: format!("negative profit {p}"),
            });
        }
        profits.push(p);
    }
    if let Some((n, line)) = declared {
        if n != coords.len() {
            return Err(InstanceError::Parse {
                line,
                message: format!("header announces {n} points but {} follow (through line {last_line})", coords.len()),
            });
        }
    }
    Ok((coords, profits))
}

/// Facility-by-customer costs with optional customer demands.
struct CostMatrix {
    costs: Vec<Vec<f64>>,
    demands: Option<Vec<f64>>,
}

/// Plain UflLib layout: an optional `FILE:` line, a line `n m [0]`, then one
/// line `j opening_cost c_j1 … c_jm` per facility. An optional `DEMANDS`
/// keyword may follow with `m` customer demands.
fn read_ufllib(text: &str) -> Result<CostMatrix, InstanceError> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.starts_with("FILE:")).peekable();
    let Some((hline, header)) = lines.next() else {
        return Err(InstanceError::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        });
    };
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| InstanceError::Parse {
            line: hline,
            message: format!("bad header `{header}`"),
        })?;
    if head.len() < 2 {
        return Err(InstanceError::Parse {
            line: hline,
            message: format!("bad header `{header}`"),
        });
    }
    let (n, m) = (head[0], head[1]);
    let mut costs = Vec::with_capacity(n);
    for j in 0..n {
        let Some((line, l)) = lines.next() else {
            return Err(InstanceError::Parse {
                line: hline,
                message: format!("expected {n} facility rows, found {j}"),
            });
        };
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != m + 2 {
            return Err(InstanceError::Parse {
                line,
                message: format!("expected {} fields, found {}", m + 2, toks.len()),
            });
        }
        costs.push(toks[2..].iter().map(|t| number(t, line)).collect::<Result<Vec<_>, _>>()?);
    }
    let mut demands = None;
    if let Some((line, l)) = lines.next() {
        if l != "DEMANDS" {
            return Err(InstanceError::Parse {
                line,
                message: format!("unexpected `{l}` after the cost rows"),
            });
        }
        let mut d = Vec::with_capacity(m);
        for (line, l) in lines {
            for t in l.split_whitespace() {
                d.push(number(t, line)?);
            }
        }
        if d.len() != m {
            return Err(InstanceError::Parse {
                line,
                message: format!("expected {m} demands, found {}", d.len()),
            });
        }
        demands = Some(d);
    }
    Ok(CostMatrix { costs, demands })
}

/// Turns facility-location data into unit-cost max-coverage with the given
/// `budget`: set `j` covers customer `i` when their distance is at most
/// `threshold`.
///
/// For point files the distance is Euclidean and the demands become element
/// weights. For cost matrices each customer weighs its demand (1 without a
/// `DEMANDS` block); with `descale` the stored costs are first divided by the
/// customer demand, undoing instances that store demand-weighted distances.
pub fn convert_facility(
    text: &str,
    format: FacilityFormat,
    threshold: f64,
    descale: bool,
    budget: f64,
) -> Result<CoverageInstance, InstanceError> {
    match format {
        FacilityFormat::Points => {
            if descale {
                return Err(InstanceError::NoDemands);
            }
            let (coords, profits) = read_points(text)?;
            let sets = coords
                .iter()
                .map(|a| {
                    (0..coords.len())
                        .filter(|&i| (a[0] - coords[i][0]).hypot(a[1] - coords[i][1]) <= threshold)
                        .collect()
                })
                .collect();
            Ok(CoverageInstance::unit_cost(sets, profits, budget)?)
        }
        FacilityFormat::Ufllib => {
            let cm = read_ufllib(text)?;
            let m = cm.costs.first().map_or(0, Vec::len);
            let weights = cm.demands.clone().unwrap_or_else(|| vec![1.0; m]);
            if descale {
                let d = cm.demands.as_ref().ok_or(InstanceError::NoDemands)?;
                if let Some(customer) = d.iter().position(|&v| v == 0.0) {
                    return Err(InstanceError::ZeroDemand { customer });
                }
            }
            let sets = cm
                .costs
                .iter()
                .map(|row| {
                    (0..m)
                        .filter(|&i| {
                            let c = if descale { row[i] / weights[i] } else { row[i] };
                            c <= threshold
                        })
                        .collect()
                })
                .collect();
            Ok(CoverageInstance::unit_cost(sets, weights, budget)?.without_zero_weights())
        }
    }
}
