use crate::config::GridSize;
use crate::table::{num, ResultTable, ROUTING_SEED_HEADER, ROUTING_SUMMARY_HEADER};
use anyhow::{bail, Context, Result};
use deround::instances::{gen_routing_instance, DemandMode};
use deround::lp::{export_model, import_solution, LpStatus};
use deround::routing::{build_routing_ilp, run_seed, RoutingMethod, RunOptions, SeedReport};
use rayon::prelude::*;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

/// Where the optimum comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IlpMode {
    /// The built-in branch-and-bound.
    Internal,
    /// Models are written as LP files; a solution file next to a model is read
    /// back if present.
    External,
    /// No exact solve; gaps are taken over `⌈C*⌉`.
    Off,
}

impl FromStr for IlpMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "internal" => Ok(IlpMode::Internal),
            "external" => Ok(IlpMode::External),
            "off" => Ok(IlpMode::Off),
            _ => Err(format!("unknown ILP mode `{s}` (expected internal, external or off)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoutingConfig {
    pub grids: Vec<GridSize>,
    pub ks: Vec<usize>,
    pub demands: DemandMode,
    pub seeds: u64,
    pub seed_base: u64,
    pub delta: f64,
    pub methods: Vec<RoutingMethod>,
    pub ilp: IlpMode,
    pub ilp_time_limit: Option<Duration>,
    /// Directory for LP files in external mode.
    pub model_dir: Option<PathBuf>,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        Self {
            grids: vec![GridSize { width: 5, height: 5 }],
            ks: vec![10],
            demands: DemandMode::Fixed3,
            seeds: 100,
            seed_base: 0,
            delta: 1.0,
            methods: RoutingMethod::ALL.to_vec(),
            ilp: IlpMode::Internal,
            ilp_time_limit: None,
            model_dir: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoutingRun {
    pub grid: GridSize,
    pub k: usize,
    pub report: SeedReport,
    /// Congestion every gap is measured against.
    pub reference: f64,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct RoutingOutput {
    pub runs: Vec<RoutingRun>,
    pub seeds: ResultTable,
    pub summary: ResultTable,
}

fn solve_externally(cfg: &RoutingConfig, grid: GridSize, k: usize, seed: u64) -> Result<Option<u32>> {
    let dir = cfg.model_dir.clone().unwrap_or_else(|| PathBuf::from("models"));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let inst = gen_routing_instance(grid.width, grid.height, k, cfg.demands, seed);
    let ilp = build_routing_ilp(&inst.network(), &inst.requests, false)?;
    let stem = format!("routing-{grid}-k{k}-{}-seed{seed}", cfg.demands);
    export_model(&ilp, dir.join(format!("{stem}.lp")))?;
    let sol_path = dir.join(format!("{stem}.sol"));
    if !sol_path.exists() {
        return Ok(None);
    }
    let sol = import_solution(&ilp, &sol_path)?;
    if sol.status != LpStatus::Optimal {
        bail!("{}: solution is not optimal", sol_path.display());
    }
    Ok(Some(sol.objective_value.round() as u32))
}

fn run_one(cfg: &RoutingConfig, grid: GridSize, k: usize, seed: u64) -> Result<RoutingRun> {
    let start = Instant::now();
    let inst = gen_routing_instance(grid.width, grid.height, k, cfg.demands, seed);
    let mut methods = cfg.methods.clone();
    if cfg.ilp != IlpMode::Internal {
        methods.retain(|m| *m != RoutingMethod::Opt);
    }
    let opts = RunOptions {
        methods,
        delta: cfg.delta,
        ilp_time_limit: cfg.ilp_time_limit,
    };
    let mut report = run_seed(&inst, &opts).with_context(|| format!("grid {grid}, k {k}, seed {seed}"))?;
    if cfg.ilp == IlpMode::External {
        report.opt = solve_externally(cfg, grid, k, seed)?;
        report.opt_proven = report.opt.is_some();
    }
    let reference = report.opt.map_or((report.c_star - 1e-6).ceil(), f64::from);
    Ok(RoutingRun {
        grid,
        k,
        report,
        reference,
        wall: start.elapsed(),
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every (grid, k, seed) cell, seeds in parallel.
///
/// Gaps are the mean over seeds of `(congestion − reference) / reference`, in
/// percent, where the reference is the optimum when it is known and `⌈C*⌉`
/// otherwise. The optimum's own row has no gap.
pub fn run_routing_table(cfg: &RoutingConfig) -> Result<RoutingOutput> {
    if cfg.methods.is_empty() {
        bail!("no routing methods selected");
    }
    if cfg.seeds == 0 {
        bail!("at least one seed is needed");
    }
    let cells: Vec<(GridSize, usize, u64)> = cfg
        .grids
        .iter()
        .flat_map(|&g| cfg.ks.iter().flat_map(move |&k| (0..cfg.seeds).map(move |s| (g, k, s))))
        .map(|(g, k, s)| (g, k, cfg.seed_base + s))
        .collect();
    let mut runs: Vec<RoutingRun> =
        cells.par_iter().map(|&(g, k, s)| run_one(cfg, g, k, s)).collect::<Result<_>>()?;
    runs.sort_by_key(|r| (r.grid, r.k, r.report.seed));

    let mut seeds = ResultTable::new("routing_seeds", ROUTING_SEED_HEADER);
    let mut summary = ResultTable::new("routing_summary", ROUTING_SUMMARY_HEADER);
    let methods: Vec<RoutingMethod> = RoutingMethod::ALL.into_iter().filter(|m| cfg.methods.contains(m)).collect();
    for r in &runs {
        for &m in &methods {
            let Some(c) = r.report.congestion(m) else { continue };
            let feasible = r.report.results.iter().find(|x| x.method == m).is_none_or(|x| x.feasible);
            seeds.push(vec![
                r.grid.to_string(),
                r.k.to_string(),
                cfg.demands.to_string(),
                r.report.seed.to_string(),
                m.name().into(),
                num(c),
                feasible.to_string(),
                num(r.report.c_star),
                num(r.reference),
                r.wall.as_millis().to_string(),
            ]);
        }
    }
    for &g in &cfg.grids {
        for &k in &cfg.ks {
            let cell: Vec<&RoutingRun> = runs.iter().filter(|r| r.grid == g && r.k == k).collect();
            for &m in &methods {
                let vals: Vec<(f64, f64)> =
                    cell.iter().filter_map(|r| r.report.congestion(m).map(|c| (c, r.reference))).collect();
                if vals.is_empty() {
                    continue;
                }
                let cs: Vec<f64> = vals.iter().map(|v| v.0).collect();
                let (mean, std) = mean_std(&cs);
                let gap = if m == RoutingMethod::Opt {
                    String::new()
                } else {
                    let gaps: Vec<f64> = vals.iter().map(|(c, r)| 100.0 * (c - r) / r).collect();
                    format!("{:.2}", mean_std(&gaps).0)
                };
                summary.push(vec![
                    g.to_string(),
                    k.to_string(),
                    cfg.demands.to_string(),
                    m.name().into(),
                    format!("{mean:.3}"),
                    gap,
                    format!("{std:.3}"),
                    vals.len().to_string(),
                ]);
            }
        }
    }
    Ok(RoutingOutput { runs, seeds, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_seed_has_zero_spread() {
        let cfg = RoutingConfig {
            grids: vec![GridSize { width: 3, height: 3 }],
            ks: vec![3],
            seeds: 1,
            methods: vec![RoutingMethod::Opt, RoutingMethod::RrTree],
            ..RoutingConfig::default()
        };
        let out = run_routing_table(&cfg).unwrap();
        assert_eq!(out.summary.rows.len(), 2);
        let std_col = out.summary.column("stddev").unwrap();
        assert!(out.summary.rows.iter().all(|r| r[std_col] == "0.000"));
        let gap_col = out.summary.column("gap_pct").unwrap();
        assert_eq!(out.summary.rows[0][gap_col], "");
    }

    #[test]
    fn opt_only_has_no_gaps() {
        let cfg = RoutingConfig {
            grids: vec![GridSize { width: 3, height: 3 }],
            ks: vec![2],
            seeds: 2,
            methods: vec![RoutingMethod::Opt],
            ..RoutingConfig::default()
        };
        let out = run_routing_table(&cfg).unwrap();
        let gap_col = out.summary.column("gap_pct").unwrap();
        assert!(out.summary.rows.iter().all(|r| r[gap_col].is_empty()));
    }

    #[test]
    fn ilp_off_measures_against_rounded_bound() {
        let cfg = RoutingConfig {
            grids: vec![GridSize { width: 3, height: 3 }],
            ks: vec![3],
            seeds: 2,
            ilp: IlpMode::Off,
            methods: vec![RoutingMethod::Opt, RoutingMethod::DerandTree],
            ..RoutingConfig::default()
        };
        let out = run_routing_table(&cfg).unwrap();
        for r in &out.runs {
            assert_eq!(r.report.opt, None);
            assert_eq!(r.reference, (r.report.c_star - 1e-6).ceil());
        }
        assert_eq!(out.summary.rows.len(), 1);
    }

    #[test]
    fn empty_method_list_is_rejected() {
        let cfg = RoutingConfig {
            methods: vec![],
            ..RoutingConfig::default()
        };
        assert!(run_routing_table(&cfg).is_err());
    }
}
