use crate::table::{num, ResultTable, COVERAGE_HEADER};
use anyhow::{bail, Context, Result};
use deround::instances::{gen_chessboard, gen_fpp};
use deround::maxcov::{
    best_of_k, derand_cover, eval_f, gradient_cover, greedy_cover_permuted, hybrid_cover, solve_cover_lp, CoverMode,
    CoverageInstance,
};
use deround::rng::{derive_seed, rng_from_seed};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

/// Columns of the coverage sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverMethod {
    /// Optimum of the relaxation.
    Lp,
    /// `F(y*)`, the expected value of one independent rounding.
    Once,
    BestOfK,
    Derand,
    Gradient,
    Greedy,
    /// Greedy pre-selection for every fraction of the ρ grid, followed by each
    /// rounding mode.
    Hybrid,
    /// `(1 − 1/e)` times the relaxation optimum.
    Bound,
}

impl CoverMethod {
    pub const ALL: [CoverMethod; 8] = [
        CoverMethod::Lp,
        CoverMethod::Once,
        CoverMethod::BestOfK,
        CoverMethod::Derand,
        CoverMethod::Gradient,
        CoverMethod::Greedy,
        CoverMethod::Hybrid,
        CoverMethod::Bound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverMethod::Lp => "lp",
            CoverMethod::Once => "once",
            CoverMethod::BestOfK => "best-of-k",
            CoverMethod::Derand => "derand",
            CoverMethod::Gradient => "gradient",
            CoverMethod::Greedy => "greedy",
            CoverMethod::Hybrid => "hybrid",
            CoverMethod::Bound => "bound",
        }
    }
}

impl FromStr for CoverMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CoverMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown coverage method `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct CoverageConfig {
    /// Display name of the instance.
    pub name: String,
    pub instance: CoverageInstance,
    /// Budgets to sweep; the instance budget when empty.
    pub budgets: Vec<f64>,
    /// Greedy fractions for the hybrid.
    pub rhos: Vec<f64>,
    pub methods: Vec<CoverMethod>,
    /// Trials per best-of-k run.
    pub k: usize,
    /// Runs of each randomized method.
    pub seeds: u64,
    pub seed_base: u64,
}

/// Loads `chessboard:K`, `fpp:Q` or a canonical JSON file.
pub fn load_instance(spec: &str) -> Result<(String, CoverageInstance)> {
    if let Some(k) = spec.strip_prefix("chessboard:") {
        let k: usize = k.parse().context("chessboard size")?;
        if k == 0 {
            bail!("chessboard size must be positive");
        }
        return Ok((format!("chessboard-{k}"), gen_chessboard(k)));
    }
    if let Some(q) = spec.strip_prefix("fpp:") {
        let q: u64 = q.parse().context("plane order")?;
        return Ok((format!("fpp-{q}"), gen_fpp(q)?));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let name = Path::new(spec).file_stem().map_or(spec.to_owned(), |s| s.to_string_lossy().into_owned());
    Ok((name, CoverageInstance::from_json(&text)?))
}

/// First 16 hex digits of the SHA-256 of the canonical JSON.
pub fn instance_hash(inst: &CoverageInstance) -> String {
    let digest = Sha256::digest(inst.to_json().as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One emitted number.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageRow {
    pub budget: f64,
    /// Method name; hybrid rows read `hybrid-<mode>`.
    pub method: String,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
    pub value: f64,
    pub cost: Option<f64>,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct CoverageOutput {
    pub rows: Vec<CoverageRow>,
    pub table: ResultTable,
}

fn budget_rows(cfg: &CoverageConfig, budget: f64) -> Result<Vec<CoverageRow>> {
    let inst = cfg.instance.with_budget(budget)?;
    let has = |m: CoverMethod| cfg.methods.contains(&m);
    let mut rows = Vec::new();
    let row = |method: &str, rho, seed, value, cost, t: Instant| CoverageRow {
        budget,
        method: method.to_owned(),
        rho,
        seed,
        value,
        cost,
        wall_ms: t.elapsed().as_millis(),
    };
    let t = Instant::now();
    let needs_lp = cfg.methods.iter().any(|m| {
        matches!(m, CoverMethod::Lp | CoverMethod::Once | CoverMethod::BestOfK | CoverMethod::Derand | CoverMethod::Gradient | CoverMethod::Bound)
    });
    let frac = if needs_lp { Some(solve_cover_lp(&inst)?) } else { None };
    if let Some(f) = &frac {
        if has(CoverMethod::Lp) {
            rows.push(row("lp", None, None, f.w_star, None, t));
        }
        if has(CoverMethod::Bound) {
            rows.push(row("bound", None, None, (1.0 - (-1.0f64).exp()) * f.w_star, None, t));
        }
        if has(CoverMethod::Once) {
            let t = Instant::now();
            rows.push(row("once", None, None, eval_f(&inst, &f.y), None, t));
        }
        if has(CoverMethod::Derand) {
            let t = Instant::now();
            let s = derand_cover(&inst, f)?.solution;
            rows.push(row("derand", None, None, s.value, Some(s.cost), t));
        }
        if has(CoverMethod::Gradient) {
            let t = Instant::now();
            let s = gradient_cover(&inst, f)?.solution;
            rows.push(row("gradient", None, None, s.value, Some(s.cost), t));
        }
    }
    let seeds: Vec<u64> = (0..cfg.seeds).map(|s| cfg.seed_base + s).collect();
    if has(CoverMethod::Greedy) {
        let mut r: Vec<CoverageRow> = seeds
            .par_iter()
            .map(|&seed| {
                let t = Instant::now();
                let s = greedy_cover_permuted(&inst, &mut rng_from_seed(derive_seed(seed, "greedy", 0)));
                row("greedy", None, Some(seed), s.value, Some(s.cost), t)
            })
            .collect();
        rows.append(&mut r);
    }
    if let (true, Some(f)) = (has(CoverMethod::BestOfK), &frac) {
        let name = CoverMode::BestOfK(cfg.k).name();
        let r: Result<Vec<CoverageRow>> = seeds
            .par_iter()
            .map(|&seed| {
                let t = Instant::now();
                let b = best_of_k(&inst, f, cfg.k, &mut rng_from_seed(derive_seed(seed, "best-of-k", 0)))?;
                Ok(row(&name, None, Some(seed), b.best.value, Some(b.best.cost), t))
            })
            .collect();
        rows.append(&mut r?);
    }
    if has(CoverMethod::Hybrid) {
        for &rho in &cfg.rhos {
            for mode in [CoverMode::BestOfK(cfg.k), CoverMode::Derand, CoverMode::Gradient] {
                let name = format!("hybrid-{}", mode.name());
                let runs: &[u64] = if matches!(mode, CoverMode::BestOfK(_)) { &seeds } else { &seeds[..1] };
                let r: Result<Vec<CoverageRow>> = runs
                    .par_iter()
                    .map(|&seed| {
                        let t = Instant::now();
                        let mut rng = rng_from_seed(derive_seed(seed, "hybrid", 0));
                        let h = hybrid_cover(&inst, rho, mode, &mut rng)?;
                        let seed = matches!(mode, CoverMode::BestOfK(_)).then_some(seed);
                        Ok(row(&name, Some(rho), seed, h.solution.value, Some(h.solution.cost), t))
                    })
                    .collect();
                rows.append(&mut r?);
            }
        }
    }
    Ok(rows)
}

/// Runs every method at every budget.
pub fn run_coverage_sweep(cfg: &CoverageConfig) -> Result<CoverageOutput> {
    if cfg.methods.is_empty() {
        bail!("no coverage methods selected");
    }
    if cfg.methods.contains(&CoverMethod::Hybrid) && cfg.rhos.is_empty() {
        bail!("the hybrid needs a --rho-grid");
    }
    if let Some(r) = cfg.rhos.iter().find(|r| !(0.0..1.0).contains(*r)) {
        bail!("greedy fraction {r} is outside [0, 1)");
    }
    let budgets = if cfg.budgets.is_empty() { vec![cfg.instance.budget()] } else { cfg.budgets.clone() };
    let mut rows = Vec::new();
    for &b in &budgets {
        rows.extend(budget_rows(cfg, b)?);
    }
    let hash = instance_hash(&cfg.instance);
    let mut table = ResultTable::new("coverage", COVERAGE_HEADER);
    for r in &rows {
        table.push(vec![
            cfg.name.clone(),
            hash.clone(),
            num(r.budget),
            r.method.clone(),
            r.rho.map_or(String::new(), |v| format!("{v}")),
            r.seed.map_or(String::new(), |s| s.to_string()),
            num(r.value),
            r.cost.map_or(String::new(), num),
            r.wall_ms.to_string(),
        ]);
    }
    Ok(CoverageOutput { rows, table })
}

/// Writes one `budget value` file per method (means over seeds) and a gnuplot
/// script that draws them.
pub fn write_plot_data(out: &CoverageOutput, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let dir = dir.join("plot");
    std::fs::create_dir_all(&dir)?;
    let mut series: std::collections::BTreeMap<String, std::collections::BTreeMap<String, (f64, f64, usize)>> =
        Default::default();
    for r in &out.rows {
        let key = match r.rho {
            Some(rho) => format!("{}-rho{rho}", r.method),
            None => r.method.clone(),
        };
        let e = series.entry(key).or_default().entry(num(r.budget)).or_insert((r.budget, 0.0, 0));
        e.1 += r.value;
        e.2 += 1;
    }
    let mut files = Vec::new();
    let mut script = String::from("set xlabel 'budget'\nset ylabel 'covered weight'\nset key bottom right\nplot \\\n");
    let count = series.len();
    for (i, (name, points)) in series.iter().enumerate() {
        let mut pts: Vec<(f64, f64)> = points.values().map(|&(b, s, n)| (b, s / n as f64)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let body: String = pts.iter().map(|(b, v)| format!("{b} {v}\n")).collect();
        let file = dir.join(format!("{name}.dat"));
        std::fs::write(&file, body)?;
        let sep = if i + 1 < count { ", \\\n" } else { "\n" };
        let _ = write!(script, "  '{name}.dat' using 1:2 with linespoints title '{name}'{sep}");
        files.push(file);
    }
    let gp = dir.join("plot.gp");
    std::fs::write(&gp, script)?;
    files.push(gp);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CoverageConfig {
        let (name, instance) = load_instance("chessboard:1").unwrap();
        CoverageConfig {
            name,
            instance,
            budgets: vec![1.0, 2.0],
            rhos: vec![0.0, 0.5],
            methods: CoverMethod::ALL.to_vec(),
            k: 5,
            seeds: 2,
            seed_base: 7,
        }
    }

    #[test]
    fn sweep_covers_every_method() {
        let out = run_coverage_sweep(&small()).unwrap();
        for m in ["lp", "once", "bound", "derand", "gradient", "greedy", "best-of-5", "hybrid-derand"] {
            assert!(out.rows.iter().any(|r| r.method == m), "{m}");
        }
        let center = out.rows.iter().find(|r| r.method == "derand" && r.budget == 1.0).unwrap();
        assert_eq!(center.value, 9.0);
        assert_eq!(out.table.rows.len(), out.rows.len());
    }

    #[test]
    fn rerun_reproduces_values() {
        let a = run_coverage_sweep(&small()).unwrap();
        let b = run_coverage_sweep(&small()).unwrap();
        let strip = |o: &CoverageOutput| o.rows.iter().map(|r| (r.method.clone(), r.seed, r.value)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn config_validation() {
        let mut cfg = small();
        cfg.methods.clear();
        assert!(run_coverage_sweep(&cfg).is_err());
        let mut cfg = small();
        cfg.rhos = vec![1.0];
        assert!(run_coverage_sweep(&cfg).is_err());
        assert!(load_instance("fpp:4").is_err());
    }

    #[test]
    fn plot_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_coverage_sweep(&small()).unwrap();
        let files = write_plot_data(&out, dir.path()).unwrap();
        let lp = std::fs::read_to_string(dir.path().join("plot/lp.dat")).unwrap();
        assert_eq!(lp.lines().count(), 2);
        assert!(files.iter().any(|f| f.ends_with("plot.gp")));
    }
}
