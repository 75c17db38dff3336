use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use deround::instances::{convert_facility, gen_chessboard, gen_fpp, gen_routing_instance, read_points, DemandMode, FacilityFormat};
use deround::ptas::{ptas_solve, PointSet};
use deround::routing::RoutingMethod;
use deround_bench::table::{num, PTAS_HEADER};
use deround_bench::{
    load_instance, run_coverage_sweep, run_routing_table, write_plot_data, ConfigFile, CoverMethod, CoverageConfig,
    GridSize, IlpMode, ResultTable, RoutingConfig,
};
use std::path::{Path, PathBuf};
use std::time::Duration;

#[derive(Parser)]
#[command(name = "deround", version, about = "Dependent rounding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Congestion of every routing method over random grid instances.
    RoutingTable(RoutingArgs),
    /// Max-coverage methods over a budget and greedy-fraction grid.
    CoverageSweep(CoverageArgs),
    /// Shifted-grid approximation on a point file.
    Ptas(PtasArgs),
    /// Writes a generated instance as JSON.
    Gen(GenArgs),
    /// Converts facility-location data to max-coverage JSON.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct Common {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV and plot files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (all cores by default).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct RoutingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    seed_base: Option<u64>,
    /// Comma-separated grid sizes such as `5x5,6x6`.
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated request counts.
    #[arg(long)]
    k: Option<String>,
    /// `fixed3` or `u1-5`.
    #[arg(long)]
    demands: Option<DemandMode>,
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated method names (`OPT,RR-tree,...`).
    #[arg(long)]
    methods: Option<String>,
    /// `internal`, `external` or `off`.
    #[arg(long)]
    ilp: Option<IlpMode>,
    /// Seconds per exact solve.
    #[arg(long)]
    ilp_time_limit: Option<f64>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    common: Common,
    /// `chessboard:K`, `fpp:Q` or a JSON instance file.
    #[arg(long)]
    instance: Option<String>,
    /// Comma-separated budgets (the instance budget by default).
    #[arg(long)]
    budget: Option<String>,
    /// Comma-separated greedy fractions for the hybrid.
    #[arg(long)]
    rho_grid: Option<String>,
    /// Comma-separated method names (`lp,once,best-of-k,derand,gradient,greedy,hybrid,bound`).
    #[arg(long)]
    methods: Option<String>,
    /// Trials per best-of-k run.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    seed_base: Option<u64>,
}

#[derive(Args)]
struct PtasArgs {
    #[command(flatten)]
    common: Common,
    /// File of `x y profit` lines.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Adjacency distance.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    /// Comma-separated shifting parameters.
    #[arg(long)]
    ell: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    /// `chessboard`, `fpp` or `routing`.
    kind: String,
    /// Board parameter or plane order.
    size: Option<u64>,
    #[arg(long)]
    grid: Option<GridSize>,
    /// Number of routing requests.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    demands: Option<DemandMode>,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Output file (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    file: PathBuf,
    /// `points` or `ufllib`.
    #[arg(long)]
    format: FacilityFormat,
    #[arg(long)]
    threshold: f64,
    /// Divide stored distances by customer demand first.
    #[arg(long)]
    descale: bool,
    #[arg(long)]
    budget: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(common: &Common) -> Result<ConfigFile> {
    common.config.as_deref().map_or(Ok(ConfigFile::default()), ConfigFile::load)
}

fn setup_threads(common: &Common, file: &ConfigFile) -> Result<()> {
    if let Some(n) = file.pick(common.threads, "threads")? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn out_dir(common: &Common, file: &ConfigFile) -> Result<Option<PathBuf>> {
    file.pick(common.out.clone(), "out")
}

fn print_table(t: &ResultTable) -> Result<()> {
    print!("{}", t.to_csv()?);
    Ok(())
}

fn routing(args: RoutingArgs) -> Result<()> {
    let file = load_config(&args.common)?;
    setup_threads(&args.common, &file)?;
    let mut cfg = RoutingConfig::default();
    if let Some(v) = file.pick_list(args.grid, "grid")? {
        cfg.grids = v;
    }
    if let Some(v) = file.pick_list(args.k, "k")? {
        cfg.ks = v;
    }
    if let Some(v) = file.pick(args.demands, "demands")? {
        cfg.demands = v;
    }
    if let Some(v) = file.pick(args.seeds, "seeds")? {
        cfg.seeds = v;
    }
    if let Some(v) = file.pick(args.seed_base, "seed-base")? {
        cfg.seed_base = v;
    }
    if let Some(v) = file.pick(args.delta, "delta")? {
        cfg.delta = v;
    }
    if let Some(v) = file.pick_list::<RoutingMethod>(args.methods, "methods")? {
        cfg.methods = v;
    }
    if let Some(v) = file.pick(args.ilp, "ilp")? {
        cfg.ilp = v;
    }
    if let Some(v) = file.pick(args.ilp_time_limit, "ilp-time-limit")? {
        cfg.ilp_time_limit = Some(Duration::from_secs_f64(v));
    }
    let out = out_dir(&args.common, &file)?;
    cfg.model_dir = out.as_ref().map(|d| d.join("models"));
    let res = run_routing_table(&cfg)?;
    print_table(&res.summary)?;
    if let Some(dir) = out {
        res.seeds.write_to(&dir)?;
        res.summary.write_to(&dir)?;
    }
    Ok(())
}

fn coverage(args: CoverageArgs) -> Result<()> {
    let file = load_config(&args.common)?;
    setup_threads(&args.common, &file)?;
    let spec: String = file.pick(args.instance, "instance")?.context("--instance is required")?;
    let (name, instance) = load_instance(&spec)?;
    let rhos: Vec<f64> = file.pick_list(args.rho_grid, "rho-grid")?.unwrap_or_default();
    // The hybrid is part of the default list only when fractions are given.
    let default_methods = CoverMethod::ALL.into_iter().filter(|m| *m != CoverMethod::Hybrid || !rhos.is_empty()).collect();
    let cfg = CoverageConfig {
        name,
        instance,
        budgets: file.pick_list(args.budget, "budget")?.unwrap_or_default(),
        rhos,
        methods: file.pick_list::<CoverMethod>(args.methods, "methods")?.unwrap_or(default_methods),
        k: file.pick(args.k, "k")?.unwrap_or(1000),
        seeds: file.pick(args.seeds, "seeds")?.unwrap_or(1),
        seed_base: file.pick(args.seed_base, "seed-base")?.unwrap_or(0),
    };
    let res = run_coverage_sweep(&cfg)?;
    print_table(&res.table)?;
    if let Some(dir) = out_dir(&args.common, &file)? {
        res.table.write_to(&dir)?;
        write_plot_data(&res, &dir)?;
    }
    Ok(())
}

fn ptas(args: PtasArgs) -> Result<()> {
    let file = load_config(&args.common)?;
    setup_threads(&args.common, &file)?;
    let path: PathBuf = file.pick(args.points, "points")?.context("--points is required")?;
    let d: f64 = file.pick(args.d, "d")?.context("--d is required")?;
    let budget: usize = file.pick(args.budget, "budget")?.context("--budget is required")?;
    let ells: Vec<usize> = file.pick_list(args.ell, "ell")?.unwrap_or_else(|| vec![3]);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let (coords, profits) = read_points(&text)?;
    let points = PointSet::new(coords, profits, d)?;
    let mut table = ResultTable::new("ptas", PTAS_HEADER);
    for ell in ells {
        let r = ptas_solve(&points, budget, ell)?;
        let best = r.shifts.iter().find(|s| s.solution == r.solution).expect("best shift is listed");
        table.push(vec![
            path.display().to_string(),
            num(d),
            budget.to_string(),
            ell.to_string(),
            best.shift.0.to_string(),
            best.shift.1.to_string(),
            best.subgrids.to_string(),
            num(r.solution.value),
            num(r.solution.cost),
        ]);
    }
    print_table(&table)?;
    if let Some(dir) = out_dir(&args.common, &file)? {
        table.write_to(&dir)?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let text = match args.kind.as_str() {
        "chessboard" => gen_chessboard(args.size.context("board parameter missing")? as usize).to_json(),
        "fpp" => gen_fpp(args.size.context("plane order missing")?)?.to_json(),
        "routing" => {
            let g = args.grid.unwrap_or(GridSize { width: 5, height: 5 });
            let inst = gen_routing_instance(
                g.width,
                g.height,
                args.k.unwrap_or(10),
                args.demands.unwrap_or(DemandMode::Fixed3),
                args.seed_base,
            );
            inst.to_json()
        }
        other => bail!("unknown instance kind `{other}` (expected chessboard, fpp or routing)"),
    };
    emit(args.out.as_deref(), &text)
}

fn convert(args: ConvertArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let inst = convert_facility(&text, args.format, args.threshold, args.descale, args.budget)
        .with_context(|| format!("converting {}", args.file.display()))?;
    emit(args.out.as_deref(), &inst.to_json())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::RoutingTable(a) => routing(a),
        Command::CoverageSweep(a) => coverage(a),
        Command::Ptas(a) => ptas(a),
        Command::Gen(a) => gen(a),
        Command::Convert(a) => convert(a),
    }
}
