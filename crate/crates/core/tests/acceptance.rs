//! Acceptance suite. Runs every criterion, prints one `PASS`/`FAIL` line per
//! criterion and exits non-zero if any failed.
//!
//! Built with `harness = false` so the lines appear without `--nocapture`.
//! The conditional br818 check reads its point file from `DEROUND_BR818`.

use deround::instances::{gen_chessboard, gen_fpp, gen_routing_instance, read_points, DemandMode};
use deround::lp::IlpOptions;
use deround::maxcov::{
    best_of_k, derand_cover, eval_f, grad_f, gradient_cover, greedy_cover, greedy_cover_permuted, hybrid_cover,
    solve_cover_ilp, solve_cover_lp, CoverMode, CoverageInstance, CoverageOracle,
};
use deround::ptas::{build_udg, ptas_solve, PointSet};
use deround::rng::{rng_from_seed, StdRng};
use deround::rounding::{
    preserves_groups, round_bitwise, round_budget_preserving, round_tree, RoundingProblem, DEFAULT_PRECISION_BITS,
};
use deround::routing::{run_seed, RoutingMethod, RunOptions, SeedReport};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

const CHESS_RUNTIME: Duration = Duration::from_secs(30);
const FPP_RUNTIME: Duration = Duration::from_secs(300);
const ROUTING_RUNTIME: Duration = Duration::from_secs(900);

const CHESS_OPT: f64 = 144.0;
const CHESS_GREEDY_MEAN: (f64, f64) = (124.0, 136.0);
const FPP_GREEDY: f64 = 290.0;
const FPP_DERAND_MIN: f64 = 210.0;
const FPP_F_RANGE: (f64, f64) = (180.0, 230.0);

const ROUNDING_PROBLEMS: usize = 50;
const ROUNDING_TRIALS: usize = 100_000;
const MARGINAL_SE: f64 = 4.0;

const ROUTING_SEEDS: u64 = 100;
const OPT_MEAN_RANGE: (f64, f64) = (3.0, 3.8);
const RR_FACTOR: f64 = 1.25;
const SLACK_TOL: f64 = 1e-6;

const F_TOL: f64 = 1e-9;
const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-6;
const FLOOR_TOL: f64 = 1e-6;

const BR818_D: f64 = 400.0;
const BR818_L: usize = 30;
const BR818_OPT: f64 = 28709.0;
const BR818_GREEDY_MEAN: (f64, f64) = (27800.0, 28300.0);
const BR818_GRADIENT: (f64, f64) = (28200.0, 28709.0);

struct Outcome {
    pass: bool,
    skipped: bool,
    detail: String,
}

#[derive(Default)]
struct Report {
    lines: BTreeMap<u32, (String, Outcome)>,
    /// Unit-cost runs as `(label, derand value, W*)`, checked by criterion 8.
    floor_runs: Vec<(String, f64, f64)>,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        println!("[{}] {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.insert(id, (name.into(), Outcome { pass, skipped: false, detail }));
    }

    fn skip(&mut self, id: u32, name: &str, detail: String) {
        println!("[SKIP] {id:>2} {name}: {detail}");
        self.lines.insert(id, (name.into(), Outcome { pass: true, skipped: true, detail }));
    }
}

fn in_range(v: f64, (lo, hi): (f64, f64)) -> bool {
    lo <= v && v <= hi
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn chessboard(rep: &mut Report) {
    let start = Instant::now();
    let inst = gen_chessboard(4);
    let frac = solve_cover_lp(&inst).unwrap();
    let mut fails = Vec::new();
    if (frac.w_star - CHESS_OPT).abs() > 1e-6 {
        fails.push(format!("W* = {}", frac.w_star));
    }
    let derand = derand_cover(&inst, &frac).unwrap().solution.value;
    let gradient = gradient_cover(&inst, &frac).unwrap().solution.value;
    for _ in 0..3 {
        if derand_cover(&inst, &frac).unwrap().solution.value != derand {
            fails.push("derand not reproducible".into());
        }
    }
    if derand != CHESS_OPT {
        fails.push(format!("derand {derand}"));
    }
    if gradient != CHESS_OPT {
        fails.push(format!("gradient {gradient}"));
    }
    let integral = frac.y.iter().all(|&v| v.min(1.0 - v).abs() < 1e-9);
    let problem = RoundingProblem::new(frac.y.clone(), vec![(0..inst.num_sets()).collect()]).unwrap();
    let mut worst_rounding = f64::INFINITY;
    for seed in 0..20 {
        let mut rng = rng_from_seed(seed);
        for bits in [
            round_tree(&problem, &mut rng).unwrap().bits,
            round_bitwise(&problem, &mut rng, DEFAULT_PRECISION_BITS).unwrap().bits,
        ] {
            let chosen: Vec<usize> = (0..bits.len()).filter(|&j| bits[j] == 1).collect();
            worst_rounding = worst_rounding.min(inst.value(&chosen));
        }
    }
    if worst_rounding != CHESS_OPT {
        fails.push(format!("rounding of y* reached {worst_rounding} (y* integral: {integral})"));
    }
    let greedy_mean = mean((0..100).map(|s| greedy_cover_permuted(&inst, &mut rng_from_seed(s)).value));
    if !in_range(greedy_mean, CHESS_GREEDY_MEAN) {
        fails.push(format!("greedy mean {greedy_mean}"));
    }
    let elapsed = start.elapsed();
    if elapsed > CHESS_RUNTIME {
        fails.push(format!("runtime {elapsed:?}"));
    }
    rep.floor_runs.push(("chessboard k=4".into(), derand, frac.w_star));
    rep.record(
        1,
        "chessboard exactness",
        fails.is_empty(),
        format!(
            "W*={:.3} derand={derand} gradient={gradient} rounding(y*) min={worst_rounding} greedy mean={greedy_mean:.2} \
             in {elapsed:.1?}{}",
            frac.w_star,
            failures(&fails)
        ),
    );
}

fn failures(fails: &[String]) -> String {
    if fails.is_empty() {
        String::new()
    } else {
        format!(" | failed: {}", fails.join("; "))
    }
}

fn fpp(rep: &mut Report) {
    let start = Instant::now();
    let inst = gen_fpp(17).unwrap();
    let frac = solve_cover_lp(&inst).unwrap();
    let f_star = eval_f(&inst, &frac.y);
    let greedy = greedy_cover(&inst).value;
    let gradient = gradient_cover(&inst, &frac).unwrap().solution.value;
    let derand = derand_cover(&inst, &frac).unwrap().solution.value;
    let elapsed = start.elapsed();
    let mut fails = Vec::new();
    if greedy != FPP_GREEDY {
        fails.push(format!("greedy {greedy}"));
    }
    if gradient != FPP_GREEDY {
        fails.push(format!("gradient {gradient}"));
    }
    if derand < FPP_DERAND_MIN {
        fails.push(format!("derand {derand}"));
    }
    if !in_range(f_star, FPP_F_RANGE) {
        fails.push(format!("F(y*) {f_star}"));
    }
    if elapsed > FPP_RUNTIME {
        fails.push(format!("runtime {elapsed:?}"));
    }
    rep.floor_runs.push(("fpp q=17".into(), derand, frac.w_star));
    rep.record(
        2,
        "FPP behavior",
        fails.is_empty(),
        format!(
            "W*={:.3} F(y*)={f_star:.3} greedy={greedy} gradient={gradient} derand={derand} in {elapsed:.1?}{}",
            frac.w_star,
            failures(&fails)
        ),
    );
}

/// Values in `[0, 1]` summing to the integer `total`, spread by random transfers.
fn spread(m: usize, total: usize, rng: &mut StdRng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|i| if i < total { 1.0 } else { 0.0 }).collect();
    v.shuffle(rng);
    if m < 2 {
        return v;
    }
    for _ in 0..3 * m {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i == j {
            continue;
        }
        // Move mass from j to i within the box.
        let room = (1.0 - v[i]).min(v[j]);
        let t = rng.gen::<f64>() * room;
        v[i] += t;
        v[j] -= t;
    }
    v
}

fn random_rounding_problem(rng: &mut StdRng) -> RoundingProblem {
    let n = rng.gen_range(1..=200);
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let groups = rng.gen_range(0..=10usize.min(n));
    let mut cuts: Vec<usize> = (0..groups).map(|_| rng.gen_range(0..=n)).collect();
    cuts.sort_unstable();
    let mut lo = 0;
    let mut out = Vec::new();
    for hi in cuts {
        let members: Vec<usize> = order[lo..hi].to_vec();
        lo = hi;
        if members.is_empty() {
            continue;
        }
        let total = rng.gen_range(0..=members.len());
        for (&i, v) in members.iter().zip(spread(members.len(), total, rng)) {
            values[i] = v;
        }
        out.push(members);
    }
    RoundingProblem::new(values, out).unwrap()
}

fn rounding_contracts(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = rng_from_seed(3);
    let mut group_violations = 0usize;
    let mut marginal_misses = Vec::new();
    let mut checked = 0usize;
    let mut worst_z: f64 = 0.0;
    for p in 0..ROUNDING_PROBLEMS {
        let problem = random_rounding_problem(&mut rng);
        for (label, bitwise) in [("tree", false), ("bitwise", true)] {
            let mut counts = vec![0u64; problem.len()];
            let mut trial_rng = rng_from_seed(1000 + p as u64 * 2 + u64::from(bitwise));
            for _ in 0..ROUNDING_TRIALS {
                let r = if bitwise {
                    round_bitwise(&problem, &mut trial_rng, DEFAULT_PRECISION_BITS)
                } else {
                    round_tree(&problem, &mut trial_rng)
                }
                .unwrap();
                if !preserves_groups(&problem, &r.bits) {
                    group_violations += 1;
                }
                for (c, &b) in counts.iter_mut().zip(&r.bits) {
                    *c += u64::from(b);
                }
            }
            for (i, (&c, &target)) in counts.iter().zip(problem.values()).enumerate() {
                checked += 1;
                let emp = c as f64 / ROUNDING_TRIALS as f64;
                let se = (target * (1.0 - target) / ROUNDING_TRIALS as f64).sqrt();
                let dev = (emp - target).abs();
                let ok = if se == 0.0 { dev == 0.0 } else { dev <= MARGINAL_SE * se };
                if se > 0.0 {
                    worst_z = worst_z.max(dev / se);
                }
                if !ok {
                    marginal_misses.push(format!("{label} problem {p} index {i}: {emp} vs {target}"));
                }
            }
        }
    }
    let pass = group_violations == 0 && marginal_misses.is_empty();
    rep.record(
        3,
        "rounding contracts",
        pass,
        format!(
            "{} trials, {group_violations} group violations, {checked} marginals, worst |z|={worst_z:.2} (limit \
             {MARGINAL_SE}), {} misses{} in {:.1?}",
            2 * ROUNDING_PROBLEMS * ROUNDING_TRIALS,
            marginal_misses.len(),
            marginal_misses.first().map(|m| format!(" (first: {m})")).unwrap_or_default(),
            start.elapsed()
        ),
    );
}

fn routing(rep: &mut Report) {
    let start = Instant::now();
    let opts = RunOptions::default();
    let reports: Vec<SeedReport> = (0..ROUTING_SEEDS)
        .map(|seed| run_seed(&gen_routing_instance(5, 5, 10, DemandMode::Fixed3, seed), &opts).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let m = |method: RoutingMethod| mean(reports.iter().map(|r| r.congestion(method).unwrap()));
    let opt = m(RoutingMethod::Opt);
    let rr_tree = m(RoutingMethod::RrTree);
    let rr_bit = m(RoutingMethod::RrBitwise);
    let rr_plus = m(RoutingMethod::RrPlus);
    let de_tree = m(RoutingMethod::DerandTree);
    let de_plus = m(RoutingMethod::DerandPlus);
    let unproven = reports.iter().filter(|r| !r.opt_proven).count();
    let checks = [
        (in_range(opt, OPT_MEAN_RANGE), format!("OPT mean {opt:.3} in [{}, {}]", OPT_MEAN_RANGE.0, OPT_MEAN_RANGE.1)),
        (rr_tree <= RR_FACTOR * opt, format!("RR-tree {rr_tree:.3} <= {:.3}", RR_FACTOR * opt)),
        (rr_bit <= RR_FACTOR * opt, format!("RR-bitwise {rr_bit:.3} <= {:.3}", RR_FACTOR * opt)),
        (de_tree <= rr_tree, format!("DeRR-tree {de_tree:.3} <= RR-tree")),
        (de_plus <= de_tree, format!("DeRR+ {de_plus:.3} <= DeRR-tree")),
        (rr_plus <= rr_bit, format!("RR+ {rr_plus:.3} <= RR-bitwise")),
        (unproven == 0, format!("{unproven} unproven optima")),
        (elapsed <= ROUTING_RUNTIME, format!("runtime {elapsed:.1?}")),
    ];
    let pass = checks.iter().all(|c| c.0);
    let detail: Vec<String> = checks.iter().map(|(ok, s)| if *ok { s.clone() } else { format!("NOT {s}") }).collect();
    rep.record(4, "routing ordering", pass, detail.join(", "));

    let mut worst: f64 = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for r in &reports {
        match r.slack_max_load {
            Some(load) => {
                worst = worst.max(load - r.c_star);
                if load > r.c_star + SLACK_TOL {
                    bad.push(r.seed);
                }
            }
            None => bad.push(r.seed),
        }
    }
    rep.record(
        5,
        "slack-LP soundness",
        bad.is_empty(),
        format!("max(load - C*) = {worst:.2e} over {} seeds, violations on seeds {bad:?}", reports.len()),
    );
}

fn random_instance(rng: &mut StdRng, max_sets: usize, max_elems: usize, unit: bool) -> CoverageInstance {
    let n = rng.gen_range(1..=max_sets);
    let m = rng.gen_range(1..=max_elems);
    let density = rng.gen_range(0.1..0.5);
    let sets: Vec<Vec<usize>> = (0..n).map(|_| (0..m).filter(|_| rng.gen_bool(density)).collect()).collect();
    let weights: Vec<f64> = (0..m).map(|_| f64::from(rng.gen_range(1..=9u32))).collect();
    if unit {
        let budget = rng.gen_range(1..=n) as f64;
        CoverageInstance::unit_cost(sets, weights, budget).unwrap()
    } else {
        let costs: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(1..=5u32))).collect();
        let total: f64 = costs.iter().sum();
        let budget = f64::from(rng.gen_range(1..=total as u32));
        CoverageInstance::new(sets, costs, weights, budget).unwrap()
    }
}

fn budget_rounding_contract(rep: &mut Report) {
    let mut rng = rng_from_seed(6);
    let mut fails = Vec::new();
    let mut worst_slack = f64::NEG_INFINITY;
    for t in 0..100 {
        let inst = random_instance(&mut rng, 50, 60, false);
        let costs = inst.costs();
        // Random fractional points inside the budget; every fifth one is the LP optimum.
        let y: Vec<f64> = if t % 5 == 0 {
            solve_cover_lp(&inst).unwrap().y
        } else {
            let raw: Vec<f64> = (0..inst.num_sets()).map(|_| rng.gen()).collect();
            let spend: f64 = raw.iter().zip(costs).map(|(y, c)| y * c).sum();
            let scale = (inst.budget() / spend).min(1.0) * rng.gen_range(0.5..1.0);
            raw.iter().map(|v| v * scale).collect()
        };
        let oracle = CoverageOracle { instance: &inst };
        let r = round_budget_preserving(&y, costs, inst.budget(), &oracle).unwrap();
        let bound = inst.budget() + inst.max_cost();
        worst_slack = worst_slack.max(r.cost - bound);
        if r.cost > bound {
            fails.push(format!("instance {t}: cost {} > {bound}", r.cost));
        }
        let before = eval_f(&inst, &y);
        let after = eval_f(&inst, &r.result.as_f64());
        let tol = F_TOL * before.max(1.0);
        if after < before - tol {
            fails.push(format!("instance {t}: F {after} < {before}"));
        }
        if r.trace.windows(2).any(|w| w[1] < w[0] - tol) {
            fails.push(format!("instance {t}: trace decreases"));
        }
    }
    rep.record(
        6,
        "budget rounding contract",
        fails.is_empty(),
        format!("100 instances, max(cost - (L + max c)) = {worst_slack}{}", failures(&fails)),
    );
}

fn gradient_check(rep: &mut Report) {
    let mut rng = rng_from_seed(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let unit = rng.gen_bool(0.5);
        let inst = random_instance(&mut rng, 30, 40, unit);
        let y: Vec<f64> = (0..inst.num_sets()).map(|_| rng.gen_range(FD_STEP..1.0 - FD_STEP)).collect();
        let g = grad_f(&inst, &y);
        for j in 0..y.len() {
            let mut hi = y.clone();
            let mut lo = y.clone();
            hi[j] += FD_STEP;
            lo[j] -= FD_STEP;
            let fd = (eval_f(&inst, &hi) - eval_f(&inst, &lo)) / (2.0 * FD_STEP);
            // Relative error, with partials below 1e-3 measured absolutely at that scale.
            worst = worst.max((fd - g[j]).abs() / g[j].abs().max(1e-3));
        }
    }
    rep.record(
        7,
        "gradient correctness",
        worst <= FD_REL_TOL,
        format!("worst relative error {worst:.2e} (limit {FD_REL_TOL:e}) on 100 pairs"),
    );
}

fn approximation_floor(rep: &mut Report) {
    let factor = 1.0 - (-1.0f64).exp();
    let bad: Vec<&(String, f64, f64)> =
        rep.floor_runs.iter().filter(|(_, v, w)| *v < factor * w - FLOOR_TOL).collect();
    let worst = rep.floor_runs.iter().map(|(_, v, w)| if *w > 0.0 { v / w } else { 1.0 }).fold(f64::INFINITY, f64::min);
    let detail = format!(
        "{} unit-cost runs, min derand/W* = {worst:.4} (floor {factor:.4}){}",
        rep.floor_runs.len(),
        bad.first().map(|b| format!(" | failed: {} ({} < {})", b.0, b.1, factor * b.2)).unwrap_or_default()
    );
    rep.record(8, "approximation floor", bad.is_empty(), detail);
}

fn ptas_bound(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = rng_from_seed(9);
    let mut fails = Vec::new();
    let mut worst_ratio = [f64::INFINITY; 2];
    for t in 0..20 {
        let n = rng.gen_range(10..=60);
        let side = rng.gen_range(3.0..8.0);
        let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(0.0..side), rng.gen_range(0.0..side)]).collect();
        let points = PointSet::new(coords, vec![1.0; n], 1.0).unwrap();
        let budget = rng.gen_range(1..=4usize);
        let udg = build_udg(&points, budget as f64).unwrap();
        let exact = solve_cover_ilp(&udg, &IlpOptions::default()).unwrap();
        let opt = exact.solution.value;
        if !exact.proven {
            fails.push(format!("set {t}: ILP not proven"));
        }
        for (slot, ell) in [3usize, 5].into_iter().enumerate() {
            let r = ptas_solve(&points, budget, ell).unwrap();
            let v = r.solution.value;
            let floor = (1.0 - 2.0 / ell as f64) * opt;
            if opt > 0.0 {
                worst_ratio[slot] = worst_ratio[slot].min(v / opt);
            }
            if v < floor - 1e-9 || v > opt + 1e-9 || r.solution.cost > budget as f64 {
                fails.push(format!("set {t} ell {ell}: value {v}, OPT {opt}, cost {}", r.solution.cost));
            }
        }
    }
    rep.record(
        9,
        "PTAS bound",
        fails.is_empty(),
        format!(
            "20 point sets, min value/OPT: ell=3 {:.3} (floor 0.333), ell=5 {:.3} (floor 0.600) in {:.1?}{}",
            worst_ratio[0],
            worst_ratio[1],
            start.elapsed(),
            failures(&fails)
        ),
    );
}

fn hybrid(rep: &mut Report) {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, inst, target) in [
        ("chessboard", gen_chessboard(4), CHESS_OPT),
        ("fpp", gen_fpp(17).unwrap(), FPP_GREEDY),
    ] {
        for mode in [CoverMode::BestOfK(1000), CoverMode::Derand, CoverMode::Gradient] {
            let v = hybrid_cover(&inst, 0.3, mode, &mut rng_from_seed(10)).unwrap().solution.value;
            pass &= v == target;
            parts.push(format!("{name}/{}={v}", mode.name()));
        }
    }
    rep.record(10, "hybrid recovery", pass, parts.join(" "));
}

/// Best value over all subsets within budget.
fn enumerate(inst: &CoverageInstance) -> f64 {
    let n = inst.num_sets();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        if inst.cost(&chosen) <= inst.budget() + 1e-9 {
            best = best.max(inst.value(&chosen));
        }
    }
    best
}

fn small_oracle(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = rng_from_seed(11);
    let mut fails = Vec::new();
    for t in 0..200 {
        let unit = t % 2 == 0;
        let inst = random_instance(&mut rng, 15, 20, unit);
        let best = enumerate(&inst);
        let exact = solve_cover_ilp(&inst, &IlpOptions::default()).unwrap();
        if exact.solution.value != best || !exact.solution.within_budget(&inst) {
            fails.push(format!("instance {t}: ILP {} vs enumeration {best}", exact.solution.value));
        }
        let frac = solve_cover_lp(&inst).unwrap();
        let derand = derand_cover(&inst, &frac).unwrap().solution;
        if unit {
            rep.floor_runs.push((format!("small instance {t}"), derand.value, frac.w_star));
        }
        let mut method_rng = rng_from_seed(100 + t);
        let outputs = [
            ("greedy", greedy_cover(&inst)),
            ("greedy-permuted", greedy_cover_permuted(&inst, &mut method_rng)),
            ("derand", derand),
            ("gradient", gradient_cover(&inst, &frac).unwrap().solution),
            ("best-of-k", best_of_k(&inst, &frac, 50, &mut method_rng).unwrap().best),
            ("hybrid", hybrid_cover(&inst, 0.3, CoverMode::Derand, &mut method_rng).unwrap().solution),
        ];
        for (name, s) in outputs {
            if s.value > best || !s.within_budget(&inst) {
                fails.push(format!("instance {t}: {name} value {} cost {} vs {best}", s.value, s.cost));
            }
        }
        if frac.w_star < best - 1e-6 {
            fails.push(format!("instance {t}: LP {} below enumeration {best}", frac.w_star));
        }
    }
    rep.record(
        11,
        "small-instance oracle equivalence",
        fails.is_empty(),
        format!("200 instances in {:.1?}{}", start.elapsed(), failures(&fails)),
    );
}

fn br818(rep: &mut Report) {
    let name = "br818 targets";
    let Some(path) = std::env::var_os("DEROUND_BR818") else {
        rep.skip(12, name, "DEROUND_BR818 not set, point file absent".into());
        return;
    };
    let text = std::fs::read_to_string(&path).unwrap();
    let (coords, profits) = read_points(&text).unwrap();
    let points = PointSet::new(coords, profits, BR818_D).unwrap();
    let inst = build_udg(&points, BR818_L as f64).unwrap();
    let exact = solve_cover_ilp(&inst, &IlpOptions::default().with_time_limit(Duration::from_secs(3600))).unwrap();
    let greedy_mean = mean((0..100).map(|s| greedy_cover_permuted(&inst, &mut rng_from_seed(s)).value));
    let frac = solve_cover_lp(&inst).unwrap();
    let gradient = gradient_cover(&inst, &frac).unwrap().solution.value;
    let pass = exact.proven
        && exact.solution.value == BR818_OPT
        && in_range(greedy_mean, BR818_GREEDY_MEAN)
        && in_range(gradient, BR818_GRADIENT);
    rep.record(
        12,
        name,
        pass,
        format!(
            "ILP {} (proven {}), greedy mean {greedy_mean:.1}, gradient {gradient}",
            exact.solution.value, exact.proven
        ),
    );
}

fn main() {
    let mut rep = Report::default();
    chessboard(&mut rep);
    fpp(&mut rep);
    rounding_contracts(&mut rep);
    routing(&mut rep);
    budget_rounding_contract(&mut rep);
    gradient_check(&mut rep);
    ptas_bound(&mut rep);
    hybrid(&mut rep);
    small_oracle(&mut rep);
    approximation_floor(&mut rep);
    br818(&mut rep);

    println!("\nacceptance summary");
    let mut failed = 0;
    for (id, (name, o)) in &rep.lines {
        println!("  {:>2} {:<36} {}", id, name, match (o.pass, o.skipped) {
            (_, true) => "SKIP",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        });
        if !o.pass {
            failed += 1;
            eprintln!("criterion {id} ({name}) failed: {}", o.detail);
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
