//! Command-line interface: `gen | validate | solve | oracle | bench`.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` infeasible (or an
//! invalid scenario in `validate`), `3` exhaustive-search budget refusal.
//!
//! Machine-readable results (scenario JSON, plan JSON, comparison lines) go
//! to stdout or `--out`; human-facing progress goes to stderr.

use crate::bench::{monte_carlo, write_cdf_csv, write_summary_csv, BenchConfig};
use crate::io::{plan_from_json, plan_to_json, round_money, scenario_from_json, scenario_to_json};
use crate::minplus::{FailurePolicy, SolverConfig};
use crate::model::{check_plan_constraints, validate_scenario, Scenario};
use crate::oracle::{exhaustive_search, OracleError, OracleOutcome, DEFAULT_NODE_BUDGET};
use crate::scenario::{gen_heterogeneous, gen_uniform, CostVariant, HetParams, UniformParams};
use crate::scheduling::Criterion;
use crate::solver::{solve, SolveError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "bulkplan",
    version,
    about = "Minimum-cost VPN bandwidth planning for deadline-constrained bulk transfers"
)]
struct Cli {
    /// Convolution grid step in Mb/s.
    #[arg(long = "dc", global = true, default_value_t = 1.0)]
    dc: f64,
    /// Seed for scenario generation and the random scheduler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reaction to an unroutable request.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Abort)]
    policy: PolicyArg,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Fail the run on the first unroutable request.
    Abort,
    /// Leave unroutable requests unserved and report them.
    Skip,
}

impl From<PolicyArg> for FailurePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Abort => FailurePolicy::Abort,
            PolicyArg::Skip => FailurePolicy::SkipAndReport,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Uniform content-distribution instance (deterministic).
    Uniform,
    /// Randomized heterogeneous instance.
    Het,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a scenario and write it as JSON.
    Gen(GenArgs),
    /// Validate a scenario JSON file (and optionally a plan against it).
    Validate(ValidateArgs),
    /// Plan a scenario with one scheduling criterion (or all of them).
    Solve(SolveArgs),
    /// Exhaustively search for the global optimum (small instances).
    Oracle(OracleArgs),
    /// Monte-Carlo comparison of scheduling criteria.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Uniform)]
    family: FamilyArg,
    /// Cost layout for the heterogeneous family: 1|2|3.
    #[arg(long, default_value = "1")]
    variant: String,
    #[arg(long, default_value_t = 4)]
    sources: usize,
    #[arg(long, default_value_t = 20)]
    dests: usize,
    /// Shared deadline in hours (uniform family).
    #[arg(long = "tau-h", default_value_t = 3.0)]
    tau_h: f64,
    /// Demand sample index (heterogeneous family).
    #[arg(long, default_value_t = 0)]
    sample: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    scenario: PathBuf,
    /// Also check this plan against the scenario's constraint system.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    scenario: PathBuf,
    /// Scheduling criterion by CLI name, or `all` to compare every one.
    #[arg(long, default_value = "d_desc")]
    scheduler: String,
    /// Attach a per-cycle log to the report.
    #[arg(long)]
    log: bool,
    /// Output file for the plan JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    scenario: PathBuf,
    /// Node budget before the search refuses.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Also run the planner and print the optimality gap.
    #[arg(long)]
    compare: bool,
    /// Scheduling criterion for --compare.
    #[arg(long, default_value = "d_desc")]
    scheduler: String,
    /// Output file for the optimal plan JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Cost layout: 1|2|3.
    #[arg(long, default_value = "1")]
    variant: String,
    /// Comma-separated criterion names, or `all`.
    #[arg(long, default_value = "all")]
    schedulers: String,
    /// Directory receiving cdf.csv and summary.csv.
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
}

/// Parse argv, dispatch, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; usage problems are exit 1 here.
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let cfg = SolverConfig {
        delta_c: cli.dc,
        policy: cli.policy.into(),
        seed: cli.seed,
        ..SolverConfig::default()
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a, cli.seed),
        Cmd::Validate(a) => cmd_validate(a),
        Cmd::Solve(a) => cmd_solve(a, &cfg),
        Cmd::Oracle(a) => cmd_oracle(a, &cfg),
        Cmd::Bench(a) => cmd_bench(a, &cfg),
    };
    match result {
        Ok(()) => 0,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

type CmdResult = Result<(), (i32, String)>;

fn read_scenario(path: &PathBuf) -> Result<Scenario, (i32, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (1, format!("cannot read {}: {e}", path.display())))?;
    scenario_from_json(&text).map_err(|e| (1, format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| (1, format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_schedulers(spec: &str) -> Result<Vec<Criterion>, (i32, String)> {
    if spec == "all" {
        return Ok(Criterion::all().to_vec());
    }
    spec.split(',')
        .map(|name| name.trim().parse::<Criterion>().map_err(|e| (1, e)))
        .collect()
}

fn cmd_gen(a: GenArgs, seed: u64) -> CmdResult {
    let s = match a.family {
        FamilyArg::Uniform => gen_uniform(&UniformParams {
            sources: a.sources,
            dests: a.dests,
            deadline_h: a.tau_h,
            ..UniformParams::default()
        }),
        FamilyArg::Het => {
            let variant: CostVariant = a.variant.parse().map_err(|e| (1, e))?;
            gen_heterogeneous(
                &HetParams {
                    sources: a.sources,
                    dests: a.dests,
                    variant,
                    ..HetParams::default()
                },
                seed,
                a.sample,
            )
        }
    };
    emit(&a.out, &scenario_to_json(&s))
}

fn cmd_validate(a: ValidateArgs) -> CmdResult {
    let s = read_scenario(&a.scenario)?;
    let report = validate_scenario(&s);
    for v in &report.violations {
        println!("scenario: {v}");
    }
    let mut bad = !report.is_valid();
    if let Some(plan_path) = &a.plan {
        let text = std::fs::read_to_string(plan_path)
            .map_err(|e| (1, format!("cannot read {}: {e}", plan_path.display())))?;
        let plan = plan_from_json(&s, &text)
            .map_err(|e| (1, format!("{}: {e}", plan_path.display())))?;
        let violations = check_plan_constraints(&s, &plan, 1e-9)
            .map_err(|e| (1, format!("plan/scenario mismatch: {e}")))?;
        for v in &violations {
            println!("plan: {v}");
        }
        bad |= !violations.is_empty();
    }
    if bad {
        Err((2, "validation failed".into()))
    } else {
        println!("ok");
        Ok(())
    }
}

fn solve_or_exit(
    s: &Scenario,
    crit: Criterion,
    cfg: &SolverConfig,
) -> Result<(crate::model::AllocationPlan, crate::solver::SolveReport), (i32, String)> {
    solve(s, crit, cfg).map_err(|e| match e {
        SolveError::Infeasible { .. } => (2, e.to_string()),
        other => (1, other.to_string()),
    })
}

fn cmd_solve(a: SolveArgs, cfg: &SolverConfig) -> CmdResult {
    let s = read_scenario(&a.scenario)?;
    let cfg = SolverConfig { keep_cycle_log: a.log, ..cfg.clone() };
    if a.scheduler == "all" {
        let mut best: Option<(Criterion, crate::model::AllocationPlan)> = None;
        for crit in Criterion::all() {
            let (plan, report) = solve_or_exit(&s, crit, &cfg)?;
            println!(
                "{} {:.6} {} served={} skipped={}",
                crit.cli_name(),
                round_money(plan.total_cost),
                plan.num_vpns,
                report.served,
                report.skipped.len()
            );
            let better = match &best {
                None => true,
                Some((_, b)) => plan.total_cost < b.total_cost - 1e-9,
            };
            if better {
                best = Some((crit, plan));
            }
        }
        if let Some(out) = &a.out {
            let (crit, plan) = best.expect("eleven criteria ran");
            let (_, report) = solve_or_exit(&s, crit, &cfg)?;
            let report_json = serde_json::to_value(&report)
                .map_err(|e| (1, format!("report serialization: {e}")))?;
            emit(&Some(out.clone()), &plan_to_json(&plan, Some(report_json)))?;
        }
        return Ok(());
    }
    let crit: Criterion = a.scheduler.parse().map_err(|e| (1, e))?;
    let (plan, report) = solve_or_exit(&s, crit, &cfg)?;
    eprintln!(
        "scheduler={} cost={:.6} vpns={} served={} skipped={} wall_ms={:.2}",
        crit.cli_name(),
        round_money(plan.total_cost),
        plan.num_vpns,
        report.served,
        report.skipped.len(),
        report.wall_time_ms
    );
    let report_json =
        serde_json::to_value(&report).map_err(|e| (1, format!("report serialization: {e}")))?;
    emit(&a.out, &plan_to_json(&plan, Some(report_json)))
}

fn cmd_oracle(a: OracleArgs, cfg: &SolverConfig) -> CmdResult {
    let s = read_scenario(&a.scenario)?;
    let outcome = exhaustive_search(&s, cfg, a.budget).map_err(|e| match e {
        OracleError::BudgetExceeded { .. } => (3, e.to_string()),
        other => (1, other.to_string()),
    })?;
    match outcome {
        OracleOutcome::Infeasible { nodes } => {
            Err((2, format!("no feasible allocation exists ({nodes} nodes explored)")))
        }
        OracleOutcome::Optimal { plan, cost, num_optima, min_vpns, nodes } => {
            println!(
                "optimum cost={:.6} vpns={} distinct_optima={} min_vpns={} nodes={}",
                round_money(cost),
                plan.num_vpns,
                num_optima,
                min_vpns,
                nodes
            );
            if a.compare {
                let crit: Criterion = a.scheduler.parse().map_err(|e| (1, e))?;
                let (heur, _) = solve_or_exit(&s, crit, cfg)?;
                let gap = if cost > 0.0 { (heur.total_cost - cost) / cost * 100.0 } else { 0.0 };
                println!(
                    "planner scheduler={} cost={:.6} vpns={} gap_pct={:.4}",
                    crit.cli_name(),
                    round_money(heur.total_cost),
                    heur.num_vpns,
                    gap
                );
            }
            if a.out.is_some() {
                emit(&a.out, &plan_to_json(&plan, None))?;
            }
            Ok(())
        }
    }
}

fn cmd_bench(a: BenchArgs, cfg: &SolverConfig) -> CmdResult {
    let variant: CostVariant = a.variant.parse().map_err(|e| (1, e))?;
    let criteria = parse_schedulers(&a.schedulers)?;
    let params = HetParams { variant, ..HetParams::default() };
    let bench_cfg = BenchConfig {
        samples: a.samples,
        seed: cfg.seed,
        criteria,
        solver: cfg.clone(),
    };
    let run = monte_carlo(&params, &bench_cfg);
    eprintln!(
        "samples={} infeasible={} compared={}",
        run.stats.samples_total, run.stats.samples_infeasible, run.stats.samples_compared
    );
    print!("{}", write_summary_csv(&run.stats));
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| (1, format!("cannot create {}: {e}", a.out_dir.display())))?;
    let cdf_path = a.out_dir.join("cdf.csv");
    let summary_path = a.out_dir.join("summary.csv");
    std::fs::write(&cdf_path, write_cdf_csv(&run))
        .map_err(|e| (1, format!("cannot write {}: {e}", cdf_path.display())))?;
    std::fs::write(&summary_path, write_summary_csv(&run.stats))
        .map_err(|e| (1, format!("cannot write {}: {e}", summary_path.display())))?;
    Ok(())
}
