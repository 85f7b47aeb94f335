//! Exhaustive search vs the planner on an instance small enough to brute
//! force: the global optimum, how many distinct optimal allocations exist,
//! and where the greedy heuristic lands.
//!
//! Run with: `cargo run -p bulkplan --example oracle_check`

use bulkplan::oracle::{exhaustive_search, search_space_estimate, OracleOutcome};
use bulkplan::scenario::{gen_uniform, UniformParams};
use bulkplan::{solve, Criterion, SolverConfig};

fn main() {
    // Two sources, two destinations, one 200 GB item per destination.
    let params = UniformParams { sources: 2, dests: 2, ..UniformParams::default() };
    let scenario = gen_uniform(&params);
    // A coarse 10 Mb/s grid keeps the search tiny; capacities and demands
    // stay where they are, so the optimum is still exact (the candidate set
    // covers every vertex of the allocation polytope).
    let cfg = SolverConfig { delta_c: 10.0, ..SolverConfig::default() };

    println!(
        "search space at this grid: ~10^{:.1} raw configurations",
        search_space_estimate(&scenario, cfg.delta_c)
    );

    match exhaustive_search(&scenario, &cfg, 10_000_000).expect("small enough to finish") {
        OracleOutcome::Optimal { plan, cost, num_optima, min_vpns, nodes } => {
            println!("exhaustive search visited {nodes} nodes (pruning does the real work)");
            println!(
                "global optimum: cost {cost:.6}, {} VPNs ({num_optima} distinct optimal \
                 allocations, fewest VPNs among them: {min_vpns})",
                plan.num_vpns
            );
            for e in &plan.entries {
                println!(
                    "  source {} -> destination {}: {:>8.3} Mb/s of item {}",
                    e.src, e.dest, e.mbps, e.item
                );
            }
            let (heur, _) = solve(&scenario, Criterion::SizeDesc, &cfg).expect("feasible");
            let gap = (heur.total_cost - cost) / cost * 100.0;
            println!(
                "planner:        cost {:.6}, {} VPNs — gap {gap:.4}%",
                heur.total_cost, heur.num_vpns
            );
        }
        OracleOutcome::Infeasible { nodes } => {
            println!("no feasible allocation exists ({nodes} nodes explored)");
        }
    }
}
