//! Homogeneous content-distribution study: sweep the fleet size and the
//! delivery deadline, and compare the planner against the closed-form
//! optimum on every cell.
//!
//! Run with: `cargo run --release -p bulkplan --example solve_cinema_grid`

use bulkplan::oracle::{uniform_optimum, UniformOptimum};
use bulkplan::scenario::{gen_uniform, UniformParams};
use bulkplan::{solve, Criterion, SolverConfig};

fn main() {
    let cfg = SolverConfig::default();
    println!("20 destinations, one 200 GB item each, 150 Mb/s VPN and destination caps\n");
    println!("{:<10} {:>10} {:>16} {:>16} {:>8}", "sources", "deadline", "optimum", "planner", "gap");
    for sources in [2usize, 3, 4] {
        for deadline_h in [3.0f64, 4.0, 5.0, 6.0] {
            let p = UniformParams { sources, deadline_h, ..UniformParams::default() };
            let analytic = uniform_optimum(&p.instance());
            let planned = solve(&gen_uniform(&p), Criterion::SizeDesc, &cfg);
            let row = match (analytic, planned) {
                (UniformOptimum::Infeasible, Err(_)) => {
                    format!("{:>16} {:>16} {:>8}", "infeasible", "infeasible", "-")
                }
                (UniformOptimum::Feasible { num_vpns, total_cost }, Ok((plan, _))) => {
                    let raw_gap = (plan.total_cost - total_cost) / total_cost * 100.0;
                    let gap = if raw_gap.abs() < 1e-6 { 0.0 } else { raw_gap };
                    format!(
                        "{:>10.4} ({:>2}v) {:>10.4} ({:>2}v) {:>7.3}%",
                        total_cost, num_vpns, plan.total_cost, plan.num_vpns, gap
                    )
                }
                (analytic, planned) => unreachable!(
                    "oracle and planner must agree on feasibility: {analytic:?} vs {}",
                    planned.is_ok()
                ),
            };
            println!("{sources:<10} {deadline_h:>8} h {row}");
        }
    }
    println!("\nreading: cost (active VPNs). The two infeasible cells need more");
    println!("aggregate source capacity than two 1000 Mb/s sources can offer.");
}
