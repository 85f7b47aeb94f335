//! Monte-Carlo comparison of the scheduling criteria on the randomized
//! heterogeneous family: mean cost, spread, and win rate against the random
//! baseline, plus a slice of the cost CDF.
//!
//! Run with: `cargo run --release -p bulkplan --example scheduler_benchmark`

use bulkplan::bench::{cdf_estimate, monte_carlo, BenchConfig};
use bulkplan::scenario::HetParams;

fn main() {
    let params = HetParams::default(); // 4 sources, 20 destinations, 40 requests
    let cfg = BenchConfig { samples: 300, seed: 1, ..BenchConfig::default() };
    let run = monte_carlo(&params, &cfg);
    let st = &run.stats;

    println!(
        "{} samples: {} infeasible (flow oracle), {} compared across all criteria\n",
        st.samples_total, st.samples_infeasible, st.samples_compared
    );
    println!(
        "{:<10} {:>10} {:>8} {:>10} {:>9} {:>9}",
        "criterion", "mean cost", "cv", "mean VPNs", "win-rate", "gain"
    );
    for c in &st.per_criterion {
        println!(
            "{:<10} {:>10.3} {:>8.4} {:>10.2} {:>8.1}% {:>8.2}%",
            c.name,
            c.mean_cost,
            c.cv,
            c.mean_vpns,
            c.win_rate_vs_rand * 100.0,
            c.mean_rel_gain_vs_rand * 100.0
        );
    }

    // The cost distribution of the best informed criterion vs the baseline.
    let best = st
        .per_criterion
        .iter()
        .filter(|c| c.name != "rand")
        .min_by(|a, b| a.mean_cost.total_cmp(&b.mean_cost))
        .expect("criteria present");
    let idx = run.criteria.iter().position(|c| c.cli_name() == best.name).expect("listed");
    let vals: Vec<f64> = run.costs[idx].iter().flatten().copied().collect();
    println!("\ncost CDF of `{}` (every 10th point):", best.name);
    for (cost, prob) in cdf_estimate(&vals).iter().step_by(10) {
        let bar = "#".repeat((prob * 40.0).round() as usize);
        println!("  {cost:>8.2}  {prob:>5.2}  {bar}");
    }
}
