//! Monte-Carlo comparison of scheduling criteria on the heterogeneous
//! scenario family.
//!
//! For each sample the harness generates a demand draw (shared catalog,
//! per-sample demand stream), decides ground-truth feasibility with the
//! max-flow oracle, and — when feasible — runs the planner once per
//! scheduling criterion. Infeasible samples are counted and excluded; a
//! planner failure on a *feasible* sample is recorded against that criterion.
//! Summary statistics (means, coefficient of variation, win rates against
//! the random order) are computed over the samples where every criterion
//! succeeded, so all criteria face identical workloads.
//!
//! Samples run in parallel; results are indexed by sample, so repeated runs
//! with the same configuration produce identical output regardless of thread
//! scheduling.

use crate::minplus::{FailurePolicy, SolverConfig};
use crate::oracle::flow_feasible;
use crate::scenario::{gen_heterogeneous, HetParams};
use crate::scheduling::Criterion;
use crate::solver::solve;
use rayon::prelude::*;

/// Monte-Carlo harness configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub samples: usize,
    pub seed: u64,
    /// Criteria to compare. The random order is always included as the
    /// baseline, whether listed or not.
    pub criteria: Vec<Criterion>,
    pub solver: SolverConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            samples: 100,
            seed: 0,
            criteria: Criterion::all().to_vec(),
            solver: SolverConfig::default(),
        }
    }
}

/// Per-criterion summary over the compared samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionStats {
    pub name: String,
    pub symbol: String,
    pub mean_cost: f64,
    /// Sample standard deviation of the cost.
    pub std_cost: f64,
    /// Coefficient of variation: `std_cost / mean_cost`.
    pub cv: f64,
    pub mean_vpns: f64,
    /// Fraction of compared samples won against the random baseline, ties
    /// counting one half.
    pub win_rate_vs_rand: f64,
    /// Mean of `(rand_cost - cost) / rand_cost` over compared samples.
    pub mean_rel_gain_vs_rand: f64,
    /// Planner failures on feasible samples.
    pub failures: usize,
}

/// Aggregate statistics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchStats {
    pub samples_total: usize,
    /// Samples the max-flow oracle proved infeasible.
    pub samples_infeasible: usize,
    /// Feasible samples where every criterion produced a plan.
    pub samples_compared: usize,
    pub per_criterion: Vec<CriterionStats>,
}

/// Full outcome of a Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub criteria: Vec<Criterion>,
    /// Ground-truth feasibility per sample.
    pub feasible: Vec<bool>,
    /// `costs[criterion][sample]`; `None` on infeasible samples and failures.
    pub costs: Vec<Vec<Option<f64>>>,
    /// `vpns[criterion][sample]`, same shape.
    pub vpns: Vec<Vec<Option<usize>>>,
    pub stats: BenchStats,
}

pub(crate) fn compute_stats(
    criteria: &[Criterion],
    feasible: &[bool],
    costs: &[Vec<Option<f64>>],
    vpns: &[Vec<Option<usize>>],
) -> BenchStats {
    let total = feasible.len();
    let infeasible = feasible.iter().filter(|&&f| !f).count();
    let compared: Vec<usize> = (0..total)
        .filter(|&i| feasible[i] && costs.iter().all(|c| c[i].is_some()))
        .collect();
    let rand_idx = criteria
        .iter()
        .position(|c| *c == Criterion::Random)
        .expect("the random baseline is always present");
    let mut per_criterion = Vec::with_capacity(criteria.len());
    for (ci, crit) in criteria.iter().enumerate() {
        let vals: Vec<f64> = compared
            .iter()
            .map(|&i| costs[ci][i].expect("compared samples have every cost"))
            .collect();
        let n = vals.len();
        let mean = if n > 0 { vals.iter().sum::<f64>() / n as f64 } else { 0.0 };
        let std = if n > 1 {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mean_vpns = if n > 0 {
            compared
                .iter()
                .map(|&i| vpns[ci][i].expect("compared samples have every plan") as f64)
                .sum::<f64>()
                / n as f64
        } else {
            0.0
        };
        let mut score = 0.0;
        let mut gain = 0.0;
        for &i in &compared {
            let c = costs[ci][i].expect("compared");
            let r = costs[rand_idx][i].expect("compared");
            if (c - r).abs() <= 1e-9 {
                score += 0.5;
            } else if c < r {
                score += 1.0;
            }
            gain += (r - c) / r;
        }
        let failures = (0..total)
            .filter(|&i| feasible[i] && costs[ci][i].is_none())
            .count();
        per_criterion.push(CriterionStats {
            name: crit.cli_name().to_string(),
            symbol: crit.symbol().to_string(),
            mean_cost: mean,
            std_cost: std,
            cv: if mean > 0.0 { std / mean } else { 0.0 },
            mean_vpns,
            win_rate_vs_rand: if n > 0 { score / n as f64 } else { 0.0 },
            mean_rel_gain_vs_rand: if n > 0 { gain / n as f64 } else { 0.0 },
            failures,
        });
    }
    BenchStats {
        samples_total: total,
        samples_infeasible: infeasible,
        samples_compared: compared.len(),
        per_criterion,
    }
}

/// Run the Monte-Carlo comparison.
pub fn monte_carlo(p: &HetParams, cfg: &BenchConfig) -> BenchRun {
    let mut criteria = cfg.criteria.clone();
    if !criteria.contains(&Criterion::Random) {
        criteria.push(Criterion::Random);
    }
    // (feasible, per-criterion (cost, vpns)) per sample, in sample order.
    type SampleRow = (bool, Vec<Option<(f64, usize)>>);
    let rows: Vec<SampleRow> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|sample| {
            let s = gen_heterogeneous(p, cfg.seed, sample);
            if !flow_feasible(&s).feasible {
                return (false, vec![None; criteria.len()]);
            }
            let results = criteria
                .iter()
                .map(|&crit| {
                    let solver = SolverConfig {
                        policy: FailurePolicy::Abort,
                        seed: cfg.seed.wrapping_add(sample),
                        ..cfg.solver.clone()
                    };
                    solve(&s, crit, &solver)
                        .ok()
                        .map(|(plan, _)| (plan.total_cost, plan.num_vpns))
                })
                .collect();
            (true, results)
        })
        .collect();

    let feasible: Vec<bool> = rows.iter().map(|(f, _)| *f).collect();
    let mut costs = vec![vec![None; cfg.samples]; criteria.len()];
    let mut vpns = vec![vec![None; cfg.samples]; criteria.len()];
    for (i, (_, results)) in rows.iter().enumerate() {
        for (ci, r) in results.iter().enumerate() {
            if let Some((c, v)) = r {
                costs[ci][i] = Some(*c);
                vpns[ci][i] = Some(*v);
            }
        }
    }
    let stats = compute_stats(&criteria, &feasible, &costs, &vpns);
    BenchRun { criteria, feasible, costs, vpns, stats }
}

/// Empirical CDF of `values`: ascending `(value, P(X <= value))` steps with
/// duplicate values merged into the highest step.
pub fn cdf_estimate(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (idx, v) in sorted.into_iter().enumerate() {
        let p = (idx + 1) as f64 / n as f64;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = p,
            _ => out.push((v, p)),
        }
    }
    out
}

/// CSV of per-criterion cost CDFs over the compared samples:
/// `scheduler,cost,prob`.
pub fn write_cdf_csv(run: &BenchRun) -> String {
    let compared: Vec<usize> = (0..run.feasible.len())
        .filter(|&i| run.feasible[i] && run.costs.iter().all(|c| c[i].is_some()))
        .collect();
    let mut out = String::from("scheduler,cost,prob\n");
    for (ci, crit) in run.criteria.iter().enumerate() {
        let vals: Vec<f64> = compared
            .iter()
            .map(|&i| run.costs[ci][i].expect("compared samples have every cost"))
            .collect();
        if vals.is_empty() {
            continue;
        }
        for (v, p) in cdf_estimate(&vals) {
            out.push_str(&format!("{},{:.6},{:.6}\n", crit.cli_name(), v, p));
        }
    }
    out
}

/// CSV of the summary table:
/// `scheduler,mean_cost,cv,mean_vpns,win_rate_vs_rand`.
pub fn write_summary_csv(stats: &BenchStats) -> String {
    let mut out = String::from("scheduler,mean_cost,cv,mean_vpns,win_rate_vs_rand\n");
    for c in &stats.per_criterion {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6}\n",
            c.name, c.mean_cost, c.cv, c.mean_vpns, c.win_rate_vs_rand
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_single_value() {
        assert_eq!(cdf_estimate(&[5.0]), vec![(5.0, 1.0)]);
    }

    #[test]
    fn cdf_distinct_values() {
        let cdf = cdf_estimate(&[3.0, 1.0, 4.0, 2.0]);
        assert_eq!(cdf, vec![(1.0, 0.25), (2.0, 0.5), (3.0, 0.75), (4.0, 1.0)]);
    }

    #[test]
    fn cdf_merges_duplicates_to_the_top_step() {
        let cdf = cdf_estimate(&[2.0, 2.0, 2.0]);
        assert_eq!(cdf, vec![(2.0, 1.0)]);
        let cdf = cdf_estimate(&[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(cdf, vec![(1.0, 0.25), (2.0, 0.75), (3.0, 1.0)]);
    }

    #[test]
    fn stats_from_hand_built_run() {
        let criteria = vec![Criterion::SizeDesc, Criterion::Random];
        let feasible = vec![true, true, true, false];
        let costs = vec![
            vec![Some(2.0), Some(4.0), Some(3.0), None],
            vec![Some(3.0), Some(4.0), Some(6.0), None],
        ];
        let vpns = vec![
            vec![Some(2), Some(4), Some(3), None],
            vec![Some(3), Some(4), Some(6), None],
        ];
        let stats = compute_stats(&criteria, &feasible, &costs, &vpns);
        assert_eq!(stats.samples_total, 4);
        assert_eq!(stats.samples_infeasible, 1);
        assert_eq!(stats.samples_compared, 3);
        let sd = &stats.per_criterion[0];
        assert!((sd.mean_cost - 3.0).abs() < 1e-12);
        assert!((sd.std_cost - 1.0).abs() < 1e-12);
        assert!((sd.cv - 1.0 / 3.0).abs() < 1e-12);
        assert!((sd.mean_vpns - 3.0).abs() < 1e-12);
        // Wins on samples 0 and 2, ties on 1: (1 + 0.5 + 1) / 3.
        assert!((sd.win_rate_vs_rand - 2.5 / 3.0).abs() < 1e-12);
        // Gains: 1/3, 0, 1/2 -> mean 5/18.
        assert!((sd.mean_rel_gain_vs_rand - 5.0 / 18.0).abs() < 1e-12);
        let rand = &stats.per_criterion[1];
        assert_eq!(rand.win_rate_vs_rand, 0.5, "the baseline ties itself");
        assert_eq!(rand.mean_rel_gain_vs_rand, 0.0);
    }

    #[test]
    fn failures_are_counted_per_criterion() {
        let criteria = vec![Criterion::SizeDesc, Criterion::Random];
        let feasible = vec![true, true];
        let costs = vec![vec![Some(2.0), None], vec![Some(3.0), Some(4.0)]];
        let vpns = vec![vec![Some(2), None], vec![Some(3), Some(4)]];
        let stats = compute_stats(&criteria, &feasible, &costs, &vpns);
        assert_eq!(stats.samples_compared, 1);
        assert_eq!(stats.per_criterion[0].failures, 1);
        assert_eq!(stats.per_criterion[1].failures, 0);
    }

    /// Small, always-feasible heterogeneous family for smoke tests: demands
    /// are light against the capacities.
    fn easy_params() -> HetParams {
        HetParams {
            sources: 3,
            dests: 3,
            catalog_size: 6,
            copies_per_item: 2,
            items_per_dest: 1,
            ..HetParams::default()
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_and_complete() {
        let p = easy_params();
        let cfg = BenchConfig {
            samples: 12,
            seed: 3,
            criteria: vec![Criterion::SizeDesc],
            ..BenchConfig::default()
        };
        let a = monte_carlo(&p, &cfg);
        let b = monte_carlo(&p, &cfg);
        assert_eq!(a.stats, b.stats, "repeat runs must agree exactly");
        assert_eq!(a.criteria.len(), 2, "the random baseline joins automatically");
        assert_eq!(a.stats.samples_total, 12);
        assert_eq!(a.stats.samples_infeasible, 0, "light demands always fit");
        assert_eq!(a.stats.samples_compared, 12);
        for c in &a.stats.per_criterion {
            assert_eq!(c.failures, 0);
            assert!(c.mean_cost > 0.0);
        }
    }

    #[test]
    fn csv_outputs_are_well_formed() {
        let p = easy_params();
        let cfg = BenchConfig {
            samples: 6,
            seed: 1,
            criteria: vec![Criterion::SizeDesc],
            ..BenchConfig::default()
        };
        let run = monte_carlo(&p, &cfg);
        let cdf = write_cdf_csv(&run);
        let mut lines = cdf.lines();
        assert_eq!(lines.next(), Some("scheduler,cost,prob"));
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 3, "bad CDF row: {line}");
            fields[1].parse::<f64>().unwrap();
            let p: f64 = fields[2].parse().unwrap();
            assert!((0.0..=1.0).contains(&p));
        }
        let summary = write_summary_csv(&run.stats);
        let mut lines = summary.lines();
        assert_eq!(
            lines.next(),
            Some("scheduler,mean_cost,cv,mean_vpns,win_rate_vs_rand")
        );
        assert_eq!(lines.count(), run.criteria.len());
    }
}
