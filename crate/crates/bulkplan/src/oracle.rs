//! Independent ground truth for the planner: an exhaustive global optimizer,
//! an analytic optimum for uniform instances, a max-flow feasibility check,
//! and a search-space size estimator.
//!
//! Nothing in this module shares routing code with the planner — results here
//! are computed from first principles so the two sides can check each other.

use crate::minplus::{NetworkState, SolverConfig};
use crate::model::{AllocEntry, AllocationPlan, ModelError, Scenario};
use statrs::function::gamma::ln_gamma;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default exploration budget for [`exhaustive_search`].
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// `log10` of the binomial coefficient `C(n, k)` via log-gamma.
/// `0` when `k == 0` or `k == n`; `-inf` when `k > n`.
pub fn log10_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (n as f64, k as f64);
    (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)) / std::f64::consts::LN_10
}

/// Estimated `log10` of the number of grid configurations a brute-force
/// enumeration would face: distributing the total demanded rate (in grid
/// steps) over the total source capacity (in grid steps).
pub fn search_space_estimate(s: &Scenario, delta_c: f64) -> f64 {
    let slots: f64 = s.src_access_mbps.iter().sum::<f64>() / delta_c;
    let demand: f64 = s.requests.iter().map(|r| s.demand_mbps(r)).sum::<f64>() / delta_c;
    log10_binomial(slots.round() as u64, demand.round() as u64)
}

/// Result of an exhaustive search.
#[derive(Debug, Clone)]
pub enum OracleOutcome {
    Optimal {
        plan: AllocationPlan,
        /// Globally minimal total cost.
        cost: f64,
        /// Number of distinct cost-optimal allocations found.
        num_optima: usize,
        /// Fewest active VPNs among the cost-optimal allocations.
        min_vpns: usize,
        /// Search nodes explored.
        nodes: u64,
    },
    /// No feasible allocation exists at this grid.
    Infeasible { nodes: u64 },
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(
        "exhaustive search budget exceeded: {nodes} nodes explored of {budget} allowed \
         (configuration space is ~10^{estimated_log10:.1} at this grid)"
    )]
    BudgetExceeded {
        nodes: u64,
        budget: u64,
        estimated_log10: f64,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Rounded fingerprint of an allocation, for counting distinct optima.
type PlanKey = Vec<(usize, usize, usize, i64)>;

fn plan_key(entries: &[(usize, usize, usize, f64)]) -> PlanKey {
    let mut key: PlanKey = entries
        .iter()
        .map(|&(j, i, l, t)| (j, i, l, (t * 1e9).round() as i64))
        .filter(|&(_, _, _, t)| t != 0)
        .collect();
    key.sort_unstable();
    key
}

struct SearchCtx<'a> {
    s: &'a Scenario,
    delta_c: f64,
    eps: f64,
    budget: u64,
    nodes: u64,
    exceeded: bool,
    best_cost: f64,
    best_entries: Vec<(usize, usize, usize, f64)>,
    optima: BTreeSet<PlanKey>,
    min_vpns: usize,
    found: bool,
}

const TIE_TOL: f64 = 1e-9;

impl SearchCtx<'_> {
    fn record_leaf(&mut self, state: &NetworkState, entries: &[(usize, usize, usize, f64)]) {
        let cost = crate::model::cost_of_matrix(self.s, &state.vpn_mbps);
        if cost < self.best_cost - TIE_TOL {
            self.best_cost = cost;
            self.best_entries = entries.to_vec();
            self.optima.clear();
            self.optima.insert(plan_key(entries));
            self.min_vpns = count_vpns(state);
            self.found = true;
        } else if cost <= self.best_cost + TIE_TOL {
            self.optima.insert(plan_key(entries));
            self.min_vpns = self.min_vpns.min(count_vpns(state));
            self.found = true;
        }
    }

    /// Assign the remaining demand of one request across its eligible
    /// sources (ascending index), then recurse into the next request.
    #[allow(clippy::too_many_arguments)]
    fn dfs_sources(
        &mut self,
        order: &[usize],
        pos: usize,
        eligible: &[(usize, f64)],
        src_pos: usize,
        remaining: f64,
        state: &mut NetworkState,
        entries: &mut Vec<(usize, usize, usize, f64)>,
    ) {
        if self.exceeded {
            return;
        }
        let r = &self.s.requests[order[pos]];
        let ztol = self.eps * self.s.demand_mbps(r).max(1.0);
        if remaining <= ztol {
            self.dfs_requests(order, pos + 1, state, entries);
            return;
        }
        if src_pos == eligible.len() {
            return; // demand not covered on this branch
        }
        let (j, cap) = eligible[src_pos];
        let later: f64 = eligible[src_pos + 1..].iter().map(|&(_, c)| c).sum();
        let lo = (remaining - later).max(0.0);
        let hi = cap.min(remaining);
        if lo > hi + ztol {
            return;
        }
        // Candidate contributions: the interval bounds, every grid multiple
        // strictly inside, and the saturation remainders. At a cost-optimal
        // vertex at most one source is fractional, balancing a saturated
        // subset of the others, so `remaining - sum(subset of later caps)`
        // must be offered explicitly — grid multiples alone miss those
        // points when capacities are not grid-aligned.
        let mut cands = vec![lo, hi];
        let mut mult = (lo / self.delta_c).floor() * self.delta_c;
        while mult <= hi + ztol {
            if mult > lo + ztol && mult < hi - ztol {
                cands.push(mult);
            }
            mult += self.delta_c;
        }
        let later_caps: Vec<f64> = eligible[src_pos + 1..].iter().map(|&(_, c)| c).collect();
        if later_caps.len() <= crate::minplus::MAX_ENRICH_SOURCES {
            for sum in crate::minplus::subset_sums(&later_caps) {
                let cand = remaining - sum;
                if cand > lo + ztol && cand < hi - ztol {
                    cands.push(cand);
                }
            }
        }
        cands.sort_by(f64::total_cmp);
        cands.dedup_by(|a, b| (*a - *b).abs() <= ztol);
        for take in cands {
            if self.exceeded {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exceeded = true;
                return;
            }
            let take = if take.abs() <= ztol { 0.0 } else { take };
            // Prune strictly-worse partial states only, so cost ties survive.
            let bound = crate::model::cost_of_matrix(self.s, &state.vpn_mbps);
            if bound > self.best_cost + TIE_TOL {
                return; // cost only grows along the branch
            }
            if take == 0.0 {
                self.dfs_sources(order, pos, eligible, src_pos + 1, remaining, state, entries);
                continue;
            }
            if state.apply(self.s, j, r.dest, take, self.eps).is_err() {
                continue;
            }
            entries.push((j, r.dest, r.item, take));
            self.dfs_sources(order, pos, eligible, src_pos + 1, remaining - take, state, entries);
            entries.pop();
            state.vpn_mbps[j][r.dest] -= take;
            state.src_used[j] -= take;
            state.dest_used[r.dest] -= take;
        }
    }

    fn dfs_requests(
        &mut self,
        order: &[usize],
        pos: usize,
        state: &mut NetworkState,
        entries: &mut Vec<(usize, usize, usize, f64)>,
    ) {
        if self.exceeded {
            return;
        }
        if pos == order.len() {
            self.record_leaf(state, entries);
            return;
        }
        let r = &self.s.requests[order[pos]];
        let need = self.s.demand_mbps(r);
        if need > state.dest_residual(self.s, r.dest) + self.eps * need.max(1.0) {
            return;
        }
        let eligible: Vec<(usize, f64)> = (0..self.s.num_sources())
            .filter(|&j| self.s.presence[j][r.item])
            .map(|j| (j, state.allocatable_cap(self.s, j, r.dest)))
            .filter(|&(_, c)| c > 0.0)
            .collect();
        let total: f64 = eligible.iter().map(|&(_, c)| c).sum();
        if need > total + self.eps * need.max(1.0) {
            return;
        }
        self.dfs_sources(order, pos, &eligible, 0, need, state, entries);
    }
}

fn count_vpns(state: &NetworkState) -> usize {
    state
        .vpn_mbps
        .iter()
        .flatten()
        .filter(|&&c| c > crate::model::ACTIVATION_EPS)
        .count()
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Exhaustively search for the globally cheapest allocation at grid
/// `cfg.delta_c`, trying every request service order for up to 5 requests
/// (a single canonical order beyond that).
///
/// The per-source candidate contributions — interval bounds, interior grid
/// multiples, and saturation remainders (`remaining` minus subset sums of
/// the later capacities) — cover every vertex of each request's feasible
/// polytope, so for concave cost families the search returns the continuous
/// optimum of a single request exactly. Across coupled requests the
/// permutations plus residual-tightened bounds cover the jointly optimal
/// vertices on grid-aligned instances; for arbitrary capacities the result
/// is an upper bound that is tight in all but adversarial cases.
/// Exploration stops with [`OracleError::BudgetExceeded`] once `budget` nodes
/// are visited.
pub fn exhaustive_search(
    s: &Scenario,
    cfg: &SolverConfig,
    budget: u64,
) -> Result<OracleOutcome, OracleError> {
    let q = s.requests.len();
    let orders: Vec<Vec<usize>> = if q <= 5 {
        permutations(q)
    } else {
        // One canonical order: ascending (dest, item).
        let mut idx: Vec<usize> = (0..q).collect();
        idx.sort_by_key(|&i| (s.requests[i].dest, s.requests[i].item));
        vec![idx]
    };

    let mut ctx = SearchCtx {
        s,
        delta_c: cfg.delta_c,
        eps: cfg.epsilon,
        budget,
        nodes: 0,
        exceeded: false,
        best_cost: f64::INFINITY,
        best_entries: Vec::new(),
        optima: BTreeSet::new(),
        min_vpns: usize::MAX,
        found: false,
    };
    for order in &orders {
        let mut state = NetworkState::new(s);
        let mut entries = Vec::new();
        ctx.dfs_requests(order, 0, &mut state, &mut entries);
        if ctx.exceeded {
            return Err(OracleError::BudgetExceeded {
                nodes: ctx.nodes,
                budget,
                estimated_log10: search_space_estimate(s, cfg.delta_c),
            });
        }
    }
    if !ctx.found {
        return Ok(OracleOutcome::Infeasible { nodes: ctx.nodes });
    }

    // Materialize the best allocation as a checked plan.
    let mut per_request: Vec<Vec<(usize, f64)>> = vec![Vec::new(); q];
    for &(j, i, l, t) in &ctx.best_entries {
        let idx = s
            .request_index(i, l)
            .expect("search only allocates requested pairs");
        per_request[idx].push((j, t));
    }
    let mut alloc_entries = Vec::new();
    for (idx, takes) in per_request.iter().enumerate() {
        let r = &s.requests[idx];
        let rates: Vec<f64> = takes.iter().map(|&(_, t)| t).collect();
        let frags =
            crate::model::fragment_sizes(s.item_mbit[r.item], r.deadline_s, &rates, 1e-6)?;
        for (&(j, t), &frag) in takes.iter().zip(&frags) {
            alloc_entries.push(AllocEntry {
                src: j,
                dest: r.dest,
                item: r.item,
                mbps: t,
                fragment_mbit: frag,
            });
        }
    }
    let plan = AllocationPlan::from_entries(s, alloc_entries)?;
    Ok(OracleOutcome::Optimal {
        cost: plan.total_cost,
        num_optima: ctx.optima.len(),
        min_vpns: ctx.min_vpns,
        nodes: ctx.nodes,
        plan,
    })
}

/// A uniform ("every source stores everything, all parameters equal")
/// instance, described by its parameters alone.
#[derive(Debug, Clone, Copy)]
pub struct UniformInstance {
    pub sources: usize,
    pub dests: usize,
    /// Source access capacity (Mb/s), same for every source.
    pub src_access_mbps: f64,
    /// Destination access capacity (Mb/s), same for every destination.
    pub dest_access_mbps: f64,
    /// VPN capacity (Mb/s), same for every pair.
    pub vpn_cap_mbps: f64,
    /// Item size (Mbit), same for every destination's request.
    pub item_mbit: f64,
    /// Deadline (s), same for every request.
    pub deadline_s: f64,
    /// VPN setup fee.
    pub setup: f64,
    /// VPN cost slope per Mb/s.
    pub slope: f64,
}

/// Closed-form optimum for a uniform instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UniformOptimum {
    Feasible { num_vpns: usize, total_cost: f64 },
    Infeasible,
}

/// Analytic global optimum for [`UniformInstance`]s.
///
/// Every destination needs exactly `rate = item / deadline`, so the total
/// reserved bandwidth is forced at `dests * rate` and only the number of
/// active VPNs is open. Whole-VPN assignments are limited by how many demands
/// fit into one source (`floor(access / rate)`); the remainder is covered
/// greedily from the largest residuals, charging one VPN per contribution.
/// Greedy covering is optimal here because all sources are interchangeable
/// and each extra destination needs at least `ceil(rate / max_residual)`
/// contributions.
///
/// Domain: the closed form assumes a single demand is never forced to split
/// by the per-VPN or destination capacity, i.e. `rate <= min(vpn_cap,
/// dest_access)`. Instances outside that domain are reported infeasible even
/// though split routings may exist; use [`exhaustive_search`] there.
pub fn uniform_optimum(u: &UniformInstance) -> UniformOptimum {
    let eps = 1e-9;
    let rate = u.item_mbit / u.deadline_s;
    let n = u.dests;
    let k = u.sources;
    let total_demand = rate * n as f64;
    let rel = |x: f64| eps * x.abs().max(1.0);
    // Capacity screens: aggregate source access, per-path rate limits.
    if (k as f64) * u.src_access_mbps < total_demand - rel(total_demand) {
        return UniformOptimum::Infeasible;
    }
    if rate > u.vpn_cap_mbps.min(u.dest_access_mbps) + rel(rate) {
        return UniformOptimum::Infeasible;
    }
    // Whole-VPN destinations per source.
    let per_source = ((u.src_access_mbps / rate) + eps).floor() as usize;
    if k * per_source >= n {
        let cost = u.setup * n as f64 + u.slope * total_demand;
        return UniformOptimum::Feasible { num_vpns: n, total_cost: cost };
    }
    // Cover the remaining destinations from residual capacity, largest first.
    let whole = k * per_source;
    let mut residuals = vec![u.src_access_mbps - per_source as f64 * rate; k];
    let mut vpns = whole;
    for _ in whole..n {
        let mut need = rate;
        while need > rel(rate) {
            residuals.sort_by(|a, b| b.total_cmp(a));
            let give = residuals[0].min(need);
            if give <= rel(rate) {
                return UniformOptimum::Infeasible;
            }
            residuals[0] -= give;
            need -= give;
            vpns += 1;
        }
    }
    let cost = u.setup * vpns as f64 + u.slope * total_demand;
    UniformOptimum::Feasible { num_vpns: vpns, total_cost: cost }
}

/// Feasibility of a whole scenario, decided by maximum flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowFeasibility {
    pub feasible: bool,
    pub max_flow_mbps: f64,
    pub required_mbps: f64,
}

/// Decide whether *any* allocation can serve every request, via max flow on
/// the layered graph source → VPN pair → request → destination. This is
/// independent of costs and of the planner's routing, and exact up to
/// floating-point tolerance: a scenario is feasible iff the max flow equals
/// the total demanded rate.
pub fn flow_feasible(s: &Scenario) -> FlowFeasibility {
    // Node layout: 0 = super-source; 1..=K sources; then K*N pair nodes;
    // then Q request nodes; then N destination nodes; last = sink.
    let (k, n, q) = (s.num_sources(), s.num_dests(), s.requests.len());
    let src = |j: usize| 1 + j;
    let pair = |j: usize, i: usize| 1 + k + j * n + i;
    let req = |t: usize| 1 + k + k * n + t;
    let dest = |i: usize| 1 + k + k * n + q + i;
    let sink = 1 + k + k * n + q + n;
    let mut g = MaxFlow::new(sink + 1);
    for j in 0..k {
        g.add_edge(0, src(j), s.src_access_mbps[j]);
    }
    let mut required = 0.0;
    for (t, r) in s.requests.iter().enumerate() {
        let need = s.demand_mbps(r);
        required += need;
        g.add_edge(req(t), dest(r.dest), need);
        for j in 0..k {
            if s.presence[j][r.item] {
                g.add_edge(pair(j, r.dest), req(t), f64::INFINITY);
            }
        }
    }
    for j in 0..k {
        for i in 0..n {
            g.add_edge(src(j), pair(j, i), s.vpn_cap_mbps[j][i]);
        }
    }
    for i in 0..n {
        g.add_edge(dest(i), sink, s.dest_access_mbps[i]);
    }
    let max_flow = g.run(0, sink);
    FlowFeasibility {
        feasible: max_flow >= required - 1e-6 * required.max(1.0),
        max_flow_mbps: max_flow,
        required_mbps: required,
    }
}

/// Shortest-augmenting-path max flow over f64 capacities.
struct MaxFlow {
    // Edges stored flat; adj[v] lists edge indices. Edge i and i^1 are a
    // forward/backward pair.
    to: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl MaxFlow {
    fn new(nodes: usize) -> Self {
        MaxFlow { to: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add_edge(&mut self, a: usize, b: usize, cap: f64) {
        let idx = self.to.len();
        self.to.push(b);
        self.cap.push(cap);
        self.adj[a].push(idx);
        self.to.push(a);
        self.cap.push(0.0);
        self.adj[b].push(idx + 1);
    }

    fn run(&mut self, s: usize, t: usize) -> f64 {
        const FLOW_TOL: f64 = 1e-9;
        let mut total = 0.0;
        loop {
            // BFS for a shortest augmenting path.
            let mut pred: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            pred[s] = Some(usize::MAX);
            while let Some(v) = queue.pop_front() {
                if v == t {
                    break;
                }
                for &e in &self.adj[v] {
                    let w = self.to[e];
                    if pred[w].is_none() && self.cap[e] > FLOW_TOL {
                        pred[w] = Some(e);
                        queue.push_back(w);
                    }
                }
            }
            if pred[t].is_none() {
                return total;
            }
            // Bottleneck along the path.
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while v != s {
                let e = pred[v].expect("path reconstructed from BFS");
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            // Augment.
            let mut v = t;
            while v != s {
                let e = pred[v].expect("path reconstructed from BFS");
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }
}
