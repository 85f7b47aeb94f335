//! Request scheduling criteria: which request the solver serves next.
//!
//! The solver serves one request per cycle. Because routing is greedy, the
//! service order changes the final cost on heterogeneous instances, so the
//! order itself is a policy choice. Criteria come in two kinds:
//!
//! * **static** — a fixed priority computed once from the scenario (item
//!   size, required rate, or a seeded random shuffle);
//! * **dynamic** — re-scored every cycle against the *current* network state
//!   (number of live sources still able to send the item, their combined
//!   residual upload capacity, or that capacity normalized by the request's
//!   required rate).
//!
//! All ties break toward ascending `(dest, item)`, making every criterion a
//! total, deterministic order. Scoring work is instrumented: static sorts
//! count comparator calls, the shuffle counts one operation per element, and
//! dynamic selection counts one operation per (pending request, source) pair
//! per cycle.

use crate::minplus::NetworkState;
use crate::model::Scenario;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A request-ordering criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Largest item first.
    SizeDesc,
    /// Smallest item first.
    SizeAsc,
    /// Highest required rate first.
    DemandDesc,
    /// Lowest required rate first.
    DemandAsc,
    /// Seeded uniform shuffle.
    Random,
    /// Most live sources first (dynamic).
    LiveSourcesDesc,
    /// Fewest live sources first (dynamic).
    LiveSourcesAsc,
    /// Largest combined residual source capacity first (dynamic).
    SourceBandwidthDesc,
    /// Smallest combined residual source capacity first (dynamic).
    SourceBandwidthAsc,
    /// Largest residual-capacity-to-demand ratio first (dynamic).
    NormBandwidthDesc,
    /// Smallest residual-capacity-to-demand ratio first (dynamic).
    NormBandwidthAsc,
}

impl Criterion {
    /// Every criterion, in CLI listing order.
    pub fn all() -> [Criterion; 11] {
        use Criterion::*;
        [
            SizeDesc,
            SizeAsc,
            DemandDesc,
            DemandAsc,
            Random,
            LiveSourcesDesc,
            LiveSourcesAsc,
            SourceBandwidthDesc,
            SourceBandwidthAsc,
            NormBandwidthDesc,
            NormBandwidthAsc,
        ]
    }

    /// Stable command-line name.
    pub fn cli_name(&self) -> &'static str {
        use Criterion::*;
        match self {
            SizeDesc => "d_desc",
            SizeAsc => "d_asc",
            DemandDesc => "cbw_desc",
            DemandAsc => "cbw_asc",
            Random => "rand",
            LiveSourcesDesc => "n_desc",
            LiveSourcesAsc => "n_asc",
            SourceBandwidthDesc => "c_desc",
            SourceBandwidthAsc => "c_asc",
            NormBandwidthDesc => "cnorm_desc",
            NormBandwidthAsc => "cnorm_asc",
        }
    }

    /// Short symbol for plots and tables.
    pub fn symbol(&self) -> &'static str {
        use Criterion::*;
        match self {
            SizeDesc => "D_d",
            SizeAsc => "D_a",
            DemandDesc => "C_d",
            DemandAsc => "C_a",
            Random => "R",
            LiveSourcesDesc => "N_d",
            LiveSourcesAsc => "N_a",
            SourceBandwidthDesc => "S_d",
            SourceBandwidthAsc => "S_a",
            NormBandwidthDesc => "Sn_d",
            NormBandwidthAsc => "Sn_a",
        }
    }

    /// Dynamic criteria re-score pending requests every cycle.
    pub fn is_dynamic(&self) -> bool {
        use Criterion::*;
        matches!(
            self,
            LiveSourcesDesc
                | LiveSourcesAsc
                | SourceBandwidthDesc
                | SourceBandwidthAsc
                | NormBandwidthDesc
                | NormBandwidthAsc
        )
    }
}

impl std::str::FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Criterion::all()
            .into_iter()
            .find(|c| c.cli_name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Criterion::all().iter().map(|c| c.cli_name()).collect();
                format!("unknown scheduler '{s}' (expected one of: {})", names.join(", "))
            })
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// A prepared schedule: either a fixed order of request indices or a dynamic
/// criterion evaluated cycle by cycle.
#[derive(Debug, Clone)]
pub enum Schedule {
    Static(Vec<usize>),
    Dynamic(Criterion),
}

/// Tie-break key: ascending (dest, item).
fn pair_key(s: &Scenario, idx: usize) -> (usize, usize) {
    let r = &s.requests[idx];
    (r.dest, r.item)
}

/// Prepare the schedule for `crit`, counting scheduling operations into `ops`.
pub fn prepare(s: &Scenario, crit: Criterion, seed: u64, ops: &mut u64) -> Schedule {
    use Criterion::*;
    if crit.is_dynamic() {
        return Schedule::Dynamic(crit);
    }
    let mut idx: Vec<usize> = (0..s.requests.len()).collect();
    match crit {
        Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            idx.shuffle(&mut rng);
            *ops += s.requests.len() as u64;
        }
        _ => {
            let value = |i: usize| -> f64 {
                let r = &s.requests[i];
                match crit {
                    SizeDesc | SizeAsc => s.item_mbit[r.item],
                    DemandDesc | DemandAsc => s.demand_mbps(r),
                    _ => unreachable!("static value criteria only"),
                }
            };
            let descending = matches!(crit, SizeDesc | DemandDesc);
            idx.sort_by(|&a, &b| {
                *ops += 1;
                let ord = value(a).total_cmp(&value(b));
                let ord = if descending { ord.reverse() } else { ord };
                ord.then(pair_key(s, a).cmp(&pair_key(s, b)))
            });
        }
    }
    Schedule::Static(idx)
}

/// Score one pending request for a dynamic criterion against the current
/// state. Returns the value to rank by (before direction) and counts one
/// operation per source examined.
fn dynamic_score(
    s: &Scenario,
    state: &NetworkState,
    idx: usize,
    crit: Criterion,
    ops: &mut u64,
) -> f64 {
    let r = &s.requests[idx];
    let mut live = 0usize;
    let mut residual_sum = 0.0;
    for j in 0..s.num_sources() {
        *ops += 1;
        if !s.presence[j][r.item] {
            continue;
        }
        let residual = (s.src_access_mbps[j] - state.src_used[j]).max(0.0);
        if residual > 0.0 {
            live += 1;
            residual_sum += residual;
        }
    }
    use Criterion::*;
    match crit {
        LiveSourcesDesc | LiveSourcesAsc => live as f64,
        SourceBandwidthDesc | SourceBandwidthAsc => residual_sum,
        NormBandwidthDesc | NormBandwidthAsc => residual_sum / s.demand_mbps(r),
        _ => unreachable!("dynamic criteria only"),
    }
}

/// Pick the next request among `pending` (request indices) for a dynamic
/// criterion. Ties break toward ascending (dest, item).
pub fn select_dynamic(
    s: &Scenario,
    state: &NetworkState,
    pending: &[usize],
    crit: Criterion,
    ops: &mut u64,
) -> usize {
    use Criterion::*;
    debug_assert!(!pending.is_empty());
    let descending = matches!(
        crit,
        LiveSourcesDesc | SourceBandwidthDesc | NormBandwidthDesc
    );
    let mut best = pending[0];
    let mut best_score = dynamic_score(s, state, best, crit, ops);
    for &i in &pending[1..] {
        let score = dynamic_score(s, state, i, crit, ops);
        let wins = if descending {
            score > best_score
                || (score == best_score && pair_key(s, i) < pair_key(s, best))
        } else {
            score < best_score
                || (score == best_score && pair_key(s, i) < pair_key(s, best))
        };
        if wins {
            best = i;
            best_score = score;
        }
    }
    best
}
