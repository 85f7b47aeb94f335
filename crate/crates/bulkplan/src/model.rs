//! Core data model: scenarios, cost functions, allocation plans and the
//! constraint checker.
//!
//! Canonical units everywhere: bandwidth in Mb/s, data in Mbit, time in
//! seconds, money in abstract cost units. Item sizes given in GB convert at
//! 1 GB = 8000 Mbit (decimal), deadlines given in hours at 1 h = 3600 s.
//!
//! The constraint system a plan must satisfy:
//!
//! ```text
//! (1) per source j:        sum_i c_ji  <= C^M_j      (source access capacity)
//! (2) per destination i:   sum_j c_ji  <= C^T_i      (destination access capacity)
//! (3) per request (i,l):   sum_j D_jil  = D_l        (fragments reassemble the item)
//! (4) per fragment:        D_jil <= tau_il * c_jil   (fragment fits in the deadline)
//! (5) per VPN (j,i):       c_ji  <= cbar_ji          (VPN capacity)
//! (6) c_jil  > 0 only if source j stores item l and (i,l) is requested
//! (7) 0 <= D_jil <= D_l, positive only under the same eligibility
//! ```
//!
//! where `c_ji = sum_l c_jil`. Constraint checks are tolerant (relative
//! epsilon) and return violations as data — nothing here panics on a bad plan.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Decimal gigabytes to megabits: 1 GB = 8 Gbit = 8000 Mbit.
pub const MBIT_PER_GB: f64 = 8000.0;
/// Hours to seconds.
pub const SECONDS_PER_HOUR: f64 = 3600.0;
/// Default relative tolerance for constraint and cost comparisons.
pub const DEFAULT_EPS: f64 = 1e-9;
/// A VPN counts as active when it carries more than this rate (Mb/s).
pub const ACTIVATION_EPS: f64 = 1e-9;

/// `x <= y` up to a relative tolerance (absolute near zero).
pub(crate) fn approx_le(x: f64, y: f64, eps: f64) -> bool {
    x <= y + eps * y.abs().max(1.0)
}

/// `x == y` up to a relative tolerance (absolute near zero).
pub(crate) fn approx_eq(x: f64, y: f64, eps: f64) -> bool {
    (x - y).abs() <= eps * y.abs().max(1.0)
}

/// Concave non-decreasing usage-cost family, `g(0) = 0`.
///
/// The shipped member is linear, `g(c) = slope * c`; the enum leaves room for
/// other concave families without touching the planner, which only relies on
/// concavity through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UsageCost {
    /// `g(c) = slope * c`
    Linear {
        /// Cost per Mb/s of reserved bandwidth.
        slope: f64,
    },
}

impl UsageCost {
    /// Evaluate `g(c)` for `c >= 0`.
    pub fn eval(&self, c: f64) -> f64 {
        match *self {
            UsageCost::Linear { slope } => slope * c,
        }
    }
}

/// Cost of one VPN as a function of its reserved bandwidth:
/// `f(0) = 0`, `f(c) = setup + g(c)` for `c > 0`.
///
/// The jump at zero makes `f` discontinuous but still sub-additive
/// (`f(x+y) <= f(x) + f(y)`) whenever `setup >= 0` and `g` is concave, which
/// is what lets the planner reason about concentrating load on few VPNs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostFunction {
    /// One-off fee paid as soon as the VPN carries any traffic.
    pub setup: f64,
    /// Usage-dependent part.
    pub usage: UsageCost,
}

impl CostFunction {
    /// Linear-family constructor: `f(c) = setup + slope * c` for `c > 0`.
    pub fn linear(setup: f64, slope: f64) -> Self {
        CostFunction {
            setup,
            usage: UsageCost::Linear { slope },
        }
    }

    /// `f(c)`. Tiny negative inputs (floating-point dust) count as zero.
    pub fn eval(&self, c: f64) -> f64 {
        if c <= 0.0 {
            0.0
        } else {
            self.setup + self.usage.eval(c)
        }
    }

    /// Cost of raising this VPN from `base` to `base + add` Mb/s:
    /// `f(base + add) - f(base)`. The setup fee is charged only when the VPN
    /// activates, i.e. when `base == 0` and `add > 0`.
    pub fn incremental(&self, base: f64, add: f64) -> f64 {
        self.eval(base + add) - self.eval(base)
    }
}

/// One transfer request: destination `dest` wants item `item` completely
/// delivered within `deadline_s` seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub dest: usize,
    pub item: usize,
    pub deadline_s: f64,
}

/// A planning instance.
///
/// Dimensions: `K` sources, `N` destinations, `H` items. The constructor
/// enforces dimensional consistency (hard error); value-level rules
/// (positivity, reachable deadlines, item availability, request uniqueness)
/// are reported by [`validate_scenario`] as data.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Source access capacities `C^M_j` (Mb/s), length `K`.
    pub src_access_mbps: Vec<f64>,
    /// Destination access capacities `C^T_i` (Mb/s), length `N`.
    pub dest_access_mbps: Vec<f64>,
    /// Item sizes `D_l` (Mbit), length `H`.
    pub item_mbit: Vec<f64>,
    /// `presence[j][l]` — source `j` stores item `l` (`K x H`).
    pub presence: Vec<Vec<bool>>,
    /// Open requests, at most one per (dest, item) pair.
    pub requests: Vec<Request>,
    /// VPN capacities `cbar_ji` (Mb/s), `K x N`.
    pub vpn_cap_mbps: Vec<Vec<f64>>,
    /// VPN cost functions `f_ji`, `K x N`.
    pub cost: Vec<Vec<CostFunction>>,
}

/// Structural (dimension/index) problems that make a scenario or plan
/// unusable, as opposed to value-level violations.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("inconsistent allocation: {0}")]
    Inconsistent(String),
}

impl Scenario {
    /// Build a scenario, checking dimensional consistency only.
    pub fn new(
        src_access_mbps: Vec<f64>,
        dest_access_mbps: Vec<f64>,
        item_mbit: Vec<f64>,
        presence: Vec<Vec<bool>>,
        requests: Vec<Request>,
        vpn_cap_mbps: Vec<Vec<f64>>,
        cost: Vec<Vec<CostFunction>>,
    ) -> Result<Self, ModelError> {
        let (k, n, h) = (src_access_mbps.len(), dest_access_mbps.len(), item_mbit.len());
        let expect = |name: &str, rows: usize, want: usize| {
            if rows == want {
                Ok(())
            } else {
                Err(ModelError::Dimension(format!(
                    "{name}: got {rows} rows, expected {want}"
                )))
            }
        };
        expect("presence", presence.len(), k)?;
        for (j, row) in presence.iter().enumerate() {
            expect(&format!("presence[{j}]"), row.len(), h)?;
        }
        expect("vpn_cap_mbps", vpn_cap_mbps.len(), k)?;
        for (j, row) in vpn_cap_mbps.iter().enumerate() {
            expect(&format!("vpn_cap_mbps[{j}]"), row.len(), n)?;
        }
        expect("cost", cost.len(), k)?;
        for (j, row) in cost.iter().enumerate() {
            expect(&format!("cost[{j}]"), row.len(), n)?;
        }
        for r in &requests {
            if r.dest >= n || r.item >= h {
                return Err(ModelError::Index(format!(
                    "request (dest {}, item {}) outside {n} destinations / {h} items",
                    r.dest, r.item
                )));
            }
        }
        Ok(Scenario {
            src_access_mbps,
            dest_access_mbps,
            item_mbit,
            presence,
            requests,
            vpn_cap_mbps,
            cost,
        })
    }

    pub fn num_sources(&self) -> usize {
        self.src_access_mbps.len()
    }

    pub fn num_dests(&self) -> usize {
        self.dest_access_mbps.len()
    }

    pub fn num_items(&self) -> usize {
        self.item_mbit.len()
    }

    /// Required rate of a request: `D_l / tau_il` (Mb/s).
    pub fn demand_mbps(&self, r: &Request) -> f64 {
        self.item_mbit[r.item] / r.deadline_s
    }

    /// Sources that store `item`.
    pub fn eligible_sources(&self, item: usize) -> Vec<usize> {
        (0..self.num_sources())
            .filter(|&j| self.presence[j][item])
            .collect()
    }

    /// Position of the request for `(dest, item)`, if it exists.
    pub fn request_index(&self, dest: usize, item: usize) -> Option<usize> {
        self.requests
            .iter()
            .position(|r| r.dest == dest && r.item == item)
    }
}

/// Value-level scenario rule violations, reported by [`validate_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioViolation {
    /// A capacity, size, deadline, setup fee or slope that must be positive
    /// (or non-negative for money) is not.
    NonPositive { what: String },
    /// A requested item is stored on no source: the request can never be served.
    UnreachableItem { item: usize },
    /// Deadline so tight the destination access link alone cannot carry the
    /// item: `D_l / tau_il > C^T_i`.
    DeadlineBelowAccessBound {
        dest: usize,
        item: usize,
        need_mbps: f64,
        access_mbps: f64,
    },
    /// Two requests for the same (dest, item) pair.
    DuplicateRequest { dest: usize, item: usize },
}

impl std::fmt::Display for ScenarioViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioViolation::NonPositive { what } => write!(f, "non-positive {what}"),
            ScenarioViolation::UnreachableItem { item } => {
                write!(f, "item {item} is requested but stored on no source")
            }
            ScenarioViolation::DeadlineBelowAccessBound {
                dest,
                item,
                need_mbps,
                access_mbps,
            } => write!(
                f,
                "request (dest {dest}, item {item}) needs {need_mbps:.3} Mb/s, above the \
                 destination access capacity {access_mbps:.3} Mb/s"
            ),
            ScenarioViolation::DuplicateRequest { dest, item } => {
                write!(f, "duplicate request for (dest {dest}, item {item})")
            }
        }
    }
}

/// Report of [`validate_scenario`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<ScenarioViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every value-level scenario rule and return all violations.
// The negated comparisons are deliberate: NaN must fail validation too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    let mut v = Vec::new();
    fn positive(v: &mut Vec<ScenarioViolation>, x: f64, what: String) {
        if !(x > 0.0) {
            v.push(ScenarioViolation::NonPositive { what });
        }
    }
    for (j, &c) in s.src_access_mbps.iter().enumerate() {
        positive(&mut v, c, format!("source {j} access capacity"));
    }
    for (i, &c) in s.dest_access_mbps.iter().enumerate() {
        positive(&mut v, c, format!("destination {i} access capacity"));
    }
    for (l, &d) in s.item_mbit.iter().enumerate() {
        positive(&mut v, d, format!("item {l} size"));
    }
    for (j, row) in s.vpn_cap_mbps.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            positive(&mut v, c, format!("VPN ({j},{i}) capacity"));
        }
    }
    for (j, row) in s.cost.iter().enumerate() {
        for (i, f) in row.iter().enumerate() {
            if !(f.setup >= 0.0) {
                v.push(ScenarioViolation::NonPositive {
                    what: format!("VPN ({j},{i}) setup fee (must be >= 0)"),
                });
            }
            let UsageCost::Linear { slope } = f.usage;
            if !(slope >= 0.0) {
                v.push(ScenarioViolation::NonPositive {
                    what: format!("VPN ({j},{i}) usage slope (must be >= 0)"),
                });
            }
        }
    }
    for r in &s.requests {
        positive(
            &mut v,
            r.deadline_s,
            format!("deadline of (dest {}, item {})", r.dest, r.item),
        );
    }
    for r in &s.requests {
        if s.eligible_sources(r.item).is_empty()
            && !v.contains(&ScenarioViolation::UnreachableItem { item: r.item })
        {
            v.push(ScenarioViolation::UnreachableItem { item: r.item });
        }
        if r.deadline_s > 0.0 {
            let need = s.demand_mbps(r);
            let access = s.dest_access_mbps[r.dest];
            if !approx_le(need, access, DEFAULT_EPS) {
                v.push(ScenarioViolation::DeadlineBelowAccessBound {
                    dest: r.dest,
                    item: r.item,
                    need_mbps: need,
                    access_mbps: access,
                });
            }
        }
    }
    for (a, ra) in s.requests.iter().enumerate() {
        for rb in s.requests.iter().skip(a + 1) {
            if ra.dest == rb.dest && ra.item == rb.item {
                v.push(ScenarioViolation::DuplicateRequest {
                    dest: ra.dest,
                    item: ra.item,
                });
            }
        }
    }
    ValidationReport { violations: v }
}

/// One positive bandwidth assignment: source `src` sends `fragment_mbit` of
/// item `item` to destination `dest` at `mbps` for the request's deadline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocEntry {
    pub src: usize,
    pub dest: usize,
    pub item: usize,
    pub mbps: f64,
    pub fragment_mbit: f64,
}

/// A complete bandwidth reservation plan.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationPlan {
    /// Positive allocations, sorted by (src, dest, item).
    pub entries: Vec<AllocEntry>,
    /// Aggregated per-VPN bandwidth `c_ji` (`K x N`).
    pub vpn_mbps: Vec<Vec<f64>>,
    /// Total reservation cost of the plan.
    pub total_cost: f64,
    /// Number of active VPNs (VPNs with positive bandwidth).
    pub num_vpns: usize,
}

impl AllocationPlan {
    /// Build a plan from sparse entries; zero entries are dropped, the rest
    /// sorted. Entry indices must be in range for `s`.
    pub fn from_entries(s: &Scenario, mut entries: Vec<AllocEntry>) -> Result<Self, ModelError> {
        let (k, n, h) = (s.num_sources(), s.num_dests(), s.num_items());
        for e in &entries {
            if e.src >= k || e.dest >= n || e.item >= h {
                return Err(ModelError::Index(format!(
                    "allocation entry ({}, {}, {}) outside {k} x {n} x {h}",
                    e.src, e.dest, e.item
                )));
            }
        }
        entries.retain(|e| e.mbps > 0.0 || e.fragment_mbit > 0.0);
        entries.sort_by_key(|a| (a.src, a.dest, a.item));
        let mut vpn_mbps = vec![vec![0.0; n]; k];
        for e in &entries {
            vpn_mbps[e.src][e.dest] += e.mbps;
        }
        let num_vpns = vpn_mbps
            .iter()
            .flatten()
            .filter(|&&c| c > ACTIVATION_EPS)
            .count();
        let total_cost = cost_of_matrix(s, &vpn_mbps);
        Ok(AllocationPlan {
            entries,
            vpn_mbps,
            total_cost,
            num_vpns,
        })
    }

    /// The empty plan for `s`.
    pub fn empty(s: &Scenario) -> Self {
        AllocationPlan {
            entries: Vec::new(),
            vpn_mbps: vec![vec![0.0; s.num_dests()]; s.num_sources()],
            total_cost: 0.0,
            num_vpns: 0,
        }
    }
}

/// Total cost of a `K x N` per-VPN bandwidth matrix: `sum_ji f_ji(c_ji)`.
pub fn cost_of_matrix(s: &Scenario, vpn_mbps: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for (j, row) in vpn_mbps.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            if c > ACTIVATION_EPS {
                sum += s.cost[j][i].eval(c);
            }
        }
    }
    sum
}

/// Total reservation cost of a plan, recomputed from its VPN matrix.
///
/// Invariant under how the same `c_ji` is split across items: only the
/// per-VPN sums enter the cost.
pub fn total_cost(s: &Scenario, p: &AllocationPlan) -> f64 {
    cost_of_matrix(s, &p.vpn_mbps)
}

/// Split an item of `item_mbit` Mbit into per-source fragments proportional
/// to the allocated rates (`D_jil = tau * c_jil`), absorbing the rounding
/// residue into the largest fragment so the fragments reassemble the item
/// exactly.
///
/// `alloc_mbps` must sum to `item_mbit / deadline_s` within `eps`.
pub fn fragment_sizes(
    item_mbit: f64,
    deadline_s: f64,
    alloc_mbps: &[f64],
    eps: f64,
) -> Result<Vec<f64>, ModelError> {
    let total_rate: f64 = alloc_mbps.iter().sum();
    let need_rate = item_mbit / deadline_s;
    if !approx_eq(total_rate, need_rate, eps.max(DEFAULT_EPS)) {
        return Err(ModelError::Inconsistent(format!(
            "allocated rate {total_rate} Mb/s != required {need_rate} Mb/s"
        )));
    }
    let mut frags: Vec<f64> = alloc_mbps.iter().map(|&c| c * deadline_s).collect();
    // Pin the residue onto the largest fragment: set it to the exact remainder.
    if let Some(imax) = (0..frags.len()).max_by(|&a, &b| frags[a].total_cmp(&frags[b])) {
        let others: f64 = frags
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != imax)
            .map(|(_, &d)| d)
            .sum();
        frags[imax] = item_mbit - others;
    }
    Ok(frags)
}

/// A violated plan constraint, with enough context to point at the offender.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintViolation {
    /// (1) source access capacity exceeded.
    SourceAccess { src: usize, used: f64, cap: f64 },
    /// (2) destination access capacity exceeded.
    DestAccess { dest: usize, used: f64, cap: f64 },
    /// (3) fragments do not reassemble the item.
    Integrity {
        dest: usize,
        item: usize,
        got_mbit: f64,
        want_mbit: f64,
    },
    /// (4) fragment larger than rate x deadline.
    FragmentRate {
        src: usize,
        dest: usize,
        item: usize,
        fragment_mbit: f64,
        max_mbit: f64,
    },
    /// (5) VPN capacity exceeded.
    VpnCap { src: usize, dest: usize, used: f64, cap: f64 },
    /// (6)/(7) allocation on a source that lacks the item, on an unrequested
    /// pair, or with a negative rate.
    Ineligible { src: usize, dest: usize, item: usize, why: String },
    /// (7) fragment outside [0, D_l].
    FragmentBounds {
        src: usize,
        dest: usize,
        item: usize,
        fragment_mbit: f64,
    },
}

impl std::fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintViolation::SourceAccess { src, used, cap } => {
                write!(f, "source {src} access: {used:.6} > {cap:.6} Mb/s")
            }
            ConstraintViolation::DestAccess { dest, used, cap } => {
                write!(f, "destination {dest} access: {used:.6} > {cap:.6} Mb/s")
            }
            ConstraintViolation::Integrity { dest, item, got_mbit, want_mbit } => write!(
                f,
                "request (dest {dest}, item {item}): fragments sum to {got_mbit:.3} of \
                 {want_mbit:.3} Mbit"
            ),
            ConstraintViolation::FragmentRate { src, dest, item, fragment_mbit, max_mbit } => {
                write!(
                    f,
                    "fragment ({src},{dest},{item}): {fragment_mbit:.3} Mbit exceeds \
                     rate*deadline = {max_mbit:.3} Mbit"
                )
            }
            ConstraintViolation::VpnCap { src, dest, used, cap } => {
                write!(f, "VPN ({src},{dest}): {used:.6} > capacity {cap:.6} Mb/s")
            }
            ConstraintViolation::Ineligible { src, dest, item, why } => {
                write!(f, "allocation ({src},{dest},{item}): {why}")
            }
            ConstraintViolation::FragmentBounds { src, dest, item, fragment_mbit } => {
                write!(f, "fragment ({src},{dest},{item}): {fragment_mbit:.3} Mbit out of bounds")
            }
        }
    }
}

/// Check a plan against the full constraint system with relative tolerance
/// `eps`, returning every violation. A structurally incompatible plan
/// (indices out of range) is an error, not a violation list.
pub fn check_plan_constraints(
    s: &Scenario,
    p: &AllocationPlan,
    eps: f64,
) -> Result<Vec<ConstraintViolation>, ModelError> {
    let (k, n, h) = (s.num_sources(), s.num_dests(), s.num_items());
    if p.vpn_mbps.len() != k || p.vpn_mbps.iter().any(|row| row.len() != n) {
        return Err(ModelError::Dimension(format!(
            "plan VPN matrix is not {k} x {n}"
        )));
    }
    for e in &p.entries {
        if e.src >= k || e.dest >= n || e.item >= h {
            return Err(ModelError::Index(format!(
                "plan entry ({}, {}, {}) outside {k} x {n} x {h}",
                e.src, e.dest, e.item
            )));
        }
    }

    let mut out = Vec::new();

    // (1) source access.
    for j in 0..k {
        let used: f64 = p.vpn_mbps[j].iter().sum();
        if !approx_le(used, s.src_access_mbps[j], eps) {
            out.push(ConstraintViolation::SourceAccess {
                src: j,
                used,
                cap: s.src_access_mbps[j],
            });
        }
    }
    // (2) destination access.
    for i in 0..n {
        let used: f64 = (0..k).map(|j| p.vpn_mbps[j][i]).sum();
        if !approx_le(used, s.dest_access_mbps[i], eps) {
            out.push(ConstraintViolation::DestAccess {
                dest: i,
                used,
                cap: s.dest_access_mbps[i],
            });
        }
    }
    // (3) integrity per request; (4), (6), (7) per entry.
    for r in &s.requests {
        let want = s.item_mbit[r.item];
        let got: f64 = p
            .entries
            .iter()
            .filter(|e| e.dest == r.dest && e.item == r.item)
            .map(|e| e.fragment_mbit)
            .sum();
        if !approx_eq(got, want, eps) {
            out.push(ConstraintViolation::Integrity {
                dest: r.dest,
                item: r.item,
                got_mbit: got,
                want_mbit: want,
            });
        }
    }
    for e in &p.entries {
        let req = s.request_index(e.dest, e.item);
        if req.is_none() {
            out.push(ConstraintViolation::Ineligible {
                src: e.src,
                dest: e.dest,
                item: e.item,
                why: "no such request".into(),
            });
            continue;
        }
        if !s.presence[e.src][e.item] {
            out.push(ConstraintViolation::Ineligible {
                src: e.src,
                dest: e.dest,
                item: e.item,
                why: "source does not store the item".into(),
            });
        }
        if e.mbps < -eps {
            out.push(ConstraintViolation::Ineligible {
                src: e.src,
                dest: e.dest,
                item: e.item,
                why: format!("negative rate {} Mb/s", e.mbps),
            });
        }
        let r = &s.requests[req.unwrap()];
        let max_mbit = r.deadline_s * e.mbps;
        if !approx_le(e.fragment_mbit, max_mbit, eps) {
            out.push(ConstraintViolation::FragmentRate {
                src: e.src,
                dest: e.dest,
                item: e.item,
                fragment_mbit: e.fragment_mbit,
                max_mbit,
            });
        }
        if e.fragment_mbit < -eps * s.item_mbit[e.item].max(1.0)
            || !approx_le(e.fragment_mbit, s.item_mbit[e.item], eps)
        {
            out.push(ConstraintViolation::FragmentBounds {
                src: e.src,
                dest: e.dest,
                item: e.item,
                fragment_mbit: e.fragment_mbit,
            });
        }
    }
    // (5) VPN capacity.
    for j in 0..k {
        for i in 0..n {
            if !approx_le(p.vpn_mbps[j][i], s.vpn_cap_mbps[j][i], eps) {
                out.push(ConstraintViolation::VpnCap {
                    src: j,
                    dest: i,
                    used: p.vpn_mbps[j][i],
                    cap: s.vpn_cap_mbps[j][i],
                });
            }
        }
    }
    Ok(out)
}
