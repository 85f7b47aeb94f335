//! JSON serialization of scenarios and plans.
//!
//! The on-disk schema uses operator-facing units (item sizes in GB); the
//! in-memory model is canonical (Mbit, Mb/s, seconds). Field order is fixed
//! by the struct definitions, so serialization is byte-stable for equal
//! inputs. Money totals are rounded to 6 decimals on output; bandwidth and
//! fragment values keep full precision so a written plan still passes the
//! constraint checker after a round trip.
//!
//! Scenario schema:
//!
//! ```json
//! {
//!   "sources":      [{"access_mbps": 1000.0}],
//!   "destinations": [{"access_mbps": 150.0}],
//!   "items":        [{"size_gb": 200.0}],
//!   "presence":     [[0, 1]],
//!   "requests":     [{"dest": 0, "item": 1, "deadline_s": 10800.0}],
//!   "vpn_cap_mbps": [[150.0, 150.0]],
//!   "cost":         [[{"a": 1.0, "b": 0.01}, {"a": 1.0, "b": 0.01}]]
//! }
//! ```
//!
//! Plan schema:
//!
//! ```json
//! {
//!   "allocations": [{"src": 0, "dest": 0, "item": 1,
//!                    "mbps": 148.14814814814815, "fragment_mbit": 1600000.0}],
//!   "total_cost": 2.481481,
//!   "num_vpns": 1
//! }
//! ```
//!
//! A solver run may attach a `report` object after `num_vpns`.

use crate::model::{
    AllocEntry, AllocationPlan, CostFunction, ModelError, Request, Scenario, MBIT_PER_GB,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("file: {0}")]
    File(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceJson {
    access_mbps: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DestJson {
    access_mbps: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemJson {
    size_gb: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostJson {
    a: f64,
    b: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestJson {
    dest: usize,
    item: usize,
    deadline_s: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    sources: Vec<SourceJson>,
    destinations: Vec<DestJson>,
    items: Vec<ItemJson>,
    presence: Vec<Vec<u8>>,
    requests: Vec<RequestJson>,
    vpn_cap_mbps: Vec<Vec<f64>>,
    cost: Vec<Vec<CostJson>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocJson {
    src: usize,
    dest: usize,
    item: usize,
    mbps: f64,
    fragment_mbit: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanJson {
    allocations: Vec<AllocJson>,
    total_cost: f64,
    num_vpns: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
}

/// Round a money amount to 6 decimals for output.
pub fn round_money(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Serialize a scenario to pretty JSON.
pub fn scenario_to_json(s: &Scenario) -> String {
    let j = ScenarioJson {
        sources: s
            .src_access_mbps
            .iter()
            .map(|&c| SourceJson { access_mbps: c })
            .collect(),
        destinations: s
            .dest_access_mbps
            .iter()
            .map(|&c| DestJson { access_mbps: c })
            .collect(),
        items: s
            .item_mbit
            .iter()
            .map(|&d| ItemJson { size_gb: d / MBIT_PER_GB })
            .collect(),
        presence: s
            .presence
            .iter()
            .map(|row| row.iter().map(|&b| u8::from(b)).collect())
            .collect(),
        requests: s
            .requests
            .iter()
            .map(|r| RequestJson {
                dest: r.dest,
                item: r.item,
                deadline_s: r.deadline_s,
            })
            .collect(),
        vpn_cap_mbps: s.vpn_cap_mbps.clone(),
        cost: s
            .cost
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| {
                        let crate::model::UsageCost::Linear { slope } = f.usage;
                        CostJson { a: f.setup, b: slope }
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("scenario serialization cannot fail")
}

/// Parse a scenario from JSON, converting GB sizes to Mbit.
pub fn scenario_from_json(text: &str) -> Result<Scenario, IoError> {
    let j: ScenarioJson = serde_json::from_str(text)?;
    let mut presence = Vec::with_capacity(j.presence.len());
    for (jdx, row) in j.presence.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (l, &v) in row.iter().enumerate() {
            match v {
                0 => out.push(false),
                1 => out.push(true),
                other => {
                    return Err(IoError::Schema(format!(
                        "presence[{jdx}][{l}] = {other}, expected 0 or 1"
                    )))
                }
            }
        }
        presence.push(out);
    }
    let s = Scenario::new(
        j.sources.iter().map(|x| x.access_mbps).collect(),
        j.destinations.iter().map(|x| x.access_mbps).collect(),
        j.items.iter().map(|x| x.size_gb * MBIT_PER_GB).collect(),
        presence,
        j.requests
            .iter()
            .map(|r| Request {
                dest: r.dest,
                item: r.item,
                deadline_s: r.deadline_s,
            })
            .collect(),
        j.vpn_cap_mbps,
        j.cost
            .iter()
            .map(|row| row.iter().map(|c| CostFunction::linear(c.a, c.b)).collect())
            .collect(),
    )?;
    Ok(s)
}

/// Serialize a plan to pretty JSON, optionally attaching a solver report.
pub fn plan_to_json(p: &AllocationPlan, report: Option<serde_json::Value>) -> String {
    let j = PlanJson {
        allocations: p
            .entries
            .iter()
            .map(|e| AllocJson {
                src: e.src,
                dest: e.dest,
                item: e.item,
                mbps: e.mbps,
                fragment_mbit: e.fragment_mbit,
            })
            .collect(),
        total_cost: round_money(p.total_cost),
        num_vpns: p.num_vpns,
        report,
    };
    serde_json::to_string_pretty(&j).expect("plan serialization cannot fail")
}

/// Parse a plan from JSON and rebuild it against `s`, cross-checking the
/// declared totals against recomputed ones.
pub fn plan_from_json(s: &Scenario, text: &str) -> Result<AllocationPlan, IoError> {
    let j: PlanJson = serde_json::from_str(text)?;
    let entries: Vec<AllocEntry> = j
        .allocations
        .iter()
        .map(|a| AllocEntry {
            src: a.src,
            dest: a.dest,
            item: a.item,
            mbps: a.mbps,
            fragment_mbit: a.fragment_mbit,
        })
        .collect();
    let p = AllocationPlan::from_entries(s, entries)?;
    if (round_money(p.total_cost) - j.total_cost).abs() > 1e-6 {
        return Err(IoError::Schema(format!(
            "declared total_cost {} does not match recomputed {}",
            j.total_cost,
            round_money(p.total_cost)
        )));
    }
    if p.num_vpns != j.num_vpns {
        return Err(IoError::Schema(format!(
            "declared num_vpns {} does not match recomputed {}",
            j.num_vpns, p.num_vpns
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{approx_eq, Request, SECONDS_PER_HOUR};

    fn sample() -> Scenario {
        let f = CostFunction::linear(1.0, 0.01);
        let g = CostFunction::linear(3.0, 0.03);
        Scenario::new(
            vec![1000.0, 800.0],
            vec![150.0],
            vec![130.37 * MBIT_PER_GB, 200.0 * MBIT_PER_GB],
            vec![vec![true, false], vec![true, true]],
            vec![Request { dest: 0, item: 1, deadline_s: 6.0 * SECONDS_PER_HOUR }],
            vec![vec![150.0], vec![120.0]],
            vec![vec![f], vec![g]],
        )
        .unwrap()
    }

    #[test]
    fn scenario_round_trip() {
        let s = sample();
        let text = scenario_to_json(&s);
        let s2 = scenario_from_json(&text).unwrap();
        assert_eq!(s2.num_sources(), 2);
        assert_eq!(s2.presence, s.presence);
        assert_eq!(s2.requests, s.requests);
        assert_eq!(s2.vpn_cap_mbps, s.vpn_cap_mbps);
        assert_eq!(s2.cost, s.cost);
        for (a, b) in s.item_mbit.iter().zip(&s2.item_mbit) {
            assert!(approx_eq(*a, *b, 1e-12), "item size drifted: {a} vs {b}");
        }
    }

    #[test]
    fn scenario_serialization_is_deterministic() {
        let s = sample();
        assert_eq!(scenario_to_json(&s), scenario_to_json(&s.clone()));
    }

    #[test]
    fn scenario_rejects_bad_presence_flag() {
        let s = sample();
        let text = scenario_to_json(&s).replace("[\n      1,\n      0\n    ]", "[\n      2,\n      0\n    ]");
        assert!(text.contains('2'), "test setup: replacement must hit");
        match scenario_from_json(&text) {
            Err(IoError::Schema(msg)) => assert!(msg.contains("presence")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn scenario_rejects_unknown_fields() {
        let text = r#"{"sources": [], "bogus": 1}"#;
        assert!(matches!(scenario_from_json(text), Err(IoError::Json(_))));
    }

    #[test]
    fn plan_round_trip_preserves_full_precision() {
        let s = sample();
        let rate = s.demand_mbps(&s.requests[0]);
        let entries = vec![AllocEntry {
            src: 1,
            dest: 0,
            item: 1,
            mbps: rate,
            fragment_mbit: s.item_mbit[1],
        }];
        let p = AllocationPlan::from_entries(&s, entries).unwrap();
        let text = plan_to_json(&p, None);
        let p2 = plan_from_json(&s, &text).unwrap();
        // Bandwidth must survive bit-exactly: the checker re-runs at 1e-9.
        assert_eq!(p2.entries[0].mbps, rate);
        assert_eq!(p2.entries[0].fragment_mbit, s.item_mbit[1]);
        let viol = crate::model::check_plan_constraints(&s, &p2, 1e-9).unwrap();
        assert!(viol.is_empty(), "round-tripped plan must stay feasible: {viol:?}");
    }

    #[test]
    fn plan_money_is_six_decimals() {
        let s = sample();
        let rate = s.demand_mbps(&s.requests[0]); // 200 GB / 6 h = 74.07407... Mb/s
        let entries = vec![AllocEntry {
            src: 1,
            dest: 0,
            item: 1,
            mbps: rate,
            fragment_mbit: s.item_mbit[1],
        }];
        let p = AllocationPlan::from_entries(&s, entries).unwrap();
        let text = plan_to_json(&p, None);
        // f(74.074074...) = 3 + 0.03 * 74.0740740... = 5.2222222...
        assert!(text.contains("\"total_cost\": 5.222222"), "got: {text}");
    }

    #[test]
    fn plan_rejects_forged_totals() {
        let s = sample();
        let rate = s.demand_mbps(&s.requests[0]);
        let entries = vec![AllocEntry {
            src: 1,
            dest: 0,
            item: 1,
            mbps: rate,
            fragment_mbit: s.item_mbit[1],
        }];
        let p = AllocationPlan::from_entries(&s, entries).unwrap();
        let text = plan_to_json(&p, None).replace("5.222222", "4.0");
        assert!(matches!(plan_from_json(&s, &text), Err(IoError::Schema(_))));
    }

    #[test]
    fn round_money_examples() {
        assert_eq!(round_money(49.629629629629), 49.62963);
        assert_eq!(round_money(2.48148148148), 2.481481);
        assert_eq!(round_money(0.0), 0.0);
    }
}
