//! The full file-format loop: generate a heterogeneous scenario, serialize
//! it, parse it back, validate it, plan it, and verify the serialized plan
//! against the constraint checker — the same path the CLI wires together.
//!
//! Run with: `cargo run -p bulkplan --example scenario_roundtrip`

use bulkplan::io::{plan_from_json, plan_to_json, scenario_from_json, scenario_to_json};
use bulkplan::scenario::{gen_heterogeneous, HetParams};
use bulkplan::{check_plan_constraints, solve, validate_scenario, Criterion, SolverConfig};

fn main() {
    let params = HetParams::default();
    let scenario = gen_heterogeneous(&params, 7, 0);
    println!(
        "generated: {} sources, {} destinations, {} requests",
        scenario.num_sources(),
        scenario.num_dests(),
        scenario.requests.len()
    );

    let json = scenario_to_json(&scenario);
    println!("serialized scenario: {} bytes of JSON", json.len());
    let parsed = scenario_from_json(&json).expect("own output parses");

    let report = validate_scenario(&parsed);
    assert!(report.is_valid(), "generated scenarios validate: {:?}", report.violations);
    println!("validation: ok");

    let cfg = SolverConfig::default();
    match solve(&parsed, Criterion::LiveSourcesAsc, &cfg) {
        Ok((plan, report)) => {
            println!(
                "planned with `{}`: cost {:.6}, {} VPNs, {} allocations",
                report.scheduler,
                plan.total_cost,
                plan.num_vpns,
                plan.entries.len()
            );
            let plan_json = plan_to_json(&plan, None);
            let reread = plan_from_json(&parsed, &plan_json).expect("plan round-trips");
            let violations =
                check_plan_constraints(&parsed, &reread, 1e-9).expect("indices consistent");
            assert!(violations.is_empty(), "round-tripped plan stays valid: {violations:?}");
            println!("plan JSON round-trip: ok ({} bytes)", plan_json.len());
        }
        Err(e) => {
            // Heterogeneous draws can be genuinely unservable; the error
            // names the first request that cannot be routed.
            println!("this draw is infeasible: {e}");
            println!("(try another sample index for a servable one)");
        }
    }
}
