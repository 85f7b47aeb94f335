//! One min-plus routing step under the microscope: how a single request is
//! split across sources at minimum incremental cost, when the pointwise
//! fast path applies, and how an existing reservation changes the next
//! increment.
//!
//! Run with: `cargo run -p bulkplan --example route_one_request`

use bulkplan::minplus::route_request;
use bulkplan::{CostFunction, NetworkState, Request, Scenario, SolverConfig};

fn main() {
    // Three sources with very different price tags for the same destination.
    let scenario = Scenario::new(
        vec![400.0, 400.0, 400.0],             // source access (Mb/s)
        vec![500.0],                           // destination access (Mb/s)
        vec![220.0 * 100.0, 60.0 * 100.0],     // item sizes (Mbit)
        vec![vec![true; 2]; 3],                // everyone stores everything
        vec![
            Request { dest: 0, item: 0, deadline_s: 100.0 }, // needs 220 Mb/s
            Request { dest: 0, item: 1, deadline_s: 100.0 }, // needs 60 Mb/s
        ],
        vec![vec![150.0], vec![100.0], vec![200.0]], // VPN caps
        vec![
            vec![CostFunction::linear(1.0, 0.010)], // cheap setup, cheap rate
            vec![CostFunction::linear(3.0, 0.012)], // pricey setup
            vec![CostFunction::linear(0.5, 0.025)], // cheap setup, pricey rate
        ],
    )
    .expect("dimensions are consistent");
    let cfg = SolverConfig::default();
    let mut state = NetworkState::new(&scenario);

    // Request 0 needs 220 Mb/s: more than any single VPN carries, so the
    // full convolution must pick a split.
    let big = scenario.requests[0];
    let route = route_request(&scenario, &state, &big, &cfg).expect("feasible");
    println!("request 0 (220 Mb/s), empty network:");
    for &(src, mbps) in &route.takes {
        println!("  source {src} contributes {mbps:>6.1} Mb/s");
    }
    println!(
        "  incremental cost {:.3}, {} candidate evaluations, fast path: {}\n",
        route.cost, route.conv_ops, route.fast_path
    );
    for &(src, mbps) in &route.takes {
        state.apply(&scenario, src, big.dest, mbps, cfg.epsilon).expect("within caps");
    }

    // Request 1 needs 60 Mb/s: every still-eligible source could carry it
    // alone, so the pointwise minimum answers without a convolution. The
    // VPN from source 2 already holds a reservation — its setup fee is paid,
    // so despite the pricier rate its *increment* beats a fresh setup.
    let small = scenario.requests[1];
    let route = route_request(&scenario, &state, &small, &cfg).expect("feasible");
    println!("request 1 (60 Mb/s), after the first reservation:");
    for &(src, mbps) in &route.takes {
        println!("  source {src} contributes {mbps:>6.1} Mb/s");
    }
    println!(
        "  incremental cost {:.3} (setup already paid), fast path: {}",
        route.cost, route.fast_path
    );
}
