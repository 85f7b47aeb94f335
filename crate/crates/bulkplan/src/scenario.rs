//! Scenario generators: the uniform content-distribution family and the
//! randomized heterogeneous family with three cost layouts.
//!
//! The heterogeneous generator separates two randomness streams so studies
//! can vary demand while holding the catalog fixed: the item catalog (sizes
//! and placement) always derives from stream 0 of the seed, and each
//! Monte-Carlo sample's demand (which items each destination wants, with what
//! deadline) derives from stream `1 + sample`. Two scenarios generated with
//! the same seed therefore share byte-identical catalogs across samples.

use crate::model::{CostFunction, Request, Scenario, MBIT_PER_GB, SECONDS_PER_HOUR};
use crate::oracle::UniformInstance;
use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of the uniform family: every source stores every item, every
/// destination requests its own equally-sized item under one shared deadline.
#[derive(Debug, Clone, Copy)]
pub struct UniformParams {
    pub sources: usize,
    pub dests: usize,
    pub item_gb: f64,
    pub deadline_h: f64,
    pub src_access_mbps: f64,
    pub dest_access_mbps: f64,
    pub vpn_cap_mbps: f64,
    pub setup: f64,
    pub slope: f64,
}

impl Default for UniformParams {
    /// The digital-cinema-style reference configuration.
    fn default() -> Self {
        UniformParams {
            sources: 4,
            dests: 20,
            item_gb: 200.0,
            deadline_h: 3.0,
            src_access_mbps: 1000.0,
            dest_access_mbps: 150.0,
            vpn_cap_mbps: 150.0,
            setup: 1.0,
            slope: 0.01,
        }
    }
}

impl UniformParams {
    /// The same instance in the analytic oracle's terms.
    pub fn instance(&self) -> UniformInstance {
        UniformInstance {
            sources: self.sources,
            dests: self.dests,
            src_access_mbps: self.src_access_mbps,
            dest_access_mbps: self.dest_access_mbps,
            vpn_cap_mbps: self.vpn_cap_mbps,
            item_mbit: self.item_gb * MBIT_PER_GB,
            deadline_s: self.deadline_h * SECONDS_PER_HOUR,
            setup: self.setup,
            slope: self.slope,
        }
    }
}

/// Build the (deterministic) uniform scenario.
pub fn gen_uniform(p: &UniformParams) -> Scenario {
    let f = CostFunction::linear(p.setup, p.slope);
    Scenario::new(
        vec![p.src_access_mbps; p.sources],
        vec![p.dest_access_mbps; p.dests],
        vec![p.item_gb * MBIT_PER_GB; p.dests],
        vec![vec![true; p.dests]; p.sources],
        (0..p.dests)
            .map(|i| Request {
                dest: i,
                item: i,
                deadline_s: p.deadline_h * SECONDS_PER_HOUR,
            })
            .collect(),
        vec![vec![p.vpn_cap_mbps; p.dests]; p.sources],
        vec![vec![f; p.dests]; p.sources],
    )
    .expect("uniform generator builds consistent dimensions")
}

/// Cost layout of the heterogeneous family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostVariant {
    /// Variant 1: every VPN has the cheap cost function.
    Uniform,
    /// Variant 2: every VPN out of source 0 is expensive, the rest cheap.
    ExpensiveSource,
    /// Variant 3: the first half of the sources is cheap toward the first
    /// half of the destinations, the second half toward the second half;
    /// cross pairs are expensive.
    Clustered,
}

impl std::str::FromStr for CostVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "uniform" => Ok(CostVariant::Uniform),
            "2" | "expensive-source" => Ok(CostVariant::ExpensiveSource),
            "3" | "clustered" => Ok(CostVariant::Clustered),
            other => Err(format!(
                "unknown cost variant '{other}' (expected 1|2|3 or uniform|expensive-source|clustered)"
            )),
        }
    }
}

/// Parameters of the randomized heterogeneous family.
#[derive(Debug, Clone, Copy)]
pub struct HetParams {
    pub sources: usize,
    pub dests: usize,
    /// Number of items in the catalog.
    pub catalog_size: usize,
    /// Item sizes are uniform in `[item_gb_min, item_gb_max]` GB.
    pub item_gb_min: f64,
    pub item_gb_max: f64,
    /// Each item is stored on exactly this many sources.
    pub copies_per_item: usize,
    /// Each destination requests this many distinct items.
    pub items_per_dest: usize,
    /// Deadlines are whole hours, uniform in `[deadline_h_min, deadline_h_max]`,
    /// one deadline shared by all of a destination's requests.
    pub deadline_h_min: u64,
    pub deadline_h_max: u64,
    pub src_access_mbps: f64,
    pub dest_access_mbps: f64,
    pub vpn_cap_mbps: f64,
    /// Cheap cost function (setup, slope).
    pub cheap: (f64, f64),
    /// Expensive cost function (setup, slope).
    pub expensive: (f64, f64),
    pub variant: CostVariant,
}

impl Default for HetParams {
    fn default() -> Self {
        HetParams {
            sources: 4,
            dests: 20,
            catalog_size: 40,
            item_gb_min: 130.0,
            item_gb_max: 270.0,
            copies_per_item: 3,
            items_per_dest: 2,
            deadline_h_min: 6,
            deadline_h_max: 12,
            src_access_mbps: 1000.0,
            dest_access_mbps: 150.0,
            vpn_cap_mbps: 150.0,
            cheap: (1.0, 0.01),
            expensive: (3.0, 0.03),
            variant: CostVariant::Uniform,
        }
    }
}

/// The fixed part of a heterogeneous study: item sizes and placement.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub item_mbit: Vec<f64>,
    /// `presence[j][l]`.
    pub presence: Vec<Vec<bool>>,
}

/// Generate the catalog for `seed` (randomness stream 0).
pub fn gen_catalog(p: &HetParams, seed: u64) -> Catalog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let item_mbit: Vec<f64> = (0..p.catalog_size)
        .map(|_| rng.gen_range(p.item_gb_min..=p.item_gb_max) * MBIT_PER_GB)
        .collect();
    // An item cannot be replicated on more distinct sources than exist.
    let copies = p.copies_per_item.min(p.sources);
    let placements: Vec<Vec<usize>> = (0..p.catalog_size)
        .map(|_| index_sample(&mut rng, p.sources, copies).into_vec())
        .collect();
    let mut presence = vec![vec![false; p.catalog_size]; p.sources];
    for (l, sources) in placements.iter().enumerate() {
        for &j in sources {
            presence[j][l] = true;
        }
    }
    Catalog { item_mbit, presence }
}

fn cost_matrix(p: &HetParams) -> Vec<Vec<CostFunction>> {
    let cheap = CostFunction::linear(p.cheap.0, p.cheap.1);
    let dear = CostFunction::linear(p.expensive.0, p.expensive.1);
    (0..p.sources)
        .map(|j| {
            (0..p.dests)
                .map(|i| match p.variant {
                    CostVariant::Uniform => cheap,
                    CostVariant::ExpensiveSource => {
                        if j == 0 {
                            dear
                        } else {
                            cheap
                        }
                    }
                    CostVariant::Clustered => {
                        let j_first = j < p.sources / 2;
                        let i_first = i < p.dests / 2;
                        if j_first == i_first {
                            cheap
                        } else {
                            dear
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// Generate heterogeneous sample `sample` for `seed`: the catalog comes from
/// stream 0 (shared across samples), the demand from stream `1 + sample`.
pub fn gen_heterogeneous(p: &HetParams, seed: u64, sample: u64) -> Scenario {
    let catalog = gen_catalog(p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + sample);
    let mut requests = Vec::with_capacity(p.dests * p.items_per_dest);
    for dest in 0..p.dests {
        let deadline_h = rng.gen_range(p.deadline_h_min..=p.deadline_h_max);
        let deadline_s = deadline_h as f64 * SECONDS_PER_HOUR;
        let wanted = p.items_per_dest.min(p.catalog_size);
        let mut picked = index_sample(&mut rng, p.catalog_size, wanted).into_vec();
        picked.sort_unstable();
        for item in picked {
            requests.push(Request { dest, item, deadline_s });
        }
    }
    Scenario::new(
        vec![p.src_access_mbps; p.sources],
        vec![p.dest_access_mbps; p.dests],
        catalog.item_mbit,
        catalog.presence,
        requests,
        vec![vec![p.vpn_cap_mbps; p.dests]; p.sources],
        cost_matrix(p),
    )
    .expect("heterogeneous generator builds consistent dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_scenario;

    #[test]
    fn uniform_generator_matches_reference_demands() {
        let s = gen_uniform(&UniformParams::default());
        assert!(validate_scenario(&s).is_valid());
        assert_eq!(s.num_sources(), 4);
        assert_eq!(s.num_dests(), 20);
        assert_eq!(s.requests.len(), 20);
        let rate = s.demand_mbps(&s.requests[0]);
        assert!((rate - 148.14814814814815).abs() < 1e-9);
        assert!(s.presence.iter().flatten().all(|&b| b));
    }

    #[test]
    fn heterogeneous_is_seed_deterministic() {
        let p = HetParams::default();
        let a = gen_heterogeneous(&p, 42, 0);
        let b = gen_heterogeneous(&p, 42, 0);
        assert_eq!(a, b);
        let c = gen_heterogeneous(&p, 43, 0);
        assert_ne!(a.item_mbit, c.item_mbit, "different seed, different catalog");
    }

    #[test]
    fn small_fleets_clamp_replication_instead_of_panicking() {
        let p = HetParams { sources: 2, dests: 2, ..HetParams::default() };
        let s = gen_heterogeneous(&p, 3, 0);
        assert!(validate_scenario(&s).is_valid());
        // copies_per_item (3) exceeds the fleet size, so every item lands on both sources.
        for l in 0..p.catalog_size {
            assert!((0..2).all(|j| s.presence[j][l]));
        }
    }

    #[test]
    fn samples_share_the_catalog_but_not_the_demand() {
        let p = HetParams::default();
        let s0 = gen_heterogeneous(&p, 7, 0);
        let s5 = gen_heterogeneous(&p, 7, 5);
        assert_eq!(s0.item_mbit, s5.item_mbit);
        assert_eq!(s0.presence, s5.presence);
        assert_ne!(s0.requests, s5.requests, "demand stream must differ per sample");
    }

    #[test]
    fn heterogeneous_respects_parameter_ranges() {
        let p = HetParams::default();
        for sample in 0..20 {
            let s = gen_heterogeneous(&p, 11, sample);
            assert!(validate_scenario(&s).is_valid(), "sample {sample}");
            for &d in &s.item_mbit {
                let gb = d / MBIT_PER_GB;
                assert!((130.0..=270.0).contains(&gb), "item size {gb} GB out of range");
            }
            for l in 0..p.catalog_size {
                let copies = (0..p.sources).filter(|&j| s.presence[j][l]).count();
                assert_eq!(copies, 3, "item {l} must sit on exactly 3 sources");
            }
            assert_eq!(s.requests.len(), 40);
            for dest in 0..p.dests {
                let of_dest: Vec<_> =
                    s.requests.iter().filter(|r| r.dest == dest).collect();
                assert_eq!(of_dest.len(), 2);
                assert_ne!(of_dest[0].item, of_dest[1].item, "items must be distinct");
                assert_eq!(
                    of_dest[0].deadline_s, of_dest[1].deadline_s,
                    "one deadline per destination"
                );
                let hours = of_dest[0].deadline_s / SECONDS_PER_HOUR;
                assert_eq!(hours.fract(), 0.0, "deadlines are whole hours");
                assert!((6.0..=12.0).contains(&hours));
            }
        }
    }

    #[test]
    fn cost_variants_shape_the_matrix() {
        let cheap = CostFunction::linear(1.0, 0.01);
        let dear = CostFunction::linear(3.0, 0.03);

        let p2 = HetParams { variant: CostVariant::ExpensiveSource, ..Default::default() };
        let s2 = gen_heterogeneous(&p2, 1, 0);
        assert!(s2.cost[0].iter().all(|f| *f == dear), "source 0 is expensive");
        for j in 1..4 {
            assert!(s2.cost[j].iter().all(|f| *f == cheap));
        }

        let p3 = HetParams { variant: CostVariant::Clustered, ..Default::default() };
        let s3 = gen_heterogeneous(&p3, 1, 0);
        for j in 0..4 {
            for i in 0..20 {
                let want = if (j < 2) == (i < 10) { cheap } else { dear };
                assert_eq!(s3.cost[j][i], want, "pair ({j},{i})");
            }
        }
    }

    #[test]
    fn variant_names_parse() {
        assert_eq!("1".parse::<CostVariant>().unwrap(), CostVariant::Uniform);
        assert_eq!(
            "expensive-source".parse::<CostVariant>().unwrap(),
            CostVariant::ExpensiveSource
        );
        assert_eq!("clustered".parse::<CostVariant>().unwrap(), CostVariant::Clustered);
        assert!("4".parse::<CostVariant>().is_err());
    }

    #[test]
    fn uniform_params_convert_to_oracle_instance() {
        let p = UniformParams::default();
        let u = p.instance();
        assert_eq!(u.sources, 4);
        assert!((u.item_mbit - 1.6e6).abs() < 1e-9);
        assert!((u.deadline_s - 10800.0).abs() < 1e-9);
    }
}
