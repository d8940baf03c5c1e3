//! Shared fixtures for the criterion benchmarks.

use mckc_core::cckp::{CckpInstance, SupplyVector};
use mckc_core::model::{CapacityClass, Distance, MckcInstance};
use mckc_core::num::int;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Facilities and clients on a 20×20 grid under L1, unit weights, three
/// capacity types with enough total capacity for every client.
pub fn grid_instance(nf: usize, nc: usize, soft: bool, seed: u64) -> MckcInstance {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(i128, i128)> = (0..nf + nc).map(|_| (r.gen_range(0..20), r.gen_range(0..20))).collect();
    let distance = pts
        .iter()
        .map(|a| pts.iter().map(|b| Distance::Finite(int((a.0 - b.0).abs() + (a.1 - b.1).abs()))).collect())
        .collect();
    let per = (nf as u64 / 3).max(1);
    let big = (nc as i128 / per as i128).max(3);
    let profile = vec![CapacityClass::new(per, int(1)), CapacityClass::new(per, int(2)), CapacityClass::new(per, int(big))];
    MckcInstance::with_matrix(nf, nc, distance, profile, soft)
}

/// Q||C_min instance with integer demands and capacities in [1, 32].
pub fn qcmin_instance(m: usize, types: usize, copies: u64, seed: u64) -> (CckpInstance, SupplyVector) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let demands = (0..m).map(|_| int(r.gen_range(1..=32))).collect();
    let caps = (0..types).map(|_| int(r.gen_range(1..=32))).collect();
    let mut supply = vec![0u64; types];
    for _ in 0..copies {
        supply[r.gen_range(0..types)] += 1;
    }
    (CckpInstance::qcmin(demands, caps), SupplyVector(supply))
}

/// Smallest candidate radius at which the LP relaxation is feasible.
pub fn lp_radius(inst: &MckcInstance) -> mckc_core::num::Rational {
    use mckc_core::fractional::MckcLp;
    use mckc_core::graph::ThresholdGraph;
    use mckc_core::lp::{solve, LpOutcome};
    inst.candidate_radii()
        .into_iter()
        .find(|r| {
            let lp = MckcLp::build(inst, &ThresholdGraph::build(inst, r));
            matches!(solve(&lp.system), Ok(LpOutcome::Feasible { .. }))
        })
        .expect("some radius is LP-feasible")
}
