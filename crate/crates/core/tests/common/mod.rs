//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mckc_core::cckp::{Allocation, CckpInstance, Machine, SupplyVector};
use mckc_core::maxmin::config::{config_size, config_value, Config, ConfigurationLpSolution};
use mckc_core::model::{CapacityClass, Distance, MckcInstance};
use mckc_core::num::{int, rat, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Points on a 10×10 grid under the L1 metric, unit client weights, up to
/// `max_types` strictly increasing integer capacities, and enough copies
/// that total capacity covers every client.
pub fn random_mckc(r: &mut ChaCha8Rng, max_f: usize, max_c: usize, max_types: usize, max_copies: u64, soft: bool) -> MckcInstance {
    loop {
        let nf = r.gen_range(1..=max_f);
        let nc = r.gen_range(1..=max_c);
        let pts: Vec<(i128, i128)> = (0..nf + nc).map(|_| (r.gen_range(0..10), r.gen_range(0..10))).collect();
        let distance = pts
            .iter()
            .map(|a| pts.iter().map(|b| Distance::Finite(int((a.0 - b.0).abs() + (a.1 - b.1).abs()))).collect())
            .collect();
        let np = r.gen_range(1..=max_types);
        let mut caps: Vec<i128> = (1..=8).collect();
        caps.shuffle(r);
        let mut caps: Vec<i128> = caps[..np].to_vec();
        caps.sort_unstable();
        let mut profile: Vec<CapacityClass> = caps.iter().map(|&c| CapacityClass::new(r.gen_range(1..=3), int(c))).collect();
        while profile.iter().map(|c| c.count).sum::<u64>() > max_copies {
            let p = r.gen_range(0..profile.len());
            if profile[p].count > 1 {
                profile[p].count -= 1;
            } else if profile.len() > 1 {
                profile.remove(p);
            }
        }
        let total: Rational = profile.iter().map(|c| c.capacity * int(c.count as i128)).sum();
        if total >= int(nc as i128) {
            return MckcInstance::with_matrix(nf, nc, distance, profile, soft);
        }
    }
}

/// A planted allocation: random configurations per machine, demands equal
/// to (or a little below) what the configuration delivers, and a supply
/// that covers every planted job. Returns the instance, the supply and the
/// planted allocation.
pub fn planted_cckp(r: &mut ChaCha8Rng, max_m: usize, max_types: usize, max_jobs: usize, cardinalities: bool) -> (CckpInstance, SupplyVector, Allocation) {
    let m = r.gen_range(1..=max_m);
    let n = r.gen_range(1..=max_types);
    let mut caps: Vec<Rational> = (0..n).map(|_| int(r.gen_range(1..=16))).collect();
    caps.sort();
    caps.dedup();
    let n = caps.len();
    let mut jobs = vec![Vec::new(); m];
    let mut used = vec![0u64; n];
    let mut left = max_jobs.max(m);
    for (i, list) in jobs.iter_mut().enumerate() {
        let room = left - (m - i - 1);
        let k = r.gen_range(1..=room.clamp(1, 3));
        left -= k;
        for _ in 0..k {
            let j = r.gen_range(0..n);
            list.push(j);
            used[j] += 1;
        }
    }
    let machines = jobs
        .iter()
        .map(|list: &Vec<usize>| {
            let got: Rational = list.iter().map(|&j| caps[j]).sum();
            let demand = if r.gen_bool(0.5) { got } else { (got - int(r.gen_range(0..=2))).max(int(1)) };
            let card = (cardinalities && r.gen_bool(0.6)).then(|| list.len() as u64 + r.gen_range(0..=1));
            Machine::new(demand, card)
        })
        .collect();
    let extra: Vec<u64> = used.iter().map(|_| if r.gen_bool(0.3) { 1 } else { 0 }).collect();
    let supply = SupplyVector(used.iter().zip(&extra).map(|(a, b)| a + b).collect());
    (CckpInstance::new(machines, caps), supply, Allocation { jobs })
}

/// Random Q||C_min instance: up to `max_m` machines, integer demands and
/// capacities in [1,16], at most `max_copies` job copies.
pub fn random_qcmin(r: &mut ChaCha8Rng, max_m: usize, max_copies: u64) -> (CckpInstance, SupplyVector) {
    let m = r.gen_range(1..=max_m);
    let n = r.gen_range(1..=4usize);
    let demands = (0..m).map(|_| int(r.gen_range(1..=16))).collect();
    let caps = (0..n).map(|_| int(r.gen_range(1..=16))).collect();
    let mut supply = vec![0u64; n];
    let copies = r.gen_range(0..=max_copies);
    for _ in 0..copies {
        supply[r.gen_range(0..n)] += 1;
    }
    (CckpInstance::qcmin(demands, caps), SupplyVector(supply))
}

/// Planted configuration LP point with exact weights: each machine mixes one
/// to three configurations, every one of which is feasible at its demand.
pub fn planted_configuration(r: &mut ChaCha8Rng, max_m: usize, n: usize) -> (CckpInstance, ConfigurationLpSolution<Rational>) {
    let m = r.gen_range(1..=max_m);
    let mut caps: Vec<Rational> = (0..n).map(|_| int(r.gen_range(1..=12))).collect();
    caps.sort();
    caps.dedup();
    let n = caps.len();
    let probe = CckpInstance::qcmin(vec![int(1)], caps.clone());
    let mut rows = Vec::new();
    let mut machines = Vec::new();
    for _ in 0..m {
        let k = r.gen_range(1..=3);
        let configs: Vec<Config> = (0..k)
            .map(|_| {
                let mut c = vec![0u64; n];
                for _ in 0..r.gen_range(1..=3) {
                    c[r.gen_range(0..n)] += 1;
                }
                c
            })
            .collect();
        let demand = configs.iter().map(|c| config_value(&probe, c)).min().unwrap();
        let card = r.gen_bool(0.5).then(|| configs.iter().map(config_size).max().unwrap());
        machines.push(Machine::new(demand, card));
        let denom = r.gen_range(1..=6) as i128;
        let mut weights = vec![0i128; configs.len()];
        for _ in 0..denom {
            weights[r.gen_range(0..configs.len())] += 1;
        }
        let mut row: BTreeMap<Config, Rational> = BTreeMap::new();
        for (c, w) in configs.into_iter().zip(weights) {
            if w > 0 {
                *row.entry(c).or_insert(int(0)) += rat(w, denom);
            }
        }
        rows.push(row);
    }
    (CckpInstance::new(machines, caps), ConfigurationLpSolution { z: rows })
}
