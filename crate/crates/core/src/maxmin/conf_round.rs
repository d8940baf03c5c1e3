//! O(log D) rounding of a configuration LP point for CCKP.
//!
//! Demands are bucketed to powers of two above D_min. A job is large for a
//! machine when c_j >= D̄_i / (3λ) with λ = max(1, log2 D). Large
//! configurations are collapsed to singletons, then pivoting removes fully
//! large machines and leaves at most one hybrid per bucket; hybrids are
//! matched to large jobs and the rest go through a residual assignment LP
//! and Shmoys–Tardos.

use std::collections::BTreeMap;

use crate::cckp::{Allocation, CckpInstance, SupplyVector};
use crate::flow::FlowNetwork;
use crate::lp::{self, LinearSystem, LpOutcome, Relation, Sense};
use crate::maxmin::config::{check_configuration_lp, singleton, Config, ConfigViolation, ConfigurationLpSolution};
use crate::maxmin::shmoys_tardos::{shmoys_tardos_round, RoundingError};
use crate::num::{int, to_f64, Rational};

const TOL: f64 = 1e-9;
const PIVOT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfRoundError {
    #[error("input is not a configuration LP point: {0}")]
    Invalid(#[from] ConfigViolation),
    #[error("residual LP failed: {0}")]
    Lp(String),
    #[error("residual rounding failed: {0}")]
    Rounding(#[from] RoundingError),
    #[error("pivoting did not terminate")]
    Stuck,
    #[error("rounded machines overuse job type {0}")]
    Supply(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfRoundReport {
    pub allocation: Allocation,
    pub lambda: f64,
    /// Rounded-down demands D̄_i.
    pub bucket_demand: Vec<Rational>,
    /// Machines rounded to a single configuration (Steps 2 and 3).
    pub rounded: Vec<bool>,
    /// Largest t with Σ_j z_ij c_j >= t·D̄_i in the residual LP.
    pub residual_t: Option<f64>,
}

/// max(1, log2(D_max / D_min)).
pub fn log_spread(inst: &CckpInstance) -> f64 {
    to_f64(&inst.demand_spread()).log2().max(1.0)
}

/// (bucket index, D_min·2^bucket) with D_min·2^b <= D_i < D_min·2^(b+1).
pub fn bucket_of(d: Rational, dmin: Rational) -> (u32, Rational) {
    let mut b = 0;
    let mut level = dmin;
    while level * int(2) <= d {
        level *= int(2);
        b += 1;
    }
    (b, level)
}

struct State<'a> {
    inst: &'a CckpInstance,
    bucket: Vec<u32>,
    large: Vec<Vec<bool>>,
    z: Vec<BTreeMap<Config, f64>>,
    rounded: Vec<bool>,
}

impl State<'_> {
    fn add(&mut self, i: usize, s: &Config, delta: f64) {
        let v = self.z[i].entry(s.clone()).or_insert(0.0);
        *v += delta;
        if v.abs() < TOL {
            self.z[i].remove(s);
        }
    }

    fn get(&self, i: usize, s: &Config) -> f64 {
        self.z[i].get(s).copied().unwrap_or(0.0)
    }

    fn large_job(&self, i: usize, s: &Config) -> Option<usize> {
        if s.iter().sum::<u64>() != 1 {
            return None;
        }
        let j = s.iter().position(|&n| n == 1)?;
        self.large[i][j].then_some(j)
    }

    fn z_large(&self, i: usize) -> f64 {
        self.z[i].iter().filter(|(s, _)| self.large_job(i, s).is_some()).map(|(_, w)| w).sum()
    }

    /// Marks `i` rounded once a configuration reaches weight one.
    fn settle(&mut self, i: usize) {
        if self.rounded[i] {
            return;
        }
        if let Some(s) = self.z[i].iter().find(|(_, &w)| w >= 1.0 - TOL).map(|(s, _)| s.clone()) {
            self.z[i] = BTreeMap::from([(s, 1.0)]);
            self.rounded[i] = true;
        }
    }

    fn is_large_machine(&self, i: usize) -> bool {
        !self.rounded[i] && self.z_large(i) >= 1.0 - TOL
    }

    fn is_hybrid(&self, i: usize) -> bool {
        if self.rounded[i] {
            return false;
        }
        let zl = self.z_large(i);
        zl > TOL && zl < 1.0 - TOL
    }

    fn fix_large_machine(&mut self, i: usize) -> Result<(), ConfRoundError> {
        let n = self.inst.num_types();
        for _ in 0..PIVOT_CAP {
            self.settle(i);
            if self.rounded[i] {
                return Ok(());
            }
            let mut cands: Vec<usize> = self.z[i].keys().filter_map(|s| self.large_job(i, s)).collect();
            cands.sort_by(|&a, &b| self.inst.capacity(a).cmp(&self.inst.capacity(b)).then(a.cmp(&b)));
            let j1 = cands[0];
            let Some(&j2) = cands.get(1) else {
                // A lone fractional singleton: the rest is float dust.
                self.z[i] = BTreeMap::from([(singleton(n, j1), 1.0)]);
                self.rounded[i] = true;
                return Ok(());
            };
            let claim = (0..self.z.len())
                .filter(|&k| k != i && !self.rounded[k])
                .find_map(|k| self.z[k].keys().find(|s| s[j1] > 0).map(|s| (k, s.clone())));
            let Some((k, s)) = claim else {
                self.z[i] = BTreeMap::from([(singleton(n, j1), 1.0)]);
                self.rounded[i] = true;
                return Ok(());
            };
            let t = if self.large[k][j2] {
                singleton(n, j2)
            } else {
                let mut t = s.clone();
                t[j1] -= 1;
                t[j2] += 1;
                t
            };
            let (s1, s2) = (singleton(n, j1), singleton(n, j2));
            let delta = self.get(i, &s2).min(self.get(k, &s)).min(1.0 - self.get(i, &s1)).min(1.0 - self.get(k, &t));
            self.add(i, &s2, -delta);
            self.add(k, &s, -delta);
            self.add(i, &s1, delta);
            self.add(k, &t, delta);
            self.settle(k);
        }
        Err(ConfRoundError::Stuck)
    }

    fn fix_bucket(&mut self, b: u32) -> Result<(), ConfRoundError> {
        for _ in 0..PIVOT_CAP {
            let mut hyb: Vec<usize> = (0..self.z.len()).filter(|&k| self.bucket[k] == b && self.is_hybrid(k)).collect();
            if hyb.len() <= 1 {
                return Ok(());
            }
            let card = |k: usize| self.inst.machines[k].cardinality.unwrap_or(u64::MAX);
            hyb.sort_by_key(|&k| (card(k), k));
            let (i, k) = (hyb[0], hyb[1]);
            let big = self.z[k].keys().find(|s| self.large_job(k, s).is_some()).cloned().expect("hybrid has a large configuration");
            let small = self.z[i].keys().find(|s| self.large_job(i, s).is_none()).cloned().expect("hybrid has a small configuration");
            let delta = self.get(k, &big).min(self.get(i, &small)).min(1.0 - self.get(i, &big)).min(1.0 - self.get(k, &small));
            self.add(k, &big, -delta);
            self.add(i, &small, -delta);
            self.add(i, &big, delta);
            self.add(k, &small, delta);
            self.settle(i);
            self.settle(k);
        }
        Err(ConfRoundError::Stuck)
    }
}

/// Rounds `z` (feasible for (C1)-(C3) with integer `supply`) to an
/// allocation giving every machine at least D_i / (6λ).
pub fn conf_lp_round(
    inst: &CckpInstance,
    supply: &SupplyVector,
    z: &ConfigurationLpSolution<f64>,
) -> Result<ConfRoundReport, ConfRoundError> {
    let (m, n) = (inst.num_machines(), inst.num_types());
    check_configuration_lp(inst, &supply.as_f64(), z, &int(1))?;
    let lambda = log_spread(inst);
    let Some(dmin) = inst.machines.iter().map(|mc| mc.demand).min() else {
        return Ok(ConfRoundReport { allocation: Allocation::empty(0), lambda, bucket_demand: vec![], rounded: vec![], residual_t: None });
    };
    let (bucket, dbar): (Vec<u32>, Vec<Rational>) = (0..m).map(|i| bucket_of(inst.demand(i), dmin)).unzip();
    let large: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..n).map(|j| to_f64(&inst.capacity(j)) * 3.0 * lambda >= to_f64(&dbar[i]) * (1.0 - 1e-12)).collect())
        .collect();

    // Step 1: collapse configurations holding a large job to its largest large job.
    let mut st = State { inst, bucket, large, z: vec![BTreeMap::new(); m], rounded: vec![false; m] };
    for i in 0..m {
        for (s, &w) in &z.z[i] {
            if w <= TOL {
                continue;
            }
            let big = (0..n)
                .filter(|&j| s[j] > 0 && st.large[i][j])
                .max_by(|&a, &b| inst.capacity(a).cmp(&inst.capacity(b)).then(b.cmp(&a)));
            let target = big.map_or_else(|| s.clone(), |j| singleton(n, j));
            st.add(i, &target, w);
        }
        st.settle(i);
    }

    // Step 2.
    let mut buckets: Vec<u32> = st.bucket.clone();
    buckets.sort_unstable();
    buckets.dedup();
    let mut guard = 0;
    loop {
        for &b in &buckets {
            st.fix_bucket(b)?;
        }
        match (0..m).find(|&i| st.is_large_machine(i)) {
            None => break,
            Some(i) => st.fix_large_machine(i)?,
        }
        guard += 1;
        if guard > m + 1 {
            return Err(ConfRoundError::Stuck);
        }
    }

    // Step 3.
    let hybrids: Vec<usize> = (0..m).filter(|&i| st.is_hybrid(i)).collect();
    let k_h = hybrids.len().max(1) as f64;
    let mut keep = Vec::new();
    for &i in &hybrids {
        if st.z_large(i) <= 1.0 - 1.0 / k_h + TOL {
            let row = st.large[i].clone();
            st.z[i].retain(|s, _| st_large_job(&row, s).is_none());
        } else {
            keep.push(i);
        }
    }
    let remaining = |st: &State| -> Vec<i64> {
        let mut left: Vec<i64> = supply.0.iter().map(|&v| v as i64).collect();
        for i in (0..m).filter(|&i| st.rounded[i]) {
            for (s, _) in &st.z[i] {
                for j in 0..n {
                    left[j] -= s[j] as i64;
                }
            }
        }
        left
    };
    let left = remaining(&st);
    if let Some(j) = left.iter().position(|&v| v < 0) {
        return Err(ConfRoundError::Supply(j));
    }
    let mut used_by_match = vec![0u64; n];
    if !keep.is_empty() {
        let (src, sink) = (keep.len() + n, keep.len() + n + 1);
        let mut net = FlowNetwork::new(sink + 1);
        let mut arcs = vec![Vec::new(); keep.len()];
        for (a, &i) in keep.iter().enumerate() {
            net.add_edge(src, a, 1);
            for (s, _) in &st.z[i] {
                if let Some(j) = st_large_job(&st.large[i], s) {
                    arcs[a].push((j, net.add_edge(a, keep.len() + j, 1)));
                }
            }
        }
        for j in 0..n {
            net.add_edge(keep.len() + j, sink, left[j].max(0));
        }
        net.max_flow(src, sink);
        for (a, &i) in keep.iter().enumerate() {
            match arcs[a].iter().find(|(_, arc)| net.flow(*arc) > 0) {
                Some(&(j, _)) => {
                    st.z[i] = BTreeMap::from([(singleton(n, j), 1.0)]);
                    st.rounded[i] = true;
                    used_by_match[j] += 1;
                }
                None => {
                    let row = st.large[i].clone();
                    st.z[i].retain(|s, _| st_large_job(&row, s).is_none());
                }
            }
        }
    }
    let open: Vec<usize> = (0..m).filter(|&i| !st.rounded[i]).collect();
    for i in open {
        let old = std::mem::take(&mut st.z[i]);
        for (mut s, w) in old {
            for j in 0..n {
                s[j] = s[j].saturating_sub(used_by_match[j]);
            }
            st.add(i, &s, w);
        }
    }

    // Step 4.
    let left = remaining(&st);
    if let Some(j) = left.iter().position(|&v| v < 0) {
        return Err(ConfRoundError::Supply(j));
    }
    let mut alloc = Allocation::empty(m);
    for i in (0..m).filter(|&i| st.rounded[i]) {
        let (s, _) = st.z[i].iter().next().expect("rounded machine has a configuration");
        for j in 0..n {
            alloc.jobs[i].extend(std::iter::repeat_n(j, s[j] as usize));
        }
    }
    let rest: Vec<usize> = (0..m).filter(|&i| !st.rounded[i]).collect();
    let mut residual_t = None;
    if !rest.is_empty() {
        let mut sys = LinearSystem::new();
        let t = sys.add_var("t", Some(0.0), Some(1.0));
        let mut var = vec![vec![None; n]; rest.len()];
        for (a, &i) in rest.iter().enumerate() {
            for j in (0..n).filter(|&j| !st.large[i][j] && left[j] > 0) {
                var[a][j] = Some(sys.add_nonneg(format!("z_{i}_{j}")));
            }
        }
        for j in 0..n {
            let coeffs: Vec<(usize, f64)> = var.iter().filter_map(|r| r[j].map(|v| (v, 1.0))).collect();
            if !coeffs.is_empty() {
                sys.add_constraint(coeffs, Relation::Le, left[j] as f64);
            }
        }
        for (a, &i) in rest.iter().enumerate() {
            let row: Vec<usize> = var[a].iter().flatten().copied().collect();
            if let Some(f) = inst.machines[i].cardinality {
                if !row.is_empty() {
                    sys.add_constraint(row.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, f as f64);
                }
            }
            // Normalized by D̄_i so the rows stay well scaled.
            let scale = to_f64(&dbar[i]);
            let mut coeffs: Vec<(usize, f64)> =
                (0..n).filter_map(|j| var[a][j].map(|v| (v, to_f64(&inst.capacity(j)) / scale))).collect();
            coeffs.push((t, -1.0));
            sys.add_constraint(coeffs, Relation::Ge, 0.0);
        }
        sys.set_objective(Sense::Maximize, vec![(t, 1.0)]);
        let point = match lp::solve(&sys).map_err(|e| ConfRoundError::Lp(e.to_string()))? {
            LpOutcome::Feasible { point, .. } => point,
            other => return Err(ConfRoundError::Lp(format!("{other:?}"))),
        };
        residual_t = Some(point[t]);
        let sub = CckpInstance::new(rest.iter().map(|&i| inst.machines[i].clone()).collect(), inst.job_capacities.clone());
        let zs: Vec<Vec<f64>> = var.iter().map(|r| r.iter().map(|v| v.map_or(0.0, |v| point[v].max(0.0))).collect()).collect();
        let sub_supply = SupplyVector(left.iter().map(|&v| v as u64).collect());
        let part = shmoys_tardos_round(&sub, &sub_supply, &zs)?;
        for (a, &i) in rest.iter().enumerate() {
            alloc.jobs[i] = part.jobs[a].clone();
        }
    }
    Ok(ConfRoundReport { allocation: alloc, lambda, bucket_demand: dbar, rounded: st.rounded, residual_t })
}

fn st_large_job(large: &[bool], s: &Config) -> Option<usize> {
    if s.iter().sum::<u64>() != 1 {
        return None;
    }
    let j = s.iter().position(|&n| n == 1)?;
    large[j].then_some(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::num::rat;

    #[test]
    fn buckets_are_powers_of_two_above_the_minimum() {
        assert_eq!(bucket_of(int(1), int(1)), (0, int(1)));
        assert_eq!(bucket_of(rat(7, 2), int(1)), (1, int(2)));
        assert_eq!(bucket_of(int(4), int(1)), (2, int(4)));
    }

    #[test]
    fn singleton_machine() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(4)]);
        let mut z = ConfigurationLpSolution::new(1);
        z.z[0].insert(vec![1], 1.0);
        let r = conf_lp_round(&inst, &SupplyVector(vec![1]), &z).unwrap();
        assert_eq!(r.allocation.jobs, vec![vec![0]]);
    }

    #[test]
    fn two_machines_sharing_two_big_jobs() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1)), Machine::new(int(4), Some(1))], vec![int(4), int(5)]);
        let mut z = ConfigurationLpSolution::new(2);
        z.z[0].insert(vec![1, 0], 0.5);
        z.z[0].insert(vec![0, 1], 0.5);
        z.z[1].insert(vec![1, 0], 0.5);
        z.z[1].insert(vec![0, 1], 0.5);
        let supply = SupplyVector(vec![1, 1]);
        let r = conf_lp_round(&inst, &supply, &z).unwrap();
        r.allocation.validate(&inst, &supply).unwrap();
        assert!(r.allocation.min_ratio(&inst) >= int(1));
    }

    #[test]
    fn invalid_point_is_rejected() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(4)]);
        let z = ConfigurationLpSolution::new(1);
        assert!(matches!(conf_lp_round(&inst, &SupplyVector(vec![1]), &z), Err(ConfRoundError::Invalid(_))));
    }
}
