//! Enumeration-based approximation scheme for CCKP.
//!
//! Demands are rounded down to powers of (1+ε) and capacities up to
//! ε(1+ε)^t. Jobs with c >= ε·D are big for a machine. Machines sharing a
//! rounded demand and a cardinality form a group; every group guesses how
//! many of its machines take each minimal big-job configuration, and the
//! small jobs are placed by the assignment LP plus Shmoys–Tardos.
//! Cardinalities are kept exact, so no trimming step is needed.

use std::collections::BTreeMap;

use crate::cckp::{Allocation, CckpInstance, SupplyVector};
use crate::lp::{self, LinearSystem, LpOutcome, Relation};
use crate::maxmin::shmoys_tardos::shmoys_tardos_round;
use crate::num::{approx_rational, int, to_f64, Rational};

/// Search nodes allowed before the guard trips.
pub const QPTAS_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QptasError {
    #[error("epsilon must lie in (0, 1/3)")]
    Epsilon,
    #[error("enumeration exceeded {0} nodes")]
    Guard(u64),
    #[error("supply length does not match the instance")]
    Shape,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QptasOutcome {
    Allocation(Allocation),
    Infeasible,
}

struct Group {
    exp: i64,
    demand: f64,
    card: Option<u64>,
    machines: Vec<usize>,
    /// Minimal big configurations as counts per rounded class.
    configs: Vec<Vec<u64>>,
}

struct Search<'a> {
    inst: &'a CckpInstance,
    eps_r: Rational,
    class_cap: Vec<f64>,
    class_exp: Vec<i64>,
    class_supply: Vec<u64>,
    /// Real type indices per class, largest capacity first.
    class_types: Vec<Vec<usize>>,
    groups: Vec<Group>,
    supply: &'a SupplyVector,
    nodes: u64,
}

fn lattice_exp(v: f64, base: f64, up: bool) -> i64 {
    let mut e = (v.ln() / base.ln()).floor() as i64;
    // Correct float drift in both directions.
    while base.powi(e as i32 + 1) <= v * (1.0 + 1e-12) {
        e += 1;
    }
    while base.powi(e as i32) > v * (1.0 + 1e-12) {
        e -= 1;
    }
    if up && base.powi(e as i32) < v * (1.0 - 1e-12) {
        e += 1;
    }
    e
}

pub fn qptas_cckp(inst: &CckpInstance, supply: &SupplyVector, eps: &Rational) -> Result<QptasOutcome, QptasError> {
    let e = to_f64(eps);
    if !(e > 0.0 && e < 1.0 / 3.0) {
        return Err(QptasError::Epsilon);
    }
    if supply.0.len() != inst.num_types() {
        return Err(QptasError::Shape);
    }
    let base = 1.0 + e;
    // Rounded classes of job types with positive supply.
    let mut by_exp: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for j in (0..inst.num_types()).filter(|&j| supply.0[j] > 0) {
        by_exp.entry(lattice_exp(to_f64(&inst.capacity(j)) / e, base, true)).or_default().push(j);
    }
    let mut s = Search {
        inst,
        eps_r: *eps,
        class_cap: Vec::new(),
        class_exp: Vec::new(),
        class_supply: Vec::new(),
        class_types: Vec::new(),
        groups: Vec::new(),
        supply,
        nodes: 0,
    };
    for (&t, types) in &by_exp {
        let mut types = types.clone();
        types.sort_by(|&a, &b| inst.capacity(b).cmp(&inst.capacity(a)).then(a.cmp(&b)));
        s.class_exp.push(t);
        s.class_cap.push(e * base.powi(t as i32));
        s.class_supply.push(types.iter().map(|&j| supply.0[j]).sum());
        s.class_types.push(types);
    }
    let mut keyed: BTreeMap<(i64, Option<u64>), Vec<usize>> = BTreeMap::new();
    for i in 0..inst.num_machines() {
        let r = lattice_exp(to_f64(&inst.demand(i)), base, false);
        keyed.entry((r, inst.machines[i].cardinality)).or_default().push(i);
    }
    for ((r, card), machines) in keyed {
        let demand = base.powi(r as i32);
        let mut g = Group { exp: r, demand, card, machines, configs: Vec::new() };
        let mut cur = vec![0u64; s.class_cap.len()];
        let mut configs = Vec::new();
        s.minimal_configs(&g, 0, &mut cur, 0.0, None, &mut configs);
        g.configs = configs;
        s.groups.push(g);
    }
    let mut plan: Vec<Vec<u64>> = vec![Vec::new(); inst.num_machines()];
    let left = s.class_supply.clone();
    match s.enumerate(0, 0, &mut plan, left)? {
        Some(alloc) => Ok(QptasOutcome::Allocation(alloc)),
        None => Ok(QptasOutcome::Infeasible),
    }
}

impl Search<'_> {
    /// All φ over big classes with |φ| <= f, within supply, and
    /// cap(φ) − min item <= demand (minimality).
    fn minimal_configs(&self, g: &Group, k: usize, cur: &mut Vec<u64>, cap: f64, min: Option<f64>, out: &mut Vec<Vec<u64>>) {
        if k == self.class_cap.len() {
            out.push(cur.clone());
            return;
        }
        if self.class_exp[k] < g.exp {
            self.minimal_configs(g, k + 1, cur, cap, min, out);
            return;
        }
        let size: u64 = cur.iter().sum();
        let c = self.class_cap[k];
        let mut n = 0u64;
        loop {
            let new_cap = cap + n as f64 * c;
            let new_min = if n > 0 { Some(min.unwrap_or(c)) } else { min };
            if let Some(mn) = new_min {
                if new_cap - mn > g.demand * (1.0 + 1e-9) {
                    break;
                }
            }
            cur[k] = n;
            self.minimal_configs(g, k + 1, cur, new_cap, new_min, out);
            n += 1;
            if n > self.class_supply[k] || g.card.is_some_and(|f| size + n > f) {
                break;
            }
        }
        cur[k] = 0;
    }

    fn enumerate(&mut self, g: usize, m: usize, plan: &mut Vec<Vec<u64>>, left: Vec<u64>) -> Result<Option<Allocation>, QptasError> {
        self.nodes += 1;
        if self.nodes > QPTAS_NODE_LIMIT {
            return Err(QptasError::Guard(QPTAS_NODE_LIMIT));
        }
        if g == self.groups.len() {
            return Ok(self.finish(plan, &left));
        }
        if m == self.groups[g].machines.len() {
            if !self.relaxation_feasible(g + 1, plan, &left) {
                return Ok(None);
            }
            return self.enumerate(g + 1, 0, plan, left);
        }
        // Machines of a group take configurations in nonincreasing index order.
        let start = if m == 0 { self.groups[g].configs.len() } else { self.last_choice(g, m, plan) + 1 };
        for c in (0..start).rev() {
            let cfg = self.groups[g].configs[c].clone();
            if cfg.iter().zip(&left).any(|(a, b)| a > b) {
                continue;
            }
            let next: Vec<u64> = left.iter().zip(&cfg).map(|(a, b)| a - b).collect();
            let i = self.groups[g].machines[m];
            plan[i] = cfg;
            if let Some(a) = self.enumerate(g, m + 1, plan, next)? {
                return Ok(Some(a));
            }
        }
        plan[self.groups[g].machines[m]] = Vec::new();
        Ok(None)
    }

    fn last_choice(&self, g: usize, m: usize, plan: &[Vec<u64>]) -> usize {
        let prev = &plan[self.groups[g].machines[m - 1]];
        self.groups[g].configs.iter().position(|c| c == prev).expect("previous machine holds a listed configuration")
    }

    /// Assignment LP over every machine: fixed groups use small classes and
    /// residual demand; the others may still use any class.
    fn relaxation_feasible(&self, fixed_groups: usize, plan: &[Vec<u64>], left: &[u64]) -> bool {
        let rows: Vec<(usize, f64, Option<u64>, bool)> = self
            .groups
            .iter()
            .enumerate()
            .flat_map(|(gi, g)| {
                g.machines.iter().map(move |&i| {
                    if gi < fixed_groups {
                        let (cap, size) = self.config_cap(&plan[i]);
                        (i, g.demand - cap, g.card.map(|f| f - size), true)
                    } else {
                        (i, g.demand, g.card, false)
                    }
                })
            })
            .collect();
        self.residual_lp(&rows, left).is_some()
    }

    fn config_cap(&self, cfg: &[u64]) -> (f64, u64) {
        let cap = cfg.iter().enumerate().map(|(k, &n)| n as f64 * self.class_cap[k]).sum();
        (cap, cfg.iter().sum())
    }

    fn group_exp(&self, i: usize) -> i64 {
        self.groups.iter().find(|g| g.machines.contains(&i)).map_or(0, |g| g.exp)
    }

    /// Rows are (machine, residual demand, residual cardinality, small only).
    fn residual_lp(&self, rows: &[(usize, f64, Option<u64>, bool)], left: &[u64]) -> Option<(Vec<f64>, Vec<Vec<Option<usize>>>)> {
        let nk = self.class_cap.len();
        let mut sys = LinearSystem::new();
        let mut var = vec![vec![None; nk]; rows.len()];
        for (a, &(i, _, _, small_only)) in rows.iter().enumerate() {
            let r = self.group_exp(i);
            for k in 0..nk {
                if left[k] > 0 && (!small_only || self.class_exp[k] < r) {
                    var[a][k] = Some(sys.add_nonneg(format!("z_{i}_{k}")));
                }
            }
        }
        for k in 0..nk {
            let coeffs: Vec<(usize, f64)> = var.iter().filter_map(|r| r[k].map(|v| (v, 1.0))).collect();
            if !coeffs.is_empty() {
                sys.add_constraint(coeffs, Relation::Le, left[k] as f64);
            }
        }
        for (a, &(_, demand, card, _)) in rows.iter().enumerate() {
            let vars: Vec<(usize, usize)> = (0..nk).filter_map(|k| var[a][k].map(|v| (k, v))).collect();
            if demand > 1e-9 {
                if vars.is_empty() {
                    return None;
                }
                // Scaled by the demand to keep rows comparable.
                let coeffs = vars.iter().map(|&(k, v)| (v, self.class_cap[k] / demand)).collect();
                sys.add_constraint(coeffs, Relation::Ge, 1.0);
            }
            if let Some(f) = card {
                if !vars.is_empty() {
                    sys.add_constraint(vars.iter().map(|&(_, v)| (v, 1.0)).collect(), Relation::Le, f as f64);
                }
            }
        }
        match lp::solve(&sys) {
            Ok(LpOutcome::Feasible { point, .. }) => Some((point, var)),
            _ => None,
        }
    }

    fn finish(&self, plan: &[Vec<u64>], left: &[u64]) -> Option<Allocation> {
        let m = self.inst.num_machines();
        let rows: Vec<(usize, f64, Option<u64>, bool)> = (0..m)
            .map(|i| {
                let g = self.groups.iter().find(|g| g.machines.contains(&i)).expect("machine grouped");
                let (cap, size) = self.config_cap(&plan[i]);
                (i, g.demand - cap, g.card.map(|f| f - size), true)
            })
            .collect();
        let (point, var) = self.residual_lp(&rows, left)?;
        let nk = self.class_cap.len();
        let sub = CckpInstance::new(
            rows.iter().map(|&(i, _, card, _)| crate::cckp::Machine::new(self.inst.demand(i), card)).collect(),
            self.class_cap.iter().map(|&c| approx_rational(c, 1_000_000)).collect(),
        );
        let z: Vec<Vec<f64>> = var.iter().map(|r| (0..nk).map(|k| r[k].map_or(0.0, |v| point[v].max(0.0))).collect()).collect();
        let small = shmoys_tardos_round(&sub, &SupplyVector(left.to_vec()), &z).ok()?;

        let mut pools: Vec<Vec<usize>> = (0..nk)
            .map(|k| {
                let mut pool = Vec::new();
                for &j in &self.class_types[k] {
                    pool.extend(std::iter::repeat_n(j, self.supply.0[j] as usize));
                }
                pool.reverse();
                pool
            })
            .collect();
        let mut alloc = Allocation::empty(m);
        for i in 0..m {
            for (k, &n) in plan[i].iter().enumerate() {
                for _ in 0..n {
                    alloc.jobs[i].push(pools[k].pop()?);
                }
            }
            for &k in &small.jobs[i] {
                alloc.jobs[i].push(pools[k].pop()?);
            }
        }
        let floor = int(1) - int(3) * self.eps_r;
        (0..m).all(|i| alloc.received(self.inst, i) >= floor * self.inst.demand(i)).then_some(alloc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::num::rat;

    #[test]
    fn single_unit_machine() {
        let inst = CckpInstance::new(vec![Machine::new(int(1), Some(1))], vec![int(1)]);
        let out = qptas_cckp(&inst, &SupplyVector(vec![1]), &rat(1, 5)).unwrap();
        assert_eq!(out, QptasOutcome::Allocation(Allocation { jobs: vec![vec![0]] }));
    }

    #[test]
    fn two_machines_two_slots() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(2)), Machine::new(int(4), Some(2))], vec![int(3), int(1)]);
        let supply = SupplyVector(vec![2, 2]);
        match qptas_cckp(&inst, &supply, &rat(1, 5)).unwrap() {
            QptasOutcome::Allocation(a) => {
                a.validate(&inst, &supply).unwrap();
                assert!(a.min_ratio(&inst) >= rat(2, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn blocked_supply_is_infeasible() {
        let inst = CckpInstance::new(vec![Machine::new(int(10), Some(1)), Machine::new(int(10), Some(1))], vec![int(10), int(1)]);
        let out = qptas_cckp(&inst, &SupplyVector(vec![1, 5]), &rat(1, 5)).unwrap();
        assert_eq!(out, QptasOutcome::Infeasible);
    }

    #[test]
    fn lattice_rounding() {
        assert_eq!(lattice_exp(1.0, 1.2, false), 0);
        assert_eq!(lattice_exp(1.3, 1.2, false), 1);
        assert_eq!(lattice_exp(1.3, 1.2, true), 2);
        assert_eq!(lattice_exp(1.44, 1.2, true), 2);
    }
}
