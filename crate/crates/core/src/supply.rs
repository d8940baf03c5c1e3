//! Membership and separation for the assignment polyhedron P_ass and the
//! configuration polyhedron P_conf, suffix domination, and the witness shift
//! that realizes upward feasibility.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cckp::CckpInstance;
use crate::lp::{self, LinearSystem, LpError, LpOutcome, Relation, Sense};
use crate::maxmin::config::{Config, ConfigurationLpSolution};
use crate::maxmin::greedy::{minimal_alpha, FarkasCertificate};
use crate::num::{approx_rational, ceil, common_denominator, int, min_rational, to_f64, Rational, Scalar};

/// Σ_j alpha_j t_j >= rhs holds on the polyhedron and fails at the query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingHyperplane {
    pub alpha: Vec<Rational>,
    pub rhs: Rational,
}

impl SeparatingHyperplane {
    pub fn lhs(&self, t: &[Rational]) -> Rational {
        self.alpha.iter().zip(t).map(|(a, v)| a * v).sum()
    }

    pub fn satisfied_by(&self, t: &[Rational]) -> bool {
        self.lhs(t) >= self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SupplyError {
    #[error("LP failure: {0}")]
    Lp(#[from] LpError),
    #[error("supply length does not match the instance")]
    Shape,
    #[error("could not turn the LP certificate into an exact one")]
    Numerical,
    #[error("separation hit the round limit of {0}")]
    RoundLimit(usize),
    #[error("knapsack table of {0} cells exceeds the guard")]
    Guard(u64),
    #[error("epsilon must be positive")]
    Epsilon,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PassOutcome {
    /// z[i][j] satisfying (A1)-(A3).
    Witness(Vec<Vec<f64>>),
    Separated { hyperplane: SeparatingHyperplane, certificate: FarkasCertificate },
}

/// Feasibility of (A1)-(A3) for a rational supply point. Cardinalities of
/// the instance are ignored here.
pub fn p_ass_membership(inst: &CckpInstance, s: &[Rational]) -> Result<PassOutcome, SupplyError> {
    let (m, n) = (inst.num_machines(), inst.num_types());
    if s.len() != n {
        return Err(SupplyError::Shape);
    }
    let mut sys = LinearSystem::new();
    let var: Vec<Vec<usize>> = (0..m).map(|i| (0..n).map(|j| sys.add_nonneg(format!("z_{i}_{j}"))).collect()).collect();
    for j in 0..n {
        sys.add_constraint((0..m).map(|i| (var[i][j], 1.0)).collect(), Relation::Le, to_f64(&s[j]));
    }
    for i in 0..m {
        let d = inst.demand(i);
        let coeffs = (0..n).map(|j| (var[i][j], to_f64(&(min_rational(inst.capacity(j), d) / d)))).collect();
        sys.add_constraint(coeffs, Relation::Ge, 1.0);
    }
    match lp::solve(&sys)? {
        LpOutcome::Feasible { point, .. } => Ok(PassOutcome::Witness(
            var.iter().map(|row| row.iter().map(|&v| point[v].max(0.0)).collect()).collect(),
        )),
        LpOutcome::Unbounded => Err(SupplyError::Numerical),
        LpOutcome::Infeasible(cert) => {
            let raw: Vec<f64> = (0..m).map(|i| cert.rows[n + i].max(0.0) / to_f64(&inst.demand(i))).collect();
            let top = raw.iter().copied().fold(0.0, f64::max);
            if top <= 0.0 {
                return Err(SupplyError::Numerical);
            }
            for den in [1_000_000i128, 1_000_000_000, 1_000_000_000_000] {
                let beta: Vec<Rational> = raw.iter().map(|b| approx_rational(b / top, den)).collect();
                let alpha = minimal_alpha(inst, &beta);
                let rhs: Rational = (0..m).map(|i| beta[i] * inst.demand(i)).sum();
                let hyperplane = SeparatingHyperplane { alpha: alpha.clone(), rhs };
                if !hyperplane.satisfied_by(s) {
                    return Ok(PassOutcome::Separated { hyperplane, certificate: FarkasCertificate { alpha, beta } });
                }
            }
            Err(SupplyError::Numerical)
        }
    }
}

/// Checks (A1)-(A3) for an assignment point.
pub fn check_assignment<T: Scalar>(inst: &CckpInstance, s: &[T], z: &[Vec<T>]) -> bool {
    let (m, n) = (inst.num_machines(), inst.num_types());
    if z.len() != m || z.iter().any(|r| r.len() != n) || s.len() != n {
        return false;
    }
    let tol = T::tolerance();
    if z.iter().flatten().any(|v| *v < T::zero() - tol.clone()) {
        return false;
    }
    for j in 0..n {
        let mut used = T::zero();
        for row in z {
            used = used + row[j].clone();
        }
        if used > s[j].clone() + tol.clone() {
            return false;
        }
    }
    (0..m).all(|i| {
        let d = inst.demand(i);
        let mut got = T::zero();
        for j in 0..n {
            got = got + z[i][j].clone() * T::from_rational(&min_rational(inst.capacity(j), d));
        }
        got >= T::from_rational(&d) - tol.clone()
    })
}

/// Knapsack cells allowed in one table.
pub const KNAPSACK_CELL_LIMIT: u64 = 5_000_000;

/// Multiset maximizing Σ weights·n subject to |S| <= f, n_j <= copies_j and
/// Σ values·n < budget. Exact DP over the lattice generated by the weights.
pub fn max_knapsack_cardinality(
    values: &[Rational],
    weights: &[Rational],
    copies: &[u64],
    f: u64,
    budget: &Rational,
) -> Result<Config, SupplyError> {
    let n = weights.len();
    let lattice = Lattice::new(weights);
    let units: Vec<u64> = (0..n).map(|j| lattice.units(&weights[j])).collect();
    let top: u64 = (0..n).map(|j| units[j] * copies[j].min(f)).sum();
    let cells = (top + 1) * (f + 1);
    if cells > KNAPSACK_CELL_LIMIT {
        return Err(SupplyError::Guard(cells));
    }
    // best[k][v]: least cost of exactly value v with k items, over types seen so far.
    let width = top as usize + 1;
    let fk = f as usize;
    let mut best: Vec<Option<(Rational, Config)>> = vec![None; width * (fk + 1)];
    best[0] = Some((Rational::zero(), vec![0; n]));
    for j in 0..n {
        let prev = best.clone();
        for k in 0..=fk {
            for v in 0..width {
                let Some((cost, cfg)) = &prev[k * width + v] else { continue };
                for c in 1..=copies[j].min(f) as usize {
                    let (k2, v2) = (k + c, v + c * units[j] as usize);
                    if k2 > fk || v2 >= width {
                        break;
                    }
                    let cost2 = cost + values[j] * int(c as i128);
                    let slot = &mut best[k2 * width + v2];
                    if slot.as_ref().is_none_or(|(c0, _)| cost2 < *c0) {
                        let mut cfg2 = cfg.clone();
                        cfg2[j] += c as u64;
                        *slot = Some((cost2, cfg2));
                    }
                }
            }
        }
    }
    let mut answer: (u64, Config) = (0, vec![0; n]);
    for k in 0..=fk {
        for v in 0..width {
            if let Some((cost, cfg)) = &best[k * width + v] {
                if cost < budget && v as u64 > answer.0 {
                    answer = (v as u64, cfg.clone());
                }
            }
        }
    }
    Ok(answer.1)
}

/// Integer lattice g·Z containing every capacity.
struct Lattice {
    scale: i128,
    unit: i128,
}

impl Lattice {
    fn new(weights: &[Rational]) -> Self {
        let scale = common_denominator(weights);
        let unit = weights.iter().map(|w| (w * Rational::from_integer(scale)).to_integer()).fold(0i128, |a, b| a.gcd(&b));
        Lattice { scale, unit: unit.max(1) }
    }

    fn units(&self, w: &Rational) -> u64 {
        ((w * Rational::from_integer(self.scale)).to_integer() / self.unit) as u64
    }

    /// Smallest lattice count reaching at least `target`.
    fn units_ceil(&self, target: &Rational) -> u64 {
        ceil(&(target * Rational::from_integer(self.scale) / Rational::from_integer(self.unit))).max(0) as u64
    }
}

/// Cheapest multiset with at most `f` items whose capacity reaches `target`,
/// copies unbounded; costs are integers. `None` when no multiset qualifies.
fn min_cost_cover(costs: &[i128], lattice: &Lattice, units: &[u64], target: &Rational, f: Option<u64>) -> Result<Option<(i128, Config)>, SupplyError> {
    let n = costs.len();
    let t = lattice.units_ceil(target);
    if t == 0 {
        return Ok(Some((0, vec![0; n])));
    }
    let Some(umin) = units.iter().copied().filter(|&u| u > 0).min() else {
        return Ok(None);
    };
    let need = t.div_ceil(umin);
    let fe = f.map_or(need, |f| f.min(need));
    let width = t as usize + 1;
    let cells = width as u64 * (fe + 1);
    if cells > KNAPSACK_CELL_LIMIT {
        return Err(SupplyError::Guard(cells));
    }
    const NONE: i128 = i128::MAX;
    let mut cur = vec![NONE; width];
    cur[0] = 0;
    // parent[k][v] = (previous value, type) for the k-th item.
    let mut parent: Vec<Vec<(u32, u32)>> = Vec::with_capacity(fe as usize);
    let mut best: Option<(i128, usize)> = None;
    for k in 1..=fe as usize {
        let mut next = cur.clone();
        let mut par = vec![(u32::MAX, u32::MAX); width];
        for v in 0..width {
            if cur[v] == NONE {
                continue;
            }
            for j in 0..n {
                let v2 = (v + units[j] as usize).min(width - 1);
                let c2 = cur[v] + costs[j];
                if c2 < next[v2] {
                    next[v2] = c2;
                    par[v2] = (v as u32, j as u32);
                }
            }
        }
        parent.push(par);
        cur = next;
        if cur[width - 1] != NONE && best.is_none_or(|(c, _)| cur[width - 1] < c) {
            best = Some((cur[width - 1], k));
        }
    }
    let Some((cost, _)) = best else { return Ok(None) };
    // Walk back from the last layer; entries not updated in a layer carry over.
    let mut cfg = vec![0u64; n];
    let mut v = width - 1;
    let mut k = parent.len();
    while v > 0 && k > 0 {
        let (pv, j) = parent[k - 1][v];
        if j != u32::MAX {
            cfg[j as usize] += 1;
            v = pv as usize;
        }
        k -= 1;
    }
    Ok(Some((cost, cfg)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfOutcome {
    /// z feasible for (C1)-(C3) at demands D_i/(1+ε).
    Accept { z: ConfigurationLpSolution<f64>, rounds: usize },
    Separated { hyperplane: SeparatingHyperplane, rounds: usize },
}

pub const DEFAULT_SEPARATION_ROUNDS: usize = 500;

/// Cutting planes on the dual of the configuration LP. Machines with equal
/// demand and cardinality share one dual variable. Configurations are
/// multisets whose copies are limited only by the cardinality, so every
/// returned hyperplane holds for all supply vectors in P_conf.
pub fn p_conf_separation(inst: &CckpInstance, s: &[Rational], eps: &Rational, max_rounds: usize) -> Result<ConfOutcome, SupplyError> {
    let n = inst.num_types();
    if s.len() != n {
        return Err(SupplyError::Shape);
    }
    if *eps <= Rational::zero() {
        return Err(SupplyError::Epsilon);
    }
    let mut classes: BTreeMap<(Rational, Option<u64>), Vec<usize>> = BTreeMap::new();
    for i in 0..inst.num_machines() {
        classes.entry((inst.demand(i), inst.machines[i].cardinality)).or_default().push(i);
    }
    let classes: Vec<((Rational, Option<u64>), Vec<usize>)> = classes.into_iter().collect();
    let lattice = Lattice::new(&inst.job_capacities);
    let units: Vec<u64> = inst.job_capacities.iter().map(|c| lattice.units(c)).collect();
    let relax = int(1) + eps;
    let targets: Vec<Rational> = classes.iter().map(|((d, _), _)| d / relax).collect();

    // A class with no configuration at all empties P_conf.
    let zero_costs = vec![0i128; n];
    for (c, ((_, f), _)) in classes.iter().enumerate() {
        if min_cost_cover(&zero_costs, &lattice, &units, &targets[c], *f)?.is_none() {
            return Ok(ConfOutcome::Separated {
                hyperplane: SeparatingHyperplane { alpha: vec![Rational::zero(); n], rhs: int(1) },
                rounds: 0,
            });
        }
    }

    let mut dual = LinearSystem::new();
    let a: Vec<usize> = (0..n).map(|j| dual.add_nonneg(format!("alpha_{j}"))).collect();
    let b: Vec<usize> = (0..classes.len()).map(|c| dual.add_nonneg(format!("beta_{c}"))).collect();
    let mut obj: Vec<(usize, f64)> = classes.iter().enumerate().map(|(c, (_, ms))| (b[c], ms.len() as f64)).collect();
    obj.extend((0..n).map(|j| (a[j], -to_f64(&s[j]))));
    dual.add_constraint(obj.clone(), Relation::Le, 1.0);
    dual.set_objective(Sense::Maximize, obj);
    let mut generated: Vec<Vec<Config>> = vec![Vec::new(); classes.len()];
    const SCALE: f64 = 1e9;

    for round in 0..=max_rounds {
        let point = match lp::solve(&dual)? {
            LpOutcome::Feasible { point, .. } => point,
            _ => return Err(SupplyError::Numerical),
        };
        let value: f64 = classes.iter().enumerate().map(|(c, (_, ms))| ms.len() as f64 * point[b[c]]).sum::<f64>()
            - (0..n).map(|j| to_f64(&s[j]) * point[a[j]]).sum::<f64>();
        if value <= 1e-7 {
            let z = accept(inst, s, &classes, &generated)?;
            return Ok(ConfOutcome::Accept { z, rounds: round });
        }
        let costs: Vec<i128> = (0..n).map(|j| (point[a[j]].max(0.0) * SCALE).round() as i128).collect();
        let mut added = false;
        for (c, ((_, f), _)) in classes.iter().enumerate() {
            let (cost, cfg) = min_cost_cover(&costs, &lattice, &units, &targets[c], *f)?.expect("class has a configuration");
            if (cost as f64) < point[b[c]] * SCALE - 1e-9 * SCALE && !generated[c].contains(&cfg) {
                let mut coeffs: Vec<(usize, f64)> = (0..n).filter(|&j| cfg[j] > 0).map(|j| (a[j], cfg[j] as f64)).collect();
                coeffs.push((b[c], -1.0));
                dual.add_constraint(coeffs, Relation::Ge, 0.0);
                generated[c].push(cfg);
                added = true;
            }
        }
        if !added {
            return exact_hyperplane(&point, &a, &classes, &lattice, &units, &targets, s)
                .map(|hyperplane| ConfOutcome::Separated { hyperplane, rounds: round })
                .ok_or(SupplyError::Numerical);
        }
    }
    Err(SupplyError::RoundLimit(max_rounds))
}

type Classes = [((Rational, Option<u64>), Vec<usize>)];

/// Rounds alpha up on a fixed grid and recomputes each class's beta as its
/// exact cheapest configuration, which makes the inequality valid.
fn exact_hyperplane(
    point: &[f64],
    a: &[usize],
    classes: &Classes,
    lattice: &Lattice,
    units: &[u64],
    targets: &[Rational],
    s: &[Rational],
) -> Option<SeparatingHyperplane> {
    for q in [1_000_000_000i128, 1_000_000_000_000, 1_000_000_000_000_000] {
        let ints: Vec<i128> = a.iter().map(|&v| (point[v].max(0.0) * q as f64).ceil() as i128).collect();
        let alpha: Vec<Rational> = ints.iter().map(|&v| Rational::new(v, q)).collect();
        let mut rhs = Rational::zero();
        for (c, ((_, f), ms)) in classes.iter().enumerate() {
            let (cost, _) = min_cost_cover(&ints, lattice, units, &targets[c], *f).ok()??;
            rhs += Rational::new(cost, q) * int(ms.len() as i128);
        }
        let h = SeparatingHyperplane { alpha, rhs };
        if !h.satisfied_by(s) {
            return Some(h);
        }
    }
    None
}

fn accept(inst: &CckpInstance, s: &[Rational], classes: &Classes, generated: &[Vec<Config>]) -> Result<ConfigurationLpSolution<f64>, SupplyError> {
    let n = inst.num_types();
    let mut sys = LinearSystem::new();
    let mut vars = Vec::new();
    for (c, cfgs) in generated.iter().enumerate() {
        let row: Vec<usize> = (0..cfgs.len()).map(|k| sys.add_nonneg(format!("z_{c}_{k}"))).collect();
        sys.add_constraint(row.iter().map(|&v| (v, 1.0)).collect(), Relation::Eq, classes[c].1.len() as f64);
        vars.push(row);
    }
    for j in 0..n {
        let mut coeffs = Vec::new();
        for (c, cfgs) in generated.iter().enumerate() {
            for (k, cfg) in cfgs.iter().enumerate() {
                if cfg[j] > 0 {
                    coeffs.push((vars[c][k], cfg[j] as f64));
                }
            }
        }
        if !coeffs.is_empty() {
            sys.add_constraint(coeffs, Relation::Le, to_f64(&s[j]));
        }
    }
    let point = match lp::solve(&sys)? {
        LpOutcome::Feasible { point, .. } => point,
        _ => return Err(SupplyError::Numerical),
    };
    let mut z = ConfigurationLpSolution::new(inst.num_machines());
    for (c, (_, machines)) in classes.iter().enumerate() {
        let share = machines.len() as f64;
        for (k, cfg) in generated[c].iter().enumerate() {
            let w = point[vars[c][k]] / share;
            if w > 1e-12 {
                for &i in machines {
                    z.z[i].insert(cfg.clone(), w);
                }
            }
        }
    }
    Ok(z)
}

/// Σ_{k >= i} t_k >= Σ_{k >= i} s_k over types sorted by ascending capacity.
pub fn suffix_dominates<T: Scalar>(inst: &CckpInstance, t: &[T], s: &[T]) -> bool {
    let order = inst.types_ascending();
    let (mut st, mut ss) = (T::zero(), T::zero());
    for &j in order.iter().rev() {
        st = st + t[j].clone();
        ss = ss + s[j].clone();
        if st < ss.clone() - T::tolerance() {
            return false;
        }
    }
    true
}

/// Pushes excess usage of each type onto the next larger type so that the
/// usage of an assignment witness fits under `t`.
pub fn shift_assignment<T: Scalar>(inst: &CckpInstance, z: &[Vec<T>], t: &[T]) -> Vec<Vec<T>> {
    let order = inst.types_ascending();
    let mut out = z.to_vec();
    for w in order.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut used = T::zero();
        for row in &out {
            used = used + row[lo].clone();
        }
        let mut excess = used - t[lo].clone();
        for row in out.iter_mut() {
            if excess <= T::zero() {
                break;
            }
            let take = if row[lo] < excess { row[lo].clone() } else { excess.clone() };
            row[lo] = row[lo].clone() - take.clone();
            row[hi] = row[hi].clone() + take.clone();
            excess = excess - take;
        }
    }
    out
}

/// Same shift for a configuration witness: one copy of the smaller type is
/// swapped for the next larger one inside the configurations.
pub fn shift_configurations<T: Scalar>(inst: &CckpInstance, z: &ConfigurationLpSolution<T>, t: &[T]) -> ConfigurationLpSolution<T> {
    let order = inst.types_ascending();
    let mut out = z.clone();
    for w in order.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut excess = out.usage(inst.num_types())[lo].clone() - t[lo].clone();
        while excess > T::zero() {
            let found = out.z.iter().enumerate().find_map(|(i, row)| {
                row.iter().find(|(cfg, wt)| cfg[lo] > 0 && **wt > T::zero()).map(|(cfg, wt)| (i, cfg.clone(), wt.clone()))
            });
            let Some((i, cfg, wt)) = found else { break };
            let take = if wt < excess { wt.clone() } else { excess.clone() };
            let mut moved = cfg.clone();
            moved[lo] -= 1;
            moved[hi] += 1;
            let left = wt - take.clone();
            if left > T::zero() {
                out.z[i].insert(cfg, left);
            } else {
                out.z[i].remove(&cfg);
            }
            let cur = out.z[i].get(&moved).cloned().unwrap_or_else(T::zero);
            out.z[i].insert(moved, cur + take.clone());
            excess = excess - take;
        }
    }
    out
}

/// Converts a float supply point to rationals for the exact checks.
pub fn rational_supply(s: &[f64]) -> Vec<Rational> {
    s.iter().map(|&v| approx_rational(v.max(0.0), 1_000_000_000)).collect()
}

/// Aggregated supply as integers when every entry is integral.
pub fn integral_supply(s: &[Rational]) -> Option<Vec<u64>> {
    s.iter().map(|v| if v.is_integer() { v.to_integer().to_u64() } else { None }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::maxmin::config::check_configuration_lp;
    use crate::num::rat;

    #[test]
    fn p_ass_witness_and_hyperplane() {
        let inst = CckpInstance::qcmin(vec![int(4)], vec![int(4)]);
        assert!(matches!(p_ass_membership(&inst, &[int(1)]).unwrap(), PassOutcome::Witness(_)));
        let inst = CckpInstance::qcmin(vec![int(10)], vec![int(4)]);
        match p_ass_membership(&inst, &[int(1)]).unwrap() {
            PassOutcome::Separated { hyperplane, certificate } => {
                assert_eq!(certificate.beta, vec![int(1)]);
                assert_eq!(hyperplane.alpha, vec![int(4)]);
                assert_eq!(hyperplane.rhs, int(10));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn knapsack_small_cases() {
        let v = [int(1), int(2)];
        let w = [int(3), int(5)];
        assert_eq!(max_knapsack_cardinality(&v, &w, &[2, 2], 1, &int(10)).unwrap(), vec![0, 1]);
        assert_eq!(max_knapsack_cardinality(&v, &w, &[2, 2], 1, &int(2)).unwrap(), vec![1, 0]);
        assert_eq!(max_knapsack_cardinality(&v, &w, &[2, 2], 3, &int(0)).unwrap(), vec![0, 0]);
        assert_eq!(max_knapsack_cardinality(&v, &w, &[2, 2], 3, &int(5)).unwrap(), vec![2, 1]);
    }

    #[test]
    fn cover_dp_reconstructs() {
        let caps = [int(1), int(3)];
        let l = Lattice::new(&caps);
        let u: Vec<u64> = caps.iter().map(|c| l.units(c)).collect();
        assert_eq!(min_cost_cover(&[1, 5], &l, &u, &int(4), Some(4)).unwrap(), Some((4, vec![4, 0])));
        assert_eq!(min_cost_cover(&[1, 5], &l, &u, &int(4), Some(2)).unwrap(), Some((6, vec![1, 1])));
        assert_eq!(min_cost_cover(&[1, 5], &l, &u, &int(7), Some(2)).unwrap(), None);
    }

    #[test]
    fn conf_separation_accepts_and_rejects() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(4)]);
        match p_conf_separation(&inst, &[int(1)], &rat(1, 10), 50).unwrap() {
            ConfOutcome::Accept { z, .. } => check_configuration_lp(&inst, &[1.0], &z, &rat(11, 10)).unwrap(),
            other => panic!("{other:?}"),
        }
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(1)]);
        match p_conf_separation(&inst, &[int(4)], &rat(1, 10), 50).unwrap() {
            ConfOutcome::Separated { hyperplane, .. } => assert!(!hyperplane.satisfied_by(&[int(4)])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conf_separation_cuts_a_short_mixture() {
        // Two unit machines, one job of capacity 1: P_conf needs two copies.
        let inst = CckpInstance::new(vec![Machine::new(int(1), Some(1)), Machine::new(int(1), Some(1))], vec![int(1)]);
        match p_conf_separation(&inst, &[rat(3, 2)], &rat(1, 10), 50).unwrap() {
            ConfOutcome::Separated { hyperplane, .. } => {
                assert!(!hyperplane.satisfied_by(&[rat(3, 2)]));
                assert!(hyperplane.satisfied_by(&[int(2)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_moves_mass_upward() {
        let inst = CckpInstance::qcmin(vec![int(2)], vec![int(1), int(2)]);
        let z = vec![vec![int(2), int(0)]];
        let t = [int(1), int(1)];
        assert!(suffix_dominates(&inst, &t, &[int(2), int(0)]));
        let out = shift_assignment(&inst, &z, &t);
        assert_eq!(out, vec![vec![int(1), int(1)]]);
        assert!(check_assignment(&inst, &t, &out));

        let inst = CckpInstance::new(vec![Machine::new(int(2), Some(2))], vec![int(1), int(2)]);
        let mut zc = ConfigurationLpSolution::<Rational>::new(1);
        zc.z[0].insert(vec![2, 0], int(1));
        let out = shift_configurations(&inst, &zc, &t);
        assert_eq!(out.z[0].get(&vec![1, 1]), Some(&int(1)));
        check_configuration_lp(&inst, &t, &out, &int(1)).unwrap();
    }

    #[test]
    fn suffix_domination_fails_when_mass_moves_down() {
        let inst = CckpInstance::qcmin(vec![int(2)], vec![int(1), int(2)]);
        assert!(!suffix_dominates(&inst, &[int(2), int(0)], &[int(1), int(1)]));
    }
}
