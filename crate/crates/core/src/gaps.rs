//! Deterministic lower-bound constructions, each bundled with the witness
//! that makes it interesting. Generators re-check their witness before
//! returning.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cckp::{Allocation, CckpInstance, Machine, SupplyVector};
use crate::fractional::{check_lp_point, FractionalSolution};
use crate::maxmin::config::{check_configuration_lp, config_value, ConfigurationLpSolution};
use crate::maxmin::restricted::RestrictedInstance;
use crate::model::{CapacityClass, Distance, MckcInstance};
use crate::num::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("demand of machine {0} is not an integer")]
    NonIntegralDemand(usize),
    #[error("mixed bounded and unbounded cardinalities")]
    MixedCardinality,
    #[error("bundled witness failed its check: {0}")]
    Witness(String),
    #[error("exhaustive search exceeds {0} leaves")]
    Guard(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MckcGap {
    pub instance: MckcInstance,
    pub witness: FractionalSolution<Rational>,
}

/// K groups of two facilities and K clients, distance 1 inside a group and
/// ∞ across; K copies of capacity 1 and K−1 of capacity K.
pub fn gen_mckc_gap(k: usize) -> Result<MckcGap, GapError> {
    if k == 0 {
        return Err(GapError::Parameter("K must be positive".into()));
    }
    let (nf, nc) = (2 * k, k * k);
    let fc: Vec<Vec<Distance>> = (0..nf)
        .map(|i| (0..nc).map(|j| if i / 2 == j / k { Distance::Finite(int(1)) } else { Distance::Infinite }).collect())
        .collect();
    let kk = k as i128;
    let profile = vec![CapacityClass::new(k as u64, int(1)), CapacityClass::new(k as u64 - 1, int(kk))];
    let instance = MckcInstance::from_bipartite(&fc, profile, false);
    let mut w = FractionalSolution::<Rational>::zeros(nf, nc, 2, int(1));
    let big = Rational::one() - rat(1, kk);
    for g in 0..k {
        let (a, b) = (2 * g, 2 * g + 1);
        w.y[a][1] = big;
        w.y[b][0] = int(1);
        for j in g * k..(g + 1) * k {
            w.x[a][j][1] = big;
            w.x[b][j][0] = rat(1, kk);
        }
    }
    check_lp_point(&instance, &w).map_err(|e| GapError::Witness(e.to_string()))?;
    Ok(MckcGap { instance, witness: w })
}

/// The ten-vertex Petersen graph: outer 5-cycle, spokes, inner pentagram.
pub fn petersen_edges() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    e.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
}

/// All perfect matchings as sorted edge-index lists.
pub fn perfect_matchings(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn rec(n: usize, edges: &[(usize, usize)], covered: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = (0..n).find(|&v| !covered[v]) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        for (idx, &(a, b)) in edges.iter().enumerate() {
            let other = if a == v { b } else if b == v { a } else { continue };
            if covered[other] {
                continue;
            }
            covered[v] = true;
            covered[other] = true;
            cur.push(idx);
            rec(n, edges, covered, cur, out);
            cur.pop();
            covered[v] = false;
            covered[other] = false;
        }
    }
    let mut out = Vec::new();
    rec(n, edges, &mut vec![false; n], &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PetersenGap {
    pub instance: CckpInstance,
    pub edges: Vec<(usize, usize)>,
    pub matchings: Vec<Vec<usize>>,
    /// One supply vector per matching: 3k copies of each matching edge.
    pub supplies: Vec<SupplyVector>,
    /// The average of the six supplies: k copies of every edge.
    pub mixture: SupplyVector,
}

impl PetersenGap {
    /// Every machine gets one copy of each edge of matching `t`.
    pub fn matching_allocation(&self, t: usize) -> Allocation {
        Allocation { jobs: vec![self.matchings[t].clone(); self.instance.num_machines()] }
    }
}

/// 3k identical machines of demand 1023 and a job of size 2^i + 2^j per edge.
pub fn gen_petersen_pcmin(k: usize) -> Result<PetersenGap, GapError> {
    if k == 0 {
        return Err(GapError::Parameter("k must be positive".into()));
    }
    let edges = petersen_edges();
    let all = perfect_matchings(10, &edges);
    let family = (0..1usize << all.len())
        .filter(|mask| mask.count_ones() == 6)
        .map(|mask| (0..all.len()).filter(|t| mask >> t & 1 == 1).map(|t| all[t].clone()).collect::<Vec<_>>())
        .find(|fam| {
            let mut cover = vec![0; edges.len()];
            fam.iter().flatten().for_each(|&e| cover[e] += 1);
            cover.iter().all(|&c| c == 2)
        })
        .ok_or_else(|| GapError::Witness("no double-cover family".into()))?;
    let caps = edges.iter().map(|&(a, b)| int((1 << a) + (1 << b))).collect();
    let instance = CckpInstance::qcmin(vec![int(1023); 3 * k], caps);
    let supplies: Vec<SupplyVector> = family
        .iter()
        .map(|m| SupplyVector((0..edges.len()).map(|e| if m.contains(&e) { 3 * k as u64 } else { 0 }).collect()))
        .collect();
    let sum: Vec<u64> = (0..edges.len()).map(|e| supplies.iter().map(|s| s.0[e]).sum()).collect();
    if sum.iter().any(|&v| v % 6 != 0) {
        return Err(GapError::Witness("mixture is not integral".into()));
    }
    let mixture = SupplyVector(sum.iter().map(|v| v / 6).collect());
    let gap = PetersenGap { instance, edges, matchings: family, supplies, mixture };
    for t in 0..6 {
        let a = gap.matching_allocation(t);
        if a.validate(&gap.instance, &gap.supplies[t]).is_err() || a.min_ratio(&gap.instance) < Rational::one() {
            return Err(GapError::Witness(format!("matching {t} does not feed every machine")));
        }
    }
    Ok(gap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfGap {
    pub instance: CckpInstance,
    pub supply: SupplyVector,
    pub witness: ConfigurationLpSolution<Rational>,
    /// Two feasible supplies whose (1−1/K, 1/K) mixture is `supply`.
    pub mixture: (SupplyVector, SupplyVector, Rational),
}

/// f_i = K^{2K+1−2i}.
pub fn conf_gap_f(k: usize, i: usize) -> u64 {
    (k as u64).pow((2 * k + 1 - 2 * i) as u32)
}

/// Machines: M_0 (D=1, f=1), M_i (D=K^{-i}, f=f_i) and f_i class machines
/// (D=c_i, f=1) per i. Job types: big (c=1, K copies) then type i with
/// c_i = K^{i−(2K+1)} and n_i = f_i(1+1/K) copies.
pub fn gen_conf_gap(k: usize) -> Result<ConfGap, GapError> {
    if !(2..=4).contains(&k) {
        return Err(GapError::Parameter("K must lie in 2..=4".into()));
    }
    let kk = k as i128;
    let pow = |e: i64| if e >= 0 { int(kk.pow(e as u32)) } else { rat(1, kk.pow((-e) as u32)) };
    let mut caps = vec![int(1)];
    let mut supply = vec![k as u64];
    for i in 1..=k {
        caps.push(pow(i as i64 - (2 * k as i64 + 1)));
        supply.push(conf_gap_f(k, i) + conf_gap_f(k, i) / k as u64);
    }
    let mut machines = vec![Machine::new(int(1), Some(1))];
    for i in 1..=k {
        machines.push(Machine::new(pow(-(i as i64)), Some(conf_gap_f(k, i))));
    }
    for i in 1..=k {
        for _ in 0..conf_gap_f(k, i) {
            machines.push(Machine::new(caps[i], Some(1)));
        }
    }
    let instance = CckpInstance::new(machines, caps);
    let n = k + 1;
    let one_of = |t: usize, c: u64| {
        let mut v = vec![0u64; n];
        v[t] = c;
        v
    };
    let mut witness = ConfigurationLpSolution::<Rational>::new(instance.num_machines());
    witness.z[0].insert(one_of(0, 1), int(1));
    for i in 1..=k {
        witness.z[i].insert(one_of(0, 1), Rational::one() - rat(1, kk));
        witness.z[i].insert(one_of(i, conf_gap_f(k, i)), rat(1, kk));
    }
    let mut m = k + 1;
    for i in 1..=k {
        for _ in 0..conf_gap_f(k, i) {
            witness.z[m].insert(one_of(i, 1), int(1));
            m += 1;
        }
    }
    let s: Vec<Rational> = supply.iter().map(|&c| Rational::from_integer(c as i128)).collect();
    check_configuration_lp(&instance, &s, &witness, &int(1)).map_err(|e| GapError::Witness(e.to_string()))?;
    let mut s1 = vec![k as u64 + 1];
    let mut s2 = vec![1u64];
    for i in 1..=k {
        s1.push(conf_gap_f(k, i));
        s2.push(2 * conf_gap_f(k, i));
    }
    let gap = ConfGap {
        instance,
        supply: SupplyVector(supply),
        witness,
        mixture: (SupplyVector(s1), SupplyVector(s2), Rational::one() - rat(1, kk)),
    };
    for (s, a) in [(&gap.mixture.0, gap.mixture_allocation(true)), (&gap.mixture.1, gap.mixture_allocation(false))] {
        if a.validate(&gap.instance, s).is_err() || a.min_ratio(&gap.instance) < Rational::one() {
            return Err(GapError::Witness("mixture supply is not feasible".into()));
        }
    }
    Ok(gap)
}

impl ConfGap {
    fn k(&self) -> usize {
        self.instance.num_types() - 1
    }

    /// Allocation feeding every machine under the first (`first`) or second
    /// mixture supply.
    pub fn mixture_allocation(&self, first: bool) -> Allocation {
        let k = self.k();
        let mut a = Allocation::empty(self.instance.num_machines());
        a.jobs[0].push(0);
        for i in 1..=k {
            if first {
                a.jobs[i].push(0);
            } else {
                a.jobs[i].extend(std::iter::repeat_n(i, conf_gap_f(k, i) as usize));
            }
        }
        let mut m = k + 1;
        for i in 1..=k {
            for _ in 0..conf_gap_f(k, i) {
                a.jobs[m].push(i);
                m += 1;
            }
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedGap {
    pub instance: RestrictedInstance,
    pub supply: SupplyVector,
    /// Configurations as type-count vectors per machine.
    pub witness: ConfigurationLpSolution<Rational>,
}

/// K large machines (D=K), K−1 large jobs (c=K) for them, and K classes of K
/// unit machines, each class with one public and K private unit jobs.
/// Type layout: 0 = large, 1..=K public, then private (i,k) at 1+K+iK+k.
pub fn gen_bansal_sviridenko(k: usize) -> Result<RestrictedGap, GapError> {
    if k < 2 {
        return Err(GapError::Parameter("K must be at least 2".into()));
    }
    let kk = k as i128;
    let ntypes = 1 + k + k * k;
    let private = |i: usize, m: usize| 1 + k + i * k + m;
    let mut caps = vec![int(kk)];
    caps.extend(std::iter::repeat_n(int(1), k + k * k));
    let mut supply = vec![k as u64 - 1];
    supply.extend(std::iter::repeat_n(1, k + k * k));
    let mut demands = vec![int(kk); k];
    demands.extend(std::iter::repeat_n(int(1), k * k));
    let mut admissible = vec![vec![false; ntypes]; k + k * k];
    for i in 0..k {
        admissible[i][0] = true;
        for m in 0..k {
            admissible[i][private(i, m)] = true;
            let small = k + i * k + m;
            admissible[small][1 + i] = true;
            admissible[small][private(i, m)] = true;
        }
    }
    let base = CckpInstance::qcmin(demands, caps);
    let instance = RestrictedInstance { base, admissible };
    let unit = |t: usize| {
        let mut v = vec![0u64; ntypes];
        v[t] = 1;
        v
    };
    let mut witness = ConfigurationLpSolution::<Rational>::new(k + k * k);
    for i in 0..k {
        witness.z[i].insert(unit(0), rat(kk - 1, kk));
        let mut all = vec![0u64; ntypes];
        (0..k).for_each(|m| all[private(i, m)] = 1);
        witness.z[i].insert(all, rat(1, kk));
        for m in 0..k {
            let small = k + i * k + m;
            witness.z[small].insert(unit(private(i, m)), Rational::one() - rat(1, kk));
            witness.z[small].insert(unit(1 + i), rat(1, kk));
        }
    }
    let gap = RestrictedGap { instance, supply: SupplyVector(supply), witness };
    gap.check_witness()?;
    Ok(gap)
}

impl RestrictedGap {
    /// Every configuration is admissible and covers its machine; each job
    /// type is used exactly as often as supplied.
    pub fn check_witness(&self) -> Result<(), GapError> {
        let inst = &self.instance;
        let mut used = vec![Rational::zero(); inst.base.num_types()];
        for (i, row) in self.witness.z.iter().enumerate() {
            let mut total = Rational::zero();
            for (s, w) in row {
                if s.iter().enumerate().any(|(t, &c)| c > 0 && !inst.admits(i, t)) {
                    return Err(GapError::Witness(format!("machine {i} gets an inadmissible job")));
                }
                if config_value(&inst.base, s) < inst.base.demand(i) {
                    return Err(GapError::Witness(format!("machine {i} configuration too small")));
                }
                total += w;
                for (t, &c) in s.iter().enumerate() {
                    used[t] += w * Rational::from_integer(c as i128);
                }
            }
            if !total.is_one() {
                return Err(GapError::Witness(format!("machine {i} weights sum to {total}")));
            }
        }
        for (t, u) in used.iter().enumerate() {
            if *u != Rational::from_integer(self.supply.0[t] as i128) {
                return Err(GapError::Witness(format!("job type {t} used {u} times")));
            }
        }
        Ok(())
    }

    /// Best min ratio over every assignment of every job to an admissible
    /// machine (assigning more never lowers the ratio).
    pub fn integral_optimum(&self, leaf_limit: u64) -> Result<(Rational, Allocation), GapError> {
        let inst = &self.instance;
        let jobs: Vec<usize> = self.supply.0.iter().enumerate().flat_map(|(t, &c)| std::iter::repeat_n(t, c as usize)).collect();
        let options: Vec<Vec<usize>> = jobs
            .iter()
            .map(|&t| (0..inst.base.num_machines()).filter(|&i| inst.admits(i, t)).collect())
            .collect();
        let leaves = options.iter().try_fold(1u64, |acc, o| acc.checked_mul(o.len().max(1) as u64));
        if leaves.is_none_or(|l| l > leaf_limit) {
            return Err(GapError::Guard(leaf_limit));
        }
        let mut alloc = Allocation::empty(inst.base.num_machines());
        let mut best = (Rational::from_integer(-1), alloc.clone());
        fn rec(d: usize, jobs: &[usize], options: &[Vec<usize>], inst: &CckpInstance, a: &mut Allocation, best: &mut (Rational, Allocation)) {
            if d == jobs.len() {
                let r = a.min_ratio(inst);
                if r > best.0 {
                    *best = (r, a.clone());
                }
                return;
            }
            for &i in &options[d] {
                a.jobs[i].push(jobs[d]);
                rec(d + 1, jobs, options, inst, a, best);
                a.jobs[i].pop();
            }
        }
        rec(0, &jobs, &options, &inst.base, &mut alloc, &mut best);
        Ok(best)
    }
}

/// Embeds a CCKP instance: machine i becomes a group of f_i facilities and
/// D_i unit clients at mutual distance 0, groups 1 apart. Unbounded
/// cardinalities become one soft-capacity facility per group.
pub fn gen_qcmin_reduction(inst: &CckpInstance, supply: &SupplyVector) -> Result<MckcInstance, GapError> {
    let soft = inst.machines.iter().all(|m| m.cardinality.is_none());
    if !soft && inst.machines.iter().any(|m| m.cardinality.is_none()) {
        return Err(GapError::MixedCardinality);
    }
    let mut fac_group = Vec::new();
    let mut cli_group = Vec::new();
    for (g, m) in inst.machines.iter().enumerate() {
        if !m.demand.is_integer() {
            return Err(GapError::NonIntegralDemand(g));
        }
        fac_group.extend(std::iter::repeat_n(g, m.cardinality.unwrap_or(1) as usize));
        cli_group.extend(std::iter::repeat_n(g, m.demand.to_integer().max(0) as usize));
    }
    let fc: Vec<Vec<Distance>> = fac_group
        .iter()
        .map(|&a| cli_group.iter().map(|&b| Distance::Finite(if a == b { int(0) } else { int(1) })).collect())
        .collect();
    let mut by_cap: BTreeMap<Rational, u64> = BTreeMap::new();
    for (t, &c) in supply.0.iter().enumerate() {
        *by_cap.entry(inst.capacity(t)).or_default() += c;
    }
    let profile = by_cap.into_iter().map(|(cap, count)| CapacityClass::new(count, cap)).collect();
    let mut out = MckcInstance::from_bipartite(&fc, profile, soft);
    // Closing the bipartite graph under shortest paths would put groups 2
    // apart; the reduction wants every cross-group pair at distance 1.
    let nf = fac_group.len();
    let group = |v: usize| if v < nf { fac_group[v] } else { cli_group[v - nf] };
    for a in 0..out.distance.len() {
        for b in 0..out.distance.len() {
            out.distance[a][b] = Distance::Finite(if group(a) == group(b) { int(0) } else { int(1) });
        }
    }
    Ok(out)
}
