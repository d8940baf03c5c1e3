//! Exhaustive ground-truth solvers. Size guards are hard errors.

use num_traits::One;

use crate::cckp::{Allocation, CckpInstance, SupplyVector};
use crate::matching::assign_clients;
use crate::maxmin::restricted::RestrictedInstance;
use crate::model::{McKcSolution, MckcInstance, Placement};
use crate::num::{ceil, common_denominator, Rational};

pub const MCKC_MAX_FACILITIES: usize = 10;
pub const MCKC_MAX_COPIES: u64 = 10;
pub const CCKP_MAX_MACHINES: usize = 8;
pub const CCKP_MAX_COPIES: u64 = 24;
const NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("client weights must be 1 for exhaustive assignment")]
    Weights,
    #[error("search exceeded {0} nodes")]
    Budget(u64),
}

/// Exact (radius, b) feasibility: every placement (injective for hard
/// capacities, multisets for soft) is tried and checked by b-matching with
/// per-placement bound `ceil(b * c_p)`.
pub fn brute_force_mckc(inst: &MckcInstance, radius: &Rational, b: &Rational) -> Result<Option<McKcSolution>, OracleError> {
    let nf = inst.num_facilities();
    let copies: u64 = inst.profile.iter().map(|c| c.count).sum();
    if nf > MCKC_MAX_FACILITIES || copies > MCKC_MAX_COPIES {
        return Err(OracleError::Guard(format!("{nf} facilities, {copies} copies")));
    }
    if inst.weights.iter().any(|w| !w.is_one()) {
        return Err(OracleError::Weights);
    }
    let demand = vec![1i64; inst.num_clients()];
    let bounds: Vec<i64> = inst.profile.iter().map(|c| ceil(&(b * c.capacity)) as i64).collect();
    let mut found = None;
    let mut try_placements = |placements: &[Placement]| -> bool {
        let bound: Vec<i64> = placements.iter().map(|pl| bounds[pl.class]).collect();
        if bound.iter().sum::<i64>() < inst.num_clients() as i64 {
            return false;
        }
        let assigned = assign_clients(&demand, &bound, |j, k| inst.fc(placements[k].location, j).within(radius))
            .expect("unit demands never split");
        if let Some(assignment) = assigned {
            found = Some(McKcSolution { placements: placements.to_vec(), assignment, radius_guess: *radius });
            return true;
        }
        false
    };
    let mut left: Vec<u64> = inst.profile.iter().map(|c| c.count).collect();
    let mut current = Vec::new();
    if inst.soft {
        soft_placements(nf, 0, 0, &mut left, &mut current, &mut try_placements);
    } else {
        hard_placements(nf, 0, &mut left, &mut current, &mut try_placements);
    }
    Ok(found)
}

/// Maximal injective placements: a location stays empty only when no copy is left.
fn hard_placements<F: FnMut(&[Placement]) -> bool>(
    nf: usize,
    loc: usize,
    left: &mut [u64],
    current: &mut Vec<Placement>,
    visit: &mut F,
) -> bool {
    if loc == nf {
        return visit(current);
    }
    for p in 0..left.len() {
        if left[p] == 0 {
            continue;
        }
        left[p] -= 1;
        current.push(Placement { location: loc, class: p });
        let stop = hard_placements(nf, loc + 1, left, current, visit);
        current.pop();
        left[p] += 1;
        if stop {
            return true;
        }
    }
    // With enough copies for every remaining location, an empty one only
    // leaves a copy unused, which never helps.
    let remaining: u64 = left.iter().sum();
    if remaining < (nf - loc) as u64 {
        return hard_placements(nf, loc + 1, left, current, visit);
    }
    false
}

/// Every copy placed somewhere; copies of one type as a multiset of locations.
fn soft_placements<F: FnMut(&[Placement]) -> bool>(
    nf: usize,
    class: usize,
    min_loc: usize,
    left: &mut [u64],
    current: &mut Vec<Placement>,
    visit: &mut F,
) -> bool {
    if class == left.len() {
        return visit(current);
    }
    if left[class] == 0 {
        return soft_placements(nf, class + 1, 0, left, current, visit);
    }
    for loc in min_loc..nf {
        left[class] -= 1;
        current.push(Placement { location: loc, class });
        let stop = soft_placements(nf, class, loc, left, current, visit);
        current.pop();
        left[class] += 1;
        if stop {
            return true;
        }
    }
    false
}

/// Best achievable min_i received_i / D_i with a witness allocation.
pub fn brute_force_cckp(inst: &CckpInstance, supply: &SupplyVector) -> Result<(Rational, Allocation), OracleError> {
    search(inst, supply, None)
}

/// Same search for a restricted-assignment instance.
pub fn brute_force_restricted(inst: &RestrictedInstance, supply: &SupplyVector) -> Result<(Rational, Allocation), OracleError> {
    search(&inst.base, supply, Some(&inst.admissible))
}

fn search(inst: &CckpInstance, supply: &SupplyVector, admissible: Option<&Vec<Vec<bool>>>) -> Result<(Rational, Allocation), OracleError> {
    let m = inst.num_machines();
    let total = supply.total();
    if m > CCKP_MAX_MACHINES || total > CCKP_MAX_COPIES {
        return Err(OracleError::Guard(format!("{m} machines, {total} copies")));
    }
    if m == 0 {
        return Ok((Rational::one(), Allocation::empty(0)));
    }
    let scale = common_denominator(inst.job_capacities.iter().chain(inst.machines.iter().map(|mm| &mm.demand)));
    let to_int = |r: &Rational| (r * Rational::from_integer(scale)).to_integer();
    let order: Vec<usize> = inst.types_ascending().into_iter().rev().filter(|&j| supply.0[j] > 0).collect();
    let mut s = Search {
        demand: inst.machines.iter().map(|mm| to_int(&mm.demand)).collect(),
        room: inst.machines.iter().map(|mm| mm.cardinality.map_or(usize::MAX, |f| f as usize)).collect(),
        cap: order.iter().map(|&j| to_int(&inst.job_capacities[j])).collect(),
        count: order.iter().map(|&j| supply.0[j] as usize).collect(),
        allowed: order
            .iter()
            .map(|&j| (0..m).map(|i| admissible.is_none_or(|a| a[i][j])).collect())
            .collect(),
        twin: (0..m)
            .map(|i| {
                (0..i).rev().find(|&k| {
                    inst.machines[k] == inst.machines[i]
                        && admissible.is_none_or(|a| a[k] == a[i])
                })
            })
            .collect(),
        load: vec![0; m],
        used: vec![0; m],
        given: vec![vec![0; order.len()]; m],
        best: (0, 1),
        best_given: vec![vec![0; order.len()]; m],
        nodes: 0,
    };
    s.type_level(0)?;
    let mut alloc = Allocation::empty(m);
    for (i, row) in s.best_given.iter().enumerate() {
        for (t, &c) in row.iter().enumerate() {
            alloc.jobs[i].extend(std::iter::repeat_n(order[t], c));
        }
    }
    let ratio = alloc.min_ratio(inst);
    Ok((ratio, alloc))
}

struct Search {
    demand: Vec<i128>,
    room: Vec<usize>,
    cap: Vec<i128>,
    count: Vec<usize>,
    allowed: Vec<Vec<bool>>,
    twin: Vec<Option<usize>>,
    load: Vec<i128>,
    used: Vec<usize>,
    given: Vec<Vec<usize>>,
    /// Best min ratio as a fraction (numerator, denominator).
    best: (i128, i128),
    best_given: Vec<Vec<usize>>,
    nodes: u64,
}

impl Search {
    fn ratio(&self) -> (i128, i128) {
        let mut best = (self.load[0], self.demand[0]);
        for i in 1..self.load.len() {
            if self.load[i] * best.1 < best.0 * self.demand[i] {
                best = (self.load[i], self.demand[i]);
            }
        }
        best
    }

    /// Remaining copies, largest first, from type `t` onward with `first`
    /// copies of `t` still unplaced.
    fn remaining(&self, t: usize, first: usize) -> Vec<i128> {
        let mut out = Vec::new();
        for (u, (&c, &n)) in self.cap.iter().zip(&self.count).enumerate().skip(t) {
            let n = if u == t { first } else { n };
            out.extend(std::iter::repeat_n(c, n));
        }
        out
    }

    /// Can the current partial allocation still beat `best` strictly?
    fn promising(&self, rest: &[i128]) -> bool {
        let (bn, bd) = self.best;
        let total: i128 = rest.iter().sum();
        let mut need_sum = 0i128;
        let mut tight = false;
        for i in 0..self.load.len() {
            // Strictly better needs load_i / D_i > bn / bd.
            let need = bn * self.demand[i] - bd * self.load[i];
            if need >= 0 {
                tight = true;
                need_sum += need;
                let room = self.room[i].saturating_sub(self.used[i]).min(rest.len());
                let reach: i128 = rest[..room].iter().sum();
                if bd * reach <= need {
                    return false;
                }
            }
        }
        !(tight && need_sum >= bd * total)
    }

    fn record(&mut self) {
        let r = self.ratio();
        if r.0 * self.best.1 > self.best.0 * r.1 {
            self.best = r;
            self.best_given = self.given.clone();
        }
    }

    fn type_level(&mut self, t: usize) -> Result<(), OracleError> {
        if t == self.cap.len() {
            self.record();
            return Ok(());
        }
        let n = self.count[t];
        self.machine_level(t, 0, n)
    }

    fn machine_level(&mut self, t: usize, i: usize, left: usize) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(OracleError::Budget(NODE_BUDGET));
        }
        if i == self.load.len() {
            return self.type_level(t + 1);
        }
        if !self.promising(&self.remaining(t, left)) {
            return Ok(());
        }
        let mut most = if self.allowed[t][i] { left.min(self.room[i] - self.used[i]) } else { 0 };
        // Twin machines in identical states: the earlier one takes at least as many.
        if let Some(k) = self.twin[i] {
            if self.given[k][..t] == self.given[i][..t] {
                most = most.min(self.given[k][t]);
            }
        }
        for c in (0..=most).rev() {
            self.load[i] += self.cap[t] * c as i128;
            self.used[i] += c;
            self.given[i][t] = c;
            let r = self.machine_level(t, i + 1, left - c);
            self.load[i] -= self.cap[t] * c as i128;
            self.used[i] -= c;
            self.given[i][t] = 0;
            r?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::model::{CapacityClass, Distance};
    use crate::num::{int, rat};

    #[test]
    fn single_machine_cardinality() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(2))], vec![int(2)]);
        assert_eq!(brute_force_cckp(&inst, &SupplyVector(vec![2])).unwrap().0, int(1));
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(2)]);
        assert_eq!(brute_force_cckp(&inst, &SupplyVector(vec![2])).unwrap().0, rat(1, 2));
    }

    #[test]
    fn two_machines_split() {
        let inst = CckpInstance::new(vec![Machine::new(int(3), Some(2)); 2], vec![int(2), int(1)]);
        let (r, a) = brute_force_cckp(&inst, &SupplyVector(vec![2, 1])).unwrap();
        assert_eq!(r, rat(2, 3));
        assert!(a.validate(&inst, &SupplyVector(vec![2, 1])).is_ok());
    }

    #[test]
    fn no_edge_within_radius() {
        let fc = vec![vec![Distance::Finite(int(1))]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(1))], false);
        assert_eq!(brute_force_mckc(&inst, &rat(1, 2), &int(1)).unwrap(), None);
        assert!(brute_force_mckc(&inst, &int(1), &int(1)).unwrap().is_some());
    }
}
