//! Greedy half-demand allocation for Q||C_min and the Farkas certificate
//! it produces when some machine stays unhappy.

use num_traits::{One, Zero};

use crate::cckp::{Allocation, CckpInstance, SupplyVector};
use crate::num::{min_rational, Rational};

/// Dual weights proving the assignment LP (A1)-(A3) infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    /// One weight per job type.
    pub alpha: Vec<Rational>,
    /// One weight per machine, in instance order.
    pub beta: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Allocation(Allocation),
    Certificate(FarkasCertificate),
}

/// Machines by descending demand, job copies by descending capacity; a
/// machine keeps taking jobs while it holds less than half its demand.
pub fn greedy_qcmin(inst: &CckpInstance, supply: &SupplyVector) -> GreedyOutcome {
    let m = inst.num_machines();
    let mut machines: Vec<usize> = (0..m).collect();
    machines.sort_by(|&a, &b| inst.demand(b).cmp(&inst.demand(a)).then(a.cmp(&b)));
    let mut copies: Vec<usize> = Vec::new();
    for j in inst.types_ascending().into_iter().rev() {
        copies.extend(std::iter::repeat_n(j, supply.0[j] as usize));
    }
    let half = Rational::new(1, 2);
    let mut alloc = Allocation::empty(m);
    let mut next = 0;
    let mut unhappy = None;
    for (rank, &i) in machines.iter().enumerate() {
        let target = inst.demand(i) * half;
        let mut filled = Rational::zero();
        while filled < target && next < copies.len() {
            let j = copies[next];
            next += 1;
            alloc.jobs[i].push(j);
            filled += inst.capacity(j);
        }
        if filled < target {
            unhappy = Some(rank);
            break;
        }
    }
    let Some(star) = unhappy else {
        return GreedyOutcome::Allocation(alloc);
    };
    // The unhappy machine takes every remaining copy in the proof's accounting.
    let i_star = machines[star];
    alloc.jobs[i_star].extend(copies[next..].iter().copied());

    let overloaded = |i: usize| -> Option<Rational> {
        match alloc.jobs[i].as_slice() {
            [j] if inst.capacity(*j) >= inst.demand(i) => Some(inst.capacity(*j)),
            _ => None,
        }
    };
    let mut beta = vec![Rational::zero(); m];
    beta[machines[0]] = Rational::one();
    for r in 0..star {
        let (i, next_i) = (machines[r], machines[r + 1]);
        beta[next_i] = match (overloaded(next_i), overloaded(i)) {
            (None, _) => beta[i],
            (Some(_), Some(_)) => beta[i] * inst.demand(i) / inst.demand(next_i),
            (Some(c), None) => beta[i] * c / inst.demand(next_i),
        };
    }
    let alpha = minimal_alpha(inst, &beta);
    GreedyOutcome::Certificate(FarkasCertificate { alpha, beta })
}

/// Smallest alpha satisfying (F2) for the given beta.
pub fn minimal_alpha(inst: &CckpInstance, beta: &[Rational]) -> Vec<Rational> {
    (0..inst.num_types())
        .map(|j| {
            (0..inst.num_machines())
                .map(|i| beta[i] * min_rational(inst.capacity(j), inst.demand(i)))
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Exact check of (F1)-(F3) with alpha summed over supply copies.
pub fn verify_farkas(inst: &CckpInstance, supply: &SupplyVector, cert: &FarkasCertificate) -> bool {
    if cert.alpha.len() != inst.num_types() || cert.beta.len() != inst.num_machines() || supply.0.len() != inst.num_types() {
        return false;
    }
    if cert.beta.iter().chain(&cert.alpha).any(|v| *v < Rational::zero()) {
        return false;
    }
    for i in 0..inst.num_machines() {
        for j in 0..inst.num_types() {
            if cert.beta[i] * min_rational(inst.capacity(j), inst.demand(i)) > cert.alpha[j] {
                return false;
            }
        }
    }
    let lhs: Rational = (0..inst.num_machines()).map(|i| cert.beta[i] * inst.demand(i)).sum();
    let rhs: Rational = (0..inst.num_types()).map(|j| cert.alpha[j] * Rational::from_integer(supply.0[j] as i128)).sum();
    lhs > rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn two_machines_both_half_served() {
        let inst = CckpInstance::qcmin(vec![int(4), int(3)], vec![int(3), int(2)]);
        match greedy_qcmin(&inst, &SupplyVector(vec![1, 2])) {
            GreedyOutcome::Allocation(a) => assert_eq!(a.jobs, vec![vec![0], vec![1]]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_supply_yields_certificate() {
        let inst = CckpInstance::qcmin(vec![int(10)], vec![int(4)]);
        let supply = SupplyVector(vec![1]);
        match greedy_qcmin(&inst, &supply) {
            GreedyOutcome::Certificate(c) => {
                assert_eq!(c.beta, vec![int(1)]);
                assert_eq!(c.alpha, vec![int(4)]);
                assert!(verify_farkas(&inst, &supply, &c));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_certificate_fails_strictness() {
        let inst = CckpInstance::qcmin(vec![int(10)], vec![int(4)]);
        let c = FarkasCertificate { alpha: vec![int(0)], beta: vec![int(0)] };
        assert!(!verify_farkas(&inst, &SupplyVector(vec![1]), &c));
    }

    #[test]
    fn no_machines() {
        let inst = CckpInstance::qcmin(vec![], vec![int(1)]);
        assert_eq!(greedy_qcmin(&inst, &SupplyVector(vec![3])), GreedyOutcome::Allocation(Allocation::empty(0)));
    }
}
