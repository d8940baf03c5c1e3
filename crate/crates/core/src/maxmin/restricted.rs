//! Restricted assignment view of a CCKP instance: job type `j` may go to
//! machine `i` only when `c_j >= D_i / (2 f_i)`.

use crate::cckp::{Allocation, CckpInstance, Machine};
use crate::num::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedInstance {
    /// Demands and job capacities; cardinalities are dropped.
    pub base: CckpInstance,
    /// `admissible[i][j]`: machine `i` accepts job type `j`.
    pub admissible: Vec<Vec<bool>>,
}

impl RestrictedInstance {
    pub fn admits(&self, i: usize, j: usize) -> bool {
        self.admissible[i][j]
    }

    /// True when every job of the allocation sits on a machine that admits it.
    pub fn respects(&self, alloc: &Allocation) -> bool {
        alloc.jobs.iter().enumerate().all(|(i, list)| list.iter().all(|&j| self.admissible[i][j]))
    }
}

pub fn reduce_to_restricted(inst: &CckpInstance) -> RestrictedInstance {
    let admissible = inst
        .machines
        .iter()
        .map(|m| {
            inst.job_capacities
                .iter()
                .map(|c| match m.cardinality {
                    None => true,
                    Some(f) => *c >= m.demand / (int(2) * Rational::from_integer(f as i128)),
                })
                .collect()
        })
        .collect();
    let machines = inst.machines.iter().map(|m| Machine::new(m.demand, None)).collect();
    RestrictedInstance { base: CckpInstance::new(machines, inst.job_capacities.clone()), admissible }
}
