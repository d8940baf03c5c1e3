//! Max-min allocation instances (Q||C_min and its cardinality-constrained
//! variant), supply vectors and integral allocations.

use num_traits::{One, Signed};

use crate::num::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub demand: Rational,
    /// `None` encodes an unbounded cardinality.
    pub cardinality: Option<u64>,
}

impl Machine {
    pub fn new(demand: Rational, cardinality: Option<u64>) -> Self {
        Machine { demand, cardinality }
    }

    pub fn admits(&self, count: usize) -> bool {
        self.cardinality.is_none_or(|f| count as u64 <= f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CckpInstance {
    pub machines: Vec<Machine>,
    pub job_capacities: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CckpError {
    #[error("machine {0} has nonpositive demand")]
    Demand(usize),
    #[error("machine {0} has zero cardinality")]
    Cardinality(usize),
    #[error("job type {0} has nonpositive capacity")]
    Capacity(usize),
    #[error("supply has {got} entries, instance has {expected} job types")]
    SupplyLength { got: usize, expected: usize },
}

impl CckpInstance {
    pub fn new(machines: Vec<Machine>, job_capacities: Vec<Rational>) -> Self {
        CckpInstance { machines, job_capacities }
    }

    /// Q||C_min instance: every cardinality unbounded.
    pub fn qcmin(demands: Vec<Rational>, job_capacities: Vec<Rational>) -> Self {
        CckpInstance {
            machines: demands.into_iter().map(|d| Machine::new(d, None)).collect(),
            job_capacities,
        }
    }

    pub fn num_machines(&self) -> usize {
        self.machines.len()
    }

    pub fn num_types(&self) -> usize {
        self.job_capacities.len()
    }

    pub fn demand(&self, i: usize) -> Rational {
        self.machines[i].demand
    }

    pub fn capacity(&self, j: usize) -> Rational {
        self.job_capacities[j]
    }

    pub fn is_qcmin(&self) -> bool {
        self.machines.iter().all(|m| m.cardinality.is_none())
    }

    pub fn validate(&self) -> Result<(), CckpError> {
        for (i, m) in self.machines.iter().enumerate() {
            if !m.demand.is_positive() {
                return Err(CckpError::Demand(i));
            }
            if m.cardinality == Some(0) {
                return Err(CckpError::Cardinality(i));
            }
        }
        for (j, c) in self.job_capacities.iter().enumerate() {
            if !c.is_positive() {
                return Err(CckpError::Capacity(j));
            }
        }
        Ok(())
    }

    pub fn check_supply(&self, supply: &SupplyVector) -> Result<(), CckpError> {
        if supply.0.len() != self.num_types() {
            return Err(CckpError::SupplyLength { got: supply.0.len(), expected: self.num_types() });
        }
        Ok(())
    }

    /// D := D_max / D_min (1 for an empty instance).
    pub fn demand_spread(&self) -> Rational {
        let max = self.machines.iter().map(|m| m.demand).max();
        let min = self.machines.iter().map(|m| m.demand).min();
        match (max, min) {
            (Some(a), Some(b)) => a / b,
            _ => Rational::from_integer(1),
        }
    }

    /// Job type indices sorted by ascending capacity (ties by index).
    pub fn types_ascending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.num_types()).collect();
        order.sort_by(|&a, &b| self.job_capacities[a].cmp(&self.job_capacities[b]).then(a.cmp(&b)));
        order
    }
}

/// Integer copy counts per job type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupplyVector(pub Vec<u64>);

impl SupplyVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&c| c as f64).collect()
    }
}

/// Job types given to each machine, as a multiset of type indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Allocation {
    pub jobs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("allocation covers {got} machines, instance has {expected}")]
    Length { got: usize, expected: usize },
    #[error("job type {0} out of range")]
    UnknownType(usize),
    #[error("job type {job} used {used} times, supply is {supply}")]
    Supply { job: usize, used: u64, supply: u64 },
    #[error("machine {machine} receives {count} jobs, cardinality is {limit}")]
    Cardinality { machine: usize, count: usize, limit: u64 },
}

impl Allocation {
    pub fn empty(m: usize) -> Self {
        Allocation { jobs: vec![Vec::new(); m] }
    }

    pub fn received(&self, inst: &CckpInstance, i: usize) -> Rational {
        self.jobs[i].iter().map(|&j| inst.capacity(j)).sum()
    }

    pub fn usage(&self, num_types: usize) -> Vec<u64> {
        let mut used = vec![0u64; num_types];
        for list in &self.jobs {
            for &j in list {
                if j < num_types {
                    used[j] += 1;
                }
            }
        }
        used
    }

    /// min_i received_i / D_i; 1 when there are no machines to serve.
    pub fn min_ratio(&self, inst: &CckpInstance) -> Rational {
        (0..inst.num_machines())
            .map(|i| self.received(inst, i) / inst.demand(i))
            .min()
            .unwrap_or_else(Rational::one)
    }

    pub fn validate(&self, inst: &CckpInstance, supply: &SupplyVector) -> Result<(), AllocationError> {
        if self.jobs.len() != inst.num_machines() {
            return Err(AllocationError::Length { got: self.jobs.len(), expected: inst.num_machines() });
        }
        for list in &self.jobs {
            if let Some(&j) = list.iter().find(|&&j| j >= inst.num_types()) {
                return Err(AllocationError::UnknownType(j));
            }
        }
        for (job, (&used, &have)) in self.usage(inst.num_types()).iter().zip(&supply.0).enumerate() {
            if used > have {
                return Err(AllocationError::Supply { job, used, supply: have });
            }
        }
        for (i, list) in self.jobs.iter().enumerate() {
            if let Some(f) = inst.machines[i].cardinality {
                if list.len() as u64 > f {
                    return Err(AllocationError::Cardinality { machine: i, count: list.len(), limit: f });
                }
            }
        }
        Ok(())
    }

    /// Hands out unused copies, largest first, to the machine with the
    /// currently smallest received/demand ratio that still has room.
    pub fn distribute_leftovers(&mut self, inst: &CckpInstance, supply: &SupplyVector) {
        let used = self.usage(inst.num_types());
        let mut spare: Vec<usize> = Vec::new();
        for j in inst.types_ascending().into_iter().rev() {
            for _ in used[j]..supply.0[j] {
                spare.push(j);
            }
        }
        for j in spare {
            let target = (0..inst.num_machines())
                .filter(|&i| inst.machines[i].admits(self.jobs[i].len() + 1))
                .min_by(|&a, &b| {
                    let ra = to_f64(&(self.received(inst, a) / inst.demand(a)));
                    let rb = to_f64(&(self.received(inst, b) / inst.demand(b)));
                    ra.total_cmp(&rb).then(a.cmp(&b))
                });
            match target {
                Some(i) => self.jobs[i].push(j),
                None => break,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn allocation_validation_catches_supply_and_cardinality() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(2)]);
        let supply = SupplyVector(vec![2]);
        let a = Allocation { jobs: vec![vec![0, 0]] };
        assert!(matches!(a.validate(&inst, &supply), Err(AllocationError::Cardinality { .. })));
        let a = Allocation { jobs: vec![vec![0]] };
        assert!(a.validate(&inst, &SupplyVector(vec![0])).is_err());
        assert!(a.validate(&inst, &supply).is_ok());
        assert_eq!(a.min_ratio(&inst), crate::num::rat(1, 2));
    }

    #[test]
    fn leftovers_go_to_the_poorest_machine() {
        let inst = CckpInstance::qcmin(vec![int(4), int(4)], vec![int(1), int(3)]);
        let mut a = Allocation { jobs: vec![vec![1], vec![]] };
        a.distribute_leftovers(&inst, &SupplyVector(vec![1, 2]));
        assert_eq!(a.jobs[1], vec![1]);
        assert_eq!(a.jobs[0], vec![1, 0]);
    }
}
