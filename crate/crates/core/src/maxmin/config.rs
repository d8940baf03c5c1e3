//! Configuration LP points: per machine, a distribution over job multisets.

use std::collections::BTreeMap;

use crate::cckp::CckpInstance;
use crate::num::{Rational, Scalar};

/// Multiset of job types as a count per type.
pub type Config = Vec<u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationLpSolution<T = f64> {
    /// `z[i][S]` for machine `i`.
    pub z: Vec<BTreeMap<Config, T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigViolation {
    #[error("solution covers {got} machines, instance has {expected}")]
    Shape { got: usize, expected: usize },
    #[error("configuration of machine {0} has the wrong length")]
    ConfigShape(usize),
    #[error("negative weight on machine {0}")]
    Negative(usize),
    #[error("(C1) weights of machine {0} do not sum to one")]
    Convexity(usize),
    #[error("(C2) job type {0} is used beyond its supply")]
    Supply(usize),
    #[error("(C3) machine {0} supports an infeasible configuration")]
    Support(usize),
}

pub fn config_size(s: &Config) -> u64 {
    s.iter().sum()
}

pub fn config_value(inst: &CckpInstance, s: &Config) -> Rational {
    s.iter().enumerate().map(|(j, &n)| inst.capacity(j) * Rational::from_integer(n as i128)).sum()
}

pub fn singleton(num_types: usize, j: usize) -> Config {
    let mut s = vec![0; num_types];
    s[j] = 1;
    s
}

/// S ∈ F_i at demand D_i / `scale`.
pub fn config_feasible(inst: &CckpInstance, i: usize, s: &Config, scale: &Rational) -> bool {
    inst.machines[i].admits(config_size(s) as usize) && config_value(inst, s) * scale >= inst.demand(i)
}

impl<T: Scalar> ConfigurationLpSolution<T> {
    pub fn new(m: usize) -> Self {
        ConfigurationLpSolution { z: vec![BTreeMap::new(); m] }
    }

    /// Σ_{i,S} z(i,S)·n(S,j) per type.
    pub fn usage(&self, num_types: usize) -> Vec<T> {
        let mut used = vec![T::zero(); num_types];
        for row in &self.z {
            for (s, w) in row {
                for (j, &n) in s.iter().enumerate() {
                    if n > 0 {
                        used[j] = used[j].clone() + w.clone() * T::from_int(n as i128);
                    }
                }
            }
        }
        used
    }

    pub fn to_f64(&self) -> ConfigurationLpSolution<f64> {
        ConfigurationLpSolution {
            z: self.z.iter().map(|row| row.iter().map(|(s, w)| (s.clone(), w.to_f64())).collect()).collect(),
        }
    }
}

/// Checks (C1)-(C3) against supply `s` with demands divided by `scale`.
pub fn check_configuration_lp<T: Scalar>(
    inst: &CckpInstance,
    supply: &[T],
    sol: &ConfigurationLpSolution<T>,
    scale: &Rational,
) -> Result<(), ConfigViolation> {
    let (m, n) = (inst.num_machines(), inst.num_types());
    if sol.z.len() != m {
        return Err(ConfigViolation::Shape { got: sol.z.len(), expected: m });
    }
    let tol = T::tolerance();
    for (i, row) in sol.z.iter().enumerate() {
        let mut total = T::zero();
        for (s, w) in row {
            if s.len() != n {
                return Err(ConfigViolation::ConfigShape(i));
            }
            if *w < T::zero() - tol.clone() {
                return Err(ConfigViolation::Negative(i));
            }
            if *w > tol && !config_feasible(inst, i, s, scale) {
                return Err(ConfigViolation::Support(i));
            }
            total = total + w.clone();
        }
        if (total - T::one()).abs_val() > tol {
            return Err(ConfigViolation::Convexity(i));
        }
    }
    for (j, used) in sol.usage(n).into_iter().enumerate() {
        if used > supply[j].clone() + tol.clone() {
            return Err(ConfigViolation::Supply(j));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::num::int;

    #[test]
    fn singleton_witness_checks_exactly() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(1))], vec![int(4)]);
        let mut sol = ConfigurationLpSolution::<Rational>::new(1);
        sol.z[0].insert(vec![1], int(1));
        assert_eq!(check_configuration_lp(&inst, &[int(1)], &sol, &int(1)), Ok(()));
        assert_eq!(check_configuration_lp(&inst, &[int(0)], &sol, &int(1)), Err(ConfigViolation::Supply(0)));
        sol.z[0].insert(vec![2], int(0));
        assert_eq!(check_configuration_lp(&inst, &[int(1)], &sol, &int(1)), Ok(()));
    }

    #[test]
    fn small_configuration_is_outside_the_family() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(2))], vec![int(1)]);
        let mut sol = ConfigurationLpSolution::<Rational>::new(1);
        sol.z[0].insert(vec![2], int(1));
        assert_eq!(check_configuration_lp(&inst, &[int(2)], &sol, &int(1)), Err(ConfigViolation::Support(0)));
        assert_eq!(check_configuration_lp(&inst, &[int(2)], &sol, &int(2)), Ok(()));
    }
}
