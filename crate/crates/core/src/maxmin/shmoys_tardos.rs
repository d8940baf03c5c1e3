//! Integral rounding of a fractional assignment (A1),(A2),(A4) by the
//! machine-copy construction: each machine is cut into unit slots filled by
//! job types in descending capacity, and a bipartite b-matching picks one
//! job per slot.

use crate::cckp::{Allocation, CckpInstance, SupplyVector};
use crate::flow::FlowNetwork;
use crate::num::{to_f64, CONSTRAINT_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoundingError {
    #[error("fractional assignment has the wrong shape")]
    Shape,
    #[error("z[{0}][{1}] is negative")]
    Negative(usize, usize),
    #[error("job type {0} is used beyond its supply")]
    Supply(usize),
    #[error("machine {0} exceeds its cardinality")]
    Cardinality(usize),
    #[error("the full slots admit no perfect matching")]
    Matching,
}

/// Fractional capacity Σ_j z_ij c_j of machine `i`.
pub fn fractional_received(inst: &CckpInstance, z: &[Vec<f64>], i: usize) -> f64 {
    z[i].iter().enumerate().map(|(j, v)| v * to_f64(&inst.capacity(j))).sum()
}

/// Rounds `z[i][j]` (machine × type). Every machine then receives at least
/// Σ_j z_ij c_j − max{c_j : z_ij > 0}, no more than ⌈Σ_j z_ij⌉ jobs.
pub fn shmoys_tardos_round(inst: &CckpInstance, supply: &SupplyVector, z: &[Vec<f64>]) -> Result<Allocation, RoundingError> {
    let (m, n) = (inst.num_machines(), inst.num_types());
    if z.len() != m || z.iter().any(|r| r.len() != n) || supply.0.len() != n {
        return Err(RoundingError::Shape);
    }
    for (i, row) in z.iter().enumerate() {
        if let Some(j) = row.iter().position(|&v| v < -CONSTRAINT_TOL) {
            return Err(RoundingError::Negative(i, j));
        }
        if let Some(f) = inst.machines[i].cardinality {
            if row.iter().sum::<f64>() > f as f64 + CONSTRAINT_TOL {
                return Err(RoundingError::Cardinality(i));
            }
        }
    }
    for j in 0..n {
        if z.iter().map(|r| r[j]).sum::<f64>() > supply.0[j] as f64 + CONSTRAINT_TOL {
            return Err(RoundingError::Supply(j));
        }
    }

    let order: Vec<usize> = inst.types_ascending().into_iter().rev().collect();
    // slots[(machine, fill, [(type, fraction)])]
    let mut slots: Vec<(usize, f64, Vec<(usize, f64)>)> = Vec::new();
    for (i, row) in z.iter().enumerate() {
        let total: f64 = row.iter().map(|v| v.max(0.0)).sum();
        let count = (total - 1e-9).ceil().max(0.0) as usize;
        let first = slots.len();
        slots.extend((0..count).map(|_| (i, 0.0, Vec::new())));
        let mut k = first;
        for &j in &order {
            let mut rest = row[j].max(0.0);
            while rest > 1e-12 && k < slots.len() {
                let room = 1.0 - slots[k].1;
                let take = rest.min(room);
                slots[k].1 += take;
                slots[k].2.push((j, take));
                rest -= take;
                if slots[k].1 >= 1.0 - 1e-12 {
                    k += 1;
                }
            }
        }
    }

    let source = slots.len() + n;
    let sink = source + 1;
    let mut net = FlowNetwork::new(sink + 1);
    let mut slot_arcs = vec![Vec::new(); slots.len()];
    for (k, (_, _, parts)) in slots.iter().enumerate() {
        for &(j, frac) in parts {
            if frac > 1e-12 {
                slot_arcs[k].push((j, net.add_edge(k, slots.len() + j, 1)));
            }
        }
    }
    for j in 0..n {
        net.add_edge(slots.len() + j, sink, supply.0[j] as i64);
    }
    let full: Vec<usize> = (0..slots.len()).filter(|&k| slots[k].1 >= 1.0 - 1e-9).collect();
    for &k in &full {
        net.add_edge(source, k, 1);
    }
    if net.max_flow(source, sink) < full.len() as i64 {
        return Err(RoundingError::Matching);
    }
    for k in (0..slots.len()).filter(|&k| slots[k].1 < 1.0 - 1e-9) {
        net.add_edge(source, k, 1);
    }
    net.max_flow(source, sink);

    let mut alloc = Allocation::empty(m);
    for (k, arcs) in slot_arcs.iter().enumerate() {
        if let Some(&(j, _)) = arcs.iter().find(|(_, a)| net.flow(*a) > 0) {
            alloc.jobs[slots[k].0].push(j);
        }
    }
    Ok(alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cckp::Machine;
    use crate::num::int;

    #[test]
    fn integral_input_is_kept() {
        let inst = CckpInstance::qcmin(vec![int(3), int(2)], vec![int(1), int(2)]);
        let z = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        let a = shmoys_tardos_round(&inst, &SupplyVector(vec![1, 2]), &z).unwrap();
        assert_eq!(a.jobs, vec![vec![1, 0], vec![1]]);
    }

    #[test]
    fn half_copy_example() {
        let inst = CckpInstance::new(vec![Machine::new(int(4), Some(2))], vec![int(3), int(2)]);
        let z = vec![vec![1.0, 0.5]];
        let a = shmoys_tardos_round(&inst, &SupplyVector(vec![1, 1]), &z).unwrap();
        assert!(a.received(&inst, 0) >= int(1));
        assert!(a.jobs[0].len() <= 2);
    }

    #[test]
    fn oversupplied_z_is_rejected() {
        let inst = CckpInstance::qcmin(vec![int(3)], vec![int(1)]);
        assert_eq!(shmoys_tardos_round(&inst, &SupplyVector(vec![1]), &[vec![2.0]]), Err(RoundingError::Supply(0)));
    }
}
