//! Region-growing decomposition into complete neighborhoods plus a deletable
//! boundary, and the CCKP instance it induces.

use num_traits::Zero;

use crate::cckp::{CckpInstance, Machine, SupplyVector};
use crate::decomp::{verify_complete_neighborhood, Charge};
use crate::graph::ThresholdGraph;
use crate::model::MckcInstance;
use crate::num::{int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakPart {
    pub facilities: Vec<usize>,
    pub clients: Vec<usize>,
    /// Seed client and the even radius t at which the ball stopped.
    pub seed: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDecomposition {
    pub epsilon: Rational,
    pub parts: Vec<WeakPart>,
    pub deleted: Vec<usize>,
    pub charge: Charge,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeakError {
    #[error("epsilon must lie in (0, 1]")]
    Epsilon,
    #[error("client {0} has no facility within the radius")]
    Isolated(usize),
}

/// Largest stopping radius the growth argument allows:
/// 2·⌈ln|C| / ln(1+ε)⌉ + 2.
pub fn max_radius(num_clients: usize, eps: &Rational) -> usize {
    let n = (num_clients.max(1)) as f64;
    2 * (n.ln() / (1.0 + to_f64(eps)).ln()).ceil() as usize + 2
}

pub fn decompose(g: &ThresholdGraph, eps: &Rational) -> Result<WeakDecomposition, WeakError> {
    if *eps <= Rational::zero() || *eps > int(1) {
        return Err(WeakError::Epsilon);
    }
    if let Some(j) = (0..g.num_clients()).find(|&j| g.neighbors(g.client_vertex(j)).is_empty()) {
        return Err(WeakError::Isolated(j));
    }
    let mut h = g.clone();
    let mut out = WeakDecomposition { epsilon: *eps, parts: Vec::new(), deleted: Vec::new(), charge: Charge::default() };
    loop {
        let next = h.alive_clients().next();
        let Some(seed) = next else { break };
        let mut t = 2;
        let layers = loop {
            let l = h.layered_neighborhood(seed, t).expect("seed is alive");
            let inner_clients = l.inner.iter().filter(|&&v| !h.is_facility(v)).count();
            if Rational::from_integer(l.boundary.len() as i128) < eps * Rational::from_integer(inner_clients as i128) {
                break l;
            }
            t += 2;
        };
        let facilities: Vec<usize> = layers.inner.iter().copied().filter(|&v| h.is_facility(v)).collect();
        let clients: Vec<usize> = layers.inner.iter().filter(|&&v| !h.is_facility(v)).map(|&v| h.client_index(v)).collect();
        let boundary: Vec<usize> = layers.boundary.iter().map(|&v| h.client_index(v)).collect();
        out.charge.add_uniform(&boundary, &clients);
        out.deleted.extend(&boundary);
        for &v in layers.inner.iter().chain(&layers.boundary) {
            h.delete(v);
        }
        out.parts.push(WeakPart { facilities, clients, seed: h.client_index(seed), t });
    }
    out.deleted.sort_unstable();
    Ok(out)
}

/// Checks every structural invariant; the error names the first failure.
pub fn check_weak(g: &ThresholdGraph, w: &WeakDecomposition) -> Result<(), String> {
    let nf = g.num_facilities();
    let mut fac_owner = vec![None; nf];
    let mut client_seen = vec![false; g.num_clients()];
    let bound = max_radius(g.num_clients(), &w.epsilon);
    for (k, part) in w.parts.iter().enumerate() {
        for &i in &part.facilities {
            if fac_owner[i].replace(k).is_some() {
                return Err(format!("facility {i} in two parts"));
            }
        }
        for &j in &part.clients {
            if std::mem::replace(&mut client_seen[j], true) {
                return Err(format!("client {j} in two parts"));
            }
        }
        if !verify_complete_neighborhood(g, &part.facilities, &part.clients) {
            return Err(format!("part {k} is not a complete neighborhood"));
        }
        if part.t > bound {
            return Err(format!("part {k} stopped at t={} beyond {bound}", part.t));
        }
        if !part.facilities.is_empty() {
            match g.hop_diameter(&part.facilities) {
                Ok(Some(d)) if d <= 2 * bound => {}
                other => return Err(format!("part {k} facility diameter {other:?}")),
            }
        }
    }
    for &j in &w.deleted {
        if std::mem::replace(&mut client_seen[j], true) {
            return Err(format!("deleted client {j} also in a part"));
        }
    }
    if let Some(j) = client_seen.iter().position(|s| !s) {
        return Err(format!("client {j} left unassigned"));
    }
    for i in 0..nf {
        if !g.neighbors(i).is_empty() && fac_owner[i].is_none() {
            return Err(format!("reachable facility {i} in no part"));
        }
    }
    if !w.charge.rows_sum_to_one() || w.charge.rows.len() != w.deleted.len() {
        return Err("charge rows do not sum to one".into());
    }
    if w.charge.column_sums().values().any(|c| *c >= w.epsilon) {
        return Err("charge column reaches epsilon".into());
    }
    for (j, row) in &w.charge.rows {
        let part = w.parts.iter().find(|p| row.iter().all(|(t, _)| p.clients.contains(t)));
        if part.is_none() {
            return Err(format!("deleted client {j} charges across parts"));
        }
    }
    Ok(())
}

/// One machine per part with D_ℓ = Σ_{J_ℓ} d_j / γ and f_ℓ = |T_ℓ| (unbounded
/// in soft mode); supply is the capacity profile.
pub fn to_cckp(w: &WeakDecomposition, inst: &MckcInstance, gamma: &Rational) -> (CckpInstance, SupplyVector) {
    let machines = w
        .parts
        .iter()
        .map(|p| {
            let d: Rational = p.clients.iter().map(|&j| inst.weights[j]).sum();
            Machine::new(d / gamma, (!inst.soft).then_some(p.facilities.len() as u64))
        })
        .collect();
    let caps = inst.profile.iter().map(|c| c.capacity).collect();
    (CckpInstance::new(machines, caps), SupplyVector(inst.profile.iter().map(|c| c.count).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CapacityClass, Distance};
    use crate::num::rat;

    fn star(n: usize) -> MckcInstance {
        let fc = vec![vec![Distance::Finite(int(1)); n]];
        MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(n as i128))], false)
    }

    #[test]
    fn star_is_one_part() {
        let inst = star(4);
        let g = ThresholdGraph::build(&inst, &int(1));
        let w = decompose(&g, &rat(1, 2)).unwrap();
        assert_eq!(w.parts.len(), 1);
        assert_eq!(w.parts[0].facilities, vec![0]);
        assert_eq!(w.parts[0].clients, vec![0, 1, 2, 3]);
        assert!(w.deleted.is_empty());
        check_weak(&g, &w).unwrap();
        let (c, s) = to_cckp(&w, &inst, &int(1));
        assert_eq!(c.machines, vec![Machine::new(int(4), Some(1))]);
        assert_eq!(s, SupplyVector(vec![1]));
        let (c, _) = to_cckp(&w, &inst, &int(2));
        assert_eq!(c.demand(0), int(2));
    }

    #[test]
    fn boundary_clients_are_charged() {
        // c0 - f0 - c1 - f1 - {c2..c4}: seeded at c0 the ball stops after
        // one round with c1's neighbourhood on the boundary.
        let one = Distance::Finite(int(1));
        let inf = Distance::Infinite;
        let fc = vec![vec![one, one, inf, inf, inf], vec![inf, one, one, one, one]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(2, int(5))], false);
        let g = ThresholdGraph::build(&inst, &int(1));
        let w = decompose(&g, &int(1)).unwrap();
        check_weak(&g, &w).unwrap();
        assert!(w.charge.max_column() < int(1));
    }

    #[test]
    fn isolated_client_is_reported() {
        let fc = vec![vec![Distance::Finite(int(1)), Distance::Finite(int(5))]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(2))], false);
        let g = ThresholdGraph::build(&inst, &int(1));
        assert_eq!(decompose(&g, &rat(1, 2)), Err(WeakError::Isolated(1)));
        assert_eq!(decompose(&g, &int(0)), Err(WeakError::Epsilon));
    }
}
