//! Integral client assignment by bipartite b-matching on a flow network.

use crate::flow::FlowNetwork;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("client {0} has a non-integral weight")]
    FractionalWeight(usize),
    #[error("client {0} of weight > 1 would be split across placements")]
    Split(usize),
}

/// Assigns every client to one admissible target. Client `j` carries
/// `demand[j]` units; target `k` accepts at most `bound[k]` units.
/// Returns `Ok(None)` when no assignment exists, which is exact for unit
/// demands. Heavier clients must not be split by the flow.
pub fn assign_clients<F>(demand: &[i64], bound: &[i64], admissible: F) -> Result<Option<Vec<usize>>, MatchingError>
where
    F: Fn(usize, usize) -> bool,
{
    let (nc, nk) = (demand.len(), bound.len());
    let source = nc + nk;
    let sink = source + 1;
    let mut net = FlowNetwork::new(nc + nk + 2);
    let mut arcs: Vec<Vec<(usize, crate::flow::ArcId)>> = vec![Vec::new(); nc];
    for (j, &d) in demand.iter().enumerate() {
        net.add_edge(source, j, d);
        for k in 0..nk {
            if admissible(j, k) {
                arcs[j].push((k, net.add_edge(j, nc + k, d)));
            }
        }
    }
    for (k, &b) in bound.iter().enumerate() {
        net.add_edge(nc + k, sink, b.max(0));
    }
    let total: i64 = demand.iter().sum();
    if net.max_flow(source, sink) < total {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(nc);
    for (j, list) in arcs.iter().enumerate() {
        let mut used = list.iter().filter(|(_, a)| net.flow(*a) > 0);
        let (k, arc) = used.next().expect("saturated client has a used arc");
        if net.flow(*arc) != demand[j] {
            return Err(MatchingError::Split(j));
        }
        out.push(*k);
    }
    Ok(Some(out))
}
