//! The bipartite threshold graph G at a radius guess, with a deletion mask
//! giving the working graph H used by both decompositions.
//!
//! Vertices `0..F` are facilities and `F..F+C` are clients.

use std::collections::VecDeque;

use crate::model::MckcInstance;
use crate::num::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {0} is deleted from the working graph")]
    Deleted(usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGraph {
    pub radius: Rational,
    num_facilities: usize,
    num_clients: usize,
    adj: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

/// BFS layers around a vertex: `inner` holds hop distance `< t`,
/// `boundary` holds distance exactly `t`. Both sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layers {
    pub inner: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl ThresholdGraph {
    /// Edge (i, j) iff d(i, j) <= radius.
    pub fn build(inst: &MckcInstance, radius: &Rational) -> Self {
        let nf = inst.num_facilities();
        let nc = inst.num_clients();
        let mut adj = vec![Vec::new(); nf + nc];
        for i in 0..nf {
            for j in 0..nc {
                if inst.fc(i, j).within(radius) {
                    adj[i].push(nf + j);
                    adj[nf + j].push(i);
                }
            }
        }
        ThresholdGraph { radius: *radius, num_facilities: nf, num_clients: nc, adj, alive: vec![true; nf + nc] }
    }

    pub fn num_facilities(&self) -> usize {
        self.num_facilities
    }

    pub fn num_clients(&self) -> usize {
        self.num_clients
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj[..self.num_facilities].iter().map(Vec::len).sum()
    }

    pub fn is_facility(&self, v: usize) -> bool {
        v < self.num_facilities
    }

    pub fn client_vertex(&self, j: usize) -> usize {
        self.num_facilities + j
    }

    pub fn client_index(&self, v: usize) -> usize {
        v - self.num_facilities
    }

    /// Neighbors in G, ignoring deletions.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, i: usize, client: usize) -> bool {
        self.adj[i].contains(&self.client_vertex(client))
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn delete(&mut self, v: usize) {
        self.alive[v] = false;
    }

    pub fn alive_clients(&self) -> impl Iterator<Item = usize> + '_ {
        (self.num_facilities..self.adj.len()).filter(|&v| self.alive[v])
    }

    /// Layered BFS in H (surviving vertices only).
    pub fn layered_neighborhood(&self, v: usize, t: usize) -> Result<Layers, GraphError> {
        if v >= self.adj.len() {
            return Err(GraphError::OutOfRange(v));
        }
        if !self.alive[v] {
            return Err(GraphError::Deleted(v));
        }
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut inner = Vec::new();
        let mut boundary = Vec::new();
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du < t {
                inner.push(u);
            } else {
                boundary.push(u);
                continue;
            }
            for &w in &self.adj[u] {
                if self.alive[w] && dist[w] == usize::MAX {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        inner.sort_unstable();
        boundary.sort_unstable();
        Ok(Layers { inner, boundary })
    }

    /// Hop distances from `v` in G (deletions ignored); `None` when unreachable.
    pub fn hop_distances(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Max pairwise hop distance in G; `Ok(None)` encodes infinity.
    pub fn hop_diameter(&self, set: &[usize]) -> Result<Option<usize>, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if let Some(&v) = set.iter().find(|&&v| v >= self.adj.len()) {
            return Err(GraphError::OutOfRange(v));
        }
        let mut best = 0;
        for &a in set {
            let dist = self.hop_distances(a);
            for &b in set {
                match dist[b] {
                    Some(d) => best = best.max(d),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(best))
    }

    /// Hop distance in G from `v` to the nearest member of `targets`.
    pub fn distance_to_set(&self, v: usize, targets: &[usize]) -> Option<usize> {
        let dist = self.hop_distances(v);
        targets.iter().filter_map(|&t| dist[t]).min()
    }

    /// Connected components of G as a component id per vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.adj.len()];
        let mut next = 0;
        for s in 0..self.adj.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CapacityClass, Distance};
    use crate::num::{int, rat};

    fn star() -> MckcInstance {
        let fc = vec![vec![Distance::Finite(int(1)); 3]];
        MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(3))], false)
    }

    #[test]
    fn star_thresholds() {
        assert_eq!(ThresholdGraph::build(&star(), &int(1)).num_edges(), 3);
        assert_eq!(ThresholdGraph::build(&star(), &rat(1, 2)).num_edges(), 0);
    }

    #[test]
    fn star_layers_from_a_client() {
        let g = ThresholdGraph::build(&star(), &int(1));
        let c = g.client_vertex(0);
        let l1 = g.layered_neighborhood(c, 1).unwrap();
        assert_eq!(l1.inner, vec![c]);
        assert_eq!(l1.boundary, vec![0]);
        let l2 = g.layered_neighborhood(c, 2).unwrap();
        assert_eq!(l2.inner, vec![0, c]);
        assert_eq!(l2.boundary, vec![g.client_vertex(1), g.client_vertex(2)]);
    }

    #[test]
    fn path_layers() {
        // c1 - f1 - c2 - f2
        let inf = Distance::Infinite;
        let one = Distance::Finite(int(1));
        let fc = vec![vec![one, one], vec![inf, one]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(1))], false);
        let g = ThresholdGraph::build(&inst, &int(1));
        let (c1, c2) = (g.client_vertex(0), g.client_vertex(1));
        let l = g.layered_neighborhood(c1, 3).unwrap();
        assert_eq!(l.inner, vec![0, c1, c2]);
        assert_eq!(l.boundary, vec![1]);
    }

    #[test]
    fn deleted_seed_is_an_error() {
        let mut g = ThresholdGraph::build(&star(), &int(1));
        g.delete(0);
        assert_eq!(g.layered_neighborhood(0, 1), Err(GraphError::Deleted(0)));
    }

    #[test]
    fn diameters() {
        let g = ThresholdGraph::build(&star(), &int(1));
        assert_eq!(g.hop_diameter(&[0]), Ok(Some(0)));
        assert_eq!(g.hop_diameter(&[g.client_vertex(0), g.client_vertex(2)]), Ok(Some(2)));
        assert_eq!(g.hop_diameter(&[]), Err(GraphError::EmptySet));
        let g = ThresholdGraph::build(&star(), &rat(1, 2));
        assert_eq!(g.hop_diameter(&[0, g.client_vertex(0)]), Ok(None));
    }
}
