//! Dinic max-flow with integer capacities. Edges may be added between runs;
//! the existing flow is kept, so saturated source arcs stay saturated.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

/// Handle to an arc, used to read its flow afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcId {
    from: usize,
    index: usize,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.level.push(0);
        self.iter.push(0);
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> ArcId {
        let index = self.adj[from].len();
        let rev_index = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, cap, rev: rev_index });
        self.adj[to].push(Arc { to: from, cap: 0, rev: index });
        ArcId { from, index }
    }

    /// Flow currently pushed along an arc.
    pub fn flow(&self, id: ArcId) -> i64 {
        let arc = &self.adj[id.from][id.index];
        self.adj[arc.to][arc.rev].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for a in &self.adj[v] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.adj[v].len() {
            let k = self.iter[v];
            let (to, cap) = (self.adj[v][k].to, self.adj[v][k].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.adj[v][k].cap -= d;
                    let rev = self.adj[v][k].rev;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Augments until no path remains; returns the additional flow.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_bipartite_flow() {
        let mut g = FlowNetwork::new(6);
        let a = g.add_edge(0, 1, 1);
        g.add_edge(0, 2, 1);
        g.add_edge(1, 3, 1);
        g.add_edge(1, 4, 1);
        g.add_edge(2, 3, 1);
        g.add_edge(3, 5, 1);
        g.add_edge(4, 5, 1);
        assert_eq!(g.max_flow(0, 5), 2);
        assert_eq!(g.flow(a), 1);
    }

    #[test]
    fn incremental_edges_keep_flow() {
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, 2);
        g.add_edge(1, 3, 1);
        assert_eq!(g.max_flow(0, 3), 1);
        g.add_edge(1, 2, 5);
        g.add_edge(2, 3, 5);
        assert_eq!(g.max_flow(0, 3), 1);
    }
}
