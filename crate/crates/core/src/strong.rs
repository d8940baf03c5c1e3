//! LP-guided decomposition: facilities split into roundable sets S_k and
//! complete neighborhoods T_ℓ, clients into covered (C_b), neighborhood
//! (C_bb) and deleted (C_d) classes.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::decomp::{verify_complete_neighborhood, Charge};
use crate::fractional::{check_lp_point, FractionalSolution, LpViolation};
use crate::graph::ThresholdGraph;
use crate::model::MckcInstance;
use crate::num::{int, min_rational, rat, snapped_floor, to_f64, Rational};

/// y below this is treated as zero.
pub const Y_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongParams {
    pub delta: Rational,
    pub epsilon: Rational,
    /// Even ball-growing cutoff t*.
    pub t_star: usize,
    /// Hop distance in G below which a ball merges into an existing root.
    pub near_root: usize,
    /// Hop diameter allowed for a roundable set.
    pub diameter: usize,
}

impl StrongParams {
    /// ε = min(1/12, δ/100) and the constants derived from it.
    pub fn from_delta(delta: &Rational) -> Result<Self, StrongError> {
        if !delta.is_positive() || *delta >= int(1) {
            return Err(StrongError::Delta);
        }
        let epsilon = min_rational(rat(1, 12), delta / int(100));
        let e = to_f64(&epsilon);
        let x = (1.0 / e).ln() / e;
        let base = (8.0 * x).ceil() as usize;
        let t_star = if base % 2 == 0 { base + 2 } else { base + 1 };
        let near_root = ((16.0 * x).ceil() as usize).max(2 * t_star - 4);
        let diameter = (50.0 * x).ceil() as usize;
        Ok(StrongParams { delta: *delta, epsilon, t_star, near_root, diameter })
    }

    /// Hop budget within which every client can be served by a facility
    /// of its own part.
    pub fn hop_budget(&self) -> usize {
        (2 * self.t_star).max(self.diameter + self.t_star + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The ball kept expanding up to t*: a new roundable set.
    Roundable,
    /// Non-expanding ball near a root: merged into that roundable set.
    Merge,
    /// Non-expanding ball far from every root: a complete neighborhood.
    Neighborhood,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongEvent {
    pub facility: usize,
    pub class: usize,
    pub effc: f64,
    pub branch: Branch,
    pub t_bar: usize,
    pub facilities: Vec<usize>,
    pub absorbed: Vec<usize>,
    pub deleted: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundableSet {
    pub root: usize,
    pub facilities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub facilities: Vec<usize>,
    pub clients: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClientClass {
    Covered,
    InNeighborhood(usize),
    Deleted,
}

/// One opened facility of a rounded roundable set.
#[derive(Debug, Clone, PartialEq)]
pub struct Opening {
    pub location: usize,
    pub class: usize,
    /// Power of 1+ε the bucket was rounded to.
    pub class_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongDecomposition {
    pub params: StrongParams,
    pub roundable: Vec<RoundableSet>,
    pub roundings: Vec<Vec<Opening>>,
    pub neighborhoods: Vec<Neighborhood>,
    pub clients: Vec<ClientClass>,
    pub charge: Charge,
    pub x_hat: Vec<Vec<Vec<f64>>>,
    /// effc frozen when the facility was assigned.
    pub effc: BTreeMap<(usize, usize), f64>,
    pub events: Vec<StrongEvent>,
}

impl StrongDecomposition {
    pub fn clients_of(&self, class: ClientClass) -> Vec<usize> {
        (0..self.clients.len()).filter(|&j| self.clients[j] == class).collect()
    }

    pub fn covered(&self) -> Vec<usize> {
        self.clients_of(ClientClass::Covered)
    }

    pub fn deleted(&self) -> Vec<usize> {
        self.clients_of(ClientClass::Deleted)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StrongError {
    #[error("delta must lie in (0, 1)")]
    Delta,
    #[error("fractional point rejected: {0}")]
    Infeasible(#[from] LpViolation),
    #[error("no facility with positive effective capacity while clients remain")]
    Stuck,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0} facilities in S need more than {1} distinct locations")]
    Locations(usize, usize),
}

/// effc(i,p) = Σ_{alive j} d_j x̂_ijp / y_ip; `None` when y_ip is zero.
pub fn effective_capacity(
    inst: &MckcInstance,
    alive: &[bool],
    x_hat: &[Vec<Vec<f64>>],
    y: &[Vec<f64>],
    i: usize,
    p: usize,
) -> Option<f64> {
    if y[i][p] <= Y_EPS {
        return None;
    }
    let served: f64 = (0..inst.num_clients()).filter(|&j| alive[j]).map(|j| to_f64(&inst.weights[j]) * x_hat[i][j][p]).sum();
    Some(served / y[i][p])
}

fn bfs_alive(h: &ThresholdGraph, v: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; h.num_vertices()];
    dist[v] = 0;
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &w in h.neighbors(u) {
            if h.is_alive(w) && dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn decompose(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    frac: &FractionalSolution<f64>,
    params: &StrongParams,
) -> Result<StrongDecomposition, StrongError> {
    check_lp_point(inst, frac)?;
    let (nf, nc, np) = (inst.num_facilities(), inst.num_clients(), inst.num_types());
    let eps = params.epsilon;
    let eps_f = to_f64(&eps);
    let mut h = g.clone();
    let mut x_hat = frac.x.clone();
    let mut client_class: Vec<Option<ClientClass>> = vec![None; nc];
    let mut in_s = vec![false; nf];
    let mut guarded = vec![false; nf];
    let mut out = StrongDecomposition {
        params: params.clone(),
        roundable: Vec::new(),
        roundings: Vec::new(),
        neighborhoods: Vec::new(),
        clients: Vec::new(),
        charge: Charge::default(),
        x_hat: Vec::new(),
        effc: BTreeMap::new(),
        events: Vec::new(),
    };

    while h.alive_clients().next().is_some() {
        for i in (0..nf).filter(|&i| guarded[i]) {
            if let Some(&v) = g.neighbors(i).iter().find(|&&v| h.is_alive(v)) {
                return Err(StrongError::Invariant(format!(
                    "assigned facility {i} still has unassigned neighbour {}",
                    g.client_index(v)
                )));
            }
        }
        let alive: Vec<bool> = (0..nc).map(|j| h.is_alive(g.client_vertex(j))).collect();
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..nf).filter(|&i| h.is_alive(i)) {
            for p in 0..np {
                if let Some(e) = effective_capacity(inst, &alive, &x_hat, &frac.y, i, p) {
                    if best.is_none_or(|(_, _, b)| e > b) {
                        best = Some((i, p, e));
                    }
                }
            }
        }
        let Some((istar, pstar, estar)) = best.filter(|b| b.2 > 0.0) else {
            return Err(StrongError::Stuck);
        };

        let dist = bfs_alive(&h, istar);
        let mut clients_at = vec![0usize; params.t_star + 2];
        for j in 0..nc {
            let d = dist[g.client_vertex(j)];
            if d < clients_at.len() {
                clients_at[d] += 1;
            }
        }
        let mut t_bar = params.t_star + 1;
        let mut inside = 0usize;
        for t in (1..params.t_star).step_by(2) {
            inside += clients_at[t - 1];
            if t >= 2 {
                inside += clients_at[t - 2];
            }
            if Rational::from_integer(clients_at[t] as i128) < eps * Rational::from_integer(inside as i128) {
                t_bar = t;
                break;
            }
        }
        let within = |v: usize, limit: usize| dist[v] < limit;
        let ball_limit = if t_bar > params.t_star { params.t_star } else { t_bar };
        let ball_facilities: Vec<usize> = (0..nf).filter(|&i| within(i, ball_limit)).collect();
        let freeze = |out: &mut StrongDecomposition, facilities: &[usize]| {
            for &i in facilities {
                for p in 0..np {
                    if let Some(e) = effective_capacity(inst, &alive, &x_hat, &frac.y, i, p) {
                        out.effc.insert((i, p), e);
                    }
                }
            }
        };
        freeze(&mut out, &ball_facilities);
        let mut event = StrongEvent {
            facility: istar,
            class: pstar,
            effc: estar,
            branch: Branch::Roundable,
            t_bar,
            facilities: ball_facilities.clone(),
            absorbed: Vec::new(),
            deleted: Vec::new(),
        };

        let (j_int, j_ext): (Vec<usize>, Vec<usize>) = if t_bar > params.t_star {
            (Vec::new(), Vec::new())
        } else {
            (
                (0..nc).filter(|&j| within(g.client_vertex(j), t_bar)).collect(),
                (0..nc).filter(|&j| dist[g.client_vertex(j)] == t_bar).collect(),
            )
        };

        if t_bar > params.t_star {
            out.roundable.push(RoundableSet { root: istar, facilities: ball_facilities.clone() });
        } else {
            for &j in &j_ext {
                client_class[j] = Some(ClientClass::Deleted);
                h.delete(g.client_vertex(j));
                for row in x_hat.iter_mut() {
                    row[j].iter_mut().for_each(|v| *v = 0.0);
                }
            }
            out.charge.add_uniform(&j_ext, &j_int);
            event.deleted = j_ext.clone();
            let near = if out.roundable.is_empty() {
                None
            } else {
                let hops = g.hop_distances(istar);
                out.roundable
                    .iter()
                    .enumerate()
                    .filter_map(|(k, s)| hops[s.root].map(|d| (d, k)))
                    .filter(|&(d, _)| d <= params.near_root)
                    .min()
                    .map(|(_, k)| k)
            };
            match near {
                Some(k) => {
                    event.branch = Branch::Merge;
                    out.roundable[k].facilities.extend(&ball_facilities);
                    out.roundable[k].facilities.sort_unstable();
                    for &i in &ball_facilities {
                        guarded[i] = true;
                    }
                }
                None => {
                    event.branch = Branch::Neighborhood;
                    let l = out.neighborhoods.len();
                    for &j in &j_int {
                        client_class[j] = Some(ClientClass::InNeighborhood(l));
                        h.delete(g.client_vertex(j));
                    }
                    for &i in &ball_facilities {
                        guarded[i] = true;
                    }
                    out.neighborhoods.push(Neighborhood { facilities: ball_facilities.clone(), clients: j_int.clone() });
                }
            }
        }
        for &i in &ball_facilities {
            h.delete(i);
        }
        if event.branch != Branch::Neighborhood {
            for &i in &ball_facilities {
                in_s[i] = true;
            }
            for j in 0..nc {
                if !h.is_alive(g.client_vertex(j)) {
                    continue;
                }
                let mass: f64 = (0..nf).filter(|&i| in_s[i]).map(|i| frac.x[i][j].iter().sum::<f64>()).sum();
                if mass > 1.0 - eps_f {
                    client_class[j] = Some(ClientClass::Covered);
                    h.delete(g.client_vertex(j));
                    for (i, row) in x_hat.iter_mut().enumerate() {
                        if !in_s[i] {
                            row[j].iter_mut().for_each(|v| *v = 0.0);
                        }
                    }
                    event.absorbed.push(j);
                }
            }
            if event.branch == Branch::Merge {
                if let Some(&j) = j_int.iter().find(|&&j| client_class[j] != Some(ClientClass::Covered)) {
                    return Err(StrongError::Invariant(format!("merged ball left internal client {j} uncovered")));
                }
            }
        }
        out.events.push(event);
    }

    out.clients = client_class.into_iter().map(|c| c.expect("loop ends with every client assigned")).collect();
    out.x_hat = x_hat;
    for k in 0..out.roundable.len() {
        let opening = round_roundable_set(inst, &out.roundable[k].facilities, &out.effc, &frac.y, &eps)?;
        out.roundings.push(opening);
    }
    Ok(out)
}

/// Buckets (i,p) ∈ S by ⌊log_{1+ε} effc⌋, opens ⌊Σ y⌋ facilities per bucket
/// at distinct lowest-id locations, each with the smallest real capacity
/// present in its bucket.
pub fn round_roundable_set(
    inst: &MckcInstance,
    facilities: &[usize],
    effc: &BTreeMap<(usize, usize), f64>,
    y: &[Vec<f64>],
    eps: &Rational,
) -> Result<Vec<Opening>, StrongError> {
    let ln_delta = (1.0 + to_f64(eps)).ln();
    let mut buckets: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for &i in facilities {
        for p in 0..inst.num_types() {
            let Some(&e) = effc.get(&(i, p)) else { continue };
            if y[i][p] <= Y_EPS || e <= 0.0 {
                continue;
            }
            let u = (e.ln() / ln_delta).floor() as i64;
            let entry = buckets.entry(u).or_insert((0.0, p));
            entry.0 += y[i][p];
            let cur = entry.1;
            if (inst.capacity(p), p) < (inst.capacity(cur), cur) {
                entry.1 = p;
            }
        }
    }
    let mut locations: Vec<usize> = facilities.to_vec();
    locations.sort_unstable();
    let mut used = vec![0usize; locations.len()];
    let mut openings = Vec::new();
    for (&u, &(alpha, class)) in buckets.iter().rev() {
        let count = snapped_floor(alpha).max(0) as usize;
        let class_value = ((u as f64) * ln_delta).exp();
        for _ in 0..count {
            let slot = (0..locations.len()).min_by_key(|&s| (used[s], s)).ok_or(StrongError::Locations(count, 0))?;
            if !inst.soft && used[slot] > 0 {
                return Err(StrongError::Locations(openings.len() + 1, locations.len()));
            }
            used[slot] += 1;
            openings.push(Opening { location: locations[slot], class, class_value });
        }
    }
    Ok(openings)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundableReport {
    pub diameter: Option<usize>,
    pub diameter_ok: bool,
    pub condition1_ok: bool,
    pub condition2_ok: bool,
    pub served: f64,
    pub opened: f64,
}

impl RoundableReport {
    pub fn ok(&self) -> bool {
        self.diameter_ok && self.condition1_ok && self.condition2_ok
    }
}

/// Diameter ≤ a, suffix counts of the rounding ≤ floors of the LP's suffix
/// masses, and demand served by S ≤ b · opened capacity.
#[allow(clippy::too_many_arguments)]
pub fn verify_roundable(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    facilities: &[usize],
    openings: &[Opening],
    x_hat: &[Vec<Vec<f64>>],
    y: &[Vec<f64>],
    a: usize,
    b: f64,
) -> RoundableReport {
    let diameter = if facilities.is_empty() { Some(0) } else { g.hop_diameter(facilities).ok().flatten() };
    let diameter_ok = diameter.is_some_and(|d| d <= a);
    let order: Vec<usize> = {
        let mut o: Vec<usize> = (0..inst.num_types()).collect();
        o.sort_by(|&p, &q| inst.capacity(p).cmp(&inst.capacity(q)).then(p.cmp(&q)));
        o
    };
    let mut condition1_ok = true;
    for start in 0..order.len() {
        let suffix = &order[start..];
        let lp: f64 = facilities.iter().map(|&i| suffix.iter().map(|&q| y[i][q]).sum::<f64>()).sum();
        let rounded = openings.iter().filter(|o| suffix.contains(&o.class)).count() as i128;
        if rounded > snapped_floor(lp) {
            condition1_ok = false;
        }
    }
    if openings.iter().any(|o| !facilities.contains(&o.location)) {
        condition1_ok = false;
    }
    let served: f64 = (0..inst.num_clients())
        .map(|j| to_f64(&inst.weights[j]) * facilities.iter().map(|&i| x_hat[i][j].iter().sum::<f64>()).sum::<f64>())
        .sum();
    let opened: f64 = openings.iter().map(|o| to_f64(&inst.capacity(o.class))).sum();
    let condition2_ok = served <= b * opened + 1e-9 * (1.0 + served);
    RoundableReport { diameter, diameter_ok, condition1_ok, condition2_ok, served, opened }
}

/// Checks every structural claim about a decomposition; the error names the
/// first failure.
pub fn check_strong(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    frac: &FractionalSolution<f64>,
    d: &StrongDecomposition,
) -> Result<(), String> {
    let p = &d.params;
    let nf = inst.num_facilities();
    let mut owner = vec![false; nf];
    for f in d.roundable.iter().map(|s| &s.facilities).chain(d.neighborhoods.iter().map(|t| &t.facilities)) {
        for &i in f {
            if std::mem::replace(&mut owner[i], true) {
                return Err(format!("facility {i} assigned twice"));
            }
        }
    }
    for (l, t) in d.neighborhoods.iter().enumerate() {
        if !verify_complete_neighborhood(g, &t.facilities, &t.clients) {
            return Err(format!("neighborhood {l} is not complete"));
        }
        match g.hop_diameter(&t.facilities) {
            Ok(Some(diam)) if diam <= 2 * p.t_star => {}
            other => return Err(format!("neighborhood {l} diameter {other:?}")),
        }
        if t.clients.iter().any(|&j| d.clients[j] != ClientClass::InNeighborhood(l)) {
            return Err(format!("neighborhood {l} client classes disagree"));
        }
    }
    let b = 1.0 + to_f64(&p.delta);
    for (k, s) in d.roundable.iter().enumerate() {
        let r = verify_roundable(inst, g, &s.facilities, &d.roundings[k], &d.x_hat, &frac.y, p.diameter, b);
        if !r.ok() {
            return Err(format!("roundable set {k}: {r:?}"));
        }
        let class_total: f64 = d.roundings[k].iter().map(|o| o.class_value).sum();
        if r.served > b * class_total + 1e-9 * (1.0 + r.served) {
            return Err(format!("roundable set {k} overloads its class values"));
        }
    }
    let in_s: Vec<bool> = (0..nf).map(|i| d.roundable.iter().any(|s| s.facilities.contains(&i))).collect();
    let floor = 1.0 - to_f64(&p.delta) / 100.0;
    for j in d.covered() {
        let mass: f64 = (0..nf).filter(|&i| in_s[i]).map(|i| d.x_hat[i][j].iter().sum::<f64>()).sum();
        if mass < floor - 1e-9 {
            return Err(format!("covered client {j} has mass {mass}"));
        }
    }
    if !d.charge.rows_sum_to_one() || d.charge.rows.len() != d.deleted().len() {
        return Err("charge rows do not match deleted clients".into());
    }
    if d.charge.max_column() > p.epsilon {
        return Err("charge column exceeds epsilon".into());
    }
    for row in d.charge.rows.values() {
        if row.iter().any(|(t, _)| d.clients[*t] == ClientClass::Deleted) {
            return Err("charge onto a deleted client".into());
        }
    }
    if d.charge.max_support_hops(g).is_none_or(|h| h > 2 * p.t_star) {
        return Err("charge support too long".into());
    }
    for i in 0..nf {
        for j in 0..inst.num_clients() {
            for q in 0..inst.num_types() {
                if d.x_hat[i][j][q] > frac.x[i][j][q] {
                    return Err(format!("x_hat exceeds x at ({i},{j},{q})"));
                }
            }
        }
    }
    Ok(())
}
