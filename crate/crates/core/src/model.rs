//! MCKC instances and solutions: the metric, the capacity profile, validators
//! and the (a, b) quality measurement.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::num::Rational;

/// A metric distance; `Infinite` marks disconnected pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Distance::Finite(r) => Some(*r),
            Distance::Infinite => None,
        }
    }

    pub fn within(&self, radius: &Rational) -> bool {
        match self {
            Distance::Finite(d) => d <= radius,
            Distance::Infinite => false,
        }
    }

    pub fn plus(&self, other: &Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => write!(f, "{}", crate::num::format_rational(r)),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// `count` copies of a capacity `capacity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityClass {
    pub count: u64,
    pub capacity: Rational,
}

impl CapacityClass {
    pub fn new(count: u64, capacity: Rational) -> Self {
        CapacityClass { count, capacity }
    }
}

/// Facilities occupy points `0..F`, clients occupy points `F..F+C` of `distance`.
#[derive(Debug, Clone, PartialEq)]
pub struct MckcInstance {
    pub facilities: Vec<String>,
    pub clients: Vec<String>,
    pub distance: Vec<Vec<Distance>>,
    pub weights: Vec<Rational>,
    pub profile: Vec<CapacityClass>,
    pub soft: bool,
}

impl MckcInstance {
    /// Instance with default ids `f0.., c0..` and unit client weights.
    pub fn with_matrix(
        num_facilities: usize,
        num_clients: usize,
        distance: Vec<Vec<Distance>>,
        profile: Vec<CapacityClass>,
        soft: bool,
    ) -> Self {
        MckcInstance {
            facilities: (0..num_facilities).map(|i| format!("f{i}")).collect(),
            clients: (0..num_clients).map(|j| format!("c{j}")).collect(),
            distance,
            weights: vec![Rational::from_integer(1); num_clients],
            profile,
            soft,
        }
    }

    /// Builds the full metric from facility-client distances, closing it
    /// under shortest paths so the triangle inequality holds.
    pub fn from_bipartite(fc: &[Vec<Distance>], profile: Vec<CapacityClass>, soft: bool) -> Self {
        let nf = fc.len();
        let nc = fc.first().map_or(0, |r| r.len());
        let n = nf + nc;
        let mut d = vec![vec![Distance::Infinite; n]; n];
        for (a, row) in d.iter_mut().enumerate() {
            row[a] = Distance::zero();
        }
        for i in 0..nf {
            for j in 0..nc {
                d[i][nf + j] = fc[i][j];
                d[nf + j][i] = fc[i][j];
            }
        }
        for k in 0..n {
            for a in 0..n {
                if !d[a][k].is_finite() {
                    continue;
                }
                for b in 0..n {
                    let via = d[a][k].plus(&d[k][b]);
                    if via < d[a][b] {
                        d[a][b] = via;
                    }
                }
            }
        }
        MckcInstance::with_matrix(nf, nc, d, profile, soft)
    }

    pub fn num_facilities(&self) -> usize {
        self.facilities.len()
    }

    pub fn num_clients(&self) -> usize {
        self.clients.len()
    }

    pub fn num_types(&self) -> usize {
        self.profile.len()
    }

    pub fn client_point(&self, j: usize) -> usize {
        self.facilities.len() + j
    }

    pub fn fc(&self, i: usize, j: usize) -> Distance {
        self.distance[i][self.client_point(j)]
    }

    pub fn capacity(&self, p: usize) -> Rational {
        self.profile[p].capacity
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Sorted distinct finite facility-client distances: the radius candidates.
    pub fn candidate_radii(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = (0..self.num_facilities())
            .flat_map(|i| (0..self.num_clients()).filter_map(move |j| self.fc(i, j).finite()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Client weights as integers after scaling by their common denominator.
    pub fn integral_weights(&self) -> Option<Vec<i64>> {
        self.weights
            .iter()
            .map(|w| if w.is_integer() { i64::try_from(*w.numer()).ok() } else { None })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Shape,
    Diagonal,
    Negative,
    Symmetry,
    Triangle,
    Weight,
    Profile,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Shape => "shape",
            ViolationKind::Diagonal => "diagonal",
            ViolationKind::Negative => "negative",
            ViolationKind::Symmetry => "symmetry",
            ViolationKind::Triangle => "triangle",
            ViolationKind::Weight => "weight",
            ViolationKind::Profile => "profile",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

const MAX_REPORTED: usize = 64;

/// Lists every violated instance invariant; empty when the instance is valid.
pub fn validate_instance(inst: &MckcInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, detail: String| {
        if out.len() < MAX_REPORTED {
            out.push(Violation { kind, detail });
        }
    };
    let n = inst.num_facilities() + inst.num_clients();
    if inst.distance.len() != n || inst.distance.iter().any(|r| r.len() != n) {
        push(ViolationKind::Shape, format!("distance matrix must be {n}x{n}"));
        return out;
    }
    if inst.weights.len() != inst.num_clients() {
        push(ViolationKind::Shape, "one weight per client required".into());
    }
    for (j, w) in inst.weights.iter().enumerate() {
        if !w.is_positive() {
            push(ViolationKind::Weight, format!("client {j} has nonpositive weight"));
        }
    }
    let d = &inst.distance;
    for a in 0..n {
        if d[a][a] != Distance::zero() {
            push(ViolationKind::Diagonal, format!("d({a},{a}) is not 0"));
        }
        for b in 0..n {
            if let Distance::Finite(v) = d[a][b] {
                if v.is_negative() {
                    push(ViolationKind::Negative, format!("d({a},{b}) < 0"));
                }
            }
            if b > a && d[a][b] != d[b][a] {
                push(ViolationKind::Symmetry, format!("d({a},{b}) != d({b},{a})"));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !d[a][b].is_finite() {
                continue;
            }
            for c in 0..n {
                let via = d[a][b].plus(&d[b][c]);
                if via.is_finite() && d[a][c] > via {
                    push(ViolationKind::Triangle, format!("d({a},{c}) > d({a},{b}) + d({b},{c})"));
                }
            }
        }
    }
    if inst.profile.is_empty() || inst.profile.iter().map(|c| c.count).sum::<u64>() == 0 {
        push(ViolationKind::Profile, "at least one capacity copy required".into());
    }
    for (p, class) in inst.profile.iter().enumerate() {
        if !class.capacity.is_positive() {
            push(ViolationKind::Profile, format!("capacity {p} is not positive"));
        }
        if p > 0 && inst.profile[p - 1].capacity >= class.capacity {
            push(ViolationKind::Profile, format!("capacities not strictly increasing at {p}"));
        }
    }
    out
}

/// One capacity copy of type `class` placed at facility `location`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub location: usize,
    pub class: usize,
}

/// Placements plus an assignment of every client to one placement
/// (a placement index, so co-located soft capacities are distinguished).
#[derive(Debug, Clone, PartialEq)]
pub struct McKcSolution {
    pub placements: Vec<Placement>,
    pub assignment: Vec<usize>,
    pub radius_guess: Rational,
}

impl McKcSolution {
    pub fn assigned_location(&self, j: usize) -> usize {
        self.placements[self.assignment[j]].location
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub max_assignment_distance: Distance,
    pub per_placement_load: Vec<Rational>,
    /// `a`: max assignment distance over the reference radius.
    pub distance_factor: Distance,
    /// `b`: max over placements of load / capacity.
    pub capacity_factor: Rational,
    pub feasible_counts: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolutionError {
    #[error("assignment covers {got} clients, instance has {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("client {0} is assigned to a placement that does not exist")]
    UnplacedTarget(usize),
    #[error("placement {0} refers to an unknown location or capacity type")]
    BadPlacement(usize),
}

pub fn evaluate_solution(
    inst: &MckcInstance,
    sol: &McKcSolution,
    reference_radius: &Rational,
) -> Result<QualityReport, SolutionError> {
    if sol.assignment.len() != inst.num_clients() {
        return Err(SolutionError::AssignmentLength {
            got: sol.assignment.len(),
            expected: inst.num_clients(),
        });
    }
    for (k, pl) in sol.placements.iter().enumerate() {
        if pl.location >= inst.num_facilities() || pl.class >= inst.num_types() {
            return Err(SolutionError::BadPlacement(k));
        }
    }
    let mut load = vec![Rational::zero(); sol.placements.len()];
    let mut max_dist = Distance::zero();
    for (j, &k) in sol.assignment.iter().enumerate() {
        let pl = sol.placements.get(k).ok_or(SolutionError::UnplacedTarget(j))?;
        load[k] += inst.weights[j];
        let d = inst.fc(pl.location, j);
        if d > max_dist {
            max_dist = d;
        }
    }
    let mut b = Rational::zero();
    for (k, pl) in sol.placements.iter().enumerate() {
        let ratio = load[k] / inst.capacity(pl.class);
        if ratio > b {
            b = ratio;
        }
    }
    let a = match max_dist {
        Distance::Infinite => Distance::Infinite,
        Distance::Finite(m) if m.is_zero() => Distance::zero(),
        Distance::Finite(m) if reference_radius.is_positive() => Distance::Finite(m / reference_radius),
        Distance::Finite(_) => Distance::Infinite,
    };
    let mut counts = vec![0u64; inst.num_types()];
    let mut per_location = vec![0usize; inst.num_facilities()];
    for pl in &sol.placements {
        counts[pl.class] += 1;
        per_location[pl.location] += 1;
    }
    let feasible_counts = counts.iter().zip(&inst.profile).all(|(c, class)| *c <= class.count)
        && (inst.soft || per_location.iter().all(|&c| c <= 1));
    Ok(QualityReport {
        max_assignment_distance: max_dist,
        per_placement_load: load,
        distance_factor: a,
        capacity_factor: b,
        feasible_counts,
    })
}
