//! End-to-end solvers: radius search, LP, decomposition, capacity transfer,
//! allocation over the neighborhood instance, and integral client assignment
//! by b-matching.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cckp::{Allocation, CckpInstance, Machine, SupplyVector};
use crate::fractional::{FractionalSolution, MckcLp};
use crate::graph::ThresholdGraph;
use crate::lp::{cutting_plane_solve, solve, Constraint, CutOutcome, LpError, LpOutcome, Relation};
use crate::matching::assign_clients;
use crate::maxmin::config::ConfigurationLpSolution;
use crate::maxmin::conf_round::conf_lp_round;
use crate::maxmin::greedy::{greedy_qcmin, GreedyOutcome};
use crate::maxmin::qptas::{qptas_cckp, QptasError, QptasOutcome};
use crate::model::{evaluate_solution, validate_instance, McKcSolution, MckcInstance, Placement, QualityReport};
use crate::num::{ceil, common_denominator, format_rational, int, rat, to_f64, Rational, Scalar};
use crate::oracle::brute_force_cckp;
use crate::strong::{self, check_strong, Branch, StrongDecomposition, StrongParams};
use crate::supply::{
    check_assignment, p_conf_separation, rational_supply, shift_configurations, suffix_dominates, ConfOutcome,
    SupplyError, DEFAULT_SEPARATION_ROUNDS,
};
use crate::weak;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Weak,
    StrongSoft,
    StrongHard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Backend {
    Greedy,
    Conf,
    Qptas,
    Brute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub delta: Rational,
    pub mode: Mode,
    pub backend: Backend,
    pub max_cut_rounds: usize,
    pub separation_rounds: usize,
    pub qptas_epsilon: Rational,
    /// Overrides the constants derived from δ in the strong modes.
    pub strong: Option<StrongParams>,
}

impl PipelineConfig {
    pub fn new(mode: Mode, delta: Rational) -> Self {
        let backend = match mode {
            Mode::StrongSoft => Backend::Greedy,
            _ => Backend::Conf,
        };
        PipelineConfig {
            delta,
            mode,
            backend,
            max_cut_rounds: 200,
            separation_rounds: DEFAULT_SEPARATION_ROUNDS,
            qptas_epsilon: rat(1, 5),
            strong: None,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    /// Strong-soft mode solves the soft-capacity relaxation of a hard instance.
    pub fn validate(&self, inst: &MckcInstance) -> Result<(), PipelineError> {
        if !self.delta.is_positive() || self.delta >= int(1) {
            return Err(PipelineError::Config("delta must lie in (0, 1)".into()));
        }
        match (self.mode, self.backend) {
            (Mode::StrongSoft, b) if b != Backend::Greedy => {
                Err(PipelineError::Config("strong-soft mode always uses the greedy backend".into()))
            }
            (Mode::Weak | Mode::StrongHard, Backend::Greedy) if !inst.soft => {
                Err(PipelineError::Config("the greedy backend ignores cardinalities; use it with soft capacities".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Why a radius guess produced no solution.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Failure {
    #[error("client {0} has no facility within the radius")]
    Unreachable(usize),
    #[error("LP relaxation is infeasible")]
    LpInfeasible,
    #[error("cutting planes proved the radius infeasible after {0} cuts")]
    CutProvedInfeasible(usize),
    #[error("cut limit of {0} rounds reached")]
    CutLimit(usize),
    #[error("allocation backend certified the neighborhood instance infeasible")]
    BackendInfeasible,
    #[error("allocation backend found no allocation for the transferred supply")]
    BackendGap,
    #[error("no integral assignment within the hop budget")]
    MatchingFailed,
    #[error("size guard: {0}")]
    Guard(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Failure {
    /// True when the failure proves no solution exists at this radius.
    pub fn is_certified(&self) -> bool {
        matches!(
            self,
            Failure::Unreachable(_) | Failure::LpInfeasible | Failure::CutProvedInfeasible(_) | Failure::BackendInfeasible
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Unreachable(_) => "UNREACHABLE",
            Failure::LpInfeasible => "LP_INFEASIBLE",
            Failure::CutProvedInfeasible(_) => "CUT_PROVED_INFEASIBLE",
            Failure::CutLimit(_) => "CUT_LIMIT",
            Failure::BackendInfeasible => "BACKEND_INFEASIBLE",
            Failure::BackendGap => "BACKEND_GAP",
            Failure::MatchingFailed => "MATCHING_FAILED",
            Failure::Guard(_) => "GUARD",
            Failure::Internal(_) => "INTERNAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("no candidate radius succeeded; largest guess failed with {0}")]
    NoRadius(Failure),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Radius { radius: String, ok: bool, failure: Option<String> },
    WeakPart { seed: usize, t: usize, facilities: Vec<usize>, clients: Vec<usize> },
    StrongStep { facility: usize, class: usize, effc: f64, branch: String, t_bar: usize, facilities: usize, absorbed: usize, deleted: usize },
    Transfer { s: Vec<u64>, s_tilde: Vec<u64>, t: Vec<u64> },
    Cut { round: usize, rhs: String, nonzeros: usize },
    Allocation { machines: usize, min_ratio: String },
    Matching { b: String, hops: usize, budget: usize },
    Quality { distance: String, a: String, b: String, feasible_counts: bool },
}

/// Run trace, emitted as JSON lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    pub fn to_json_lines(&self) -> String {
        self.events.iter().map(|e| serde_json::to_string(e).expect("trace events serialize") + "\n").collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSolution {
    pub solution: McKcSolution,
    pub quality: QualityReport,
    /// Smallest capacity factor the matching accepted for these placements.
    pub matching_b: Rational,
    /// Largest hop distance in G between a client and its facility.
    pub hops: usize,
    pub hop_budget: usize,
    pub cuts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub radius: Rational,
    pub result: RadiusSolution,
    pub attempts: Vec<(Rational, Option<Failure>)>,
}

/// Binary search over the sorted facility-client distances for the
/// smallest radius at which `solve_at_radius` succeeds.
pub fn guess_opt(inst: &MckcInstance, cfg: &PipelineConfig, trace: &mut Trace) -> Result<SearchResult, PipelineError> {
    if let Some(v) = validate_instance(inst).first() {
        return Err(PipelineError::Instance(v.detail.clone()));
    }
    cfg.validate(inst)?;
    let radii = inst.candidate_radii();
    let Some(top) = radii.last() else {
        return Err(PipelineError::Instance("no finite facility-client distance".into()));
    };
    let mut attempts = Vec::new();
    let mut best = match solve_at_radius(inst, top, cfg, trace) {
        Ok(s) => {
            attempts.push((*top, None));
            (*top, s)
        }
        Err(f) => {
            attempts.push((*top, Some(f.clone())));
            return Err(PipelineError::NoRadius(f));
        }
    };
    let (mut lo, mut hi) = (0, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match solve_at_radius(inst, &radii[mid], cfg, trace) {
            Ok(s) => {
                attempts.push((radii[mid], None));
                best = (radii[mid], s);
                hi = mid;
            }
            Err(f) => {
                attempts.push((radii[mid], Some(f)));
                lo = mid + 1;
            }
        }
    }
    Ok(SearchResult { radius: best.0, result: best.1, attempts })
}

pub fn solve_at_radius(
    inst: &MckcInstance,
    radius: &Rational,
    cfg: &PipelineConfig,
    trace: &mut Trace,
) -> Result<RadiusSolution, Failure> {
    let g = ThresholdGraph::build(inst, radius);
    let out = match cfg.mode {
        Mode::Weak => solve_weak(inst, &g, cfg, trace),
        Mode::StrongSoft if !inst.soft => {
            let relaxed = MckcInstance { soft: true, ..inst.clone() };
            solve_strong(&relaxed, &g, cfg, false, trace)
        }
        Mode::StrongSoft => solve_strong(inst, &g, cfg, false, trace),
        Mode::StrongHard => solve_strong(inst, &g, cfg, true, trace),
    };
    trace.push(TraceEvent::Radius {
        radius: format_rational(radius),
        ok: out.is_ok(),
        failure: out.as_ref().err().map(|f| format!("{}: {f}", f.kind())),
    });
    out
}

fn solve_weak(inst: &MckcInstance, g: &ThresholdGraph, cfg: &PipelineConfig, trace: &mut Trace) -> Result<RadiusSolution, Failure> {
    let w = weak::decompose(g, &cfg.delta).map_err(|e| match e {
        weak::WeakError::Isolated(j) => Failure::Unreachable(j),
        other => Failure::Internal(other.to_string()),
    })?;
    weak::check_weak(g, &w).map_err(Failure::Internal)?;
    for p in &w.parts {
        trace.push(TraceEvent::WeakPart { seed: p.seed, t: p.t, facilities: p.facilities.clone(), clients: p.clients.clone() });
    }
    let (cckp, supply) = weak::to_cckp(&w, inst, &int(1));
    let alloc = allocate(&cckp, &supply, cfg.backend, cfg, trace)?;
    let parts: Vec<Vec<usize>> = w.parts.iter().map(|p| p.facilities.clone()).collect();
    let placements = install(&parts, &alloc, &cckp, inst.soft);
    let t_max = w.parts.iter().map(|p| p.t).max().unwrap_or(2);
    finish(inst, g, placements, 2 * t_max - 1, 0, trace)
}

/// Everything the strong route derives from one LP point.
struct Prepared {
    dec: StrongDecomposition,
    transfer: Transfer,
    cckp: CckpInstance,
    y_t: Vec<f64>,
}

fn prepare(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    frac: &FractionalSolution<f64>,
    params: &StrongParams,
) -> Result<Prepared, Failure> {
    let dec = strong::decompose(inst, g, frac, params).map_err(|e| Failure::Internal(e.to_string()))?;
    check_strong(inst, g, frac, &dec).map_err(Failure::Internal)?;
    let np = inst.num_types();
    let mut s = vec![0u64; np];
    for o in dec.roundings.iter().flatten() {
        s[o.class] += 1;
    }
    let in_s: Vec<usize> = dec.roundable.iter().flat_map(|r| r.facilities.iter().copied()).collect();
    let in_t: Vec<usize> = dec.neighborhoods.iter().flat_map(|t| t.facilities.iter().copied()).collect();
    let mass = |set: &[usize], p: usize| set.iter().map(|&i| frac.y[i][p]).sum::<f64>();
    let y_s: Vec<f64> = (0..np).map(|p| mass(&in_s, p)).collect();
    let y_t: Vec<f64> = (0..np).map(|p| mass(&in_t, p)).collect();
    let caps: Vec<Rational> = inst.profile.iter().map(|c| c.capacity).collect();
    let k: Vec<u64> = inst.profile.iter().map(|c| c.count).collect();
    let transfer = transfer_capacities(&caps, &s, &y_s, &k).map_err(|e| Failure::Internal(e.to_string()))?;
    let machines = dec
        .neighborhoods
        .iter()
        .map(|t| {
            let d: Rational = t.clients.iter().map(|&j| inst.weights[j]).sum();
            Machine::new(d, (!inst.soft).then_some(t.facilities.len() as u64))
        })
        .collect();
    let cckp = CckpInstance::new(machines, caps);
    let t_f: Vec<f64> = transfer.t.iter().map(|&v| v as f64).collect();
    if !suffix_dominates(&cckp, &t_f, &y_t) {
        return Err(Failure::Internal("residual supply does not dominate the neighborhood mass".into()));
    }
    Ok(Prepared { dec, transfer, cckp, y_t })
}

fn solve_strong(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    cfg: &PipelineConfig,
    hard: bool,
    trace: &mut Trace,
) -> Result<RadiusSolution, Failure> {
    if let Some(j) = (0..inst.num_clients()).find(|&j| g.neighbors(g.client_vertex(j)).is_empty()) {
        return Err(Failure::Unreachable(j));
    }
    let params = match &cfg.strong {
        Some(p) => p.clone(),
        None => StrongParams::from_delta(&cfg.delta).map_err(|e| Failure::Internal(e.to_string()))?,
    };
    let lp = MckcLp::build(inst, g);
    let (prep, conf, cuts) = if !hard {
        let point = match solve(&lp.system).map_err(lp_failure)? {
            LpOutcome::Feasible { point, .. } => point,
            LpOutcome::Infeasible(_) => return Err(Failure::LpInfeasible),
            LpOutcome::Unbounded => return Err(Failure::Internal("LP unbounded".into())),
        };
        let frac = lp.extract(&point);
        let prep = prepare(inst, g, &frac, &params)?;
        let z: Vec<Vec<f64>> = prep
            .dec
            .neighborhoods
            .iter()
            .map(|t| (0..inst.num_types()).map(|p| t.facilities.iter().map(|&i| frac.y[i][p]).sum()).collect())
            .collect();
        if !check_assignment(&prep.cckp, &prep.y_t, &z) {
            return Err(Failure::Internal("aggregated openings are not an assignment witness".into()));
        }
        (prep, None, 0)
    } else {
        let mut accepted: Option<(Prepared, Option<ConfigurationLpSolution<f64>>)> = None;
        let mut abort: Option<Failure> = None;
        let mut round = 0usize;
        let mut cut_log = Vec::new();
        let outcome = cutting_plane_solve(
            &lp.system,
            |point| {
                let frac = lp.extract(point);
                let prep = match prepare(inst, g, &frac, &params) {
                    Ok(p) => p,
                    Err(f) => {
                        abort = Some(f);
                        return None;
                    }
                };
                if prep.cckp.num_machines() == 0 {
                    accepted = Some((prep, None));
                    return None;
                }
                let y_t = rational_supply(&prep.y_t);
                match p_conf_separation(&prep.cckp, &y_t, &cfg.delta, cfg.separation_rounds) {
                    Ok(ConfOutcome::Accept { z, .. }) => {
                        accepted = Some((prep, Some(z)));
                        None
                    }
                    Ok(ConfOutcome::Separated { hyperplane, .. }) => {
                        let mut coeffs = Vec::new();
                        for t in &prep.dec.neighborhoods {
                            for &i in &t.facilities {
                                for (p, a) in hyperplane.alpha.iter().enumerate() {
                                    if !a.is_zero() {
                                        coeffs.push((lp.y_var[i][p], to_f64(a)));
                                    }
                                }
                            }
                        }
                        round += 1;
                        cut_log.push((round, format_rational(&hyperplane.rhs), coeffs.len()));
                        Some(Constraint::new(coeffs, Relation::Ge, to_f64(&hyperplane.rhs)))
                    }
                    Err(e) => {
                        abort = Some(supply_failure(e));
                        None
                    }
                }
            },
            cfg.max_cut_rounds,
        )
        .map_err(lp_failure)?;
        for (r, rhs, nonzeros) in cut_log {
            trace.push(TraceEvent::Cut { round: r, rhs, nonzeros });
        }
        if let Some(f) = abort {
            return Err(f);
        }
        match outcome {
            CutOutcome::Accepted { rounds, .. } => {
                let (prep, z) = accepted.ok_or_else(|| Failure::Internal("accepted point without state".into()))?;
                (prep, z, rounds)
            }
            CutOutcome::Infeasible { rounds, .. } if rounds == 0 => return Err(Failure::LpInfeasible),
            CutOutcome::Infeasible { rounds, .. } => return Err(Failure::CutProvedInfeasible(rounds)),
            CutOutcome::CutLimit { cuts } => return Err(Failure::CutLimit(cuts.len())),
            CutOutcome::Unbounded { .. } => return Err(Failure::Internal("LP unbounded".into())),
        }
    };
    for e in &prep.dec.events {
        trace.push(TraceEvent::StrongStep {
            facility: e.facility,
            class: e.class,
            effc: e.effc,
            branch: format!("{:?}", e.branch),
            t_bar: e.t_bar,
            facilities: e.facilities.len(),
            absorbed: e.absorbed.len(),
            deleted: e.deleted.len(),
        });
    }
    let s: Vec<u64> = {
        let mut s = vec![0u64; inst.num_types()];
        prep.dec.roundings.iter().flatten().for_each(|o| s[o.class] += 1);
        s
    };
    trace.push(TraceEvent::Transfer { s, s_tilde: prep.transfer.s_tilde.clone(), t: prep.transfer.t.clone() });

    let supply = SupplyVector(prep.transfer.t.clone());
    let alloc = if prep.cckp.num_machines() == 0 {
        Allocation::empty(0)
    } else if !hard {
        match greedy_qcmin(&prep.cckp, &supply) {
            GreedyOutcome::Allocation(mut a) => {
                a.distribute_leftovers(&prep.cckp, &supply);
                a
            }
            GreedyOutcome::Certificate(_) => {
                return Err(Failure::Internal("greedy certificate despite an assignment witness".into()))
            }
        }
    } else if cfg.backend == Backend::Conf {
        let z = conf.ok_or_else(|| Failure::Internal("no configuration witness".into()))?;
        let scaled = scale_demands(&prep.cckp, &(int(1) + cfg.delta));
        let shifted = shift_configurations(&scaled, &z, &supply.as_f64());
        let report = conf_lp_round(&scaled, &supply, &shifted).map_err(|e| Failure::Internal(e.to_string()))?;
        let mut a = report.allocation;
        a.distribute_leftovers(&prep.cckp, &supply);
        a
    } else {
        allocate(&prep.cckp, &supply, cfg.backend, cfg, trace).map_err(|f| match f {
            Failure::BackendInfeasible => Failure::BackendGap,
            other => other,
        })?
    };
    if prep.cckp.num_machines() > 0 {
        trace.push(TraceEvent::Allocation { machines: prep.cckp.num_machines(), min_ratio: format_rational(&alloc.min_ratio(&prep.cckp)) });
    }

    let caps: Vec<Rational> = inst.profile.iter().map(|c| c.capacity).collect();
    let mut placements = Vec::new();
    for rounding in &prep.dec.roundings {
        let classes: Vec<usize> = rounding.iter().map(|o| o.class).collect();
        let real = prep.transfer.upgrade(&caps, &classes);
        for (o, q) in rounding.iter().zip(real) {
            placements.push(Placement { location: o.location, class: q });
        }
    }
    let parts: Vec<Vec<usize>> = prep.dec.neighborhoods.iter().map(|t| t.facilities.clone()).collect();
    placements.extend(install(&parts, &alloc, &prep.cckp, inst.soft));
    let _ = Branch::Roundable;
    finish(inst, g, placements, params.hop_budget(), cuts, trace)
}

fn lp_failure(e: LpError) -> Failure {
    Failure::Internal(format!("LP engine: {e}"))
}

fn supply_failure(e: SupplyError) -> Failure {
    match e {
        SupplyError::Guard(n) => Failure::Guard(format!("knapsack table of {n} cells")),
        SupplyError::RoundLimit(n) => Failure::Guard(format!("separation round limit {n}")),
        other => Failure::Internal(other.to_string()),
    }
}

/// Same machines with every demand divided by `factor`.
pub fn scale_demands(inst: &CckpInstance, factor: &Rational) -> CckpInstance {
    let machines = inst.machines.iter().map(|m| Machine::new(m.demand / factor, m.cardinality)).collect();
    CckpInstance::new(machines, inst.job_capacities.clone())
}

/// Runs the chosen backend on a CCKP instance; an infeasibility answer is
/// certified for the full supply it was given.
pub fn allocate(
    cckp: &CckpInstance,
    supply: &SupplyVector,
    backend: Backend,
    cfg: &PipelineConfig,
    trace: &mut Trace,
) -> Result<Allocation, Failure> {
    if cckp.num_machines() == 0 {
        return Ok(Allocation::empty(0));
    }
    let mut alloc = match backend {
        Backend::Greedy => {
            if !cckp.is_qcmin() {
                return Err(Failure::Internal("greedy backend needs unbounded cardinalities".into()));
            }
            match greedy_qcmin(cckp, supply) {
                GreedyOutcome::Allocation(a) => a,
                GreedyOutcome::Certificate(_) => return Err(Failure::BackendInfeasible),
            }
        }
        Backend::Conf => {
            let s: Vec<Rational> = supply.0.iter().map(|&c| Rational::from_integer(c as i128)).collect();
            match p_conf_separation(cckp, &s, &cfg.delta, cfg.separation_rounds).map_err(supply_failure)? {
                ConfOutcome::Separated { .. } => return Err(Failure::BackendInfeasible),
                ConfOutcome::Accept { z, .. } => {
                    let scaled = scale_demands(cckp, &(int(1) + cfg.delta));
                    conf_lp_round(&scaled, supply, &z).map_err(|e| Failure::Internal(e.to_string()))?.allocation
                }
            }
        }
        Backend::Qptas => match qptas_cckp(cckp, supply, &cfg.qptas_epsilon) {
            Ok(QptasOutcome::Allocation(a)) => a,
            Ok(QptasOutcome::Infeasible) => return Err(Failure::BackendInfeasible),
            Err(QptasError::Guard(n)) => return Err(Failure::Guard(format!("QPTAS enumeration {n}"))),
            Err(e) => return Err(Failure::Internal(e.to_string())),
        },
        Backend::Brute => match brute_force_cckp(cckp, supply) {
            Ok((ratio, a)) if ratio >= Rational::one() => a,
            Ok(_) => return Err(Failure::BackendInfeasible),
            Err(e) => return Err(Failure::Guard(e.to_string())),
        },
    };
    alloc.distribute_leftovers(cckp, supply);
    trace.push(TraceEvent::Allocation { machines: cckp.num_machines(), min_ratio: format_rational(&alloc.min_ratio(cckp)) });
    Ok(alloc)
}

/// Puts machine ℓ's jobs on the facilities of part ℓ, largest first:
/// distinct lowest-id locations with hard capacities, round-robin with soft.
pub fn install(parts: &[Vec<usize>], alloc: &Allocation, cckp: &CckpInstance, soft: bool) -> Vec<Placement> {
    let mut out = Vec::new();
    for (l, jobs) in alloc.jobs.iter().enumerate() {
        let mut locs = parts[l].clone();
        locs.sort_unstable();
        let mut jobs = jobs.clone();
        jobs.sort_by(|&a, &b| cckp.capacity(b).cmp(&cckp.capacity(a)).then(a.cmp(&b)));
        for (n, &q) in jobs.iter().enumerate() {
            let location = if soft { locs[n % locs.len()] } else { locs[n] };
            out.push(Placement { location, class: q });
        }
    }
    out
}

/// Matches every client within the hop budget, then shrinks the capacity
/// factor and the hop radius to the smallest values that still match.
fn finish(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    placements: Vec<Placement>,
    budget: usize,
    cuts: usize,
    trace: &mut Trace,
) -> Result<RadiusSolution, Failure> {
    let (assignment, b, hops) = assign_clients_matching(inst, g, &placements, budget)?.ok_or(Failure::MatchingFailed)?;
    trace.push(TraceEvent::Matching { b: format_rational(&b), hops, budget });
    let solution = McKcSolution { placements, assignment, radius_guess: g.radius };
    let quality = evaluate_solution(inst, &solution, &g.radius).map_err(|e| Failure::Internal(e.to_string()))?;
    if !quality.feasible_counts {
        return Err(Failure::Internal("placements exceed the capacity profile".into()));
    }
    trace.push(TraceEvent::Quality {
        distance: quality.max_assignment_distance.to_string(),
        a: quality.distance_factor.to_string(),
        b: format_rational(&quality.capacity_factor),
        feasible_counts: quality.feasible_counts,
    });
    Ok(RadiusSolution { solution, quality, matching_b: b, hops, hop_budget: budget, cuts })
}

/// b-matching of clients (demand d_j, scaled to integers) to placements
/// (bound ⌈b·c_p⌉ in the same units) over pairs within `budget` hops in G.
/// Returns the assignment at the smallest workable b and, for that b, the
/// smallest hop radius; `None` when nothing matches even with unbounded b.
pub fn assign_clients_matching(
    inst: &MckcInstance,
    g: &ThresholdGraph,
    placements: &[Placement],
    budget: usize,
) -> Result<Option<(Vec<usize>, Rational, usize)>, Failure> {
    let nc = inst.num_clients();
    if nc == 0 {
        return Ok(Some((Vec::new(), Rational::zero(), 0)));
    }
    if placements.is_empty() {
        return Ok(None);
    }
    let scale = common_denominator(inst.weights.iter());
    let demand: Vec<i64> = inst.weights.iter().map(|w| (w * Rational::from_integer(scale)).to_integer() as i64).collect();
    let total: i64 = demand.iter().sum();
    let mut hop_cache: BTreeMap<usize, Vec<Option<usize>>> = BTreeMap::new();
    for pl in placements {
        hop_cache.entry(pl.location).or_insert_with(|| g.hop_distances(pl.location));
    }
    let hops = |j: usize, k: usize| hop_cache[&placements[k].location][g.client_vertex(j)];
    let unit = Rational::new(1, scale);
    let bound_at = |b: &Rational| -> Vec<i64> {
        placements.iter().map(|pl| ceil(&(b * inst.capacity(pl.class) / unit)) as i64).collect()
    };
    let try_match = |b: &Rational, h: usize| -> Option<Vec<usize>> {
        let bound = bound_at(b);
        assign_clients(&demand, &bound, |j, k| hops(j, k).is_some_and(|d| d <= h)).ok().flatten()
    };
    let mut caps: Vec<Rational> = placements.iter().map(|pl| inst.capacity(pl.class)).collect();
    caps.sort();
    caps.dedup();
    let mut candidates: Vec<Rational> = Vec::new();
    if (total as usize) * caps.len() > 200_000 {
        return Err(Failure::Guard(format!("{} capacity-factor candidates", total as usize * caps.len())));
    }
    for c in &caps {
        for n in 1..=total {
            candidates.push(Rational::from_integer(n as i128) * unit / c);
        }
    }
    candidates.sort();
    candidates.dedup();
    let top = *candidates.last().expect("positive total demand");
    if try_match(&top, budget).is_none() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if try_match(&candidates[mid], budget).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let b = candidates[lo];
    let (mut hlo, mut hhi) = (0, budget);
    while hlo < hhi {
        let mid = (hlo + hhi) / 2;
        if try_match(&b, mid).is_some() {
            hhi = mid;
        } else {
            hlo = mid + 1;
        }
    }
    let assignment = try_match(&b, hlo).expect("monotone in the hop radius");
    let used = (0..nc).filter_map(|j| hops(j, assignment[j])).max().unwrap_or(0);
    Ok(Some((assignment, b, used)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub s_tilde: Vec<u64>,
    pub t: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("vector lengths disagree")]
    Shape,
    #[error("opened classes exceed the floor of the LP mass from type {0} upwards")]
    Precondition(usize),
    #[error("transferred count of type {0} exceeds its supply")]
    Supply(usize),
}

fn ascending(caps: &[Rational]) -> Vec<usize> {
    let mut o: Vec<usize> = (0..caps.len()).collect();
    o.sort_by(|&a, &b| caps[a].cmp(&caps[b]).then(a.cmp(&b)));
    o
}

/// s̃_p = ⌊Σ_{q≥p} y^S_q⌋ − ⌊Σ_{q>p} y^S_q⌋ over capacity order, t = k − s̃.
pub fn transfer_capacities<T: Scalar>(caps: &[Rational], s: &[u64], y_s: &[T], k: &[u64]) -> Result<Transfer, TransferError> {
    let n = caps.len();
    if s.len() != n || y_s.len() != n || k.len() != n {
        return Err(TransferError::Shape);
    }
    let order = ascending(caps);
    let mut s_tilde = vec![0u64; n];
    let mut suffix_y = T::zero();
    let mut floor_above = 0i128;
    let mut suffix_s = 0u64;
    for &p in order.iter().rev() {
        suffix_y = suffix_y + y_s[p].clone();
        suffix_s += s[p];
        let f = suffix_y.floor_int();
        if suffix_s as i128 > f {
            return Err(TransferError::Precondition(p));
        }
        s_tilde[p] = (f - floor_above).max(0) as u64;
        floor_above = f;
        if s_tilde[p] > k[p] {
            return Err(TransferError::Supply(p));
        }
    }
    let t = (0..n).map(|p| k[p] - s_tilde[p]).collect();
    Ok(Transfer { s_tilde, t })
}

impl Transfer {
    /// Real capacity type for each opened class slot: slots and the s̃
    /// copies are paired in descending capacity order.
    pub fn upgrade(&self, caps: &[Rational], classes: &[usize]) -> Vec<usize> {
        let order = ascending(caps);
        let mut copies: Vec<usize> = Vec::new();
        for &p in order.iter().rev() {
            copies.extend(std::iter::repeat_n(p, self.s_tilde[p] as usize));
        }
        let mut slots: Vec<usize> = (0..classes.len()).collect();
        slots.sort_by(|&a, &b| caps[classes[b]].cmp(&caps[classes[a]]).then(a.cmp(&b)));
        let mut out = vec![0; classes.len()];
        for (rank, &slot) in slots.iter().enumerate() {
            out[slot] = copies[rank];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaps::gen_mckc_gap;
    use crate::model::{CapacityClass, Distance};

    fn star(n: usize, cap: i128) -> MckcInstance {
        let fc = vec![vec![Distance::Finite(int(1)); n]];
        MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(cap))], false)
    }

    #[test]
    fn transfer_examples() {
        let caps = [int(1), int(2)];
        let t = transfer_capacities(&caps, &[0, 0], &[0.6, 0.7], &[5, 5]).unwrap();
        assert_eq!(t.s_tilde, vec![1, 0]);
        let t = transfer_capacities(&caps, &[1, 2], &[int(1), int(2)], &[5, 5]).unwrap();
        assert_eq!(t.s_tilde, vec![1, 2]);
        let t = transfer_capacities(&caps, &[0, 0], &[rat(1, 2), rat(9, 10)], &[1, 1]).unwrap();
        assert_eq!((t.s_tilde.clone(), t.t.clone()), (vec![1, 0], vec![0, 1]));
        assert_eq!(transfer_capacities(&caps, &[0, 1], &[0.6, 0.7], &[5, 5]), Err(TransferError::Precondition(1)));
        let t = transfer_capacities(&caps, &[1, 0], &[rat(1, 2), rat(3, 2)], &[2, 2]).unwrap();
        assert_eq!(t.upgrade(&caps, &[0]), vec![1]);
    }

    #[test]
    fn star_matching() {
        let inst = star(3, 3);
        let g = ThresholdGraph::build(&inst, &int(1));
        let pl = vec![Placement { location: 0, class: 0 }];
        let (a, b, h) = assign_clients_matching(&inst, &g, &pl, 1).unwrap().unwrap();
        assert_eq!((a, b, h), (vec![0, 0, 0], int(1), 1));
        let inst = star(3, 2);
        let (_, b, _) = assign_clients_matching(&inst, &g, &pl, 1).unwrap().unwrap();
        assert_eq!(b, rat(3, 2));
    }

    #[test]
    fn star_in_every_mode() {
        let inst = star(3, 3);
        for mode in [Mode::Weak, Mode::StrongHard] {
            let r = guess_opt(&inst, &PipelineConfig::new(mode, rat(1, 2)), &mut Trace::default()).unwrap();
            assert_eq!(r.radius, int(1));
            assert_eq!(r.result.quality.capacity_factor, int(1));
        }
        let r = guess_opt(&inst, &PipelineConfig::new(Mode::StrongSoft, rat(1, 2)), &mut Trace::default()).unwrap();
        assert_eq!(r.result.quality.capacity_factor, int(1));
    }

    #[test]
    fn undersupplied_star_fails_everywhere() {
        let inst = star(3, 2);
        let cfg = PipelineConfig::new(Mode::Weak, rat(1, 2)).with_backend(Backend::Brute);
        assert!(matches!(guess_opt(&inst, &cfg, &mut Trace::default()), Err(PipelineError::NoRadius(f)) if f.is_certified()));
    }

    #[test]
    fn soft_gap_instance_solves_at_radius_one() {
        let inst = gen_mckc_gap(3).unwrap().instance;
        let mut trace = Trace::default();
        let r = guess_opt(&inst, &PipelineConfig::new(Mode::StrongSoft, rat(1, 2)), &mut trace).unwrap();
        assert_eq!(r.radius, int(1));
        assert!(r.result.quality.capacity_factor <= rat(5, 2));
        assert!(r.result.hops <= r.result.hop_budget);
        assert!(trace.to_json_lines().lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    }

    #[test]
    fn hard_gap_instance_needs_a_capacity_blowup() {
        let inst = gen_mckc_gap(3).unwrap().instance;
        for mode in [Mode::Weak, Mode::StrongHard] {
            let r = guess_opt(&inst, &PipelineConfig::new(mode, rat(1, 2)), &mut Trace::default()).unwrap();
            assert_eq!(r.radius, int(1));
            assert!(r.result.quality.feasible_counts);
            assert!(r.result.quality.capacity_factor >= rat(3, 2));
        }
    }
}
