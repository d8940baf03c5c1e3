//! JSON documents shared by every command: instances, CCKP instances,
//! supplies, solutions, allocations, certificates, witnesses and
//! decompositions. Rationals are written as JSON integers when integral and
//! as `"p/q"` strings otherwise; decimals on input are read exactly.

use std::collections::{BTreeMap, HashMap};

use serde::de::{self, DeserializeOwned, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cckp::{Allocation, CckpInstance, Machine, SupplyVector};
use crate::decomp::Charge;
use crate::fractional::FractionalSolution;
use crate::maxmin::config::ConfigurationLpSolution;
use crate::maxmin::greedy::FarkasCertificate;
use crate::maxmin::restricted::RestrictedInstance;
use crate::model::{CapacityClass, Distance, McKcSolution, MckcInstance, Placement, QualityReport};
use crate::num::{format_rational, parse_rational, Rational};
use crate::strong::{ClientClass, StrongDecomposition};
use crate::supply::SeparatingHyperplane;
use crate::weak::{WeakDecomposition, WeakPart};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("JSON error at '{path}': {message}")]
    Json { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Parses a document, reporting the JSON path of the first offending value.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// Exact rational on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*self.0.numer()) {
            Ok(n) if self.0.is_integer() => s.serialize_i64(n),
            _ => s.serialize_str(&format_rational(&self.0)),
        }
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(de::Error::custom(format!("expected a number or \"p/q\" string, got {other}"))),
        };
        parse_rational(&text).map(Q).map_err(de::Error::custom)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().copied().map(Q).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0).collect()
}

/// A distance: a rational, or `"inf"` / `null` for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dist(pub Distance);

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Distance::Finite(r) => Q(r).serialize(s),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Null => Ok(Dist(Distance::Infinite)),
            serde_json::Value::String(s) if s == "inf" || s == "infinity" => Ok(Dist(Distance::Infinite)),
            v => Q::deserialize(v).map(|q| Dist(Distance::Finite(q.0))).map_err(de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub d: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistanceDoc {
    /// Full (F+C)×(F+C) metric, or F×C facility-client distances.
    Matrix(Vec<Vec<Dist>>),
    Edges {
        edges: Vec<EdgeDoc>,
        #[serde(default)]
        infinity_default: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityDoc {
    pub count: u64,
    pub cap: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub facilities: Vec<String>,
    pub clients: Vec<String>,
    pub distance: DistanceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Q>>,
    pub capacities: Vec<CapacityDoc>,
    #[serde(default)]
    pub soft: bool,
}

fn close_metric(d: &mut [Vec<Distance>]) {
    let n = d.len();
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
}

impl InstanceDoc {
    pub fn from_instance(inst: &MckcInstance) -> Self {
        let unit = inst.weights.iter().all(|w| *w == Rational::from_integer(1));
        InstanceDoc {
            facilities: inst.facilities.clone(),
            clients: inst.clients.clone(),
            distance: DistanceDoc::Matrix(inst.distance.iter().map(|r| r.iter().map(|&d| Dist(d)).collect()).collect()),
            weights: (!unit).then(|| qs(&inst.weights)),
            capacities: inst.profile.iter().map(|c| CapacityDoc { count: c.count, cap: Q(c.capacity) }).collect(),
            soft: inst.soft,
        }
    }

    /// Builds the instance. Edge lists and F×C matrices are closed under
    /// shortest paths; a full matrix is taken as given.
    pub fn to_instance(&self) -> Result<MckcInstance, IoError> {
        let (nf, nc) = (self.facilities.len(), self.clients.len());
        let n = nf + nc;
        let distance = match &self.distance {
            DistanceDoc::Matrix(rows) if rows.len() == n && rows.iter().all(|r| r.len() == n) => {
                rows.iter().map(|r| r.iter().map(|d| d.0).collect()).collect()
            }
            DistanceDoc::Matrix(rows) if rows.len() == nf && rows.iter().all(|r| r.len() == nc) => {
                let mut d = vec![vec![Distance::Infinite; n]; n];
                for (a, row) in d.iter_mut().enumerate() {
                    row[a] = Distance::zero();
                }
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        d[i][nf + j] = v.0;
                        d[nf + j][i] = v.0;
                    }
                }
                close_metric(&mut d);
                d
            }
            DistanceDoc::Matrix(_) => {
                return Err(IoError::Invalid(format!("distance matrix must be {n}x{n} or {nf}x{nc}")));
            }
            DistanceDoc::Edges { edges, infinity_default } => {
                let mut index: HashMap<&str, usize> = HashMap::new();
                for (k, id) in self.facilities.iter().chain(&self.clients).enumerate() {
                    if index.insert(id.as_str(), k).is_some() {
                        return Err(IoError::Invalid(format!("duplicate id '{id}'")));
                    }
                }
                let mut given = vec![vec![false; n]; n];
                let mut d = vec![vec![Distance::Infinite; n]; n];
                for (a, row) in d.iter_mut().enumerate() {
                    row[a] = Distance::zero();
                    given[a][a] = true;
                }
                for e in edges {
                    let look = |id: &str| index.get(id).copied().ok_or_else(|| IoError::Invalid(format!("unknown id '{id}'")));
                    let (a, b) = (look(&e.from)?, look(&e.to)?);
                    d[a][b] = Distance::Finite(e.d.0);
                    d[b][a] = Distance::Finite(e.d.0);
                    given[a][b] = true;
                    given[b][a] = true;
                }
                if !infinity_default {
                    if let Some((a, b)) = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| !given[a][b]) {
                        return Err(IoError::Invalid(format!(
                            "no distance between points {a} and {b}; set infinity_default to treat missing pairs as infinite"
                        )));
                    }
                }
                close_metric(&mut d);
                d
            }
        };
        let weights = match &self.weights {
            Some(w) if w.len() != nc => return Err(IoError::Invalid("one weight per client required".into())),
            Some(w) => unq(w),
            None => vec![Rational::from_integer(1); nc],
        };
        Ok(MckcInstance {
            facilities: self.facilities.clone(),
            clients: self.clients.clone(),
            distance,
            weights,
            profile: self.capacities.iter().map(|c| CapacityClass::new(c.count, c.cap.0)).collect(),
            soft: self.soft,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineDoc {
    pub demand: Q,
    /// Absent or null for an unbounded cardinality.
    #[serde(default)]
    pub cardinality: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CckpDoc {
    pub machines: Vec<MachineDoc>,
    pub jobs: Vec<Q>,
}

impl CckpDoc {
    pub fn from_instance(inst: &CckpInstance) -> Self {
        CckpDoc {
            machines: inst.machines.iter().map(|m| MachineDoc { demand: Q(m.demand), cardinality: m.cardinality }).collect(),
            jobs: qs(&inst.job_capacities),
        }
    }

    pub fn to_instance(&self) -> Result<CckpInstance, IoError> {
        let inst = CckpInstance::new(
            self.machines.iter().map(|m| Machine::new(m.demand.0, m.cardinality)).collect(),
            unq(&self.jobs),
        );
        inst.validate().map_err(|e| IoError::Invalid(e.to_string()))?;
        Ok(inst)
    }
}

/// Supply sidecar; entries may be fractional for polyhedron queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplyDoc {
    pub supply: Vec<Q>,
}

impl SupplyDoc {
    pub fn from_supply(s: &SupplyVector) -> Self {
        SupplyDoc { supply: s.0.iter().map(|&c| Q(Rational::from_integer(c as i128))).collect() }
    }

    pub fn integral(&self) -> Result<SupplyVector, IoError> {
        self.supply
            .iter()
            .map(|q| {
                if q.0.is_integer() && *q.0.numer() >= 0 {
                    Ok(*q.0.numer() as u64)
                } else {
                    Err(IoError::Invalid(format!("supply entry {} is not a nonnegative integer", format_rational(&q.0))))
                }
            })
            .collect::<Result<_, _>>()
            .map(SupplyVector)
    }

    pub fn point(&self) -> Vec<Rational> {
        unq(&self.supply)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityDoc {
    pub max_distance: Dist,
    pub a: Dist,
    pub b: Q,
    pub feasible_counts: bool,
    pub loads: Vec<Q>,
}

impl QualityDoc {
    pub fn from_report(r: &QualityReport) -> Self {
        QualityDoc {
            max_distance: Dist(r.max_assignment_distance),
            a: Dist(r.distance_factor),
            b: Q(r.capacity_factor),
            feasible_counts: r.feasible_counts,
            loads: qs(&r.per_placement_load),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementDoc {
    pub location: usize,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub radius: Q,
    pub placements: Vec<PlacementDoc>,
    /// Placement index per client.
    pub assignment: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<QualityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStatsDoc>,
}

/// How the pipeline produced a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStatsDoc {
    pub mode: String,
    pub matching_b: Q,
    pub hops: usize,
    pub hop_budget: usize,
    pub cuts: usize,
}

impl SolutionDoc {
    pub fn from_solution(sol: &McKcSolution, quality: Option<&QualityReport>) -> Self {
        SolutionDoc {
            radius: Q(sol.radius_guess),
            placements: sol.placements.iter().map(|p| PlacementDoc { location: p.location, class: p.class }).collect(),
            assignment: sol.assignment.clone(),
            quality: quality.map(QualityDoc::from_report),
            stats: None,
        }
    }

    pub fn to_solution(&self) -> McKcSolution {
        McKcSolution {
            placements: self.placements.iter().map(|p| Placement { location: p.location, class: p.class }).collect(),
            assignment: self.assignment.clone(),
            radius_guess: self.radius.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationDoc {
    pub jobs: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_ratio: Option<Q>,
}

impl AllocationDoc {
    pub fn from_allocation(a: &Allocation, inst: Option<&CckpInstance>) -> Self {
        AllocationDoc { jobs: a.jobs.clone(), min_ratio: inst.map(|i| Q(a.min_ratio(i))) }
    }

    pub fn to_allocation(&self) -> Allocation {
        Allocation { jobs: self.jobs.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarkasDoc {
    pub alpha: Vec<Q>,
    pub beta: Vec<Q>,
}

impl FarkasDoc {
    pub fn from_certificate(c: &FarkasCertificate) -> Self {
        FarkasDoc { alpha: qs(&c.alpha), beta: qs(&c.beta) }
    }

    pub fn to_certificate(&self) -> FarkasCertificate {
        FarkasCertificate { alpha: unq(&self.alpha), beta: unq(&self.beta) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneDoc {
    pub alpha: Vec<Q>,
    pub rhs: Q,
}

impl HyperplaneDoc {
    pub fn from_hyperplane(h: &SeparatingHyperplane) -> Self {
        HyperplaneDoc { alpha: qs(&h.alpha), rhs: Q(h.rhs) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalDoc {
    pub radius: Q,
    pub y: Vec<Vec<Q>>,
    pub x: Vec<Vec<Vec<Q>>>,
}

impl FractionalDoc {
    pub fn from_solution(f: &FractionalSolution<Rational>) -> Self {
        FractionalDoc {
            radius: Q(f.radius),
            y: f.y.iter().map(|r| qs(r)).collect(),
            x: f.x.iter().map(|r| r.iter().map(|c| qs(c)).collect()).collect(),
        }
    }

    pub fn to_solution(&self) -> FractionalSolution<Rational> {
        FractionalSolution {
            radius: self.radius.0,
            y: self.y.iter().map(|r| unq(r)).collect(),
            x: self.x.iter().map(|r| r.iter().map(|c| unq(c)).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEntryDoc {
    pub config: Vec<u64>,
    pub weight: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationDoc {
    pub z: Vec<Vec<ConfigEntryDoc>>,
}

impl ConfigurationDoc {
    pub fn from_solution(z: &ConfigurationLpSolution<Rational>) -> Self {
        ConfigurationDoc {
            z: z.z.iter()
                .map(|row| row.iter().map(|(s, w)| ConfigEntryDoc { config: s.clone(), weight: Q(*w) }).collect())
                .collect(),
        }
    }

    pub fn to_solution(&self) -> ConfigurationLpSolution<Rational> {
        ConfigurationLpSolution {
            z: self.z.iter().map(|row| row.iter().map(|e| (e.config.clone(), e.weight.0)).collect::<BTreeMap<_, _>>()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedDoc {
    pub machines: Vec<MachineDoc>,
    pub jobs: Vec<Q>,
    pub admissible: Vec<Vec<bool>>,
}

impl RestrictedDoc {
    pub fn from_instance(r: &RestrictedInstance) -> Self {
        let base = CckpDoc::from_instance(&r.base);
        RestrictedDoc { machines: base.machines, jobs: base.jobs, admissible: r.admissible.clone() }
    }

    pub fn to_instance(&self) -> Result<RestrictedInstance, IoError> {
        let base = CckpDoc { machines: self.machines.clone(), jobs: self.jobs.clone() }.to_instance()?;
        if self.admissible.len() != base.num_machines() || self.admissible.iter().any(|r| r.len() != base.num_types()) {
            return Err(IoError::Invalid("admissibility table has the wrong shape".into()));
        }
        Ok(RestrictedInstance { base, admissible: self.admissible.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeRowDoc {
    pub client: usize,
    pub targets: Vec<(usize, Q)>,
}

fn charge_doc(c: &Charge) -> Vec<ChargeRowDoc> {
    c.rows
        .iter()
        .map(|(&j, row)| ChargeRowDoc { client: j, targets: row.iter().map(|&(t, w)| (t, Q(w))).collect() })
        .collect()
}

fn charge_from_doc(rows: &[ChargeRowDoc]) -> Charge {
    Charge { rows: rows.iter().map(|r| (r.client, r.targets.iter().map(|&(t, w)| (t, w.0)).collect())).collect() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakPartDoc {
    pub seed: usize,
    pub t: usize,
    pub facilities: Vec<usize>,
    pub clients: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpeningDoc {
    pub location: usize,
    pub class: usize,
    pub class_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundableDoc {
    pub root: usize,
    pub facilities: Vec<usize>,
    pub openings: Vec<OpeningDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodDoc {
    pub facilities: Vec<usize>,
    pub clients: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompositionDoc {
    Weak {
        epsilon: Q,
        parts: Vec<WeakPartDoc>,
        deleted: Vec<usize>,
        charge: Vec<ChargeRowDoc>,
    },
    Strong {
        delta: Q,
        epsilon: Q,
        t_star: usize,
        hop_budget: usize,
        roundable: Vec<RoundableDoc>,
        neighborhoods: Vec<NeighborhoodDoc>,
        covered: Vec<usize>,
        deleted: Vec<usize>,
        charge: Vec<ChargeRowDoc>,
    },
}

impl DecompositionDoc {
    pub fn from_weak(w: &WeakDecomposition) -> Self {
        DecompositionDoc::Weak {
            epsilon: Q(w.epsilon),
            parts: w
                .parts
                .iter()
                .map(|p| WeakPartDoc { seed: p.seed, t: p.t, facilities: p.facilities.clone(), clients: p.clients.clone() })
                .collect(),
            deleted: w.deleted.clone(),
            charge: charge_doc(&w.charge),
        }
    }

    pub fn to_weak(&self) -> Option<WeakDecomposition> {
        match self {
            DecompositionDoc::Weak { epsilon, parts, deleted, charge } => Some(WeakDecomposition {
                epsilon: epsilon.0,
                parts: parts
                    .iter()
                    .map(|p| WeakPart { facilities: p.facilities.clone(), clients: p.clients.clone(), seed: p.seed, t: p.t })
                    .collect(),
                deleted: deleted.clone(),
                charge: charge_from_doc(charge),
            }),
            DecompositionDoc::Strong { .. } => None,
        }
    }

    pub fn from_strong(d: &StrongDecomposition) -> Self {
        DecompositionDoc::Strong {
            delta: Q(d.params.delta),
            epsilon: Q(d.params.epsilon),
            t_star: d.params.t_star,
            hop_budget: d.params.hop_budget(),
            roundable: d
                .roundable
                .iter()
                .zip(&d.roundings)
                .map(|(s, r)| RoundableDoc {
                    root: s.root,
                    facilities: s.facilities.clone(),
                    openings: r
                        .iter()
                        .map(|o| OpeningDoc { location: o.location, class: o.class, class_value: o.class_value })
                        .collect(),
                })
                .collect(),
            neighborhoods: d
                .neighborhoods
                .iter()
                .map(|t| NeighborhoodDoc { facilities: t.facilities.clone(), clients: t.clients.clone() })
                .collect(),
            covered: d.clients_of(ClientClass::Covered),
            deleted: d.deleted(),
            charge: charge_doc(&d.charge),
        }
    }
}
