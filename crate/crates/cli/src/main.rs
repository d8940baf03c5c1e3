//! `mckc`: solve, decompose, generate, verify and brute-force from JSON files.
//!
//! Exit codes: 0 success, 1 input error, 2 certified infeasible or rejected
//! by a verifier, 3 guard, limit or uncertified failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mckc_core::cckp::{CckpInstance, SupplyVector};
use mckc_core::fractional::{check_lp_point, MckcLp};
use mckc_core::gaps;
use mckc_core::graph::ThresholdGraph;
use mckc_core::io::{
    from_json, to_json, AllocationDoc, CckpDoc, ConfigurationDoc, DecompositionDoc, FarkasDoc, FractionalDoc,
    HyperplaneDoc, InstanceDoc, RestrictedDoc, RunStatsDoc, SolutionDoc, SupplyDoc, Q,
};
use mckc_core::lp::{solve, LpOutcome};
use mckc_core::maxmin::conf_round::conf_lp_round;
use mckc_core::maxmin::greedy::{greedy_qcmin, verify_farkas, GreedyOutcome};
use mckc_core::maxmin::qptas::{qptas_cckp, QptasError, QptasOutcome};
use mckc_core::model::{evaluate_solution, validate_instance, MckcInstance};
use mckc_core::num::{format_rational, parse_rational, Rational};
use mckc_core::oracle::{brute_force_cckp, brute_force_mckc, OracleError};
use mckc_core::pipeline::{guess_opt, solve_at_radius, Backend, PipelineConfig, PipelineError, Trace};
use mckc_core::strong::{self, verify_roundable, Opening, StrongParams};
use mckc_core::supply::{p_ass_membership, p_conf_separation, ConfOutcome, PassOutcome, DEFAULT_SEPARATION_ROUNDS};
use mckc_core::weak;

const OK: u8 = 0;
const INPUT: u8 = 1;
const INFEASIBLE: u8 = 2;
const LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "mckc", version, about = "Heterogeneous capacitated k-center solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an MCKC or CCKP instance.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Decompose an MCKC instance at a fixed radius.
    Decompose(DecomposeArgs),
    /// Emit a gap instance bundle: instance, supply and witness.
    Gen(GenArgs),
    /// Check a solution, certificate, decomposition or supply point.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exhaustive search on small instances.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum SolveCmd {
    Mckc(SolveMckcArgs),
    Cckp(SolveCckpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weak,
    StrongSoft,
    StrongHard,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Greedy,
    Conf,
    Qptas,
    Brute,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Greedy => Backend::Greedy,
            BackendArg::Conf => Backend::Conf,
            BackendArg::Qptas => Backend::Qptas,
            BackendArg::Brute => Backend::Brute,
        }
    }
}

#[derive(Args)]
struct Io {
    /// Input file; `-` or absent reads stdin.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; absent writes stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveMckcArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value = "strong-hard")]
    mode: ModeArg,
    #[arg(long, default_value = "1/2", value_parser = rational)]
    delta: Rational,
    /// Allocation backend; defaults to greedy for strong-soft, conf otherwise.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Solve at this radius only instead of searching.
    #[arg(long, value_parser = rational)]
    radius: Option<Rational>,
    #[arg(long, default_value_t = 200)]
    max_cuts: usize,
    /// Write JSON-lines trace events here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SolveCckpArgs {
    #[command(flatten)]
    io: Io,
    /// Supply sidecar; defaults to the bundle's supply block.
    #[arg(long)]
    supply: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "conf")]
    backend: BackendArg,
    #[arg(long, default_value = "1/5", value_parser = rational)]
    epsilon: Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompKind {
    Weak,
    Strong,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value = "strong")]
    mode: DecompKind,
    /// ε for the weak decomposition, δ for the strong one.
    #[arg(long, alias = "epsilon", default_value = "1/2", value_parser = rational)]
    delta: Rational,
    #[arg(long, value_parser = rational)]
    radius: Rational,
    /// Also write the LP point the strong decomposition used.
    #[arg(long)]
    fractional: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    MckcGap,
    ConfGap,
    BsGap,
    Petersen,
    EmbedCckp,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// CCKP bundle to embed (embed-cckp only).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    supply: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Evaluate a solution against its instance.
    Solution {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        solution: PathBuf,
        /// Reject when the distance factor exceeds this.
        #[arg(long, value_parser = rational)]
        a: Option<Rational>,
        /// Reject when the capacity factor exceeds this.
        #[arg(long, value_parser = rational)]
        b: Option<Rational>,
    },
    /// Check a Farkas certificate for a Q||C_min instance and supply.
    Farkas {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        supply: Option<PathBuf>,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Check each roundable set of a strong decomposition against an LP point.
    Roundable {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        fractional: PathBuf,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long, value_parser = rational)]
        b: Option<Rational>,
    },
    /// Check that every part of a decomposition is a complete neighborhood.
    Neighborhood {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long, value_parser = rational)]
        radius: Rational,
    },
    /// Membership of a (fractional) supply point in P_ass or P_conf.
    SupplyPoint {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        supply: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "conf")]
        polyhedron: Polyhedron,
        #[arg(long, default_value = "1/5", value_parser = rational)]
        epsilon: Rational,
    },
    /// Check a bundle's witness: an LP point for MCKC, a configuration LP
    /// point for CCKP.
    Witness {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Polyhedron {
    Ass,
    Conf,
}

#[derive(Subcommand)]
enum OracleCmd {
    Mckc {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = rational)]
        radius: Rational,
        #[arg(long, default_value = "1", value_parser = rational)]
        b: Rational,
    },
    Cckp {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        supply: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Input errors carry exit code 1.
struct Fail(u8, String);

impl Fail {
    fn input(msg: impl Into<String>) -> Self {
        Fail(INPUT, msg.into())
    }
}

type Run = Result<u8, Fail>;

fn read_text(path: Option<&PathBuf>) -> Result<String, Fail> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Fail::input(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Fail::input(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_text(path: Option<&PathBuf>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).map_err(|e| Fail::input(format!("cannot write {}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Fail::input(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Fail> {
    from_json(text).map_err(|e| Fail::input(format!("{what}: {e}")))
}

/// A document on disk: either the object itself or a bundle with an
/// `instance` block and optional `supply` / `witness` sidecars.
#[derive(Serialize, Deserialize)]
struct Bundle<T> {
    instance: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    supply: Option<SupplyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
}

fn load<T: DeserializeOwned>(path: Option<&PathBuf>, what: &str) -> Result<Bundle<T>, Fail> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Fail::input(format!("{what}: {e}")))?;
    if value.get("instance").is_some() {
        parse::<Bundle<T>>(&text, what)
    } else {
        Ok(Bundle { instance: parse::<T>(&text, what)?, supply: None, witness: None })
    }
}

fn load_mckc(path: Option<&PathBuf>) -> Result<(MckcInstance, Option<Value>), Fail> {
    let b = load::<InstanceDoc>(path, "instance")?;
    let inst = b.instance.to_instance().map_err(|e| Fail::input(format!("instance: {e}")))?;
    if let Some(v) = validate_instance(&inst).first() {
        return Err(Fail::input(format!("instance: {} violation: {}", v.kind, v.detail)));
    }
    Ok((inst, b.witness))
}

fn load_cckp(path: Option<&PathBuf>, supply: Option<&PathBuf>) -> Result<(CckpInstance, Option<SupplyDoc>, Option<Value>), Fail> {
    let b = load::<CckpDoc>(path, "cckp instance")?;
    let inst = b.instance.to_instance().map_err(|e| Fail::input(format!("cckp instance: {e}")))?;
    let s = match supply {
        Some(p) => Some(parse::<SupplyDoc>(&read_text(Some(p))?, "supply")?),
        None => b.supply,
    };
    if let Some(s) = &s {
        if s.supply.len() != inst.num_types() {
            return Err(Fail::input(format!("supply has {} entries, instance has {} job types", s.supply.len(), inst.num_types())));
        }
    }
    Ok((inst, s, b.witness))
}

fn integral_supply(s: Option<SupplyDoc>) -> Result<SupplyVector, Fail> {
    s.ok_or_else(|| Fail::input("a supply vector is required (--supply or a bundle supply block)"))?
        .integral()
        .map_err(|e| Fail::input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(SolveCmd::Mckc(a)) => solve_mckc(a),
        Command::Solve(SolveCmd::Cckp(a)) => solve_cckp(a),
        Command::Decompose(a) => decompose(a),
        Command::Gen(a) => generate(a),
        Command::Verify(v) => verify(v),
        Command::Oracle(o) => oracle(o),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn solve_mckc(a: SolveMckcArgs) -> Run {
    let (inst, _) = load_mckc(a.io.input.as_ref())?;
    let mode = match a.mode {
        ModeArg::Weak => mckc_core::pipeline::Mode::Weak,
        ModeArg::StrongSoft => mckc_core::pipeline::Mode::StrongSoft,
        ModeArg::StrongHard => mckc_core::pipeline::Mode::StrongHard,
    };
    let mut cfg = PipelineConfig::new(mode, a.delta);
    if let Some(b) = a.backend {
        cfg.backend = b.into();
    }
    cfg.max_cut_rounds = a.max_cuts;
    cfg.validate(&inst).map_err(|e| Fail::input(e.to_string()))?;
    let mut trace = Trace::default();
    let outcome = match a.radius {
        Some(r) => solve_at_radius(&inst, &r, &cfg, &mut trace).map(|s| (r, s)).map_err(PipelineError::NoRadius),
        None => guess_opt(&inst, &cfg, &mut trace).map(|s| (s.radius, s.result)),
    };
    if let Some(p) = &a.trace {
        fs::write(p, trace.to_json_lines()).map_err(|e| Fail::input(format!("cannot write trace: {e}")))?;
    }
    match outcome {
        Ok((_, res)) => {
            let mut doc = SolutionDoc::from_solution(&res.solution, Some(&res.quality));
            doc.stats = Some(RunStatsDoc {
                mode: format!("{mode:?}"),
                matching_b: Q(res.matching_b),
                hops: res.hops,
                hop_budget: res.hop_budget,
                cuts: res.cuts,
            });
            write_text(a.io.out.as_ref(), &to_json(&doc))?;
            Ok(OK)
        }
        Err(PipelineError::NoRadius(f)) => {
            let code = if f.is_certified() { INFEASIBLE } else { LIMIT };
            write_text(a.io.out.as_ref(), &to_json(&json!({"status": f.kind(), "detail": f.to_string()})))?;
            Ok(code)
        }
        Err(e) => Err(Fail::input(e.to_string())),
    }
}

fn solve_cckp(a: SolveCckpArgs) -> Run {
    let (inst, s, _) = load_cckp(a.io.input.as_ref(), a.supply.as_ref())?;
    let supply = integral_supply(s)?;
    let out = a.io.out.as_ref();
    let feasible = |alloc: &mckc_core::cckp::Allocation| -> Run {
        write_text(out, &to_json(&json!({"status": "ALLOCATION", "allocation": AllocationDoc::from_allocation(alloc, Some(&inst))})))?;
        Ok(OK)
    };
    match a.backend {
        BackendArg::Greedy => {
            if !inst.is_qcmin() {
                return Err(Fail::input("greedy needs every cardinality unbounded"));
            }
            match greedy_qcmin(&inst, &supply) {
                GreedyOutcome::Allocation(alloc) => feasible(&alloc),
                GreedyOutcome::Certificate(c) => {
                    write_text(out, &to_json(&json!({"status": "CERTIFICATE", "certificate": FarkasDoc::from_certificate(&c)})))?;
                    Ok(INFEASIBLE)
                }
            }
        }
        BackendArg::Conf => {
            let s: Vec<Rational> = supply.0.iter().map(|&c| Rational::from_integer(c as i128)).collect();
            match p_conf_separation(&inst, &s, &a.epsilon, DEFAULT_SEPARATION_ROUNDS) {
                Ok(ConfOutcome::Accept { z, .. }) => {
                    let scale = Rational::from_integer(1) + a.epsilon;
                    let scaled = mckc_core::pipeline::scale_demands(&inst, &scale);
                    let report = conf_lp_round(&scaled, &supply, &z).map_err(|e| Fail(LIMIT, e.to_string()))?;
                    feasible(&report.allocation)
                }
                Ok(ConfOutcome::Separated { hyperplane, .. }) => {
                    write_text(out, &to_json(&json!({"status": "SEPARATED", "hyperplane": HyperplaneDoc::from_hyperplane(&hyperplane)})))?;
                    Ok(INFEASIBLE)
                }
                Err(e) => Err(Fail(LIMIT, e.to_string())),
            }
        }
        BackendArg::Qptas => match qptas_cckp(&inst, &supply, &a.epsilon) {
            Ok(QptasOutcome::Allocation(alloc)) => feasible(&alloc),
            Ok(QptasOutcome::Infeasible) => {
                write_text(out, &to_json(&json!({"status": "INFEASIBLE"})))?;
                Ok(INFEASIBLE)
            }
            Err(e @ QptasError::Guard(_)) => Err(Fail(LIMIT, e.to_string())),
            Err(e) => Err(Fail::input(e.to_string())),
        },
        BackendArg::Brute => oracle_cckp(&inst, &supply, out),
    }
}

fn oracle_cckp(inst: &CckpInstance, supply: &SupplyVector, out: Option<&PathBuf>) -> Run {
    let (ratio, alloc) = brute_force_cckp(inst, supply).map_err(|e| Fail(LIMIT, e.to_string()))?;
    let status = if ratio >= Rational::from_integer(1) { "ALLOCATION" } else { "INFEASIBLE" };
    write_text(
        out,
        &to_json(&json!({"status": status, "ratio": Q(ratio), "allocation": AllocationDoc::from_allocation(&alloc, Some(inst))})),
    )?;
    Ok(if status == "ALLOCATION" { OK } else { INFEASIBLE })
}

fn decompose(a: DecomposeArgs) -> Run {
    let (inst, _) = load_mckc(a.io.input.as_ref())?;
    let g = ThresholdGraph::build(&inst, &a.radius);
    let doc = match a.mode {
        DecompKind::Weak => match weak::decompose(&g, &a.delta) {
            Ok(w) => DecompositionDoc::from_weak(&w),
            Err(weak::WeakError::Isolated(j)) => {
                write_text(a.io.out.as_ref(), &to_json(&json!({"status": "UNREACHABLE", "client": j})))?;
                return Ok(INFEASIBLE);
            }
            Err(e) => return Err(Fail::input(e.to_string())),
        },
        DecompKind::Strong => {
            let params = StrongParams::from_delta(&a.delta).map_err(|e| Fail::input(e.to_string()))?;
            let lp = MckcLp::build(&inst, &g);
            let point = match solve(&lp.system).map_err(|e| Fail(LIMIT, e.to_string()))? {
                LpOutcome::Feasible { point, .. } => point,
                _ => {
                    write_text(a.io.out.as_ref(), &to_json(&json!({"status": "LP_INFEASIBLE"})))?;
                    return Ok(INFEASIBLE);
                }
            };
            let frac = lp.extract(&point);
            let d = strong::decompose(&inst, &g, &frac, &params).map_err(|e| Fail(LIMIT, e.to_string()))?;
            if let Some(p) = &a.fractional {
                let exact = mckc_core::fractional::FractionalSolution {
                    radius: frac.radius,
                    y: frac.y.iter().map(|r| r.iter().map(|&v| approx(v)).collect()).collect(),
                    x: d.x_hat.iter().map(|r| r.iter().map(|c| c.iter().map(|&v| approx(v)).collect()).collect()).collect(),
                };
                fs::write(p, to_json(&FractionalDoc::from_solution(&exact))).map_err(|e| Fail::input(e.to_string()))?;
            }
            DecompositionDoc::from_strong(&d)
        }
    };
    write_text(a.io.out.as_ref(), &to_json(&doc))?;
    Ok(OK)
}

fn approx(v: f64) -> Rational {
    mckc_core::num::approx_rational(v, 1 << 30)
}

fn generate(a: GenArgs) -> Run {
    let gap = |e: gaps::GapError| match e {
        gaps::GapError::Guard(_) => Fail(LIMIT, e.to_string()),
        _ => Fail::input(e.to_string()),
    };
    let bundle: Value = match a.kind {
        GenKind::MckcGap => {
            let g = gaps::gen_mckc_gap(a.k).map_err(gap)?;
            json!({"instance": InstanceDoc::from_instance(&g.instance), "witness": FractionalDoc::from_solution(&g.witness)})
        }
        GenKind::ConfGap => {
            let g = gaps::gen_conf_gap(a.k).map_err(gap)?;
            json!({
                "instance": CckpDoc::from_instance(&g.instance),
                "supply": SupplyDoc::from_supply(&g.supply),
                "witness": ConfigurationDoc::from_solution(&g.witness),
                "mixture": {
                    "first": SupplyDoc::from_supply(&g.mixture.0),
                    "second": SupplyDoc::from_supply(&g.mixture.1),
                    "p": Q(g.mixture.2),
                },
            })
        }
        GenKind::BsGap => {
            let g = gaps::gen_bansal_sviridenko(a.k).map_err(gap)?;
            json!({
                "instance": RestrictedDoc::from_instance(&g.instance),
                "supply": SupplyDoc::from_supply(&g.supply),
                "witness": ConfigurationDoc::from_solution(&g.witness),
            })
        }
        GenKind::Petersen => {
            let g = gaps::gen_petersen_pcmin(a.k).map_err(gap)?;
            json!({
                "instance": CckpDoc::from_instance(&g.instance),
                "supply": SupplyDoc::from_supply(&g.mixture),
                "edges": g.edges,
                "matchings": g.matchings,
                "matching_supplies": g.supplies.iter().map(SupplyDoc::from_supply).collect::<Vec<_>>(),
            })
        }
        GenKind::EmbedCckp => {
            let (inst, s, _) = load_cckp(a.input.as_ref(), a.supply.as_ref())?;
            let supply = integral_supply(s)?;
            let m = gaps::gen_qcmin_reduction(&inst, &supply).map_err(gap)?;
            json!({"instance": InstanceDoc::from_instance(&m)})
        }
    };
    write_text(a.out.as_ref(), &serde_json::to_string_pretty(&bundle).expect("bundle serializes"))?;
    Ok(OK)
}

fn verdict(out: Option<&PathBuf>, ok: bool, detail: Value) -> Run {
    write_text(out, &to_json(&json!({"valid": ok, "detail": detail})))?;
    Ok(if ok { OK } else { INFEASIBLE })
}

fn verify(v: VerifyCmd) -> Run {
    match v {
        VerifyCmd::Solution { io, solution, a, b } => {
            let (mut inst, _) = load_mckc(io.input.as_ref())?;
            let doc: SolutionDoc = parse(&read_text(Some(&solution))?, "solution")?;
            // Strong-soft output solves the soft relaxation.
            inst.soft |= doc.stats.as_ref().is_some_and(|s| s.mode == "StrongSoft");
            let sol = doc.to_solution();
            let q = match evaluate_solution(&inst, &sol, &sol.radius_guess) {
                Ok(q) => q,
                Err(e) => return verdict(io.out.as_ref(), false, json!(e.to_string())),
            };
            let mut ok = q.feasible_counts && q.max_assignment_distance.is_finite();
            if let (Some(a), mckc_core::model::Distance::Finite(got)) = (a, q.distance_factor) {
                ok &= got <= a;
            }
            if let Some(b) = b {
                ok &= q.capacity_factor <= b;
            }
            verdict(io.out.as_ref(), ok, serde_json::to_value(mckc_core::io::QualityDoc::from_report(&q)).expect("serializes"))
        }
        VerifyCmd::Farkas { io, supply, certificate } => {
            let (inst, s, _) = load_cckp(io.input.as_ref(), supply.as_ref())?;
            let supply = integral_supply(s)?;
            let cert: FarkasDoc = parse(&read_text(Some(&certificate))?, "certificate")?;
            let cert = cert.to_certificate();
            if cert.alpha.len() != inst.num_types() || cert.beta.len() != inst.num_machines() {
                return Err(Fail::input("certificate shape does not match the instance"));
            }
            verdict(io.out.as_ref(), verify_farkas(&inst, &supply, &cert), Value::Null)
        }
        VerifyCmd::Roundable { io, decomposition, fractional, a, b } => {
            let (inst, _) = load_mckc(io.input.as_ref())?;
            let doc: DecompositionDoc = parse(&read_text(Some(&decomposition))?, "decomposition")?;
            let frac: FractionalDoc = parse(&read_text(Some(&fractional))?, "fractional point")?;
            let frac = frac.to_solution();
            let DecompositionDoc::Strong { delta, roundable, .. } = doc else {
                return Err(Fail::input("roundable sets only exist in strong decompositions"));
            };
            let params = StrongParams::from_delta(&delta.0).map_err(|e| Fail::input(e.to_string()))?;
            let g = ThresholdGraph::build(&inst, &frac.radius);
            let y: Vec<Vec<f64>> = frac.y.iter().map(|r| r.iter().map(mckc_core::num::to_f64).collect()).collect();
            let x: Vec<Vec<Vec<f64>>> =
                frac.x.iter().map(|r| r.iter().map(|c| c.iter().map(mckc_core::num::to_f64).collect()).collect()).collect();
            let a = a.unwrap_or(params.diameter);
            let b = b.unwrap_or(Rational::from_integer(1) + delta.0);
            let mut ok = true;
            let mut reports = Vec::new();
            for set in &roundable {
                let openings: Vec<Opening> = set
                    .openings
                    .iter()
                    .map(|o| Opening { location: o.location, class: o.class, class_value: o.class_value })
                    .collect();
                let r = verify_roundable(&inst, &g, &set.facilities, &openings, &x, &y, a, mckc_core::num::to_f64(&b));
                ok &= r.ok();
                reports.push(json!({"root": set.root, "diameter": r.diameter, "diameter_ok": r.diameter_ok,
                    "condition1_ok": r.condition1_ok, "condition2_ok": r.condition2_ok, "served": r.served, "opened": r.opened}));
            }
            verdict(io.out.as_ref(), ok, json!(reports))
        }
        VerifyCmd::Neighborhood { io, decomposition, radius } => {
            let (inst, _) = load_mckc(io.input.as_ref())?;
            let doc: DecompositionDoc = parse(&read_text(Some(&decomposition))?, "decomposition")?;
            let g = ThresholdGraph::build(&inst, &radius);
            let parts: Vec<(Vec<usize>, Vec<usize>)> = match &doc {
                DecompositionDoc::Weak { parts, .. } => parts.iter().map(|p| (p.facilities.clone(), p.clients.clone())).collect(),
                DecompositionDoc::Strong { neighborhoods, .. } => {
                    neighborhoods.iter().map(|t| (t.facilities.clone(), t.clients.clone())).collect()
                }
            };
            let bad: Vec<usize> = (0..parts.len())
                .filter(|&l| !mckc_core::decomp::verify_complete_neighborhood(&g, &parts[l].0, &parts[l].1))
                .collect();
            verdict(io.out.as_ref(), bad.is_empty(), json!({"parts": parts.len(), "failing": bad}))
        }
        VerifyCmd::SupplyPoint { io, supply, polyhedron, epsilon } => {
            let (inst, s, _) = load_cckp(io.input.as_ref(), supply.as_ref())?;
            let point = s.ok_or_else(|| Fail::input("a supply point is required"))?.point();
            match polyhedron {
                Polyhedron::Ass => match p_ass_membership(&inst, &point).map_err(|e| Fail(LIMIT, e.to_string()))? {
                    PassOutcome::Witness(_) => verdict(io.out.as_ref(), true, Value::Null),
                    PassOutcome::Separated { hyperplane, .. } => {
                        verdict(io.out.as_ref(), false, json!(HyperplaneDoc::from_hyperplane(&hyperplane)))
                    }
                },
                Polyhedron::Conf => {
                    match p_conf_separation(&inst, &point, &epsilon, DEFAULT_SEPARATION_ROUNDS).map_err(|e| Fail(LIMIT, e.to_string()))? {
                        ConfOutcome::Accept { rounds, .. } => verdict(io.out.as_ref(), true, json!({"rounds": rounds})),
                        ConfOutcome::Separated { hyperplane, .. } => {
                            verdict(io.out.as_ref(), false, json!(HyperplaneDoc::from_hyperplane(&hyperplane)))
                        }
                    }
                }
            }
        }
        VerifyCmd::Witness { io } => {
            let text = read_text(io.input.as_ref())?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Fail::input(e.to_string()))?;
            let witness = value.get("witness").cloned().ok_or_else(|| Fail::input("bundle has no witness block"))?;
            let inst_block = value.get("instance").cloned().ok_or_else(|| Fail::input("bundle has no instance block"))?;
            if inst_block.get("facilities").is_some() {
                let inst: InstanceDoc = parse(&inst_block.to_string(), "instance")?;
                let inst = inst.to_instance().map_err(|e| Fail::input(e.to_string()))?;
                let w: FractionalDoc = parse(&witness.to_string(), "witness")?;
                let res = check_lp_point(&inst, &w.to_solution());
                verdict(io.out.as_ref(), res.is_ok(), json!(res.err().map(|e| e.to_string())))
            } else {
                let inst = if inst_block.get("admissible").is_some() {
                    let r: RestrictedDoc = parse(&inst_block.to_string(), "instance")?;
                    r.to_instance().map_err(|e| Fail::input(e.to_string()))?.base
                } else {
                    let c: CckpDoc = parse(&inst_block.to_string(), "instance")?;
                    c.to_instance().map_err(|e| Fail::input(e.to_string()))?
                };
                let s = value.get("supply").map(|v| parse::<SupplyDoc>(&v.to_string(), "supply")).transpose()?;
                let supply = integral_supply(s)?;
                let w: ConfigurationDoc = parse(&witness.to_string(), "witness")?;
                let s: Vec<Rational> = supply.0.iter().map(|&c| Rational::from_integer(c as i128)).collect();
                let res = mckc_core::maxmin::config::check_configuration_lp(&inst, &s, &w.to_solution(), &Rational::from_integer(1));
                verdict(io.out.as_ref(), res.is_ok(), json!(res.err().map(|e| e.to_string())))
            }
        }
    }
}

fn oracle(o: OracleCmd) -> Run {
    match o {
        OracleCmd::Mckc { io, radius, b } => {
            let (inst, _) = load_mckc(io.input.as_ref())?;
            match brute_force_mckc(&inst, &radius, &b) {
                Ok(Some(sol)) => {
                    let q = evaluate_solution(&inst, &sol, &radius).map_err(|e| Fail(LIMIT, e.to_string()))?;
                    write_text(io.out.as_ref(), &to_json(&SolutionDoc::from_solution(&sol, Some(&q))))?;
                    Ok(OK)
                }
                Ok(None) => {
                    write_text(io.out.as_ref(), &to_json(&json!({"status": "NONE", "radius": format_rational(&radius), "b": Q(b)})))?;
                    Ok(INFEASIBLE)
                }
                Err(e @ OracleError::Weights) => Err(Fail::input(e.to_string())),
                Err(e) => Err(Fail(LIMIT, e.to_string())),
            }
        }
        OracleCmd::Cckp { io, supply } => {
            let (inst, s, _) = load_cckp(io.input.as_ref(), supply.as_ref())?;
            let supply = integral_supply(s)?;
            oracle_cckp(&inst, &supply, io.out.as_ref())
        }
    }
}
