//! Batch front end: graphs in, JSON out. Results land on stdout and are
//! a pure function of the inputs; timings and prose go to stderr. Exit
//! codes follow one convention everywhere: 0 success, 1 a verification
//! or bound failed, 2 unreadable input, 3 enumeration budget exceeded,
//! 4 precondition not met, 5 internal invariant breached.

use clap::{Parser, Subcommand};
use flowforge::bounds::{fourteen_fifteenths_flow, three_quarter_flow, two_flow_bound};
use flowforge::catalog::{load_manifest, parse_edgelist, write_edgelist};
use flowforge::error::Error;
use flowforge::flow::{certify_integer_flow, lift_modular_to_integer, LabellingData, WeightedGraph};
use flowforge::graph::MultiGraph;
use flowforge::group::{GroupSpec, Z3};
use flowforge::reduction::{
    build_delta, counterexample_sweep, push_three_cut, BulletGraph, DeltaProvenance, MuMode,
};
use flowforge::report::{
    verify_certificate, CertificateJson, Ratio, VerifyOutcome, BOUND_SCHEMA, REDUCE_SCHEMA,
    SOLVE_SCHEMA,
};
use flowforge::solver::{max_support_flow, DEFAULT_BUDGET};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const VERIFY_SCHEMA: &str = "flowforge/verify/v1";

#[derive(Parser)]
#[command(name = "flowforge", version, about = "Group-valued flows on multigraphs")]
struct Cli {
    /// Defaults file of `key = value` lines (keys: budget, group).
    /// Without the flag, ./flowforge.conf is read when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize support over all labellings with the given boundary.
    Solve {
        /// Edge-list file: header `n m`, then one `u v` line per edge.
        graph: PathBuf,
        /// `zero` or a file of one residue per vertex.
        #[arg(long, default_value = "zero")]
        mu: String,
        /// z2, z3, z2z2, or z3z3.
        #[arg(long)]
        group: Option<String>,
        /// Largest coset the walk may visit.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Recheck a certificate against a graph.
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Compare optimum gain against the ledger across a catalog.
    Sweep {
        /// Manifest of `name: generator(args)` lines.
        manifest: PathBuf,
        /// `zero`, `exhaustive`, or `sampled:SEED:COUNT`.
        #[arg(long, default_value = "zero")]
        mu: String,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Constructive support bounds with embedded certificates.
    Bounds {
        graph: PathBuf,
        /// `3/4`, `14/15`, or `2flow`.
        #[arg(long)]
        which: String,
        /// Half the connectivity demanded by the 2flow construction.
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Identify one side of a small cut, optionally then contract
    /// triangles.
    Reduce {
        graph: PathBuf,
        /// `bullet` or `delta`.
        #[arg(long)]
        to: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let defaults = match Defaults::load(cli.config.as_deref()) {
        Ok(d) => d,
        Err(msg) => return fail(2, &msg),
    };
    let code = match &cli.command {
        Command::Solve { graph, mu, group, budget } => cmd_solve(graph, mu, group.as_deref(), *budget, &defaults),
        Command::Verify { graph, certificate } => cmd_verify(graph, certificate),
        Command::Sweep { manifest, mu, budget } => cmd_sweep(manifest, mu, *budget, &defaults),
        Command::Bounds { graph, which, j, budget } => cmd_bounds(graph, which, *j, *budget, &defaults),
        Command::Reduce { graph, to } => cmd_reduce(graph, to),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => fail(exit_for(&e), &e.to_string()),
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::InvariantViolation(_) | Error::UnknownVertex(_) | Error::UnknownEdge(_) => 5,
        _ => 4,
    }
}

struct Defaults {
    budget: Option<u128>,
    group: Option<String>,
}

impl Defaults {
    fn load(explicit: Option<&Path>) -> Result<Defaults, String> {
        let text = match explicit {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?,
            None => std::fs::read_to_string("flowforge.conf").unwrap_or_default(),
        };
        let mut keys = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(format!("config line {}: expected `key = value`", idx + 1));
            };
            keys.insert(k.trim().to_string(), v.trim().to_string());
        }
        let budget = match keys.get("budget") {
            Some(v) => {
                Some(v.parse::<u128>().map_err(|_| format!("config budget `{v}` is not a number"))?)
            }
            None => None,
        };
        Ok(Defaults { budget, group: keys.get("group").cloned() })
    }

    fn budget(&self, flag: Option<u128>) -> Result<u128, String> {
        if let Some(b) = flag {
            return Ok(b);
        }
        if let Ok(v) = std::env::var("FLOWFORGE_BUDGET") {
            return v.parse().map_err(|_| format!("FLOWFORGE_BUDGET `{v}` is not a number"));
        }
        Ok(self.budget.unwrap_or(DEFAULT_BUDGET))
    }

    fn group(&self, flag: Option<&str>) -> Result<GroupSpec, String> {
        let name = flag.or(self.group.as_deref()).unwrap_or("z3");
        match name {
            "z2" => Ok(GroupSpec::z2()),
            "z3" => Ok(GroupSpec::z3()),
            "z2z2" => Ok(GroupSpec::z2z2()),
            "z3z3" => Ok(GroupSpec::z3z3()),
            other => Err(format!("unknown group `{other}` (use z2, z3, z2z2, z3z3)")),
        }
    }
}

fn read_graph(path: &Path) -> Result<MultiGraph, Error> {
    parse_edgelist(&std::fs::read_to_string(path)?)
}

fn read_mu(spec: &str, n: usize) -> Result<Vec<Z3>, Error> {
    if spec == "zero" {
        return Ok(vec![Z3(0); n]);
    }
    let text = std::fs::read_to_string(spec)?;
    let mut mu = Vec::new();
    for field in text.split_whitespace() {
        let v: i64 = field.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("bad residue `{field}` in {spec}"),
        })?;
        mu.push(Z3::new(v));
    }
    if mu.len() != n {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{spec} lists {} residues for {n} vertices", mu.len()),
        });
    }
    Ok(mu)
}

fn emit<T: Serialize>(payload: &T) {
    println!("{}", serde_json::to_string_pretty(payload).expect("payloads serialize"));
}

#[derive(Serialize)]
struct SolvePayload {
    schema: String,
    group: Vec<u8>,
    num_vertices: usize,
    num_edges: usize,
    cycle_rank: usize,
    coset_size: String,
    enumerated: String,
    optimal: bool,
    support: usize,
    ratio: Ratio,
    gain: i64,
    certificate: CertificateJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    integer_certificate: Option<CertificateJson>,
}

fn cmd_solve(
    graph: &Path,
    mu: &str,
    group: Option<&str>,
    budget: Option<u128>,
    defaults: &Defaults,
) -> Result<u8, Error> {
    let g = read_graph(graph)?;
    let group = defaults.group(group).map_err(|msg| Error::Parse { line: 0, msg })?;
    let budget = defaults.budget(budget).map_err(|msg| Error::Parse { line: 0, msg })?;
    let mu = read_mu(mu, g.num_vertices())?;
    let orientation = g.default_orientation();
    let wg = WeightedGraph::new(g, orientation, mu)?;
    let report = max_support_flow(&wg, &group, budget)?;

    // zero-boundary Z3 optima also ship in lifted integer form
    let integer_certificate = match (&report.certificate.data, wg.mu().iter().all(|m| m.is_zero())) {
        (LabellingData::Modular(phi), true) if group == GroupSpec::z3() => {
            let lifted = lift_modular_to_integer(&wg.graph, &wg.orientation, phi)?;
            Some(CertificateJson::from_certificate(&certify_integer_flow(&wg, &lifted)?))
        }
        _ => None,
    };
    let payload = SolvePayload {
        schema: SOLVE_SCHEMA.to_string(),
        group: group.orders().to_vec(),
        num_vertices: report.num_vertices,
        num_edges: report.num_edges,
        cycle_rank: report.cycle_rank,
        coset_size: report.coset_size.to_string(),
        enumerated: report.enumerated.to_string(),
        optimal: report.optimal,
        support: report.support,
        ratio: report.ratio,
        gain: report.gain,
        certificate: CertificateJson::from_certificate(&report.certificate),
        integer_certificate,
    };
    emit(&payload);
    eprintln!(
        "support {} of {} edges (ratio {}), {} of {} labellings in {:.1?}",
        report.support,
        report.num_edges,
        report.ratio,
        report.enumerated,
        report.coset_size,
        report.wall
    );
    if report.optimal {
        Ok(0)
    } else {
        eprintln!("budget stopped the walk early; the optimum may be larger");
        Ok(3)
    }
}

#[derive(Serialize)]
struct VerifyPayload {
    schema: String,
    outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn cmd_verify(graph: &Path, certificate: &Path) -> Result<u8, Error> {
    let g = read_graph(graph)?;
    let text = std::fs::read_to_string(certificate)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    // accept either a bare certificate or any payload embedding one
    let cert_value = value.get("certificate").cloned().unwrap_or(value);
    let cert: CertificateJson = serde_json::from_value(cert_value)
        .map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    let (outcome, detail, code) = match verify_certificate(&cert, &g) {
        VerifyOutcome::Valid => ("valid".to_string(), None, 0),
        VerifyOutcome::Tampered(why) => ("tampered".to_string(), Some(why), 1),
        VerifyOutcome::WrongGraph(why) => ("wrong-graph".to_string(), Some(why), 2),
    };
    emit(&VerifyPayload { schema: VERIFY_SCHEMA.to_string(), outcome: outcome.clone(), detail: detail.clone() });
    match detail {
        Some(d) => eprintln!("certificate {outcome}: {d}"),
        None => eprintln!("certificate {outcome}"),
    }
    Ok(code)
}

fn parse_mu_mode(spec: &str) -> Result<MuMode, Error> {
    match spec {
        "zero" => Ok(MuMode::Zero),
        "exhaustive" => Ok(MuMode::Exhaustive),
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            let bad = || Error::Parse {
                line: 0,
                msg: format!("bad mu mode `{other}` (zero, exhaustive, sampled:SEED:COUNT)"),
            };
            match parts.as_slice() {
                ["sampled", seed, count] => Ok(MuMode::Sampled {
                    seed: seed.parse().map_err(|_| bad())?,
                    count: count.parse().map_err(|_| bad())?,
                }),
                _ => Err(bad()),
            }
        }
    }
}

fn cmd_sweep(
    manifest: &Path,
    mu: &str,
    budget: Option<u128>,
    defaults: &Defaults,
) -> Result<u8, Error> {
    let entries = load_manifest(manifest)?;
    let mode = parse_mu_mode(mu)?;
    let budget = defaults.budget(budget).map_err(|msg| Error::Parse { line: 0, msg })?;
    let start = std::time::Instant::now();
    let summary = counterexample_sweep(&entries, &mode, budget)?;
    emit(&summary);
    let skipped = summary.instances.iter().filter(|i| i.skipped.is_some()).count();
    eprintln!(
        "swept {} instances: {} checks, {} failures, {} skipped, min slack {:?}, tight {:?} in {:.1?}",
        summary.instances.len(),
        summary.checks,
        summary.failures.len(),
        skipped,
        summary.min_slack,
        summary.tight,
        start.elapsed()
    );
    Ok(if summary.failures.is_empty() { 0 } else { 1 })
}

#[derive(Serialize)]
struct BoundsPayload {
    schema: String,
    which: String,
    num_edges: usize,
    support: usize,
    ratio: Ratio,
    meets_bound: bool,
    certificate: CertificateJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_counts: Option<[usize; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_edges: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lifts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matching_weight: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    experimental: Option<bool>,
}

fn cmd_bounds(
    graph: &Path,
    which: &str,
    j: usize,
    budget: Option<u128>,
    defaults: &Defaults,
) -> Result<u8, Error> {
    let g = read_graph(graph)?;
    let budget = defaults.budget(budget).map_err(|msg| Error::Parse { line: 0, msg })?;
    let m = g.num_edges();
    let mut payload = match which {
        "3/4" => {
            let b = three_quarter_flow(&g, budget)?;
            let meets = b.certificate.support * 4 >= 3 * m;
            BoundsPayload {
                schema: BOUND_SCHEMA.to_string(),
                which: which.to_string(),
                num_edges: m,
                support: b.certificate.support,
                ratio: b.certificate.ratio,
                meets_bound: meets,
                certificate: CertificateJson::from_certificate(&b.certificate),
                class_counts: Some(b.class_counts),
                zero_edges: None,
                lifts: None,
                j: None,
                matching_weight: None,
                experimental: None,
            }
        }
        "14/15" => {
            let b = fourteen_fifteenths_flow(&g)?;
            BoundsPayload {
                schema: BOUND_SCHEMA.to_string(),
                which: which.to_string(),
                num_edges: m,
                support: b.certificate.support,
                ratio: b.certificate.ratio,
                meets_bound: b.meets_bound,
                certificate: CertificateJson::from_certificate(&b.certificate),
                class_counts: None,
                zero_edges: Some(b.zero_edges),
                lifts: Some(b.lifts),
                j: None,
                matching_weight: None,
                experimental: None,
            }
        }
        "2flow" => {
            let b = two_flow_bound(&g, j)?;
            BoundsPayload {
                schema: BOUND_SCHEMA.to_string(),
                which: which.to_string(),
                num_edges: m,
                support: b.certificate.support,
                ratio: b.certificate.ratio,
                meets_bound: b.meets_bound,
                certificate: CertificateJson::from_certificate(&b.certificate),
                class_counts: None,
                zero_edges: None,
                lifts: None,
                j: Some(b.j),
                matching_weight: Some(b.matching_weight),
                experimental: Some(b.experimental),
            }
        }
        other => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("unknown bound `{other}` (use 3/4, 14/15, 2flow)"),
            })
        }
    };
    payload.which = which.to_string();
    emit(&payload);
    eprintln!(
        "{} bound: support {} of {} edges (ratio {}), bound {}",
        which,
        payload.support,
        m,
        payload.ratio,
        if payload.meets_bound { "met" } else { "MISSED" }
    );
    Ok(if payload.meets_bound { 0 } else { 1 })
}

#[derive(Serialize)]
struct LedgerEntryJson {
    length: usize,
    residue: usize,
    equitable: bool,
    bonus: i64,
    unusable: bool,
}

#[derive(Serialize)]
struct BulletJson {
    x_vertices: Vec<usize>,
    w: usize,
    cut_edges: Vec<usize>,
    num_vertices: usize,
    num_edges: usize,
    graph: String,
    mu: Vec<u8>,
    ledger: Vec<LedgerEntryJson>,
    bonus_total: i64,
    bonus_usable: i64,
    bonus_unusable: i64,
}

#[derive(Serialize)]
struct DeltaJson {
    num_vertices: usize,
    num_edges: usize,
    graph: String,
    provenance: Vec<String>,
    triangle_corners: Vec<[usize; 3]>,
    residues: Vec<u8>,
    cubic: bool,
    cyclically_four_edge_connected: bool,
}

#[derive(Serialize)]
struct ReducePayload {
    schema: String,
    to: String,
    bullet: BulletJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<DeltaJson>,
}

fn bullet_json(b: &BulletGraph) -> BulletJson {
    BulletJson {
        x_vertices: b.x_vertices.iter().copied().collect(),
        w: b.w,
        cut_edges: b.cut_edges.clone(),
        num_vertices: b.weighted.graph.num_vertices(),
        num_edges: b.weighted.graph.num_edges(),
        graph: write_edgelist(&b.weighted.graph),
        mu: b.weighted.mu().iter().map(|z| z.0).collect(),
        ledger: b
            .ledger
            .entries
            .iter()
            .map(|e| LedgerEntryJson {
                length: e.length,
                residue: e.residue,
                equitable: e.equitable,
                bonus: e.bonus,
                unusable: e.unusable,
            })
            .collect(),
        bonus_total: b.ledger.total(),
        bonus_usable: b.ledger.usable_total(),
        bonus_unusable: b.ledger.total() - b.ledger.usable_total(),
    }
}

fn cmd_reduce(graph: &Path, to: &str) -> Result<u8, Error> {
    if to != "bullet" && to != "delta" {
        return Err(Error::Parse {
            line: 0,
            msg: format!("unknown target `{to}` (use bullet or delta)"),
        });
    }
    let g = read_graph(graph)?;
    let wg = WeightedGraph::zero(g);
    let bullet = push_three_cut(&wg)?;
    let delta = if to == "delta" {
        let d = build_delta(&bullet)?;
        Some(DeltaJson {
            num_vertices: d.graph.num_vertices(),
            num_edges: d.graph.num_edges(),
            graph: write_edgelist(&d.graph),
            provenance: d
                .provenance
                .iter()
                .map(|p| match p {
                    DeltaProvenance::Branch(v) => format!("branch:{v}"),
                    DeltaProvenance::Triangle(t) => format!("triangle:{t}"),
                })
                .collect(),
            triangle_corners: d.triangles.iter().map(|t| t.corners).collect(),
            residues: d.residues.clone(),
            cubic: d.cubic,
            cyclically_four_edge_connected: d.cyclically_four,
        })
    } else {
        None
    };
    let payload = ReducePayload {
        schema: REDUCE_SCHEMA.to_string(),
        to: to.to_string(),
        bullet: bullet_json(&bullet),
        delta,
    };
    emit(&payload);
    match &payload.delta {
        Some(d) => eprintln!(
            "delta: {} vertices, {} edges, cubic {}, cyclically 4-edge-connected {}",
            d.num_vertices, d.num_edges, d.cubic, d.cyclically_four_edge_connected
        ),
        None => eprintln!(
            "bullet: kept {} vertices, identified the rest into w = {}, ledger {} total / {} usable",
            payload.bullet.x_vertices.len(),
            payload.bullet.w,
            payload.bullet.bonus_total,
            payload.bullet.bonus_usable
        ),
    }
    Ok(0)
}
