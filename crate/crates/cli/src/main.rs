mod doc;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crownful::acceptance::{run_criterion, Scale};
use crownful::format::{emit_graph, emit_principal_sidecar, parse_graph, parse_principal_sidecar};
use crownful::generators::{
    acyclic_tournament, alternating_path, crown, oriented_grid, random_bipartite_outregular, random_dag,
    random_digraph, random_tournament, reversed_crown, GridOrientation, Phase,
};
use crownful::minors::{
    butterfly_search, dag_minor_check, general_minor_check, grad, shallow_minor_check, topological_minor_check,
    MinorError,
};
use crownful::quasiwide::{compute_scattered, greedy_scattered, main_tec_step, Dichotomy, QuasiError};
use crownful::solvers::{brute_force_solve, DominationInstance, SolveError, Solver, Witness};
use crownful::{par, Digraph, VertexSet};
use serde::Serialize;

use doc::{Inputs, Payload, WitnessDocument};

const FOUND: u8 = 0;
const NOT_FOUND: u8 = 1;
const BUDGET: u8 = 2;
const USAGE: u8 = 3;
const IO: u8 = 4;

#[derive(Parser)]
#[command(name = "crownful", version, about = "Directed minors, crowns, scattered sets and domination solvers")]
struct Cli {
    /// Emit line-delimited JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for batch work; 1 runs everything on the calling thread.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph in the text format.
    Generate(GenerateArgs),
    /// Look for a model of PATTERN in HOST.
    Minor(MinorArgs),
    /// Find M vertices that are D-scattered after deleting at most S_BUDGET vertices.
    Scatter(ScatterArgs),
    /// Crown model or scattered set from a maximal R-scattered starting set.
    Dichotomy(DichotomyArgs),
    /// Solve a domination-type problem.
    Solve(SolveArgs),
    /// Greatest reduced average density at depth R.
    Grad(GradArgs),
    /// Run the acceptance criteria.
    Selftest(SelftestArgs),
    /// Re-verify a witness document against its graphs.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Crown,
    ReversedCrown,
    AcyclicTournament,
    Tournament,
    Random,
    Dag,
    Grid,
    AlternatingPath,
    Bipartite,
}

impl Family {
    fn randomized(self) -> bool {
        matches!(self, Family::Tournament | Family::Random | Family::Dag | Family::Grid | Family::Bipartite)
    }
}

#[derive(Args)]
struct GenerateArgs {
    family: Family,
    /// crown/reversed-crown: q. tournaments: n. random/dag: n p. grid: rows cols.
    /// alternating-path: k [0|1 for odd|even phase]. bipartite: n d.
    params: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinorMode {
    Directed,
    Shallow,
    Butterfly,
    Topological,
}

#[derive(Args)]
struct MinorArgs {
    #[arg(long, value_enum, default_value = "directed")]
    mode: MinorMode,
    #[arg(long, default_value_t = 0)]
    depth: usize,
    pattern: PathBuf,
    host: PathBuf,
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ScatterArgs {
    graph: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, env = "CROWNFUL_BUDGET", default_value_t = 4)]
    s_budget: usize,
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct DichotomyArgs {
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    problem: Solver,
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, env = "CROWNFUL_BUDGET", default_value_t = 4)]
    scatter_budget: usize,
    /// Use exhaustive search instead of the branching solver.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct GradArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    r: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    Full,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value = "small")]
    scale: ScaleArg,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Run a single criterion.
    #[arg(long)]
    only: Option<u8>,
}

#[derive(Args)]
struct VerifyArgs {
    document: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pattern: Option<PathBuf>,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
enum Verdict {
    Found,
    NotFound,
    Budget,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Found => FOUND,
            Verdict::NotFound => NOT_FOUND,
            Verdict::Budget => BUDGET,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    fallback: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    document: Option<WitnessDocument>,
}

/// Failure that maps to an exit code above 2.
struct Fail(u8, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(USAGE, msg.into())
}

fn read_graph(path: &Path) -> Result<(Digraph, Option<Vec<usize>>), Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(IO, format!("{}: {e}", path.display())))?;
    let g = parse_graph(&text).map_err(|e| Fail(IO, format!("{}: {e}", path.display())))?;
    Ok((g, parse_principal_sidecar(&text)))
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail(IO, format!("{}: {e}", path.display())))
}

fn params(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, r: &Report, witness: Option<&Path>) -> Result<u8, Fail> {
        if let (Some(path), Some(doc)) = (witness, &r.document) {
            let text = serde_json::to_string(doc).expect("documents serialize") + "\n";
            write_file(path, &text)?;
        }
        if self.json {
            println!("{}", serde_json::to_string(r).expect("reports serialize"));
        } else {
            let mut line = format!("{}: {:?}", r.command, r.verdict);
            if let Some(f) = r.fallback {
                line.push_str(&format!(" (fallback {})", if f { "used" } else { "not used" }));
            }
            if let Some(d) = &r.detail {
                line.push_str(&format!(": {d}"));
            }
            println!("{line}");
            if let Some(doc) = &r.document {
                println!("verified: {}", doc.verified);
                println!("{}", serde_json::to_string_pretty(&doc.payload).expect("documents serialize"));
            }
        }
        match &r.document {
            Some(doc) if !doc.verified => Err(Fail(IO, "emitted witness failed verification".into())),
            _ => Ok(r.verdict.code()),
        }
    }
}

fn num<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> Result<T, Fail> {
    params
        .get(i)
        .ok_or_else(|| usage(format!("missing parameter {name}")))?
        .parse()
        .map_err(|_| usage(format!("bad value for {name}")))
}

fn generate(a: &GenerateArgs, json: bool) -> Result<u8, Fail> {
    if json && a.family.randomized() && a.seed.is_none() {
        return Err(usage("randomized families need --seed in structured mode"));
    }
    let seed = a.seed.unwrap_or(0);
    let p = &a.params;
    let bad = |e: crownful::generators::GeneratorError| usage(e.to_string());
    let mut principals = None;
    let g = match a.family {
        Family::Crown | Family::ReversedCrown => {
            let q = num(p, 0, "q")?;
            let c = if matches!(a.family, Family::Crown) { crown(q) } else { reversed_crown(q) }.map_err(bad)?;
            principals = Some(c.principals.iter().collect::<Vec<_>>());
            c.graph
        }
        Family::AcyclicTournament => acyclic_tournament(num(p, 0, "n")?),
        Family::Tournament => random_tournament(num(p, 0, "n")?, seed),
        Family::Random | Family::Dag => {
            let n = num(p, 0, "n")?;
            let prob: f64 = num(p, 1, "p")?;
            if !(0.0..=1.0).contains(&prob) {
                return Err(usage("p must lie in [0, 1]"));
            }
            if matches!(a.family, Family::Random) { random_digraph(n, prob, seed) } else { random_dag(n, prob, seed) }
        }
        Family::Grid => {
            oriented_grid(num(p, 0, "rows")?, num(p, 1, "cols")?, &GridOrientation::Seeded(seed)).map_err(bad)?
        }
        Family::AlternatingPath => {
            let phase = if p.get(1).is_some_and(|s| s == "1") { Phase::Even } else { Phase::Odd };
            alternating_path(num(p, 0, "k")?, phase).map_err(bad)?
        }
        Family::Bipartite => random_bipartite_outregular(num(p, 0, "n")?, num(p, 1, "d")?, seed).map_err(bad)?,
    };
    let mut text = emit_graph(&g);
    if let Some(pr) = principals {
        text.push_str(&emit_principal_sidecar(&pr));
    }
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(FOUND)
}

fn minor(a: &MinorArgs, out: &Out) -> Result<u8, Fail> {
    let (h, _) = read_graph(&a.pattern)?;
    let (g, _) = read_graph(&a.host)?;
    let inputs = Inputs { host: &g, pattern: Some(&h) };
    let ps = params(&[("depth", a.depth)]);
    let too_large = |e: MinorError| match e {
        MinorError::TooLarge(_) => Ok(None),
        other => Err(usage(other.to_string())),
    };
    let payload = match a.mode {
        MinorMode::Directed => {
            if g.topological_order().is_ok() {
                dag_minor_check(&h, &g).or_else(too_large)?.map(Payload::Model)
            } else {
                general_minor_check(&h, &g).map(Payload::Model)
            }
        }
        MinorMode::Shallow => shallow_minor_check(&h, &g, a.depth).map(Payload::Model),
        MinorMode::Topological => topological_minor_check(&h, &g).map(Payload::Subdivision),
        MinorMode::Butterfly => match butterfly_search(&h, &g) {
            Ok(w) => w.map(Payload::Butterfly),
            Err(MinorError::TooLarge(m)) => {
                let r = Report { command: "minor", verdict: Verdict::Budget, fallback: None, detail: Some(m), document: None };
                return out.emit(&r, None);
            }
            Err(e) => return Err(usage(e.to_string())),
        },
    };
    let document = payload.map(|p| WitnessDocument::new(p, ps, &inputs));
    let verdict = if document.is_some() { Verdict::Found } else { Verdict::NotFound };
    out.emit(&Report { command: "minor", verdict, fallback: None, detail: None, document }, a.witness.as_deref())
}

fn quasi_verdict(e: QuasiError) -> Result<(Verdict, String), Fail> {
    match e {
        QuasiError::BudgetExhausted | QuasiError::BestEffortFailure(_) => Ok((Verdict::Budget, e.to_string())),
        other => Err(usage(other.to_string())),
    }
}

fn scatter(a: &ScatterArgs, out: &Out) -> Result<u8, Fail> {
    let (g, _) = read_graph(&a.graph)?;
    let inputs = Inputs { host: &g, pattern: None };
    let ps = params(&[("d", a.d), ("m", a.m), ("s_budget", a.s_budget)]);
    let all = VertexSet::range(g.n());
    let r = match compute_scattered(&g, &all, a.d, a.m, a.s_budget) {
        Ok(found) => {
            let document = found.map(|w| WitnessDocument::new(Payload::Scattered(w), ps, &inputs));
            let verdict = if document.is_some() { Verdict::Found } else { Verdict::NotFound };
            Report { command: "scatter", verdict, fallback: None, detail: None, document }
        }
        Err(e) => {
            let (verdict, detail) = quasi_verdict(e)?;
            Report { command: "scatter", verdict, fallback: None, detail: Some(detail), document: None }
        }
    };
    out.emit(&r, a.witness.as_deref())
}

fn dichotomy(a: &DichotomyArgs, out: &Out) -> Result<u8, Fail> {
    let (g, principals) = read_graph(&a.graph)?;
    let inputs = Inputs { host: &g, pattern: None };
    let first: VertexSet = principals.unwrap_or_default().into_iter().filter(|&v| v < g.n()).collect();
    let start = greedy_scattered(&g, &first, a.r);
    let r = match main_tec_step(&g, &start, a.r, a.p, a.q) {
        Ok(d) => {
            let payload = match d {
                Dichotomy::Crown { order, depth, model } => Payload::Crown { order, depth, model },
                Dichotomy::Scattered(w) => Payload::Scattered(w),
            };
            let ps = params(&[("r", a.r), ("q", a.q), ("p", a.p)]);
            let document = Some(WitnessDocument::new(payload, ps, &inputs));
            let detail = Some(format!("starting set of {} vertices", start.len()));
            Report { command: "dichotomy", verdict: Verdict::Found, fallback: None, detail, document }
        }
        Err(e) => {
            let (verdict, detail) = quasi_verdict(e)?;
            Report { command: "dichotomy", verdict, fallback: None, detail: Some(detail), document: None }
        }
    };
    out.emit(&r, a.witness.as_deref())
}

fn solve(a: &SolveArgs, out: &Out) -> Result<u8, Fail> {
    let (g, _) = read_graph(&a.graph)?;
    let inputs = Inputs { host: &g, pattern: None };
    let inst = DominationInstance::new(g.clone(), a.k).with_radius(a.d);
    let outcome = if a.oracle { brute_force_solve(&inst, a.problem.variant()) } else { a.problem.run(&inst, a.scatter_budget) };
    let outcome = match outcome {
        Ok(o) => o,
        Err(SolveError::TooLarge(m)) => {
            let r = Report { command: "solve", verdict: Verdict::Budget, fallback: None, detail: Some(m), document: None };
            return out.emit(&r, None);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    let ps = params(&[("k", a.k), ("d", a.d)]);
    let document = outcome.witness.map(|w| {
        let payload = match (a.problem, w) {
            (Solver::Dob, w) => Payload::Outbranching(w),
            (Solver::Is, w) => Payload::Independent(w.vertices().clone()),
            (Solver::Ids, w) => Payload::Dominating { set: w.vertices().clone(), independent: true },
            (_, Witness::Set(s)) => Payload::Dominating { set: s, independent: false },
            (_, w) => Payload::Dominating { set: w.vertices().clone(), independent: false },
        };
        WitnessDocument::new(payload, ps, &inputs)
    });
    let verdict = if outcome.feasible { Verdict::Found } else { Verdict::NotFound };
    let r = Report { command: "solve", verdict, fallback: Some(outcome.exhausted), detail: None, document };
    out.emit(&r, a.witness.as_deref())
}

fn grad_cmd(a: &GradArgs, out: &Out) -> Result<u8, Fail> {
    let (g, _) = read_graph(&a.graph)?;
    let r = match grad(&g, a.r) {
        Ok(v) => Report { command: "grad", verdict: Verdict::Found, fallback: None, detail: Some(v.to_string()), document: None },
        Err(MinorError::TooLarge(m)) => {
            Report { command: "grad", verdict: Verdict::Budget, fallback: None, detail: Some(m), document: None }
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    out.emit(&r, None)
}

fn selftest(a: &SelftestArgs, out: &Out) -> Result<u8, Fail> {
    let scale = match a.scale {
        ScaleArg::Small => Scale::Small,
        ScaleArg::Full => Scale::Full,
    };
    let ids: Vec<u8> = match a.only {
        Some(id) if (1..=12).contains(&id) => vec![id],
        Some(id) => return Err(usage(format!("no criterion {id}"))),
        None => (1..=12).collect(),
    };
    let mut failed = 0;
    for id in ids {
        let r = run_criterion(id, scale, a.seed).expect("known criterion");
        failed += usize::from(!r.passed);
        if out.json {
            println!("{}", serde_json::to_string(&r).expect("reports serialize"));
        } else {
            println!("{}", r.line());
        }
    }
    Ok(if failed == 0 { FOUND } else { NOT_FOUND })
}

fn verify(a: &VerifyArgs, out: &Out) -> Result<u8, Fail> {
    let text = std::fs::read_to_string(&a.document).map_err(|e| Fail(IO, format!("{}: {e}", a.document.display())))?;
    let doc: WitnessDocument =
        serde_json::from_str(text.trim()).map_err(|e| Fail(IO, format!("{}: {e}", a.document.display())))?;
    let (g, _) = read_graph(&a.graph)?;
    let pattern = a.pattern.as_deref().map(read_graph).transpose()?.map(|p| p.0);
    let ok = doc.check(&Inputs { host: &g, pattern: pattern.as_ref() });
    let verdict = if ok { Verdict::Found } else { Verdict::NotFound };
    let detail = Some(if ok { "witness verifies".to_string() } else { "witness rejected".to_string() });
    out.emit(&Report { command: "verify", verdict, fallback: None, detail, document: None }, None)
}

fn dispatch(cli: &Cli) -> Result<u8, Fail> {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::Generate(a) => generate(a, cli.json),
        Command::Minor(a) => minor(a, &out),
        Command::Scatter(a) => scatter(a, &out),
        Command::Dichotomy(a) => dichotomy(a, &out),
        Command::Solve(a) => solve(a, &out),
        Command::Grad(a) => grad_cmd(a, &out),
        Command::Selftest(a) => selftest(a, &out),
        Command::Verify(a) => verify(a, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { FOUND };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be positive");
        return ExitCode::from(USAGE);
    }
    if cli.jobs > 1 {
        std::env::set_var("RAYON_NUM_THREADS", cli.jobs.to_string());
    }
    let result = if cli.jobs == 1 { par::sequential(|| dispatch(&cli)) } else { dispatch(&cli) };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
