//! `upath`: generate instances, solve Steiner Tree, run verification
//! sweeps and tabulate their results.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 parse/instance error,
//! 3 size/class error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use upath_core::diam2::{self, SolveTrace, SteinerInstance};
use upath_core::gen;
use upath_core::io::{
    emit_3dm, emit_graph, emit_model, emit_terminals, parse_3dm, parse_graph, parse_model,
    parse_terminals, TerminalFile,
};
use upath_core::oracle::{steiner_min, Status, Witness};
use upath_core::reduction::{cds_from_3dm, steiner_from_3dm, steiner_from_ds, subdivide, GadgetLayout};
use upath_core::report::{csv_table, digest, markdown_table, VerificationReport};
use upath_core::verify::{
    instance_text, verify_ds_gadget, verify_gadgets, verify_gadgets_with, verify_lemmas,
    verify_solver, verify_subdivision,
};
use upath_core::{Error, Graph, VertexSet};

#[derive(Parser)]
#[command(name = "upath", version, about = "Steiner tree and domination workbench for undirected path graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Oracle,
    Diam2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "3dm")]
    ThreeDm,
    GadgetCds,
    GadgetSteiner,
    GadgetDs,
    Subdivision,
    Graph,
    Upath,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Gadget,
    Solver,
    Lemmas,
    Subdivision,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random or derived instance.
    Generate {
        kind: Kind,
        /// Input file for derived kinds (.3dm for gadgets, .graph otherwise).
        #[arg(long)]
        from: Option<PathBuf>,
        /// Output prefix; single-file kinds print to stdout without it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Universe size (3dm) or vertex count (graph, upath).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Triple count (3dm).
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Edge probability (graph).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Host tree nodes (upath).
        #[arg(long, default_value_t = 4)]
        t: usize,
        /// Budget (gadget-ds, upath).
        #[arg(long)]
        k: Option<usize>,
        /// Terminal count (upath).
        #[arg(long, default_value_t = 3)]
        terminals: usize,
    },
    /// Minimum Steiner set for a graph and terminal file.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        terminals: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Overrides the terminal file's `k` line; default is n.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification sweep; exit 1 on any failed check.
    Verify {
        target: Target,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        mmax: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per lemma (lemmas) or graphs (gadget's second sweep).
        #[arg(long)]
        pairs: Option<usize>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Remove one edge from every gadget (falsifiability check).
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
    /// Tabulate a gadget sweep report.
    Report {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        csv: bool,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => e.exit_code() as u8,
            Failure::Io(_) | Failure::Usage(_) => 2,
            Failure::Verification(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) | Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Parses a file, prefixing errors with its path.
fn load<T>(path: &Path, parse: impl Fn(&str) -> upath_core::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Failure::Core(Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        }),
        other => Failure::Core(other),
    })
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `(extension, text)` files under the prefix, or prints a single
/// file when no prefix is given.
fn emit_files(out: Option<&Path>, files: &[(&str, String)]) -> Outcome {
    match out {
        Some(prefix) => {
            for (ext, text) in files {
                write_file(&with_ext(prefix, ext), text)?;
            }
            Ok(())
        }
        None if files.len() == 1 => {
            print!("{}", files[0].1);
            Ok(())
        }
        None => Err(Failure::Usage("this kind writes several files; pass --out <prefix>".into())),
    }
}

fn need<'a>(from: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, Failure> {
    from.as_deref()
        .ok_or_else(|| Failure::Usage(format!("--from <{what}> is required for this kind")))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    kind: Kind,
    from: &Option<PathBuf>,
    out: Option<&Path>,
    seed: u64,
    n: usize,
    m: usize,
    p: f64,
    t: usize,
    k: Option<usize>,
    terminals: usize,
) -> Outcome {
    let mut rng = gen::rng(seed);
    match kind {
        Kind::ThreeDm => emit_files(out, &[("3dm", emit_3dm(&gen::random_3dm(&mut rng, n, m)?))]),
        Kind::Graph => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure::Usage(format!("--p {p} is not a probability")));
            }
            emit_files(out, &[("graph", emit_graph(&gen::gnp(&mut rng, n, p)))])
        }
        Kind::GadgetCds | Kind::GadgetSteiner => {
            let inst = load(need(from, "file.3dm")?, parse_3dm)?;
            let g = if matches!(kind, Kind::GadgetCds) {
                cds_from_3dm(&inst)?
            } else {
                steiner_from_3dm(&inst)?
            };
            let tf = TerminalFile {
                terminals: g.terminals.clone(),
                budget: Some(g.budget),
            };
            let labels: String = g.labels.iter().enumerate().map(|(v, r)| format!("{v} {r}\n")).collect();
            emit_files(
                out,
                &[
                    ("graph", emit_graph(&g.graph)),
                    ("model", emit_model(g.model.as_ref().expect("3DM gadgets carry a model"))),
                    ("terms", emit_terminals(&tf)),
                    ("labels", labels),
                ],
            )
        }
        Kind::GadgetDs => {
            let g = load(need(from, "file.graph")?, parse_graph)?;
            let k = k.ok_or_else(|| Failure::Usage("--k is required for gadget-ds".into()))?;
            let out_g = steiner_from_ds(&g, k)?;
            let tf = TerminalFile {
                terminals: out_g.terminals,
                budget: Some(out_g.budget),
            };
            emit_files(out, &[("graph", emit_graph(&out_g.graph)), ("terms", emit_terminals(&tf))])
        }
        Kind::Subdivision => {
            let g = load(need(from, "file.graph")?, parse_graph)?;
            let w = subdivide(&g);
            let part = |edges: &[(usize, usize)]| emit_graph(&Graph::new(w.sub.n(), edges.iter().copied()).expect("part of a simple graph"));
            let files = [("graph", emit_graph(&w.sub)), ("h1", part(&w.part1)), ("h2", part(&w.part2))];
            match out {
                Some(_) => emit_files(out, &files),
                None => emit_files(None, &files[..1]),
            }
        }
        Kind::Upath => {
            if n == 0 || t == 0 || terminals == 0 || terminals > n {
                return Err(Failure::Usage("need n, t >= 1 and 1 <= terminals <= n".into()));
            }
            let (g, model) = gen::random_up(&mut rng, n, t);
            let pool: Vec<usize> = (0..n).collect();
            let tf = TerminalFile {
                terminals: gen::random_subset(&mut rng, &pool, terminals),
                budget: Some(k.unwrap_or(n)),
            };
            emit_files(
                out,
                &[("graph", emit_graph(&g)), ("model", emit_model(&model)), ("terms", emit_terminals(&tf))],
            )
        }
    }
}

#[derive(Serialize)]
struct SolveOutput {
    algorithm: &'static str,
    instance_digest: String,
    n: usize,
    terminals: VertexSet,
    budget: usize,
    status: Status,
    objective: usize,
    /// An optimum Steiner set, reported whatever the budget.
    steiner_set: VertexSet,
    /// `G[S ∪ X]` connected and `S ∩ X = ∅`, re-checked on the input.
    verified: bool,
    trace: Option<SolveTrace>,
}

fn solve(
    graph: &Path,
    terminals: &Path,
    model: Option<&Path>,
    budget: Option<usize>,
    algo: Algo,
    format: Format,
) -> Outcome {
    let g = load(graph, parse_graph)?;
    let tf = load(terminals, parse_terminals)?;
    tf.terminals.check_range(g.n())?;
    let budget = budget.or(tf.budget).unwrap_or(g.n());
    let model = model.map(|p| load(p, parse_model)).transpose()?;
    if let Some(m) = &model {
        if m.num_vertices() != g.n() {
            return Err(Error::Instance(format!("model has {} vertices, graph has {}", m.num_vertices(), g.n())).into());
        }
    }
    let diam2_ok = model.as_ref().is_some_and(|m| m.is_valid_for(&g, true))
        && matches!(g.diameter(), Some(d) if d <= 2);
    let use_diam2 = match algo {
        Algo::Diam2 => true,
        Algo::Oracle => false,
        Algo::Auto => diam2_ok,
    };
    let (name, optimum, trace, text) = if use_diam2 {
        let model = model.ok_or_else(|| Failure::Core(Error::Instance("--algo diam2 needs --model".into())))?;
        let inst = SteinerInstance::new(g.clone(), model, tf.terminals.clone(), budget)?;
        let text = instance_text(&inst);
        let (_, trace) = diam2::solve(&inst)?;
        ("diam2", trace.witness.clone(), Some(trace), text)
    } else {
        let text = format!("{}{}", emit_graph(&g), emit_terminals(&TerminalFile { terminals: tf.terminals.clone(), budget: Some(budget) }));
        ("oracle", steiner_min(&g, &tf.terminals)?, None, text)
    };
    let set = optimum.set.clone();
    let verified = set.iter().all(|v| !tf.terminals.contains(v))
        && g.is_connected_induced(&set.union(&tf.terminals))?;
    let answer = if optimum.objective <= budget {
        optimum.clone()
    } else {
        Witness::no(optimum.objective)
    };
    let output = SolveOutput {
        algorithm: name,
        instance_digest: digest(&text),
        n: g.n(),
        terminals: tf.terminals,
        budget,
        status: answer.status,
        objective: optimum.objective,
        steiner_set: set,
        verified,
        trace,
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&output).expect("output serialises")),
        Format::Text => {
            println!("algorithm {}", output.algorithm);
            println!("digest {}", output.instance_digest);
            let status = if output.status == Status::Yes { "yes" } else { "no" };
            println!("status {status} (budget {})", output.budget);
            println!("objective {}", output.objective);
            println!("steiner {}", output.steiner_set);
            println!("verified {}", output.verified);
            if let Some(t) = &output.trace {
                println!(
                    "removed twins {:?} simplicial {:?} leafy {:?}",
                    t.removed_twins, t.removed_simplicials, t.removed_leafy
                );
                println!("rule {}", serde_json::to_string(&t.rule).expect("rule serialises").trim_matches('"'));
            }
        }
    }
    if !verified {
        return Err(Failure::Verification("returned Steiner set does not verify".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    target: Target,
    nmax: Option<usize>,
    mmax: Option<usize>,
    seed: u64,
    pairs: Option<usize>,
    out: Option<&Path>,
    format: Format,
    inject_bug: bool,
) -> Outcome {
    let report = match target {
        Target::Gadget => {
            let (nmax, mmax) = (nmax.unwrap_or(2), mmax.unwrap_or(4));
            let mut r = if inject_bug {
                let tamper = |inst: &upath_core::reduction::ThreeDMInstance| {
                    let mut g = steiner_from_3dm(inst)?;
                    let lay = GadgetLayout { n: inst.n, m: inst.m() };
                    let edges = g.graph.edges().into_iter().filter(|&e| e != (lay.a(0), lay.y(0)));
                    g.graph = Graph::new(g.graph.n(), edges)?;
                    Ok(g)
                };
                verify_gadgets_with(nmax, mmax, &tamper)?
            } else {
                verify_gadgets(nmax, mmax)?
            };
            r.merge(verify_ds_gadget(seed, pairs.unwrap_or(200), 8)?);
            r
        }
        Target::Solver => verify_solver(nmax.unwrap_or(8), seed, 500)?,
        Target::Lemmas => verify_lemmas(seed, pairs.unwrap_or(1000), nmax.unwrap_or(9))?,
        Target::Subdivision => verify_subdivision(seed, 100, nmax.unwrap_or(7), pairs.unwrap_or(50), 6)?,
    };
    if let Some(path) = out {
        write_file(path, &report.to_json())?;
    }
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text(true)),
    }
    if !report.passed() {
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        return Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(())
}

fn report(from: &Path, csv: bool) -> Outcome {
    let text = read(from)?;
    let r = VerificationReport::from_json(&text)
        .map_err(|e| Failure::Core(Error::Parse { line: e.line(), msg: format!("{}: {e}", from.display()) }))?;
    print!("{}", if csv { csv_table(&r.rows) } else { markdown_table(&r.rows) });
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate { kind, from, out, seed, n, m, p, t, k, terminals } => {
            generate(kind, &from, out.as_deref(), seed, n, m, p, t, k, terminals)
        }
        Command::Solve { graph, terminals, model, budget, algo, format } => {
            solve(&graph, &terminals, model.as_deref(), budget, algo, format)
        }
        Command::Verify { target, nmax, mmax, seed, pairs, out, format, inject_bug } => {
            verify(target, nmax, mmax, seed, pairs, out.as_deref(), format, inject_bug)
        }
        Command::Report { from, csv } => report(&from, csv),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
