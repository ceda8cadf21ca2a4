//! Verification sweeps: every construction and the diameter-2 solver
//! checked against the exact oracles.
//!
//! Sweeps fan out over rayon but collect in input order, and randomness is
//! drawn per trial from `ChaCha8Rng::seed_from_u64(seed)` with the stream
//! set to `(tag << 32) | trial`, so reports are byte-identical for a fixed
//! seed regardless of thread count.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::diam2_up_graphs;
use crate::diam2::{self, exchange, Rule, SteinerInstance};
use crate::error::{Error, Result};
use crate::gen;
use crate::graph::{Graph, VertexSet};
use crate::io::{emit_3dm, emit_graph, emit_model, emit_terminals, TerminalFile};
use crate::oracle::{cds_min, ds_min, isomorphic, steiner_min, three_dm};
use crate::reduction::{
    is_star_forest, iso_transport, steiner_from_3dm, steiner_from_ds, subdivide, GadgetLayout,
    GadgetOutput, ThreeDMInstance,
};
use crate::report::{digest, GadgetRow, VerificationReport};
use crate::tree_model::search_model;

/// Failing details quoted in a check before truncation.
const SHOWN_FAILURES: usize = 10;

fn trial_rng(seed: u64, tag: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag << 32 | trial);
    rng
}

fn summarize(failures: &[String], ok: &str) -> String {
    if failures.is_empty() {
        return ok.to_string();
    }
    let mut out = format!("{} failures", failures.len());
    for f in failures.iter().take(SHOWN_FAILURES) {
        write!(out, "; {f}").unwrap();
    }
    out
}

fn for_each_combination(len: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=len - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, len, k, cur, f);
            cur.pop();
        }
    }
    if k <= len {
        rec(0, len, k, &mut Vec::with_capacity(k), f);
    }
}

/// Every 3DM instance with `1 ≤ n ≤ nmax` and `1 ≤ m ≤ mmax`: all triple
/// subsets of `[n]^3`, ordered by `n`, then `m`, then lexicographically.
pub fn all_3dm_instances(nmax: usize, mmax: usize) -> Vec<ThreeDMInstance> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let all: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|p| (0..n).flat_map(move |q| (0..n).map(move |r| (p, q, r))))
            .collect();
        for m in 1..=mmax.min(all.len()) {
            for_each_combination(all.len(), m, &mut |idx| {
                let triples = idx.iter().map(|&i| all[i]).collect();
                out.push(ThreeDMInstance::new(n, triples).expect("distinct in-range triples"));
            });
        }
    }
    out
}

/// Structural problems of a Steiner gadget for `inst`.
fn gadget_structure(inst: &ThreeDMInstance, out: &GadgetOutput) -> Result<Vec<String>> {
    let lay = GadgetLayout { n: inst.n, m: inst.m() };
    let g = &out.graph;
    let mut problems = Vec::new();
    if g.n() != lay.num_vertices() {
        problems.push(format!("{} vertices, expected {}", g.n(), lay.num_vertices()));
        return Ok(problems);
    }
    match &out.model {
        None => problems.push("no tree model".into()),
        Some(model) => {
            let report = model.validate(g, true)?;
            problems.extend(report.failures().map(|c| format!("model {}: {}", c.name, c.detail)));
            if model.num_nodes() != lay.num_nodes() {
                problems.push(format!("model has {} nodes, expected {}", model.num_nodes(), lay.num_nodes()));
            }
        }
    }
    if out.budget != 2 * inst.m() + inst.n {
        problems.push(format!("budget {}", out.budget));
    }
    if out.terminals != g.simplicial_vertices() || !g.is_independent(&out.terminals) {
        problems.push("terminals are not the independent simplicial set".into());
    }
    if !inst.covers_universe() {
        if g.is_connected() {
            problems.push("uncovered element but connected gadget".into());
        }
        return Ok(problems);
    }
    if !matches!(g.diameter(), Some(d) if d <= 3) {
        problems.push(format!("diameter {:?}", g.diameter()));
    }
    let k = lay.clique_k();
    if !g.is_clique(&k) || !g.is_dominating(&k)? {
        problems.push("K is not a dominating clique".into());
    }
    for j in 0..inst.m() {
        let separates = |cut: &[usize], s: usize, t: usize| {
            let (h, map) = g.remove_vertices(&VertexSet::new(cut.iter().copied()));
            let pos = |v: usize| map.iter().position(|&w| w == v).expect("kept vertex");
            h.shortest_path(pos(s), pos(t)).is_none()
        };
        if !separates(&[lay.a(j), lay.b(j), lay.x(j)], lay.c(j), lay.y(j)) {
            problems.push(format!("{{a,b,x}}_{j} does not separate c_{j} from y_{j}"));
        }
        if !separates(&[lay.c(j), lay.x(j)], lay.z3(j), lay.y(j)) {
            problems.push(format!("{{c,x}}_{j} does not separate z3_{j} from y_{j}"));
        }
    }
    Ok(problems)
}

fn gadget_row(inst: &ThreeDMInstance, out: &GadgetOutput) -> Result<GadgetRow> {
    let g = &out.graph;
    let bound = 2 * inst.m() + inst.n;
    let matching = three_dm(inst)?.is_yes();
    let (cds, steiner) = if g.is_connected() {
        (
            Some(cds_min(g)?.objective),
            Some(steiner_min(g, &out.terminals)?.objective),
        )
    } else {
        (None, None)
    };
    let within = |v: Option<usize>| v.is_some_and(|v| v <= bound);
    Ok(GadgetRow {
        digest: digest(&emit_3dm(inst)),
        n: inst.n,
        m: inst.m(),
        matching,
        cds,
        steiner,
        bound,
        agree: matching == within(cds) && matching == within(steiner),
    })
}

/// Gadget sweep with the default construction.
pub fn verify_gadgets(nmax: usize, mmax: usize) -> Result<VerificationReport> {
    verify_gadgets_with(nmax, mmax, &steiner_from_3dm)
}

/// Gadget sweep over every instance within bounds, building gadgets with
/// `build` (a hook for falsifiability tests). Checks the 3DM / CDS /
/// Steiner equivalence against the `2m + n` threshold and the structural
/// properties; one table row per instance.
pub fn verify_gadgets_with(
    nmax: usize,
    mmax: usize,
    build: &(dyn Fn(&ThreeDMInstance) -> Result<GadgetOutput> + Sync),
) -> Result<VerificationReport> {
    let start = Instant::now();
    let instances = all_3dm_instances(nmax, mmax);
    let evals: Vec<(GadgetRow, Vec<String>)> = instances
        .par_iter()
        .map(|inst| {
            let out = build(inst)?;
            Ok((gadget_row(inst, &out)?, gadget_structure(inst, &out)?))
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(digest(&format!("gadget nmax={nmax} mmax={mmax}")));
    let connected = evals.iter().filter(|(r, _)| r.cds.is_some()).count();
    let yes = evals.iter().filter(|(r, _)| r.matching).count();
    let disagree: Vec<String> = evals
        .iter()
        .filter(|(r, _)| !r.agree)
        .map(|(r, _)| {
            format!(
                "instance {}: 3dm {} cds {:?} steiner {:?} bound {}",
                r.digest, r.matching, r.cds, r.steiner, r.bound
            )
        })
        .collect();
    report.check(
        "gadget-equivalence",
        disagree.is_empty() && !evals.is_empty(),
        summarize(
            &disagree,
            &format!("{} instances, {connected} connected gadgets, {yes} with a matching", evals.len()),
        ),
    );
    let broken: Vec<String> = evals
        .iter()
        .filter(|(_, p)| !p.is_empty())
        .map(|(r, p)| format!("instance {}: {}", r.digest, p.join(", ")))
        .collect();
    report.check(
        "gadget-structure",
        broken.is_empty(),
        summarize(&broken, &format!("{} gadgets", evals.len())),
    );
    report.rows = evals.into_iter().map(|(r, _)| r).collect();
    report.rows.sort_by(|a, b| a.digest.cmp(&b.digest));
    report.timings.push(("gadget".into(), start.elapsed()));
    Ok(report)
}

/// Dominating Set to Steiner Tree gadget on `count` seeded random graphs
/// with `1..=nmax` vertices, every budget `k ∈ [1, n]`.
pub fn verify_ds_gadget(seed: u64, count: usize, nmax: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let graphs: Vec<Graph> = (0..count as u64)
        .map(|i| {
            let mut rng = trial_rng(seed, 1, i);
            let n = rng.random_range(1..=nmax.max(1));
            let p = rng.random_range(0.15..0.85);
            gen::gnp(&mut rng, n, p)
        })
        .collect();
    let problems: Vec<Vec<String>> = graphs
        .par_iter()
        .map(|g| {
            let tag = digest(&emit_graph(g));
            let gamma = ds_min(g)?.objective;
            let base = steiner_from_ds(g, 1)?;
            let st = steiner_min(&base.graph, &base.terminals)?.objective;
            let mut out = Vec::new();
            for k in 1..=g.n() {
                let gadget = steiner_from_ds(g, k)?;
                if gadget.graph.n() != 2 * g.n() + 1 {
                    out.push(format!("graph {tag}: {} vertices", gadget.graph.n()));
                }
                if !gadget.graph.is_bipartite() || !gadget.graph.is_independent(&gadget.terminals) {
                    out.push(format!("graph {tag}: gadget not bipartite with independent terminals"));
                }
                if gadget.budget != k {
                    out.push(format!("graph {tag}: budget {} for k = {k}", gadget.budget));
                }
                if (gamma <= k) != (st <= k) {
                    out.push(format!("graph {tag}: k = {k}, domination {gamma}, steiner {st}"));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let failures: Vec<String> = problems.into_iter().flatten().collect();
    let mut report = VerificationReport::new(digest(&format!("ds-gadget seed={seed} count={count} nmax={nmax}")));
    report.check(
        "ds-gadget-equivalence",
        failures.is_empty(),
        summarize(&failures, &format!("{count} graphs, every k in [1, n]")),
    );
    report.timings.push(("ds-gadget".into(), start.elapsed()));
    Ok(report)
}

/// Random double-edge swaps; preserves the degree sequence.
fn degree_preserving_shuffle(rng: &mut ChaCha8Rng, g: &Graph, swaps: usize) -> Graph {
    let mut edges = g.edges();
    for _ in 0..swaps {
        if edges.len() < 2 {
            break;
        }
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        let ((a, b), (c, d)) = (edges[i], edges[j]);
        let (c, d) = if rng.random_bool(0.5) { (c, d) } else { (d, c) };
        let fresh = |u: usize, v: usize, es: &[(usize, usize)]| u != v && !es.contains(&(u.min(v), u.max(v)));
        if i == j || a == c || a == d || b == c || b == d || !fresh(a, d, &edges) || !fresh(c, b, &edges) {
            continue;
        }
        edges[i] = (a.min(d), a.max(d));
        edges[j] = (c.min(b), c.max(b));
    }
    Graph::new(g.n(), edges).expect("swaps keep the graph simple")
}

/// Subdivision suite: star-forest partition on `graphs` random graphs with
/// `1..=nmax_sub` vertices, and isomorphism transport on `pairs` random
/// pairs with `2..=nmax_iso` vertices (relabelled copies, degree-preserving
/// shuffles and independent draws, in rotation).
pub fn verify_subdivision(
    seed: u64,
    graphs: usize,
    nmax_sub: usize,
    pairs: usize,
    nmax_iso: usize,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(digest(&format!(
        "subdivision seed={seed} graphs={graphs} nmax={nmax_sub} pairs={pairs} nmax_iso={nmax_iso}"
    )));
    let failures: Vec<String> = (0..graphs as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(seed, 2, i);
            let n = rng.random_range(1..=nmax_sub.max(1));
            let p = rng.random_range(0.1..0.9);
            let g = gen::gnp(&mut rng, n, p);
            let w = subdivide(&g);
            let ok = w.sub.n() == g.n() + g.m()
                && w.sub.m() == 2 * g.m()
                && w.is_partition()
                && is_star_forest(w.sub.n(), &w.part1)
                && is_star_forest(w.sub.n(), &w.part2);
            (!ok).then(|| format!("graph {}", digest(&emit_graph(&g))))
        })
        .collect();
    report.check(
        "subdivision-star-forests",
        failures.is_empty(),
        summarize(&failures, &format!("{graphs} graphs")),
    );

    let outcomes: Vec<(bool, bool, bool)> = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 3, i);
            let n = rng.random_range(2..=nmax_iso.max(2));
            let p = rng.random_range(0.2..0.8);
            let mut g1 = gen::gnp(&mut rng, n, p);
            let g2 = match i % 3 {
                0 => {
                    let mut perm: Vec<usize> = (0..n).collect();
                    perm.shuffle(&mut rng);
                    g1.relabel(&perm)
                }
                1 => {
                    // Redraw until a degree-preserving shuffle leaves the
                    // isomorphism class.
                    let mut h = degree_preserving_shuffle(&mut rng, &g1, 4 * n);
                    for _ in 0..64 {
                        if !isomorphic(&g1, &h) {
                            break;
                        }
                        let n = rng.random_range(2..=nmax_iso.max(2));
                        let p = rng.random_range(0.3..0.7);
                        g1 = gen::gnp(&mut rng, n, p);
                        h = degree_preserving_shuffle(&mut rng, &g1, 4 * n);
                    }
                    h
                }
                _ => {
                    let p = rng.random_range(0.2..0.8);
                    gen::gnp(&mut rng, n, p)
                }
            };
            let (iso, sub_iso) = iso_transport(&g1, &g2)?;
            let same_degrees = g1.degree_sequence() == g2.degree_sequence();
            Ok((iso, sub_iso, same_degrees && !iso))
        })
        .collect::<Result<_>>()?;
    let mismatched = outcomes.iter().filter(|(a, b, _)| a != b).count();
    let isomorphic = outcomes.iter().filter(|(a, _, _)| *a).count();
    let tricky = outcomes.iter().filter(|(_, _, t)| *t).count();
    report.check(
        "isomorphism-transport",
        mismatched == 0 && tricky > 0,
        format!(
            "{pairs} pairs, {isomorphic} isomorphic, {tricky} non-isomorphic with equal degree sequences, {mismatched} mismatches"
        ),
    );
    report.timings.push(("subdivision".into(), start.elapsed()));
    Ok(report)
}

/// Canonical text of a Steiner instance, for digests.
pub fn instance_text(inst: &SteinerInstance) -> String {
    let tf = TerminalFile {
        terminals: inst.terminals.clone(),
        budget: Some(inst.budget),
    };
    format!("{}{}{}", emit_graph(&inst.graph), emit_model(&inst.model), emit_terminals(&tf))
}

#[derive(Default)]
struct SolverTally {
    instances: usize,
    core: usize,
    failures: [Vec<String>; 5],
}

const SOLVER_CHECKS: [&str; 5] = [
    "solver-agreement",
    "solver-witness",
    "solver-helly",
    "solver-leaf-coverage",
    "solver-trace-replay",
];

fn check_solution(inst: &SteinerInstance, tally: &mut SolverTally) -> Result<()> {
    let tag = || digest(&instance_text(inst));
    tally.instances += 1;
    let (w, trace) = match diam2::solve(inst) {
        Ok(r) => r,
        Err(e) => {
            tally.failures[0].push(format!("instance {}: {e}", tag()));
            return Ok(());
        }
    };
    let expect = steiner_min(&inst.graph, &inst.terminals)?.objective;
    if w.objective != expect {
        tally.failures[0].push(format!("instance {}: solver {} oracle {expect}", tag(), w.objective));
    }
    let s = &trace.witness.set;
    if s.iter().any(|v| inst.terminals.contains(v)) || !inst.graph.is_connected_induced(&s.union(&inst.terminals))? {
        tally.failures[1].push(format!("instance {}: witness {s} infeasible", tag()));
    }
    let reduced = trace.reduced.as_ref().expect("solve records the reduced instance");
    if replay_differs(inst, &trace, reduced) {
        tally.failures[4].push(format!("instance {}: replay differs", tag()));
    }
    if trace.rule != Rule::CliqueCover {
        return Ok(());
    }
    tally.core += 1;
    let local: Vec<usize> = s
        .iter()
        .map(|v| trace.kept.as_slice().binary_search(&v).expect("witness survives reduction"))
        .collect();
    let model = &reduced.model;
    let node = trace.chosen_node.expect("clique rule records a node");
    if !local.iter().all(|&u| model.nodes_of(u).contains(node)) {
        tally.failures[2].push(format!("instance {}: node {node} not on every path", tag()));
    }
    let covered: VertexSet = local.iter().flat_map(|&u| model.nodes_of(u).iter()).collect();
    let leafy = model.leafy_vertices();
    let leaves_ok = leafy.leaf_of.values().all(|&l| covered.contains(l));
    if !leaves_ok || covered.len() != model.num_nodes() {
        tally.failures[3].push(format!("instance {}: paths of S miss host nodes", tag()));
    }
    Ok(())
}

fn replay_differs(inst: &SteinerInstance, trace: &diam2::SolveTrace, reduced: &SteinerInstance) -> bool {
    let (g, x) = trace.replay(inst);
    g != reduced.graph || x != reduced.terminals
}

/// Exhaustive solver sweep: every connected undirected path graph of
/// diameter ≤ 2 with at most `nmax` vertices (up to isomorphism) and every
/// terminal set of size ≥ 2, sampled down to `per_graph` sets per graph
/// when there are more.
pub fn verify_solver(nmax: usize, seed: u64, per_graph: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let levels = diam2_up_graphs(nmax)?;
    let graphs: Vec<&Graph> = levels.iter().flatten().collect();
    let tallies: Vec<SolverTally> = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, &g)| {
            let mut tally = SolverTally::default();
            let model = search_model(g, true, g.n())?
                .ok_or_else(|| Error::integrity("census graph without a path model"))?;
            let n = g.n() as u32;
            let mut masks: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() >= 2).collect();
            if masks.len() > per_graph {
                let mut rng = trial_rng(seed, 4, gi as u64);
                masks = masks.choose_multiple(&mut rng, per_graph).copied().collect();
                masks.sort_unstable();
            }
            for mask in masks {
                let x = VertexSet::from_mask(mask);
                let inst = SteinerInstance::new(g.clone(), model.clone(), x, g.n())?;
                check_solution(&inst, &mut tally)?;
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(digest(&format!("solver nmax={nmax} seed={seed} per_graph={per_graph}")));
    let instances: usize = tallies.iter().map(|t| t.instances).sum();
    let core: usize = tallies.iter().map(|t| t.core).sum();
    let per_n: Vec<usize> = levels.iter().map(Vec::len).collect();
    report.check(
        "solver-coverage",
        instances > 0,
        format!("graphs per n {per_n:?}, {instances} instances, {core} solved by the clique rule"),
    );
    for (i, name) in SOLVER_CHECKS.iter().enumerate() {
        let fails: Vec<String> = tallies.iter().flat_map(|t| t.failures[i].iter().cloned()).collect();
        report.check(*name, fails.is_empty(), summarize(&fails, &format!("{instances} instances")));
    }
    report.timings.push(("solver".into(), start.elapsed()));
    Ok(report)
}

/// Random connected path-graph instance with `4..=nmax` vertices and a
/// random terminal set of size `min_terminals..n`.
fn random_instance(rng: &mut ChaCha8Rng, nmax: usize, min_terminals: usize) -> SteinerInstance {
    let n = rng.random_range(4..=nmax.max(4));
    let t = rng.random_range(2..=6);
    let (g, model) = gen::random_up(rng, n, t);
    let k = rng.random_range(min_terminals.min(n - 1)..n);
    let pool: Vec<usize> = (0..n).collect();
    let x = gen::random_subset(rng, &pool, k.max(1));
    SteinerInstance::new(g, model, x, n).expect("generated instances are valid")
}

/// Twin and simplicial deletions to a joint fixpoint, then a minimal model:
/// the input shape of the leafy reduction.
fn preprocess(mut inst: SteinerInstance) -> Result<SteinerInstance> {
    loop {
        let tw = diam2::reduce_twins(&inst);
        let si = diam2::reduce_simplicial(&tw.instance);
        let done = tw.removed.is_empty() && si.removed.is_empty();
        inst = si.instance;
        if done {
            break;
        }
    }
    inst.model = inst.model.make_minimal()?;
    Ok(inst)
}

enum Trial {
    Skip,
    Pass,
    Fail(String),
}

fn st(inst: &SteinerInstance) -> Result<usize> {
    Ok(steiner_min(&inst.graph, &inst.terminals)?.objective)
}

fn preservation(before: &SteinerInstance, after: &SteinerInstance) -> Result<Trial> {
    let (a, b) = (st(before)?, st(after)?);
    Ok(if a == b {
        Trial::Pass
    } else {
        Trial::Fail(format!("instance {}: {a} before, {b} after", digest(&instance_text(before))))
    })
}

fn lemma_trial(lemma: u64, rng: &mut ChaCha8Rng, nmax: usize) -> Result<Trial> {
    match lemma {
        0 => {
            let inst = random_instance(rng, nmax, 3);
            let red = diam2::reduce_twins(&inst);
            if red.removed.is_empty() {
                return Ok(Trial::Skip);
            }
            preservation(&inst, &red.instance)
        }
        1 => {
            let inst = random_instance(rng, nmax, 1);
            let red = diam2::reduce_simplicial(&inst);
            if red.removed.is_empty() {
                return Ok(Trial::Skip);
            }
            preservation(&inst, &red.instance)
        }
        2 => {
            let inst = preprocess(random_instance(rng, nmax, 1))?;
            let Ok(red) = diam2::reduce_leafy(&inst) else {
                return Ok(Trial::Skip);
            };
            if red.removed.is_empty() {
                return Ok(Trial::Skip);
            }
            preservation(&inst, &red.instance)
        }
        _ => replacement_trial(rng, nmax),
    }
}

/// Random feasible `S`, random admissible exchange; checks that `S'` is
/// feasible again.
fn replacement_trial(rng: &mut ChaCha8Rng, nmax: usize) -> Result<Trial> {
    let inst = random_instance(rng, nmax, 1);
    let (g, x) = (&inst.graph, &inst.terminals);
    let feasible = |s: &VertexSet| g.is_connected_induced(&s.union(x)).expect("in range");
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| !x.contains(v)).collect();
    let mut s = VertexSet::new(order.iter().copied());
    order.shuffle(rng);
    for v in order {
        if rng.random_bool(0.6) {
            let smaller = s.difference(&VertexSet::new([v]));
            if feasible(&smaller) {
                s = smaller;
            }
        }
    }
    let mut moves = Vec::new();
    let members = s.as_slice();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            for (y, z) in g.edges() {
                if exchange(g, x, &s, (u, v), (y, z)).is_some() {
                    moves.push(((u, v), (y, z)));
                }
            }
        }
    }
    let Some(&(uv, yz)) = moves.choose(rng) else {
        return Ok(Trial::Skip);
    };
    let swapped = exchange(g, x, &s, uv, yz).expect("move is admissible");
    Ok(if feasible(&swapped) {
        Trial::Pass
    } else {
        Trial::Fail(format!(
            "instance {}: S = {s}, swap {uv:?} for {yz:?} gives infeasible {swapped}",
            digest(&instance_text(&inst))
        ))
    })
}

const LEMMA_CHECKS: [&str; 4] = [
    "twin-preservation",
    "simplicial-preservation",
    "leafy-preservation",
    "replacement-feasibility",
];

/// Attempts tried per lemma before giving up on finding enough nontrivial
/// trials.
const LEMMA_ATTEMPT_CAP: u64 = 1 << 20;

/// Runs trials for one lemma until `wanted` nontrivial ones are found.
fn run_lemma(lemma: u64, seed: u64, wanted: usize, nmax: usize) -> Result<(usize, u64, Vec<String>)> {
    const BATCH: u64 = 1024;
    let (mut found, mut failures, mut next) = (0, Vec::new(), 0u64);
    while found < wanted && next < LEMMA_ATTEMPT_CAP {
        let outcomes: Vec<Trial> = (next..next + BATCH)
            .into_par_iter()
            .map(|i| lemma_trial(lemma, &mut trial_rng(seed, 8 + lemma, i), nmax))
            .collect::<Result<_>>()?;
        for outcome in outcomes {
            next += 1;
            match outcome {
                Trial::Skip => continue,
                Trial::Pass => {}
                Trial::Fail(msg) => failures.push(msg),
            }
            found += 1;
            if found == wanted {
                break;
            }
        }
    }
    Ok((found, next, failures))
}

/// Reduction and exchange fuzzing: `pairs` nontrivial reduced/original pairs for each of the
/// twin, simplicial and leafy reductions (equal Steiner optima), and `pairs`
/// admissible exchanges (feasibility kept). Instances have `4..=nmax`
/// vertices.
pub fn verify_lemmas(seed: u64, pairs: usize, nmax: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(digest(&format!("lemmas seed={seed} pairs={pairs} nmax={nmax}")));
    for (lemma, name) in LEMMA_CHECKS.iter().enumerate() {
        let (found, tried, failures) = run_lemma(lemma as u64, seed, pairs, nmax)?;
        let ok = format!("{found} nontrivial trials out of {tried} attempts");
        report.check(*name, failures.is_empty() && found == pairs, summarize(&failures, &ok));
    }
    report.timings.push(("lemmas".into(), start.elapsed()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_enumeration_counts() {
        assert_eq!(all_3dm_instances(1, 4).len(), 1);
        // n = 2: C(8,1) + C(8,2) + C(8,3) + C(8,4)
        assert_eq!(all_3dm_instances(2, 4).len(), 1 + 8 + 28 + 56 + 70);
    }

    #[test]
    fn small_gadget_sweep_passes() {
        let r = verify_gadgets(1, 1).unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(r.rows.len(), 1);
        assert_eq!((r.rows[0].cds, r.rows[0].bound), (Some(3), 3));
    }

    #[test]
    fn tampered_gadget_is_caught() {
        let tamper = |inst: &ThreeDMInstance| {
            let mut out = steiner_from_3dm(inst)?;
            let lay = GadgetLayout { n: inst.n, m: inst.m() };
            let edges = out.graph.edges().into_iter().filter(|&e| e != (lay.a(0), lay.y(0)));
            out.graph = Graph::new(out.graph.n(), edges)?;
            Ok(out)
        };
        let r = verify_gadgets_with(1, 1, &tamper).unwrap();
        assert!(!r.passed());
        let d = &r.rows[0].digest;
        assert!(r.failures().any(|c| c.detail.contains(d.as_str())));
    }

    #[test]
    fn small_solver_sweep() {
        let r = verify_solver(5, 1, 500).unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
    }

    #[test]
    fn lemma_sweep_is_deterministic() {
        let a = verify_lemmas(3, 20, 7).unwrap();
        let b = verify_lemmas(3, 20, 7).unwrap();
        assert!(a.passed(), "{}", a.to_text(false));
        assert_eq!(a.to_json(), b.to_json());
    }
}
