//! Polynomial-time Steiner Tree on undirected path graphs of diameter at
//! most 2.
//!
//! The pipeline:
//!
//! 1. Base cases: one terminal or `G[X]` connected gives 0; two terminals
//!    give the inner vertices of a shortest path.
//! 2. Value-preserving reductions to a joint fixpoint: delete a twin
//!    (needs `|X| >= 3`), delete a non-terminal simplicial vertex, make the
//!    model minimal, delete the leafy terminal at a host leaf that some
//!    other terminal's path also reaches.
//! 3. On the reduced instance the optimum is a minimum clique outside `X`
//!    dominating the leafy vertices. Cliques of a path model share a node
//!    (Helly), so for every host node `t` we solve a set cover of the host
//!    leaves by the paths through `t`; each path holds at most two leaves,
//!    so this is an edge cover computed from a maximum matching.
//!
//! Removed vertices are never Steiner vertices, so a solution of the
//! reduced instance is a solution of the original one under the id map.
//! Every answer is re-verified on the original graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{max_matching, Witness};
use crate::tree_model::TreeModel;

/// `(G, X, κ)` together with a path model of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerInstance {
    pub graph: Graph,
    pub model: TreeModel,
    pub terminals: VertexSet,
    pub budget: usize,
}

impl SteinerInstance {
    /// Checks that the graph is connected, the terminal set is nonempty and
    /// in range, and the model is a valid path model of the graph.
    pub fn new(graph: Graph, model: TreeModel, terminals: VertexSet, budget: usize) -> Result<Self> {
        terminals.check_range(graph.n())?;
        if terminals.is_empty() {
            return Err(Error::instance("terminal set is empty"));
        }
        if !graph.is_connected() {
            return Err(Error::instance("graph is disconnected"));
        }
        let report = model.validate(&graph, true)?;
        if let Some(c) = report.failures().next() {
            return Err(Error::instance(format!("tree model rejected ({}): {}", c.name, c.detail)));
        }
        Ok(SteinerInstance {
            graph,
            model,
            terminals,
            budget,
        })
    }

    /// Instance without `gone`; surviving vertices renumbered in increasing
    /// order. Returns the new-to-old id map.
    fn without(&self, gone: &VertexSet) -> (SteinerInstance, Vec<usize>) {
        let (graph, map) = self.graph.remove_vertices(gone);
        let mut new_id = vec![usize::MAX; self.graph.n()];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let terminals = self
            .terminals
            .iter()
            .filter(|&v| !gone.contains(v))
            .map(|v| new_id[v])
            .collect();
        let inst = SteinerInstance {
            graph,
            model: self.model.remove_vertices(gone),
            terminals,
            budget: self.budget,
        };
        (inst, map)
    }

    fn terminals_connected(&self) -> bool {
        self.graph
            .is_connected_induced(&self.terminals)
            .expect("terminals are in range")
    }
}

/// Result of one reduction pass: the reduced instance, the deleted vertices
/// (ids of the input instance) and the map from reduced ids to input ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub instance: SteinerInstance,
    pub removed: Vec<usize>,
    pub map: Vec<usize>,
}

impl Reduction {
    fn identity(inst: &SteinerInstance) -> Self {
        Reduction {
            instance: inst.clone(),
            removed: Vec::new(),
            map: (0..inst.graph.n()).collect(),
        }
    }

    /// Deletes `v` (a current id) and records it under its input id.
    fn delete(&mut self, v: usize) {
        let (next, step) = self.instance.without(&VertexSet::new([v]));
        self.removed.push(self.map[v]);
        self.map = step.iter().map(|&i| self.map[i]).collect();
        self.instance = next;
    }
}

/// Twin to delete first, if any: among the lexicographically first twin
/// pair, the non-terminal when exactly one of the two is a terminal, the
/// larger id otherwise.
fn twin_victim(inst: &SteinerInstance) -> Option<usize> {
    let pair = inst.graph.twins().into_iter().next()?;
    let (tu, tv) = (inst.terminals.contains(pair.u), inst.terminals.contains(pair.v));
    Some(if tu && !tv { pair.v } else if tv && !tu { pair.u } else { pair.v })
}

/// Deletes twins while `|X| >= 3` and some twin pair is left.
pub fn reduce_twins(inst: &SteinerInstance) -> Reduction {
    let mut red = Reduction::identity(inst);
    while red.instance.terminals.len() >= 3 {
        let Some(v) = twin_victim(&red.instance) else {
            break;
        };
        red.delete(v);
    }
    red
}

fn simplicial_victim(inst: &SteinerInstance) -> Option<usize> {
    (0..inst.graph.n()).find(|&v| !inst.terminals.contains(v) && inst.graph.is_simplicial(v))
}

/// Deletes non-terminal simplicial vertices, lowest id first, until none
/// is left.
pub fn reduce_simplicial(inst: &SteinerInstance) -> Reduction {
    let mut red = Reduction::identity(inst);
    while let Some(v) = simplicial_victim(&red.instance) {
        red.delete(v);
    }
    red
}

fn leafy_preconditions(inst: &SteinerInstance) -> Result<()> {
    if !inst.model.is_minimal() {
        return Err(Error::contract("tree model is not minimal"));
    }
    let leafy = inst.model.leafy_vertices();
    if !leafy.leafy.is_subset(&inst.terminals) {
        return Err(Error::contract("some leafy vertex is not a terminal"));
    }
    Ok(())
}

/// Leafy vertex to delete: for the smallest non-leafy terminal whose path
/// reaches a host leaf, the leafy vertex sitting at that leaf.
fn leafy_victim(inst: &SteinerInstance) -> Result<Option<usize>> {
    let report = inst.model.leafy_vertices();
    let leaves = inst.model.host_leaves();
    for x in inst.terminals.iter() {
        if report.leafy.contains(x) {
            continue;
        }
        let Some(&leaf) = leaves.iter().find(|&&l| inst.model.nodes_of(x).contains(l)) else {
            continue;
        };
        let at_leaf: Vec<usize> = report
            .leaf_of
            .iter()
            .filter(|&(_, &l)| l == leaf)
            .map(|(&u, _)| u)
            .collect();
        // Without twins the leafy vertex at a leaf is unique; with twins any
        // of them may go, the smallest is taken.
        return match at_leaf.first() {
            Some(&u) => Ok(Some(u)),
            None => Err(Error::contract(format!("host leaf {leaf} carries no leafy vertex"))),
        };
    }
    Ok(None)
}

/// Deletes leafy terminals at host leaves shared with another terminal,
/// re-minimalising the model after each deletion, for as long as the
/// preconditions (minimal model, leafy vertices all terminals) keep
/// holding. The deleted vertex is simplicial and adjacent to a remaining
/// terminal, so twins do not affect soundness.
pub fn reduce_leafy(inst: &SteinerInstance) -> Result<Reduction> {
    leafy_preconditions(inst)?;
    let mut red = Reduction::identity(inst);
    while let Some(u) = leafy_victim(&red.instance)? {
        red.delete(u);
        red.instance.model = red.instance.model.make_minimal()?;
        if leafy_preconditions(&red.instance).is_err() {
            break;
        }
    }
    Ok(red)
}

/// Minimum number of cover sets needed for `needed` (a leaf mask), where
/// each candidate covers the leaves in its mask; `None` if some leaf is
/// uncoverable. Every mask holds at most two leaves.
fn min_leaf_cover(needed: u64, covers: &[u64]) -> Option<usize> {
    let reachable = covers.iter().fold(0, |acc, &c| acc | c);
    if needed & !reachable != 0 {
        return None;
    }
    let leaves: Vec<usize> = crate::graph::bits(needed).collect();
    let mut pairs = std::collections::BTreeSet::new();
    for &c in covers {
        let hit = c & needed;
        if hit.count_ones() == 2 {
            let a = leaves.binary_search(&(hit.trailing_zeros() as usize)).unwrap();
            let b = leaves.binary_search(&(63 - hit.leading_zeros() as usize)).unwrap();
            pairs.insert((a, b));
        }
    }
    let pair_graph = Graph::new(leaves.len(), pairs).expect("pairs are distinct");
    Some(leaves.len() - max_matching(&pair_graph).len())
}

/// Lexicographically smallest minimum cover using candidates in the given
/// (increasing id) order.
fn lex_min_cover(needed: u64, cands: &[(usize, u64)]) -> Option<Vec<usize>> {
    let covers: Vec<u64> = cands.iter().map(|c| c.1).collect();
    let best = min_leaf_cover(needed, &covers)?;
    let mut chosen = Vec::with_capacity(best);
    let mut left = needed;
    for (i, &(v, mask)) in cands.iter().enumerate() {
        if chosen.len() == best {
            break;
        }
        let rest = &covers[i + 1..];
        if min_leaf_cover(left & !mask, rest) == Some(best - chosen.len() - 1) {
            chosen.push(v);
            left &= !mask;
        }
    }
    debug_assert_eq!(left, 0);
    Some(chosen)
}

fn core_preconditions(inst: &SteinerInstance) -> Result<()> {
    leafy_preconditions(inst)?;
    if let Some(t) = inst.graph.twins().first() {
        return Err(Error::contract(format!("graph has twins {} and {}", t.u, t.v)));
    }
    if inst.terminals.len() < 3 {
        return Err(Error::contract("fewer than three terminals"));
    }
    if inst.terminals_connected() {
        return Err(Error::contract("terminals already induce a connected graph"));
    }
    if !matches!(inst.graph.diameter(), Some(d) if d <= 2) {
        return Err(Error::contract("diameter exceeds 2"));
    }
    if leafy_victim(inst)?.is_some() {
        return Err(Error::contract("a leafy reduction still applies"));
    }
    if inst.model.host_leaves().len() > 64 {
        return Err(Error::Size {
            what: "host leaves",
            actual: inst.model.host_leaves().len(),
            limit: 64,
        });
    }
    Ok(())
}

/// Minimum clique `S ⊆ V \ X` dominating the leafy vertices, on a fully
/// reduced instance, together with the smallest host node lying on every
/// path of `S`. Ties go to the lexicographically smallest `S`.
pub fn min_clique_dominating_leafy(inst: &SteinerInstance) -> Result<(Witness, Option<usize>)> {
    core_preconditions(inst)?;
    let model = &inst.model;
    let leaves = model.host_leaves();
    let leaf_bit = |u: usize| -> u64 {
        leaves
            .iter()
            .enumerate()
            .filter(|&(_, &l)| model.nodes_of(u).contains(l))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };
    let needed = if leaves.len() == 64 {
        u64::MAX
    } else {
        (1u64 << leaves.len()) - 1
    };
    let mut best: Option<(Vec<usize>, usize)> = None;
    for t in 0..model.num_nodes() {
        let cands: Vec<(usize, u64)> = model
            .node_set(t)?
            .iter()
            .filter(|&u| !inst.terminals.contains(u))
            .map(|u| (u, leaf_bit(u)))
            .collect();
        let Some(cover) = lex_min_cover(needed, &cands) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((s, _)) => (cover.len(), &cover) < (s.len(), s),
        };
        if better {
            best = Some((cover, t));
        }
    }
    Ok(match best {
        Some((s, t)) => (Witness::yes(VertexSet::new(s)), Some(t)),
        None => (Witness::no(inst.graph.n() + 1), None),
    })
}

/// Which rule produced the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `|X| = 1` or `G[X]` connected.
    TerminalsConnected,
    /// Two terminals: inner vertices of a shortest path.
    TwoTerminals,
    /// Clique cover of the host leaves.
    CliqueCover,
}

/// Audit trail of [`solve`]. Vertex ids refer to the original instance;
/// `chosen_node` refers to the host of the final reduced model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub removed_twins: Vec<usize>,
    pub removed_simplicials: Vec<usize>,
    pub removed_leafy: Vec<usize>,
    pub rule: Rule,
    pub chosen_node: Option<usize>,
    /// The optimum in original ids, regardless of the budget.
    pub witness: Witness,
    /// Surviving vertices (original ids) of the reduced instance.
    pub kept: VertexSet,
    /// The reduced instance the final rule ran on (local ids; `kept` maps
    /// them back).
    #[serde(skip)]
    pub reduced: Option<SteinerInstance>,
}

impl SolveTrace {
    pub fn removed(&self) -> VertexSet {
        self.removed_twins
            .iter()
            .chain(&self.removed_simplicials)
            .chain(&self.removed_leafy)
            .copied()
            .collect()
    }

    /// Deletes every recorded removal from `inst` at once; the result has
    /// the same graph and terminals as the reduced instance.
    pub fn replay(&self, inst: &SteinerInstance) -> (Graph, VertexSet) {
        let (g, map) = inst.graph.remove_vertices(&self.removed());
        let mut new_id = vec![usize::MAX; inst.graph.n()];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let x = inst
            .terminals
            .iter()
            .filter(|&v| new_id[v] != usize::MAX)
            .map(|v| new_id[v])
            .collect();
        (g, x)
    }
}

/// Exact Steiner Tree on an undirected path graph of diameter at most 2.
///
/// The returned witness carries the exact optimum as objective; its status
/// is `Yes` (with the Steiner set) iff the optimum is within the budget.
pub fn solve(inst: &SteinerInstance) -> Result<(Witness, SolveTrace)> {
    if inst.terminals.is_empty() {
        return Err(Error::instance("terminal set is empty"));
    }
    if !inst.graph.is_connected() {
        return Err(Error::instance("graph is disconnected"));
    }
    match inst.graph.diameter() {
        Some(d) if d <= 2 => {}
        Some(d) => return Err(Error::Class(format!("diameter {d} exceeds 2"))),
        None => unreachable!("connected graphs have finite diameter"),
    }

    let mut red = Reduction::identity(inst);
    let (mut twins, mut simplicials, mut leafy) = (Vec::new(), Vec::new(), Vec::new());
    let (local, rule, chosen_node) = loop {
        let cur = &red.instance;
        if cur.terminals.len() == 1 || cur.terminals_connected() {
            break (VertexSet::empty(), Rule::TerminalsConnected, None);
        }
        if let [s, t] = cur.terminals.as_slice() {
            let path = cur.graph.shortest_path(*s, *t).expect("graph is connected");
            let inner = VertexSet::new(path[1..path.len() - 1].iter().copied());
            break (inner, Rule::TwoTerminals, None);
        }
        if let Some(v) = twin_victim(cur) {
            twins.push(red.map[v]);
            red.delete(v);
            continue;
        }
        if let Some(v) = simplicial_victim(cur) {
            simplicials.push(red.map[v]);
            red.delete(v);
            continue;
        }
        red.instance.model = red.instance.model.make_minimal()?;
        if let Some(u) = leafy_victim(&red.instance)? {
            leafy.push(red.map[u]);
            red.delete(u);
            continue;
        }
        let (w, node) = min_clique_dominating_leafy(&red.instance)?;
        if !w.is_yes() {
            return Err(Error::integrity("no clique dominates the leafy vertices"));
        }
        break (w.set, Rule::CliqueCover, node);
    };

    let steiner = local.map(&red.map);
    if steiner.iter().any(|v| inst.terminals.contains(v))
        || !inst.graph.is_connected_induced(&steiner.union(&inst.terminals))?
    {
        return Err(Error::integrity(format!(
            "solver produced an infeasible Steiner set {steiner}"
        )));
    }
    let optimum = Witness::yes(steiner);
    let answer = if optimum.objective <= inst.budget {
        optimum.clone()
    } else {
        Witness::no(optimum.objective)
    };
    let trace = SolveTrace {
        removed_twins: twins,
        removed_simplicials: simplicials,
        removed_leafy: leafy,
        rule,
        chosen_node,
        witness: optimum,
        kept: VertexSet::new(red.map.iter().copied()),
        reduced: Some(red.instance),
    };
    Ok((answer, trace))
}

/// Exchange step behind the clique argument: for `u, v ∈ S` non-adjacent
/// and `y, z` adjacent with `N(u) ∪ N(v) ⊆ N(y) ∪ N(z)`, returns
/// `S' = ((S \ {u, v}) ∪ {y, z}) \ X`. `None` when the hypotheses fail.
pub fn exchange(
    g: &Graph,
    terminals: &VertexSet,
    s: &VertexSet,
    (u, v): (usize, usize),
    (y, z): (usize, usize),
) -> Option<VertexSet> {
    if u == v || !s.contains(u) || !s.contains(v) || g.has_edge(u, v) || !g.has_edge(y, z) {
        return None;
    }
    let covered = |w: &usize| g.has_edge(y, *w) || g.has_edge(z, *w);
    if !g.adjacent(u).iter().chain(g.adjacent(v)).all(covered) {
        return None;
    }
    let swapped = s
        .difference(&VertexSet::new([u, v]))
        .union(&VertexSet::new([y, z]))
        .difference(terminals);
    Some(swapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::oracle::steiner_min;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    /// `K_{1,3}`: centre c=0, a=1, b=2, d=3 on host path t0–t1–t2.
    fn claw(terminals: &[usize]) -> SteinerInstance {
        let model = TreeModel::new(
            Graph::path(3),
            vec![set(&[0, 1, 2]), set(&[0]), set(&[2]), set(&[1])],
        )
        .unwrap();
        SteinerInstance::new(Graph::star(3), model, set(terminals), 3).unwrap()
    }

    fn st(inst: &SteinerInstance) -> usize {
        steiner_min(&inst.graph, &inst.terminals).unwrap().objective
    }

    #[test]
    fn instance_validation() {
        let model = TreeModel::new(Graph::empty(1), vec![set(&[0]); 2]).unwrap();
        assert!(SteinerInstance::new(Graph::complete(2), model.clone(), set(&[]), 1).is_err());
        assert!(SteinerInstance::new(Graph::empty(2), model.clone(), set(&[0]), 1).is_err());
        assert!(SteinerInstance::new(Graph::complete(2), model, set(&[0]), 1).is_ok());
    }

    #[test]
    fn base_cases() {
        let (w, trace) = solve(&claw(&[0, 1])).unwrap();
        assert_eq!((w.objective, trace.rule), (0, Rule::TerminalsConnected));
        let (w, trace) = solve(&claw(&[1, 2])).unwrap();
        assert_eq!((w.objective, w.set, trace.rule), (1, set(&[0]), Rule::TwoTerminals));
    }

    #[test]
    fn claw_with_leaf_terminals() {
        let (w, trace) = solve(&claw(&[1, 2, 3])).unwrap();
        assert_eq!((w.objective, w.set.clone()), (1, set(&[0])));
        // d (vertex 3) and a, b are twins in K_{1,3}; twin deletion leaves
        // two terminals.
        assert!(!trace.removed_twins.is_empty());
        assert_eq!(w.objective, st(&claw(&[1, 2, 3])));
    }

    #[test]
    fn reduce_twins_drops_duplicate_non_terminal() {
        // Cliques {0,1,2} and {1,2,3,4}: closed twins 1, 2 and 3, 4.
        let g = Graph::new(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        let model = crate::tree_model::search_model(&g, true, 8).unwrap().unwrap();
        let inst = SteinerInstance::new(g, model, set(&[0, 3, 4]), 5).unwrap();
        let red = reduce_twins(&inst);
        assert_eq!(red.removed, vec![2, 4]);
        assert_eq!(st(&inst), st(&red.instance));
    }

    #[test]
    fn reduce_twins_keeps_a_terminal_twin() {
        // K_4 minus edge {2,3}; 0 and 1 are closed twins, both terminals,
        // plus terminal pendants 4 at 2 and 5 at 3.
        let mut b = GraphBuilder::new(6);
        b.add_clique([0, 1, 2]).add_clique([0, 1, 3]).add_edge(2, 4).add_edge(3, 5);
        let g = b.build();
        let model = crate::tree_model::search_model(&g, true, 8).unwrap().unwrap();
        let inst = SteinerInstance::new(g, model, set(&[0, 1, 4, 5]), 5).unwrap();
        let red = reduce_twins(&inst);
        assert_eq!(red.removed, vec![1]);
        assert_eq!(red.instance.terminals.len(), 3);
        assert_eq!(st(&inst), st(&red.instance));
    }

    #[test]
    fn twin_free_is_identity() {
        let g = Graph::path(4);
        let model = crate::tree_model::search_model(&g, true, 8).unwrap().unwrap();
        let inst = SteinerInstance::new(g, model, set(&[0, 2, 3]), 5).unwrap();
        assert_eq!(reduce_twins(&inst), Reduction::identity(&inst));
    }

    #[test]
    fn reduce_simplicial_cascade() {
        // Path 0–1–2–3 with terminal set {1, 2}... extend: 4 pendant at 0.
        // Deleting 4 makes 0 simplicial, then 0 goes too.
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (0, 4)]).unwrap();
        let model = crate::tree_model::search_model(&g, true, 8).unwrap().unwrap();
        let inst = SteinerInstance::new(g, model, set(&[1, 3]), 5).unwrap();
        let red = reduce_simplicial(&inst);
        assert_eq!(red.removed, vec![4, 0]);
        assert_eq!(st(&inst), st(&red.instance));
        assert_eq!(reduce_simplicial(&red.instance).removed, Vec::<usize>::new());
    }

    #[test]
    fn reduce_leafy_rejects_unreduced_input() {
        // Host path with a contractible edge.
        let model = TreeModel::new(Graph::path(2), vec![set(&[0]), set(&[0, 1])]).unwrap();
        let inst = SteinerInstance::new(Graph::complete(2), model, set(&[0, 1]), 1).unwrap();
        assert!(matches!(reduce_leafy(&inst), Err(Error::Contract(_))));
        // Non-terminal leafy vertex b.
        assert!(matches!(reduce_leafy(&claw(&[0, 1, 3])), Err(Error::Contract(_))));
    }

    #[test]
    fn reduce_leafy_on_claw_with_centre_terminal() {
        let inst = claw(&[0, 1, 2, 3]);
        let red = reduce_leafy(&inst).unwrap();
        // a goes first; contracting its leaf exposes d at a new leaf, which
        // goes next and leaves a single host node.
        assert_eq!(red.removed, vec![1, 3]);
        assert_eq!(red.instance.model.num_nodes(), 1);
        assert_eq!(st(&red.instance), 0);
        assert_eq!(st(&inst), 0);
    }

    #[test]
    fn exchange_hypotheses() {
        let g = Graph::path(5);
        let x = set(&[0, 4]);
        let s = set(&[1, 2, 3]);
        assert_eq!(exchange(&g, &x, &s, (1, 3), (1, 2)), None);
        assert_eq!(exchange(&g, &x, &s, (1, 2), (1, 2)), None);
        let k = Graph::complete(4);
        let s = set(&[1, 2]);
        assert_eq!(exchange(&k, &set(&[0]), &s, (1, 2), (1, 3)), None);
    }

    #[test]
    fn class_error_on_diameter_three() {
        let g = Graph::path(4);
        let model = crate::tree_model::search_model(&g, true, 8).unwrap().unwrap();
        let inst = SteinerInstance::new(g, model, set(&[0, 3]), 5).unwrap();
        assert!(matches!(solve(&inst), Err(Error::Class(_))));
    }
}
