//! Tree models `(T, {T_u})`: a host tree plus one connected node set per
//! graph vertex, with adjacency exactly when two node sets meet.
//!
//! A model whose node sets are all paths of the host certifies that the
//! graph is an undirected path graph. This module validates models,
//! contracts them to minimal form, reads off leafy vertices, and searches
//! exhaustively for models of small graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::report::VerificationReport;

/// Largest graph `search_model` accepts unless told otherwise.
pub const SEARCH_VERTEX_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeModel {
    host: Graph,
    assignment: Vec<VertexSet>,
}

/// Leafy vertices: those whose node set is a single host leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafyReport {
    pub leafy: VertexSet,
    pub leaf_of: BTreeMap<usize, usize>,
}

impl TreeModel {
    /// Pairs a host graph with per-vertex node sets. Only node ranges are
    /// checked here; use [`TreeModel::validate`] for the model invariants.
    pub fn new(host: Graph, assignment: Vec<VertexSet>) -> Result<Self> {
        for set in &assignment {
            set.check_range(host.n())?;
        }
        Ok(TreeModel { host, assignment })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn num_nodes(&self) -> usize {
        self.host.n()
    }

    pub fn num_vertices(&self) -> usize {
        self.assignment.len()
    }

    /// Node set `V(T_u)`.
    pub fn nodes_of(&self, u: usize) -> &VertexSet {
        &self.assignment[u]
    }

    pub fn assignment(&self) -> &[VertexSet] {
        &self.assignment
    }

    /// `V_t`: the vertices whose node set contains `t`.
    pub fn node_set(&self, t: usize) -> Result<VertexSet> {
        if t >= self.num_nodes() {
            return Err(Error::Range {
                vertex: t,
                n: self.num_nodes(),
            });
        }
        Ok(self.bag(t))
    }

    fn bag(&self, t: usize) -> VertexSet {
        (0..self.num_vertices())
            .filter(|&u| self.assignment[u].contains(t))
            .collect()
    }

    fn bags(&self) -> Vec<VertexSet> {
        let mut bags = vec![Vec::new(); self.num_nodes()];
        for (u, set) in self.assignment.iter().enumerate() {
            for t in set.iter() {
                bags[t].push(u);
            }
        }
        bags.into_iter().map(VertexSet::new).collect()
    }

    /// Graph whose edges are the pairs with intersecting node sets.
    pub fn realized_graph(&self) -> Graph {
        let mut b = GraphBuilder::new(self.num_vertices());
        for bag in self.bags() {
            b.add_clique(bag.iter());
        }
        b.build()
    }

    pub fn host_leaves(&self) -> Vec<usize> {
        if self.num_nodes() < 2 {
            return Vec::new();
        }
        (0..self.num_nodes())
            .filter(|&t| self.host.degree(t) == 1)
            .collect()
    }

    fn host_is_tree(&self) -> bool {
        self.num_nodes() >= 1 && self.host.m() + 1 == self.num_nodes() && self.host.is_connected()
    }

    fn is_subtree(&self, set: &VertexSet) -> bool {
        !set.is_empty() && self.host.is_connected_induced(set).unwrap_or(false)
    }

    fn is_host_path(&self, set: &VertexSet) -> bool {
        self.is_subtree(set)
            && set.iter().all(|t| {
                self.host
                    .adjacent(t)
                    .iter()
                    .filter(|&&s| set.contains(s))
                    .count()
                    <= 2
            })
    }

    /// Nodes of `T_u` in path order starting from the smaller end, or
    /// `None` if `T_u` is not a path.
    pub fn path_order(&self, u: usize) -> Option<Vec<usize>> {
        let set = &self.assignment[u];
        if !self.is_host_path(set) {
            return None;
        }
        let inner = |t: usize| -> Vec<usize> {
            self.host
                .adjacent(t)
                .iter()
                .copied()
                .filter(|&s| set.contains(s))
                .collect()
        };
        let start = set.iter().find(|&t| inner(t).len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = inner(cur).iter().find(|&&s| s != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// Structural problems independent of any target graph.
    fn structure_problems(&self, require_paths: bool) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !self.host_is_tree() {
            out.push(("host-tree", "host is not a tree".to_string()));
            return out;
        }
        for (u, set) in self.assignment.iter().enumerate() {
            if !self.is_subtree(set) {
                out.push(("subtrees", format!("vertex {u}: node set {set} is not a subtree")));
            } else if require_paths && !self.is_host_path(set) {
                out.push(("paths", format!("vertex {u}: node set {set} is not a path")));
            }
        }
        out
    }

    /// Checks every model invariant against `g`: host is a tree, each node
    /// set is a subtree (a path when `require_paths`), and the realized
    /// graph equals `g`.
    pub fn validate(&self, g: &Graph, require_paths: bool) -> Result<VerificationReport> {
        if g.n() != self.num_vertices() {
            return Err(Error::instance(format!(
                "model covers {} vertices, graph has {}",
                self.num_vertices(),
                g.n()
            )));
        }
        let mut report = VerificationReport::new("");
        let problems = self.structure_problems(require_paths);
        let host_ok = !problems.iter().any(|(k, _)| *k == "host-tree");
        report.check(
            "host-tree",
            host_ok,
            if host_ok { String::new() } else { "host is not a tree".into() },
        );
        if !host_ok {
            return Ok(report);
        }
        for kind in ["subtrees", "paths"] {
            if kind == "paths" && !require_paths {
                continue;
            }
            let details: Vec<&str> = problems
                .iter()
                .filter(|(k, _)| *k == kind)
                .map(|(_, d)| d.as_str())
                .collect();
            report.check(kind, details.is_empty(), details.join("; "));
        }
        let realized = self.realized_graph();
        let mismatch = (0..g.n())
            .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
            .find(|&(u, v)| realized.has_edge(u, v) != g.has_edge(u, v));
        report.check(
            "intersection-law",
            mismatch.is_none(),
            match mismatch {
                None => String::new(),
                Some((u, v)) if g.has_edge(u, v) => {
                    format!("edge {u}-{v} of the graph has disjoint node sets")
                }
                Some((u, v)) => format!("node sets of {u} and {v} meet but {u}-{v} is no edge"),
            },
        );
        Ok(report)
    }

    pub fn is_valid_for(&self, g: &Graph, require_paths: bool) -> bool {
        self.validate(g, require_paths)
            .map(|r| r.passed())
            .unwrap_or(false)
    }

    /// First host edge `(t, t')`, scanning `t` then `t'` upwards, with
    /// `V_t ⊆ V_t'`.
    pub fn contractible_edge(&self) -> Option<(usize, usize)> {
        let bags = self.bags();
        (0..self.num_nodes()).find_map(|t| {
            self.host
                .adjacent(t)
                .iter()
                .find(|&&s| bags[t].is_subset(&bags[s]))
                .map(|&s| (t, s))
        })
    }

    pub fn is_minimal(&self) -> bool {
        self.contractible_edge().is_none()
    }

    /// Contracts host edge `t`–`keep` into `keep` and renumbers nodes above
    /// `t` down by one.
    fn contract(&self, t: usize, keep: usize) -> TreeModel {
        let rename = |s: usize| -> usize {
            let s = if s == t { keep } else { s };
            if s > t {
                s - 1
            } else {
                s
            }
        };
        let mut b = GraphBuilder::new(self.num_nodes() - 1);
        for (a, c) in self.host.edges() {
            let (a, c) = (rename(a), rename(c));
            if a != c {
                b.add_edge(a, c);
            }
        }
        let assignment = self
            .assignment
            .iter()
            .map(|set| VertexSet::new(set.iter().map(rename)))
            .collect();
        TreeModel {
            host: b.build(),
            assignment,
        }
    }

    /// Contracts host edges `tt'` with `V_t ⊆ V_t'` until none is left.
    /// The result models the same graph; paths stay paths.
    pub fn make_minimal(&self) -> Result<TreeModel> {
        let problems = self.structure_problems(false);
        if let Some((_, d)) = problems.first() {
            return Err(Error::instance(format!("invalid tree model: {d}")));
        }
        let mut cur = self.clone();
        while let Some((t, keep)) = cur.contractible_edge() {
            let next = cur.contract(t, keep);
            if let Some((_, d)) = next.structure_problems(false).first() {
                return Err(Error::integrity(format!("contraction broke the model: {d}")));
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn leafy_vertices(&self) -> LeafyReport {
        let leaves = self.host_leaves();
        let mut leaf_of = BTreeMap::new();
        for (u, set) in self.assignment.iter().enumerate() {
            if let [t] = set.as_slice() {
                if leaves.binary_search(t).is_ok() {
                    leaf_of.insert(u, *t);
                }
            }
        }
        LeafyReport {
            leafy: leaf_of.keys().copied().collect(),
            leaf_of,
        }
    }

    /// Model of `G - gone`, with the surviving vertices renumbered in
    /// increasing order. The host is unchanged (bags may become empty;
    /// [`TreeModel::make_minimal`] removes them).
    pub fn remove_vertices(&self, gone: &VertexSet) -> TreeModel {
        TreeModel {
            host: self.host.clone(),
            assignment: self
                .assignment
                .iter()
                .enumerate()
                .filter(|(u, _)| !gone.contains(*u))
                .map(|(_, s)| s.clone())
                .collect(),
        }
    }

    /// Smallest host node lying in every node set of `vertices`.
    pub fn common_node(&self, vertices: &VertexSet) -> Option<usize> {
        (0..self.num_nodes()).find(|&t| vertices.iter().all(|u| self.assignment[u].contains(t)))
    }
}

/// Chordality test: maximum cardinality search, then a perfect-elimination
/// check on the reversed visit order.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut position = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for i in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .unwrap();
        visited[v] = true;
        position[v] = n - 1 - i;
        order.push(v);
        for &w in g.adjacent(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    // Elimination order is the reverse of the visit order.
    for &v in order.iter().rev() {
        let later: Vec<usize> = g
            .adjacent(v)
            .iter()
            .copied()
            .filter(|&w| position[w] > position[v])
            .collect();
        if let Some(&parent) = later.iter().min_by_key(|&&w| position[w]) {
            if !later.iter().all(|&w| w == parent || g.has_edge(parent, w)) {
                return false;
            }
        }
    }
    true
}

/// Finds a tree model of `g` with at most `node_budget` host nodes, with
/// path node sets when `require_paths`. Deterministic.
///
/// Hosts range over clique trees: the nodes are the maximal cliques and
/// the tree is a maximum-weight spanning tree of the clique intersection
/// graph. Every model contracts to a minimal one of this form, so the
/// search is exhaustive.
pub fn search_model(g: &Graph, require_paths: bool, node_budget: usize) -> Result<Option<TreeModel>> {
    search_model_capped(g, require_paths, node_budget, SEARCH_VERTEX_CAP)
}

pub fn search_model_capped(
    g: &Graph,
    require_paths: bool,
    node_budget: usize,
    vertex_cap: usize,
) -> Result<Option<TreeModel>> {
    if g.n() > vertex_cap {
        return Err(Error::Size {
            what: "vertices for model search",
            actual: g.n(),
            limit: vertex_cap,
        });
    }
    if node_budget == 0 || !is_chordal(g) {
        return Ok(None);
    }
    let cliques = if g.n() == 0 {
        vec![VertexSet::empty()]
    } else {
        g.maximal_cliques()
    };
    let k = cliques.len();
    if k > node_budget {
        return Ok(None);
    }
    let mut membership = vec![Vec::new(); g.n()];
    for (i, c) in cliques.iter().enumerate() {
        for u in c.iter() {
            membership[u].push(i);
        }
    }
    let build = |edges: &[(usize, usize)]| -> TreeModel {
        let host = Graph::new(k, edges.iter().copied()).expect("tree edges are distinct");
        TreeModel {
            host,
            assignment: membership.iter().map(|m| VertexSet::new(m.iter().copied())).collect(),
        }
    };
    if k == 1 {
        return Ok(Some(build(&[])));
    }

    let mut edges: Vec<(usize, usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| (cliques[i].intersection(&cliques[j]).len(), i, j))
        .collect();
    edges.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    // Weight of every clique tree: each vertex adds one less than the
    // number of cliques containing it.
    let target: usize = membership.iter().map(|m| m.len().saturating_sub(1)).sum();

    let mut search = TreeSearch {
        g,
        edges: &edges,
        membership: &membership,
        require_paths,
        target,
        k,
        comp: (0..k).collect(),
        chosen: Vec::with_capacity(k - 1),
        local_degree: vec![vec![0u8; k]; g.n()],
    };
    let found = search.run(0, 0);
    Ok(found.map(|tree| {
        let model = build(&tree);
        debug_assert!(model.is_valid_for(g, require_paths));
        model
    }))
}

struct TreeSearch<'a> {
    g: &'a Graph,
    edges: &'a [(usize, usize, usize)],
    membership: &'a [Vec<usize>],
    require_paths: bool,
    target: usize,
    k: usize,
    comp: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    local_degree: Vec<Vec<u8>>,
}

impl TreeSearch<'_> {
    fn run(&mut self, idx: usize, weight: usize) -> Option<Vec<(usize, usize)>> {
        let need = self.k - 1 - self.chosen.len();
        if need == 0 {
            return (weight == self.target).then(|| self.chosen.clone());
        }
        if self.edges.len() - idx < need {
            return None;
        }
        let best_rest: usize = self.edges[idx..idx + need].iter().map(|e| e.0).sum();
        if weight + best_rest < self.target {
            return None;
        }
        let (w, i, j) = self.edges[idx];
        if self.comp[i] != self.comp[j] && self.try_add(i, j) {
            let saved = self.comp.clone();
            let (from, to) = (self.comp[j], self.comp[i]);
            for c in &mut self.comp {
                if *c == from {
                    *c = to;
                }
            }
            self.chosen.push((i, j));
            if let Some(found) = self.run(idx + 1, weight + w) {
                return Some(found);
            }
            self.chosen.pop();
            self.comp = saved;
            self.undo_add(i, j);
        }
        self.run(idx + 1, weight)
    }

    fn shared(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.g.n()).filter(move |&u| {
            self.membership[u].binary_search(&i).is_ok() && self.membership[u].binary_search(&j).is_ok()
        })
    }

    fn try_add(&mut self, i: usize, j: usize) -> bool {
        if !self.require_paths {
            return true;
        }
        let shared: Vec<usize> = self.shared(i, j).collect();
        if shared
            .iter()
            .any(|&u| self.local_degree[u][i] >= 2 || self.local_degree[u][j] >= 2)
        {
            return false;
        }
        for u in shared {
            self.local_degree[u][i] += 1;
            self.local_degree[u][j] += 1;
        }
        true
    }

    fn undo_add(&mut self, i: usize, j: usize) {
        if !self.require_paths {
            return;
        }
        let shared: Vec<usize> = self.shared(i, j).collect();
        for u in shared {
            self.local_degree[u][i] -= 1;
            self.local_degree[u][j] -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    /// `K_{1,3}` with centre 0 and leaves a=1, b=2, d=3 on the host path
    /// t0–t1–t2.
    fn claw_model() -> (Graph, TreeModel) {
        let g = Graph::star(3);
        let host = Graph::path(3);
        let m = TreeModel::new(host, vec![set(&[0, 1, 2]), set(&[0]), set(&[2]), set(&[1])]).unwrap();
        (g, m)
    }

    #[test]
    fn claw_model_validates_with_paths() {
        let (g, m) = claw_model();
        let r = m.validate(&g, true).unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
    }

    #[test]
    fn disconnected_node_set_fails() {
        let (g, m) = claw_model();
        let mut sets = m.assignment().to_vec();
        sets[0] = set(&[0, 2]);
        let bad = TreeModel::new(m.host().clone(), sets).unwrap();
        let r = bad.validate(&g, true).unwrap();
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.name == "subtrees" && c.detail.contains("vertex 0")));
    }

    #[test]
    fn missing_edge_is_reported() {
        let (_, m) = claw_model();
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 3)]).unwrap();
        let r = m.validate(&g, true).unwrap();
        let c = r.failures().next().unwrap();
        assert_eq!(c.name, "intersection-law");
        assert!(c.detail.contains("1-3"));
    }

    #[test]
    fn vertex_count_mismatch_is_an_instance_error() {
        let (_, m) = claw_model();
        assert!(matches!(m.validate(&Graph::path(3), true), Err(Error::Instance(_))));
    }

    #[test]
    fn node_sets() {
        let (_, m) = claw_model();
        assert_eq!(m.node_set(1).unwrap(), set(&[0, 3]));
        assert!(matches!(m.node_set(3), Err(Error::Range { .. })));
        let single = TreeModel::new(Graph::empty(1), vec![set(&[0]); 3]).unwrap();
        assert_eq!(single.node_set(0).unwrap(), VertexSet::range(3));
    }

    #[test]
    fn minimal_contracts_subset_bag() {
        // V_t0 = {a}, V_t1 = {a, b}
        let m = TreeModel::new(Graph::path(2), vec![set(&[0, 1]), set(&[1])]).unwrap();
        let g = Graph::complete(2);
        let min = m.make_minimal().unwrap();
        assert_eq!(min.num_nodes(), 1);
        assert!(min.is_valid_for(&g, true));
    }

    #[test]
    fn minimal_is_a_fixpoint() {
        let (g, m) = claw_model();
        let min = m.make_minimal().unwrap();
        assert_eq!(min, m);
        assert!(min.is_valid_for(&g, true));
    }

    #[test]
    fn make_minimal_rejects_broken_models() {
        let m = TreeModel::new(Graph::cycle(3), vec![set(&[0])]).unwrap();
        assert!(matches!(m.make_minimal(), Err(Error::Instance(_))));
    }

    #[test]
    fn leafy_of_claw() {
        let (_, m) = claw_model();
        let r = m.leafy_vertices();
        assert_eq!(r.leafy, set(&[1, 2]));
        assert_eq!(r.leaf_of.get(&1), Some(&0));
        assert_eq!(r.leaf_of.get(&2), Some(&2));
        let single = TreeModel::new(Graph::empty(1), vec![set(&[0]); 2]).unwrap();
        assert!(single.leafy_vertices().leafy.is_empty());
    }

    #[test]
    fn path_order_walks_the_path() {
        let (_, m) = claw_model();
        assert_eq!(m.path_order(0), Some(vec![0, 1, 2]));
        assert_eq!(m.path_order(3), Some(vec![1]));
    }

    #[test]
    fn chordality() {
        assert!(is_chordal(&Graph::complete(5)));
        assert!(is_chordal(&Graph::path(6)));
        assert!(!is_chordal(&Graph::cycle(4)));
        assert!(!is_chordal(&Graph::cycle(6)));
        assert!(is_chordal(&Graph::empty(3)));
    }

    #[test]
    fn search_rejects_c4_and_models_k3() {
        assert!(search_model(&Graph::cycle(4), true, 16).unwrap().is_none());
        let k3 = search_model(&Graph::complete(3), true, 16).unwrap().unwrap();
        assert_eq!(k3.num_nodes(), 1);
        assert!(k3.assignment().iter().all(|s| s == &set(&[0])));
    }

    #[test]
    fn search_finds_models_of_trees() {
        let tree = Graph::new(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]).unwrap();
        let m = search_model(&tree, true, 16).unwrap().unwrap();
        assert!(m.is_valid_for(&tree, true));
    }

    #[test]
    fn search_respects_caps() {
        assert!(matches!(
            search_model(&Graph::path(11), true, 16),
            Err(Error::Size { .. })
        ));
        // P_4 has three maximal cliques.
        assert!(search_model(&Graph::path(4), true, 2).unwrap().is_none());
        assert!(search_model(&Graph::path(4), true, 3).unwrap().is_some());
    }

    #[test]
    fn chordal_graph_without_path_model() {
        // Cliques {u,a,b,c}, {u,a,x}, {u,b,y}, {u,c,z}: every clique tree is
        // a star on the big clique, so u's node set has a degree-3 node.
        let mut b = GraphBuilder::new(7);
        b.add_clique([0, 1, 2, 3]).add_clique([0, 1, 4]).add_clique([0, 2, 5]).add_clique([0, 3, 6]);
        let g = b.build();
        assert!(is_chordal(&g));
        assert!(search_model(&g, false, 16).unwrap().is_some());
        assert!(search_model(&g, true, 16).unwrap().is_none());
    }
}
