//! Finite simple undirected graphs on dense vertex ids `0..n`.
//!
//! [`Graph`] is immutable once built. Everything else in the crate
//! (tree models, oracles, gadgets, the diameter-2 solver) is phrased in
//! terms of the predicates defined here.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    /// Builds a set from the bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        VertexSet(bits(mask).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// Bit mask of the members; `None` if some member is ≥ 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.iter()
            .try_fold(0u64, |acc, v| (v < 64).then(|| acc | (1u64 << v)))
    }

    /// Errors if some member is not a vertex of a graph on `n` vertices.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::Range { vertex: v, n }),
            _ => Ok(()),
        }
    }

    /// Image of the set under `map` (typically a reduced-to-original id map).
    pub fn map(&self, map: &[usize]) -> VertexSet {
        VertexSet::new(self.iter().map(|v| map[v]))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Which neighbourhood equality makes two vertices twins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinKind {
    /// `N(u) = N(v)`; the pair is non-adjacent.
    Open,
    /// `N[u] = N[v]`; the pair is adjacent.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwinPair {
    pub u: usize,
    pub v: usize,
    pub kind: TwinKind,
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::Range { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::instance(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::instance(format!("duplicate edge {u} {v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        b.add_clique(0..n);
        b.build()
    }

    pub fn path(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for v in 1..n {
            b.add_edge(v - 1, v);
        }
        b.build()
    }

    pub fn cycle(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for v in 0..n {
            b.add_edge(v, (v + 1) % n);
        }
        b.build()
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Self {
        let mut b = GraphBuilder::new(k + 1);
        for v in 1..=k {
            b.add_edge(0, v);
        }
        b.build()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn adjacent(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::Range {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// `N(v)`, or `N[v]` when `closed`.
    pub fn neighbors(&self, v: usize, closed: bool) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut out = self.adj[v].clone();
        if closed {
            let pos = out.binary_search(&v).unwrap_err();
            out.insert(pos, v);
        }
        Ok(VertexSet(out))
    }

    /// Adjacency as bit masks, one per vertex. `None` when `n > 64`.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| {
            self.adj
                .iter()
                .map(|list| list.iter().fold(0u64, |acc, &v| acc | (1u64 << v)))
                .collect()
        })
    }

    /// True iff every vertex is in `d` or has a neighbour in `d`.
    pub fn is_dominating(&self, d: &VertexSet) -> Result<bool> {
        d.check_range(self.n())?;
        let mut dominated = vec![false; self.n()];
        for u in d.iter() {
            dominated[u] = true;
            for &w in &self.adj[u] {
                dominated[w] = true;
            }
        }
        Ok(dominated.into_iter().all(|b| b))
    }

    /// True iff every vertex of `targets` is in `d` or adjacent to it.
    pub fn dominates(&self, d: &VertexSet, targets: &VertexSet) -> bool {
        targets
            .iter()
            .all(|t| d.contains(t) || self.adj[t].iter().any(|&w| d.contains(w)))
    }

    /// Connectivity of the induced subgraph `G[s]`. The empty set counts
    /// as connected.
    pub fn is_connected_induced(&self, s: &VertexSet) -> Result<bool> {
        s.check_range(self.n())?;
        let Some(start) = s.iter().next() else {
            return Ok(true);
        };
        let mut inside = vec![false; self.n()];
        for v in s.iter() {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        Ok(reached == s.len())
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_induced(&VertexSet::range(self.n()))
            .expect("full vertex set is in range")
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let members = s.as_slice();
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        let members = s.as_slice();
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest shortest-path distance. `None` stands for an infinite
    /// diameter (disconnected graph); the empty and one-vertex graphs have
    /// diameter 0.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n() {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// A shortest `source`–`target` path, including both ends. Ties go to
    /// the smallest predecessor id.
    pub fn shortest_path(&self, source: usize, target: usize) -> Option<Vec<usize>> {
        let dist = self.distances_from(target);
        dist[source]?;
        let mut path = vec![source];
        let mut cur = source;
        while cur != target {
            let d = dist[cur].unwrap();
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("BFS layers are consistent");
            path.push(cur);
        }
        Some(path)
    }

    /// All twin pairs `u < v` in lexicographic order, tagged with the kind of
    /// neighbourhood equality that holds.
    pub fn twins(&self) -> Vec<TwinPair> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if let Some(kind) = self.twin_kind(u, v) {
                    out.push(TwinPair { u, v, kind });
                }
            }
        }
        out
    }

    pub fn twin_kind(&self, u: usize, v: usize) -> Option<TwinKind> {
        if self.has_edge(u, v) {
            let strip = |list: &[usize], x: usize| -> Vec<usize> {
                list.iter().copied().filter(|&w| w != x).collect()
            };
            (strip(&self.adj[u], v) == strip(&self.adj[v], u)).then_some(TwinKind::Closed)
        } else {
            (self.adj[u] == self.adj[v]).then_some(TwinKind::Open)
        }
    }

    pub fn is_simplicial(&self, v: usize) -> bool {
        self.is_clique(&VertexSet(self.adj[v].clone()))
    }

    /// Vertices whose open neighbourhood is a clique (isolated vertices
    /// included).
    pub fn simplicial_vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).filter(|&v| self.is_simplicial(v)).collect())
    }

    /// `G[keep]` with vertices renumbered in increasing order. The second
    /// component maps new ids to old ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (new_id[w] != usize::MAX).then_some(new_id[w]))
                    .collect()
            })
            .collect();
        (Graph { adj }, map)
    }

    pub fn remove_vertices(&self, gone: &VertexSet) -> (Graph, Vec<usize>) {
        self.induced_subgraph(&VertexSet::range(self.n()).difference(gone))
    }

    /// Graph obtained by renaming vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut b = GraphBuilder::new(self.n());
        for (u, v) in self.edges() {
            b.add_edge(perm[u], perm[v]);
        }
        b.build()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::new(members));
        }
        out
    }

    /// Proper 2-colouring if one exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n()];
        for s in 0..self.n() {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Degree sequence in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// All maximal cliques (Bron–Kerbosch with pivoting), each sorted, the
    /// list sorted lexicographically.
    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let all: Vec<usize> = (0..self.n()).collect();
        self.bron_kerbosch(&mut Vec::new(), all, Vec::new(), &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        out: &mut Vec<VertexSet>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(VertexSet::new(r.iter().copied()));
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&w| self.has_edge(u, w)).count())
            .unwrap();
        let mut p = p;
        let mut x = x;
        let branch: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&v| !self.has_edge(pivot, v))
            .collect();
        for v in branch {
            r.push(v);
            let np = p.iter().copied().filter(|&w| self.has_edge(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| self.has_edge(v, w)).collect();
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
}

/// Accumulates edges, silently merging duplicates, for generators that
/// glue overlapping cliques together.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Panics on a self-loop or out-of-range endpoint; both are generator
    /// bugs.
    pub fn add_edge(&mut self, u: usize, v: usize) -> &mut Self {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.n && v < self.n, "edge {u}-{v} out of range");
        self.edges.insert((u.min(v), u.max(v)));
        self
    }

    pub fn add_clique(&mut self, members: impl IntoIterator<Item = usize>) -> &mut Self {
        let members: Vec<usize> = members.into_iter().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                self.add_edge(u, v);
            }
        }
        self
    }

    pub fn build(&self) -> Graph {
        Graph::new(self.n, self.edges.iter().copied()).expect("builder edges are deduplicated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(Graph::new(2, [(0, 0)]), Err(Error::Instance(_))));
        assert!(matches!(Graph::new(2, [(0, 1), (1, 0)]), Err(Error::Instance(_))));
        assert_eq!(
            Graph::new(2, [(0, 2)]).unwrap_err(),
            Error::Range { vertex: 2, n: 2 }
        );
    }

    #[test]
    fn neighborhoods() {
        let p = Graph::path(3);
        assert_eq!(p.neighbors(1, false).unwrap(), set(&[0, 2]));
        assert_eq!(p.neighbors(1, true).unwrap(), set(&[0, 1, 2]));
        assert_eq!(Graph::empty(3).neighbors(2, false).unwrap(), set(&[]));
        assert!(matches!(p.neighbors(3, false), Err(Error::Range { .. })));
    }

    #[test]
    fn domination() {
        assert!(Graph::star(3).is_dominating(&set(&[0])).unwrap());
        assert!(!Graph::path(4).is_dominating(&set(&[0])).unwrap());
        let g = Graph::cycle(5);
        assert!(g.is_dominating(&VertexSet::range(5)).unwrap());
        assert!(!g.is_dominating(&set(&[])).unwrap());
        assert!(Graph::empty(0).is_dominating(&set(&[])).unwrap());
    }

    #[test]
    fn induced_connectivity() {
        let p = Graph::path(3);
        assert!(!p.is_connected_induced(&set(&[0, 2])).unwrap());
        assert!(p.is_connected_induced(&set(&[0, 1, 2])).unwrap());
        assert!(p.is_connected_induced(&set(&[])).unwrap());
        assert!(p.is_connected_induced(&set(&[2])).unwrap());
    }

    #[test]
    fn diameters() {
        assert_eq!(Graph::complete(4).diameter(), Some(1));
        assert_eq!(Graph::path(4).diameter(), Some(3));
        assert_eq!(Graph::empty(2).diameter(), None);
        assert_eq!(Graph::empty(1).diameter(), Some(0));
    }

    #[test]
    fn twin_pairs() {
        let k3 = Graph::complete(3).twins();
        assert_eq!(k3.len(), 3);
        assert!(k3.iter().all(|t| t.kind == TwinKind::Closed));
        assert_eq!(
            Graph::star(2).twins(),
            vec![TwinPair { u: 1, v: 2, kind: TwinKind::Open }]
        );
        assert!(Graph::path(4).twins().is_empty());
    }

    #[test]
    fn simplicial() {
        assert_eq!(Graph::path(3).simplicial_vertices(), set(&[0, 2]));
        assert_eq!(Graph::cycle(4).simplicial_vertices(), set(&[]));
        assert_eq!(Graph::complete(5).simplicial_vertices(), VertexSet::range(5));
        assert_eq!(Graph::empty(2).simplicial_vertices(), set(&[0, 1]));
    }

    #[test]
    fn shortest_path_prefers_small_ids() {
        let g = Graph::cycle(4);
        assert_eq!(g.shortest_path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(Graph::empty(2).shortest_path(0, 1), None);
    }

    #[test]
    fn cliques_of_a_diamond() {
        let g = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.maximal_cliques(), vec![set(&[0, 1, 2]), set(&[1, 2, 3])]);
    }

    #[test]
    fn induced_subgraph_is_monotone() {
        let g = Graph::path(5);
        let (h, map) = g.remove_vertices(&set(&[2]));
        assert_eq!(map, vec![0, 1, 3, 4]);
        assert_eq!(h.edges(), vec![(0, 1), (2, 3)]);
    }
}
