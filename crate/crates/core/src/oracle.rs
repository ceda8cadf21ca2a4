//! Exact exponential-time reference solvers.
//!
//! These are the ground truth for the reductions and for the diameter-2
//! solver. Subset enumerations run in increasing cardinality and, within a
//! cardinality, in lexicographic order, so their witnesses are the
//! lexicographically first optimum. Domination searches use
//! branch-and-bound instead (gadget graphs are too large to enumerate);
//! their witnesses are deterministic but not necessarily lexicographically
//! first.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, VertexSet};
use crate::reduction::ThreeDMInstance;

/// Largest vertex count any bit-mask oracle accepts.
pub const MASK_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
}

/// Answer of an exact query. For `Yes`, `set` satisfies the query's
/// defining predicate and `objective == set.len()`; for `No`, `set` is
/// empty and `objective` is the best proven bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub status: Status,
    pub set: VertexSet,
    pub objective: usize,
}

impl Witness {
    pub fn yes(set: VertexSet) -> Self {
        Witness {
            status: Status::Yes,
            objective: set.len(),
            set,
        }
    }

    pub fn no(bound: usize) -> Self {
        Witness {
            status: Status::No,
            set: VertexSet::empty(),
            objective: bound,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }
}

/// Exact solvers with a configurable enumeration cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    /// Largest ground set a plain subset enumeration may range over.
    pub enum_cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { enum_cap: 24 }
    }
}

fn mask_limit(g: &Graph) -> Result<()> {
    if g.n() > MASK_LIMIT {
        return Err(Error::Size {
            what: "vertices",
            actual: g.n(),
            limit: MASK_LIMIT,
        });
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Connectivity of the subgraph induced by `set`; empty counts as connected.
fn mask_connected(adj: &[u64], set: u64) -> bool {
    if set == 0 {
        return true;
    }
    let mut reach = set & set.wrapping_neg();
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        frontier = next & set & !reach;
        reach |= frontier;
    }
    reach == set
}

/// Component of `set` containing its lowest member.
fn mask_component(adj: &[u64], set: u64) -> u64 {
    let mut reach = set & set.wrapping_neg();
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        frontier = next & set & !reach;
        reach |= frontier;
    }
    reach
}

/// Calls `visit` on every `k`-subset of `ground` in lexicographic order
/// until it returns `true`.
fn for_each_subset(ground: &[usize], k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > ground.len() {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen: Vec<usize> = idx.iter().map(|&i| ground[i]).collect();
    loop {
        if visit(&chosen) {
            return true;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < ground.len() - k + p) else {
            return false;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
        for p in pos..k {
            chosen[p] = ground[idx[p]];
        }
    }
}

impl Oracle {
    /// Minimum `S ⊆ V \ X` with `G[S ∪ X]` connected, by cardinality-ordered
    /// enumeration over the non-terminals.
    pub fn steiner_min(&self, g: &Graph, x: &VertexSet) -> Result<Witness> {
        x.check_range(g.n())?;
        if x.is_empty() {
            return Err(Error::instance("terminal set is empty"));
        }
        if !g.is_connected() {
            return Err(Error::instance("graph is disconnected"));
        }
        mask_limit(g)?;
        let free: Vec<usize> = (0..g.n()).filter(|&v| !x.contains(v)).collect();
        if free.len() > self.enum_cap {
            return Err(Error::Size {
                what: "non-terminals",
                actual: free.len(),
                limit: self.enum_cap,
            });
        }
        let adj = g.masks().expect("n checked");
        let xm = x.to_mask().expect("n checked");
        for k in 0..=free.len() {
            let mut found = None;
            for_each_subset(&free, k, |s| {
                let sm = s.iter().fold(xm, |acc, &v| acc | (1u64 << v));
                if mask_connected(&adj, sm) {
                    found = Some(VertexSet::new(s.iter().copied()));
                    true
                } else {
                    false
                }
            });
            if let Some(s) = found {
                return Ok(Witness::yes(s));
            }
        }
        unreachable!("V \\ X always connects a connected graph")
    }

    /// Minimum dominating set.
    pub fn ds_min(&self, g: &Graph) -> Result<Witness> {
        mask_limit(g)?;
        Ok(Witness::yes(DomSearch::new(g, false).minimum()))
    }

    /// Minimum connected dominating set.
    pub fn cds_min(&self, g: &Graph) -> Result<Witness> {
        if !g.is_connected() {
            return Err(Error::instance("graph is disconnected"));
        }
        mask_limit(g)?;
        Ok(Witness::yes(DomSearch::new(g, true).minimum()))
    }

    /// Minimum clique `S ⊆ candidates` with `targets ⊆ N[S]`. When no
    /// clique qualifies the objective is one more than the largest clique
    /// among the candidates.
    pub fn dominating_clique_min(
        &self,
        g: &Graph,
        candidates: &VertexSet,
        targets: &VertexSet,
    ) -> Result<Witness> {
        candidates.check_range(g.n())?;
        targets.check_range(g.n())?;
        mask_limit(g)?;
        let adj = g.masks().expect("n checked");
        let closed: Vec<u64> = adj.iter().enumerate().map(|(v, &a)| a | (1u64 << v)).collect();
        let tm = targets.to_mask().expect("n checked");
        let cands: Vec<usize> = candidates.iter().collect();
        for size in 0..=cands.len() {
            let mut any_clique = false;
            let mut chosen = Vec::with_capacity(size);
            let hit = clique_search(&adj, &closed, &cands, 0, size, u64::MAX, 0, tm, &mut chosen, &mut any_clique);
            if let Some(s) = hit {
                return Ok(Witness::yes(s));
            }
            if !any_clique {
                return Ok(Witness::no(size));
            }
        }
        Ok(Witness::no(cands.len() + 1))
    }

    /// A set of `n` pairwise-disjoint triples, by enumerating `n`-subsets of
    /// the triple list. For `No`, the objective is the largest number of
    /// pairwise-disjoint triples.
    pub fn three_dm(&self, inst: &ThreeDMInstance) -> Result<Witness> {
        inst.check()?;
        let m = inst.triples.len();
        if m > self.enum_cap {
            return Err(Error::Size {
                what: "triples",
                actual: m,
                limit: self.enum_cap,
            });
        }
        let disjoint = |s: &[usize]| -> bool {
            let mut used = [0u64; 3];
            for &j in s {
                let t = inst.triples[j];
                for (c, &i) in [t.0, t.1, t.2].iter().enumerate() {
                    if used[c] >> i & 1 == 1 {
                        return false;
                    }
                    used[c] |= 1 << i;
                }
            }
            true
        };
        let ground: Vec<usize> = (0..m).collect();
        let mut best = 0;
        for k in 1..=inst.n.min(m) {
            let mut found = None;
            for_each_subset(&ground, k, |s| {
                if disjoint(s) {
                    found = Some(VertexSet::new(s.iter().copied()));
                    true
                } else {
                    false
                }
            });
            match found {
                Some(s) if k == inst.n => return Ok(Witness::yes(s)),
                Some(_) => best = k,
                None => break,
            }
        }
        Ok(Witness::no(best))
    }
}

#[allow(clippy::too_many_arguments)]
fn clique_search(
    adj: &[u64],
    closed: &[u64],
    cands: &[usize],
    from: usize,
    size: usize,
    common: u64,
    covered: u64,
    targets: u64,
    chosen: &mut Vec<usize>,
    any_clique: &mut bool,
) -> Option<VertexSet> {
    if chosen.len() == size {
        *any_clique = true;
        return (targets & !covered == 0).then(|| VertexSet::new(chosen.iter().copied()));
    }
    for i in from..cands.len() {
        if cands.len() - i < size - chosen.len() {
            break;
        }
        let v = cands[i];
        if common >> v & 1 == 0 {
            continue;
        }
        chosen.push(v);
        let hit = clique_search(
            adj,
            closed,
            cands,
            i + 1,
            size,
            common & adj[v],
            covered | closed[v],
            targets,
            chosen,
            any_clique,
        );
        chosen.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Branch-and-bound for (connected) domination with iterative deepening on
/// the solution size.
///
/// Branching picks the undominated vertex with the fewest possible
/// dominators and tries each of them in increasing id order. Once every
/// vertex is dominated, the connected variant branches on vertices adjacent
/// to the component of the smallest chosen vertex until the set is
/// connected.
struct DomSearch {
    adj: Vec<u64>,
    closed: Vec<u64>,
    all: u64,
    connected: bool,
    failed: HashSet<u64>,
    failed_links: HashSet<u64>,
}

impl DomSearch {
    fn new(g: &Graph, connected: bool) -> Self {
        let adj = g.masks().expect("caller checked the mask limit");
        let closed = adj.iter().enumerate().map(|(v, &a)| a | (1u64 << v)).collect();
        DomSearch {
            adj,
            closed,
            all: full_mask(g.n()),
            connected,
            failed: HashSet::new(),
            failed_links: HashSet::new(),
        }
    }

    fn minimum(&mut self) -> VertexSet {
        if self.all == 0 {
            return VertexSet::empty();
        }
        let start = self.packing_bound(self.all).max(1);
        for k in start..=self.adj.len() {
            self.failed.clear();
            self.failed_links.clear();
            if let Some(d) = self.extend(0, 0, k) {
                return VertexSet::from_mask(d);
            }
        }
        unreachable!("V is a (connected) dominating set")
    }

    /// Undominated vertices with pairwise-disjoint closed neighbourhoods
    /// each need their own dominator.
    fn packing_bound(&self, undominated: u64) -> usize {
        let mut order: Vec<usize> = bits(undominated).collect();
        order.sort_by_key(|&v| (self.closed[v].count_ones(), v));
        let mut used = 0u64;
        let mut count = 0;
        for v in order {
            if self.closed[v] & used == 0 {
                used |= self.closed[v];
                count += 1;
            }
        }
        count
    }

    fn extend(&mut self, d: u64, dominated: u64, k: usize) -> Option<u64> {
        if self.failed.contains(&d) {
            return None;
        }
        let size = d.count_ones() as usize;
        let undominated = self.all & !dominated;
        let result = if undominated == 0 {
            if !self.connected || mask_connected(&self.adj, d) {
                Some(d)
            } else {
                self.link(d, k - size)
            }
        } else if size + self.packing_bound(undominated) > k {
            None
        } else {
            let v = bits(undominated)
                .min_by_key(|&v| (self.closed[v].count_ones(), v))
                .unwrap();
            bits(self.closed[v]).find_map(|u| self.extend(d | 1 << u, dominated | self.closed[u], k))
        };
        if result.is_none() {
            self.failed.insert(d);
        }
        result
    }

    fn link(&mut self, d: u64, budget: usize) -> Option<u64> {
        let comp = mask_component(&self.adj, d);
        if comp == d {
            return Some(d);
        }
        if budget == 0 || self.failed_links.contains(&d) {
            return None;
        }
        let mut border = 0;
        for v in bits(comp) {
            border |= self.adj[v];
        }
        border &= !d;
        let found = bits(border).find_map(|u| self.link(d | 1 << u, budget - 1));
        if found.is_none() {
            self.failed_links.insert(d);
        }
        found
    }
}

/// Exact graph isomorphism by backtracking over colour-refined candidate
/// classes.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    if g1.n() != g2.n() || g1.m() != g2.m() || g1.degree_sequence() != g2.degree_sequence() {
        return false;
    }
    let (c1, c2) = joint_refinement(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return false;
    }
    let n = g1.n();
    // Map vertices in an order that keeps each new vertex adjacent to the
    // already-mapped ones where possible; rare colours first.
    let mut class_size = std::collections::HashMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = g1.adjacent(v).iter().filter(|&&w| placed[w]).count();
                (linked, std::cmp::Reverse(class_size[&c1[v]]), g1.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_extend(g1, g2, &c1, &c2, &order, 0, &mut image, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    g1: &Graph,
    g2: &Graph,
    c1: &[usize],
    c2: &[usize],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for w in 0..g2.n() {
        if used[w] || c2[w] != c1[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g1.has_edge(u, v) == g2.has_edge(image[u], w));
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if iso_extend(g1, g2, c1, c2, order, depth + 1, image, used) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

/// Stable colour-refinement classes of `g`. Colours are canonical:
/// isomorphic graphs get equal sorted colour vectors.
pub fn refined_colors(g: &Graph) -> Vec<usize> {
    joint_refinement(g, &Graph::empty(0)).0
}

/// Colour refinement run on the disjoint union, so that colours are
/// comparable across the two graphs.
fn joint_refinement(g1: &Graph, g2: &Graph) -> (Vec<usize>, Vec<usize>) {
    let graphs = [g1, g2];
    let mut colors: Vec<Vec<usize>> = graphs
        .iter()
        .map(|g| (0..g.n()).map(|v| g.degree(v)).collect())
        .collect();
    let mut classes = usize::MAX;
    loop {
        let mut palette = std::collections::BTreeMap::new();
        let signatures: Vec<Vec<(usize, Vec<usize>)>> = graphs
            .iter()
            .zip(&colors)
            .map(|(g, col)| {
                (0..g.n())
                    .map(|v| {
                        let mut around: Vec<usize> = g.adjacent(v).iter().map(|&w| col[w]).collect();
                        around.sort_unstable();
                        (col[v], around)
                    })
                    .collect()
            })
            .collect();
        for sig in signatures.iter().flatten() {
            let next = palette.len();
            palette.entry(sig.clone()).or_insert(next);
        }
        // Renumber by sorted signature so colours do not depend on vertex order.
        let rank: std::collections::BTreeMap<_, usize> =
            palette.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        colors = signatures
            .iter()
            .map(|sigs| sigs.iter().map(|s| rank[s]).collect())
            .collect();
        if rank.len() == classes {
            break;
        }
        classes = rank.len();
    }
    let c2 = colors.pop().unwrap();
    let c1 = colors.pop().unwrap();
    (c1, c2)
}

/// Maximum matching of a general graph (Edmonds' blossom algorithm, via
/// petgraph). Edges come back as `(u, v)` with `u < v`, sorted.
pub fn max_matching(g: &Graph) -> Vec<(usize, usize)> {
    let pg = petgraph::graph::UnGraph::<(), ()>::from_edges(
        g.edges().into_iter().map(|(u, v)| (u as u32, v as u32)),
    );
    // from_edges sizes the node set by the largest endpoint.
    let matching = petgraph::algo::maximum_matching(&pg);
    let mut out: Vec<(usize, usize)> = matching
        .edges()
        .map(|(a, b)| {
            let (a, b) = (a.index(), b.index());
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Convenience wrappers using the default limits.
pub fn steiner_min(g: &Graph, x: &VertexSet) -> Result<Witness> {
    Oracle::default().steiner_min(g, x)
}

pub fn cds_min(g: &Graph) -> Result<Witness> {
    Oracle::default().cds_min(g)
}

pub fn ds_min(g: &Graph) -> Result<Witness> {
    Oracle::default().ds_min(g)
}

pub fn dominating_clique_min(g: &Graph, candidates: &VertexSet, targets: &VertexSet) -> Result<Witness> {
    Oracle::default().dominating_clique_min(g, candidates, targets)
}

pub fn three_dm(inst: &ThreeDMInstance) -> Result<Witness> {
    Oracle::default().three_dm(inst)
}
