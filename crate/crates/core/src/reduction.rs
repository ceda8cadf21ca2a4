//! Hardness gadgets and their certifiers.
//!
//! * [`cds_from_3dm`]: 3D-Matching to Connected Dominating Set on
//!   undirected path graphs of diameter at most 3, with the tree model.
//! * [`steiner_from_3dm`]: the same graph with the simplicial vertices as
//!   Steiner terminals.
//! * [`steiner_from_ds`]: Dominating Set to Steiner Tree on bipartite
//!   graphs, parameter-preserving.
//! * [`subdivide`]: the subdivision `s(G)` with its two star forests.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::oracle::isomorphic;
use crate::tree_model::TreeModel;

/// A 3D-Matching instance over `P = Q = R = {0..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreeDMInstance {
    pub n: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl ThreeDMInstance {
    pub fn new(n: usize, triples: Vec<(usize, usize, usize)>) -> Result<Self> {
        let inst = ThreeDMInstance { n, triples };
        inst.check()?;
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.triples.len()
    }

    pub fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::instance("3DM universe size must be positive"));
        }
        if self.n > 64 {
            return Err(Error::Size {
                what: "3DM universe",
                actual: self.n,
                limit: 64,
            });
        }
        if self.triples.is_empty() {
            return Err(Error::instance("3DM instance has no triples"));
        }
        for (j, &(p, q, r)) in self.triples.iter().enumerate() {
            if p >= self.n || q >= self.n || r >= self.n {
                return Err(Error::instance(format!(
                    "triple {j} ({p},{q},{r}) has an index >= n = {}",
                    self.n
                )));
            }
            if self.triples[..j].contains(&(p, q, r)) {
                return Err(Error::instance(format!("duplicate triple ({p},{q},{r})")));
            }
        }
        Ok(())
    }

    /// True iff every element of `P ∪ Q ∪ R` lies in some triple.
    pub fn covers_universe(&self) -> bool {
        (0..self.n).all(|i| {
            self.triples.iter().any(|t| t.0 == i)
                && self.triples.iter().any(|t| t.1 == i)
                && self.triples.iter().any(|t| t.2 == i)
        })
    }
}

/// Role of a gadget vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    A(usize),
    B(usize),
    C(usize),
    X(usize),
    Y(usize),
    Z1(usize),
    Z2(usize),
    Z3(usize),
    P(usize),
    Q(usize),
    R(usize),
    /// The extra root of the Dominating Set gadget.
    Root,
    /// `v'` for an original vertex `v`.
    Prime(usize),
    /// An original vertex carried into the gadget.
    Original(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::A(j) => write!(f, "a_{j}"),
            Role::B(j) => write!(f, "b_{j}"),
            Role::C(j) => write!(f, "c_{j}"),
            Role::X(j) => write!(f, "x_{j}"),
            Role::Y(j) => write!(f, "y_{j}"),
            Role::Z1(j) => write!(f, "z1_{j}"),
            Role::Z2(j) => write!(f, "z2_{j}"),
            Role::Z3(j) => write!(f, "z3_{j}"),
            Role::P(i) => write!(f, "p_{i}"),
            Role::Q(i) => write!(f, "q_{i}"),
            Role::R(i) => write!(f, "r_{i}"),
            Role::Root => write!(f, "root"),
            Role::Prime(v) => write!(f, "v'_{v}"),
            Role::Original(v) => write!(f, "v_{v}"),
        }
    }
}

/// Vertex and node numbering of the 3D-Matching gadget.
///
/// Vertices are role-major: all `a_j`, then `b_j`, `c_j`, `x_j`, `y_j`,
/// `z1_j`, `z2_j`, `z3_j`, then `p_i`, `q_i`, `r_i`. Host node 0 carries
/// the clique `K`; triple `j` owns nodes `1 + 4j ..= 4 + 4j`
/// (`{a,b,x,y}`, `{a,y,z1}`, `{b,y,z2}`, `{c,x,z3}`); the pendant nodes of
/// `p_i`, `q_i`, `r_i` follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub n: usize,
    pub m: usize,
}

impl GadgetLayout {
    pub fn a(&self, j: usize) -> usize {
        j
    }
    pub fn b(&self, j: usize) -> usize {
        self.m + j
    }
    pub fn c(&self, j: usize) -> usize {
        2 * self.m + j
    }
    pub fn x(&self, j: usize) -> usize {
        3 * self.m + j
    }
    pub fn y(&self, j: usize) -> usize {
        4 * self.m + j
    }
    pub fn z1(&self, j: usize) -> usize {
        5 * self.m + j
    }
    pub fn z2(&self, j: usize) -> usize {
        6 * self.m + j
    }
    pub fn z3(&self, j: usize) -> usize {
        7 * self.m + j
    }
    pub fn p(&self, i: usize) -> usize {
        8 * self.m + i
    }
    pub fn q(&self, i: usize) -> usize {
        8 * self.m + self.n + i
    }
    pub fn r(&self, i: usize) -> usize {
        8 * self.m + 2 * self.n + i
    }

    pub fn num_vertices(&self) -> usize {
        8 * self.m + 3 * self.n
    }

    pub fn num_nodes(&self) -> usize {
        1 + 4 * self.m + 3 * self.n
    }

    /// The clique `K = {a_j, b_j, c_j, x_j : all j}`.
    pub fn clique_k(&self) -> VertexSet {
        (0..self.m)
            .flat_map(|j| [self.a(j), self.b(j), self.c(j), self.x(j)])
            .collect()
    }

    pub fn roles(&self) -> Vec<Role> {
        let per_triple = [Role::A, Role::B, Role::C, Role::X, Role::Y, Role::Z1, Role::Z2, Role::Z3];
        let per_element = [Role::P, Role::Q, Role::R];
        per_triple
            .iter()
            .flat_map(|f| (0..self.m).map(f))
            .chain(per_element.iter().flat_map(|f| (0..self.n).map(f)))
            .collect()
    }
}

/// A generated instance: graph, optional tree model, Steiner terminals
/// (empty for the CDS variant), budget and per-vertex roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetOutput {
    pub graph: Graph,
    pub model: Option<TreeModel>,
    pub terminals: VertexSet,
    pub budget: usize,
    pub labels: Vec<Role>,
}

/// Connected Dominating Set instance on `8m + 3n` vertices with budget
/// `2m + n`, plus the tree model whose node sets are host paths.
pub fn cds_from_3dm(inst: &ThreeDMInstance) -> Result<GadgetOutput> {
    inst.check()?;
    let lay = GadgetLayout {
        n: inst.n,
        m: inst.m(),
    };
    let (n, m) = (lay.n, lay.m);
    let mut g = GraphBuilder::new(lay.num_vertices());
    g.add_clique(lay.clique_k().iter());
    for j in 0..m {
        g.add_clique([lay.a(j), lay.b(j), lay.x(j), lay.y(j)]);
        g.add_clique([lay.a(j), lay.y(j), lay.z1(j)]);
        g.add_clique([lay.b(j), lay.y(j), lay.z2(j)]);
        g.add_clique([lay.c(j), lay.x(j), lay.z3(j)]);
    }
    for i in 0..n {
        let uses = |pick: fn(&(usize, usize, usize)) -> usize| -> Vec<usize> {
            (0..m).filter(|&j| pick(&inst.triples[j]) == i).collect()
        };
        g.add_clique(std::iter::once(lay.p(i)).chain(uses(|t| t.0).into_iter().map(|j| lay.a(j))));
        g.add_clique(std::iter::once(lay.q(i)).chain(uses(|t| t.1).into_iter().map(|j| lay.b(j))));
        g.add_clique(std::iter::once(lay.r(i)).chain(uses(|t| t.2).into_iter().map(|j| lay.c(j))));
    }

    let root = 0;
    let ab = |j: usize| 1 + 4 * j;
    let a_node = |j: usize| 2 + 4 * j;
    let b_node = |j: usize| 3 + 4 * j;
    let c_node = |j: usize| 4 + 4 * j;
    let p_node = |i: usize| 1 + 4 * m + i;
    let q_node = |i: usize| 1 + 4 * m + n + i;
    let r_node = |i: usize| 1 + 4 * m + 2 * n + i;
    let mut host = GraphBuilder::new(lay.num_nodes());
    for j in 0..m {
        host.add_edge(root, ab(j))
            .add_edge(ab(j), a_node(j))
            .add_edge(ab(j), b_node(j))
            .add_edge(root, c_node(j));
    }
    for i in 0..n {
        host.add_edge(root, p_node(i))
            .add_edge(root, q_node(i))
            .add_edge(root, r_node(i));
    }
    let mut assignment = vec![VertexSet::empty(); lay.num_vertices()];
    for (j, &(p, q, r)) in inst.triples.iter().enumerate() {
        assignment[lay.a(j)] = VertexSet::new([root, ab(j), a_node(j), p_node(p)]);
        assignment[lay.b(j)] = VertexSet::new([root, ab(j), b_node(j), q_node(q)]);
        assignment[lay.c(j)] = VertexSet::new([root, c_node(j), r_node(r)]);
        assignment[lay.x(j)] = VertexSet::new([root, ab(j), c_node(j)]);
        assignment[lay.y(j)] = VertexSet::new([ab(j), a_node(j), b_node(j)]);
        assignment[lay.z1(j)] = VertexSet::new([a_node(j)]);
        assignment[lay.z2(j)] = VertexSet::new([b_node(j)]);
        assignment[lay.z3(j)] = VertexSet::new([c_node(j)]);
    }
    for i in 0..n {
        assignment[lay.p(i)] = VertexSet::new([p_node(i)]);
        assignment[lay.q(i)] = VertexSet::new([q_node(i)]);
        assignment[lay.r(i)] = VertexSet::new([r_node(i)]);
    }
    let model = TreeModel::new(host.build(), assignment)?;
    Ok(GadgetOutput {
        graph: g.build(),
        model: Some(model),
        terminals: VertexSet::empty(),
        budget: 2 * m + n,
        labels: lay.roles(),
    })
}

/// Steiner Tree instance on the 3D-Matching gadget: terminals are the
/// simplicial vertices (every `z` vertex and every element vertex).
pub fn steiner_from_3dm(inst: &ThreeDMInstance) -> Result<GadgetOutput> {
    let mut out = cds_from_3dm(inst)?;
    out.terminals = out.graph.simplicial_vertices();
    Ok(out)
}

/// Steiner Tree instance `(G', X, k)` from a Dominating Set instance
/// `(G, k)`. Vertex `v` keeps its id, `v'` is `n + v`, and the root is
/// `2n`. `X = {root} ∪ {v'}`.
pub fn steiner_from_ds(g: &Graph, k: usize) -> Result<GadgetOutput> {
    let n = g.n();
    if n == 0 {
        return Err(Error::instance("dominating set instance has no vertices"));
    }
    let root = 2 * n;
    let mut b = GraphBuilder::new(2 * n + 1);
    for v in 0..n {
        b.add_edge(root, v);
        b.add_edge(n + v, v);
        for &u in g.adjacent(v) {
            b.add_edge(n + v, u);
        }
    }
    let labels = (0..n)
        .map(Role::Original)
        .chain((0..n).map(Role::Prime))
        .chain(std::iter::once(Role::Root))
        .collect();
    Ok(GadgetOutput {
        graph: b.build(),
        model: None,
        terminals: (n..=2 * n).collect(),
        budget: k,
        labels,
    })
}

/// The subdivision `s(G)` split into two edge sets. Original vertices keep
/// their ids; the subdivision vertex of the `k`-th edge (sorted order) is
/// `n + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThicknessWitness {
    pub sub: Graph,
    pub part1: Vec<(usize, usize)>,
    pub part2: Vec<(usize, usize)>,
}

impl ThicknessWitness {
    /// `part1` and `part2` are disjoint and together give `E(sub)`.
    pub fn is_partition(&self) -> bool {
        let mut all: Vec<(usize, usize)> = self.part1.iter().chain(&self.part2).copied().collect();
        all.sort_unstable();
        let len = all.len();
        all.dedup();
        all.len() == len && all == self.sub.edges()
    }
}

/// True iff every component of the edge set is a star: no component has
/// two vertices of degree above one.
pub fn is_star_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let Ok(h) = Graph::new(n, edges.iter().copied()) else {
        return false;
    };
    h.components()
        .iter()
        .all(|comp| comp.iter().filter(|&v| h.degree(v) > 1).count() <= 1)
}

pub fn subdivide(g: &Graph) -> ThicknessWitness {
    let n = g.n();
    let edges = g.edges();
    let mut part1 = Vec::with_capacity(edges.len());
    let mut part2 = Vec::with_capacity(edges.len());
    for (k, &(i, j)) in edges.iter().enumerate() {
        let w = n + k;
        part1.push((i, w));
        part2.push((j, w));
    }
    let sub = Graph::new(n + edges.len(), part1.iter().chain(&part2).copied())
        .expect("subdivision edges are distinct");
    part1.sort_unstable();
    part2.sort_unstable();
    ThicknessWitness { sub, part1, part2 }
}

/// Largest subdivision `iso_transport` will compare.
pub const ISO_TRANSPORT_LIMIT: usize = 64;

/// `(G1 ≅ G2, s(G1) ≅ s(G2))`; the two answers must agree.
pub fn iso_transport(g1: &Graph, g2: &Graph) -> Result<(bool, bool)> {
    for g in [g1, g2] {
        let size = g.n() + g.m();
        if size > ISO_TRANSPORT_LIMIT {
            return Err(Error::Size {
                what: "subdivision vertices",
                actual: size,
                limit: ISO_TRANSPORT_LIMIT,
            });
        }
    }
    Ok((
        isomorphic(g1, g2),
        isomorphic(&subdivide(g1).sub, &subdivide(g2).sub),
    ))
}
