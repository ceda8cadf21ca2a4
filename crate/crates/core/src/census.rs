//! Exhaustive census of small connected undirected path graphs of diameter
//! at most 2, one graph per isomorphism class.
//!
//! The class is closed under deleting a simplicial vertex (distances do not
//! grow, a simplicial vertex is never a cut vertex, and path models restrict),
//! and every chordal graph has one. So level `n + 1` is obtained from level
//! `n` by attaching a new vertex to every nonempty clique and filtering.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::oracle::{isomorphic, refined_colors};
use crate::tree_model::{search_model, SEARCH_VERTEX_CAP};

/// All nonempty cliques of `g`, as sorted member lists in lex order.
pub fn all_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for c in g.maximal_cliques() {
        let members = c.as_slice();
        for mask in 1u32..1 << members.len() {
            let sub: Vec<usize> = (0..members.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| members[i])
                .collect();
            out.insert(sub);
        }
    }
    out.into_iter().collect()
}

fn invariant(g: &Graph) -> (usize, usize, Vec<usize>) {
    let mut colors = refined_colors(g);
    colors.sort_unstable();
    (g.n(), g.m(), colors)
}

fn in_class(g: &Graph) -> Result<bool> {
    if !matches!(g.diameter(), Some(d) if d <= 2) {
        return Ok(false);
    }
    Ok(search_model(g, true, g.n().max(1))?.is_some())
}

/// Connected undirected path graphs of diameter ≤ 2 with `1..=nmax`
/// vertices, up to isomorphism, grouped by vertex count in a deterministic
/// order.
pub fn diam2_up_graphs(nmax: usize) -> Result<Vec<Vec<Graph>>> {
    if nmax > SEARCH_VERTEX_CAP {
        return Err(Error::Size {
            what: "census vertex count",
            actual: nmax,
            limit: SEARCH_VERTEX_CAP,
        });
    }
    let mut levels: Vec<Vec<Graph>> = Vec::new();
    if nmax == 0 {
        return Ok(levels);
    }
    levels.push(vec![Graph::empty(1)]);
    for n in 2..=nmax {
        let prev = levels.last().expect("level 1 exists");
        let candidates: Vec<Graph> = prev
            .par_iter()
            .flat_map_iter(|g| {
                all_cliques(g).into_iter().map(move |c| {
                    let mut b = GraphBuilder::new(n);
                    for (u, v) in g.edges() {
                        b.add_edge(u, v);
                    }
                    for w in c {
                        b.add_edge(w, n - 1);
                    }
                    b.build()
                })
            })
            .collect();
        let keyed: Vec<_> = candidates.into_par_iter().map(|h| (invariant(&h), h)).collect();
        let mut buckets: HashMap<_, Vec<usize>> = HashMap::new();
        let mut unique: Vec<Graph> = Vec::new();
        for (key, h) in keyed {
            let bucket = buckets.entry(key).or_default();
            if bucket.iter().any(|&i| isomorphic(&unique[i], &h)) {
                continue;
            }
            bucket.push(unique.len());
            unique.push(h);
        }
        let keep: Vec<bool> = unique.par_iter().map(in_class).collect::<Result<_>>()?;
        let level = unique.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
        levels.push(level);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // n = 1: K1; n = 2: K2; n = 3: P3, K3; n = 4: all connected chordal
        // graphs of diameter ≤ 2 (K4, diamond, paw, claw).
        let levels = diam2_up_graphs(4).unwrap();
        let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 4]);
    }

    #[test]
    fn members_are_in_class_and_distinct() {
        let levels = diam2_up_graphs(6).unwrap();
        for level in &levels {
            for (i, g) in level.iter().enumerate() {
                assert!(g.is_connected());
                assert!(g.diameter().unwrap() <= 2);
                for h in &level[..i] {
                    assert!(!isomorphic(g, h));
                }
            }
        }
    }

    #[test]
    fn cliques_of_triangle() {
        assert_eq!(all_cliques(&Graph::complete(3)).len(), 7);
    }
}
