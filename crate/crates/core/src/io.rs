//! Line-oriented instance files.
//!
//! ```text
//! # graph                 # tree model                # 3DM            # terminals
//! p graph <n> <m>         p model <n> <t>             p 3dm <n> <m>    x <v> <v> ...
//! e <u> <v>   (m lines)   t <a> <b>   (t-1 lines)     s <p> <q> <r>    k <budget>
//!                         v <vertex> <node> ...
//! ```
//!
//! Ids are 0-indexed, `#` starts a comment, blank lines are ignored. Every
//! error carries the 1-based line number. `emit_*` writes the canonical
//! form: no comments, sorted lines, single spaces.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::reduction::ThreeDMInstance;
use crate::tree_model::TreeModel;

struct Line<'a> {
    no: usize,
    key: &'a str,
    args: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.no, msg)
    }

    fn nums(&self) -> Result<Vec<usize>> {
        self.args
            .iter()
            .map(|a| a.parse::<usize>().map_err(|_| self.err(format!("'{a}' is not a non-negative integer"))))
            .collect()
    }

    fn exact(&self, count: usize) -> Result<Vec<usize>> {
        let v = self.nums()?;
        if v.len() != count {
            return Err(self.err(format!("'{}' takes {count} integers, got {}", self.key, v.len())));
        }
        Ok(v)
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        let mut parts = body.split_whitespace();
        let key = parts.next()?;
        Some(Line {
            no: i + 1,
            key,
            args: parts.collect(),
        })
    })
}

/// Reads the `p <kind> a b` header and returns the two counts plus the
/// remaining lines.
fn header<'a>(text: &'a str, kind: &str) -> Result<(usize, usize, Vec<Line<'a>>)> {
    let mut all: Vec<Line> = lines(text).collect();
    if all.is_empty() {
        return Err(Error::parse(1, format!("missing 'p {kind}' header")));
    }
    let head = all.remove(0);
    if head.key != "p" || head.args.first() != Some(&kind) {
        return Err(head.err(format!("expected 'p {kind} ...' header")));
    }
    let counts = Line {
        no: head.no,
        key: "p",
        args: head.args[1..].to_vec(),
    }
    .exact(2)?;
    Ok((counts[0], counts[1], all))
}

fn expect_key(line: &Line, key: &str) -> Result<()> {
    if line.key != key {
        return Err(line.err(format!("unexpected '{}' line, expected '{key}'", line.key)));
    }
    Ok(())
}

fn in_range(line: &Line, v: usize, n: usize, what: &str) -> Result<()> {
    if v >= n {
        return Err(line.err(format!("{what} {v} out of range (< {n})")));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (n, m, body) = header(text, "graph")?;
    if body.len() != m {
        return Err(Error::parse(
            body.last().map_or(1, |l| l.no),
            format!("header announces {m} edges, found {}", body.len()),
        ));
    }
    let mut seen = BTreeSet::new();
    for line in &body {
        expect_key(line, "e")?;
        let uv = line.exact(2)?;
        let (u, v) = (uv[0], uv[1]);
        in_range(line, u, n, "vertex")?;
        in_range(line, v, n, "vertex")?;
        if u == v {
            return Err(line.err(format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(line.err(format!("duplicate edge {u} {v}")));
        }
    }
    Graph::new(n, seen)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("p graph {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

/// Parses a path model. The host must be a tree and every vertex must be
/// assigned a nonempty set of nodes forming a path of the host.
pub fn parse_model(text: &str) -> Result<TreeModel> {
    let (n, t, body) = header(text, "model")?;
    if t == 0 {
        return Err(Error::parse(1, "host tree needs at least one node"));
    }
    let mut host_edges = BTreeSet::new();
    let mut assignment: Vec<Option<(VertexSet, usize)>> = vec![None; n];
    for line in &body {
        match line.key {
            "t" => {
                let ab = line.exact(2)?;
                in_range(line, ab[0], t, "node")?;
                in_range(line, ab[1], t, "node")?;
                if ab[0] == ab[1] || !host_edges.insert((ab[0].min(ab[1]), ab[0].max(ab[1]))) {
                    return Err(line.err(format!("bad or repeated host edge {} {}", ab[0], ab[1])));
                }
            }
            "v" => {
                let vals = line.nums()?;
                let Some((&u, nodes)) = vals.split_first() else {
                    return Err(line.err("'v' needs a vertex"));
                };
                in_range(line, u, n, "vertex")?;
                if nodes.is_empty() {
                    return Err(line.err(format!("vertex {u} has no nodes")));
                }
                for &x in nodes {
                    in_range(line, x, t, "node")?;
                }
                let set = VertexSet::new(nodes.iter().copied());
                if set.len() != nodes.len() {
                    return Err(line.err(format!("vertex {u} lists a node twice")));
                }
                if assignment[u].replace((set, line.no)).is_some() {
                    return Err(line.err(format!("vertex {u} assigned twice")));
                }
            }
            other => return Err(line.err(format!("unexpected '{other}' line in model"))),
        }
    }
    let last = body.last().map_or(1, |l| l.no);
    if host_edges.len() != t - 1 {
        return Err(Error::parse(last, format!("host needs {} edges, found {}", t - 1, host_edges.len())));
    }
    let host = Graph::new(t, host_edges)?;
    if !host.is_connected() {
        return Err(Error::parse(last, "host is not a tree"));
    }
    let mut sets = Vec::with_capacity(n);
    let mut lines_of = Vec::with_capacity(n);
    for (u, a) in assignment.into_iter().enumerate() {
        let (set, no) = a.ok_or_else(|| Error::parse(last, format!("vertex {u} has no 'v' line")))?;
        sets.push(set);
        lines_of.push(no);
    }
    let model = TreeModel::new(host, sets)?;
    for (u, &no) in lines_of.iter().enumerate() {
        if model.path_order(u).is_none() {
            return Err(Error::parse(no, format!("vertex {u}: nodes do not form a path of the host")));
        }
    }
    Ok(model)
}

pub fn emit_model(model: &TreeModel) -> String {
    let host = model.host();
    let mut out = format!("p model {} {}\n", model.num_vertices(), model.num_nodes());
    for (a, b) in host.edges() {
        writeln!(out, "t {a} {b}").unwrap();
    }
    for u in 0..model.num_vertices() {
        write!(out, "v {u}").unwrap();
        for t in model.nodes_of(u).iter() {
            write!(out, " {t}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_3dm(text: &str) -> Result<ThreeDMInstance> {
    let (n, m, body) = header(text, "3dm")?;
    if body.len() != m {
        return Err(Error::parse(
            body.last().map_or(1, |l| l.no),
            format!("header announces {m} triples, found {}", body.len()),
        ));
    }
    let mut triples = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    for line in &body {
        expect_key(line, "s")?;
        let s = line.exact(3)?;
        for &i in &s {
            in_range(line, i, n, "element")?;
        }
        let triple = (s[0], s[1], s[2]);
        if !seen.insert(triple) {
            return Err(line.err(format!("duplicate triple {} {} {}", s[0], s[1], s[2])));
        }
        triples.push(triple);
    }
    ThreeDMInstance::new(n, triples)
}

pub fn emit_3dm(inst: &ThreeDMInstance) -> String {
    let mut out = format!("p 3dm {} {}\n", inst.n, inst.m());
    for &(p, q, r) in &inst.triples {
        writeln!(out, "s {p} {q} {r}").unwrap();
    }
    out
}

/// Terminal set (`x` line) and optional budget (`k` line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalFile {
    pub terminals: VertexSet,
    pub budget: Option<usize>,
}

pub fn parse_terminals(text: &str) -> Result<TerminalFile> {
    let mut terminals = None;
    let mut budget = None;
    for line in lines(text) {
        match line.key {
            "x" if terminals.is_none() => {
                let vals = line.nums()?;
                let set = VertexSet::new(vals.iter().copied());
                if set.len() != vals.len() {
                    return Err(line.err("terminal listed twice"));
                }
                terminals = Some(set);
            }
            "k" if budget.is_none() => budget = Some(line.exact(1)?[0]),
            "x" | "k" => return Err(line.err(format!("repeated '{}' line", line.key))),
            other => return Err(line.err(format!("unexpected '{other}' line in terminal file"))),
        }
    }
    Ok(TerminalFile {
        terminals: terminals.ok_or_else(|| Error::parse(1, "missing 'x' line"))?,
        budget,
    })
}

pub fn emit_terminals(tf: &TerminalFile) -> String {
    let mut out = String::from("x");
    for v in tf.terminals.iter() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    if let Some(k) = tf.budget {
        writeln!(out, "k {k}").unwrap();
    }
    out
}

/// Budget-only file: a single `k` line.
pub fn parse_budget(text: &str) -> Result<usize> {
    let mut found = None;
    for line in lines(text) {
        expect_key(&line, "k")?;
        if found.is_some() {
            return Err(line.err("repeated 'k' line"));
        }
        found = Some(line.exact(1)?[0]);
    }
    found.ok_or_else(|| Error::parse(1, "missing 'k' line"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_graph() {
        let g = parse_graph("# an edge\np graph 2 1\ne 1 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(emit_graph(&g), "p graph 2 1\ne 0 1\n");
    }

    #[test]
    fn graph_errors_carry_lines() {
        let err = |t: &str| match parse_graph(t) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(err("p graph 2 1\ne 0 2\n").0, 2);
        assert!(err("p graph 3 2\ne 0 1\n\ne 1 0\n").1.contains("duplicate"));
        assert_eq!(err("p graph 3 2\ne 0 1\n\ne 1 0\n").0, 4);
        assert_eq!(err("p graph 2 2\ne 0 1\n").0, 2);
        assert_eq!(err("\n\nq graph 2 1\n").0, 3);
        assert!(err("p graph 2 1\ne 0 0\n").1.contains("self-loop"));
    }

    #[test]
    fn model_round_trip() {
        let text = "p model 4 3\nt 1 0\nt 1 2\nv 0 2 1 0\nv 1 0\nv 2 2\nv 3 1\n";
        let m = parse_model(text).unwrap();
        let canon = emit_model(&m);
        assert_eq!(canon, "p model 4 3\nt 0 1\nt 1 2\nv 0 0 1 2\nv 1 0\nv 2 2\nv 3 1\n");
        assert_eq!(emit_model(&parse_model(&canon).unwrap()), canon);
    }

    #[test]
    fn model_rejects_non_path() {
        // Star host: centre 0 with three leaves; vertex 1 takes all four nodes.
        let text = "p model 2 4\nt 0 1\nt 0 2\nt 0 3\nv 0 0\nv 1 0 1 2 3\n";
        match parse_model(text) {
            Err(Error::Parse { line: 6, msg }) => assert!(msg.contains("vertex 1")),
            other => panic!("{other:?}"),
        }
        let split = "p model 1 3\nt 0 1\nt 1 2\nv 0 0 2\n";
        assert!(matches!(parse_model(split), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn three_dm_range() {
        assert!(parse_3dm("p 3dm 1 1\ns 0 0 1\n").is_err());
        let inst = parse_3dm("p 3dm 2 2\ns 0 0 0\ns 1 1 1\n").unwrap();
        assert_eq!(emit_3dm(&inst), "p 3dm 2 2\ns 0 0 0\ns 1 1 1\n");
    }

    #[test]
    fn terminals_and_budget() {
        let tf = parse_terminals("x 3 1 2\nk 4\n").unwrap();
        assert_eq!(tf.terminals, VertexSet::new([1, 2, 3]));
        assert_eq!(emit_terminals(&tf), "x 1 2 3\nk 4\n");
        assert!(parse_terminals("k 1\n").is_err());
        assert!(parse_terminals("x 1 1\n").is_err());
        assert_eq!(parse_budget("# b\nk 7\n").unwrap(), 7);
    }
}
