//! File formats: round trips, canonical forms and golden files.
//!
//! Set `UPATH_BLESS=1` to rewrite the golden files.

use std::path::PathBuf;

use proptest::prelude::*;

use upath_core::gen;
use upath_core::io::{
    emit_3dm, emit_graph, emit_model, emit_terminals, parse_3dm, parse_graph, parse_model,
    parse_terminals, TerminalFile,
};
use upath_core::reduction::{steiner_from_3dm, ThreeDMInstance};
use upath_core::report::{csv_table, markdown_table};
use upath_core::verify::verify_gadgets;
use upath_core::{Graph, VertexSet};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPATH_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn smallest_gadget_files() {
    let inst = ThreeDMInstance::new(1, vec![(0, 0, 0)]).unwrap();
    let out = steiner_from_3dm(&inst).unwrap();
    golden("n1m1.3dm", &emit_3dm(&inst));
    golden("n1m1.graph", &emit_graph(&out.graph));
    golden("n1m1.model", &emit_model(out.model.as_ref().unwrap()));
    let tf = TerminalFile {
        terminals: out.terminals.clone(),
        budget: Some(out.budget),
    };
    golden("n1m1.terms", &emit_terminals(&tf));
}

#[test]
fn sweep_tables() {
    let report = verify_gadgets(1, 2).unwrap();
    golden("sweep_n1.md", &markdown_table(&report.rows));
    golden("sweep_n1.csv", &csv_table(&report.rows));
    golden("sweep_n1.json", &report.to_json());
}

#[test]
fn golden_files_parse_back() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let read = |f: &str| std::fs::read_to_string(dir.join(f)).unwrap();
    let g = parse_graph(&read("n1m1.graph")).unwrap();
    let m = parse_model(&read("n1m1.model")).unwrap();
    assert!(m.is_valid_for(&g, true));
    assert_eq!(emit_graph(&g), read("n1m1.graph"));
    assert_eq!(emit_model(&m), read("n1m1.model"));
    assert_eq!(emit_3dm(&parse_3dm(&read("n1m1.3dm")).unwrap()), read("n1m1.3dm"));
    assert_eq!(emit_terminals(&parse_terminals(&read("n1m1.terms")).unwrap()), read("n1m1.terms"));
}

#[test]
fn comments_and_order_do_not_matter() {
    let messy = "# K_3\n\np graph 3 3   # header\ne 2 1\ne 0 2\n  e 1 0\n";
    assert_eq!(emit_graph(&parse_graph(messy).unwrap()), emit_graph(&Graph::complete(3)));
}

proptest! {
    #[test]
    fn graph_round_trip(seed in any::<u64>(), n in 0usize..12) {
        let g = gen::gnp(&mut gen::rng(seed), n, 0.4);
        let text = emit_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(emit_graph(&back), text);
    }

    #[test]
    fn model_round_trip(seed in any::<u64>(), n in 1usize..10, t in 1usize..7) {
        let (_, model) = gen::random_up(&mut gen::rng(seed), n, t);
        let text = emit_model(&model);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(emit_model(&back), text);
        prop_assert_eq!(back.realized_graph(), model.realized_graph());
    }

    #[test]
    fn three_dm_round_trip(seed in any::<u64>(), n in 1usize..4, m in 1usize..6) {
        let inst = gen::random_3dm(&mut gen::rng(seed), n, m.min(n * n * n)).unwrap();
        let text = emit_3dm(&inst);
        prop_assert_eq!(parse_3dm(&text).unwrap(), inst);
    }

    #[test]
    fn terminal_round_trip(members in proptest::collection::btree_set(0usize..50, 0..10), k in proptest::option::of(0usize..20)) {
        let tf = TerminalFile { terminals: VertexSet::new(members), budget: k };
        prop_assert_eq!(parse_terminals(&emit_terminals(&tf)).unwrap(), tf);
    }
}
