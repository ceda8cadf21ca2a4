//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always show in
//! `cargo test` output. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use upath_core::report::VerificationReport;
use upath_core::verify::{
    verify_ds_gadget, verify_gadgets, verify_lemmas, verify_solver, verify_subdivision,
};

const SEED: u64 = 20_240_601;

/// Exact sweep bounds.
const GADGET_NMAX: usize = 2;
const GADGET_MMAX: usize = 4;
const DS_GRAPHS: usize = 200;
const DS_NMAX: usize = 8;
const SUB_GRAPHS: usize = 100;
const SUB_NMAX: usize = 7;
const ISO_PAIRS: usize = 50;
const ISO_NMAX: usize = 6;
const SOLVER_NMAX: usize = 8;
const SOLVER_PER_GRAPH: usize = 500;
const LEMMA_PAIRS: usize = 1000;
const LEMMA_NMAX: usize = 9;

struct Sweeps {
    gadget: VerificationReport,
    ds: VerificationReport,
    sub: VerificationReport,
    solver: VerificationReport,
    lemmas: VerificationReport,
    times: [Duration; 5],
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn run_sweeps() -> Sweeps {
    let (gadget, t0) = timed(|| verify_gadgets(GADGET_NMAX, GADGET_MMAX).expect("gadget sweep"));
    let (ds, t1) = timed(|| verify_ds_gadget(SEED, DS_GRAPHS, DS_NMAX).expect("ds sweep"));
    let (sub, t2) = timed(|| {
        verify_subdivision(SEED, SUB_GRAPHS, SUB_NMAX, ISO_PAIRS, ISO_NMAX).expect("subdivision sweep")
    });
    let (solver, t3) = timed(|| verify_solver(SOLVER_NMAX, SEED, SOLVER_PER_GRAPH).expect("solver sweep"));
    let (lemmas, t4) = timed(|| verify_lemmas(SEED, LEMMA_PAIRS, LEMMA_NMAX).expect("lemma sweep"));
    Sweeps {
        gadget,
        ds,
        sub,
        solver,
        lemmas,
        times: [t0, t1, t2, t3, t4],
    }
}

impl Sweeps {
    fn bytes(&self) -> String {
        [&self.gadget, &self.ds, &self.sub, &self.solver, &self.lemmas]
            .iter()
            .map(|r| r.to_json())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Passes iff the named checks all pass; the detail joins theirs.
fn checks(report: &VerificationReport, names: &[&str]) -> (bool, String) {
    let picked: Vec<_> = report.checks.iter().filter(|c| names.contains(&c.name.as_str())).collect();
    let ok = picked.len() == names.len() && picked.iter().all(|c| c.passed);
    let detail = picked.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join(" | ");
    (ok, detail)
}

fn line(failed: &mut bool, id: usize, title: &str, ok: bool, elapsed: Option<(Duration, u64)>, detail: &str) {
    let within = elapsed.is_none_or(|(t, limit)| t.as_secs() < limit);
    let pass = ok && within;
    *failed |= !pass;
    let mark = if pass { "PASS" } else { "FAIL" };
    let time = elapsed.map_or(String::new(), |(t, limit)| format!(" [{:.2}s, limit {limit}s]", t.as_secs_f64()));
    println!("criterion {id} {mark} {title}{time}: {detail}");
}

fn main() -> ExitCode {
    let first = run_sweeps();
    let s = &first;
    let mut failed = false;

    let (ok, d) = checks(&s.gadget, &["gadget-equivalence"]);
    line(&mut failed, 1, "3DM / CDS / Steiner gadget equivalence, n <= 2, m <= 4", ok, Some((s.times[0], 300)), &d);
    let (ok, d) = checks(&s.gadget, &["gadget-structure"]);
    line(&mut failed, 2, "gadget structure: size, path model, diameter, dominating clique, separators", ok, None, &d);
    let (ok, d) = checks(&s.ds, &["ds-gadget-equivalence"]);
    line(&mut failed, 3, "dominating set to Steiner gadget, 200 graphs n <= 8", ok, Some((s.times[1], 120)), &d);
    let (ok, d) = checks(&s.sub, &["subdivision-star-forests", "isomorphism-transport"]);
    line(&mut failed, 4, "subdivision star forests and isomorphism transport", ok, Some((s.times[2], 120)), &d);
    let names = [
        "solver-coverage",
        "solver-agreement",
        "solver-witness",
        "solver-helly",
        "solver-leaf-coverage",
        "solver-trace-replay",
    ];
    let (ok, d) = checks(&s.solver, &names);
    line(&mut failed, 5, "diameter-2 solver vs oracle, all graphs n <= 8", ok, Some((s.times[3], 900)), &d);
    let names = [
        "twin-preservation",
        "simplicial-preservation",
        "leafy-preservation",
        "replacement-feasibility",
    ];
    let (ok, d) = checks(&s.lemmas, &names);
    line(&mut failed, 6, "reduction and exchange fuzzing, 1000 trials each", ok, None, &d);

    let second = run_sweeps();
    let same = first.bytes() == second.bytes();
    let d = format!("{} report bytes compared", first.bytes().len());
    line(&mut failed, 7, "determinism: criteria 1-6 rerun byte-identical", same, None, &d);

    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
