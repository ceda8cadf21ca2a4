//! Verification reports and their byte-stable serialisations.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Stable 64-bit digest (hex) of a canonical text rendering.
pub fn digest(canonical: &str) -> String {
    let full = Sha256::digest(canonical.as_bytes());
    hex::encode(&full[..8])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One row of the reduction table: a 3D-matching instance and the optima
/// of its gadget graph against the `2m + n` threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRow {
    pub digest: String,
    pub n: usize,
    pub m: usize,
    pub matching: bool,
    /// `None` when the gadget graph is disconnected.
    pub cds: Option<usize>,
    pub steiner: Option<usize>,
    pub bound: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance_digest: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<GadgetRow>,
    /// Wall-clock per phase. Not serialised, so that reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl VerificationReport {
    pub fn new(instance_digest: impl Into<String>) -> Self {
        VerificationReport {
            instance_digest: instance_digest.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.rows.extend(other.rows);
        self.timings.extend(other.timings);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering; includes timings when `with_timings`.
    pub fn to_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        writeln!(out, "digest {}", self.instance_digest).unwrap();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(out, "{mark} {}", c.name).unwrap();
            } else {
                writeln!(out, "{mark} {}: {}", c.name, c.detail).unwrap();
            }
        }
        if with_timings {
            for (phase, t) in &self.timings {
                writeln!(out, "time {phase} {:.3}s", t.as_secs_f64()).unwrap();
            }
        }
        let verdict = if self.passed() { "pass" } else { "fail" };
        writeln!(out, "overall {verdict}").unwrap();
        out
    }
}

const TABLE_HEADER: [&str; 8] = ["n", "m", "3dm", "cds", "steiner", "bound", "agree", "digest"];

fn row_cells(r: &GadgetRow) -> [String; 8] {
    let opt = |v: Option<usize>| v.map_or_else(|| "inf".to_string(), |x| x.to_string());
    [
        r.n.to_string(),
        r.m.to_string(),
        if r.matching { "yes" } else { "no" }.to_string(),
        opt(r.cds),
        opt(r.steiner),
        r.bound.to_string(),
        if r.agree { "yes" } else { "no" }.to_string(),
        r.digest.clone(),
    ]
}

fn sorted(rows: &[GadgetRow]) -> Vec<&GadgetRow> {
    let mut rows: Vec<&GadgetRow> = rows.iter().collect();
    rows.sort_by(|a, b| a.digest.cmp(&b.digest));
    rows
}

/// Markdown table, rows ordered by instance digest.
pub fn markdown_table(rows: &[GadgetRow]) -> String {
    let mut out = String::new();
    writeln!(out, "| {} |", TABLE_HEADER.join(" | ")).unwrap();
    writeln!(out, "|{}", "---|".repeat(TABLE_HEADER.len())).unwrap();
    for r in sorted(rows) {
        writeln!(out, "| {} |", row_cells(r).join(" | ")).unwrap();
    }
    out
}

/// CSV table, rows ordered by instance digest.
pub fn csv_table(rows: &[GadgetRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{}", TABLE_HEADER.join(",")).unwrap();
    for r in sorted(rows) {
        writeln!(out, "{}", row_cells(r).join(",")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(digest: &str, cds: Option<usize>) -> GadgetRow {
        GadgetRow {
            digest: digest.into(),
            n: 1,
            m: 1,
            matching: true,
            cds,
            steiner: cds,
            bound: 3,
            agree: true,
        }
    }

    #[test]
    fn empty_sweep_gives_header_only() {
        assert_eq!(markdown_table(&[]).lines().count(), 2);
        assert_eq!(csv_table(&[]), "n,m,3dm,cds,steiner,bound,agree,digest\n");
    }

    #[test]
    fn rows_sorted_by_digest() {
        let csv = csv_table(&[row("bb", Some(3)), row("aa", None)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "1,1,yes,inf,inf,3,yes,aa");
        assert_eq!(lines[2], "1,1,yes,3,3,3,yes,bb");
    }

    #[test]
    fn json_omits_timings_and_round_trips() {
        let mut r = VerificationReport::new("abc");
        r.check("x", true, "");
        r.timings.push(("phase".into(), Duration::from_millis(5)));
        let json = r.to_json();
        assert!(!json.contains("phase"));
        let back = VerificationReport::from_json(&json).unwrap();
        assert_eq!(back.checks, r.checks);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("p graph 0 0\n"), digest("p graph 0 0\n"));
        assert_ne!(digest("a"), digest("b"));
        assert_eq!(digest("").len(), 16);
    }
}
