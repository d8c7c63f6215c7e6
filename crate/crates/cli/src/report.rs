use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::roundtrip::{ExperimentReport, Technique};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub technique: Technique,
    pub input: String,
    pub agreement: f64,
    pub binarized: bool,
    pub gate_total: usize,
    pub runtime_ms: f64,
    pub cbs_integrity: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// `Some(true)` when QBIP ran faster than NEQR on the same input; `None`
    /// if the pair is missing.
    pub qbip_faster_than_neqr: Option<bool>,
}

impl Comparison {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<10} {:>10} {:>10} {:>12} {:>12} {:>8}\n",
            "technique", "agreement", "binarized", "gates", "runtime_ms", "cbs"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<10} {:>10.4} {:>10} {:>12} {:>12.3} {:>8}",
                r.technique.to_string(),
                r.agreement,
                r.binarized,
                r.gate_total,
                r.runtime_ms,
                r.cbs_integrity
            );
        }
        let verdict = match self.qbip_faster_than_neqr {
            Some(true) => "runtime ordering qbip < neqr: ok",
            Some(false) => "runtime ordering qbip < neqr: VIOLATED",
            None => "runtime ordering qbip < neqr: not checked (needs both on one input)",
        };
        s.push_str(verdict);
        s.push('\n');
        s
    }
}

/// Collects every round-trip report in `dir` and writes `report.csv` and
/// `report.txt` next to them.
pub fn build_report(dir: &Path) -> Result<Comparison> {
    let mut reports: Vec<ExperimentReport> = Vec::new();
    let mut entries: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    entries.sort();
    for path in entries {
        let text = fs::read_to_string(&path)?;
        if let Ok(report) = serde_json::from_str::<ExperimentReport>(&text) {
            reports.push(report);
        }
    }
    if reports.is_empty() {
        bail!("no round-trip reports in {}", dir.display());
    }
    reports.sort_by(|a, b| (a.technique, &a.input).cmp(&(b.technique, &b.input)));

    let find = |t: Technique| reports.iter().filter(move |r| r.technique == t);
    let qbip_faster_than_neqr = find(Technique::Qbip)
        .find_map(|q| find(Technique::Neqr).find(|n| n.input == q.input).map(|n| q.wall_clock_ms < n.wall_clock_ms));

    let rows = reports
        .iter()
        .map(|r| ComparisonRow {
            technique: r.technique,
            input: r.input.clone(),
            agreement: r.pixel_agreement,
            binarized: r.binarized,
            gate_total: r.gate_total,
            runtime_ms: r.wall_clock_ms,
            cbs_integrity: r.cbs_integrity,
        })
        .collect();
    let cmp = Comparison { rows, qbip_faster_than_neqr };
    fs::write(dir.join("report.csv"), cmp.to_csv()?)?;
    fs::write(dir.join("report.txt"), cmp.to_text())?;
    Ok(cmp)
}
