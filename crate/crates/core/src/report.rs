//! Report types and their deterministic renderings.
//!
//! The CSV contract is bit-exact for fixture comparison: header line,
//! rows sorted ascending by degree, LF line endings, no trailing newline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::BettiTable;
use crate::window::TruncationWindow;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportParseError {
    #[error("bad CSV header `{0}`")]
    BadHeader(String),
    #[error("bad CSV row `{0}`")]
    BadRow(String),
    #[error("CSV table has no rows")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { first_mismatch: i64 },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Side-by-side comparison of two Betti tables with a pass/fail verdict.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub left: BettiTable,
    pub right: BettiTable,
    pub compared_window: TruncationWindow,
    pub verdict: Verdict,
    pub left_provenance: String,
    pub right_provenance: String,
    pub hypothesis_violated: bool,
}

impl DualityReport {
    pub fn from_tables(
        left: BettiTable,
        right: BettiTable,
        compared_window: TruncationWindow,
        left_provenance: impl Into<String>,
        right_provenance: impl Into<String>,
    ) -> Self {
        let verdict = match left.agree_on(&right, &compared_window) {
            Ok(()) => Verdict::Pass,
            Err(first_mismatch) => Verdict::Fail { first_mismatch },
        };
        DualityReport {
            left,
            right,
            compared_window,
            verdict,
            left_provenance: left_provenance.into(),
            right_provenance: right_provenance.into(),
            hypothesis_violated: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// `degree,dimension` CSV for a Betti table.
pub fn betti_to_csv(table: &BettiTable) -> String {
    let mut out = String::from("degree,dimension");
    for (degree, dim) in table.iter() {
        out.push('\n');
        out.push_str(&format!("{degree},{dim}"));
    }
    out
}

pub fn betti_from_csv(text: &str) -> Result<BettiTable, ReportParseError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header.trim() != "degree,dimension" {
        return Err(ReportParseError::BadHeader(header.to_string()));
    }
    let mut rows: Vec<(i64, usize)> = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (d, n) = line
            .split_once(',')
            .ok_or_else(|| ReportParseError::BadRow(line.to_string()))?;
        let degree: i64 = d
            .trim()
            .parse()
            .map_err(|_| ReportParseError::BadRow(line.to_string()))?;
        let dim: usize = n
            .trim()
            .parse()
            .map_err(|_| ReportParseError::BadRow(line.to_string()))?;
        rows.push((degree, dim));
    }
    if rows.is_empty() {
        return Err(ReportParseError::Empty);
    }
    let lo = rows.iter().map(|&(d, _)| d).min().unwrap();
    let hi = rows.iter().map(|&(d, _)| d).max().unwrap();
    Ok(BettiTable::new(TruncationWindow::exact(lo, hi), rows))
}

/// Paired-column CSV for a duality report.
pub fn duality_to_csv(report: &DualityReport) -> String {
    let mut out = String::from("degree,left_dimension,right_dimension");
    for degree in report.compared_window.degrees() {
        let l = report.left.dimension(degree).unwrap_or(0);
        let r = report.right.dimension(degree).unwrap_or(0);
        out.push('\n');
        out.push_str(&format!("{degree},{l},{r}"));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct WindowDoc {
    lo: i64,
    hi: i64,
    word_bound: Option<usize>,
    certified: bool,
}

impl From<&TruncationWindow> for WindowDoc {
    fn from(w: &TruncationWindow) -> Self {
        WindowDoc {
            lo: w.lo,
            hi: w.hi,
            word_bound: (w.word_bound != usize::MAX).then_some(w.word_bound),
            certified: w.certified,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BettiRow {
    degree: i64,
    dimension: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct BettiDoc {
    kind: String,
    window: WindowDoc,
    entries: Vec<BettiRow>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DualityRow {
    degree: i64,
    left: usize,
    right: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct DualityDoc {
    kind: String,
    verdict: String,
    first_mismatch: Option<i64>,
    hypothesis_violated: bool,
    window: WindowDoc,
    left_provenance: String,
    right_provenance: String,
    entries: Vec<DualityRow>,
}

/// Stable-key-order JSON for a Betti table.
pub fn betti_to_json(table: &BettiTable) -> String {
    let doc = BettiDoc {
        kind: "betti".into(),
        window: table.window().into(),
        entries: table
            .iter()
            .map(|(degree, dimension)| BettiRow { degree, dimension })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("report serialization")
}

pub fn betti_from_json(text: &str) -> Result<BettiTable, serde_json::Error> {
    let doc: BettiDoc = serde_json::from_str(text)?;
    let window = TruncationWindow {
        lo: doc.window.lo,
        hi: doc.window.hi,
        word_bound: doc.window.word_bound.unwrap_or(usize::MAX),
        certified: doc.window.certified,
    };
    Ok(BettiTable::new(
        window,
        doc.entries.into_iter().map(|r| (r.degree, r.dimension)),
    ))
}

pub fn duality_to_json(report: &DualityReport) -> String {
    let (verdict, first_mismatch) = match report.verdict {
        Verdict::Pass => ("pass".to_string(), None),
        Verdict::Fail { first_mismatch } => ("fail".to_string(), Some(first_mismatch)),
    };
    let doc = DualityDoc {
        kind: "duality".into(),
        verdict,
        first_mismatch,
        hypothesis_violated: report.hypothesis_violated,
        window: (&report.compared_window).into(),
        left_provenance: report.left_provenance.clone(),
        right_provenance: report.right_provenance.clone(),
        entries: report
            .compared_window
            .degrees()
            .map(|degree| DualityRow {
                degree,
                left: report.left.dimension(degree).unwrap_or(0),
                right: report.right.dimension(degree).unwrap_or(0),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("report serialization")
}

/// Human-readable table.
pub fn betti_to_text(table: &BettiTable) -> String {
    let mut out = String::new();
    out.push_str("degree  dimension\n");
    for (degree, dim) in table.iter() {
        out.push_str(&format!("{degree:>6}  {dim}\n"));
    }
    out
}

pub fn duality_to_text(report: &DualityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("left:  {}\n", report.left_provenance));
    out.push_str(&format!("right: {}\n", report.right_provenance));
    if report.hypothesis_violated {
        out.push_str("hypothesis: VIOLATED (input is not a perfect chain-level module)\n");
    }
    out.push_str("degree  left  right\n");
    for degree in report.compared_window.degrees() {
        let l = report.left.dimension(degree).unwrap_or(0);
        let r = report.right.dimension(degree).unwrap_or(0);
        let mark = if l == r { "" } else { "  <-- mismatch" };
        out.push_str(&format!("{degree:>6}  {l:>4}  {r:>5}{mark}\n"));
    }
    match report.verdict {
        Verdict::Pass => out.push_str("verdict: pass\n"),
        Verdict::Fail { first_mismatch } => {
            out.push_str(&format!("verdict: FAIL (first mismatch at degree {first_mismatch})\n"))
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_contract() {
        let t = BettiTable::new(TruncationWindow::exact(0, 0), vec![(0, 1)]);
        assert_eq!(betti_to_csv(&t), "degree,dimension\n0,1");

        let empty = BettiTable::new(TruncationWindow::exact(0, 0), Vec::<(i64, usize)>::new());
        // window degree 0 is listed explicitly with dimension 0
        assert_eq!(betti_to_csv(&empty), "degree,dimension\n0,0");
    }

    #[test]
    fn csv_round_trip() {
        let t = BettiTable::new(
            TruncationWindow::exact(-2, 2),
            vec![(-2, 1), (0, 3), (2, 1)],
        );
        let csv = betti_to_csv(&t);
        let back = betti_from_csv(&csv).unwrap();
        assert_eq!(betti_to_csv(&back), csv);
        assert!(betti_from_csv("degree,dimension").is_err());
        assert!(betti_from_csv("bogus").is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = BettiTable::new(TruncationWindow::exact(-1, 1), vec![(0, 2)]);
        let json = betti_to_json(&t);
        let back = betti_from_json(&json).unwrap();
        assert_eq!(betti_to_json(&back), json);
    }

    #[test]
    fn verdict_from_tables() {
        let w = TruncationWindow::exact(0, 2);
        let a = BettiTable::new(w, vec![(0, 1), (2, 1)]);
        let b = BettiTable::new(w, vec![(0, 1), (2, 2)]);
        let r = DualityReport::from_tables(a.clone(), a.clone(), w, "l", "r");
        assert!(r.passed());
        let r = DualityReport::from_tables(a, b, w, "l", "r");
        assert_eq!(r.verdict, Verdict::Fail { first_mismatch: 2 });
        let csv = duality_to_csv(&r);
        assert!(csv.starts_with("degree,left_dimension,right_dimension\n0,1,1"));
    }
}
