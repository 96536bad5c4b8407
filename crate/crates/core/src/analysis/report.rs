use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{test_table, ContingencyTable, UserLevel, COLUMNS};

const NOVICE: usize = 0;
const EXPERT: usize = 1;
const _: () = assert!(matches!(COLUMNS[NOVICE], UserLevel::Novice) && matches!(COLUMNS[EXPERT], UserLevel::Expert));

/// Definition of the ratio columns, printed in the report header.
pub const RATIO_NOTE: &str =
    "ratio = the group's labels on the problem for the level / all labels on the problem for that level";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Novice,
    Expert,
    Equal,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Novice => "NOVICE",
            Direction::Expert => "EXPERT",
            Direction::Equal => "EQUAL",
        })
    }
}

/// One significant error group on one significant problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub problem_id: String,
    pub chi2: f64,
    pub dof: usize,
    pub p: f64,
    pub rule: String,
    /// Residual of the novice cell; the expert cell has the same magnitude.
    pub residual: f64,
    pub residual_p: f64,
    pub novice_ratio: f64,
    pub expert_ratio: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceReport {
    pub alpha: f64,
    pub tested: usize,
    pub rows: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

/// Tests every table and keeps the groups whose residual is significant on
/// problems whose chi-square test is significant. Rows are ordered by problem
/// id, then by table row order.
pub fn difference_report(tables: &[ContingencyTable], alpha: f64) -> DifferenceReport {
    let mut sorted: Vec<&ContingencyTable> = tables.iter().collect();
    sorted.sort_by(|a, b| a.problem_id.cmp(&b.problem_id));
    let mut report = DifferenceReport {
        alpha,
        tested: 0,
        rows: Vec::new(),
        warnings: Vec::new(),
    };
    for t in sorted {
        let result = match test_table(t, alpha) {
            Ok(r) => r,
            Err(e) => {
                report.warnings.push(format!("untestable: {e}"));
                continue;
            }
        };
        report.tested += 1;
        if result.p_value >= alpha {
            continue;
        }
        let col_totals = t.col_totals();
        for (i, name) in t.row_names.iter().enumerate() {
            let (Some(r), Some(rp)) = (
                result.residuals.residuals[i][NOVICE],
                result.residuals.p_values[i][NOVICE],
            ) else {
                continue;
            };
            if rp >= alpha {
                continue;
            }
            let ratio = |j: usize| t.counts[i][j] as f64 / col_totals[j] as f64;
            let (novice_ratio, expert_ratio) = (ratio(NOVICE), ratio(EXPERT));
            let direction = if novice_ratio > expert_ratio {
                Direction::Novice
            } else if expert_ratio > novice_ratio {
                Direction::Expert
            } else {
                Direction::Equal
            };
            report.rows.push(ReportRow {
                problem_id: t.problem_id.clone(),
                chi2: result.chi_square,
                dof: result.dof,
                p: result.p_value,
                rule: name.clone(),
                residual: r,
                residual_p: rp,
                novice_ratio,
                expert_ratio,
                direction,
            });
        }
    }
    report
}

impl DifferenceReport {
    /// Aligned table: problem, chi-square p, group, residual p and the two
    /// ratios, with the larger ratio marked `*`. Untestable tables follow in a
    /// warnings section.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# significant differences between novices and experts (alpha = {})",
            self.alpha
        );
        let _ = writeln!(out, "# {RATIO_NOTE}");
        let _ = writeln!(out, "# tables tested: {}", self.tested);
        let mut grid = vec![["problem", "chi2 p", "rule", "residual p", "novice %", "expert %"].map(String::from)];
        for row in &self.rows {
            let mark =
                |ratio: f64, d: Direction| format!("{:.1}{}", 100.0 * ratio, if row.direction == d { "*" } else { "" });
            grid.push([
                row.problem_id.clone(),
                format!("{:.3e}", row.p),
                row.rule.clone(),
                format!("{:.3e}", row.residual_p),
                mark(row.novice_ratio, Direction::Novice),
                mark(row.expert_ratio, Direction::Expert),
            ]);
        }
        let widths: Vec<usize> = (0..6)
            .map(|k| grid.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
            .collect();
        for row in &grid {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "warnings:");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }

    /// One JSON object per report row.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(out, "{}", serde_json::to_string(row).expect("report rows serialize"));
        }
        out
    }
}
