//! Novice/expert partition and per-problem chi-square tests over the
//! summarized error groups.

mod report;
pub mod special;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ingest::SubmissionRecord;
use crate::rules::{summary_rank, ErrorLabel};

pub use report::{difference_report, DifferenceReport, Direction, ReportRow, RATIO_NOTE};

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum UserLevel {
    Novice,
    Expert,
    Other,
}

impl fmt::Display for UserLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UserLevel::Novice => "NOVICE",
            UserLevel::Expert => "EXPERT",
            UserLevel::Other => "OTHER",
        })
    }
}

/// Level of one user from their full submission history.
///
/// Novice: has solved something, every solved problem is introductory, and
/// non-accepted submissions outnumber accepted ones more than five times.
/// Expert: more than ten distinct non-introductory problems solved.
pub fn classify_user_level(history: &[SubmissionRecord], intro_problems: &HashSet<String>) -> UserLevel {
    let accepted = history.iter().filter(|r| r.verdict.is_accepted()).count();
    let rejected = history.len() - accepted;
    let solved: BTreeSet<&str> = history
        .iter()
        .filter(|r| r.verdict.is_accepted())
        .map(|r| r.problem_id.as_str())
        .collect();
    let hard_solved = solved.iter().filter(|p| !intro_problems.contains(**p)).count();
    if hard_solved > 10 {
        UserLevel::Expert
    } else if !solved.is_empty() && hard_solved == 0 && rejected > 5 * accepted {
        UserLevel::Novice
    } else {
        UserLevel::Other
    }
}

/// Levels of every user in a log.
pub fn user_levels(records: &[SubmissionRecord], intro_problems: &HashSet<String>) -> BTreeMap<String, UserLevel> {
    let mut by_user: BTreeMap<&str, Vec<SubmissionRecord>> = BTreeMap::new();
    for r in records {
        by_user.entry(r.user_id.as_str()).or_default().push(r.clone());
    }
    by_user
        .into_iter()
        .map(|(user, history)| (user.to_owned(), classify_user_level(&history, intro_problems)))
        .collect()
}

/// Owner of a pair id: the user and problem of its WA submission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOwner {
    pub user_id: String,
    pub problem_id: String,
}

/// Resolves pair ids of the form `<wa id>:<ac id>` against a log. Submission
/// ids may themselves contain `:`; every split point is tried.
pub fn pair_owners<'a>(
    pair_ids: impl IntoIterator<Item = &'a str>,
    records: &[SubmissionRecord],
) -> HashMap<String, PairOwner> {
    let by_id: HashMap<&str, &SubmissionRecord> = records.iter().map(|r| (r.submission_id.as_str(), r)).collect();
    let mut out = HashMap::new();
    for id in pair_ids {
        let owner = id.match_indices(':').find_map(|(k, _)| {
            let (wa, ac) = (&id[..k], &id[k + 1..]);
            match (by_id.get(wa), by_id.get(ac)) {
                (Some(w), Some(_)) => Some(PairOwner {
                    user_id: w.user_id.clone(),
                    problem_id: w.problem_id.clone(),
                }),
                _ => None,
            }
        });
        if let Some(owner) = owner {
            out.insert(id.to_owned(), owner);
        }
    }
    out
}

pub const COLUMNS: [UserLevel; 2] = [UserLevel::Novice, UserLevel::Expert];

/// Error-group by user-level counts for one problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub problem_id: String,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
    /// `counts[i][j]`: pairs of column-`j` users containing error group `i`.
    pub counts: Vec<Vec<u64>>,
    /// Groups that were seen but had a zero row total.
    pub dropped_rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Untestable {
    #[error("problem {problem_id}: {rows} error group(s) present, at least 2 needed")]
    TooFewRows { problem_id: String, rows: usize },
    #[error("problem {problem_id}: no {column} errors")]
    EmptyColumn { problem_id: String, column: String },
}

impl ContingencyTable {
    /// A table from explicit counts. Zero-total rows are moved to `dropped_rows`.
    pub fn from_counts(
        problem_id: &str,
        row_names: Vec<String>,
        col_names: Vec<String>,
        counts: Vec<Vec<u64>>,
    ) -> Self {
        let mut table = ContingencyTable {
            problem_id: problem_id.to_owned(),
            row_names: Vec::new(),
            col_names,
            counts: Vec::new(),
            dropped_rows: Vec::new(),
        };
        for (name, row) in row_names.into_iter().zip(counts) {
            if row.iter().sum::<u64>() == 0 {
                table.dropped_rows.push(name);
            } else {
                table.row_names.push(name);
                table.counts.push(row);
            }
        }
        table
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.col_names.len())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn dof(&self) -> usize {
        self.row_names.len().saturating_sub(1) * self.col_names.len().saturating_sub(1)
    }

    /// Expected counts under independence, `n_i n_j / N`.
    pub fn expected(&self) -> Vec<Vec<f64>> {
        let (rows, cols, n) = (self.row_totals(), self.col_totals(), self.total() as f64);
        rows.iter()
            .map(|&ri| cols.iter().map(|&cj| ri as f64 * cj as f64 / n).collect())
            .collect()
    }

    /// Ok when every expected count is positive and dof is at least 1.
    pub fn check_testable(&self) -> Result<(), Untestable> {
        if self.row_names.len() < 2 || self.col_names.len() < 2 {
            return Err(Untestable::TooFewRows {
                problem_id: self.problem_id.clone(),
                rows: self.row_names.len(),
            });
        }
        if let Some(j) = self.col_totals().iter().position(|&c| c == 0) {
            return Err(Untestable::EmptyColumn {
                problem_id: self.problem_id.clone(),
                column: self.col_names[j].clone(),
            });
        }
        Ok(())
    }
}

/// A label joined to the owner and level of its pair.
#[derive(Debug, Clone, Copy)]
pub struct LevelledLabel<'a> {
    pub label: &'a ErrorLabel,
    pub problem_id: &'a str,
    pub level: UserLevel,
}

/// Counts, for one problem, the pairs of novice and expert users in which
/// each summarized error occurs. A pair counts at most once per group;
/// `OTHER` users and other problems are ignored. Rows follow the standard
/// group order, unknown groups last by name.
pub fn build_table(problem_id: &str, labels: &[LevelledLabel<'_>]) -> ContingencyTable {
    let mut seen: BTreeMap<(usize, &str), [BTreeSet<&str>; 2]> = BTreeMap::new();
    for l in labels.iter().filter(|l| l.problem_id == problem_id) {
        let Some(col) = COLUMNS.iter().position(|&c| c == l.level) else {
            continue;
        };
        let key = (summary_rank(&l.label.summary), l.label.summary.as_str());
        seen.entry(key).or_default()[col].insert(l.label.pair_id.as_str());
    }
    let (names, counts): (Vec<String>, Vec<Vec<u64>>) = seen
        .into_iter()
        .map(|((_, name), pairs)| (name.to_owned(), pairs.iter().map(|s| s.len() as u64).collect()))
        .unzip();
    ContingencyTable::from_counts(
        problem_id,
        names,
        COLUMNS.iter().map(|c| c.to_string()).collect(),
        counts,
    )
}

/// One table per problem that has labels from novice or expert users,
/// ordered by problem id.
pub fn build_tables(labels: &[LevelledLabel<'_>]) -> Vec<ContingencyTable> {
    let problems: BTreeSet<&str> = labels
        .iter()
        .filter(|l| COLUMNS.contains(&l.level))
        .map(|l| l.problem_id)
        .collect();
    problems.into_iter().map(|p| build_table(p, labels)).collect()
}

/// Joins labels to their pair owners and user levels. Labels whose pair or
/// user cannot be resolved are skipped and counted.
pub fn join_levels<'a>(
    labels: &'a [ErrorLabel],
    owners: &'a HashMap<String, PairOwner>,
    levels: &BTreeMap<String, UserLevel>,
) -> (Vec<LevelledLabel<'a>>, usize) {
    let mut out = Vec::with_capacity(labels.len());
    let mut unresolved = 0;
    for label in labels {
        match owners
            .get(&label.pair_id)
            .and_then(|o| levels.get(&o.user_id).map(|&lv| (o, lv)))
        {
            Some((owner, level)) => out.push(LevelledLabel {
                label,
                problem_id: &owner.problem_id,
                level,
            }),
            None => unresolved += 1,
        }
    }
    (out, unresolved)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of independence.
pub fn chi_square_test(t: &ContingencyTable) -> Result<ChiSquare, Untestable> {
    t.check_testable()?;
    let expected = t.expected();
    let mut chi_square = 0.0;
    for (row, exp_row) in t.counts.iter().zip(&expected) {
        for (&o, &e) in row.iter().zip(exp_row) {
            let d = o as f64 - e;
            chi_square += d * d / e;
        }
    }
    let dof = t.dof();
    Ok(ChiSquare {
        chi_square,
        dof,
        p_value: special::chi_square_sf(chi_square, dof),
    })
}

/// Standardized Pearson residuals and their two-tailed normal p-values.
/// A cell whose row or column holds the whole table is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub residuals: Vec<Vec<Option<f64>>>,
    pub p_values: Vec<Vec<Option<f64>>>,
}

pub fn residual_analysis(t: &ContingencyTable) -> Result<Residuals, Untestable> {
    t.check_testable()?;
    let expected = t.expected();
    let (rows, cols, n) = (t.row_totals(), t.col_totals(), t.total() as f64);
    let mut residuals = Vec::with_capacity(rows.len());
    let mut p_values = Vec::with_capacity(rows.len());
    for (i, row) in t.counts.iter().enumerate() {
        let mut r_row = Vec::with_capacity(cols.len());
        let mut p_row = Vec::with_capacity(cols.len());
        for (j, &o) in row.iter().enumerate() {
            let e = expected[i][j];
            let scale = e * (1.0 - rows[i] as f64 / n) * (1.0 - cols[j] as f64 / n);
            if scale > 0.0 {
                let r = (o as f64 - e) / scale.sqrt();
                r_row.push(Some(r));
                p_row.push(Some(special::normal_two_tailed(r)));
            } else {
                r_row.push(None);
                p_row.push(None);
            }
        }
        residuals.push(r_row);
        p_values.push(p_row);
    }
    Ok(Residuals { residuals, p_values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub residuals: Residuals,
    pub alpha: f64,
}

/// Chi-square test plus residuals at significance level `alpha`.
pub fn test_table(t: &ContingencyTable, alpha: f64) -> Result<TestResult, Untestable> {
    let chi = chi_square_test(t)?;
    let residuals = residual_analysis(t)?;
    Ok(TestResult {
        chi_square: chi.chi_square,
        dof: chi.dof,
        p_value: chi.p_value,
        residuals,
        alpha,
    })
}
