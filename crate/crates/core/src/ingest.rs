//! Submission logs and WA→AC code pair construction.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::align::char_levenshtein;

/// Default exclusive upper bound on the character edit distance of a pair.
pub const DEFAULT_MAX_DISTANCE: usize = 100;

/// Judge verdict of a submission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Ac,
    Wa,
    Re,
    Tle,
    Mle,
    Ce,
    Other,
}

impl Verdict {
    /// Maps a log verdict string; anything unrecognised becomes `Other`.
    pub fn parse(raw: &str) -> Self {
        let key: String = raw
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "ac" | "accepted" => Verdict::Ac,
            "wa" | "wronganswer" => Verdict::Wa,
            "re" | "runtimeerror" => Verdict::Re,
            "tle" | "timelimitexceeded" => Verdict::Tle,
            "mle" | "memorylimitexceeded" => Verdict::Mle,
            "ce" | "compileerror" | "compilationerror" => Verdict::Ce,
            _ => Verdict::Other,
        }
    }

    pub fn is_accepted(self) -> bool {
        self == Verdict::Ac
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Ac => "AC",
            Verdict::Wa => "WA",
            Verdict::Re => "RE",
            Verdict::Tle => "TLE",
            Verdict::Mle => "MLE",
            Verdict::Ce => "CE",
            Verdict::Other => "OTHER",
        };
        f.write_str(s)
    }
}

/// Where the source text of a submission lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceRef {
    Inline(String),
    File(PathBuf),
}

/// One judged submission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmissionRecord {
    pub submission_id: String,
    pub user_id: String,
    pub problem_id: String,
    pub verdict: Verdict,
    /// Epoch seconds, UTC.
    pub submitted_at: i64,
    pub source: SourceRef,
}

impl SubmissionRecord {
    /// Source text, if it is held inline (see [`resolve_sources`]).
    pub fn source_text(&self) -> Option<&str> {
        match &self.source {
            SourceRef::Inline(text) => Some(text),
            SourceRef::File(_) => None,
        }
    }

    /// The record as one submission-log line, without the trailing newline.
    pub fn to_log_line(&self) -> String {
        let mut value = serde_json::json!({
            "submission_id": self.submission_id,
            "user_id": self.user_id,
            "problem_id": self.problem_id,
            "verdict": self.verdict.to_string(),
            "submitted_at": self.submitted_at,
        });
        let (key, text) = match &self.source {
            SourceRef::Inline(text) => ("source", text.clone()),
            SourceRef::File(path) => ("source_path", path.display().to_string()),
        };
        value[key] = serde_json::Value::String(text);
        value.to_string()
    }
}

/// A malformed or rejected line in a submission log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of reading a submission log: the good records plus per-line problems.
#[derive(Debug, Default, Clone)]
pub struct ParsedLog {
    pub records: Vec<SubmissionRecord>,
    /// Line number of each record, parallel to `records`.
    pub lines: Vec<usize>,
    pub errors: Vec<LineError>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Scalar {
    fn into_text(self) -> String {
        match self {
            Scalar::Text(s) => s,
            Scalar::Int(i) => i.to_string(),
            Scalar::Float(x) => x.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct RawRecord {
    submission_id: Option<Scalar>,
    user_id: Option<Scalar>,
    problem_id: Option<Scalar>,
    verdict: Option<String>,
    submitted_at: Option<i64>,
    source: Option<String>,
    source_path: Option<String>,
}

/// Parses a line-delimited JSON submission log. Blank lines are skipped.
///
/// Malformed lines are reported in [`ParsedLog::errors`] and parsing carries on.
/// Only an I/O failure aborts.
pub fn parse_submission_log<R: BufRead>(reader: R) -> std::io::Result<ParsedLog> {
    let mut out = ParsedLog::default();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(record) => {
                if !seen.insert(record.submission_id.clone()) {
                    out.errors.push(LineError {
                        line: lineno,
                        message: format!("duplicate submission_id {:?}", record.submission_id),
                    });
                    continue;
                }
                out.records.push(record);
                out.lines.push(lineno);
            }
            Err(message) => out.errors.push(LineError { line: lineno, message }),
        }
    }
    Ok(out)
}

fn parse_record(line: &str) -> Result<SubmissionRecord, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| format!("invalid record: {e}"))?;
    let missing = |field: &str| format!("missing required field `{field}`");
    let source = match (raw.source, raw.source_path) {
        (Some(text), _) => SourceRef::Inline(text),
        (None, Some(path)) => SourceRef::File(PathBuf::from(path)),
        (None, None) => return Err(missing("source")),
    };
    Ok(SubmissionRecord {
        submission_id: raw.submission_id.ok_or_else(|| missing("submission_id"))?.into_text(),
        user_id: raw.user_id.ok_or_else(|| missing("user_id"))?.into_text(),
        problem_id: raw.problem_id.ok_or_else(|| missing("problem_id"))?.into_text(),
        verdict: Verdict::parse(&raw.verdict.ok_or_else(|| missing("verdict"))?),
        submitted_at: raw.submitted_at.ok_or_else(|| missing("submitted_at"))?,
        source,
    })
}

/// Reads every `source_path` record into memory, relative paths resolved
/// against `base`. Unreadable files are reported and the record left as is.
pub fn resolve_sources(log: &mut ParsedLog, base: &Path) -> Vec<LineError> {
    let mut errors = Vec::new();
    for (record, &line) in log.records.iter_mut().zip(&log.lines) {
        if let SourceRef::File(path) = &record.source {
            let full = if path.is_absolute() {
                path.clone()
            } else {
                base.join(path)
            };
            match std::fs::read_to_string(&full) {
                Ok(text) => record.source = SourceRef::Inline(text),
                Err(e) => errors.push(LineError {
                    line,
                    message: format!("cannot read {}: {e}", full.display()),
                }),
            }
        }
    }
    errors
}

/// Levenshtein distance over code points of two raw source texts.
pub fn char_edit_distance(a: &str, b: &str) -> usize {
    char_levenshtein(a, b)
}

/// Submission-history metadata attached to a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMeta {
    /// The user's submissions up to and including the WA, across all problems.
    pub total_submissions_at_time: usize,
    /// The user's submissions to this problem up to and including the WA.
    pub attempts_to_problem: usize,
    /// Whether the AC is the user's first AC on this problem.
    pub is_first_acceptance: bool,
}

/// A wrong submission and the accepted submission that fixed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodePair {
    pub pair_id: String,
    pub user_id: String,
    pub problem_id: String,
    pub wa: String,
    pub ac: String,
    pub wa_submitted_at: i64,
    pub ac_submitted_at: i64,
    pub char_edit_distance: usize,
    pub meta: PairMeta,
}

impl CodePair {
    pub fn make_id(wa_submission: &str, ac_submission: &str) -> String {
        format!("{wa_submission}:{ac_submission}")
    }
}

/// Output of [`build_code_pairs`].
#[derive(Debug, Default, Clone)]
pub struct PairBuild {
    pub pairs: Vec<CodePair>,
    /// Candidate pairs rejected by the distance threshold.
    pub dropped_distance: usize,
    /// Candidate pairs skipped because a side had no resolved source text.
    pub unresolved: usize,
}

/// Pairs every non-AC submission with the earliest strictly later AC of the
/// same user on the same problem, then drops pairs whose raw-source character
/// edit distance is not below `max_distance`.
///
/// Output is ordered by user, problem and WA time; ties in time keep input order.
pub fn build_code_pairs(records: &[SubmissionRecord], max_distance: usize) -> PairBuild {
    let mut by_user: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (idx, r) in records.iter().enumerate() {
        by_user.entry(r.user_id.as_str()).or_default().push(idx);
    }

    let mut out = PairBuild::default();
    for history in by_user.values_mut() {
        history.sort_by_key(|&i| (records[i].submitted_at, i));
        // Position of each submission in the user's chronology, 1-based.
        let position: HashMap<usize, usize> = history.iter().enumerate().map(|(pos, &i)| (i, pos + 1)).collect();

        let mut by_problem: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for &i in history.iter() {
            by_problem.entry(records[i].problem_id.as_str()).or_default().push(i);
        }

        for attempts in by_problem.values() {
            let first_ac = attempts.iter().copied().find(|&i| records[i].verdict.is_accepted());
            for (k, &wa_idx) in attempts.iter().enumerate() {
                let wa = &records[wa_idx];
                if wa.verdict.is_accepted() {
                    continue;
                }
                let Some(ac_idx) = attempts[k + 1..]
                    .iter()
                    .copied()
                    .find(|&i| records[i].verdict.is_accepted() && records[i].submitted_at > wa.submitted_at)
                else {
                    continue;
                };
                let ac = &records[ac_idx];
                let (Some(wa_src), Some(ac_src)) = (wa.source_text(), ac.source_text()) else {
                    out.unresolved += 1;
                    continue;
                };
                let distance = char_edit_distance(wa_src, ac_src);
                if distance >= max_distance {
                    out.dropped_distance += 1;
                    continue;
                }
                out.pairs.push(CodePair {
                    pair_id: CodePair::make_id(&wa.submission_id, &ac.submission_id),
                    user_id: wa.user_id.clone(),
                    problem_id: wa.problem_id.clone(),
                    wa: wa_src.to_owned(),
                    ac: ac_src.to_owned(),
                    wa_submitted_at: wa.submitted_at,
                    ac_submitted_at: ac.submitted_at,
                    char_edit_distance: distance,
                    meta: PairMeta {
                        total_submissions_at_time: position[&wa_idx],
                        attempts_to_problem: k + 1,
                        is_first_acceptance: first_ac == Some(ac_idx),
                    },
                });
            }
        }
    }
    out
}
