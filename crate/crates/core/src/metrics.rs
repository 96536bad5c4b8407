//! Per-pair and corpus statistics.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::align::levenshtein;
use crate::ingest::CodePair;
use crate::lexer::{NormalizedProgram, TokenKind};
use crate::rules::ErrorLabel;

const DECISION_KEYWORDS: &[&str] = &["if", "elif", "for", "while", "and", "or", "except"];

/// Levenshtein distance over the visible token texts.
pub fn token_edit_distance(a: &NormalizedProgram, b: &NormalizedProgram) -> usize {
    levenshtein(&a.flat_texts(), &b.flat_texts())
}

/// Program-level McCabe number: one plus the decision keywords. Conditional
/// expressions and comprehension filters use `if` and are counted with it.
pub fn cyclomatic_complexity(p: &NormalizedProgram) -> usize {
    1 + p
        .lines
        .iter()
        .flat_map(|l| &l.tokens)
        .filter(|t| t.kind == TokenKind::Keyword && DECISION_KEYWORDS.contains(&t.text.as_str()))
        .count()
}

/// `1 - distance / max(len_a, len_b)`, and 1 for two empty sequences.
pub fn similarity(distance: usize, len_a: usize, len_b: usize) -> f64 {
    let longest = len_a.max(len_b);
    if longest == 0 {
        1.0
    } else {
        1.0 - distance as f64 / longest as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub char_edit_distance: usize,
    pub token_edit_distance: usize,
    pub char_similarity: f64,
    pub token_similarity: f64,
    pub wa_lines: usize,
    pub ac_lines: usize,
    pub wa_chars: usize,
    pub ac_chars: usize,
    pub wa_tokens: usize,
    pub ac_tokens: usize,
    pub wa_cyclomatic: usize,
    pub ac_cyclomatic: usize,
    pub error_count: usize,
}

impl PairStats {
    /// Field names in report order.
    pub const FIELDS: [&'static str; 13] = [
        "char_edit_distance",
        "token_edit_distance",
        "char_similarity",
        "token_similarity",
        "wa_lines",
        "ac_lines",
        "wa_chars",
        "ac_chars",
        "wa_tokens",
        "ac_tokens",
        "wa_cyclomatic",
        "ac_cyclomatic",
        "error_count",
    ];

    pub fn values(&self) -> [f64; 13] {
        [
            self.char_edit_distance as f64,
            self.token_edit_distance as f64,
            self.char_similarity,
            self.token_similarity,
            self.wa_lines as f64,
            self.ac_lines as f64,
            self.wa_chars as f64,
            self.ac_chars as f64,
            self.wa_tokens as f64,
            self.ac_tokens as f64,
            self.wa_cyclomatic as f64,
            self.ac_cyclomatic as f64,
            self.error_count as f64,
        ]
    }
}

/// Statistics of one pair. `error_count` is the number of deduplicated
/// summarized labels of the pair.
pub fn pair_stats(pair: &CodePair, error_count: usize) -> PairStats {
    let (wa, _) = NormalizedProgram::from_source(&pair.wa);
    let (ac, _) = NormalizedProgram::from_source(&pair.ac);
    let wa_chars = pair.wa.chars().count();
    let ac_chars = pair.ac.chars().count();
    let char_edit_distance = crate::align::char_levenshtein(&pair.wa, &pair.ac);
    let token_edit_distance = token_edit_distance(&wa, &ac);
    let (wa_tokens, ac_tokens) = (wa.token_count(), ac.token_count());
    PairStats {
        char_edit_distance,
        token_edit_distance,
        char_similarity: similarity(char_edit_distance, wa_chars, ac_chars),
        token_similarity: similarity(token_edit_distance, wa_tokens, ac_tokens),
        wa_lines: wa.lines.len(),
        ac_lines: ac.lines.len(),
        wa_chars,
        ac_chars,
        wa_tokens,
        ac_tokens,
        wa_cyclomatic: cyclomatic_complexity(&wa),
        ac_cyclomatic: cyclomatic_complexity(&ac),
        error_count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdForm {
    /// Divisor N.
    #[default]
    Population,
    /// Divisor N - 1.
    Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_pairs: usize,
    pub n_users: usize,
    pub n_problems: usize,
    pub fields: Vec<FieldSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("no code pairs to summarize")]
    Empty,
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone, form: SdForm) -> (f64, f64) {
    let n = values.clone().count();
    let mean = values.clone().sum::<f64>() / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    let divisor = match form {
        SdForm::Population => n as f64,
        SdForm::Sample if n > 1 => (n - 1) as f64,
        SdForm::Sample => return (mean, 0.0),
    };
    (mean, (ss / divisor).sqrt())
}

/// Aggregates already computed per-pair statistics.
pub fn aggregate(
    stats: &[PairStats],
    n_users: usize,
    n_problems: usize,
    form: SdForm,
) -> Result<CorpusStats, MetricsError> {
    if stats.is_empty() {
        return Err(MetricsError::Empty);
    }
    let rows: Vec<[f64; 13]> = stats.iter().map(PairStats::values).collect();
    let fields = PairStats::FIELDS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let (mean, sd) = mean_sd(rows.iter().map(|r| r[k]), form);
            FieldSummary {
                name: (*name).to_owned(),
                mean,
                sd,
            }
        })
        .collect();
    Ok(CorpusStats {
        n_pairs: stats.len(),
        n_users,
        n_problems,
        fields,
    })
}

/// Error counts per pair id from deduplicated summarized labels.
pub fn error_counts(labels: &[ErrorLabel]) -> HashMap<&str, usize> {
    let mut counts = HashMap::new();
    for l in labels {
        *counts.entry(l.pair_id.as_str()).or_insert(0) += 1;
    }
    counts
}

/// Per-pair statistics aggregated over the corpus with population SD.
pub fn corpus_statistics(pairs: &[CodePair], labels: &[ErrorLabel]) -> Result<CorpusStats, MetricsError> {
    let counts = error_counts(labels);
    let stats: Vec<PairStats> = pairs
        .iter()
        .map(|p| pair_stats(p, counts.get(p.pair_id.as_str()).copied().unwrap_or(0)))
        .collect();
    let (users, problems) = distinct_users_problems(pairs);
    aggregate(&stats, users, problems, SdForm::Population)
}

pub fn distinct_users_problems(pairs: &[CodePair]) -> (usize, usize) {
    let users: BTreeSet<&str> = pairs.iter().map(|p| p.user_id.as_str()).collect();
    let problems: BTreeSet<&str> = pairs.iter().map(|p| p.problem_id.as_str()).collect();
    (users.len(), problems.len())
}

impl CorpusStats {
    pub fn get(&self, name: &str) -> Option<&FieldSummary> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Two-column table, `mean (± sd)` per field.
    pub fn to_human(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("pairs".into(), self.n_pairs.to_string()),
            ("users".into(), self.n_users.to_string()),
            ("problems".into(), self.n_problems.to_string()),
        ];
        for f in &self.fields {
            rows.push((f.name.clone(), format!("{:.2} (± {:.2})", f.mean, f.sd)));
        }
        let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, value) in rows {
            let _ = writeln!(out, "{name:<width$}  {value}");
        }
        out
    }

    /// One JSON object per line: the counts, then one line per field.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (name, value) in [
            ("pairs", self.n_pairs),
            ("users", self.n_users),
            ("problems", self.n_problems),
        ] {
            let _ = writeln!(out, "{}", serde_json::json!({ "name": name, "value": value }));
        }
        for f in &self.fields {
            let _ = writeln!(
                out,
                "{}",
                serde_json::json!({ "name": f.name, "mean": f.mean, "sd": f.sd })
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PairMeta;

    fn prog(src: &str) -> NormalizedProgram {
        NormalizedProgram::from_source(src).0
    }

    fn pair(id: &str, user: &str, problem: &str, wa: &str, ac: &str) -> CodePair {
        CodePair {
            pair_id: id.into(),
            user_id: user.into(),
            problem_id: problem.into(),
            wa: wa.into(),
            ac: ac.into(),
            wa_submitted_at: 0,
            ac_submitted_at: 1,
            char_edit_distance: 0,
            meta: PairMeta {
                total_submissions_at_time: 1,
                attempts_to_problem: 1,
                is_first_acceptance: true,
            },
        }
    }

    fn label(pair_id: &str) -> ErrorLabel {
        ErrorLabel {
            pair_id: pair_id.into(),
            rule_name: "r".into(),
            summary: "output".into(),
            op_index: 0,
            side: crate::rules::Side::Ac,
            span_start: 0,
            span_end: 0,
            wa_token: None,
            ac_token: None,
        }
    }

    #[test]
    fn token_distance_examples() {
        let p = prog("x = 1\n");
        assert_eq!(token_edit_distance(&p, &p), 0);
        assert_eq!(token_edit_distance(&p, &prog("x = 2\n")), 1);
        assert_eq!(token_edit_distance(&prog(""), &prog("print()\n")), 3);
    }

    #[test]
    fn cyclomatic_examples() {
        assert_eq!(cyclomatic_complexity(&prog("print(1)\n")), 1);
        assert_eq!(cyclomatic_complexity(&prog("if a:\n    x = 1\nelse:\n    x = 2\n")), 2);
        assert_eq!(cyclomatic_complexity(&prog("if a and b:\n    pass\n")), 3);
        assert_eq!(cyclomatic_complexity(&prog("x = 1 if a else 2\n")), 2);
        assert_eq!(cyclomatic_complexity(&prog("try:\n    f()\nexcept E:\n    pass\n")), 2);
        // `or` inside a string is not a keyword.
        assert_eq!(cyclomatic_complexity(&prog("print('a or b')\n")), 1);
    }

    #[test]
    fn similarity_duality() {
        assert_eq!(similarity(0, 0, 0), 1.0);
        assert_eq!(similarity(0, 5, 5), 1.0);
        assert_eq!(similarity(1, 4, 2), 0.75);
        assert_eq!(similarity(3, 0, 3), 0.0);
    }

    #[test]
    fn single_identical_pair() {
        let p = pair("1:2", "u", "p", "print(1)\n", "print(1)\n");
        let s = corpus_statistics(&[p], &[]).unwrap();
        assert_eq!((s.n_pairs, s.n_users, s.n_problems), (1, 1, 1));
        assert_eq!(s.get("char_edit_distance").unwrap().mean, 0.0);
        assert_eq!(s.get("token_edit_distance").unwrap().mean, 0.0);
        assert_eq!(s.get("char_similarity").unwrap().mean, 1.0);
        assert_eq!(s.get("token_similarity").unwrap().mean, 1.0);
        assert_eq!(s.get("error_count").unwrap().mean, 0.0);
    }

    #[test]
    fn error_count_mean_and_population_sd() {
        let pairs = vec![pair("a", "u", "p", "x\n", "x\n"), pair("b", "v", "p", "x\n", "x\n")];
        let labels = vec![label("a"), label("a"), label("b"), label("b"), label("b"), label("b")];
        let s = corpus_statistics(&pairs, &labels).unwrap();
        let e = s.get("error_count").unwrap();
        assert_eq!((e.mean, e.sd), (3.0, 1.0));
        assert_eq!((s.n_users, s.n_problems), (2, 1));
    }

    #[test]
    fn sample_sd_is_configurable() {
        let a = pair_stats(&pair("a", "u", "p", "", ""), 2);
        let b = pair_stats(&pair("b", "u", "p", "", ""), 4);
        let s = aggregate(&[a, b], 1, 1, SdForm::Sample).unwrap();
        assert!((s.get("error_count").unwrap().sd - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(corpus_statistics(&[], &[]), Err(MetricsError::Empty));
    }

    #[test]
    fn report_formats() {
        let p = pair("1:2", "u", "p", "x = 1\n", "x = 2\n");
        let s = corpus_statistics(&[p], &[label("1:2")]).unwrap();
        let human = s.to_human();
        assert!(human.contains("error_count"));
        assert!(human.contains("1.00 (± 0.00)"));
        let records = s.to_records();
        assert_eq!(records.lines().count(), 16);
        for line in records.lines() {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
    }
}
