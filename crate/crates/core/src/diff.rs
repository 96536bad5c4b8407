//! Line- then token-level comparison of a WA/AC program pair.

use serde::{Deserialize, Serialize};

use crate::align::{lcs_alignment, lcs_alignment_by, Match};
use crate::ingest::CodePair;
use crate::lexer::{LogicalLine, NormalizedProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ChangeLabel {
    Equal,
    Insert,
    Delete,
    Replace,
}

/// One aligned step of a line diff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineOp {
    pub label: ChangeLabel,
    pub wa_line: Option<LogicalLine>,
    pub ac_line: Option<LogicalLine>,
    /// Per-token labels; only set on `Replace` ops once token diffing ran.
    pub token_labels_wa: Option<Vec<ChangeLabel>>,
    pub token_labels_ac: Option<Vec<ChangeLabel>>,
    pub indent_changed: bool,
}

impl LineOp {
    fn new(label: ChangeLabel, wa_line: Option<&LogicalLine>, ac_line: Option<&LogicalLine>) -> Self {
        let indent_changed = match (wa_line, ac_line) {
            (Some(w), Some(a)) => w.indent_depth != a.indent_depth,
            _ => false,
        };
        LineOp {
            label,
            wa_line: wa_line.cloned(),
            ac_line: ac_line.cloned(),
            token_labels_wa: None,
            token_labels_ac: None,
            indent_changed,
        }
    }

    /// Whether any token on either side is labelled `Replace`.
    pub fn has_replaced_tokens(&self) -> bool {
        [&self.token_labels_wa, &self.token_labels_ac]
            .into_iter()
            .flatten()
            .any(|labels| labels.contains(&ChangeLabel::Replace))
    }
}

/// The full diff of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeSet {
    pub pair_id: String,
    pub ops: Vec<LineOp>,
    /// Lexer diagnostics from either side, prefixed with `wa:` or `ac:`.
    pub warnings: Vec<String>,
}

impl ChangeSet {
    /// One op per line, prefixed `=`, `+`, `-` or `~`; a replace prints the
    /// WA rendering then the AC rendering on two `~` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let render = |l: &Option<LogicalLine>| l.as_ref().map(LogicalLine::render).unwrap_or_default();
            match op.label {
                ChangeLabel::Equal => out.push_str(&format!("= {}\n", render(&op.ac_line))),
                ChangeLabel::Insert => out.push_str(&format!("+ {}\n", render(&op.ac_line))),
                ChangeLabel::Delete => out.push_str(&format!("- {}\n", render(&op.wa_line))),
                ChangeLabel::Replace => {
                    out.push_str(&format!("~ {}\n", render(&op.wa_line)));
                    out.push_str(&format!("~ {}\n", render(&op.ac_line)));
                }
            }
        }
        out
    }

    pub fn is_unchanged(&self) -> bool {
        self.ops.iter().all(|op| op.label == ChangeLabel::Equal)
    }
}

/// Aligns the rendered lines of two programs.
///
/// Lines aligned by the LCS of their renderings are `Equal` when their depth
/// agrees and `Replace` with `indent_changed` otherwise; among equally long
/// alignments the one with fewer depth changes wins. Within each unaligned gap the first
/// `min(deleted, inserted)` lines are paired positionally into `Replace` ops,
/// followed by the leftover deletes, then the leftover inserts.
pub fn diff_lines(wa: &NormalizedProgram, ac: &NormalizedProgram) -> Vec<LineOp> {
    let key = |l: &LogicalLine| (l.render(), l.indent_depth);
    let wa_r: Vec<(String, usize)> = wa.lines.iter().map(key).collect();
    let ac_r: Vec<(String, usize)> = ac.lines.iter().map(key).collect();
    let matches = lcs_alignment_by(&wa_r, &ac_r, |x, y| match (x.0 == y.0, x.1 == y.1) {
        (false, _) => Match::No,
        (true, true) => Match::Exact,
        (true, false) => Match::Loose,
    });

    let mut ops = Vec::with_capacity(wa.lines.len().max(ac.lines.len()));
    let (mut i0, mut j0) = (0, 0);
    let sentinel = (wa.lines.len(), ac.lines.len());
    for &(i, j) in matches.iter().chain(std::iter::once(&sentinel)) {
        let deleted = &wa.lines[i0..i];
        let inserted = &ac.lines[j0..j];
        let fused = deleted.len().min(inserted.len());
        for k in 0..fused {
            ops.push(LineOp::new(ChangeLabel::Replace, Some(&deleted[k]), Some(&inserted[k])));
        }
        for line in &deleted[fused..] {
            ops.push(LineOp::new(ChangeLabel::Delete, Some(line), None));
        }
        for line in &inserted[fused..] {
            ops.push(LineOp::new(ChangeLabel::Insert, None, Some(line)));
        }
        if (i, j) != sentinel {
            let (w, a) = (&wa.lines[i], &ac.lines[j]);
            let label = if w.indent_depth == a.indent_depth {
                ChangeLabel::Equal
            } else {
                ChangeLabel::Replace
            };
            ops.push(LineOp::new(label, Some(w), Some(a)));
            i0 = i + 1;
            j0 = j + 1;
        }
    }
    ops
}

/// Token labels for a replaced line pair: LCS-aligned tokens are `Equal`,
/// everything else `Replace`.
pub fn diff_tokens(wa_line: &LogicalLine, ac_line: &LogicalLine) -> (Vec<ChangeLabel>, Vec<ChangeLabel>) {
    let wa = wa_line.texts();
    let ac = ac_line.texts();
    let mut wa_labels = vec![ChangeLabel::Replace; wa.len()];
    let mut ac_labels = vec![ChangeLabel::Replace; ac.len()];
    for (i, j) in lcs_alignment(&wa, &ac) {
        wa_labels[i] = ChangeLabel::Equal;
        ac_labels[j] = ChangeLabel::Equal;
    }
    (wa_labels, ac_labels)
}

/// Line diff followed by token diff on every replace op.
pub fn diff_programs(pair_id: &str, wa: &NormalizedProgram, ac: &NormalizedProgram) -> ChangeSet {
    let mut ops = diff_lines(wa, ac);
    for op in ops.iter_mut().filter(|op| op.label == ChangeLabel::Replace) {
        let (Some(w), Some(a)) = (&op.wa_line, &op.ac_line) else {
            continue;
        };
        let (tw, ta) = diff_tokens(w, a);
        op.token_labels_wa = Some(tw);
        op.token_labels_ac = Some(ta);
    }
    ChangeSet {
        pair_id: pair_id.to_owned(),
        ops,
        warnings: Vec::new(),
    }
}

/// Tokenizes, normalizes and diffs both sides of a pair.
pub fn extract_changes(pair: &CodePair) -> ChangeSet {
    let (wa, wa_diags) = NormalizedProgram::from_source(&pair.wa);
    let (ac, ac_diags) = NormalizedProgram::from_source(&pair.ac);
    let mut cs = diff_programs(&pair.pair_id, &wa, &ac);
    cs.warnings = wa_diags
        .iter()
        .map(|d| format!("wa: {d}"))
        .chain(ac_diags.iter().map(|d| format!("ac: {d}")))
        .collect();
    cs
}
