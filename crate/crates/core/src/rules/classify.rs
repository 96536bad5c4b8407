use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{summary_of, Category, Rule, RuleSet, Trigger};
use crate::diff::{ChangeLabel, ChangeSet, LineOp};
use crate::lexer::LogicalLine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Wa,
    Ac,
    Both,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Wa => "WA",
            Side::Ac => "AC",
            Side::Both => "BOTH",
        })
    }
}

/// One classified error.
///
/// `span_start..span_end` is a character range in the rendered line of the
/// WA side when `side` is `WA`, otherwise of the AC side. Token-replace labels
/// also record the matching replaced token on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorLabel {
    pub pair_id: String,
    #[serde(rename = "rule")]
    pub rule_name: String,
    pub summary: String,
    pub op_index: usize,
    pub side: Side,
    pub span_start: usize,
    pub span_end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wa_token: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ac_token: Option<usize>,
}

/// A rendered line with the byte range of every token.
struct Rendered {
    text: String,
    tokens: Vec<Range<usize>>,
}

impl Rendered {
    fn new(line: &LogicalLine) -> Self {
        let mut text = String::new();
        let mut tokens = Vec::with_capacity(line.tokens.len());
        for (i, tok) in line.tokens.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let start = text.len();
            text.push_str(&tok.text);
            tokens.push(start..text.len());
        }
        Rendered { text, tokens }
    }

    fn chars(&self, bytes: Range<usize>) -> (usize, usize) {
        let start = self.text[..bytes.start].chars().count();
        (start, start + self.text[bytes].chars().count())
    }

    fn whole(&self) -> (usize, usize) {
        (0, self.text.chars().count())
    }
}

/// Replaced-token view of one side of a replace op.
struct ReplaceSide<'a> {
    rendered: Rendered,
    labels: &'a [ChangeLabel],
}

impl ReplaceSide<'_> {
    fn replaced(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == ChangeLabel::Replace)
            .map(|(i, _)| i)
    }

    fn has_replaced(&self) -> bool {
        self.replaced().next().is_some()
    }

    fn covers_replaced(&self, span: &Range<usize>) -> bool {
        self.replaced().any(|i| {
            let t = &self.rendered.tokens[i];
            t.start < span.end && span.start < t.end
        })
    }
}

fn is_full_match(re: &fancy_regex::Regex, text: &str) -> bool {
    // Whole-line rules are compiled anchored. A backtracking-limit error
    // counts as no match.
    re.is_match(text).unwrap_or(false)
}

/// First match of a within-replace pattern whose span covers a replaced token.
fn within_match(re: &fancy_regex::Regex, side: &ReplaceSide<'_>) -> Option<Range<usize>> {
    re.find_iter(&side.rendered.text)
        .filter_map(Result::ok)
        .map(|m| m.range())
        .find(|r| side.covers_replaced(r))
}

/// Applies every rule to every changed line of a change set.
///
/// Each rule fires at most once per op. Labels come out in op order, then in
/// rule-file order within an op.
pub fn classify(change_set: &ChangeSet, rules: &RuleSet) -> Vec<ErrorLabel> {
    let mut out = Vec::new();
    for (op_index, op) in change_set.ops.iter().enumerate() {
        let emit = |out: &mut Vec<ErrorLabel>,
                    rule: &Rule,
                    side: Side,
                    span: (usize, usize),
                    toks: (Option<usize>, Option<usize>)| {
            out.push(ErrorLabel {
                pair_id: change_set.pair_id.clone(),
                rule_name: rule.name.clone(),
                summary: rule.summary.clone(),
                op_index,
                side,
                span_start: span.0,
                span_end: span.1,
                wa_token: toks.0,
                ac_token: toks.1,
            });
        };
        match op.label {
            ChangeLabel::Equal => {}
            ChangeLabel::Insert | ChangeLabel::Delete => {
                let (line, category, side) = if op.label == ChangeLabel::Insert {
                    (op.ac_line.as_ref(), Category::Insert, Side::Ac)
                } else {
                    (op.wa_line.as_ref(), Category::Delete, Side::Wa)
                };
                let Some(line) = line else { continue };
                let rendered = Rendered::new(line);
                for rule in rules.rules.iter().filter(|r| r.category == category) {
                    if let Trigger::Pattern(re) = &rule.trigger {
                        if is_full_match(re, &rendered.text) {
                            emit(&mut out, rule, side, rendered.whole(), (None, None));
                        }
                    }
                }
            }
            ChangeLabel::Replace => classify_replace(op, rules, &mut |rule, side, span, toks| {
                emit(&mut out, rule, side, span, toks)
            }),
        }
    }
    out
}

type Emit<'a> = dyn FnMut(&Rule, Side, (usize, usize), (Option<usize>, Option<usize>)) + 'a;

fn classify_replace(op: &LineOp, rules: &RuleSet, emit: &mut Emit<'_>) {
    let (Some(wa_line), Some(ac_line)) = (&op.wa_line, &op.ac_line) else {
        return;
    };
    let wa_labels = op
        .token_labels_wa
        .clone()
        .unwrap_or_else(|| vec![ChangeLabel::Equal; wa_line.tokens.len()]);
    let ac_labels = op
        .token_labels_ac
        .clone()
        .unwrap_or_else(|| vec![ChangeLabel::Equal; ac_line.tokens.len()]);
    let wa = ReplaceSide {
        rendered: Rendered::new(wa_line),
        labels: &wa_labels,
    };
    let ac = ReplaceSide {
        rendered: Rendered::new(ac_line),
        labels: &ac_labels,
    };

    let combine = |on_wa: bool, on_ac: bool| match (on_wa, on_ac) {
        (true, true) => Some(Side::Both),
        (true, false) => Some(Side::Wa),
        (false, true) => Some(Side::Ac),
        (false, false) => None,
    };

    for rule in &rules.rules {
        let re = match &rule.trigger {
            Trigger::Indent => {
                if op.indent_changed {
                    emit(rule, Side::Both, ac.rendered.whole(), (None, None));
                }
                continue;
            }
            Trigger::Pattern(re) => re,
        };
        match rule.category {
            Category::LineReplace => {
                let hit = |s: &ReplaceSide<'_>| s.has_replaced() && is_full_match(re, &s.rendered.text);
                if let Some(side) = combine(hit(&wa), hit(&ac)) {
                    let span = if side == Side::Wa {
                        wa.rendered.whole()
                    } else {
                        ac.rendered.whole()
                    };
                    emit(rule, side, span, (None, None));
                }
            }
            Category::WithinReplace => {
                let wa_hit = within_match(re, &wa);
                let ac_hit = within_match(re, &ac);
                if let Some(side) = combine(wa_hit.is_some(), ac_hit.is_some()) {
                    let span = match (&wa_hit, &ac_hit) {
                        (_, Some(r)) => ac.rendered.chars(r.clone()),
                        (Some(r), None) => wa.rendered.chars(r.clone()),
                        (None, None) => unreachable!(),
                    };
                    emit(rule, side, span, (None, None));
                }
            }
            Category::TokenReplace => {
                let token_hit = |s: &ReplaceSide<'_>, line: &LogicalLine| {
                    s.replaced().find(|&i| is_full_match(re, &line.tokens[i].text))
                };
                if let (Some(w), Some(a)) = (token_hit(&wa, wa_line), token_hit(&ac, ac_line)) {
                    let span = ac.rendered.chars(ac.rendered.tokens[a].clone());
                    emit(rule, Side::Both, span, (Some(w), Some(a)));
                }
            }
            Category::Insert | Category::Delete => {}
        }
    }
}

/// Fills each label's summary from the standard group table. Labels of rules
/// outside the table keep the summary their rule file gave them.
pub fn summarize(labels: Vec<ErrorLabel>) -> Vec<ErrorLabel> {
    labels
        .into_iter()
        .map(|mut l| {
            if let Some(group) = summary_of(&l.rule_name) {
                l.summary = group.to_owned();
            }
            l
        })
        .collect()
}

/// Keeps at most one label per (pair, summary): the one at the lowest op
/// index, first in input order on ties. Survivors keep their input order.
pub fn dedup_per_pair(labels: Vec<ErrorLabel>) -> Vec<ErrorLabel> {
    let mut best: HashMap<(&str, &str), usize> = HashMap::new();
    for (idx, l) in labels.iter().enumerate() {
        best.entry((l.pair_id.as_str(), l.summary.as_str()))
            .and_modify(|b| {
                if l.op_index < labels[*b].op_index {
                    *b = idx;
                }
            })
            .or_insert(idx);
    }
    let keep: HashSet<usize> = best.into_values().collect();
    labels
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, l)| l)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("no labels to score")]
    NoLabels,
}

/// Fraction of `labels` that appear in `gold`, matching on pair, rule and op index.
pub fn score_against_gold(labels: &[ErrorLabel], gold: &[ErrorLabel]) -> Result<Score, ScoreError> {
    if labels.is_empty() {
        return Err(ScoreError::NoLabels);
    }
    let gold: HashSet<(&str, &str, usize)> = gold
        .iter()
        .map(|g| (g.pair_id.as_str(), g.rule_name.as_str(), g.op_index))
        .collect();
    let correct = labels
        .iter()
        .filter(|l| gold.contains(&(l.pair_id.as_str(), l.rule_name.as_str(), l.op_index)))
        .count();
    Ok(Score {
        correct,
        total: labels.len(),
        accuracy: correct as f64 / labels.len() as f64,
    })
}
