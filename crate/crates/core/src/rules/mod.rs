//! Regex rules over rendered lines, grouped into summarized error types.
//!
//! A rule file is a sequence of blank-line separated blocks of `key: value`
//! lines. Lines starting with `#` are comments. A header block may carry
//! `version:` and `requires:` (the regex features the patterns rely on); every
//! other block is one rule with `name`, `category`, `pattern` and `summary`,
//! or `trigger: indent` in place of `pattern`.

mod classify;
pub mod selftest;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use fancy_regex::Regex;
use serde::{Deserialize, Serialize};

pub use classify::{classify, dedup_per_pair, score_against_gold, summarize, ErrorLabel, Score, ScoreError, Side};

/// The summarized error groups and the classified rules that belong to each,
/// in reporting order.
pub const SUMMARY_GROUPS: &[(&str, &[&str])] = &[
    ("output", &["missing output", "needless output", "wrong output"]),
    ("input", &["missing input", "needless input", "wrong input"]),
    (
        "convert variable",
        &["wrong join list", "wrong convert list", "wrong convert value"],
    ),
    (
        "other function invocation",
        &[
            "missing function invocation",
            "needless function invocation",
            "wrong function invocation",
        ],
    ),
    (
        "conditional statement",
        &[
            "missing if statement",
            "needless if statement",
            "wrong if statement",
            "missing else elif",
            "needless else elif",
            "wrong else elif",
        ],
    ),
    (
        "loop statement",
        &[
            "missing for statement",
            "needless for statement",
            "wrong for statement",
            "missing while statement",
            "needless while statement",
            "wrong while statement",
        ],
    ),
    ("for range", &["wrong range"]),
    (
        "break continue",
        &[
            "missing break continue",
            "needless break continue",
            "wrong break continue",
        ],
    ),
    ("literal", &["wrong string", "wrong value", "wrong boolean value"]),
    ("import", &["missing import", "needless import", "wrong import"]),
    (
        "variable declaration",
        &[
            "missing variable declaration",
            "needless variable declaration",
            "wrong variable declaration",
        ],
    ),
    (
        "function definition",
        &[
            "missing function definition",
            "needless function definition",
            "wrong function definition",
            "missing return",
            "needless return",
            "wrong return",
        ],
    ),
    ("pass", &["missing pass", "needless pass", "wrong pass"]),
    ("comparison operator", &["wrong comparison operator"]),
    ("logical operator", &["wrong logical operator"]),
    ("arithmetic operator", &["wrong arithmetic operator"]),
    ("unpack operator", &["wrong unpack operator"]),
    ("other operator", &["wrong in operator", "wrong assignment operator"]),
    ("index", &["wrong list index"]),
    ("list comprehension", &["wrong list comprehension"]),
    ("indent", &["wrong indent"]),
];

/// Summary group of one of the standard classified rule names.
pub fn summary_of(rule_name: &str) -> Option<&'static str> {
    SUMMARY_GROUPS
        .iter()
        .find(|(_, rules)| rules.contains(&rule_name))
        .map(|(group, _)| *group)
}

pub fn is_summary_group(name: &str) -> bool {
    SUMMARY_GROUPS.iter().any(|(group, _)| *group == name)
}

/// Position of a summary group in reporting order; unknown names sort last.
pub fn summary_rank(name: &str) -> usize {
    SUMMARY_GROUPS
        .iter()
        .position(|(g, _)| *g == name)
        .unwrap_or(SUMMARY_GROUPS.len())
}

const DEFAULT_RULES: &str = include_str!("default.rules");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Insert,
    Delete,
    LineReplace,
    WithinReplace,
    TokenReplace,
}

impl FromStr for Category {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "insert" => Ok(Category::Insert),
            "delete" => Ok(Category::Delete),
            "line-replace" => Ok(Category::LineReplace),
            "within-replace" => Ok(Category::WithinReplace),
            "token-replace" => Ok(Category::TokenReplace),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Insert => "insert",
            Category::Delete => "delete",
            Category::LineReplace => "line-replace",
            Category::WithinReplace => "within-replace",
            Category::TokenReplace => "token-replace",
        })
    }
}

/// What makes a rule fire.
#[derive(Debug, Clone)]
pub enum Trigger {
    /// The compiled regex. Whole-line categories hold the pattern wrapped in
    /// `^(?:...)$`; within-replace holds it as written.
    Pattern(Regex),
    /// Indentation depth differs between the aligned lines.
    Indent,
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub name: String,
    pub category: Category,
    /// Pattern source exactly as written in the rule file; empty for indent rules.
    pub pattern: String,
    pub summary: String,
    pub trigger: Trigger,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub version: String,
    pub requires: Vec<String>,
}

impl RuleSet {
    /// The embedded 55-rule set.
    pub fn default_rules() -> Self {
        load_rules(DEFAULT_RULES).expect("embedded rule file is valid")
    }

    pub fn default_source() -> &'static str {
        DEFAULT_RULES
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Regex features the engine provides, as named in `requires:` headers.
pub const SUPPORTED_FEATURES: &[&str] = &[
    "alternation",
    "lazy",
    "anchors",
    "classes",
    "lookahead",
    "lookbehind",
    "alternation-lookbehind",
    "backreferences",
    "unicode",
];

/// Features with a recognised name that the engine cannot provide.
pub const UNSUPPORTED_FEATURES: &[&str] = &["unbounded-lookbehind", "recursion"];

/// One problem found while loading a rule file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleProblem {
    #[error("line {line}: expected `key: value`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice in one block")]
    RepeatedKey { line: usize, key: String },
    #[error("block at line {line}: missing `{key}`")]
    MissingKey { line: usize, key: String },
    #[error("rule `{rule}`: duplicate rule name")]
    DuplicateName { rule: String },
    #[error("rule `{rule}`: unknown category {value:?}")]
    UnknownCategory { rule: String, value: String },
    #[error("rule `{rule}`: unknown summary group {value:?}")]
    UnknownSummary { rule: String, value: String },
    #[error("rule `{rule}`: unknown trigger {value:?}")]
    UnknownTrigger { rule: String, value: String },
    #[error("rule `{rule}`: line-replace pattern must start with ^ and end with $")]
    Unanchored { rule: String },
    #[error("rule `{rule}`: invalid pattern: {message}")]
    InvalidPattern { rule: String, message: String },
    #[error("requires: feature `{feature}` is not supported by the regex engine")]
    UnsupportedFeature { feature: String },
    #[error("requires: unknown feature `{feature}`")]
    UnknownFeature { feature: String },
}

/// All problems of a rule file, reported together.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct RuleLoadError {
    pub problems: Vec<RuleProblem>,
}

impl fmt::Display for RuleLoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} problem(s) in rule file", self.problems.len())?;
        for p in &self.problems {
            write!(f, "\n  {p}")?;
        }
        Ok(())
    }
}

struct Block {
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Block {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
    }
}

const RULE_KEYS: &[&str] = &["name", "category", "pattern", "summary", "trigger"];
const HEADER_KEYS: &[&str] = &["version", "requires"];

/// Parses and compiles a rule file. Every compile and validation problem is
/// collected before failing.
pub fn load_rules(config: &str) -> Result<RuleSet, RuleLoadError> {
    let mut problems = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Block> = None;

    for (idx, raw) in config.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            blocks.extend(current.take());
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            problems.push(RuleProblem::Malformed {
                line: lineno,
                text: line.to_owned(),
            });
            continue;
        };
        let key = key.trim().to_ascii_lowercase();
        // Pattern values are verbatim apart from the separator whitespace.
        let value = value.trim_start_matches([' ', '\t']).to_owned();
        let block = current.get_or_insert_with(|| Block {
            line: lineno,
            entries: Vec::new(),
        });
        if !RULE_KEYS.contains(&key.as_str()) && !HEADER_KEYS.contains(&key.as_str()) {
            problems.push(RuleProblem::UnknownKey { line: lineno, key });
            continue;
        }
        if block.get(&key).is_some() {
            problems.push(RuleProblem::RepeatedKey { line: lineno, key });
            continue;
        }
        block.entries.push((lineno, key, value));
    }
    blocks.extend(current);

    let mut set = RuleSet::default();
    let mut names = HashSet::new();
    for block in &blocks {
        if let Some(v) = block.get("version") {
            set.version = v.trim().to_owned();
        }
        if let Some(reqs) = block.get("requires") {
            for feature in reqs.split(',').map(str::trim).filter(|f| !f.is_empty()) {
                if UNSUPPORTED_FEATURES.contains(&feature) {
                    problems.push(RuleProblem::UnsupportedFeature {
                        feature: feature.to_owned(),
                    });
                } else if !SUPPORTED_FEATURES.contains(&feature) {
                    problems.push(RuleProblem::UnknownFeature {
                        feature: feature.to_owned(),
                    });
                } else {
                    set.requires.push(feature.to_owned());
                }
            }
        }
        if block.entries.iter().all(|(_, k, _)| HEADER_KEYS.contains(&k.as_str())) {
            continue;
        }
        if let Some(rule) = build_rule(block, &mut problems) {
            if !names.insert(rule.name.clone()) {
                problems.push(RuleProblem::DuplicateName { rule: rule.name });
                continue;
            }
            set.rules.push(rule);
        }
    }

    if problems.is_empty() {
        Ok(set)
    } else {
        Err(RuleLoadError { problems })
    }
}

fn build_rule(block: &Block, problems: &mut Vec<RuleProblem>) -> Option<Rule> {
    let before = problems.len();
    let missing = |key: &str| RuleProblem::MissingKey {
        line: block.line,
        key: key.to_owned(),
    };
    let Some(name) = block.get("name").map(|n| n.trim().to_owned()) else {
        problems.push(missing("name"));
        return None;
    };
    let category = match block.get("category") {
        None => {
            problems.push(missing("category"));
            None
        }
        Some(v) => match v.parse::<Category>() {
            Ok(c) => Some(c),
            Err(()) => {
                problems.push(RuleProblem::UnknownCategory {
                    rule: name.clone(),
                    value: v.to_owned(),
                });
                None
            }
        },
    };
    let summary = match block.get("summary").map(str::trim) {
        None => {
            problems.push(missing("summary"));
            None
        }
        Some(s) if !is_summary_group(s) => {
            problems.push(RuleProblem::UnknownSummary {
                rule: name.clone(),
                value: s.to_owned(),
            });
            None
        }
        Some(s) => Some(s.to_owned()),
    };
    let pattern = block.get("pattern").map(str::to_owned);
    let trigger = match (block.get("trigger").map(str::trim), &pattern) {
        (Some("indent"), _) => Some(Trigger::Indent),
        (Some(other), _) => {
            problems.push(RuleProblem::UnknownTrigger {
                rule: name.clone(),
                value: other.to_owned(),
            });
            None
        }
        (None, None) => {
            problems.push(missing("pattern"));
            None
        }
        (None, Some(src)) => compile(&name, category, src, problems),
    };
    if problems.len() > before {
        return None;
    }
    Some(Rule {
        name,
        category: category?,
        pattern: pattern.unwrap_or_default(),
        summary: summary?,
        trigger: trigger?,
    })
}

fn compile(name: &str, category: Option<Category>, src: &str, problems: &mut Vec<RuleProblem>) -> Option<Trigger> {
    if category == Some(Category::LineReplace) && !(src.starts_with('^') && src.ends_with('$')) {
        problems.push(RuleProblem::Unanchored { rule: name.to_owned() });
    }
    let full = match category {
        Some(Category::WithinReplace) | None => src.to_owned(),
        Some(_) => format!("^(?:{src})$"),
    };
    match Regex::new(&full) {
        Ok(re) => Some(Trigger::Pattern(re)),
        Err(e) => {
            problems.push(RuleProblem::InvalidPattern {
                rule: name.to_owned(),
                message: e.to_string(),
            });
            None
        }
    }
}
