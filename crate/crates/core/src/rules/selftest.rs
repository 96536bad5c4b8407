//! Per-rule fixtures: every rule has a pair it must fire on and a close
//! pair it must stay silent on.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{classify, RuleSet};
use crate::diff::diff_programs;
use crate::lexer::NormalizedProgram;

const DEFAULT_FIXTURES: &str = include_str!("selftest.jsonl");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Positive,
    NearMiss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub rule: String,
    pub expect: Expect,
    pub wa: String,
    pub ac: String,
}

#[derive(Debug, thiserror::Error)]
#[error("fixture line {line}: {source}")]
pub struct FixtureError {
    pub line: usize,
    #[source]
    pub source: serde_json::Error,
}

/// Parses one fixture per non-blank line.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, FixtureError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|source| FixtureError { line: i + 1, source }))
        .collect()
}

/// The fixtures for the default rule set.
pub fn default_fixtures() -> Vec<Fixture> {
    parse_fixtures(DEFAULT_FIXTURES).expect("embedded fixtures parse")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub index: usize,
    pub rule: String,
    pub expect: Expect,
    pub fired: bool,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.fired == (self.expect == Expect::Positive)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelfTestReport {
    pub outcomes: Vec<Outcome>,
    /// Fixtures naming a rule the set does not have.
    pub unknown_rules: Vec<String>,
    /// Rules without a positive fixture or without a near-miss fixture.
    pub uncovered_rules: Vec<String>,
}

impl SelfTestReport {
    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn ok(&self) -> bool {
        self.failures().next().is_none() && self.unknown_rules.is_empty() && self.uncovered_rules.is_empty()
    }
}

/// Classifies every fixture pair and checks whether its rule fired.
pub fn run(rules: &RuleSet, fixtures: &[Fixture]) -> SelfTestReport {
    let mut report = SelfTestReport::default();
    let mut positive = BTreeSet::new();
    let mut near_miss = BTreeSet::new();
    for (index, fx) in fixtures.iter().enumerate() {
        if rules.get(&fx.rule).is_none() {
            report.unknown_rules.push(fx.rule.clone());
            continue;
        }
        match fx.expect {
            Expect::Positive => positive.insert(fx.rule.as_str()),
            Expect::NearMiss => near_miss.insert(fx.rule.as_str()),
        };
        let (wa, _) = NormalizedProgram::from_source(&fx.wa);
        let (ac, _) = NormalizedProgram::from_source(&fx.ac);
        let changes = diff_programs(&format!("fixture-{index}"), &wa, &ac);
        let fired = classify(&changes, rules).iter().any(|l| l.rule_name == fx.rule);
        report.outcomes.push(Outcome {
            index,
            rule: fx.rule.clone(),
            expect: fx.expect,
            fired,
        });
    }
    report.uncovered_rules = rules
        .rules
        .iter()
        .filter(|r| !positive.contains(r.name.as_str()) || !near_miss.contains(r.name.as_str()))
        .map(|r| r.name.clone())
        .collect();
    report
}
