use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fixclass_core::analysis::{build_tables, difference_report, join_levels, pair_owners, user_levels};
use fixclass_core::diff::{diff_programs, extract_changes};
use fixclass_core::ingest::{build_code_pairs, parse_submission_log, resolve_sources, CodePair, SubmissionRecord};
use fixclass_core::lexer::NormalizedProgram;
use fixclass_core::metrics::{aggregate, distinct_users_problems, error_counts, pair_stats, SdForm};
use fixclass_core::rules::{self, dedup_per_pair, load_rules, score_against_gold, summarize, ErrorLabel, RuleSet};
use rayon::prelude::*;
use serde::de::DeserializeOwned;

use crate::{AnalyzeArgs, ClassifyArgs, DumpDiffArgs, DumpTokensArgs, Format, Output, PairsArgs, ScoreArgs, StatsArgs};

fn write_output(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    ))
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (k, line) in open(path)?.lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let item =
            serde_json::from_str(&line).with_context(|| format!("{}:{}: invalid record", path.display(), k + 1))?;
        out.push(item);
    }
    Ok(out)
}

fn to_jsonl<T: serde::Serialize>(items: &[T]) -> Result<String> {
    let mut text = String::new();
    for item in items {
        text.push_str(&serde_json::to_string(item)?);
        text.push('\n');
    }
    Ok(text)
}

fn pool(jobs: u64) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()
        .context("cannot start worker threads")
}

/// Reads a log and inlines every `source_path`, relative to the log's directory.
fn read_log(path: &Path) -> Result<Vec<SubmissionRecord>> {
    let mut log = parse_submission_log(open(path)?).with_context(|| format!("cannot read {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let unresolved = resolve_sources(&mut log, base);
    for e in log.errors.iter().chain(&unresolved) {
        eprintln!("warning: {}: {e}", path.display());
    }
    Ok(log.records)
}

pub fn pairs(args: &PairsArgs) -> Result<()> {
    let records = read_log(&args.input)?;
    let built = build_code_pairs(&records, args.max_distance as usize);
    write_output(&args.out, &to_jsonl(&built.pairs)?)?;
    eprintln!(
        "pairs={} dropped_distance={}",
        built.pairs.len(),
        built.dropped_distance
    );
    if built.unresolved > 0 {
        eprintln!(
            "warning: {} candidate pair(s) skipped for missing source text",
            built.unresolved
        );
    }
    Ok(())
}

fn load_rule_set(path: Option<&Path>) -> Result<RuleSet> {
    let Some(path) = path else {
        return Ok(RuleSet::default_rules());
    };
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    load_rules(&text).map_err(|e| {
        let details: Vec<String> = e.problems.iter().map(|p| format!("  {p}")).collect();
        anyhow::anyhow!("invalid rule file {}:\n{}", path.display(), details.join("\n"))
    })
}

/// Summarized labels with one label per pair and group.
fn canonical(labels: Vec<ErrorLabel>) -> Vec<ErrorLabel> {
    dedup_per_pair(summarize(labels))
}

pub fn classify(args: &ClassifyArgs) -> Result<()> {
    let rules = load_rule_set(args.rules.as_deref())?;
    let pairs: Vec<CodePair> = read_jsonl(&args.input)?;
    let per_pair: Vec<(Vec<ErrorLabel>, Vec<String>)> = pool(args.jobs)?.install(|| {
        pairs
            .par_iter()
            .map(|p| {
                let changes = extract_changes(p);
                (rules::classify(&changes, &rules), changes.warnings)
            })
            .collect()
    });
    let mut labels = Vec::new();
    for (pair, (found, warnings)) in pairs.iter().zip(per_pair) {
        for w in warnings {
            eprintln!("warning: pair {}: {w}", pair.pair_id);
        }
        labels.extend(found);
    }
    if args.dedup {
        labels = canonical(labels);
    }
    write_output(&args.out, &to_jsonl(&labels)?)
}

pub fn stats(args: &StatsArgs) -> Result<()> {
    let pairs: Vec<CodePair> = read_jsonl(&args.input)?;
    let labels = canonical(read_jsonl(&args.labels)?);
    let counts = error_counts(&labels);
    let per_pair = pool(args.jobs)?.install(|| {
        pairs
            .par_iter()
            .map(|p| pair_stats(p, counts.get(p.pair_id.as_str()).copied().unwrap_or(0)))
            .collect::<Vec<_>>()
    });
    let (users, problems) = distinct_users_problems(&pairs);
    let stats = aggregate(&per_pair, users, problems, SdForm::Population)
        .with_context(|| format!("{} holds no pairs", args.input.display()))?;
    let text = match args.format {
        Format::Human => stats.to_human(),
        Format::Records => stats.to_records(),
    };
    write_output(&args.out, &text)
}

fn read_intro(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let labels = canonical(read_jsonl(&args.labels)?);
    let log = parse_submission_log(open(&args.log)?).with_context(|| format!("cannot read {}", args.log.display()))?;
    for e in &log.errors {
        eprintln!("warning: {}: {e}", args.log.display());
    }
    let intro = read_intro(&args.intro_problems)?;
    let levels = user_levels(&log.records, &intro);
    let owners = pair_owners(labels.iter().map(|l| l.pair_id.as_str()), &log.records);
    let (joined, unresolved) = join_levels(&labels, &owners, &levels);
    if unresolved > 0 {
        eprintln!(
            "warning: {unresolved} label(s) refer to pairs not found in {}",
            args.log.display()
        );
    }
    let report = difference_report(&build_tables(&joined), args.alpha);
    let text = match args.format {
        Format::Human => report.to_human(),
        Format::Records => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            report.to_records()
        }
    };
    write_output(&args.out, &text)
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let labels: Vec<ErrorLabel> = read_jsonl(&args.labels)?;
    let gold: Vec<ErrorLabel> = read_jsonl(&args.gold)?;
    let Ok(score) = score_against_gold(&labels, &gold) else {
        bail!("{} holds no labels", args.labels.display());
    };
    let text = match args.format {
        Format::Human => format!(
            "correct={} total={} accuracy={:.4}\n",
            score.correct, score.total, score.accuracy
        ),
        Format::Records => format!("{}\n", serde_json::to_string(&score)?),
    };
    write_output(&args.out, &text)
}

fn read_program(path: &Path) -> Result<NormalizedProgram> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (program, diagnostics) = NormalizedProgram::from_source(&text);
    for d in diagnostics {
        eprintln!("warning: {}: {d}", path.display());
    }
    Ok(program)
}

pub fn dump_tokens(args: &DumpTokensArgs) -> Result<()> {
    write_output(&args.out, &read_program(&args.input)?.dump())
}

pub fn dump_diff(args: &DumpDiffArgs) -> Result<()> {
    let changes = diff_programs("dump", &read_program(&args.wa)?, &read_program(&args.ac)?);
    write_output(&args.out, &changes.dump())
}
