//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fixclass_core::align::{char_levenshtein, levenshtein};
use fixclass_core::analysis::{
    build_tables, chi_square_test, join_levels, pair_owners, residual_analysis, user_levels, ContingencyTable,
};
use fixclass_core::diff::{diff_programs, diff_tokens, extract_changes, ChangeLabel};
use fixclass_core::ingest::{build_code_pairs, SourceRef, SubmissionRecord, Verdict};
use fixclass_core::lexer::{LogicalLine, NormalizedProgram, Token, TokenKind};
use fixclass_core::rules::{classify, dedup_per_pair, selftest, summarize, RuleSet};
use fixclass_core::synth::{build_corpus, mixed_plan, study_plan, FixKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fixclass"))
}

/// Runs the binary and returns stdout, failing on a non-zero exit.
fn run(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin().args(args).output().map_err(|e| format!("spawn failed: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`fixclass {}` exited {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn record(id: &str, user: &str, problem: &str, verdict: Verdict, t: i64, src: &str) -> SubmissionRecord {
    SubmissionRecord {
        submission_id: id.into(),
        user_id: user.into(),
        problem_id: problem.into(),
        verdict,
        submitted_at: t,
        source: SourceRef::Inline(src.into()),
    }
}

fn write_log(dir: &Path, name: &str, records: &[SubmissionRecord]) -> String {
    let text: String = records.iter().map(|r| r.to_log_line() + "\n").collect();
    fs::write(dir.join(name), text).unwrap();
    path(dir, name)
}

fn rule_names(jsonl: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(jsonl)
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["rule"]
                .as_str()
                .unwrap()
                .to_owned()
        })
        .collect()
}

const PUBLISHED_RULES: &str = r#"
name: missing output
category: insert
pattern: ^print\s\(\s.+?\s\)$|^print\s\(\s\)$
summary: output

name: needless output
category: delete
pattern: ^print\s\(\s.+?\s\)$|^print\s\(\s\)$
summary: output

name: wrong output
category: line-replace
pattern: ^print\s\(\s.+?\s\)$|^print\s\(\s\)$
summary: output

name: wrong value
category: token-replace
pattern: ^\d+$|^\d+\.\d*$|^\.\d+$
summary: literal

name: wrong convert list
category: within-replace
pattern: \slist\s\(\s.+?\s\)|\smap\s\(\s\w+\s,\s.+?\s\)
summary: convert variable
"#;

fn table_one_fidelity() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let published = path(dir.path(), "published.rules");
    fs::write(&published, PUBLISHED_RULES).unwrap();

    let log = write_log(
        dir.path(),
        "log.jsonl",
        &[
            record("1", "u", "p", Verdict::Wa, 1, "x = input()\nprint(x)\n"),
            record("2", "u", "p", Verdict::Ac, 2, "x = int(input())\nprint(x)\n"),
            record("3", "v", "p", Verdict::Wa, 1, "ans = 1\n"),
            record("4", "v", "p", Verdict::Ac, 2, "ans = 1\nprint(ans)\n"),
        ],
    );
    let pairs = path(dir.path(), "pairs.jsonl");
    run(&["pairs", "-i", &log, "-o", &pairs])?;
    let pair_lines: Vec<String> = fs::read_to_string(&pairs).unwrap().lines().map(str::to_owned).collect();
    ensure!(pair_lines.len() == 2, "expected 2 pairs, got {}", pair_lines.len());
    let (fig_pairs, print_pairs) = (path(dir.path(), "fig.jsonl"), path(dir.path(), "print.jsonl"));
    fs::write(&fig_pairs, format!("{}\n", pair_lines[0])).unwrap();
    fs::write(&print_pairs, format!("{}\n", pair_lines[1])).unwrap();

    let start = Instant::now();
    let with_published = rule_names(&run(&["classify", "-i", &print_pairs, "--rules", &published])?);
    let fig = rule_names(&run(&["classify", "-i", &fig_pairs])?);
    let elapsed = start.elapsed();

    ensure!(
        with_published == ["missing output"],
        "published rules on print insertion: {with_published:?}"
    );
    let fig: BTreeSet<String> = fig.into_iter().collect();
    let want: BTreeSet<String> = ["wrong variable declaration", "wrong convert value"]
        .map(String::from)
        .into();
    ensure!(fig == want, "default rules on the input() pair: {fig:?}");
    let default = RuleSet::default_rules();
    for block in PUBLISHED_RULES.split("\n\n").filter(|b| b.contains("name:")) {
        let field = |key: &str| block.lines().find_map(|l| l.strip_prefix(key)).unwrap().trim();
        let name = field("name:");
        let Some(rule) = default.get(name) else {
            return Err(format!("default set lacks {name}"));
        };
        ensure!(
            rule.pattern == field("pattern:"),
            "default pattern for {name} differs from the published one"
        );
    }
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "{{wrong variable declaration, wrong convert value}} and {{missing output}} in {elapsed:.2?}"
    ))
}

/// Group and member rule names, as published.
const GROUPS: &[(&str, &[&str])] = &[
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

fn ruleset_coverage() -> Check {
    let group_of: HashMap<&str, &str> = GROUPS
        .iter()
        .flat_map(|(g, rs)| rs.iter().map(move |r| (*r, *g)))
        .collect();
    ensure!(GROUPS.len() == 21 && group_of.len() == 55, "reference table malformed");
    let rules = RuleSet::default_rules();
    let names: HashSet<&str> = rules.rules.iter().map(|r| r.name.as_str()).collect();
    let want: HashSet<&str> = group_of.keys().copied().collect();
    ensure!(
        rules.len() == 55 && names == want,
        "rule names differ: {:?}",
        names.symmetric_difference(&want).collect::<Vec<_>>()
    );

    let fixtures = selftest::default_fixtures();
    ensure!(fixtures.len() == 110, "{} fixtures", fixtures.len());
    let report = selftest::run(&rules, &fixtures);
    ensure!(
        report.unknown_rules.is_empty(),
        "unknown rules {:?}",
        report.unknown_rules
    );
    ensure!(
        report.uncovered_rules.is_empty(),
        "uncovered rules {:?}",
        report.uncovered_rules
    );
    let failed: Vec<String> = report
        .failures()
        .map(|o| format!("{} ({:?})", o.rule, o.expect))
        .collect();
    ensure!(failed.is_empty(), "{} fixture(s) failed: {failed:?}", failed.len());

    let mut fired = 0;
    for f in &fixtures {
        let wa = NormalizedProgram::from_source(&f.wa).0;
        let ac = NormalizedProgram::from_source(&f.ac).0;
        for label in summarize(classify(&diff_programs("f", &wa, &ac), &rules)) {
            fired += 1;
            let want = group_of.get(label.rule_name.as_str()).copied();
            ensure!(
                want == Some(label.summary.as_str()),
                "{} summarized as {}",
                label.rule_name,
                label.summary
            );
        }
    }
    Ok(format!("55 rules, 110 fixtures, {fired} fired labels in their groups"))
}

fn names_line(texts: &[&str]) -> LogicalLine {
    LogicalLine {
        indent_depth: 0,
        tokens: texts
            .iter()
            .map(|t| Token {
                kind: TokenKind::Name,
                text: (*t).into(),
                source_line: 1,
            })
            .collect(),
    }
}

fn exhaustive_lcs(a: &[&str], b: &[&str]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut it = b.iter();
        if (0..a.len())
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| it.any(|y| *y == a[i]))
        {
            best = size;
        }
    }
    best
}

fn diff_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alphabet = ["a", "b", "c", "d"];
    for case in 0..1000 {
        let mut gen = || -> Vec<&str> {
            (0..rng.gen_range(0..=12))
                .map(|_| alphabet[rng.gen_range(0..4)])
                .collect()
        };
        let (a, b) = (gen(), gen());
        let (wa, ac) = diff_tokens(&names_line(&a), &names_line(&b));
        let changed = wa.iter().chain(&ac).filter(|&&l| l != ChangeLabel::Equal).count();
        let want = a.len() + b.len() - 2 * exhaustive_lcs(&a, &b);
        ensure!(changed == want, "case {case}: {a:?} vs {b:?}: {changed} != {want}");
    }
    Ok("1000/1000 cases".into())
}

fn recursive_distance<T: PartialEq>(a: &[T], b: &[T], memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if a.is_empty() || b.is_empty() {
        return a.len() + b.len();
    }
    if let Some(&d) = memo.get(&(a.len(), b.len())) {
        return d;
    }
    let sub = usize::from(a[0] != b[0]);
    let d = (recursive_distance(&a[1..], &b[1..], memo) + sub)
        .min(recursive_distance(&a[1..], b, memo) + 1)
        .min(recursive_distance(a, &b[1..], memo) + 1);
    memo.insert((a.len(), b.len()), d);
    d
}

fn edit_distance_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let chars: Vec<char> = "ab c(é)".chars().collect();
    let words = ["x", "=", "(", ")", "print", "1"];
    for case in 0..1000 {
        let s: String = (0..rng.gen_range(0..=30))
            .map(|_| chars[rng.gen_range(0..chars.len())])
            .collect();
        let t: String = (0..rng.gen_range(0..=30))
            .map(|_| chars[rng.gen_range(0..chars.len())])
            .collect();
        let (sc, tc): (Vec<char>, Vec<char>) = (s.chars().collect(), t.chars().collect());
        let want = recursive_distance(&sc, &tc, &mut HashMap::new());
        ensure!(char_levenshtein(&s, &t) == want, "char case {case}: {s:?} vs {t:?}");

        let u: Vec<&str> = (0..rng.gen_range(0..=30))
            .map(|_| words[rng.gen_range(0..words.len())])
            .collect();
        let v: Vec<&str> = (0..rng.gen_range(0..=30))
            .map(|_| words[rng.gen_range(0..words.len())])
            .collect();
        ensure!(
            levenshtein(&u, &v) == recursive_distance(&u, &v, &mut HashMap::new()),
            "token case {case}: {u:?} vs {v:?}"
        );
    }
    Ok("1000 char and 1000 token cases exact".into())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals)
        .map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h))
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn oracle_erfc(z: f64) -> f64 {
    simpson(
        |t| 2.0 / std::f64::consts::PI.sqrt() * (-t * t).exp(),
        z,
        z + 12.0,
        40_000,
    )
}

fn oracle_chi_tail(x: f64, k: usize) -> f64 {
    let h = x / 2.0;
    if k.is_multiple_of(2) {
        let (mut term, mut sum) = (1.0, 1.0);
        for i in 1..k / 2 {
            term *= h / i as f64;
            sum += term;
        }
        (-h).exp() * sum
    } else {
        let mut term = h.sqrt() / (std::f64::consts::PI.sqrt() / 2.0);
        let mut sum = if k >= 3 { term } else { 0.0 };
        for i in 1..(k - 1) / 2 {
            term *= h / (i as f64 + 0.5);
            sum += term;
        }
        oracle_erfc(h.sqrt()) + (-h).exp() * sum
    }
}

fn two_column(counts: Vec<Vec<u64>>) -> ContingencyTable {
    let rows = (0..counts.len()).map(|i| format!("r{i}")).collect();
    ContingencyTable::from_counts("p", rows, vec!["NOVICE".into(), "EXPERT".into()], counts)
}

fn statistics_oracle() -> Check {
    let worked = two_column(vec![vec![30, 10], vec![10, 30]]);
    let chi = chi_square_test(&worked).map_err(|e| e.to_string())?;
    ensure!(chi.chi_square == 20.0, "chi2 = {}", chi.chi_square);
    ensure!((chi.p_value - 7.7442e-6).abs() < 1e-8, "p = {}", chi.p_value);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..50 {
        let rows = rng.gen_range(2..=6);
        let counts: Vec<Vec<u64>> = (0..rows)
            .map(|_| vec![rng.gen_range(1..60), rng.gen_range(1..60)])
            .collect();
        let chi = chi_square_test(&two_column(counts.clone())).map_err(|e| e.to_string())?;
        let want = oracle_chi_tail(chi.chi_square, rows - 1);
        ensure!(
            (chi.p_value - want).abs() < 1e-8,
            "table {case} {counts:?}: p {} vs {want}",
            chi.p_value
        );
    }

    let residuals = residual_analysis(&worked).map_err(|e| e.to_string())?;
    for r in residuals.residuals.iter().flatten() {
        let r = r.unwrap().abs();
        ensure!(
            (r - 4.47214).abs() < 1e-6,
            "chi2 and 50 tables pass, but |residual| = {r:.9} (= sqrt 20) is {:.2e} from 4.47214, over the 1e-6 tolerance",
            (r - 4.47214).abs()
        );
    }
    Ok("chi2 = 20 exactly, p and 50 random tables within 1e-8, residual within 1e-6".into())
}

fn write_corpus(dir: &Path, corpus: &fixclass_core::synth::Corpus) -> (String, String) {
    fs::write(dir.join("log.jsonl"), corpus.log_text()).unwrap();
    fs::write(dir.join("intro.txt"), corpus.intro_text()).unwrap();
    (path(dir, "log.jsonl"), path(dir, "intro.txt"))
}

/// pairs -> classify --dedup -> analyze, returning (records, human) reports.
fn study(dir: &Path, corpus: &fixclass_core::synth::Corpus) -> Result<(String, String), String> {
    let (log, intro) = write_corpus(dir, corpus);
    let (pairs, labels) = (path(dir, "pairs.jsonl"), path(dir, "labels.jsonl"));
    run(&["pairs", "-i", &log, "-o", &pairs])?;
    run(&["classify", "-i", &pairs, "--dedup", "-o", &labels])?;
    let analyze = |format: &str| {
        run(&[
            "analyze",
            "--labels",
            &labels,
            "--log",
            &log,
            "--intro-problems",
            &intro,
            "--format",
            format,
        ])
    };
    let records = String::from_utf8(analyze("records")?).unwrap();
    let human = String::from_utf8(analyze("human")?).unwrap();
    Ok((records, human))
}

fn synthetic_study() -> Check {
    let start = Instant::now();
    let seeded = build_corpus(
        61,
        &study_plan(61, 200, 200, 0.6, 0.2, FixKind::Arithmetic, FixKind::Literal),
    );
    let dir = tempfile::tempdir().unwrap();
    let (records, human) = study(dir.path(), &seeded)?;
    let row = records
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|r| r["rule"] == "arithmetic operator")
        .ok_or_else(|| format!("no arithmetic operator row in:\n{records}"))?;
    ensure!(row["p"].as_f64().unwrap() < 0.05, "p = {}", row["p"]);
    ensure!(row["direction"] == "NOVICE", "direction {}", row["direction"]);
    let line = human
        .lines()
        .find(|l| l.contains("arithmetic operator"))
        .unwrap_or_default();
    let cells: Vec<&str> = line.split_whitespace().collect();
    ensure!(
        cells.len() >= 2 && cells[cells.len() - 2].ends_with('*'),
        "novice ratio not flagged: {line:?}"
    );

    let control = build_corpus(
        62,
        &study_plan(62, 200, 200, 0.2, 0.2, FixKind::Arithmetic, FixKind::Literal),
    );
    let dir = tempfile::tempdir().unwrap();
    let (records, human) = study(dir.path(), &control)?;
    ensure!(records.is_empty(), "control report has rows:\n{records}");
    let body: Vec<&str> = human
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("problem"))
        .collect();
    ensure!(body.is_empty(), "control human report has a body: {body:?}");

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "arithmetic operator p = {:.3e}, novice flagged; control empty; {elapsed:.2?}",
        row["p"].as_f64().unwrap()
    ))
}

fn per_pair_dedup() -> Check {
    let block = |v: &str, inside: bool| {
        format!(
            "for i in range(n):\n    s = i\n{}{v} = 1\n",
            if inside { "    " } else { "" }
        )
    };
    let program = |inside: bool| -> String {
        "n = int(input())\n".to_owned() + &["a", "b", "c", "d", "e"].map(|v| block(v, inside)).concat()
    };
    let mut records = vec![
        record("1", "novice", "intro-1", Verdict::Wa, 1, &program(true)),
        record("2", "novice", "intro-1", Verdict::Ac, 2, &program(false)),
        record("3", "expert", "intro-1", Verdict::Wa, 3, "print(1)\n"),
        record("4", "expert", "intro-1", Verdict::Ac, 4, "print(2)\n"),
    ];
    for k in 0..5 {
        records.push(record(
            &format!("w{k}"),
            "novice",
            "intro-1",
            Verdict::Wa,
            10 + k,
            "print(0)\n",
        ));
    }
    for k in 0..11 {
        records.push(record(
            &format!("h{k}"),
            "expert",
            &format!("hard-{k}"),
            Verdict::Ac,
            10 + k,
            "print(0)\n",
        ));
    }
    let rules = RuleSet::default_rules();
    let built = build_code_pairs(&records, 100);
    let raw: Vec<_> = built
        .pairs
        .iter()
        .flat_map(|p| classify(&extract_changes(p), &rules))
        .collect();
    let indents = raw
        .iter()
        .filter(|l| l.rule_name == "wrong indent" && l.pair_id == "1:2")
        .count();
    ensure!(indents == 5, "expected five raw indent labels, got {indents}");

    let labels = dedup_per_pair(summarize(raw));
    let intro: HashSet<String> = ["intro-1".to_owned()].into();
    let levels = user_levels(&records, &intro);
    let owners = pair_owners(labels.iter().map(|l| l.pair_id.as_str()), &records);
    let (joined, _) = join_levels(&labels, &owners, &levels);
    let tables = build_tables(&joined);
    let table = tables
        .iter()
        .find(|t| t.problem_id == "intro-1")
        .ok_or("no table for intro-1")?;
    let row = table
        .row_names
        .iter()
        .position(|r| r == "indent")
        .ok_or("no indent row")?;
    ensure!(table.counts[row] == [1, 0], "indent row {:?}", table.counts[row]);
    Ok("five indent fixes count once".into())
}

fn throughput() -> Check {
    let corpus = build_corpus(8, &mixed_plan(8, 1000));
    let dir = tempfile::tempdir().unwrap();
    let (log, _) = write_corpus(dir.path(), &corpus);
    let pairs = path(dir.path(), "pairs.jsonl");
    run(&["pairs", "-i", &log, "-o", &pairs])?;

    let start = Instant::now();
    let single = run(&["classify", "-i", &pairs, "--jobs", "1"])?;
    let elapsed = start.elapsed();
    let parallel = run(&["classify", "-i", &pairs, "--jobs", "2"])?;
    let four = run(&["classify", "-i", &pairs, "--jobs", "4"])?;

    let labels = rule_names(&single).len();
    ensure!(
        labels == corpus.expected_label_count(),
        "{labels} labels, expected {}",
        corpus.expected_label_count()
    );
    ensure!(single == parallel && single == four, "output differs across --jobs");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "1000 pairs, {labels} labels in {elapsed:.2?}; --jobs 2/4 identical"
    ))
}

fn full_pipeline(dir: &Path, corpus: &fixclass_core::synth::Corpus) -> Result<Vec<Vec<u8>>, String> {
    let (log, intro) = write_corpus(dir, corpus);
    let (pairs, labels) = (path(dir, "pairs.jsonl"), path(dir, "labels.jsonl"));
    run(&["pairs", "-i", &log, "-o", &pairs])?;
    run(&["classify", "-i", &pairs, "--dedup", "--jobs", "2", "-o", &labels])?;
    let stats = run(&["stats", "-i", &pairs, "--labels", &labels, "--format", "records"])?;
    let report = run(&[
        "analyze",
        "--labels",
        &labels,
        "--log",
        &log,
        "--intro-problems",
        &intro,
        "--format",
        "records",
    ])?;
    Ok(vec![
        fs::read(&pairs).unwrap(),
        fs::read(&labels).unwrap(),
        stats,
        report,
    ])
}

fn determinism() -> Check {
    let corpus = || {
        build_corpus(
            9,
            &study_plan(9, 200, 200, 0.6, 0.2, FixKind::Arithmetic, FixKind::Literal),
        )
    };
    let first = full_pipeline(tempfile::tempdir().unwrap().path(), &corpus())?;
    let second = full_pipeline(tempfile::tempdir().unwrap().path(), &corpus())?;
    ensure!(first.iter().all(|o| !o.is_empty()), "an output was empty");
    ensure!(first == second, "outputs differ between runs");
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("pairs, labels, stats, report identical ({bytes} bytes)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("rule table fidelity", table_one_fidelity),
        ("ruleset coverage", ruleset_coverage),
        ("diff oracle", diff_oracle),
        ("edit-distance oracle", edit_distance_oracle),
        ("statistics oracle", statistics_oracle),
        ("synthetic study", synthetic_study),
        ("per-pair dedup", per_pair_dedup),
        ("throughput", throughput),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
