//! Seeded synthetic submission corpora with known classification results.
//!
//! Every generated user has exactly one code pair on the introductory
//! problem. The WA and AC sides are variants of a small program template
//! that differ only in the lines touched by the pair's planned fixes, so the
//! labels each pair must receive are known in advance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::UserLevel;
use crate::ingest::{CodePair, SourceRef, SubmissionRecord, Verdict};

pub const INTRO_PROBLEM: &str = "intro-1";

/// One kind of seeded WA-to-AC fix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixKind {
    /// `n = input()` becomes `n = int(input())`.
    ConvertInput,
    /// `range(1, n)` becomes `range(n)`.
    Range,
    /// `>=` becomes `>` in the `if` condition.
    Comparison,
    /// `+` becomes `-` in an assignment.
    Arithmetic,
    /// A literal inside the final `print` changes.
    Literal,
    /// The final `print` is added.
    MissingOutput,
    /// The final `print` moves out of the `else` block.
    Indent,
}

impl FixKind {
    pub const ALL: [FixKind; 7] = [
        FixKind::ConvertInput,
        FixKind::Range,
        FixKind::Comparison,
        FixKind::Arithmetic,
        FixKind::Literal,
        FixKind::MissingOutput,
        FixKind::Indent,
    ];

    /// Rules the default rule set fires for this fix, in classification order.
    pub fn expected_rules(self) -> &'static [&'static str] {
        match self {
            FixKind::ConvertInput => &["wrong convert value", "wrong variable declaration"],
            FixKind::Range => &["wrong for statement", "wrong range"],
            FixKind::Comparison => &["wrong if statement", "wrong comparison operator"],
            FixKind::Arithmetic => &["wrong variable declaration", "wrong arithmetic operator"],
            FixKind::Literal => &["wrong output", "wrong value"],
            FixKind::MissingOutput => &["missing output"],
            FixKind::Indent => &["wrong indent"],
        }
    }

    /// Fixes that touch the final `print` line; at most one per pair.
    fn touches_print(self) -> bool {
        matches!(self, FixKind::Literal | FixKind::MissingOutput | FixKind::Indent)
    }
}

/// A user to generate: their level and the fixes in their one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedPair {
    pub level: UserLevel,
    pub fixes: Vec<FixKind>,
}

/// A generated pair and the rules it must receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPair {
    pub pair_id: String,
    pub user_id: String,
    pub level: UserLevel,
    pub fixes: Vec<FixKind>,
    pub expected_rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub records: Vec<SubmissionRecord>,
    pub intro_problems: Vec<String>,
    pub pairs: Vec<SynthPair>,
}

impl Corpus {
    /// The submission log, one JSON record per line.
    pub fn log_text(&self) -> String {
        self.records.iter().map(|r| r.to_log_line() + "\n").collect()
    }

    /// Introductory problem ids, one per line.
    pub fn intro_text(&self) -> String {
        self.intro_problems.iter().map(|p| format!("{p}\n")).collect()
    }

    pub fn expected_label_count(&self) -> usize {
        self.pairs.iter().map(|p| p.expected_rules.len()).sum()
    }
}

struct Style {
    indent: &'static str,
    tight: bool,
}

impl Style {
    fn op(&self, op: &str) -> String {
        if self.tight {
            op.to_owned()
        } else {
            format!(" {op} ")
        }
    }
}

/// Generates the WA and AC sources for one pair.
pub fn program_pair<R: Rng>(rng: &mut R, fixes: &[FixKind]) -> (String, String) {
    let pick = |rng: &mut R, pool: &[&'static str]| *pool.choose(rng).expect("non-empty pool");
    let n = pick(rng, &["n", "m", "k", "size", "cnt"]);
    let a = pick(rng, &["a", "nums", "xs", "arr", "vals"]);
    let s = pick(rng, &["s", "total", "acc", "t", "sm"]);
    let c = pick(rng, &["c", "res", "ans", "out", "r"]);
    let k1: u32 = rng.gen_range(0..10);
    let k2: u32 = rng.gen_range(2..10);
    let lit: u32 = rng.gen_range(1..10);
    let wrong_lit = (lit + rng.gen_range(1..9)) % 10;
    let style = Style {
        indent: ["    ", "  ", "\t"].choose(rng).expect("indent"),
        tight: rng.gen_bool(0.3),
    };
    let eq = style.op("=");
    let ind = style.indent;
    let has = |f: FixKind| fixes.contains(&f);

    let read_list = if rng.gen_bool(0.5) {
        format!("{a}{eq}list(map(int, input().split()))")
    } else {
        format!("{a}{eq}[int(x) for x in input().split()]")
    };
    let mut wa = Vec::new();
    let mut ac = Vec::new();
    let mut both = |w: String, c: String| {
        wa.push(Some(w));
        ac.push(Some(c));
    };
    let read_n = format!("{n}{eq}int(input())");
    both(
        if has(FixKind::ConvertInput) {
            format!("{n}{eq}input()")
        } else {
            read_n.clone()
        },
        read_n,
    );
    both(read_list.clone(), read_list);
    both(format!("{s}{eq}0"), format!("{s}{eq}0"));
    let for_ok = format!("for i in range({n}):");
    let for_bad = format!("for i in range(1, {n}):");
    both(if has(FixKind::Range) { for_bad } else { for_ok.clone() }, for_ok);
    let acc = format!("{ind}{s}{}{a}[i]", style.op("+="));
    both(acc.clone(), acc);
    let if_ok = format!("if {s}{}{k1}:", style.op(">"));
    let if_bad = format!("if {s}{}{k1}:", style.op(">="));
    both(
        if has(FixKind::Comparison) {
            if_bad
        } else {
            if_ok.clone()
        },
        if_ok,
    );
    let sub_ok = format!("{ind}{c}{eq}{s}{}{n}", style.op("-"));
    let sub_bad = format!("{ind}{c}{eq}{s}{}{n}", style.op("+"));
    both(
        if has(FixKind::Arithmetic) {
            sub_bad
        } else {
            sub_ok.clone()
        },
        sub_ok,
    );
    both("else:".into(), "else:".into());
    let mul = format!("{ind}{c}{eq}{s}{}{k2}", style.op("*"));
    both(mul.clone(), mul);
    let print_ok = format!("print({c}{}{lit})", style.op("+"));
    let print_wa = if has(FixKind::Literal) {
        Some(format!("print({c}{}{wrong_lit})", style.op("+")))
    } else if has(FixKind::MissingOutput) {
        None
    } else if has(FixKind::Indent) {
        Some(format!("{ind}{print_ok}"))
    } else {
        Some(print_ok.clone())
    };
    wa.push(print_wa);
    ac.push(Some(print_ok));

    // Decoration shared by both sides: a header comment, trailing comments
    // and blank lines, none of which survive normalization.
    let header = rng
        .gen_bool(0.5)
        .then(|| format!("# solution {}", rng.gen_range(1..1000)));
    let mut decorate = Vec::with_capacity(wa.len());
    for _ in 0..wa.len() {
        decorate.push((rng.gen_bool(0.15), rng.gen_bool(0.2)));
    }
    let render = |lines: &[Option<String>]| {
        let mut out = String::new();
        if let Some(h) = &header {
            out.push_str(h);
            out.push('\n');
        }
        for (line, &(blank_after, comment)) in lines.iter().zip(&decorate) {
            let Some(line) = line else { continue };
            out.push_str(line);
            if comment {
                out.push_str("  # step");
            }
            out.push('\n');
            if blank_after {
                out.push('\n');
            }
        }
        out
    };
    (render(&wa), render(&ac))
}

/// Builds the submission log for a plan. Novices get WA, AC and five more
/// WAs on the introductory problem; experts get WA and AC on it plus ACs on
/// eleven other problems; other users get just the WA and AC.
pub fn build_corpus(seed: u64, plan: &[PlannedPair]) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    let mut pairs = Vec::with_capacity(plan.len());
    let mut clock = 1_600_000_000i64;
    let mut next_id = 1u64;
    let mut submit = |records: &mut Vec<SubmissionRecord>, user: &str, problem: &str, verdict: Verdict, src: String| {
        let id = next_id.to_string();
        next_id += 1;
        clock += 60;
        records.push(SubmissionRecord {
            submission_id: id.clone(),
            user_id: user.to_owned(),
            problem_id: problem.to_owned(),
            verdict,
            submitted_at: clock,
            source: SourceRef::Inline(src),
        });
        id
    };
    for (u, planned) in plan.iter().enumerate() {
        let user = format!("user{u:05}");
        let (wa, ac) = program_pair(&mut rng, &planned.fixes);
        let wa_id = submit(&mut records, &user, INTRO_PROBLEM, Verdict::Wa, wa);
        let ac_id = submit(&mut records, &user, INTRO_PROBLEM, Verdict::Ac, ac);
        match planned.level {
            UserLevel::Novice => {
                for k in 0..5 {
                    submit(&mut records, &user, INTRO_PROBLEM, Verdict::Wa, format!("print({k})\n"));
                }
            }
            UserLevel::Expert => {
                for k in 0..11 {
                    submit(
                        &mut records,
                        &user,
                        &format!("hard-{k:02}"),
                        Verdict::Ac,
                        format!("print({k})\n"),
                    );
                }
            }
            UserLevel::Other => {}
        }
        pairs.push(SynthPair {
            pair_id: CodePair::make_id(&wa_id, &ac_id),
            user_id: user,
            level: planned.level,
            fixes: planned.fixes.clone(),
            expected_rules: planned
                .fixes
                .iter()
                .flat_map(|f| f.expected_rules().iter().map(|r| (*r).to_owned()))
                .collect(),
        });
    }
    Corpus {
        records,
        intro_problems: vec![INTRO_PROBLEM.to_owned()],
        pairs,
    }
}

/// Users for a novice/expert study: exactly `round(rate * count)` users of
/// each level carry `seeded`, the rest carry `background`. User order is
/// shuffled.
pub fn study_plan(
    seed: u64,
    novices: usize,
    experts: usize,
    novice_rate: f64,
    expert_rate: f64,
    seeded: FixKind,
    background: FixKind,
) -> Vec<PlannedPair> {
    let mut plan = Vec::with_capacity(novices + experts);
    for (level, count, rate) in [
        (UserLevel::Novice, novices, novice_rate),
        (UserLevel::Expert, experts, expert_rate),
    ] {
        let with_fix = (rate * count as f64).round() as usize;
        for k in 0..count {
            let fix = if k < with_fix { seeded } else { background };
            plan.push(PlannedPair {
                level,
                fixes: vec![fix],
            });
        }
    }
    plan.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    plan
}

/// `n` users alternating novice and expert, each pair carrying one to three
/// random compatible fixes.
pub fn mixed_plan(seed: u64, n: usize) -> Vec<PlannedPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            let want = rng.gen_range(1..=3);
            let mut fixes: Vec<FixKind> = Vec::new();
            let mut order = FixKind::ALL.to_vec();
            order.shuffle(&mut rng);
            for f in order {
                if fixes.len() == want {
                    break;
                }
                if f.touches_print() && fixes.iter().any(|g| g.touches_print()) {
                    continue;
                }
                fixes.push(f);
            }
            // Keep template order so expected labels follow op order.
            fixes.sort_by_key(|f| FixKind::ALL.iter().position(|g| g == f));
            let level = if k % 2 == 0 {
                UserLevel::Novice
            } else {
                UserLevel::Expert
            };
            PlannedPair { level, fixes }
        })
        .collect()
}
