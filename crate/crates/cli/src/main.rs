use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(
    name = "fixclass",
    version,
    about = "Classify the fixes between wrong and accepted submissions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build WA->AC code pairs from a submission log.
    Pairs(PairsArgs),
    /// Label the changes in each code pair.
    Classify(ClassifyArgs),
    /// Corpus statistics over pairs and their labels.
    Stats(StatsArgs),
    /// Novice/expert difference report.
    Analyze(AnalyzeArgs),
    /// Accuracy of labels against a gold label file.
    Score(ScoreArgs),
    /// Print the normalized lines of a source file.
    DumpTokens(DumpTokensArgs),
    /// Print the line diff of two source files.
    DumpDiff(DumpDiffArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Args)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct PairsArgs {
    /// Submission log, one JSON record per line.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Pairs at or above this character edit distance are dropped.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_distance: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Pair file written by `pairs`.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Rule file; the built-in rule set when omitted.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Summarize labels and keep one per pair and group.
    #[arg(long)]
    pub dedup: bool,
    /// Worker threads for per-pair work.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct StatsArgs {
    /// Pair file written by `pairs`.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Label file written by `classify`.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[command(flatten)]
    pub out: Output,
}

fn parse_alpha(raw: &str) -> Result<f64, String> {
    let alpha: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err("alpha must lie strictly between 0 and 1".into())
    }
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Label file written by `classify`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Submission log the pairs were built from.
    #[arg(long)]
    pub log: PathBuf,
    /// Introductory problem ids, one per line.
    #[arg(long)]
    pub intro_problems: PathBuf,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct ScoreArgs {
    /// Labels to score.
    #[arg(long)]
    pub labels: PathBuf,
    /// Hand-checked labels.
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct DumpTokensArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct DumpDiffArgs {
    #[arg(long)]
    pub wa: PathBuf,
    #[arg(long)]
    pub ac: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Pairs(a) => commands::pairs(&a),
        Command::Classify(a) => commands::classify(&a),
        Command::Stats(a) => commands::stats(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Score(a) => commands::score(&a),
        Command::DumpTokens(a) => commands::dump_tokens(&a),
        Command::DumpDiff(a) => commands::dump_diff(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
