//! Rule-based classification of the fixes between wrong and accepted
//! submissions, plus the corpus statistics and novice/expert contrast built
//! on top of it.
//!
//! The pipeline runs in stages:
//! [`ingest`] pairs submissions, [`lexer`] normalizes each side, [`diff`]
//! labels changed lines and tokens, [`rules`] classifies the changes,
//! [`metrics`] summarizes the corpus and [`analysis`] tests per-problem
//! differences between novices and experts.

pub mod align;
pub mod analysis;
pub mod diff;
pub mod ingest;
pub mod lexer;
pub mod metrics;
pub mod rules;
pub mod synth;
