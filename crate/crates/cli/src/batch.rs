//! One analysis per input line, run concurrently and emitted in input order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::report::{analyze, AnalysisReport, Options};

/// A line of a batch file: `expr` or `expr ; w1,w2,...`. Blank lines and
/// lines starting with `#` are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchLine {
    pub line: usize,
    pub expr: String,
    pub weights: Option<String>,
}

pub fn parse_lines(text: &str) -> Vec<BatchLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                return None;
            }
            let (expr, weights) = match t.split_once(';') {
                Some((e, w)) => (
                    e.trim(),
                    Some(w.trim().to_string()).filter(|w| !w.is_empty()),
                ),
                None => (t, None),
            };
            Some(BatchLine {
                line: i + 1,
                expr: expr.to_string(),
                weights,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub line: usize,
    pub input: String,
    pub error: String,
    pub kind: &'static str,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub enum BatchItem {
    Report(Box<AnalysisReport>),
    Error(ErrorRecord),
}

/// Analyzes every line; `base` supplies the flags not given on the line.
pub fn run(lines: &[BatchLine], base: &Options) -> Vec<BatchItem> {
    lines
        .par_iter()
        .map(|l| {
            let mut opts = base.clone();
            if l.weights.is_some() {
                opts.weights = l.weights.clone();
            }
            match analyze(&l.expr, &opts) {
                Ok(r) => BatchItem::Report(Box::new(r)),
                Err(e) => BatchItem::Error(error_record(l, &e)),
            }
        })
        .collect()
}

fn error_record(l: &BatchLine, e: &CliError) -> ErrorRecord {
    ErrorRecord {
        line: l.line,
        input: l.expr.clone(),
        error: e.to_string(),
        kind: e.kind(),
        exit_code: e.exit_code(),
    }
}

/// Worker count from `SHL_WORKERS`, if set to a positive integer.
pub fn worker_limit() -> Option<usize> {
    std::env::var("SHL_WORKERS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}
