//! Reduction traces and their line-oriented text form
//! `<step#> <rule> <path>`, with `ε` for the root.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use super::{rewrite_at, RuleId};
use crate::syntax::Term;

/// Path of child indices from the root.
pub type Position = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub position: Position,
    /// Hash of the term after the step; α-equivalent terms hash alike.
    pub snapshot: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

pub(crate) fn snapshot(t: &Term) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

pub fn format_position(p: &[usize]) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn parse_position(s: &str) -> Option<Position> {
    if s == "ε" || s == "e" {
        return Some(Vec::new());
    }
    s.split('.').map(|i| i.parse().ok()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("line {line}: cannot read `{text}`")]
    Malformed { line: usize, text: String },
    #[error("step {step}: {rule} does not apply at {position}")]
    NoRedex { step: usize, rule: RuleId, position: String },
    #[error("step {step}: result differs from the recorded snapshot")]
    SnapshotMismatch { step: usize },
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn push(&mut self, rule: RuleId, position: Position, after: &Term) {
        self.steps.push(TraceStep {
            rule,
            position,
            snapshot: snapshot(after),
        });
    }

    pub fn rules(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.steps.iter().map(|s| s.rule)
    }

    /// Reads the text form back. Snapshots are not part of the text, so
    /// they are set to zero and [`replay`] skips checking them.
    pub fn parse(text: &str) -> Result<Trace, ReplayError> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || ReplayError::Malformed {
                line: i + 1,
                text: line.to_string(),
            };
            let mut parts = line.split_whitespace();
            let (Some(_), Some(rule), Some(pos), None) = (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            steps.push(TraceStep {
                rule: rule.parse().map_err(|_| bad())?,
                position: parse_position(pos).ok_or_else(bad)?,
                snapshot: 0,
            });
        }
        Ok(Trace { steps })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{} {} {}", i + 1, s.rule, format_position(&s.position))?;
        }
        Ok(())
    }
}

/// Re-applies the steps of `trace` to `start`.
pub fn replay(start: &Term, trace: &Trace) -> Result<Term, ReplayError> {
    let mut cur = start.clone();
    for (i, s) in trace.steps.iter().enumerate() {
        cur = rewrite_at(&cur, &s.position, s.rule).ok_or_else(|| ReplayError::NoRedex {
            step: i + 1,
            rule: s.rule,
            position: format_position(&s.position),
        })?;
        if s.snapshot != 0 && s.snapshot != snapshot(&cur) {
            return Err(ReplayError::SnapshotMismatch { step: i + 1 });
        }
    }
    Ok(cur)
}
