//! The plain-text region report shared by the command-line tools:
//!
//! ```text
//! REGION 0: 0,2
//! REGION 1: 1
//! UNSOLVED:
//! ```
//!
//! Ids are ascending and comma-separated. The `UNSOLVED` line is optional.

use thiserror::Error;

use crate::arena::{VertexId, VertexSet};
use crate::recursive::SolveResult;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RegionReport {
    pub win0: Vec<VertexId>,
    pub win1: Vec<VertexId>,
    pub unsolved: Option<Vec<VertexId>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("line {line}: expected `REGION 0:`, `REGION 1:` or `UNSOLVED:`")]
    UnknownLine { line: usize },
    #[error("line {line}: `{token}` is not a vertex id")]
    BadId { line: usize, token: String },
    #[error("line {line}: ids are not strictly ascending")]
    NotAscending { line: usize },
    #[error("line {line}: section appears twice")]
    Repeated { line: usize },
    #[error("missing `{0}` line")]
    Missing(&'static str),
}

fn ids(line: usize, rest: &str) -> Result<Vec<VertexId>, ReportError> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<VertexId> = Vec::new();
    for token in rest.split(',') {
        let token = token.trim();
        let id = token.parse().map_err(|_| ReportError::BadId {
            line,
            token: token.to_string(),
        })?;
        if out.last().is_some_and(|&last| last >= id) {
            return Err(ReportError::NotAscending { line });
        }
        out.push(id);
    }
    Ok(out)
}

/// Parses a report. Blank lines and lines starting with `#` are skipped, so
/// a report can carry extra commentary such as a portfolio winner line.
pub fn parse_regions(text: &str) -> Result<RegionReport, ReportError> {
    let mut sections: [Option<Vec<VertexId>>; 3] = [None, None, None];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (slot, rest) = if let Some(rest) = trimmed.strip_prefix("REGION 0:") {
            (0, rest)
        } else if let Some(rest) = trimmed.strip_prefix("REGION 1:") {
            (1, rest)
        } else if let Some(rest) = trimmed.strip_prefix("UNSOLVED:") {
            (2, rest)
        } else {
            return Err(ReportError::UnknownLine { line });
        };
        if sections[slot].is_some() {
            return Err(ReportError::Repeated { line });
        }
        sections[slot] = Some(ids(line, rest)?);
    }
    let [win0, win1, unsolved] = sections;
    Ok(RegionReport {
        win0: win0.ok_or(ReportError::Missing("REGION 0:"))?,
        win1: win1.ok_or(ReportError::Missing("REGION 1:"))?,
        unsolved,
    })
}

fn join(set: &[VertexId]) -> String {
    let body: Vec<String> = set.iter().map(ToString::to_string).collect();
    if body.is_empty() {
        String::new()
    } else {
        format!(" {}", body.join(","))
    }
}

impl RegionReport {
    pub fn from_result(result: &SolveResult, with_unsolved: bool) -> Self {
        Self {
            win0: result.win0.to_vec(),
            win1: result.win1.to_vec(),
            unsolved: with_unsolved.then(|| result.unsolved.to_vec()),
        }
    }

    /// Converts to sets over `0..universe`, or `None` if an id is out of range.
    pub fn to_result(&self, universe: usize) -> Option<SolveResult> {
        let set = |ids: &[VertexId]| {
            ids.iter()
                .all(|&v| v < universe)
                .then(|| VertexSet::from_iter(universe, ids.iter().copied()))
        };
        Some(SolveResult {
            win0: set(&self.win0)?,
            win1: set(&self.win1)?,
            unsolved: set(self.unsolved.as_deref().unwrap_or(&[]))?,
        })
    }
}

impl std::fmt::Display for RegionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "REGION 0:{}", join(&self.win0))?;
        writeln!(f, "REGION 1:{}", join(&self.win1))?;
        if let Some(unsolved) = &self.unsolved {
            writeln!(f, "UNSOLVED:{}", join(unsolved))?;
        }
        Ok(())
    }
}
