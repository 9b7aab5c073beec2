//! One column of data and everything derived from it. A `Session` value is
//! immutable; every change produces a new snapshot.

use std::collections::BTreeMap;
use std::sync::Arc;

use reshape_core::profile::{build_hierarchy, tokenize, ClusterSummary, ClusterTree, NodeId, ProfileConfig, RowId};
use reshape_core::program::{eval_tokenized, Program, RowStatus};
use reshape_core::synth::{repair, SynthesisSummary};
use reshape_core::{synthesize, Pattern, PatternHierarchy, SynthConfig, SynthesisResult};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::export::transform_rows;

/// A user's choice of alternate for one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairAction {
    pub source: Pattern,
    pub index: usize,
}

/// How the user names the target.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum TargetChoice {
    Cluster { cluster: NodeId },
    Pattern { pattern: String },
}

/// What gets persisted. Everything else is rebuilt from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub column: String,
    pub rows: Vec<String>,
    pub synth: SynthConfig,
    pub target: Option<Pattern>,
    pub history: Vec<RepairAction>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub column: String,
    pub rows: Arc<Vec<String>>,
    pub hierarchy: Arc<PatternHierarchy>,
    pub synth: SynthConfig,
    pub synthesis: Option<Arc<SynthesisResult>>,
    /// Repairs applied since the target was labeled, oldest first.
    pub history: Vec<RepairAction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub column: String,
    pub row_count: usize,
    pub empty_rows: usize,
    pub clusters: Vec<ClusterSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyView {
    pub id: String,
    pub row_count: usize,
    pub empty_rows: usize,
    pub layers: usize,
    pub roots: Vec<ClusterTree>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub transformed: usize,
    pub unmatched: usize,
    pub already_conforming: usize,
}

impl StatusCounts {
    fn add(&mut self, status: RowStatus) {
        match status {
            RowStatus::Transformed => self.transformed += 1,
            RowStatus::Unmatched => self.unmatched += 1,
            RowStatus::AlreadyConforming => self.already_conforming += 1,
        }
    }
}

/// Result of labeling a target: the program and a profile of its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelView {
    #[serde(flatten)]
    pub synthesis: SynthesisSummary,
    pub program: Program,
    pub status_counts: StatusCounts,
    /// Hierarchy over the transformed column.
    pub after: Vec<ClusterTree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramView {
    #[serde(flatten)]
    pub synthesis: SynthesisSummary,
    pub program: Program,
    pub history: Vec<RepairAction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreviewRow {
    pub row: RowId,
    pub before: String,
    pub after: String,
    pub status: RowStatus,
    /// Branch that transformed the row.
    pub branch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreviewView {
    pub rows: Vec<PreviewRow>,
    pub status_counts: StatusCounts,
}

impl Session {
    pub fn new(id: String, column: String, rows: Vec<String>, synth: SynthConfig, profile: &ProfileConfig) -> Self {
        let hierarchy = build_hierarchy(&rows, profile);
        Session {
            id,
            column,
            rows: Arc::new(rows),
            hierarchy: Arc::new(hierarchy),
            synth,
            synthesis: None,
            history: Vec::new(),
        }
    }

    /// Rebuild a session by replaying its target and repairs.
    pub fn replay(record: SessionRecord, profile: &ProfileConfig) -> Result<Self, ServiceError> {
        let mut s = Session::new(record.id, record.column, record.rows, record.synth, profile);
        if let Some(target) = record.target {
            s = s.with_target(target);
            for action in record.history {
                s = s.repaired(&action.source, action.index)?;
            }
        }
        Ok(s)
    }

    pub fn record(&self) -> SessionRecord {
        SessionRecord {
            id: self.id.clone(),
            column: self.column.clone(),
            rows: self.rows.as_ref().clone(),
            synth: self.synth,
            target: self.target().cloned(),
            history: self.history.clone(),
        }
    }

    pub fn target(&self) -> Option<&Pattern> {
        self.synthesis.as_ref().map(|r| &r.target)
    }

    pub fn program(&self) -> Program {
        self.synthesis.as_ref().map(|r| r.program.clone()).unwrap_or_default()
    }

    fn synthesis(&self) -> Result<&SynthesisResult, ServiceError> {
        self.synthesis.as_deref().ok_or(ServiceError::NoSynthesis)
    }

    pub fn summary(&self) -> SessionSummary {
        let h = &self.hierarchy;
        SessionSummary {
            id: self.id.clone(),
            column: self.column.clone(),
            row_count: h.row_count,
            empty_rows: h.empty_rows.len(),
            clusters: h.roots().iter().map(|&id| h.summary(id, &self.rows)).collect(),
        }
    }

    pub fn hierarchy_view(&self) -> HierarchyView {
        let h = &self.hierarchy;
        HierarchyView {
            id: self.id.clone(),
            row_count: h.row_count,
            empty_rows: h.empty_rows.len(),
            layers: h.layers.len(),
            roots: h.to_tree(&self.rows),
        }
    }

    pub fn resolve_target(&self, choice: &TargetChoice) -> Result<Pattern, ServiceError> {
        match choice {
            TargetChoice::Cluster { cluster } => self
                .hierarchy
                .get(*cluster)
                .map(|n| n.pattern.clone())
                .ok_or(ServiceError::ClusterNotFound(*cluster)),
            TargetChoice::Pattern { pattern } => Ok(Pattern::parse(pattern)?),
        }
    }

    /// New snapshot with a fresh synthesis for `target`. Repairs are dropped.
    pub fn with_target(&self, target: Pattern) -> Session {
        let result = synthesize(&self.hierarchy, &target, &self.synth);
        Session {
            synthesis: Some(Arc::new(result)),
            history: Vec::new(),
            ..self.clone()
        }
    }

    pub fn repaired(&self, source: &Pattern, index: usize) -> Result<Session, ServiceError> {
        let result = repair(self.synthesis()?, source, index)?;
        let mut history = self.history.clone();
        history.push(RepairAction {
            source: source.clone(),
            index,
        });
        Ok(Session {
            synthesis: Some(Arc::new(result)),
            history,
            ..self.clone()
        })
    }

    pub fn label_view(&self) -> Result<LabelView, ServiceError> {
        let result = self.synthesis()?;
        let outputs = transform_rows(&self.rows, &result.program);
        let mut status_counts = StatusCounts::default();
        for (_, status) in &outputs {
            status_counts.add(*status);
        }
        let values: Vec<&str> = outputs.iter().map(|(v, _)| v.as_str()).collect();
        let after = build_hierarchy(&values, &ProfileConfig::default()).to_tree(&values);
        Ok(LabelView {
            synthesis: result.summary(&self.column),
            program: result.program.clone(),
            status_counts,
            after,
        })
    }

    pub fn program_view(&self) -> Result<ProgramView, ServiceError> {
        let result = self.synthesis()?;
        Ok(ProgramView {
            synthesis: result.summary(&self.column),
            program: result.program.clone(),
            history: self.history.clone(),
        })
    }

    /// Up to `limit` rows per branch, in row order. Without a branch filter,
    /// up to `limit` unmatched and `limit` conforming rows follow.
    pub fn preview(&self, limit: usize, branch: Option<usize>) -> Result<PreviewView, ServiceError> {
        let result = self.synthesis()?;
        let program = &result.program;
        if let Some(b) = branch {
            if b >= program.branches.len() {
                return Err(ServiceError::BranchNotFound(b));
            }
        }
        // Key: branch index, or None for rows no branch transformed.
        let mut groups: BTreeMap<(Option<usize>, bool), Vec<PreviewRow>> = BTreeMap::new();
        let mut status_counts = StatusCounts::default();
        for (row, raw) in self.rows.iter().enumerate() {
            let ts = tokenize(raw);
            let (after, status) = eval_tokenized(program, &ts);
            status_counts.add(status);
            let taken = match status {
                RowStatus::Transformed => program.branch_for(&ts),
                _ => None,
            };
            if branch.is_some() && taken != branch {
                continue;
            }
            let group = groups
                .entry((taken, status == RowStatus::AlreadyConforming))
                .or_default();
            if group.len() < limit {
                group.push(PreviewRow {
                    row,
                    before: raw.clone(),
                    after,
                    status,
                    branch: taken,
                });
            }
        }
        // Branch groups first, in branch order.
        let mut ordered: Vec<_> = groups.into_iter().collect();
        ordered.sort_by_key(|((b, conforming), _)| (b.is_none(), *b, *conforming));
        Ok(PreviewView {
            rows: ordered.into_iter().flat_map(|(_, rows)| rows).collect(),
            status_counts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(rows: &[&str]) -> Session {
        Session::new(
            "s".into(),
            "column1".into(),
            rows.iter().map(|s| s.to_string()).collect(),
            SynthConfig::default(),
            &ProfileConfig::default(),
        )
    }

    #[test]
    fn replay_reproduces_repairs() {
        let s = session(&["25/12/2017", "01/02/2018", "12-25-2017"]);
        let s = s.with_target(Pattern::parse("<D>2'-'<D>2'-'<D>4").unwrap());
        let source = s.synthesis.as_ref().unwrap().per_source[0].source.clone();
        let s = s.repaired(&source, 1).unwrap();
        let replayed = Session::replay(s.record(), &ProfileConfig::default()).unwrap();
        assert_eq!(replayed.synthesis, s.synthesis);
        assert_eq!(replayed.history, s.history);
    }

    #[test]
    fn preview_groups() {
        let s = session(&["(734) 645-8397", "734-422-8073", "N/A", "(313) 555-0100"]);
        let s = s.with_target(Pattern::parse("<D>3'-'<D>3'-'<D>4").unwrap());
        let v = s.preview(20, None).unwrap();
        assert_eq!(
            v.status_counts,
            StatusCounts {
                transformed: 2,
                unmatched: 1,
                already_conforming: 1
            }
        );
        let statuses: Vec<RowStatus> = v.rows.iter().map(|r| r.status).collect();
        assert_eq!(
            statuses,
            vec![
                RowStatus::Transformed,
                RowStatus::Transformed,
                RowStatus::Unmatched,
                RowStatus::AlreadyConforming
            ]
        );
        assert_eq!(s.preview(1, Some(0)).unwrap().rows.len(), 1);
        assert!(matches!(s.preview(1, Some(9)), Err(ServiceError::BranchNotFound(9))));
    }

    #[test]
    fn no_target_yet() {
        let s = session(&["a"]);
        assert!(matches!(s.preview(5, None), Err(ServiceError::NoSynthesis)));
        assert!(matches!(s.repaired(&Pattern::default(), 0), Err(ServiceError::NoSynthesis)));
    }
}
