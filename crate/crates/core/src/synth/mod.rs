//! Program synthesis: choose source patterns from a hierarchy, align each
//! one with the target, and keep the best plans per source.

pub mod align;
pub mod rank;
pub mod validate;

use serde::{Deserialize, Serialize};

use crate::error::RepairError;
use crate::pattern::Pattern;
use crate::profile::{NodeId, PatternHierarchy};
use crate::program::{explain, Branch, Plan, Program, DEFAULT_COLUMN};

pub use align::{find_token_alignment, syntactically_similar, AlignmentDag};
pub use rank::{
    description_length, description_length_with_n, enumerate_plans, equivalence_key, is_lossy, plans_equivalent,
    RankedPlan, RankedPlans,
};
pub use validate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Alternates kept per source besides the default.
    pub k: usize,
    /// Maximum number of plans enumerated per source.
    pub path_cap: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            k: 5,
            path_cap: 10_000,
        }
    }
}

/// A synthesized program together with the ranked plans behind each branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub target: Pattern,
    pub program: Program,
    /// One entry per branch, in branch order.
    pub per_source: Vec<RankedPlans>,
    /// Hierarchy node of each branch's source.
    pub source_nodes: Vec<NodeId>,
    /// Leaves that no branch transforms and that do not already conform.
    pub unmatched: Vec<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub source: Pattern,
    pub default: Plan,
    pub default_index: usize,
    pub alternates: Vec<RankedPlan>,
    pub overflow: bool,
}

/// Wire form of a [`SynthesisResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisSummary {
    pub target: Pattern,
    pub script: Vec<String>,
    pub branches: Vec<BranchSummary>,
    pub unmatched: Vec<Pattern>,
}

impl SynthesisResult {
    pub fn script(&self, column: &str) -> Vec<String> {
        explain(&self.program, column).iter().map(ToString::to_string).collect()
    }

    pub fn summary(&self, column: &str) -> SynthesisSummary {
        SynthesisSummary {
            target: self.target.clone(),
            script: self.script(column),
            branches: self
                .per_source
                .iter()
                .zip(&self.program.branches)
                .map(|(ranked, branch)| BranchSummary {
                    source: ranked.source.clone(),
                    default: branch.plan.clone(),
                    default_index: ranked.default_index,
                    alternates: ranked.plans.clone(),
                    overflow: ranked.overflow,
                })
                .collect(),
            unmatched: self.unmatched.clone(),
        }
    }

    /// Script lines for the default column name.
    pub fn default_script(&self) -> Vec<String> {
        self.script(DEFAULT_COLUMN)
    }
}

struct Frontier {
    node: NodeId,
    layer: usize,
    ranked: RankedPlans,
}

/// Walk the hierarchy from the roots. Nodes the target already covers are
/// skipped. A node that passes [`validate`] and has at least one plan
/// becomes a branch and its subtree is not visited; any other node hands
/// over to its children, and a leaf with nothing to offer is unmatched.
/// Branches are ordered deepest first, then by more tokens, more rows and
/// rendered pattern.
pub fn synthesize(h: &PatternHierarchy, target: &Pattern, config: &SynthConfig) -> SynthesisResult {
    let mut frontier: Vec<Frontier> = Vec::new();
    let mut unmatched: Vec<NodeId> = Vec::new();
    let mut stack: Vec<NodeId> = h.roots().iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        let node = h.node(id);
        if target.covers(&node.pattern) {
            continue;
        }
        if validate(&node.pattern, target) {
            let dag = find_token_alignment(&node.pattern, target);
            let ranked = enumerate_plans(&dag, &node.pattern, target, config.k, config.path_cap);
            if !ranked.plans.is_empty() {
                frontier.push(Frontier {
                    node: id,
                    layer: node.layer,
                    ranked,
                });
                continue;
            }
        }
        if node.children.is_empty() {
            unmatched.push(id);
        } else {
            stack.extend(node.children.iter().rev());
        }
    }

    frontier.sort_by(|a, b| {
        let (na, nb) = (h.node(a.node), h.node(b.node));
        a.layer
            .cmp(&b.layer)
            .then(nb.pattern.len().cmp(&na.pattern.len()))
            .then(nb.count().cmp(&na.count()))
            .then_with(|| na.pattern.render().cmp(&nb.pattern.render()))
    });
    unmatched.sort_by(|&a, &b| {
        let (na, nb) = (h.node(a), h.node(b));
        nb.count()
            .cmp(&na.count())
            .then_with(|| na.pattern.render().cmp(&nb.pattern.render()))
    });

    let branches = frontier
        .iter()
        .map(|f| Branch {
            pattern: f.ranked.source.clone(),
            plan: f.ranked.plans[0].plan.clone(),
        })
        .collect();
    SynthesisResult {
        target: target.clone(),
        program: Program::new(branches).with_target(target.clone()),
        source_nodes: frontier.iter().map(|f| f.node).collect(),
        per_source: frontier.into_iter().map(|f| f.ranked).collect(),
        unmatched: unmatched.into_iter().map(|id| h.node(id).pattern.clone()).collect(),
    }
}

/// Switch the branch for `source` to its alternate `chosen`.
pub fn repair(result: &SynthesisResult, source: &Pattern, chosen: usize) -> Result<SynthesisResult, RepairError> {
    let b = result
        .per_source
        .iter()
        .position(|r| &r.source == source)
        .ok_or_else(|| RepairError::UnknownSource(source.render()))?;
    let available = result.per_source[b].plans.len();
    if chosen >= available {
        return Err(RepairError::IndexOutOfRange {
            index: chosen,
            available,
        });
    }
    let mut out = result.clone();
    out.per_source[b].default_index = chosen;
    out.program.branches[b].plan = out.per_source[b].plans[chosen].plan.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{eval_program, RowStatus, StringExpr};

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn only_leaf_is_target() {
        let h = PatternHierarchy::build(&["123", "456"]);
        let r = synthesize(&h, &p("<D>3"), &SynthConfig::default());
        assert!(r.program.branches.is_empty());
        assert!(r.unmatched.is_empty());
    }

    #[test]
    fn medical_codes() {
        let rows = ["CPT-00350", "[CPT-00340", "[CPT-11536]", "CPT115"];
        let h = PatternHierarchy::build(&rows);
        let target = h.node(h.find(&p("'['<U>+'-'<D>+']'")).unwrap()).pattern.clone();
        let r = synthesize(&h, &target, &SynthConfig::default());
        let sources: Vec<String> = r.program.branches.iter().map(|b| b.pattern.render()).collect();
        assert_eq!(sources, vec!["'['<U>+'-'<D>+", "<U>+'-'<D>+", "<U>+<D>+"]);
        let outputs: Vec<String> = rows.iter().map(|s| eval_program(&r.program, s).0).collect();
        assert_eq!(outputs, vec!["[CPT-00350]", "[CPT-00340]", "[CPT-11536]", "[CPT-115]"]);
        assert_eq!(eval_program(&r.program, "[CPT-11536]").1, RowStatus::AlreadyConforming);
    }

    #[test]
    fn date_swap_repair() {
        let rows = ["25/12/2017", "01/02/2018", "12-25-2017"];
        let h = PatternHierarchy::build(&rows);
        let target = p("<D>2'-'<D>2'-'<D>4");
        let r = synthesize(&h, &target, &SynthConfig::default());
        assert_eq!(r.program.branches.len(), 1);
        assert_eq!(eval_program(&r.program, "25/12/2017").0, "25-12-2017");
        let source = r.per_source[0].source.clone();
        let swapped = r.per_source[0]
            .plans
            .iter()
            .position(|rp| {
                matches!(rp.plan.exprs().first(), Some(StringExpr::Extract(3, 3)))
            })
            .expect("a field-swapping alternate is ranked");
        let repaired = repair(&r, &source, swapped).unwrap();
        assert_eq!(eval_program(&repaired.program, "25/12/2017").0, "12-25-2017");
        let reverted = repair(&repaired, &source, 0).unwrap();
        assert_eq!(reverted, r);
    }

    #[test]
    fn repair_errors() {
        let h = PatternHierarchy::build(&["12/25", "12-25"]);
        let r = synthesize(&h, &p("<D>2'-'<D>2"), &SynthConfig::default());
        assert!(matches!(repair(&r, &p("<L>"), 0), Err(RepairError::UnknownSource(_))));
        let source = r.per_source[0].source.clone();
        let n = r.per_source[0].plans.len();
        assert_eq!(
            repair(&r, &source, n),
            Err(RepairError::IndexOutOfRange { index: n, available: n })
        );
    }

    #[test]
    fn unmatched_leaves_are_reported() {
        let h = PatternHierarchy::build(&["(734) 645-8397", "N/A"]);
        let r = synthesize(&h, &p("'('<D>3')'' '<D>3'-'<D>4"), &SynthConfig::default());
        assert!(r.program.branches.is_empty());
        assert_eq!(r.unmatched, vec![p("<U>'/'<U>")]);
    }
}
