//! The transformation language: plans built from constant strings and token
//! extracts, programs that switch between plans by source pattern, and the
//! regex replace operations that explain them.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::pattern::{render_regex, Pattern};
use crate::profile::{tokenize, TokenizedString};

/// One step of a plan. Extract indices are one-based and inclusive, and
/// range over every source token, literals included.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StringExpr {
    #[serde(rename = "const")]
    ConstStr(String),
    #[serde(rename = "extract")]
    Extract(usize, usize),
}

impl StringExpr {
    pub fn extract(i: usize) -> Self {
        StringExpr::Extract(i, i)
    }

    pub fn constant(s: impl Into<String>) -> Self {
        StringExpr::ConstStr(s.into())
    }
}

impl fmt::Display for StringExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringExpr::ConstStr(s) => write!(f, "ConstStr({s:?})"),
            StringExpr::Extract(i, j) if i == j => write!(f, "Extract({i})"),
            StringExpr::Extract(i, j) => write!(f, "Extract({i},{j})"),
        }
    }
}

/// Concatenation of string expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Plan(pub Vec<StringExpr>);

impl Plan {
    pub fn new(exprs: Vec<StringExpr>) -> Self {
        Plan(exprs)
    }

    pub fn exprs(&self) -> &[StringExpr] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reject empty plans and extracts outside `1..=source_len`.
    pub fn check(&self, source_len: usize) -> Result<(), EvalError> {
        if self.0.is_empty() {
            return Err(EvalError::EmptyPlan);
        }
        for e in &self.0 {
            if let StringExpr::Extract(i, j) = *e {
                if i == 0 || i > j || j > source_len {
                    return Err(EvalError::IndexOutOfRange {
                        from: i,
                        to: j,
                        len: source_len,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Concat(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Apply `plan` to a string matching `source`.
pub fn eval_plan(plan: &Plan, ts: &TokenizedString, source: &Pattern) -> Result<String, EvalError> {
    plan.check(source.len())?;
    let spans = ts.match_pattern(source).ok_or(EvalError::NoMatch)?;
    let mut out = String::new();
    for e in plan.exprs() {
        match e {
            StringExpr::ConstStr(s) => out.push_str(s),
            StringExpr::Extract(i, j) => out.push_str(&ts.raw[spans[i - 1].start..spans[j - 1].end]),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    #[serde(rename = "match")]
    pub pattern: Pattern,
    pub plan: Plan,
}

/// Ordered branches; the first branch whose pattern matches a string wins.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Program {
    pub branches: Vec<Branch>,
    /// Strings already matching the target are reported as conforming.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Pattern>,
}

impl Program {
    pub fn new(branches: Vec<Branch>) -> Self {
        Program {
            branches,
            target: None,
        }
    }

    pub fn with_target(mut self, target: Pattern) -> Self {
        self.target = Some(target);
        self
    }

    pub fn check(&self) -> Result<(), EvalError> {
        self.branches
            .iter()
            .try_for_each(|b| b.plan.check(b.pattern.len()))
    }

    /// Index of the branch that would transform `ts`, if any.
    pub fn branch_for(&self, ts: &TokenizedString) -> Option<usize> {
        self.branches.iter().position(|b| ts.matches(&b.pattern))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowStatus {
    Transformed,
    Unmatched,
    AlreadyConforming,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Transformed => "Transformed",
            RowStatus::Unmatched => "Unmatched",
            RowStatus::AlreadyConforming => "AlreadyConforming",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Run `prog` on one string. Never fails: strings no branch handles come
/// back unchanged with [`RowStatus::Unmatched`].
pub fn eval_program(prog: &Program, s: &str) -> (String, RowStatus) {
    let ts = tokenize(s);
    eval_tokenized(prog, &ts)
}

pub fn eval_tokenized(prog: &Program, ts: &TokenizedString) -> (String, RowStatus) {
    if let Some(target) = &prog.target {
        if ts.matches(target) {
            return (ts.raw.clone(), RowStatus::AlreadyConforming);
        }
    }
    for b in &prog.branches {
        if ts.matches(&b.pattern) {
            if let Ok(out) = eval_plan(&b.plan, ts, &b.pattern) {
                return (out, RowStatus::Transformed);
            }
        }
    }
    (ts.raw.clone(), RowStatus::Unmatched)
}

/// A regex replace step as shown to people reviewing a program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplaceOperation {
    pub match_regex: String,
    pub replacement: String,
    pub column: String,
}

impl fmt::Display for ReplaceOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Replace '{}' in {} with '{}'",
            self.match_regex, self.column, self.replacement
        )
    }
}

/// Default column name used in rendered scripts.
pub const DEFAULT_COLUMN: &str = "column1";

/// One replace operation per branch, in branch order.
pub fn explain(prog: &Program, column: &str) -> Vec<ReplaceOperation> {
    prog.branches
        .iter()
        .map(|b| explain_branch(&b.pattern, &b.plan, column))
        .collect()
}

/// Capture groups (zero-based inclusive token spans) used to explain `plan`.
///
/// Literal source tokens are written out in the replacement, so groups only
/// cover runs of adjacent base tokens inside one extract. Runs that overlap
/// partially are cut at each other's boundaries; the resulting groups are
/// disjoint.
pub fn capture_spans(source: &Pattern, plan: &Plan) -> Vec<RangeInclusive<usize>> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for e in plan.exprs() {
        if let StringExpr::Extract(i, j) = *e {
            let mut t = i - 1;
            while t < j {
                if source.tokens[t].is_base() {
                    let start = t;
                    while t < j && source.tokens[t].is_base() {
                        t += 1;
                    }
                    runs.push((start, t));
                } else {
                    t += 1;
                }
            }
        }
    }
    let cuts: BTreeSet<usize> = runs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut pieces: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &runs {
        let mut start = a;
        for &c in cuts.range(a + 1..b) {
            pieces.insert((start, c));
            start = c;
        }
        pieces.insert((start, b));
    }
    pieces.into_iter().map(|(a, b)| a..=b - 1).collect()
}

enum Piece {
    Text(String),
    Group(usize),
}

pub fn explain_branch(source: &Pattern, plan: &Plan, column: &str) -> ReplaceOperation {
    let spans = capture_spans(source, plan);
    let mut pieces: Vec<Piece> = Vec::new();
    for e in plan.exprs() {
        match e {
            StringExpr::ConstStr(s) => pieces.push(Piece::Text(s.clone())),
            StringExpr::Extract(i, j) => {
                let mut t = i - 1;
                while t < *j {
                    match source.tokens[t].class.literal_text() {
                        Some(s) => {
                            pieces.push(Piece::Text(s.to_string()));
                            t += 1;
                        }
                        None => {
                            let g = spans
                                .iter()
                                .position(|s| *s.start() == t)
                                .expect("every base token in an extract starts or continues a group");
                            pieces.push(Piece::Group(g + 1));
                            t = spans[g].end() + 1;
                        }
                    }
                }
            }
        }
    }

    let mut replacement = String::new();
    for (k, piece) in pieces.iter().enumerate() {
        match piece {
            Piece::Text(s) => replacement.push_str(&s.replace('$', "$$")),
            Piece::Group(g) => {
                let next_is_word = match pieces.get(k + 1) {
                    Some(Piece::Text(s)) => s
                        .chars()
                        .next()
                        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_'),
                    _ => false,
                };
                if next_is_word {
                    replacement.push_str(&format!("${{{g}}}"));
                } else {
                    replacement.push_str(&format!("${g}"));
                }
            }
        }
    }

    ReplaceOperation {
        match_regex: render_regex(source, &spans),
        replacement,
        column: column.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use StringExpr::*;

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    fn c(s: &str) -> StringExpr {
        ConstStr(s.to_string())
    }

    fn x(i: usize) -> StringExpr {
        Extract(i, i)
    }

    #[test]
    fn eval_plan_examples() {
        let source = p("<U>+'-'<D>+");
        let plan = Plan(vec![c("["), Extract(1, 3), c("]")]);
        assert_eq!(eval_plan(&plan, &tokenize("CPT-00350"), &source).unwrap(), "[CPT-00350]");

        let source = p("<D>2'/'<D>2");
        let plan = Plan(vec![x(3), c("/"), x(1)]);
        assert_eq!(eval_plan(&plan, &tokenize("12/25"), &source).unwrap(), "25/12");

        let identity = Plan(vec![Extract(1, 3)]);
        assert_eq!(eval_plan(&identity, &tokenize("12/25"), &source).unwrap(), "12/25");
    }

    #[test]
    fn eval_plan_errors() {
        let source = p("<D>2'/'<D>2");
        let ts = tokenize("12/25");
        assert_eq!(
            eval_plan(&Plan(vec![Extract(2, 4)]), &ts, &source),
            Err(EvalError::IndexOutOfRange { from: 2, to: 4, len: 3 })
        );
        assert_eq!(
            eval_plan(&Plan(vec![x(1)]), &tokenize("1/2"), &source),
            Err(EvalError::NoMatch)
        );
        assert_eq!(eval_plan(&Plan(vec![]), &ts, &source), Err(EvalError::EmptyPlan));
    }

    fn medical_program() -> Program {
        Program::new(vec![
            Branch {
                pattern: p("'['<U>+'-'<D>+"),
                plan: Plan(vec![Extract(1, 4), c("]")]),
            },
            Branch {
                pattern: p("<U>+'-'<D>+"),
                plan: Plan(vec![c("["), Extract(1, 3), c("]")]),
            },
            Branch {
                pattern: p("<U>+<D>+"),
                plan: Plan(vec![c("["), x(1), c("-"), x(2), c("]")]),
            },
        ])
    }

    #[test]
    fn eval_program_first_match_wins() {
        let prog = medical_program();
        assert_eq!(eval_program(&prog, "CPT115"), ("[CPT-115]".into(), RowStatus::Transformed));
        assert_eq!(eval_program(&prog, "[CPT-00340"), ("[CPT-00340]".into(), RowStatus::Transformed));
        assert_eq!(eval_program(&prog, "N/A"), ("N/A".into(), RowStatus::Unmatched));
        assert_eq!(eval_program(&prog, ""), ("".into(), RowStatus::Unmatched));
        let prog = prog.with_target(p("'['<U>+'-'<D>+']'"));
        assert_eq!(
            eval_program(&prog, "[CPT-11536]"),
            ("[CPT-11536]".into(), RowStatus::AlreadyConforming)
        );
    }

    #[test]
    fn program_json_shape() {
        let prog = Program::new(vec![Branch {
            pattern: p("<D>2'/'<D>2"),
            plan: Plan(vec![x(3), c("/"), Extract(1, 1)]),
        }]);
        let json = serde_json::to_string(&prog).unwrap();
        assert_eq!(
            json,
            r#"{"branches":[{"match":"<D>2'/'<D>2","plan":[{"extract":[3,3]},{"const":"/"},{"extract":[1,1]}]}]}"#
        );
        let back: Program = serde_json::from_str(&json).unwrap();
        assert_eq!(back, prog);
    }

    #[test]
    fn explain_phone_branches() {
        let source = p("<D>3'-'<D>3'-'<D>4");
        let plan = Plan(vec![c("("), x(1), c(") "), x(3), c("-"), x(5)]);
        assert_eq!(
            explain_branch(&source, &plan, DEFAULT_COLUMN).to_string(),
            r"Replace '/^({digit}{3})\-({digit}{3})\-({digit}{4})$/' in column1 with '($1) $2-$3'"
        );

        let source = p("'('<D>3')'<D>3'-'<D>4");
        let plan = Plan(vec![Extract(1, 3), c(" "), Extract(4, 6)]);
        assert_eq!(
            explain_branch(&source, &plan, DEFAULT_COLUMN).to_string(),
            r"Replace '/^\(({digit}{3})\)({digit}{3})\-({digit}{4})$/' in column1 with '($1) $2-$3'"
        );
    }

    #[test]
    fn explain_merges_adjacent_base_tokens() {
        let source = p("'['<U>+'-'<D>+");
        let plan = Plan(vec![Extract(1, 4), c("]")]);
        let op = explain_branch(&source, &plan, "code");
        assert_eq!(op.match_regex, r"/^\[({upper}+)\-({digit}+)$/");
        assert_eq!(op.replacement, "[$1-$2]");

        let source = p("<U><L>+' '<D>+");
        let op = explain_branch(&source, &Plan(vec![Extract(1, 2)]), "c");
        assert_eq!(op.match_regex, r"/^({upper}{1}{lower}+)\ {digit}+$/");
        assert_eq!(op.replacement, "$1");
    }

    #[test]
    fn explain_splits_overlapping_runs() {
        let source = p("<U><L>+<D>+");
        let plan = Plan(vec![Extract(1, 2), c("-"), Extract(2, 3)]);
        let op = explain_branch(&source, &plan, "c");
        assert_eq!(op.match_regex, "/^({upper}{1})({lower}+)({digit}+)$/");
        assert_eq!(op.replacement, "$1$2-$2$3");
    }

    #[test]
    fn explain_escapes_replacement_text() {
        let source = p("<D>+");
        let plan = Plan(vec![x(1), c("abc$")]);
        let op = explain_branch(&source, &plan, "c");
        assert_eq!(op.replacement, "${1}abc$$");
    }
}
