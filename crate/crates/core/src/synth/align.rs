//! Token alignment: every way each target token can be produced from the
//! source, as edges of a DAG over target positions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::pattern::{partition, Pattern, Token, Unit};
use crate::program::StringExpr;

/// Nodes are target positions `0..=m`. An edge `(a, b)` carries expressions
/// producing exactly target tokens `a+1..=b`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AlignmentDag {
    pub node_count: usize,
    pub edges: BTreeMap<(usize, usize), BTreeSet<StringExpr>>,
}

impl AlignmentDag {
    pub fn source_node(&self) -> usize {
        0
    }

    pub fn target_node(&self) -> usize {
        self.node_count.saturating_sub(1)
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&BTreeSet<StringExpr>> {
        self.edges.get(&(a, b))
    }

    fn add(&mut self, a: usize, b: usize, e: StringExpr) -> bool {
        self.edges.entry((a, b)).or_default().insert(e)
    }

    /// Edges leaving node `a`, as `(b, expressions)`.
    pub fn outgoing(&self, a: usize) -> impl Iterator<Item = (usize, &BTreeSet<StringExpr>)> {
        self.edges
            .range((a, 0)..(a + 1, 0))
            .map(|(&(_, b), set)| (b, set))
    }

    /// Number of distinct source-to-target paths, saturating at `u64::MAX`.
    pub fn path_count(&self) -> u64 {
        self.paths_from().first().copied().unwrap_or(0)
    }

    /// For every node, the number of plans from it to the target node.
    pub(crate) fn paths_from(&self) -> Vec<u64> {
        let m = self.target_node();
        let mut count = vec![0u64; self.node_count];
        if self.node_count == 0 {
            return count;
        }
        count[m] = 1;
        for a in (0..m).rev() {
            let mut total: u64 = 0;
            for (b, set) in self.outgoing(a) {
                total = total.saturating_add((set.len() as u64).saturating_mul(count[b]));
            }
            count[a] = total;
        }
        count
    }
}

/// Whether source token `s` can stand in for target token `t` on its own:
/// its class sits below `t`'s class and `t`'s quantifier admits its length.
/// A `+` source never stands in for a fixed-length target token.
pub fn syntactically_similar(t: &Token, s: &Token) -> bool {
    partition(std::slice::from_ref(t), &[Unit::of_token(s)]).is_some()
}

/// Build the alignment DAG. Unit edges come from similar source tokens and,
/// for literal target tokens, from the constant itself. Then, scanning
/// interior nodes left to right, an extract ending at source token `q` into
/// node `i` and one starting at `q + 1` out of `i` combine into one extract
/// spanning both edges.
pub fn find_token_alignment(source: &Pattern, target: &Pattern) -> AlignmentDag {
    let m = target.len();
    let mut dag = AlignmentDag {
        node_count: m + 1,
        edges: BTreeMap::new(),
    };
    for (i, t) in target.tokens.iter().enumerate() {
        for (j, s) in source.tokens.iter().enumerate() {
            if syntactically_similar(t, s) {
                dag.add(i, i + 1, StringExpr::extract(j + 1));
            }
        }
        if let Some(text) = t.class.literal_text() {
            dag.add(i, i + 1, StringExpr::constant(text));
        }
    }

    for i in 1..m {
        let outgoing: Vec<(usize, usize)> = extracts(dag.edge(i, i + 1));
        if outgoing.is_empty() {
            continue;
        }
        let incoming: Vec<(usize, usize, usize)> = (0..i)
            .flat_map(|a| extracts(dag.edge(a, i)).into_iter().map(move |(p, q)| (a, p, q)))
            .collect();
        for &(a, p, q) in &incoming {
            for &(q2, r) in &outgoing {
                if q + 1 == q2 {
                    dag.add(a, i + 1, StringExpr::Extract(p, r));
                }
            }
        }
    }
    dag
}

fn extracts(set: Option<&BTreeSet<StringExpr>>) -> Vec<(usize, usize)> {
    set.into_iter()
        .flatten()
        .filter_map(|e| match *e {
            StringExpr::Extract(p, q) => Some((p, q)),
            StringExpr::ConstStr(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use StringExpr::*;

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    fn set(items: &[StringExpr]) -> BTreeSet<StringExpr> {
        items.iter().cloned().collect()
    }

    #[test]
    fn dotted_phone_to_parenthesized() {
        let dag = find_token_alignment(&p("<D>3'.'<D>3'.'<D>4"), &p("'('<D>3')'' '<D>3'-'<D>4"));
        assert_eq!(dag.node_count, 8);
        let expected: BTreeMap<(usize, usize), BTreeSet<StringExpr>> = [
            ((0, 1), set(&[ConstStr("(".into())])),
            ((1, 2), set(&[Extract(1, 1), Extract(3, 3)])),
            ((2, 3), set(&[ConstStr(")".into())])),
            ((3, 4), set(&[ConstStr(" ".into())])),
            ((4, 5), set(&[Extract(1, 1), Extract(3, 3)])),
            ((5, 6), set(&[ConstStr("-".into())])),
            ((6, 7), set(&[Extract(5, 5)])),
        ]
        .into_iter()
        .collect();
        assert_eq!(dag.edges, expected);
        assert_eq!(dag.path_count(), 4);
    }

    #[test]
    fn single_token() {
        let dag = find_token_alignment(&p("<D>3"), &p("<D>3"));
        assert_eq!(dag.edges.len(), 1);
        assert_eq!(dag.edge(0, 1), Some(&set(&[Extract(1, 1)])));
    }

    #[test]
    fn sequential_extracts_combine() {
        let dag = find_token_alignment(&p("<U><D>+"), &p("<U><D>+"));
        assert_eq!(dag.edge(0, 1), Some(&set(&[Extract(1, 1)])));
        assert_eq!(dag.edge(1, 2), Some(&set(&[Extract(2, 2)])));
        assert_eq!(dag.edge(0, 2), Some(&set(&[Extract(1, 2)])));
    }

    #[test]
    fn combination_chains_through_new_edges() {
        let dag = find_token_alignment(&p("<D>2'/'<D>2'/'<D>4"), &p("<D>2'/'<D>2"));
        assert!(dag.edge(0, 3).unwrap().contains(&Extract(1, 3)));
        assert!(dag.edge(0, 2).unwrap().contains(&Extract(1, 2)));
        assert!(dag.edge(1, 3).unwrap().contains(&Extract(2, 3)));
        assert!(dag.edge(0, 2).unwrap().contains(&Extract(3, 4)));
        assert!(!dag.edge(1, 3).unwrap().contains(&Extract(4, 5)));
    }

    #[test]
    fn similarity_direction() {
        let t = |s: &str| p(s).tokens.remove(0);
        assert!(syntactically_similar(&t("<D>+"), &t("<D>3")));
        assert!(!syntactically_similar(&t("<D>3"), &t("<D>+")));
        assert!(syntactically_similar(&t("<A>+"), &t("<L>3")));
        assert!(syntactically_similar(&t("<AN>+"), &t("'-'")));
        assert!(syntactically_similar(&t("<U>3"), &t("'CPT'")));
        assert!(!syntactically_similar(&t("'-'"), &t("'/'")));
        assert!(!syntactically_similar(&t("<D>3"), &t("<D>4")));
    }
}
