//! Pattern profiling: tokenization, initial clustering, constant discovery
//! and agglomerative refinement into a pattern cluster hierarchy.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::pattern::{generalize, render_regex, Pattern, Quantifier, Strategy, Token, TokenClass, Unit};

/// Index of a row in the ingested column.
pub type RowId = usize;
/// Index of a node in a [`PatternHierarchy`].
pub type NodeId = usize;

/// A string split into leaf tokens, each with the byte span it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedString {
    pub raw: String,
    pub tokens: Vec<(Token, Range<usize>)>,
}

impl TokenizedString {
    pub fn pattern(&self) -> Pattern {
        Pattern::new(self.tokens.iter().map(|(t, _)| t.clone()).collect())
    }

    /// The empty string tokenizes to nothing; it never joins a cluster.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn text(&self, span: Range<usize>) -> &str {
        &self.raw[span]
    }

    /// Match this string against `pattern`, returning the byte span realized
    /// by every pattern token. Literal tokens match by text, so constants
    /// such as `'Dr.'` match the leaf tokens `<U><L>'.'` of "Dr.".
    pub fn match_pattern(&self, pattern: &Pattern) -> Option<Vec<Range<usize>>> {
        let units: Vec<Unit<'_>> = self
            .tokens
            .iter()
            .map(|(t, span)| Unit {
                token: t,
                text: Some(&self.raw[span.clone()]),
            })
            .collect();
        let groups = crate::pattern::partition(&pattern.tokens, &units)?;
        Some(
            groups
                .into_iter()
                .map(|g| self.tokens[g.start].1.start..self.tokens[g.end - 1].1.end)
                .collect(),
        )
    }

    pub fn matches(&self, pattern: &Pattern) -> bool {
        self.match_pattern(pattern).is_some()
    }
}

fn leaf_class(c: char) -> Option<TokenClass> {
    if c.is_ascii_digit() {
        Some(TokenClass::Digit)
    } else if c.is_ascii_lowercase() {
        Some(TokenClass::Lower)
    } else if c.is_ascii_uppercase() {
        Some(TokenClass::Upper)
    } else {
        None
    }
}

/// Split `s` into maximal runs of digits, lowercase and uppercase letters;
/// every other character is a literal token of its own.
pub fn tokenize(s: &str) -> TokenizedString {
    let mut tokens: Vec<(Token, Range<usize>)> = Vec::new();
    for (i, c) in s.char_indices() {
        let end = i + c.len_utf8();
        match leaf_class(c) {
            Some(class) => {
                if let Some((last, span)) = tokens.last_mut() {
                    if last.class == class {
                        if let Quantifier::Count(n) = &mut last.quantifier {
                            *n += 1;
                        }
                        span.end = end;
                        continue;
                    }
                }
                tokens.push((Token::base(class, 1), i..end));
            }
            None => tokens.push((Token::literal(c.to_string()), i..end)),
        }
    }
    TokenizedString {
        raw: s.to_string(),
        tokens,
    }
}

/// A set of rows sharing one pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCluster {
    pub pattern: Pattern,
    pub members: Vec<RowId>,
}

impl PatternCluster {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

fn sort_clusters(clusters: &mut [PatternCluster]) {
    clusters.sort_by(|a, b| {
        b.count()
            .cmp(&a.count())
            .then_with(|| a.pattern.render().cmp(&b.pattern.render()))
    });
}

/// One cluster per distinct leaf pattern, largest first. Empty rows are left
/// out; see [`PatternHierarchy::empty_rows`].
pub fn cluster_initial<S: AsRef<str>>(rows: &[S]) -> Vec<PatternCluster> {
    let mut by_pattern: HashMap<Pattern, Vec<RowId>> = HashMap::new();
    for (id, row) in rows.iter().enumerate() {
        let ts = tokenize(row.as_ref());
        if ts.is_empty() {
            continue;
        }
        by_pattern.entry(ts.pattern()).or_default().push(id);
    }
    let mut clusters: Vec<PatternCluster> = by_pattern
        .into_iter()
        .map(|(pattern, members)| PatternCluster { pattern, members })
        .collect();
    sort_clusters(&mut clusters);
    clusters
}

/// Settings for constant discovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantConfig {
    /// Fraction of members that must share a token's value.
    pub threshold: f64,
    /// Clusters smaller than this are left alone.
    pub min_cluster_size: usize,
}

impl Default for ConstantConfig {
    fn default() -> Self {
        ConstantConfig {
            threshold: 1.0,
            min_cluster_size: 2,
        }
    }
}

/// Replace base tokens whose value is the same across the cluster by literal
/// constants.
///
/// Adjacent constants are joined into one literal, as are symbols sitting
/// between two constants and trailing symbols that end a word (followed by
/// whitespace or the end of the string), so "Dr. X" yields `'Dr.'' '<U>`.
/// With a threshold below 1, members that disagree with a constant stay
/// behind in a second cluster that keeps the original pattern.
pub fn discover_constants<S: AsRef<str>>(
    cluster: &PatternCluster,
    rows: &[S],
    config: &ConstantConfig,
) -> Vec<PatternCluster> {
    let n = cluster.count();
    if n < config.min_cluster_size.max(1) {
        return vec![cluster.clone()];
    }
    let tokenized: Vec<TokenizedString> = cluster
        .members
        .iter()
        .map(|&id| tokenize(rows[id].as_ref()))
        .collect();

    let mut constants: Vec<Option<String>> = vec![None; cluster.pattern.len()];
    for (k, token) in cluster.pattern.tokens.iter().enumerate() {
        if !token.is_base() {
            continue;
        }
        let mut freq: HashMap<&str, usize> = HashMap::new();
        for ts in &tokenized {
            let value = ts.text(ts.tokens[k].1.clone());
            *freq.entry(value).or_default() += 1;
        }
        let (value, count) = freq
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .expect("cluster is non-empty");
        if count as f64 >= config.threshold * n as f64 {
            constants[k] = Some(value.to_string());
        }
    }
    if constants.iter().all(Option::is_none) {
        return vec![cluster.clone()];
    }

    let (agree, disagree): (Vec<_>, Vec<_>) =
        cluster.members.iter().zip(&tokenized).partition(|(_, ts)| {
            constants.iter().enumerate().all(|(k, c)| match c {
                Some(v) => ts.text(ts.tokens[k].1.clone()) == v,
                None => true,
            })
        });

    let mut out = vec![PatternCluster {
        pattern: rewrite_with_constants(&cluster.pattern, &constants),
        members: agree.into_iter().map(|(id, _)| *id).collect(),
    }];
    if !disagree.is_empty() {
        out.push(PatternCluster {
            pattern: cluster.pattern.clone(),
            members: disagree.into_iter().map(|(id, _)| *id).collect(),
        });
    }
    out
}

fn is_space_literal(t: &Token) -> bool {
    t.class
        .literal_text()
        .is_some_and(|s| s.chars().all(char::is_whitespace))
}

fn rewrite_with_constants(pattern: &Pattern, constants: &[Option<String>]) -> Pattern {
    // (token, is_discovered_constant)
    let items: Vec<(Token, bool)> = pattern
        .tokens
        .iter()
        .zip(constants)
        .map(|(t, c)| match c {
            Some(v) => (Token::literal(v.clone()), true),
            None => (t.clone(), false),
        })
        .collect();

    let mut out: Vec<Token> = Vec::with_capacity(items.len());
    let mut i = 0;
    while i < items.len() {
        if !items[i].1 {
            out.push(items[i].0.clone());
            i += 1;
            continue;
        }
        let mut text = items[i].0.class.literal_text().unwrap().to_string();
        let mut j = i + 1;
        loop {
            if j < items.len() && items[j].1 {
                text.push_str(items[j].0.class.literal_text().unwrap());
                j += 1;
                continue;
            }
            // Stretch of non-space symbols after the constant run.
            let mut k = j;
            while k < items.len()
                && !items[k].1
                && items[k].0.is_literal()
                && !is_space_literal(&items[k].0)
            {
                k += 1;
            }
            if k == j {
                break;
            }
            let followed_by_constant = k < items.len() && items[k].1;
            let ends_word = k == items.len() || is_space_literal(&items[k].0);
            if followed_by_constant || ends_word {
                for item in &items[j..k] {
                    text.push_str(item.0.class.literal_text().unwrap());
                }
                j = k;
                if !followed_by_constant {
                    break;
                }
            } else {
                break;
            }
        }
        out.push(Token::literal(text));
        i = j;
    }
    Pattern::new(out)
}

/// Parent of `p` under one generalization strategy.
pub fn get_parent(p: &Pattern, strategy: Strategy) -> Pattern {
    generalize(p, strategy)
}

/// Literal characters that no base class can absorb. Coverage preserves
/// this string, so it is a cheap bucketing key.
fn hard_skeleton(p: &Pattern) -> String {
    p.tokens
        .iter()
        .filter_map(|t| t.class.literal_text())
        .flat_map(str::chars)
        .filter(|&c| !TokenClass::AlphaNumeric.contains_char(c))
        .collect()
}

/// Counters for the work done by [`refine`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RefineStats {
    pub get_parent_calls: usize,
    pub greedy_iterations: usize,
}

/// Output of one refinement round.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub parents: Vec<PatternCluster>,
    /// For each parent, indices into the input cluster list.
    pub children: Vec<Vec<usize>>,
    pub stats: RefineStats,
}

/// Build the next layer: compute each child's parent, then greedily keep the
/// parent covering the most remaining children until every child is
/// assigned. Ties go to the parent covering more rows, then to the smaller
/// rendered pattern.
pub fn refine(children: &[PatternCluster], strategy: Strategy) -> Refinement {
    let mut stats = RefineStats::default();
    let mut candidates: Vec<Pattern> = Vec::new();
    let mut candidate_index: HashMap<Pattern, usize> = HashMap::new();
    for child in children {
        let parent = get_parent(&child.pattern, strategy);
        stats.get_parent_calls += 1;
        if !candidate_index.contains_key(&parent) {
            candidate_index.insert(parent.clone(), candidates.len());
            candidates.push(parent);
        }
    }

    let mut buckets: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, child) in children.iter().enumerate() {
        buckets.entry(hard_skeleton(&child.pattern)).or_default().push(i);
    }
    let covered: Vec<Vec<usize>> = candidates
        .iter()
        .map(|cand| {
            buckets
                .get(&hard_skeleton(cand))
                .map(|ids| {
                    ids.iter()
                        .copied()
                        .filter(|&i| cand.covers(&children[i].pattern))
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();
    let rendered: Vec<String> = candidates.iter().map(Pattern::render).collect();

    let mut assigned = vec![false; children.len()];
    let mut remaining = children.len();
    let mut used = vec![false; candidates.len()];
    let mut parents = Vec::new();
    let mut parent_children = Vec::new();
    while remaining > 0 {
        stats.greedy_iterations += 1;
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, ids) in covered.iter().enumerate() {
            if used[c] {
                continue;
            }
            let open: Vec<usize> = ids.iter().copied().filter(|&i| !assigned[i]).collect();
            if open.is_empty() {
                continue;
            }
            let rows: usize = open.iter().map(|&i| children[i].count()).sum();
            let better = match best {
                None => true,
                Some((bc, bn, brows)) => (open.len(), rows)
                    .cmp(&(bn, brows))
                    .then_with(|| rendered[bc].cmp(&rendered[c]))
                    .is_gt(),
            };
            if better {
                best = Some((c, open.len(), rows));
            }
        }
        let (c, _, _) = best.expect("every child is covered by its own parent");
        used[c] = true;
        let mine: Vec<usize> = covered[c].iter().copied().filter(|&i| !assigned[i]).collect();
        let mut members: Vec<RowId> = Vec::new();
        for &i in &mine {
            assigned[i] = true;
            members.extend_from_slice(&children[i].members);
        }
        members.sort_unstable();
        remaining -= mine.len();
        parents.push(PatternCluster {
            pattern: candidates[c].clone(),
            members,
        });
        parent_children.push(mine);
    }
    Refinement {
        parents,
        children: parent_children,
        stats,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyNode {
    pub id: NodeId,
    /// 0 for leaves, increasing towards the roots.
    pub layer: usize,
    pub pattern: Pattern,
    pub members: Vec<RowId>,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

impl HierarchyNode {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Tree of pattern clusters. Leaves come from tokenization, every layer above
/// from one refinement round.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PatternHierarchy {
    pub nodes: Vec<HierarchyNode>,
    /// Node ids per layer, leaves first.
    pub layers: Vec<Vec<NodeId>>,
    /// Rows that were empty strings.
    pub empty_rows: Vec<RowId>,
    pub row_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub constants: ConstantConfig,
}

impl PatternHierarchy {
    pub fn build<S: AsRef<str>>(rows: &[S]) -> Self {
        build_hierarchy(rows, &ProfileConfig::default())
    }

    pub fn node(&self, id: NodeId) -> &HierarchyNode {
        &self.nodes[id]
    }

    pub fn get(&self, id: NodeId) -> Option<&HierarchyNode> {
        self.nodes.get(id)
    }

    pub fn roots(&self) -> &[NodeId] {
        self.layers.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn leaves(&self) -> &[NodeId] {
        self.layers.first().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The first node (leaves first) labelled with `pattern`.
    pub fn find(&self, pattern: &Pattern) -> Option<NodeId> {
        self.nodes.iter().find(|n| &n.pattern == pattern).map(|n| n.id)
    }

    /// Leaf ids under `id`.
    pub fn leaves_under(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if node.children.is_empty() {
                out.push(n);
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        out
    }

    /// JSON-friendly view of the tree rooted at the top layer.
    pub fn to_tree<S: AsRef<str>>(&self, rows: &[S]) -> Vec<ClusterTree> {
        self.roots().iter().map(|&id| self.subtree(id, rows)).collect()
    }

    pub fn subtree<S: AsRef<str>>(&self, id: NodeId, rows: &[S]) -> ClusterTree {
        let node = &self.nodes[id];
        ClusterTree {
            id,
            pattern: node.pattern.render(),
            regex: render_regex(&node.pattern, &[]),
            count: node.count(),
            sample: sample_rows(&node.members, rows, 5),
            children: node.children.iter().map(|&c| self.subtree(c, rows)).collect(),
        }
    }

    pub fn summary<S: AsRef<str>>(&self, id: NodeId, rows: &[S]) -> ClusterSummary {
        let node = &self.nodes[id];
        ClusterSummary {
            id,
            layer: node.layer,
            pattern: node.pattern.render(),
            regex: render_regex(&node.pattern, &[]),
            count: node.count(),
            sample: sample_rows(&node.members, rows, 5),
        }
    }
}

/// Up to `limit` distinct member values, smallest first, so the sample does
/// not depend on row order.
pub fn sample_rows<S: AsRef<str>>(members: &[RowId], rows: &[S], limit: usize) -> Vec<String> {
    let mut best: BTreeSet<&str> = BTreeSet::new();
    for &id in members {
        let v = rows[id].as_ref();
        if best.len() < limit {
            best.insert(v);
        } else if let Some(&largest) = best.iter().next_back() {
            if v < largest && !best.contains(v) {
                best.remove(largest);
                best.insert(v);
            }
        }
    }
    best.into_iter().map(str::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTree {
    pub id: NodeId,
    pub pattern: String,
    pub regex: String,
    pub count: usize,
    pub sample: Vec<String>,
    pub children: Vec<ClusterTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub id: NodeId,
    pub layer: usize,
    pub pattern: String,
    pub regex: String,
    pub count: usize,
    pub sample: Vec<String>,
}

/// Leaves from tokenization and constant discovery, then one layer per
/// strategy. Every layer is materialized even when it changes nothing.
pub fn build_hierarchy<S: AsRef<str>>(rows: &[S], config: &ProfileConfig) -> PatternHierarchy {
    let empty_rows: Vec<RowId> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.as_ref().is_empty())
        .map(|(i, _)| i)
        .collect();
    let initial = cluster_initial(rows);
    if initial.is_empty() {
        return PatternHierarchy {
            empty_rows,
            row_count: rows.len(),
            ..Default::default()
        };
    }

    let mut merged: HashMap<Pattern, Vec<RowId>> = HashMap::new();
    for cluster in &initial {
        for c in discover_constants(cluster, rows, &config.constants) {
            merged.entry(c.pattern).or_default().extend(c.members);
        }
    }
    let mut leaves: Vec<PatternCluster> = merged
        .into_iter()
        .map(|(pattern, mut members)| {
            members.sort_unstable();
            PatternCluster { pattern, members }
        })
        .collect();
    sort_clusters(&mut leaves);

    let mut nodes: Vec<HierarchyNode> = Vec::new();
    let mut layers: Vec<Vec<NodeId>> = Vec::new();
    let mut current: Vec<PatternCluster> = leaves;
    let mut current_ids: Vec<NodeId> = Vec::new();
    for cluster in &current {
        current_ids.push(nodes.len());
        nodes.push(HierarchyNode {
            id: nodes.len(),
            layer: 0,
            pattern: cluster.pattern.clone(),
            members: cluster.members.clone(),
            children: Vec::new(),
            parent: None,
        });
    }
    layers.push(current_ids.clone());

    for (depth, strategy) in Strategy::ALL.iter().enumerate() {
        let refinement = refine(&current, *strategy);
        let mut ids = Vec::with_capacity(refinement.parents.len());
        for (parent, kids) in refinement.parents.iter().zip(&refinement.children) {
            let id = nodes.len();
            let child_ids: Vec<NodeId> = kids.iter().map(|&k| current_ids[k]).collect();
            for &c in &child_ids {
                nodes[c].parent = Some(id);
            }
            nodes.push(HierarchyNode {
                id,
                layer: depth + 1,
                pattern: parent.pattern.clone(),
                members: parent.members.clone(),
                children: child_ids,
                parent: None,
            });
            ids.push(id);
        }
        layers.push(ids.clone());
        current = refinement.parents;
        current_ids = ids;
    }

    PatternHierarchy {
        nodes,
        layers,
        empty_rows,
        row_count: rows.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Bob123@gmail.com").pattern(),
            p("<U><L>2<D>3'@'<L>5'.'<L>3")
        );
        assert_eq!(
            tokenize("(734) 645-8397").pattern(),
            p("'('<D>3')'' '<D>3'-'<D>4")
        );
        assert_eq!(tokenize("7").pattern(), p("<D>"));
        assert!(tokenize("").is_empty());
        let ts = tokenize("é-1");
        assert_eq!(ts.tokens.len(), 3);
        assert_eq!(ts.text(ts.tokens[0].1.clone()), "é");
    }

    #[test]
    fn initial_clusters() {
        let clusters = cluster_initial(&["a1", "b2", "cc"]);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].pattern, p("<L><D>"));
        assert_eq!(clusters[0].members, vec![0, 1]);
        assert_eq!(clusters[1].pattern, p("<L>2"));
        let same = cluster_initial(&["x", "x", "x"]);
        assert_eq!(same.len(), 1);
        assert_eq!(same[0].count(), 3);
        assert!(cluster_initial(&[""]).is_empty());
    }

    #[test]
    fn constants_replace_shared_values() {
        let rows = ["CPT-00350", "CPT-00340"];
        let cluster = cluster_initial(&rows).remove(0);
        let out = discover_constants(&cluster, &rows, &ConstantConfig::default());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].pattern, p("'CPT''-'<D>5"));
        assert_eq!(out[0].members, vec![0, 1]);
    }

    #[test]
    fn constants_merge_into_abbreviations() {
        let rows = ["Dr. Eran", "Dr. Kathy", "Dr. Bobby"];
        let mut clusters = cluster_initial(&rows);
        assert_eq!(clusters.len(), 2);
        let four = clusters.iter().position(|c| c.count() == 2).unwrap();
        let out = discover_constants(&clusters.remove(four), &rows, &ConstantConfig::default());
        assert_eq!(out[0].pattern, p("'Dr.'' '<U><L>4"));
    }

    #[test]
    fn single_row_cluster_is_left_alone() {
        let rows = ["CPT115"];
        let cluster = cluster_initial(&rows).remove(0);
        let out = discover_constants(&cluster, &rows, &ConstantConfig::default());
        assert_eq!(out, vec![cluster]);
    }

    #[test]
    fn partial_threshold_splits_off_disagreeing_rows() {
        let rows = ["AB-1", "AB-2", "AB-3", "CD-4"];
        let cluster = cluster_initial(&rows).remove(0);
        let config = ConstantConfig {
            threshold: 0.7,
            min_cluster_size: 2,
        };
        let out = discover_constants(&cluster, &rows, &config);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].pattern, p("'AB''-'<D>"));
        assert_eq!(out[0].members, vec![0, 1, 2]);
        assert_eq!(out[1].pattern, p("<U>2'-'<D>"));
        assert_eq!(out[1].members, vec![3]);
    }

    #[test]
    fn refine_groups_children_under_one_parent() {
        let children = vec![
            PatternCluster { pattern: p("<U><L>2"), members: vec![0] },
            PatternCluster { pattern: p("<U><L>5"), members: vec![1] },
        ];
        let r = refine(&children, Strategy::QuantifierToPlus);
        assert_eq!(r.parents.len(), 1);
        assert_eq!(r.parents[0].pattern, p("<U><L>+"));
        assert_eq!(r.children[0], vec![0, 1]);
        assert_eq!(r.stats.get_parent_calls, 2);
        assert_eq!(r.stats.greedy_iterations, 1);

        let single = refine(&children[..1], Strategy::CaseToAlpha);
        assert_eq!(single.parents[0].pattern, p("<A>3"));
    }

    #[test]
    fn refine_prefers_the_parent_covering_more_children() {
        let children = vec![
            PatternCluster { pattern: p("'[''CPT''-'<D>5']'"), members: vec![0, 1, 2] },
            PatternCluster { pattern: p("'['<U>3'-'<D>3']'"), members: vec![3] },
        ];
        let r = refine(&children, Strategy::QuantifierToPlus);
        assert_eq!(r.parents.len(), 1);
        assert_eq!(r.parents[0].pattern, p("'['<U>+'-'<D>+']'"));
        assert_eq!(r.parents[0].members, vec![0, 1, 2, 3]);
    }

    #[test]
    fn hierarchy_chain_for_one_email() {
        let h = PatternHierarchy::build(&["Bob123@gmail.com"]);
        assert_eq!(h.layers.len(), 4);
        let rendered: Vec<String> = h.nodes.iter().map(|n| n.pattern.render()).collect();
        assert_eq!(
            rendered,
            vec![
                "<U><L>2<D>3'@'<L>5'.'<L>3",
                "<U><L>+<D>+'@'<L>+'.'<L>+",
                "<A>+<D>+'@'<A>+'.'<A>+",
                "<AN>+'@'<AN>+'.'<AN>+",
            ]
        );
        assert_eq!(h.roots(), &[3]);
        assert_eq!(h.leaves_under(3), vec![0]);
    }

    #[test]
    fn empty_input_gives_empty_hierarchy() {
        let h = PatternHierarchy::build::<&str>(&[]);
        assert!(h.is_empty());
        assert!(h.roots().is_empty());
        let h = PatternHierarchy::build(&["", "a"]);
        assert_eq!(h.empty_rows, vec![0]);
        assert_eq!(h.node(h.leaves()[0]).members, vec![1]);
    }

    #[test]
    fn match_pattern_reports_spans() {
        let ts = tokenize("Dr. Eran");
        let spans = ts.match_pattern(&p("'Dr.'' '<U><L>+")).unwrap();
        assert_eq!(spans, vec![0..3, 3..4, 4..5, 5..8]);
        assert!(ts.match_pattern(&p("'Mr.'' '<U><L>+")).is_none());
        let ts = tokenize("a-b-c");
        let spans = ts.match_pattern(&p("<AN>+'-'<AN>+")).unwrap();
        assert_eq!(spans, vec![0..3, 3..4, 4..5]);
    }

    #[test]
    fn sample_is_order_independent() {
        let rows = ["d", "a", "c", "b", "a", "e", "f"];
        let all: Vec<usize> = (0..rows.len()).collect();
        assert_eq!(sample_rows(&all, &rows, 3), vec!["a", "b", "c"]);
    }
}
