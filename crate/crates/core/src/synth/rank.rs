//! Plan enumeration, minimum description length ranking and removal of
//! equivalent plans.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::pattern::Pattern;
use crate::program::{Plan, StringExpr};

use super::align::AlignmentDag;

/// Size of the printable character set used to encode constants.
pub const PRINTABLE_CHARS: f64 = 95.0;

/// Description length of `plan` with `n` taken as the source token count:
/// `|E| log2 k + sum of parameter costs`, where `k` is the number of distinct
/// operation kinds in the plan, an extract costs `log2 n^2` and a constant
/// costs `log2 95` per character.
pub fn description_length_with_n(plan: &Plan, n: usize) -> f64 {
    let extracts = plan
        .exprs()
        .iter()
        .filter(|e| matches!(e, StringExpr::Extract(..)))
        .count();
    let const_chars: usize = plan
        .exprs()
        .iter()
        .map(|e| match e {
            StringExpr::ConstStr(s) => s.chars().count(),
            StringExpr::Extract(..) => 0,
        })
        .sum();
    let consts = plan.len() - extracts;
    let kinds = usize::from(extracts > 0) + usize::from(consts > 0);
    let model = if kinds > 1 {
        plan.len() as f64 * (kinds as f64).log2()
    } else {
        0.0
    };
    let extract_cost = if n > 1 { 2.0 * (n as f64).log2() } else { 0.0 };
    model + extracts as f64 * extract_cost + const_chars as f64 * PRINTABLE_CHARS.log2()
}

pub fn description_length(plan: &Plan, source: &Pattern, _target: &Pattern) -> f64 {
    description_length_with_n(plan, source.len())
}

/// One element of a plan's canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyItem {
    Char(char),
    Slot(usize),
}

/// Canonical form of a plan over `source`: extracts split into single
/// tokens, constant source tokens and constant strings spelled out character
/// by character, and base tokens kept as slots. Plans with the same key
/// produce the same output on every string matching `source`.
pub fn equivalence_key(plan: &Plan, source: &Pattern) -> Vec<KeyItem> {
    let mut key = Vec::new();
    for e in plan.exprs() {
        match e {
            StringExpr::ConstStr(s) => key.extend(s.chars().map(KeyItem::Char)),
            StringExpr::Extract(i, j) => {
                for t in *i..=*j {
                    match source.tokens[t - 1].class.literal_text() {
                        Some(s) => key.extend(s.chars().map(KeyItem::Char)),
                        None => key.push(KeyItem::Slot(t)),
                    }
                }
            }
        }
    }
    key
}

pub fn plans_equivalent(a: &Plan, b: &Plan, source: &Pattern) -> bool {
    equivalence_key(a, source) == equivalence_key(b, source)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPlan {
    pub plan: Plan,
    pub dl: f64,
}

/// Ranked, pairwise non-equivalent plans for one source; entry
/// `default_index` is the one in use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPlans {
    pub source: Pattern,
    pub plans: Vec<RankedPlan>,
    pub default_index: usize,
    /// More paths existed than the enumeration cap allowed.
    pub overflow: bool,
}

impl RankedPlans {
    pub fn current(&self) -> Option<&RankedPlan> {
        self.plans.get(self.default_index)
    }
}

/// True when the plan extracts some base source token more than once while
/// leaving another base source token unused.
pub fn is_lossy(plan: &Plan, source: &Pattern) -> bool {
    let mut uses = vec![0usize; source.len() + 1];
    for e in plan.exprs() {
        if let StringExpr::Extract(i, j) = e {
            for count in &mut uses[*i..=(*j).min(source.len())] {
                *count += 1;
            }
        }
    }
    let base = (1..=source.len()).filter(|&i| source.tokens[i - 1].is_base());
    let (mut repeated, mut unused) = (false, false);
    for i in base {
        repeated |= uses[i] > 1;
        unused |= uses[i] == 0;
    }
    repeated && unused
}

struct Candidate {
    plan: Plan,
    /// Some base token is extracted twice while another is never extracted.
    lossy: bool,
    dl: f64,
    const_chars: usize,
    reuse: usize,
    inversions: usize,
    serialized: String,
}

impl Candidate {
    fn new(plan: Plan, source: &Pattern) -> Self {
        let dl = description_length_with_n(&plan, source.len());
        let mut const_chars = 0;
        let mut units: Vec<usize> = Vec::new();
        for e in plan.exprs() {
            match e {
                StringExpr::ConstStr(s) => const_chars += s.chars().count(),
                StringExpr::Extract(i, j) => units.extend(*i..=*j),
            }
        }
        let mut sorted = units.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let reuse = units.len() - sorted.len();
        let lossy = is_lossy(&plan, source);
        let mut inversions = 0;
        for (a, &u) in units.iter().enumerate() {
            inversions += units[a + 1..].iter().filter(|&&v| v < u).count();
        }
        let serialized = serde_json::to_string(&plan).expect("plans serialize");
        Candidate {
            plan,
            lossy,
            dl,
            const_chars,
            reuse,
            inversions,
            serialized,
        }
    }

    /// Total order: plans that keep every base token first, then
    /// description length, fewer expressions, fewer constant characters,
    /// fewer reused source tokens, fewer out-of-order extracts, then
    /// serialized form.
    fn cmp(&self, other: &Self) -> Ordering {
        self.lossy
            .cmp(&other.lossy)
            .then(self.dl.total_cmp(&other.dl))
            .then(self.plan.len().cmp(&other.plan.len()))
            .then(self.const_chars.cmp(&other.const_chars))
            .then(self.reuse.cmp(&other.reuse))
            .then(self.inversions.cmp(&other.inversions))
            .then_with(|| self.serialized.cmp(&other.serialized))
    }
}

/// All plans along source-to-target paths of `dag`, stopping after `cap`.
/// Longer edges are explored first. Returns the plans and whether the cap
/// cut the enumeration short.
pub fn all_paths(dag: &AlignmentDag, cap: usize) -> (Vec<Plan>, bool) {
    let reachable = dag.paths_from();
    let mut out = Vec::new();
    if dag.node_count < 2 || reachable[0] == 0 {
        return (out, false);
    }
    let overflow = reachable[0] > cap as u64;
    let mut stack: Vec<StringExpr> = Vec::new();
    walk(dag, &reachable, 0, &mut stack, &mut out, cap);
    (out, overflow)
}

fn walk(
    dag: &AlignmentDag,
    reachable: &[u64],
    node: usize,
    stack: &mut Vec<StringExpr>,
    out: &mut Vec<Plan>,
    cap: usize,
) {
    if out.len() >= cap {
        return;
    }
    if node == dag.target_node() {
        out.push(Plan(stack.clone()));
        return;
    }
    let edges: Vec<_> = dag.outgoing(node).collect();
    for (b, set) in edges.into_iter().rev() {
        if reachable[b] == 0 {
            continue;
        }
        for e in set {
            stack.push(e.clone());
            walk(dag, reachable, b, stack, out, cap);
            stack.pop();
            if out.len() >= cap {
                return;
            }
        }
    }
}

/// Enumerate, rank and deduplicate the plans of `dag`, keeping the best
/// `k + 1`. The first entry is the default.
pub fn enumerate_plans(
    dag: &AlignmentDag,
    source: &Pattern,
    _target: &Pattern,
    k: usize,
    cap: usize,
) -> RankedPlans {
    let (plans, overflow) = all_paths(dag, cap);
    let mut candidates: Vec<Candidate> = plans.into_iter().map(|p| Candidate::new(p, source)).collect();
    candidates.sort_by(Candidate::cmp);
    let mut seen = std::collections::HashSet::new();
    let mut kept = Vec::new();
    for c in candidates {
        if kept.len() > k {
            break;
        }
        if seen.insert(equivalence_key(&c.plan, source)) {
            kept.push(RankedPlan {
                plan: c.plan,
                dl: c.dl,
            });
        }
    }
    RankedPlans {
        source: source.clone(),
        plans: kept,
        default_index: 0,
        overflow,
    }
}
