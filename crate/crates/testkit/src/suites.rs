//! The four randomized sub-suites: plan soundness, completeness against
//! the brute-force oracle, explanation fidelity and profiler invariants.
//! Each returns how many cases it checked, or the first counterexample.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reshape_core::pattern::{covers, Pattern};
use reshape_core::profile::{build_hierarchy, tokenize, PatternHierarchy, ProfileConfig};
use reshape_core::program::{eval_plan, explain_branch};
use reshape_core::synth::rank::all_paths;
use reshape_core::synth::{enumerate_plans, equivalence_key, find_token_alignment, validate};

use crate::gen::{derived_target, random_pattern, random_string};
use crate::oracle::{brute_force_plans, reuses_source_tokens};
use crate::regex_engine;

pub type SuiteResult = Result<usize, String>;

const PATH_CAP: usize = 100_000;

/// Every enumerated plan, applied to a string of the source, yields a string
/// of the target. Checks `triples` (source, target, string) cases that have
/// at least one plan.
pub fn soundness(triples: usize, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < triples {
        attempts += 1;
        if attempts > triples * 100 {
            return Err(format!("only {checked} of {triples} generated pairs had plans"));
        }
        let source = random_pattern(&mut rng, 5);
        let target = derived_target(&mut rng, &source, 5);
        let dag = find_token_alignment(&source, &target);
        let (plans, _) = all_paths(&dag, PATH_CAP);
        if plans.is_empty() {
            continue;
        }
        let s = random_string(&mut rng, &source);
        let ts = tokenize(&s);
        for plan in &plans {
            let out = eval_plan(plan, &ts, &source)
                .map_err(|e| format!("{plan} on {s:?} over {source}: {e}"))?;
            if !tokenize(&out).matches(&target) {
                return Err(format!(
                    "{plan} maps {s:?} ({source}) to {out:?}, which is not {target}"
                ));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Pairs of at most `max_len` tokens: the DAG's plans equal the oracle's up
/// to equivalence, every oracle plan is sound on random strings, and
/// `validate` accepts each pair the oracle solves without reusing a token.
pub fn completeness(pairs: usize, max_len: usize, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solved = 0;
    let mut ambiguous = 0;
    for case in 0..pairs {
        let source = random_pattern(&mut rng, max_len);
        let target = if rng.gen_bool(0.7) {
            derived_target(&mut rng, &source, max_len)
        } else {
            random_pattern(&mut rng, max_len)
        };
        let dag = find_token_alignment(&source, &target);
        let (plans, overflow) = all_paths(&dag, PATH_CAP);
        if overflow {
            return Err(format!("case {case}: enumeration overflowed for {source} -> {target}"));
        }
        let ours: BTreeSet<_> = plans.iter().map(|pl| equivalence_key(pl, &source)).collect();
        let oracle_plans = brute_force_plans(&source, &target);
        let theirs: BTreeSet<_> = oracle_plans.iter().map(|pl| equivalence_key(pl, &source)).collect();
        if ours != theirs {
            return Err(format!(
                "case {case}: {source} -> {target}: DAG has {} classes, oracle {}",
                ours.len(),
                theirs.len()
            ));
        }
        solved += usize::from(!theirs.is_empty());
        ambiguous += usize::from(theirs.len() > 1);
        for plan in oracle_plans.iter().take(20) {
            for _ in 0..5 {
                let s = random_string(&mut rng, &source);
                let out = eval_plan(plan, &tokenize(&s), &source).map_err(|e| e.to_string())?;
                if !tokenize(&out).matches(&target) {
                    return Err(format!("case {case}: oracle plan {plan} unsound on {s:?}"));
                }
            }
        }
        let linear = oracle_plans.iter().any(|pl| !reuses_source_tokens(pl));
        if linear && !validate(&source, &target) {
            return Err(format!("case {case}: validate rejects solvable {source} -> {target}"));
        }
    }
    if solved * 3 < pairs || ambiguous * 10 < solved {
        return Err(format!(
            "generator too weak: {solved} of {pairs} pairs solvable, {ambiguous} with several plans"
        ));
    }
    Ok(pairs)
}

/// Rendered replace operations, run through the reference regex engine,
/// reproduce plan evaluation on `rows` random rows.
pub fn explanation_fidelity(rows: usize, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < rows {
        attempts += 1;
        if attempts > rows * 100 {
            return Err(format!("only {checked} of {rows} rows had plans"));
        }
        let source = random_pattern(&mut rng, 5);
        let target = derived_target(&mut rng, &source, 5);
        let dag = find_token_alignment(&source, &target);
        let ranked = enumerate_plans(&dag, &source, &target, 3, PATH_CAP);
        if ranked.plans.is_empty() {
            continue;
        }
        let s = random_string(&mut rng, &source);
        let ts = tokenize(&s);
        for rp in &ranked.plans {
            let expected = eval_plan(&rp.plan, &ts, &source).map_err(|e| e.to_string())?;
            let op = explain_branch(&source, &rp.plan, "c");
            match regex_engine::apply(&op, &s) {
                Some(got) if got == expected => {}
                got => {
                    return Err(format!(
                        "{op} on {s:?}: regex gives {got:?}, plan {} gives {expected:?}",
                        rp.plan
                    ))
                }
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Random column of `n` rows drawn from a handful of patterns plus noise,
/// empty strings and non-ASCII text.
pub fn random_column(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: Vec<Pattern> = (0..12).map(|_| random_pattern(&mut rng, 6)).collect();
    let noise = ["", "N/A", "é-1", "  ", "--", "Dr. Who", "x"];
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.05) {
                noise.choose(&mut rng).unwrap().to_string()
            } else {
                let shape = shapes.choose(&mut rng).unwrap();
                random_string(&mut rng, shape)
            }
        })
        .collect()
}

fn structure(h: &PatternHierarchy) -> Vec<(usize, String, usize, Vec<usize>)> {
    h.nodes
        .iter()
        .map(|n| (n.layer, n.pattern.render(), n.count(), n.children.clone()))
        .collect()
}

/// Hierarchy invariants on a random column of `n` rows.
pub fn profiler_invariants(n: usize, seed: u64) -> SuiteResult {
    let rows = random_column(n, seed);
    for r in &rows {
        let ts = tokenize(r);
        let joined: String = ts.tokens.iter().map(|(_, span)| &r[span.clone()]).collect();
        if &joined != r {
            return Err(format!("tokenizing {r:?} loses text"));
        }
        if ts.tokens.windows(2).any(|w| w[0].1.end != w[1].1.start) {
            return Err(format!("spans of {r:?} are not contiguous"));
        }
    }
    let h = build_hierarchy(&rows, &ProfileConfig::default());
    let non_empty: HashSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    if h.layers.len() != 4 {
        return Err(format!("expected 4 layers, got {}", h.layers.len()));
    }
    for (depth, layer) in h.layers.iter().enumerate() {
        let mut seen = HashSet::new();
        for &id in layer {
            for &m in &h.node(id).members {
                if !seen.insert(m) {
                    return Err(format!("row {m} appears twice in layer {depth}"));
                }
            }
        }
        if seen != non_empty {
            return Err(format!("layer {depth} does not partition the non-empty rows"));
        }
    }
    for node in &h.nodes {
        for &m in &node.members {
            if !tokenize(&rows[m]).matches(&node.pattern) {
                return Err(format!("row {:?} does not match its cluster {}", rows[m], node.pattern));
            }
        }
        if !node.children.is_empty() {
            let mut union: Vec<usize> = node
                .children
                .iter()
                .flat_map(|&c| h.node(c).members.iter().copied())
                .collect();
            union.sort_unstable();
            let mut members = node.members.clone();
            members.sort_unstable();
            if union != members {
                return Err(format!("children of {} do not add up to it", node.pattern));
            }
        }
        for &c in &node.children {
            if !covers(&node.pattern, &h.node(c).pattern) {
                return Err(format!("{} does not cover child {}", node.pattern, h.node(c).pattern));
            }
        }
    }
    let mut shuffled = rows.clone();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    let again = build_hierarchy(&shuffled, &ProfileConfig::default());
    if structure(&again) != structure(&h) {
        return Err("row order changes the hierarchy".into());
    }
    Ok(rows.len())
}
