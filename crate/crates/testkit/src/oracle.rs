//! Brute-force plan enumeration.
//!
//! Every sequence of up to `|target|` operations drawn from all extracts of
//! the source and all constants of the target is generated, and kept when it
//! is token-aligned: the target splits into consecutive runs, one per
//! operation, where a constant produces one identical literal token and an
//! extract of `k` source tokens produces `k` target tokens, each fitting its
//! source token on its own.

use reshape_core::pattern::{Pattern, Quantifier, Token, TokenClass};
use reshape_core::program::{Plan, StringExpr};

fn in_class(class: &TokenClass, c: char) -> bool {
    match class {
        TokenClass::Digit => c.is_ascii_digit(),
        TokenClass::Lower => c.is_ascii_lowercase(),
        TokenClass::Upper => c.is_ascii_uppercase(),
        TokenClass::Alpha => c.is_ascii_alphabetic(),
        TokenClass::AlphaNumeric => c.is_ascii_alphanumeric() || c == '-' || c == '_',
        TokenClass::Literal(_) => false,
    }
}

/// Whether every string of source token `s` is a string of target token `t`.
pub fn token_fits(t: &Token, s: &Token) -> bool {
    match (&t.class, &s.class) {
        (TokenClass::Literal(a), TokenClass::Literal(b)) => a == b,
        (TokenClass::Literal(_), _) => false,
        (tc, TokenClass::Literal(text)) => {
            text.chars().all(|c| in_class(tc, c))
                && match t.quantifier {
                    Quantifier::Plus => true,
                    Quantifier::Count(n) => text.chars().count() == n as usize,
                }
        }
        (tc, sc) => {
            let subset = (0u8..128).map(char::from).all(|c| !in_class(sc, c) || in_class(tc, c));
            subset
                && match (t.quantifier, s.quantifier) {
                    (Quantifier::Plus, _) => true,
                    (Quantifier::Count(a), Quantifier::Count(b)) => a == b,
                    (Quantifier::Count(_), Quantifier::Plus) => false,
                }
        }
    }
}

/// Every operation a plan for this pair may use.
pub fn operation_alphabet(source: &Pattern, target: &Pattern) -> Vec<StringExpr> {
    let n = source.len();
    let mut ops = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            ops.push(StringExpr::Extract(i, j));
        }
    }
    let mut consts: Vec<String> = target
        .tokens
        .iter()
        .filter_map(|t| t.class.literal_text().map(str::to_string))
        .collect();
    consts.sort();
    consts.dedup();
    ops.extend(consts.into_iter().map(StringExpr::ConstStr));
    ops
}

/// Target tokens consumed by `op` at position `pos`, if it fits there.
fn consume(op: &StringExpr, source: &Pattern, target: &Pattern, pos: usize) -> Option<usize> {
    match op {
        StringExpr::ConstStr(s) => match target.tokens.get(pos)?.class.literal_text() {
            Some(t) if t == s => Some(pos + 1),
            _ => None,
        },
        StringExpr::Extract(i, j) => {
            let len = j - i + 1;
            if pos + len > target.len() {
                return None;
            }
            (0..len)
                .all(|d| token_fits(&target.tokens[pos + d], &source.tokens[i - 1 + d]))
                .then_some(pos + len)
        }
    }
}

pub fn is_token_aligned(plan: &Plan, source: &Pattern, target: &Pattern) -> bool {
    let mut pos = 0;
    for op in plan.exprs() {
        match consume(op, source, target, pos) {
            Some(next) => pos = next,
            None => return false,
        }
    }
    !plan.is_empty() && pos == target.len()
}

/// All token-aligned plans, by exhaustive generation over the alphabet.
pub fn brute_force_plans(source: &Pattern, target: &Pattern) -> Vec<Plan> {
    let ops = operation_alphabet(source, target);
    let mut found = Vec::new();
    if ops.is_empty() {
        return found;
    }
    let mut seq: Vec<usize> = Vec::new();
    for len in 1..=target.len() {
        seq.clear();
        seq.resize(len, 0);
        loop {
            let mut pos = Some(0);
            for &k in seq.iter() {
                pos = pos.and_then(|at| consume(&ops[k], source, target, at));
            }
            if pos == Some(target.len()) {
                found.push(Plan(seq.iter().map(|&k| ops[k].clone()).collect()));
            }
            // Odometer increment; done once every digit wraps.
            let mut done = true;
            for d in (0..len).rev() {
                seq[d] += 1;
                if seq[d] < ops.len() {
                    done = false;
                    break;
                }
                seq[d] = 0;
            }
            if done {
                break;
            }
        }
    }
    found
}

/// Whether `plan` reads some source token more than once.
pub fn reuses_source_tokens(plan: &Plan) -> bool {
    let mut seen = std::collections::HashSet::new();
    plan.exprs().iter().any(|e| match *e {
        StringExpr::Extract(i, j) => (i..=j).any(|t| !seen.insert(t)),
        StringExpr::ConstStr(_) => false,
    })
}
