//! Random patterns, matching strings and derived targets.
//!
//! Generated patterns never put two base tokens with overlapping classes
//! side by side and only use non-alphanumeric literals, the shape every
//! profiled pattern has. Such patterns match a string token-wise exactly
//! when they match it character-wise.

use rand::seq::SliceRandom;
use rand::Rng;
use reshape_core::pattern::{Pattern, Quantifier, Token, TokenClass};

pub const LITERALS: [&str; 5] = ["-", "/", ".", " ", ":"];

const CLASSES: [TokenClass; 5] = [
    TokenClass::Digit,
    TokenClass::Lower,
    TokenClass::Upper,
    TokenClass::Alpha,
    TokenClass::AlphaNumeric,
];

fn disjoint(a: &TokenClass, b: &TokenClass) -> bool {
    use TokenClass::*;
    matches!(
        (a, b),
        (Digit, Lower) | (Digit, Upper) | (Lower, Digit) | (Lower, Upper) | (Upper, Digit) | (Upper, Lower)
    )
}

/// Whether `next` may follow `prev` in a generated pattern.
pub fn may_follow(prev: Option<&Token>, next: &Token) -> bool {
    match prev {
        Some(p) if p.is_base() && next.is_base() => disjoint(&p.class, &next.class),
        _ => true,
    }
}

pub fn well_formed(p: &Pattern) -> bool {
    p.tokens
        .windows(2)
        .all(|w| may_follow(Some(&w[0]), &w[1]))
}

fn random_token<R: Rng>(rng: &mut R) -> Token {
    if rng.gen_bool(0.35) {
        return Token::literal(*LITERALS.choose(rng).unwrap());
    }
    let class = CLASSES.choose(rng).unwrap().clone();
    if rng.gen_bool(0.3) {
        Token::plus(class)
    } else {
        Token::base(class, rng.gen_range(1..=3))
    }
}

/// A random well-formed pattern of `1..=max_len` tokens.
pub fn random_pattern<R: Rng>(rng: &mut R, max_len: usize) -> Pattern {
    let len = rng.gen_range(1..=max_len);
    let mut tokens: Vec<Token> = Vec::with_capacity(len);
    while tokens.len() < len {
        let t = random_token(rng);
        if may_follow(tokens.last(), &t) {
            tokens.push(t);
        }
    }
    Pattern::new(tokens)
}

fn class_chars(class: &TokenClass) -> Vec<char> {
    let digits = '0'..='9';
    let lower = 'a'..='z';
    let upper = 'A'..='Z';
    match class {
        TokenClass::Digit => digits.collect(),
        TokenClass::Lower => lower.collect(),
        TokenClass::Upper => upper.collect(),
        TokenClass::Alpha => lower.chain(upper).collect(),
        TokenClass::AlphaNumeric => digits.chain(lower).chain(upper).chain(['-', '_']).collect(),
        TokenClass::Literal(_) => Vec::new(),
    }
}

/// A random string described by `p`. Plus tokens repeat one to four times.
pub fn random_string<R: Rng>(rng: &mut R, p: &Pattern) -> String {
    let mut out = String::new();
    for t in &p.tokens {
        match &t.class {
            TokenClass::Literal(s) => out.push_str(s),
            class => {
                let chars = class_chars(class);
                let n = match t.quantifier {
                    Quantifier::Count(n) => n as usize,
                    Quantifier::Plus => rng.gen_range(1..=4),
                };
                for _ in 0..n {
                    out.push(*chars.choose(rng).unwrap());
                }
            }
        }
    }
    out
}

fn loosen<R: Rng>(rng: &mut R, t: &Token) -> Token {
    let mut t = t.clone();
    if rng.gen_bool(0.3) {
        t.quantifier = Quantifier::Plus;
    }
    let r: f64 = rng.gen();
    if r < 0.15 {
        t.class = TokenClass::AlphaNumeric;
    } else if r < 0.3 && matches!(t.class, TokenClass::Lower | TokenClass::Upper) {
        t.class = TokenClass::Alpha;
    }
    t
}

/// A target built mostly from (possibly loosened) source tokens in random
/// order, with literals mixed in, so that plans usually exist.
pub fn derived_target<R: Rng>(rng: &mut R, source: &Pattern, max_len: usize) -> Pattern {
    let bases: Vec<&Token> = source.tokens.iter().filter(|t| t.is_base()).collect();
    let len = rng.gen_range(1..=max_len);
    let mut tokens: Vec<Token> = Vec::with_capacity(len);
    let mut attempts = 0;
    while tokens.len() < len && attempts < 100 {
        attempts += 1;
        let t = if !bases.is_empty() && rng.gen_bool(0.6) {
            let base = bases.choose(rng).copied().unwrap();
            loosen(rng, base)
        } else if rng.gen_bool(0.5) {
            match source.tokens.iter().filter(|t| t.is_literal()).collect::<Vec<_>>().choose(rng) {
                Some(t) => (*t).clone(),
                None => Token::literal(*LITERALS.choose(rng).unwrap()),
            }
        } else {
            Token::literal(*LITERALS.choose(rng).unwrap())
        };
        if may_follow(tokens.last(), &t) {
            tokens.push(t);
        }
    }
    if tokens.is_empty() {
        tokens.push(Token::literal("-"));
    }
    Pattern::new(tokens)
}
