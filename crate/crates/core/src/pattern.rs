//! Tokens, patterns and the coverage relation between them.
//!
//! A [`Pattern`] is a sequence of tokens, each a character class (or a
//! constant literal) with a quantifier. Patterns have a compact textual form
//! (`<U><L>2<D>3'@'<L>5'.'<L>3`) used on the command line and in JSON, and a
//! natural-language-like regular expression form (`/^{upper}{1}{lower}{2}$/`)
//! shown to people reviewing a transformation.

use std::fmt;
use std::ops::{Range, RangeInclusive};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PatternSyntaxError;

/// The five base classes plus constant literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenClass {
    Digit,
    Lower,
    Upper,
    Alpha,
    AlphaNumeric,
    Literal(String),
}

impl TokenClass {
    pub const BASE: [TokenClass; 5] = [
        TokenClass::Digit,
        TokenClass::Lower,
        TokenClass::Upper,
        TokenClass::Alpha,
        TokenClass::AlphaNumeric,
    ];

    pub fn is_literal(&self) -> bool {
        matches!(self, TokenClass::Literal(_))
    }

    pub fn literal_text(&self) -> Option<&str> {
        match self {
            TokenClass::Literal(s) => Some(s),
            _ => None,
        }
    }

    /// Whether `c` belongs to this base class. Literals contain no characters
    /// in this sense.
    pub fn contains_char(&self, c: char) -> bool {
        match self {
            TokenClass::Digit => c.is_ascii_digit(),
            TokenClass::Lower => c.is_ascii_lowercase(),
            TokenClass::Upper => c.is_ascii_uppercase(),
            TokenClass::Alpha => c.is_ascii_alphabetic(),
            TokenClass::AlphaNumeric => c.is_ascii_alphanumeric() || c == '_' || c == '-',
            TokenClass::Literal(_) => false,
        }
    }

    /// Generalization order: `self <= parent` when every string described by
    /// `self` is described by `parent`. A literal sits below a base class
    /// when all of its characters belong to that class.
    pub fn is_generalized_by(&self, parent: &TokenClass) -> bool {
        use TokenClass::*;
        match (self, parent) {
            (Literal(a), Literal(b)) => a == b,
            (Literal(s), class) => !s.is_empty() && s.chars().all(|c| class.contains_char(c)),
            (_, Literal(_)) => false,
            (Digit, Digit) | (Lower, Lower) | (Upper, Upper) | (Alpha, Alpha) => true,
            (Lower | Upper, Alpha) => true,
            (_, AlphaNumeric) => true,
            _ => false,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            TokenClass::Digit => "D",
            TokenClass::Lower => "L",
            TokenClass::Upper => "U",
            TokenClass::Alpha => "A",
            TokenClass::AlphaNumeric => "AN",
            TokenClass::Literal(_) => "",
        }
    }

    fn regex_name(&self) -> &'static str {
        match self {
            TokenClass::Digit => "{digit}",
            TokenClass::Lower => "{lower}",
            TokenClass::Upper => "{upper}",
            TokenClass::Alpha => "{alpha}",
            TokenClass::AlphaNumeric => "{alnum}",
            TokenClass::Literal(_) => "",
        }
    }
}

/// How many times a token repeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    /// Exactly this many occurrences, always at least one.
    Count(u32),
    /// One or more occurrences.
    Plus,
}

impl Quantifier {
    pub fn count(&self) -> Option<u32> {
        match self {
            Quantifier::Count(n) => Some(*n),
            Quantifier::Plus => None,
        }
    }

    /// The weight used by frequency counting: a `+` counts once.
    pub fn weight(&self) -> u64 {
        match self {
            Quantifier::Count(n) => u64::from(*n),
            Quantifier::Plus => 1,
        }
    }

    /// Quantifier of two adjacent tokens of one class merged together.
    pub fn merge(self, other: Quantifier) -> Quantifier {
        match (self, other) {
            (Quantifier::Count(a), Quantifier::Count(b)) => Quantifier::Count(a + b),
            _ => Quantifier::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub class: TokenClass,
    pub quantifier: Quantifier,
}

impl Token {
    pub fn new(class: TokenClass, quantifier: Quantifier) -> Self {
        Token { class, quantifier }
    }

    pub fn base(class: TokenClass, n: u32) -> Self {
        debug_assert!(!class.is_literal() && n >= 1);
        Token::new(class, Quantifier::Count(n))
    }

    pub fn plus(class: TokenClass) -> Self {
        Token::new(class, Quantifier::Plus)
    }

    pub fn literal(text: impl Into<String>) -> Self {
        Token::new(TokenClass::Literal(text.into()), Quantifier::Count(1))
    }

    pub fn is_literal(&self) -> bool {
        self.class.is_literal()
    }

    pub fn is_base(&self) -> bool {
        !self.class.is_literal()
    }
}

/// An ordered token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pattern {
    pub tokens: Vec<Token>,
}

impl Pattern {
    pub fn new(tokens: Vec<Token>) -> Self {
        Pattern { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, PatternSyntaxError> {
        parse_pattern(text)
    }

    pub fn render(&self) -> String {
        render_pattern(self)
    }

    /// Whether this pattern describes every string `child` describes.
    pub fn covers(&self, child: &Pattern) -> bool {
        covers(self, child)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_pattern(self))
    }
}

impl FromStr for Pattern {
    type Err = PatternSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&render_pattern(self))
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_pattern(&text).map_err(serde::de::Error::custom)
    }
}

/// Sum of the quantifiers of tokens of `class` in `p`, with `+` counted as 1.
pub fn token_frequency(class: &TokenClass, p: &Pattern) -> u64 {
    p.tokens
        .iter()
        .filter(|t| &t.class == class)
        .map(|t| t.quantifier.weight())
        .sum()
}

/// Frequency of material in `p` that a token of `class` could be built
/// from: tokens of `class` itself or of any class it generalizes.
pub fn generalized_frequency(class: &TokenClass, p: &Pattern) -> u64 {
    p.tokens
        .iter()
        .filter(|t| t.class.is_generalized_by(class))
        .map(|t| match &t.class {
            TokenClass::Literal(s) => s.chars().count() as u64,
            _ => t.quantifier.weight(),
        })
        .sum()
}

/// One element of the sequence being partitioned against a parent pattern:
/// a token, plus the concrete text it stands for when that is known.
#[derive(Debug, Clone, Copy)]
pub struct Unit<'a> {
    pub token: &'a Token,
    pub text: Option<&'a str>,
}

impl<'a> Unit<'a> {
    pub fn of_token(token: &'a Token) -> Self {
        Unit {
            token,
            text: token.class.literal_text(),
        }
    }
}

/// Partition `units` into `parent.len()` consecutive non-empty groups, group
/// `i` described by parent token `i`. Plus tokens take the longest group that
/// still lets the rest match (greedy, leftmost first). Returns the group
/// ranges in unit indices.
pub fn partition(parent: &[Token], units: &[Unit<'_>]) -> Option<Vec<Range<usize>>> {
    if parent.is_empty() {
        return if units.is_empty() { Some(Vec::new()) } else { None };
    }
    let width = units.len() + 1;
    let mut dead = vec![false; (parent.len() + 1) * width];
    let mut groups = Vec::with_capacity(parent.len());
    if search(parent, units, 0, 0, &mut dead, width, &mut groups) {
        Some(groups)
    } else {
        None
    }
}

fn search(
    parent: &[Token],
    units: &[Unit<'_>],
    pi: usize,
    ui: usize,
    dead: &mut [bool],
    width: usize,
    groups: &mut Vec<Range<usize>>,
) -> bool {
    if pi == parent.len() {
        return ui == units.len();
    }
    if ui == units.len() || dead[pi * width + ui] {
        return false;
    }
    // Not enough units left for the remaining parent tokens.
    if units.len() - ui < parent.len() - pi {
        dead[pi * width + ui] = true;
        return false;
    }
    let ends = group_ends(&parent[pi], units, ui, units.len() - (parent.len() - pi - 1));
    for end in ends.into_iter().rev() {
        groups.push(ui..end);
        if search(parent, units, pi + 1, end, dead, width, groups) {
            return true;
        }
        groups.pop();
    }
    dead[pi * width + ui] = true;
    false
}

/// All `end` such that `units[start..end]` fits under `parent`, ascending.
fn group_ends(parent: &Token, units: &[Unit<'_>], start: usize, max_end: usize) -> Vec<usize> {
    let mut ends = Vec::new();
    match &parent.class {
        TokenClass::Literal(want) => {
            let mut text = String::new();
            for (i, unit) in units.iter().enumerate().take(max_end).skip(start) {
                match unit.text {
                    Some(t) => text.push_str(t),
                    None => break,
                }
                if text.len() > want.len() || !want.starts_with(text.as_str()) {
                    break;
                }
                if text == *want {
                    ends.push(i + 1);
                    break;
                }
            }
        }
        class => {
            let mut sum: u64 = 0;
            let mut open = false;
            for (i, unit) in units.iter().enumerate().take(max_end).skip(start) {
                let child = &unit.token.class;
                if !child.is_generalized_by(class) {
                    break;
                }
                match (&unit.token.quantifier, child) {
                    (_, TokenClass::Literal(s)) => sum += s.chars().count() as u64,
                    (Quantifier::Count(n), _) => sum += u64::from(*n),
                    (Quantifier::Plus, _) => open = true,
                }
                match parent.quantifier {
                    Quantifier::Plus => ends.push(i + 1),
                    Quantifier::Count(n) => {
                        if open || sum > u64::from(n) {
                            break;
                        }
                        if sum == u64::from(n) {
                            ends.push(i + 1);
                        }
                    }
                }
            }
        }
    }
    ends
}

/// Structural coverage: `child`'s tokens split into `parent.len()` groups,
/// each generalized by the matching parent token.
pub fn covers(parent: &Pattern, child: &Pattern) -> bool {
    let units: Vec<Unit<'_>> = child.tokens.iter().map(Unit::of_token).collect();
    partition(&parent.tokens, &units).is_some()
}

/// Apply one of the three generalization strategies and merge adjacent
/// tokens that end up in the same base class.
///
/// 1. natural quantifiers above one become `+`
/// 2. lower and upper become alpha
/// 3. alpha, digit, `-` and `_` become alphanumeric
pub fn generalize(p: &Pattern, strategy: Strategy) -> Pattern {
    let rewritten = p.tokens.iter().map(|t| {
        let mut t = t.clone();
        match strategy {
            Strategy::QuantifierToPlus => {
                if t.is_base() && matches!(t.quantifier, Quantifier::Count(n) if n > 1) {
                    t.quantifier = Quantifier::Plus;
                }
            }
            Strategy::CaseToAlpha => {
                if matches!(t.class, TokenClass::Lower | TokenClass::Upper) {
                    t.class = TokenClass::Alpha;
                }
            }
            Strategy::ToAlphaNumeric => match &t.class {
                TokenClass::Alpha | TokenClass::Digit => t.class = TokenClass::AlphaNumeric,
                TokenClass::Literal(s) if s == "-" || s == "_" => {
                    t.class = TokenClass::AlphaNumeric;
                }
                _ => {}
            },
        }
        t
    });
    Pattern::new(merge_adjacent(rewritten))
}

/// Merge runs of adjacent base tokens with the same class.
pub fn merge_adjacent(tokens: impl IntoIterator<Item = Token>) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    for t in tokens {
        if let Some(last) = out.last_mut() {
            if last.is_base() && last.class == t.class {
                last.quantifier = last.quantifier.merge(t.quantifier);
                continue;
            }
        }
        out.push(t);
    }
    out
}

/// The generalization strategies, applied in this order to build the
/// layers of a pattern hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    QuantifierToPlus,
    CaseToAlpha,
    ToAlphaNumeric,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::QuantifierToPlus,
        Strategy::CaseToAlpha,
        Strategy::ToAlphaNumeric,
    ];

    /// 1-based strategy number.
    pub fn from_number(n: u8) -> Option<Strategy> {
        Strategy::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }
}

pub fn render_pattern(p: &Pattern) -> String {
    let mut out = String::new();
    for t in &p.tokens {
        match &t.class {
            TokenClass::Literal(s) => {
                out.push('\'');
                for c in s.chars() {
                    if c == '\'' || c == '\\' {
                        out.push('\\');
                    }
                    out.push(c);
                }
                out.push('\'');
            }
            class => {
                out.push('<');
                out.push_str(class.tag());
                out.push('>');
                match t.quantifier {
                    Quantifier::Count(1) => {}
                    Quantifier::Count(n) => out.push_str(&n.to_string()),
                    Quantifier::Plus => out.push('+'),
                }
            }
        }
    }
    out
}

pub fn parse_pattern(text: &str) -> Result<Pattern, PatternSyntaxError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    let err = |position: usize, message: &str| PatternSyntaxError {
        position,
        message: message.to_string(),
    };
    while let Some((pos, c)) = chars.next() {
        match c {
            '<' => {
                let mut tag = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((_, c)) if c.is_ascii_uppercase() => tag.push(c),
                        Some((p, _)) => return Err(err(p, "expected class name")),
                        None => return Err(err(text.len(), "unterminated class")),
                    }
                }
                let class = match tag.as_str() {
                    "D" => TokenClass::Digit,
                    "L" => TokenClass::Lower,
                    "U" => TokenClass::Upper,
                    "A" => TokenClass::Alpha,
                    "AN" => TokenClass::AlphaNumeric,
                    _ => return Err(err(pos, "unknown class")),
                };
                let quantifier = match chars.peek() {
                    Some(&(_, '+')) => {
                        chars.next();
                        Quantifier::Plus
                    }
                    Some(&(qpos, d)) if d.is_ascii_digit() => {
                        let mut digits = String::new();
                        while let Some(&(_, d)) = chars.peek() {
                            if !d.is_ascii_digit() {
                                break;
                            }
                            digits.push(d);
                            chars.next();
                        }
                        let n: u32 = digits
                            .parse()
                            .map_err(|_| err(qpos, "quantifier out of range"))?;
                        if n == 0 {
                            return Err(err(qpos, "quantifier must be at least 1"));
                        }
                        Quantifier::Count(n)
                    }
                    _ => Quantifier::Count(1),
                };
                tokens.push(Token::new(class, quantifier));
            }
            '\'' => {
                let mut lit = String::new();
                loop {
                    match chars.next() {
                        Some((_, '\'')) => break,
                        Some((p, '\\')) => match chars.next() {
                            Some((_, c)) => lit.push(c),
                            None => return Err(err(p, "dangling escape")),
                        },
                        Some((_, c)) => lit.push(c),
                        None => return Err(err(text.len(), "unterminated literal")),
                    }
                }
                if lit.is_empty() {
                    return Err(err(pos, "empty literal"));
                }
                tokens.push(Token::literal(lit));
            }
            _ => return Err(err(pos, "expected '<' or '''")),
        }
    }
    if tokens.is_empty() {
        return Err(err(0, "empty pattern"));
    }
    Ok(Pattern::new(tokens))
}

/// Render `p` as an anchored natural-language-like regular expression.
/// Each span (token indices, zero-based, inclusive) becomes a capture group.
pub fn render_regex(p: &Pattern, capture_spans: &[RangeInclusive<usize>]) -> String {
    let mut out = String::from("/^");
    for (i, t) in p.tokens.iter().enumerate() {
        if capture_spans.iter().any(|s| *s.start() == i) {
            out.push('(');
        }
        match &t.class {
            TokenClass::Literal(s) => {
                for c in s.chars() {
                    if c.is_ascii() && !c.is_ascii_alphanumeric() {
                        out.push('\\');
                    }
                    out.push(c);
                }
            }
            class => {
                out.push_str(class.regex_name());
                match t.quantifier {
                    Quantifier::Count(n) => {
                        out.push('{');
                        out.push_str(&n.to_string());
                        out.push('}');
                    }
                    Quantifier::Plus => out.push('+'),
                }
            }
        }
        if capture_spans.iter().any(|s| *s.end() == i) {
            out.push(')');
        }
    }
    out.push_str("$/");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn frequency_examples() {
        let pat = p("'['<U>3'-'<D>5");
        assert_eq!(token_frequency(&TokenClass::Digit, &pat), 5);
        assert_eq!(token_frequency(&TokenClass::Digit, &p("'['<U>3'-'")), 0);
        assert_eq!(token_frequency(&TokenClass::Lower, &p("<D>2")), 0);
        assert_eq!(token_frequency(&TokenClass::Digit, &p("<D>+<D>2")), 3);
    }

    #[test]
    fn covers_examples() {
        let parent = p("<AN>+'@'<AN>+'.'<AN>+");
        let child = p("<U><L>2<D>3'@'<L>5'.'<L>3");
        assert!(parent.covers(&child));
        assert!(child.covers(&child));
        assert!(!p("<D>3").covers(&p("<D>4")));
        assert!(p("<D>+").covers(&p("<D>4")));
        // a group holding a `+` is only covered by a `+` parent
        assert!(!p("<D>3").covers(&p("<D>+")));
        assert!(p("<AN>+").covers(&p("<U>+'-'<D>+")));
        assert!(!p("<AN>+").covers(&p("<U>+'.'<D>+")));
        assert!(p("<A>3").covers(&p("<U><L>2")));
    }

    #[test]
    fn literal_constants_sit_below_their_class() {
        assert!(p("'['<U>+'-'<D>+']'").covers(&p("'[''CPT''-'<D>5']'")));
        assert!(p("<U>3").covers(&p("'CPT'")));
        assert!(!p("<U>4").covers(&p("'CPT'")));
        assert!(!p("'CPT'").covers(&p("<U>3")));
    }

    #[test]
    fn parse_and_render() {
        let pat = p("<U><L>2<D>3'@'<L>5'.'<L>3");
        assert_eq!(pat.tokens.len(), 7);
        assert_eq!(pat.tokens[0], Token::base(TokenClass::Upper, 1));
        assert_eq!(pat.tokens[3], Token::literal("@"));
        assert_eq!(pat.render(), "<U><L>2<D>3'@'<L>5'.'<L>3");
        assert_eq!(p("<D>+").tokens, vec![Token::plus(TokenClass::Digit)]);
        assert_eq!(Pattern::new(vec![Token::literal("Dr.")]).render(), "'Dr.'");
        assert_eq!(p("<AN>+'it\\'s'").render(), "<AN>+'it\\'s'");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = Pattern::parse("<D>0").unwrap_err();
        assert_eq!(e.position, 3);
        assert!(Pattern::parse("").is_err());
        assert!(Pattern::parse("<X>").is_err());
        assert!(Pattern::parse("''").is_err());
        assert!(Pattern::parse("'abc").is_err());
        assert_eq!(Pattern::parse("<D>3x").unwrap_err().position, 4);
    }

    #[test]
    fn regex_rendering() {
        let phone = p("<D>3'-'<D>3'-'<D>4");
        assert_eq!(
            render_regex(&phone, &[0..=0, 2..=2, 4..=4]),
            r"/^({digit}{3})\-({digit}{3})\-({digit}{4})$/"
        );
        assert_eq!(render_regex(&p("<D>3"), &[]), "/^{digit}{3}$/");
        let paren = p("'('<D>3')'<D>3'-'<D>4");
        assert_eq!(
            render_regex(&paren, &[1..=1, 3..=3, 5..=5]),
            r"/^\(({digit}{3})\)({digit}{3})\-({digit}{4})$/"
        );
        assert_eq!(
            render_regex(&p("'['<U>+'-'<D>+"), &[0..=3]),
            r"/^(\[{upper}+\-{digit}+)$/"
        );
    }

    #[test]
    fn generalization_strategies() {
        let leaf = p("<U><L>2<D>3'@'<L>5'.'<L>3");
        let p1 = generalize(&leaf, Strategy::QuantifierToPlus);
        assert_eq!(p1.render(), "<U><L>+<D>+'@'<L>+'.'<L>+");
        let p2 = generalize(&p1, Strategy::CaseToAlpha);
        assert_eq!(p2.render(), "<A>+<D>+'@'<A>+'.'<A>+");
        let p3 = generalize(&p2, Strategy::ToAlphaNumeric);
        assert_eq!(p3.render(), "<AN>+'@'<AN>+'.'<AN>+");
        for s in Strategy::ALL {
            let once = generalize(&leaf, s);
            assert_eq!(generalize(&once, s), once);
            assert!(once.covers(&leaf));
        }
        assert_eq!(generalize(&p("<D>3'-'<D>4"), Strategy::ToAlphaNumeric).render(), "<AN>8");
    }
}
