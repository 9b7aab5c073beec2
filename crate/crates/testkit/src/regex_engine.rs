//! Reference regex engine: rendered replace operations and patterns
//! compiled to the `regex` crate.

use regex::Regex;
use reshape_core::pattern::{Pattern, Quantifier, TokenClass};
use reshape_core::program::ReplaceOperation;

fn class_set(name: &str) -> &'static str {
    match name {
        "digit" => "[0-9]",
        "lower" => "[a-z]",
        "upper" => "[A-Z]",
        "alpha" => "[a-zA-Z]",
        "alnum" => "[a-zA-Z0-9_\\-]",
        other => panic!("unknown class name {other}"),
    }
}

/// Translate a rendered `/^...$/` expression into `regex` syntax.
pub fn translate(rendered: &str) -> String {
    let body = rendered
        .strip_prefix('/')
        .and_then(|s| s.strip_suffix('/'))
        .expect("rendered regex is wrapped in slashes");
    let mut out = String::new();
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                let next = chars.next().expect("escape is followed by a character");
                out.push_str(&regex::escape(&next.to_string()));
            }
            '{' => {
                let mut name = String::new();
                for d in chars.by_ref() {
                    if d == '}' {
                        break;
                    }
                    name.push(d);
                }
                if name.chars().all(|d| d.is_ascii_digit()) {
                    out.push('{');
                    out.push_str(&name);
                    out.push('}');
                } else {
                    out.push_str(class_set(&name));
                }
            }
            '^' | '$' | '(' | ')' | '+' => out.push(c),
            other => out.push_str(&regex::escape(&other.to_string())),
        }
    }
    out
}

pub fn compile(rendered: &str) -> Regex {
    Regex::new(&translate(rendered)).expect("translated regex compiles")
}

/// Apply a replace operation the way a regex tool would. `None` when the
/// expression does not match.
pub fn apply(op: &ReplaceOperation, input: &str) -> Option<String> {
    let re = compile(&op.match_regex);
    if !re.is_match(input) {
        return None;
    }
    Some(re.replace(input, op.replacement.as_str()).into_owned())
}

/// Character-level regex for `p`, built straight from its tokens.
pub fn pattern_regex(p: &Pattern) -> Regex {
    let mut out = String::from("^");
    for t in &p.tokens {
        let set = match &t.class {
            TokenClass::Literal(s) => {
                out.push_str(&format!("(?:{})", regex::escape(s)));
                continue;
            }
            TokenClass::Digit => "[0-9]",
            TokenClass::Lower => "[a-z]",
            TokenClass::Upper => "[A-Z]",
            TokenClass::Alpha => "[a-zA-Z]",
            TokenClass::AlphaNumeric => "[a-zA-Z0-9_\\-]",
        };
        out.push_str(set);
        match t.quantifier {
            Quantifier::Count(n) => out.push_str(&format!("{{{n}}}")),
            Quantifier::Plus => out.push('+'),
        }
    }
    out.push('$');
    Regex::new(&out).expect("pattern regex compiles")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translates_phone_expression() {
        let t = translate(r"/^\(({digit}{3})\)({digit}{3})\-({digit}{4})$/");
        assert_eq!(t, r"^\(([0-9]{3})\)([0-9]{3})\-([0-9]{4})$");
        let op = ReplaceOperation {
            match_regex: r"/^\(({digit}{3})\)({digit}{3})\-({digit}{4})$/".into(),
            replacement: "($1) $2-$3".into(),
            column: "c".into(),
        };
        assert_eq!(apply(&op, "(734)586-7252").as_deref(), Some("(734) 586-7252"));
        assert_eq!(apply(&op, "734-586-7252"), None);
    }
}
