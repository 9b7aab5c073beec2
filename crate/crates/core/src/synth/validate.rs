//! Frequency-count screening of candidate source patterns.

use crate::pattern::{generalized_frequency, token_frequency, Pattern, TokenClass};

/// Necessary condition for `p` to be transformable into `target`: for every
/// base class, `p` holds at least as much material that class can be built
/// from as `target` demands. Material counts tokens of the class and of any
/// class below it, so a target `<A>+` is satisfiable from a source `<L>3`.
pub fn validate(p: &Pattern, target: &Pattern) -> bool {
    TokenClass::BASE
        .iter()
        .all(|class| generalized_frequency(class, p) >= token_frequency(class, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let target = p("'['<U>+'-'<D>+']'");
        assert!(validate(&p("'['<U>3'-'<D>5"), &target));
        assert!(!validate(&p("'['<U>3'-'"), &target));
    }

    #[test]
    fn reflexive() {
        for s in ["<D>3", "<U><L>+'@'<AN>+", "'x'"] {
            assert!(validate(&p(s), &p(s)));
        }
    }

    #[test]
    fn counts_specializations() {
        assert!(validate(&p("<L>3"), &p("<A>+")));
        assert!(validate(&p("<D>2'-'<L>"), &p("<AN>4")));
        assert!(!validate(&p("<D>2"), &p("<D>3")));
        assert!(!validate(&p("<A>+"), &p("<L>+")));
    }
}
