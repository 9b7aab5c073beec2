//! Pattern profiling and pattern-to-pattern transformation synthesis for
//! columns of messy strings.
//!
//! Rows are clustered by syntactic [`pattern::Pattern`] into a
//! [`profile::PatternHierarchy`]. Once a target pattern is chosen,
//! [`synth::synthesize`] builds a [`program::Program`] that rewrites every
//! other cluster into the target and explains each branch as a regex
//! replace operation.

pub mod error;
pub mod pattern;
pub mod profile;
pub mod program;
pub mod synth;

pub use error::{EvalError, PatternSyntaxError, RepairError};
pub use pattern::{Pattern, Quantifier, Strategy, Token, TokenClass};
pub use profile::{build_hierarchy, tokenize, PatternHierarchy, TokenizedString};
pub use program::{eval_program, explain, Branch, Plan, Program, ReplaceOperation, RowStatus, StringExpr};
pub use synth::{synthesize, SynthConfig, SynthesisResult};
