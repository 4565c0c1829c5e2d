//! Elementary formulas in the language of groups: syntax, a model checker
//! over finite groups, and the normal closure formulas together with the
//! subdirect-irreducibility sentence built from them.

mod ast;
mod build;
mod eval;
mod parse;

pub use ast::{Formula, GroupTerm};
pub use build::{
    build_phi, build_psi, build_si_sentence, closure_disjunct_count, evaluate_si_semantic,
    DEFAULT_MAX_DISJUNCTS,
};
pub use eval::{defined_set, evaluate, ModelChecker};
pub use parse::{parse, parse_term, SyntaxError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FologError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("variable `{0}` is free but has no value")]
    UnboundVariable(String),
    #[error("expected free variables {expected:?}, found {found:?}")]
    WrongFreeVariables {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("value {value} for `{var}` is not an element of a group of order {order}")]
    ElementOutOfRange {
        var: String,
        value: usize,
        order: usize,
    },
    #[error(
        "formula would have {count} disjuncts, over the limit of {limit}; \
         use the semantic evaluator instead"
    )]
    FormulaTooLarge { count: u128, limit: u128 },
}
