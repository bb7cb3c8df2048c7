//! Terms, types and contexts, with parsing, printing, substitution and
//! α-equivalence.

mod context;
mod parse;
mod print;
mod subst;
mod term;
mod types;

pub use context::{ContextError, DualContext};
pub use parse::{is_keyword, parse_term, parse_type, pinned_type, ParseError};
pub use print::print_term;
pub use subst::{alpha_eq, fresh_name, substitute, substitute_many, Subst};
pub use term::{Name, Side, Term};
pub use types::Type;
