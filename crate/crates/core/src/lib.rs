//! An interpreter and metatheory workbench for a linear λ-calculus with
//! scalars and sums of proofs.
//!
//! The calculus is intuitionistic linear logic (`1`, `⊤`, `0`, `⊸`, `⊗`, `&`,
//! `⊕`, `!`) whose proof-terms are extended with a sum `t <+> u` and a
//! scalar product `a <.> t` over a commutative semiring. The crate provides:
//!
//! - [`syntax`]: terms, types, parsing, printing, substitution, α-equivalence;
//! - [`semiring`]: exact scalars (trivial, ℕ, ℚ, ℚ(i));
//! - [`typecheck`]: the dual-context judgement `Υ; Γ ⊢ t : A`;
//! - [`reduce`]: the rewrite system, strategies and normal-form classification;
//! - [`encode`]: vectors and matrices as terms, and back;
//! - [`equiv`]: elimination contexts and bounded observational equivalence;
//! - [`denot`]: evaluation into semimodules over the scalars;
//! - [`gen`]: random well-typed terms for property testing;
//! - [`suites`]: the executable metatheory property suites;
//! - [`cli`]: the `oclam` command-line front end.

pub mod cli;
pub mod denot;
pub mod encode;
pub mod equiv;
pub mod gen;
pub mod reduce;
pub mod semiring;
pub mod suites;
pub mod syntax;
pub mod typecheck;

pub use semiring::{Scalar, Semiring};
pub use syntax::{alpha_eq, parse_term, parse_type, print_term, Term, Type};
