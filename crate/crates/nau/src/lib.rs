//! Anti-unification for nominal terms-in-context.
//!
//! Given two terms, a freshness context and a finite set of available
//! atoms, [`antiunify`] computes their least general generalization
//! based on that atom set, unique up to variable renaming and
//! alpha-equivalence. The construction leans on a constructive
//! equivariance check ([`solve_equivariance`]): whether some available
//! permutation of atoms maps one term onto another up to
//! alpha-equivalence under the context.
//!
//! Module map:
//! - [`term`], [`perm`]: the term and permutation data model,
//!   substitutions, atom sets, fresh-name supply;
//! - [`syntax`]: the concrete grammar, parser and printers;
//! - [`alpha`]: derivable freshness `a # t` and alpha-equivalence
//!   `t ~ s`, the minimal-context algorithm [`fc`], context instances;
//! - [`equiv`]: the two-phase equivariance solver;
//! - [`antiunify`](crate::antiunify): the generalization algorithm with
//!   its store and witness substitutions, plus atom-set saturation;
//! - [`subsume`]: the more-general-than order on terms-in-context and
//!   the brute-force oracles the test suites compare against;
//! - [`gen`]: seeded random instance generators.

pub mod alpha;
pub mod antiunify;
pub mod equiv;
pub mod gen;
pub mod perm;
pub mod subsume;
pub mod syntax;
pub mod term;

pub use alpha::{
    alpha_eq, ctx_instance, derives_all, derives_fresh, fc, respects, FreshnessConstraint,
    FreshnessContext, FreshnessFormula,
};
pub use antiunify::{
    antiunify, antiunify_seeded, choose_abs_atom, fresh_atoms_for, is_saturated, merge_step,
    saturate, sol_gamma, Aut, GenResult, NotBasedError,
};
pub use equiv::{
    equation_atoms, solve_equivariance, solve_equivariance_seeded, EquivEquation, EquivFailure,
};
pub use perm::{Permutation, Swapping};
pub use subsume::{
    brute_equivariance, enumerate_generalizations, equi_general, match_terms, subsumes,
    subsumes_exhaustive, term_subsumes, BoundExceeded, TermInContext,
};
pub use syntax::{
    parse_atom_set, parse_context, parse_formulas, parse_permutation, parse_term, ParseError,
    Signature, TermParser,
};
pub use term::{Atom, AtomSet, Measures, NameSupply, NominalTerm, Substitution, VarName};
