//! Library half of the `nau` command-line tool: problem-file parsing,
//! result reports and the command implementations. The binary in
//! `main.rs` only does argument handling around these.

pub mod problem;
pub mod report;
pub mod run;

pub use problem::{parse_pair, ProblemFile};
pub use report::{
    boolean_report, context_report, decode_context, decode_generalization, decode_permutation,
    failure_report, generalization_report, permutation_report, Binding, DecodedGeneralization,
    ResultReport, StoreEntry,
};
pub use run::{
    compute_antiunify, run_alphaeq, run_antiunify, run_equiv, run_fc, run_fresh, run_subsumes,
    Strategy,
};
